// Payload types mirroring the stationplan HTTP API. The UI performs no domain
// computation: every number on screen traces back to one of these fields.
export {};
