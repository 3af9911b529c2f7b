// A renderer-agnostic scene graph: views are pure functions from API payloads
// to these nodes, which makes every visual encoding assertable in node tests.
// The browser mounter in render/svg.ts is the only DOM-aware code.

export interface NodeBase {
  cls?: string;
  /** Source payload values this mark encodes, for traceability and tests. */
  data?: Record<string, unknown>;
  title?: string;
}

export interface RectNode extends NodeBase {
  kind: "rect";
  x: number;
  y: number;
  width: number;
  height: number;
  fill?: string;
}

export interface CircleNode extends NodeBase {
  kind: "circle";
  cx: number;
  cy: number;
  r: number;
  fill?: string;
  stroke?: string;
}

export interface LineNode extends NodeBase {
  kind: "line";
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  stroke?: string;
  width?: number;
  dash?: string;
}

export interface PolylineNode extends NodeBase {
  kind: "polyline";
  points: [number, number][];
  stroke?: string;
  width?: number;
  dash?: string;
  fill?: string;
  closed?: boolean;
}

export interface PathNode extends NodeBase {
  kind: "path";
  d: string;
  fill?: string;
  stroke?: string;
}

export interface TextNode extends NodeBase {
  kind: "text";
  x: number;
  y: number;
  text: string;
  anchor?: "start" | "middle" | "end";
  size?: number;
}

export interface GroupNode extends NodeBase {
  kind: "group";
  children: SceneNode[];
  translate?: [number, number];
}

export type SceneNode =
  | RectNode
  | CircleNode
  | LineNode
  | PolylineNode
  | PathNode
  | TextNode
  | GroupNode;

export function group(
  children: SceneNode[],
  extra: Omit<Partial<GroupNode>, "kind" | "children"> = {},
): GroupNode {
  return { kind: "group", children, ...extra };
}

export function findAll(root: SceneNode, cls: string): SceneNode[] {
  const out: SceneNode[] = [];
  const walk = (node: SceneNode) => {
    if (node.cls && node.cls.split(/\s+/).includes(cls)) out.push(node);
    if (node.kind === "group") node.children.forEach(walk);
  };
  walk(root);
  return out;
}

export function findOne(root: SceneNode, cls: string): SceneNode {
  const all = findAll(root, cls);
  if (all.length !== 1) throw new Error(`expected one .${cls}, found ${all.length}`);
  return all[0];
}

/** Absolute translation of a node (its own translate included) under
 * possibly nested groups. */
export function absoluteOffset(root: SceneNode, target: SceneNode): [number, number] {
  let found: [number, number] | null = null;
  const walk = (node: SceneNode, dx: number, dy: number) => {
    const [tx, ty] =
      node.kind === "group" && node.translate ? node.translate : ([0, 0] as [number, number]);
    if (node === target) {
      found = [dx + tx, dy + ty];
      return;
    }
    if (node.kind === "group") {
      node.children.forEach((c) => walk(c, dx + tx, dy + ty));
    }
  };
  walk(root, 0, 0);
  if (!found) throw new Error("node not found in scene");
  return found;
}
