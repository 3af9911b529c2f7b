import time

import pytest
from fastapi.testclient import TestClient

import _datagen
from stationplan import analytics
from stationplan.config import load_config
from stationplan.mobility import boundary
from stationplan.service import AppState, create_app


@pytest.fixture(scope="module")
def state(tmp_path_factory):
    config_path = _datagen.write_dataset(tmp_path_factory.mktemp("dataset"))
    return AppState(load_config(config_path))


@pytest.fixture(scope="module")
def client(state):
    return TestClient(create_app(state))


def wait_for_job(client, job_id, timeout=120.0):
    deadline = time.time() + timeout
    last = None
    while time.time() < deadline:
        last = client.get(f"/api/jobs/{job_id}").json()
        if last["state"] in ("done", "failed"):
            return last
        time.sleep(0.05)
    raise AssertionError(f"job did not finish: {last}")


def test_yearly_is_passthrough_of_analytics(client, state):
    expected = {str(y): n for y, n in analytics.yearly_counts(state.records).items()}
    assert client.get("/api/stats/yearly").json() == expected


def test_station_table_row_count(client, state):
    payload = client.get("/api/stats/stations").json()
    assert len(payload["stations"]) == len(state.stations)
    row = payload["stations"][0]
    assert row["actions"]["total"] == row["actions"]["primary"] + row["actions"]["backup"]


def test_sd_series_shape(client, state):
    payload = client.get("/api/sd-series").json()
    assert len(payload["series"]) == len(state.tensor.timestamps) - 1
    assert set(payload["features"]) == set(state.frame.features)
    assert payload["response_distribution"]
    years = [d.year for d in state.distribution]
    assert [d["year"] for d in payload["response_distribution"]] == years


def test_grid_month_payload(client, state):
    month = state.tensor.timestamps[3]
    payload = client.get("/api/grid", params={"month": month}).json()
    grid = state.config.grid
    assert len(payload["cells"]) == grid.n_cells
    total = sum(c["fire_count"] for c in payload["cells"])
    assert total == float(state.tensor.fire_counts[3].sum())
    assert all("phi" in c and "abs_phi_sum" in c for c in payload["cells"])
    assert client.get("/api/grid", params={"month": "1999-01"}).status_code == 404


def test_reachability_matches_library(client, state):
    response = client.get("/api/reachability", params={"k": 9})
    payload = response.json()
    field = state.field(9.0)
    assert payload["boundaries"] == boundary(field, 9.0).to_geojson()
    assert payload["reachable_cells"] == int(field.reachable_mask(9.0).sum())
    assert client.get("/api/reachability", params={"k": -1}).status_code == 422


def test_underserved_endpoint(client):
    payload = client.get("/api/underserved", params={"k": 6}).json()
    scores = [c["score"] for c in payload["cells"]]
    assert scores == sorted(scores, reverse=True)


def test_station_profile_endpoint(client, state):
    sid = state.stations[0].id
    payload = client.get(f"/api/station/{sid}/profile", params={"k": 9}).json()
    expected = analytics.station_profile(state.records, state.stations[0], 9.0)
    assert payload["total_actions"] == expected.total_actions
    assert payload["directions"] == list(expected.direction_counts)
    assert client.get("/api/station/nope/profile").status_code == 404


def test_optimize_validation_422(client):
    body = {
        "area": {"polygon": [[30.01, 120.01], [30.01, 120.1], [30.08, 120.1], [30.08, 120.01]]},
        "criteria": ["ART"],
        "k_new": 1,
        "ga": {"population": 13, "generations": 5},
        "seed": 1,
    }
    assert client.post("/api/optimize", json=body).status_code == 422  # odd population

    body["ga"] = {"population": 8, "generations": 5}
    body["criteria"] = ["ART", "BOGUS"]
    assert client.post("/api/optimize", json=body).status_code == 422

    body["criteria"] = ["ART"]
    body["area"] = {}
    assert client.post("/api/optimize", json=body).status_code == 422


def _optimize_body(seed):
    return {
        "area": {
            "polygon": [[30.01, 120.01], [30.01, 120.1], [30.08, 120.1], [30.08, 120.01]]
        },
        "criteria": ["ART", "MRT"],
        "k_new": 1,
        "ga": {"population": 8, "generations": 4},
        "seed": seed,
    }


def test_optimize_job_lifecycle_and_determinism(client):
    first = client.post("/api/optimize", json=_optimize_body(21)).json()
    assert first["state"] in ("queued", "running")
    done = wait_for_job(client, first["id"])
    assert done["state"] == "done"
    assert done["progress"] == 1.0
    pareto1 = client.get(f"/api/solutions/{first['id']}/pareto").json()
    assert pareto1["solutions"]

    second = client.post("/api/optimize", json=_optimize_body(21)).json()
    wait_for_job(client, second["id"])
    pareto2 = client.get(f"/api/solutions/{second['id']}/pareto").json()
    assert pareto1 == pareto2


def test_reads_available_while_job_runs(client):
    job = client.post("/api/optimize", json=_optimize_body(33)).json()
    response = client.get("/api/stats/yearly")
    assert response.status_code == 200
    wait_for_job(client, job["id"])


def test_pareto_for_pending_or_unknown_job(client):
    assert client.get("/api/solutions/doesnotexist/pareto").status_code == 404
    assert client.get("/api/jobs/doesnotexist").status_code == 404


def test_simulate_job_and_conservation(client, state):
    pareto_job = client.post("/api/optimize", json=_optimize_body(5)).json()
    wait_for_job(client, pareto_job["id"])
    pareto = client.get(f"/api/solutions/{pareto_job['id']}/pareto").json()
    genome = pareto["solutions"][0]["genome"]

    job = client.post(
        "/api/simulate",
        json={"solutions": {"sol-1": genome}, "bucketing": "quarter"},
    ).json()
    done = wait_for_job(client, job["id"])
    assert done["state"] == "done"
    report = done["result"]["reports"]["sol-1"]
    for period in report["periods"]:
        existing = [n for n in period["nodes"] if n["kind"] == "existing"]
        new = [n for n in period["nodes"] if n["kind"] == "new"]
        before = sum(n["before"] for n in existing)
        after = sum(n["after"] for n in existing)
        assigned = sum(n["assigned"] for n in new)
        assert before == after + assigned
        assert all(n["after"] <= n["before"] for n in existing)
    comparison = done["result"]["comparison"]
    assert comparison["periods"]

    assert client.post(
        "/api/simulate", json={"solutions": {}, "bucketing": "quarter"}
    ).status_code == 422
    assert client.post(
        "/api/simulate", json={"solutions": {"s": [[30.0, 120.0]]}, "bucketing": "decade"}
    ).status_code == 422


def test_evaluate_endpoint(client):
    body = {
        "genome": [[30.05, 120.05]],
        "criteria": ["ART", "SO"],
        "k": 9.0,
    }
    payload = client.post("/api/evaluate", json=body).json()
    assert set(payload["objectives"]) == {"ART", "SO"}
    assert payload["objectives"]["ART"] >= 0.0
    assert 0.0 <= payload["objectives"]["SO"] <= 1.0

    body["criteria"] = ["NOPE"]
    assert client.post("/api/evaluate", json=body).status_code == 422


def test_health_endpoint(client, state):
    payload = client.get("/api/health").json()
    assert payload["records"] == len(state.records)
    assert payload["stations"] == len(state.stations)
