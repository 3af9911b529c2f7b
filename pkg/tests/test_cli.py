import json

import numpy as np
import pytest

import _datagen
from stationplan.cli import main
from stationplan.config import load_config
from stationplan.ingest import parse_stations, read_tensor
from stationplan.mobility import boundary, reachability_field


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli-dataset")
    return _datagen.write_dataset(root), root


def run_cli(*args):
    return main([str(a) for a in args])


def test_ingest_writes_readable_tensor(dataset, tmp_path):
    config_path, root = dataset
    out = tmp_path / "tensor.stt"
    rejects = tmp_path / "rejects.json"
    assert run_cli("ingest", "--config", config_path, "--out", out, "--rejects", rejects) == 0
    tensor = read_tensor(out)
    assert "fire_count" in tensor.channels
    assert tensor.fire_counts.sum() > 0
    report = json.loads(rejects.read_text())
    assert report["fire_rejects"] == []


def test_forecast_artifact(dataset, tmp_path):
    config_path, _ = dataset
    out = tmp_path / "sd.json"
    assert run_cli("forecast", "--config", config_path, "--out", out) == 0
    payload = json.loads(out.read_text())
    assert payload["per_t"]
    assert set(payload["per_t"][0]) == {"month", "actual", "predicted", "phi_by_feature"}
    assert len(payload["per_cell"]) == _datagen.GRID.n_cells
    assert set(payload["per_cell"][0]) == {"i", "j", "baseline", "abs_phi_sum"}


def test_reach_geojson_matches_boundary(dataset, tmp_path):
    config_path, _ = dataset
    out = tmp_path / "reach.geojson"
    field_out = tmp_path / "field.stt"
    assert (
        run_cli("reach", "--config", config_path, "--k", 9, "--out", out, "--field", field_out)
        == 0
    )
    feature = json.loads(out.read_text())
    assert feature["type"] == "Feature"

    config = load_config(config_path)
    stations, _ = parse_stations(config.stations_csv)
    field = reachability_field(stations, config.grid, config.travel)
    assert feature["geometry"] == json.loads(json.dumps(boundary(field, 9.0).to_geojson()))

    # The side artifact is the shared tensor serialization of the minute field.
    stored = read_tensor(field_out)
    assert stored.channels == ("min_time_min",)
    assert np.array_equal(stored.values[0, 0], field.min_time_min)


def test_underserved_artifact(dataset, tmp_path):
    config_path, _ = dataset
    out = tmp_path / "under.json"
    assert run_cli("underserved", "--config", config_path, "--k", 6, "--out", out) == 0
    payload = json.loads(out.read_text())
    scores = [c["score"] for c in payload["cells"]]
    assert scores == sorted(scores, reverse=True)


def test_optimize_deterministic_bytes(dataset, tmp_path):
    config_path, root = dataset
    area = root / "area.json"
    out1, out2 = tmp_path / "p1.json", tmp_path / "p2.json"
    args = [
        "optimize", "--config", config_path, "--area", area,
        "--criteria", "ART,MRT", "--k-new", 1,
        "--population", 8, "--generations", 4, "--seed", 7,
    ]
    assert run_cli(*args, "--out", out1) == 0
    assert run_cli(*args, "--out", out2) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert payload["solutions"]
    assert payload["seed"] == 7


def test_simulate_deterministic_and_conserving(dataset, tmp_path):
    config_path, root = dataset
    sol = tmp_path / "sol.json"
    sol.write_text(json.dumps({"solutions": {"sol-1": [[30.05, 120.06]]}}))
    out1, out2 = tmp_path / "s1.json", tmp_path / "s2.json"
    args = ["simulate", "--config", config_path, "--solution", sol, "--bucketing", "quarter"]
    assert run_cli(*args, "--out", out1) == 0
    assert run_cli(*args, "--out", out2) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    for period in payload["reports"]["sol-1"]["periods"]:
        existing = [n for n in period["nodes"] if n["kind"] == "existing"]
        new = [n for n in period["nodes"] if n["kind"] == "new"]
        assert sum(n["before"] for n in existing) == sum(n["after"] for n in existing) + sum(
            n["assigned"] for n in new
        )


def test_cli_errors_are_machine_readable(tmp_path, capsys):
    rc = main(["ingest", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path / "x")])
    assert rc == 1
    err = capsys.readouterr().err
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == "ConfigError"
    assert "message" in payload


def test_cli_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
