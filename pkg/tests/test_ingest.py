import io
import random
from datetime import datetime

import numpy as np
import pytest

from conftest import make_fire
from stationplan.core import Role, month_key
from stationplan.ingest import (
    FeatureTable,
    Granularity,
    IngestError,
    parse_features,
    parse_fire_records,
    parse_stations,
    rasterize,
    read_tensor,
    validate_dataset,
    write_tensor,
)

FIRE_HEADER = "id,lat,lng,alarm_time,response_time_min,station_id,role\n"


def fires_csv(rows: list[str]) -> io.StringIO:
    return io.StringIO(FIRE_HEADER + "".join(r + "\n" for r in rows))


def test_parse_three_valid_rows():
    records, rejects = parse_fire_records(
        fires_csv(
            [
                "F1,30.01,120.01,2015-03-02T18:40,12.5,S-A,primary",
                "F2,30.02,120.02,2015-04-11T02:15,7.0,S-B,backup",
                "F3,30.03,120.03,2015-04-12T22:00,9.25,S-A,primary",
            ]
        )
    )
    assert len(records) == 3 and rejects == []
    first = records[0]
    assert first.id == "F1"
    assert first.response_time_min == 12.5
    assert first.alarm_time == datetime(2015, 3, 2, 18, 40)
    assert first.role is Role.PRIMARY
    assert first.responding_station_id == "S-A"


def test_negative_response_time_rejected():
    records, rejects = parse_fire_records(
        fires_csv(["F1,30.0,120.0,2015-03-02T18:40,-1.0,S-A,primary"])
    )
    assert records == []
    assert len(rejects) == 1
    assert rejects[0].reason == "negative response time"
    assert rejects[0].row == 2  # header is physical line 1


def test_malformed_rows_quarantined_not_fatal():
    records, rejects = parse_fire_records(
        fires_csv(
            [
                "F1,30.0,120.0,2015-03-02T18:40,5.0,S-A,primary",
                "F2,91.5,120.0,2015-03-02T18:40,5.0,S-A,primary",  # bad latitude
                "F3,30.0,120.0,not-a-time,5.0,S-A,primary",
                "F4,30.0,120.0,2015-03-02T18:40,5.0,S-A,chief",  # bad role
                ",30.0,120.0,2015-03-02T18:40,5.0,S-A,primary",  # missing id
            ]
        )
    )
    assert [r.id for r in records] == ["F1"]
    assert len(rejects) == 4


def test_missing_required_column_is_fatal():
    source = io.StringIO("id,lat,lng,alarm_time,station_id,role\nF1,30,120,2015-01-01T00:00,S-A,primary\n")
    with pytest.raises(IngestError, match="response_time_min"):
        parse_fire_records(source)


def test_parse_stations_and_optional_staffing():
    source = io.StringIO(
        "id,lat,lng,commissioned,staffing\n"
        "S-A,30.01,120.02,2010-05-01,25\n"
        "S-B,30.05,120.08,2012-11-01,\n"
    )
    stations, rejects = parse_stations(source)
    assert rejects == []
    assert [s.id for s in stations] == ["S-A", "S-B"]
    assert stations[0].staffing == 25
    assert stations[1].staffing is None


def test_parse_stations_without_staffing_column():
    source = io.StringIO("id,lat,lng,commissioned\nS-A,30.01,120.02,2010-05-01\n")
    stations, _ = parse_stations(source)
    assert stations[0].staffing is None


def test_duplicate_station_id_fatal():
    source = io.StringIO(
        "id,lat,lng,commissioned\nS-A,30.01,120.02,2010-05-01\nS-A,30.02,120.03,2011-01-01\n"
    )
    with pytest.raises(IngestError, match="S-A"):
        parse_stations(source)


def test_parse_features_groups_and_validates():
    source = io.StringIO(
        "feature,granularity,cell_i,cell_j,month,value\n"
        "avg_temperature,per_month_global,,,2014-01,4.5\n"
        "avg_temperature,per_month_global,,,2014-02,6.0\n"
        "avg_population_density,per_cell_static,0,1,,850\n"
    )
    tables = parse_features(source)
    assert {t.feature for t in tables} == {"avg_temperature", "avg_population_density"}
    temp = next(t for t in tables if t.feature == "avg_temperature")
    assert temp.granularity is Granularity.PER_MONTH_GLOBAL
    assert temp.rows == {"2014-01": 4.5, "2014-02": 6.0}


def test_duplicate_feature_key_fatal():
    source = io.StringIO(
        "feature,granularity,cell_i,cell_j,month,value\n"
        "avg_temperature,per_month_global,,,2014-01,4.5\n"
        "avg_temperature,per_month_global,,,2014-01,5.5\n"
    )
    with pytest.raises(IngestError, match="duplicate key"):
        parse_features(source)


def test_rasterize_single_fire(grid):
    result = rasterize(
        [make_fire(lat=30.001, lng=120.001, alarm="2014-01-05T10:00")],
        [],
        grid,
        ("2014-01", "2014-03"),
    )
    counts = result.tensor.fire_counts
    assert counts[0, 0, 0] == 1
    assert counts.sum() == 1
    assert result.skipped_out_of_extent == 0


def test_rasterize_empty_records(grid):
    result = rasterize([], [], grid, ("2014-01", "2014-02"))
    assert result.tensor.fire_counts.sum() == 0


def test_rasterize_hand_tally_and_permutation_invariance(grid):
    fires = [
        make_fire("F1", 30.001, 120.001, "2014-01-05T10:00"),
        make_fire("F2", 30.001, 120.001, "2014-01-20T11:00"),
        make_fire("F3", 30.001, 120.001, "2014-02-01T12:00"),
        make_fire("F4", 30.05, 120.09, "2014-02-02T13:00"),
        make_fire("F5", 30.05, 120.09, "2014-02-28T14:00"),
    ]
    result = rasterize(fires, [], grid, ("2014-01", "2014-02"))
    counts = result.tensor.fire_counts

    # Independent brute-force tally.
    from stationplan.core import cell_of

    expected = np.zeros_like(counts)
    months = {"2014-01": 0, "2014-02": 1}
    for f in fires:
        t = months[month_key(f.alarm_time)]
        i, j = cell_of(f.location, grid)
        expected[t, i, j] += 1
    assert np.array_equal(counts, expected)

    shuffled = fires[:]
    random.Random(5).shuffle(shuffled)
    again = rasterize(shuffled, [], grid, ("2014-01", "2014-02"))
    assert np.array_equal(again.tensor.values, result.tensor.values)


def test_rasterize_conservation_with_skips(grid):
    rng = np.random.default_rng(11)
    lat_min, lat_max, lng_min, lng_max = grid.extent()
    fires = []
    for n in range(200):
        inside = rng.random() < 0.8
        lat = float(rng.uniform(lat_min, lat_max)) if inside else lat_max + 0.5
        month = int(rng.integers(1, 5))  # window covers months 1..3 only
        fires.append(
            make_fire(f"F{n}", lat, float(rng.uniform(lng_min, lng_max)), f"2014-0{month}-10T00:00")
        )
    result = rasterize(fires, [], grid, ("2014-01", "2014-03"))
    total = result.tensor.fire_counts.sum()

    from stationplan.core import cell_of

    in_scope = sum(
        1
        for f in fires
        if month_key(f.alarm_time) <= "2014-03" and cell_of(f.location, grid) is not None
    )
    assert total == in_scope
    assert total + result.skipped_out_of_extent + result.skipped_out_of_window == len(fires)


def test_rasterize_feature_broadcast(grid):
    global_table = FeatureTable(
        feature="avg_temperature",
        granularity=Granularity.PER_MONTH_GLOBAL,
        rows={"2014-01": 5.0, "2014-02": 7.5},
    )
    static_table = FeatureTable(
        feature="avg_population_density",
        granularity=Granularity.PER_CELL_STATIC,
        rows={(1, 2): 900.0},
    )
    tensor = rasterize([], [global_table, static_table], grid, ("2014-01", "2014-02")).tensor
    temp = tensor.values[:, tensor.channel_index("avg_temperature")]
    assert np.all(temp[0] == 5.0) and np.all(temp[1] == 7.5)
    pop = tensor.values[:, tensor.channel_index("avg_population_density")]
    assert pop[0, 1, 2] == 900.0 and pop[1, 1, 2] == 900.0
    assert pop.sum() == 1800.0  # everything else defaults to zero


def test_rasterize_unknown_cell_fatal(grid):
    bad = FeatureTable(
        feature="avg_population_density",
        granularity=Granularity.PER_CELL_STATIC,
        rows={(99, 0): 1.0},
    )
    with pytest.raises(IngestError, match="unknown cell"):
        rasterize([], [bad], grid, ("2014-01", "2014-01"))


def test_tensor_roundtrip_bit_exact(tmp_path, grid):
    rng = np.random.default_rng(2)
    fires = [
        make_fire(
            f"F{n}",
            float(rng.uniform(30.0, 30.09)),
            float(rng.uniform(120.0, 120.14)),
            f"2014-0{int(rng.integers(1, 4))}-15T12:00",
        )
        for n in range(60)
    ]
    table = FeatureTable(
        feature="avg_temperature",
        granularity=Granularity.PER_MONTH_GLOBAL,
        rows={"2014-01": 3.125, "2014-02": -1.75, "2014-03": 0.1},
    )
    tensor = rasterize(fires, [table], grid, ("2014-01", "2014-03")).tensor
    path = tmp_path / "demo.stt"
    write_tensor(tensor, path)
    back = read_tensor(path)
    assert back.timestamps == tensor.timestamps
    assert back.channels == tensor.channels
    assert back.grid == tensor.grid
    assert np.array_equal(back.values, tensor.values)

    # Serializing the reread tensor reproduces the same bytes.
    path2 = tmp_path / "demo2.stt"
    write_tensor(back, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_validate_dataset_reports_unknown_station():
    from conftest import make_station

    records = [make_fire(station="ghost")]
    issues = validate_dataset(records, [make_station("S-A")])
    assert any("ghost" in issue for issue in issues)
