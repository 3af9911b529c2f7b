import math

import numpy as np
import pytest

from stationplan.core import (
    KM_PER_DEG_LAT,
    GeoPoint,
    GridSpec,
    SpatioTemporalTensor,
    cell_center,
    cell_of,
    haversine_km,
    month_range,
    project_km,
    unproject_km,
)


def test_geopoint_bounds():
    with pytest.raises(ValueError):
        GeoPoint(lat=91.0, lng=0.0)
    with pytest.raises(ValueError):
        GeoPoint(lat=0.0, lng=-181.0)
    GeoPoint(lat=-90.0, lng=180.0)  # boundary values are legal


def test_gridspec_invariants():
    origin = GeoPoint(lat=30.0, lng=120.0)
    with pytest.raises(ValueError):
        GridSpec(origin=origin, cell_size_km=0.0, rows=1, cols=1)
    with pytest.raises(ValueError):
        GridSpec(origin=origin, cell_size_km=1.0, rows=0, cols=1)


def test_cell_of_origin_is_southwest_cell(grid):
    assert cell_of(grid.origin, grid) == (0, 0)


def test_cell_of_outside_extent(grid):
    north = unproject_km(1.0, grid.rows * grid.cell_size_km + 0.5, grid)
    assert cell_of(north, grid) is None


def test_cell_of_displaced_point():
    grid = GridSpec(origin=GeoPoint(lat=30.0, lng=120.0), cell_size_km=3.0, rows=2, cols=2)
    p = unproject_km(4.0, 1.0, grid)  # 4 km east, 1 km north of origin
    assert cell_of(p, grid) == (0, 1)


def test_cell_center_1x1_2km():
    grid = GridSpec(origin=GeoPoint(lat=30.0, lng=120.0), cell_size_km=2.0, rows=1, cols=1)
    center = cell_center(0, 0, grid)
    east, north = project_km(center, grid)
    assert east == pytest.approx(1.0, abs=1e-9)
    assert north == pytest.approx(1.0, abs=1e-9)


def test_cell_center_out_of_bounds(grid):
    with pytest.raises(IndexError):
        cell_center(grid.rows, 0, grid)


def test_roundtrip_identity_city_scale_grid():
    grid = GridSpec(origin=GeoPoint(lat=30.0, lng=120.0), cell_size_km=3.0, rows=87, cols=50)
    for i in range(grid.rows):
        for j in range(grid.cols):
            assert cell_of(cell_center(i, j, grid), grid) == (i, j)


def test_adjacent_column_centers_differ_by_cell_size(grid):
    a = cell_center(1, 1, grid)
    b = cell_center(1, 2, grid)
    east_a, _ = project_km(a, grid)
    east_b, _ = project_km(b, grid)
    assert east_b - east_a == pytest.approx(grid.cell_size_km, abs=1e-12)


def test_shared_edge_belongs_to_one_cell():
    # Exact construction: at origin latitude 0 the lng scale is exactly
    # KM_PER_DEG_LAT, and power-of-two degree offsets make the projected
    # easting land bit-exactly on the cell boundary. The east edge of (0, 0)
    # is the west edge of (0, 1); half-open intervals assign it to (0, 1).
    cell = (2.0**-10) * KM_PER_DEG_LAT
    grid = GridSpec(origin=GeoPoint(lat=0.0, lng=0.0), cell_size_km=cell, rows=2, cols=2)
    edge = GeoPoint(lat=2.0**-11, lng=2.0**-10)
    east, north = project_km(edge, grid)
    assert east == cell  # genuinely on the shared edge
    assert cell_of(edge, grid) == (0, 1)


def test_cell_of_total_near_edges(grid):
    # Every point maps to exactly one cell or to None, including points jittered
    # around interior edges.
    rng = np.random.default_rng(3)
    lat_min, lat_max, lng_min, lng_max = grid.extent()
    for _ in range(500):
        p = GeoPoint(
            lat=float(rng.uniform(lat_min - 1e-4, lat_max + 1e-4)),
            lng=float(rng.uniform(lng_min - 1e-4, lng_max + 1e-4)),
        )
        got = cell_of(p, grid)
        east, north = project_km(p, grid)
        i, j = math.floor(north / grid.cell_size_km), math.floor(east / grid.cell_size_km)
        expected = (i, j) if 0 <= i < grid.rows and 0 <= j < grid.cols else None
        assert got == expected


def test_haversine_symmetric_and_zero():
    a = GeoPoint(lat=30.0, lng=120.0)
    b = GeoPoint(lat=30.3, lng=120.4)
    assert haversine_km(a, a) == 0.0
    assert haversine_km(a, b) == haversine_km(b, a)


def test_month_range_inclusive():
    assert month_range("2014-11", "2015-02") == ["2014-11", "2014-12", "2015-01", "2015-02"]
    with pytest.raises(ValueError):
        month_range("2015-02", "2014-11")


def test_tensor_shape_validation(grid):
    with pytest.raises(ValueError):
        SpatioTemporalTensor(
            grid=grid,
            timestamps=("2014-01",),
            channels=("fire_count",),
            values=np.zeros((1, 1, 2, 2)),
        )


def test_tensor_rejects_gap_months(grid):
    with pytest.raises(ValueError):
        SpatioTemporalTensor(
            grid=grid,
            timestamps=("2014-01", "2014-03"),
            channels=("fire_count",),
            values=np.zeros((2, 1, grid.rows, grid.cols)),
        )


def test_tensor_rejects_fractional_fire_counts(grid):
    values = np.zeros((1, 1, grid.rows, grid.cols))
    values[0, 0, 0, 0] = 0.5
    with pytest.raises(ValueError):
        SpatioTemporalTensor(
            grid=grid, timestamps=("2014-01",), channels=("fire_count",), values=values
        )


def test_tensor_values_readonly(grid):
    tensor = SpatioTemporalTensor(
        grid=grid,
        timestamps=("2014-01",),
        channels=("fire_count",),
        values=np.zeros((1, 1, grid.rows, grid.cols)),
    )
    with pytest.raises(ValueError):
        tensor.values[0, 0, 0, 0] = 1.0
