from datetime import datetime

import pytest

from stationplan.core import FireRecord, GeoPoint, GridSpec, Role, Station


@pytest.fixture
def grid():
    return GridSpec(origin=GeoPoint(lat=30.0, lng=120.0), cell_size_km=3.0, rows=4, cols=5)


def make_fire(
    fid="F1",
    lat=30.01,
    lng=120.01,
    alarm="2015-03-02T18:40",
    response=10.0,
    station="S-A",
    role=Role.PRIMARY,
):
    return FireRecord(
        id=fid,
        location=GeoPoint(lat=lat, lng=lng),
        alarm_time=datetime.fromisoformat(alarm),
        response_time_min=response,
        responding_station_id=station,
        role=role,
    )


def make_station(sid="S-A", lat=30.0, lng=120.0, commissioned="2010-01-01", staffing=None):
    from datetime import date

    return Station(
        id=sid,
        location=GeoPoint(lat=lat, lng=lng),
        commissioned=date.fromisoformat(commissioned),
        staffing=staffing,
    )
