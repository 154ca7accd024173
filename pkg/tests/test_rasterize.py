import itertools

import pytest
from hypothesis import assume, given, strategies as st

from gridfuse.errors import CountMismatch, InvalidSize
from gridfuse.geo import GeoPoint, LocalOffset, meters_to_degrees, offset_to_geo
from gridfuse.rasterize import (
    EVEN,
    ODD,
    TRIVIAL,
    derive_spec,
    expand_corners,
    rasterize,
    rasterize_quantized,
    round_half_away,
)

from oracles import meshgrid_centres

ORIGIN = GeoPoint(0.0, 0.0)


@pytest.mark.parametrize("x, expected", [(2.5, 3), (3.5, 4), (-2.5, -3), (2.4999, 2), (0.5, 1), (0.49, 0)])
def test_round_half_away(x, expected):
    assert round_half_away(x) == expected


@pytest.mark.parametrize(
    "a, r, fields",
    [
        (3000, 500, dict(s=6, g=36, parity=EVEN, i_total=3, i_vir=2, b_real_m=500, b_vir_m=1000)),
        (2500, 500, dict(s=5, g=25, parity=ODD, i_total=4, i_vir=3, b_real_m=500, b_vir_m=500)),
        (400, 500, dict(s=1, g=1, parity=TRIVIAL, i_total=0)),
        (1000, 500, dict(s=2, g=4, parity=EVEN, i_total=1, i_vir=0)),
    ],
)
def test_derive_spec_worked_examples(a, r, fields):
    spec = derive_spec(a, r)
    for name, value in fields.items():
        assert getattr(spec, name) == value, name


@pytest.mark.parametrize("a, r", [(0, 500), (-1, 500), (3000, 0), (3000, -5), (100, 500)])
def test_derive_spec_invalid(a, r):
    with pytest.raises(InvalidSize):
        derive_spec(a, r)


@given(st.floats(1, 1e5), st.floats(1, 5000))
def test_spec_invariants(a, r):
    assume(a / r >= 0.5)
    spec = derive_spec(a, r)
    assert spec.s == round_half_away(a / r)
    assert spec.g == spec.s ** 2
    assert spec.b_real_m == round_half_away(a / spec.s)
    if spec.s == 1:
        assert (spec.parity, spec.i_total) == (TRIVIAL, 0)
    elif spec.s % 2 == 0:
        assert (spec.parity, spec.i_total, spec.b_vir_m) == (EVEN, spec.s // 2, 2 * spec.b_real_m)
    else:
        assert (spec.parity, spec.i_total, spec.b_vir_m) == (ODD, spec.s - 1, spec.b_real_m)
    if spec.i_total >= 1:
        assert spec.i_vir == spec.i_total - 1


def test_expand_corners():
    assert set(expand_corners(LocalOffset(0, 0), 1000)) == {
        LocalOffset(1000, 1000), LocalOffset(1000, -1000), LocalOffset(-1000, 1000), LocalOffset(-1000, -1000)
    }
    assert set(expand_corners(LocalOffset(1000, 1000), 1000)) == {
        LocalOffset(2000, 2000), LocalOffset(2000, 0), LocalOffset(0, 2000), LocalOffset(0, 0)
    }


@pytest.mark.parametrize("b", [1, 7, 500])
def test_adjacent_expansions_share_two_corners(b):
    p = LocalOffset(3, -4)
    for step in (LocalOffset(2 * b, 0), LocalOffset(0, 2 * b)):
        shared = set(expand_corners(p, b)) & set(expand_corners(p + step, b))
        assert len(shared) == 2


def test_rasterize_even_example_counts():
    out = rasterize(ORIGIN, derive_spec(3000, 500))
    assert out.virtual_counts == (4, 9)
    # 4 * (n + 2)^2 with n = 1
    assert len(out) == 36 == 4 * (1 + 2) ** 2


def test_rasterize_odd_example_counts():
    out = rasterize(ORIGIN, derive_spec(2500, 500))
    assert out.virtual_counts == (4, 9, 16)
    # ((n + 1) + 2)^2 with n = 2
    assert len(out) == 25 == ((2 + 1) + 2) ** 2


@pytest.mark.parametrize("center", [ORIGIN, GeoPoint(51.5, -0.12), GeoPoint(-33.9, 151.2)])
def test_trivial_returns_city_center(center):
    out = rasterize(center, derive_spec(400, 500))
    assert out.offsets == [LocalOffset(0, 0)]
    assert out.decoded == [center]


def test_single_iteration_expands_once():
    out = rasterize(ORIGIN, derive_spec(1000, 500))
    assert out.virtual_counts == ()
    assert {(o.dx, o.dy) for o in out.offsets} == {(500, 500), (500, -500), (-500, 500), (-500, -500)}


def test_even_example_matches_meshgrid():
    out = rasterize(ORIGIN, derive_spec(3000, 500))
    assert [(o.dx, o.dy) for o in out.offsets] == meshgrid_centres(6, 500)


@pytest.mark.parametrize("s", range(1, 42))
def test_oracle_equivalence_sweep(s):
    for r, extra in ((500.0, 0.0), (250.0, 110.0), (137.0, -60.0)):
        spec = derive_spec(s * r + extra, r)
        assert spec.s == s
        out = rasterize(GeoPoint(10.0, 20.0), spec)
        assert [(o.dx, o.dy) for o in out.offsets] == meshgrid_centres(s, spec.b_real_m)
        assert len(set(out.offsets)) == spec.g
        if spec.i_total > 1:
            assert out.virtual_counts == tuple((n + 2) ** 2 for n in range(spec.i_vir))
        assert spec.parity == (TRIVIAL if s == 1 else EVEN if s % 2 == 0 else ODD)


def test_decoded_consistent_with_offsets():
    c = GeoPoint(47.37, 8.54)
    out = rasterize(c, derive_spec(4500, 500))
    assert out.decoded == [offset_to_geo(c, o) for o in out.offsets]


def test_canonical_order_and_determinism():
    spec = derive_spec(7000, 1000)
    a = rasterize(GeoPoint(1.0, 2.0), spec)
    b = rasterize(GeoPoint(1.0, 2.0), spec)
    assert a.offsets == b.offsets and a.decoded == b.decoded
    keys = [(o.dy, o.dx) for o in a.offsets]
    assert keys == sorted(keys)


def test_count_mismatch_raised_by_faulty_layers():
    def broken(spec):
        return (), [(0, 0)] * 3

    with pytest.raises(CountMismatch) as info:
        rasterize(ORIGIN, derive_spec(3000, 500), layers=broken)
    assert (info.value.expected, info.value.got) == (36, 3)


def test_csv_output():
    text = rasterize(ORIGIN, derive_spec(1000, 500)).to_csv()
    lines = text.splitlines()
    assert lines[0] == "lat,lon"
    assert len(lines) == 5
    half = 250 / 111320
    assert lines[1] == f"{-half:.7f},{-half:.7f}"


# -- quantised compatibility mode ---------------------------------------------


def test_quantized_four_decimals_matches_integer_path():
    spec = derive_spec(3000, 500)
    exact = rasterize(ORIGIN, spec)
    quant = rasterize_quantized(ORIGIN, spec, decimals=4)
    assert len(quant) == 36
    assert quant.offsets == exact.offsets
    for q, e in zip(quant.decoded, exact.decoded):
        assert (q.lat, q.lon) == (round(e.lat, 4), round(e.lon, 4))


def test_quantized_three_decimals_merges_fine_lattice():
    # spacing 100 m ~ 8.98e-4 deg < 1e-3: thirty centres per axis cannot all
    # land in distinct 3-decimal buckets spread over ~0.026 deg
    spec = derive_spec(3000, 100)
    assert meters_to_degrees(spec.b_real_m, 0.0)[0] < 1e-3
    with pytest.raises(CountMismatch) as info:
        rasterize_quantized(ORIGIN, spec, decimals=3)
    assert info.value.got < spec.g
    assert len(rasterize_quantized(ORIGIN, spec, decimals=4)) == spec.g


@given(
    s=st.integers(1, 9),
    lat=st.floats(-60, 60),
    lon=st.floats(-170, 170),
)
def test_quantized_nine_decimals_tracks_integer_path(s, lat, lon):
    spec = derive_spec(s * 500, 500)
    c = GeoPoint(lat, lon)
    exact = rasterize(c, spec)
    quant = rasterize_quantized(c, spec, decimals=9)
    assert quant.offsets == exact.offsets
    for q, e in zip(quant.decoded, exact.decoded):
        assert abs(q.lat - e.lat) <= 1e-9 and abs(q.lon - e.lon) <= 1e-9


@pytest.mark.parametrize("decimals", [0, 10])
def test_quantized_decimals_range(decimals):
    with pytest.raises(ValueError):
        rasterize_quantized(ORIGIN, derive_spec(3000, 500), decimals)


def test_exhaustive_count_always_s_squared():
    for a, r in itertools.product(range(300, 12001, 700), (100, 250, 500, 1000)):
        if a / r < 0.5:
            continue
        spec = derive_spec(a, r)
        assert len(rasterize(ORIGIN, spec)) == spec.s ** 2
