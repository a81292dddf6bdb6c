import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fraccurv.ifs import (
    DegenerateGeometryError,
    IteratedFunctionSystem,
    SampleSetId,
    Similarity,
    apply,
    arithmetic_class,
    catalog,
    catalog_names,
    chaos_game,
    format_ifs,
    parse_ifs,
    similarity_dimension,
)

ratios_st = st.lists(st.floats(0.05, 0.95), min_size=2, max_size=8)


@pytest.mark.parametrize(
    "ratios, expected",
    [
        ([0.5] * 3, math.log(3) / math.log(2)),
        ([1 / 3] * 8, math.log(8) / math.log(3)),
        ([1 / 3] * 4, math.log(4) / math.log(3)),
        ([25 / 41, 20 / 41, 16 / 41], 1.5882),
    ],
)
def test_similarity_dimension_known(ratios, expected):
    assert similarity_dimension(ratios) == pytest.approx(expected, abs=1e-4)


@given(ratios_st)
def test_similarity_dimension_solves_moran(ratios):
    s = similarity_dimension(ratios)
    assert abs(sum(r**s for r in ratios) - 1) <= 1e-12


def test_single_map_dimension_is_zero():
    assert similarity_dimension([0.3]) == 0.0


@pytest.mark.parametrize("bad", [[], [0.0, 0.5], [1.0, 0.5], [-0.2]])
def test_similarity_dimension_rejects(bad):
    with pytest.raises(ValueError):
        similarity_dimension(bad)


@pytest.mark.parametrize(
    "ratios, h",
    [
        ([0.5] * 3, math.log(2)),
        ([1 / 3] * 8, math.log(3)),
        ([0.5, 0.25], math.log(2)),
        ([1 / 4, 1 / 8], math.log(2)),
        ([1 / 9, 1 / 27, 1 / 3], math.log(3)),
    ],
)
def test_arithmetic(ratios, h):
    c = arithmetic_class(ratios)
    assert c.arithmetic
    assert c.h == pytest.approx(h, rel=1e-9)


def test_triangle_is_non_arithmetic():
    c = arithmetic_class([25 / 41, 20 / 41, 16 / 41])
    assert not c.arithmetic
    assert str(c) == "non-arithmetic"


@given(st.floats(0.01, 0.99), st.integers(1, 10))
def test_equal_ratios_give_log_step(r, n):
    c = arithmetic_class([r] * (n + 1))
    assert c.h == -math.log(r)


def test_apply_examples():
    assert np.allclose(apply(Similarity(0.5), (2, 0)), (1, 0))
    assert np.allclose(apply(Similarity(0.5, reflected=True), (0, 2)), (0, -1))
    quarter = Similarity(0.5, math.pi / 2, False, (1.0, 0.0))
    assert np.allclose(apply(quarter, (2, 0)), (1, 1))


@given(
    st.floats(0.01, 0.99), st.floats(-7, 7), st.booleans(),
    st.tuples(st.floats(-5, 5), st.floats(-5, 5)),
    st.tuples(st.floats(-5, 5), st.floats(-5, 5)),
)
def test_similarity_contracts_distances(r, theta, refl, p, q):
    f = Similarity(r, theta, refl, (0.3, -0.1))
    d0 = math.dist(p, q)
    d1 = float(np.linalg.norm(apply(f, p) - apply(f, q)))
    assert d1 == pytest.approx(r * d0, rel=1e-9, abs=1e-12)


def test_fixed_point_is_fixed():
    for name in catalog_names():
        for f in catalog(name).maps:
            z = f.fixed_point()
            assert np.allclose(apply(f, z), z, atol=1e-12)


def test_catalog_contents():
    carpet = catalog(SampleSetId.SIERPINSKI_CARPET)
    assert len(carpet.maps) == 8 and set(carpet.ratios) == {1 / 3}
    tri = catalog("triangle")
    assert tri.ratios == pytest.approx([25 / 41, 20 / 41, 16 / 41])
    assert [f.reflected for f in tri.maps] == [False, True, False]
    tree = catalog("tree")
    assert tree.ratios == [0.5] * 3
    rot = sorted(f.rotation for f in tree.maps)
    assert rot == pytest.approx([-math.pi / 2, 0.0, math.pi / 2])


@pytest.mark.parametrize(
    "name, s",
    [("gasket", 1.585), ("carpet", 1.893), ("tree", 1.585), ("cantor", 1.262),
     ("koch", 1.262), ("modcarpet", 1.893), ("tripet", 1.893), ("triangle", 1.588),
     ("sheared-gasket", 1.585)],
)
def test_catalog_dimensions(name, s):
    assert catalog(name).dimension == pytest.approx(s, abs=1e-3)


def test_triangle_maps_fix_the_vertices():
    tri = catalog("triangle")
    verts = np.array([(0, 0), (0.6, 0), (0, 0.8)])
    fixed = [f.fixed_point() for f in tri.maps]
    assert np.allclose(fixed, [verts[1], verts[2], verts[0]], atol=1e-12)
    pieces = [apply(f, verts) for f in tri.maps]
    # every image vertex stays inside the original triangle
    for p in pieces:
        for x, y in p:
            assert x >= -1e-12 and y >= -1e-12 and x / 0.6 + y / 0.8 <= 1 + 1e-12


def test_ifs_text_round_trip():
    for name in catalog_names():
        ifs = catalog(name)
        back = parse_ifs(format_ifs(ifs), name)
        for f, g in zip(ifs.maps, back.maps):
            assert np.allclose(f.linear, g.linear, atol=1e-14)
            assert np.allclose(f.translation, g.translation, atol=1e-14)


@pytest.mark.parametrize("text", ["0.5 0 0 0\n0.5 0 0 1 1\n", "0.5 0 2 0 0\n0.5 0 0 1 1\n", "0.5 0 0 0 0\n"])
def test_parse_ifs_rejects(text):
    with pytest.raises(ValueError):
        parse_ifs(text)


def test_chaos_game_is_deterministic():
    ifs = catalog("gasket")
    a = chaos_game(ifs, 64, 64, seed=3, n_points=20000)
    b = chaos_game(ifs, 64, 64, seed=3, n_points=20000)
    assert np.array_equal(a.image, b.image)


def test_one_plotted_point():
    for name in ("gasket", "triangle", "koch"):
        res = chaos_game(catalog(name), 32, 32, seed=1, n_points=1, burn_in=100)
        assert res.image.sum() == 1


def test_gasket_coverage_stable_across_seeds():
    ifs = catalog("gasket")
    a = chaos_game(ifs, 256, 256, seed=1, n_points=2_000_000).image.sum()
    b = chaos_game(ifs, 256, 256, seed=2, n_points=2_000_000).image.sum()
    assert abs(a - b) <= 0.05 * max(a, b)


def test_frame_touches_margin():
    res = chaos_game(catalog("carpet"), 81, 81, seed=0)
    img = res.image
    rows = np.flatnonzero(img.any(1))
    cols = np.flatnonzero(img.any(0))
    assert rows[0] >= 1 and cols[0] >= 1 and rows[-1] <= 79 and cols[-1] <= 79
    assert cols[-1] - cols[0] >= 77


def test_degenerate_attractor():
    same = IteratedFunctionSystem([Similarity(0.5, 0, False, (1, 1)), Similarity(0.3, 0, False, (1.4, 1.4))])
    with pytest.raises(DegenerateGeometryError):
        chaos_game(same, 32, 32)


@settings(max_examples=20, deadline=None)
@given(st.integers(16, 40), st.integers(16, 40), st.integers(0, 2**32 - 1))
def test_chaos_game_shape_and_nonempty(w, h, seed):
    res = chaos_game(catalog("sheared-gasket"), w, h, seed=seed, n_points=500)
    assert res.image.shape == (h, w)
    assert 0 < res.image.sum() <= 500
