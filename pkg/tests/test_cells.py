"""Complex construction, incidence algebra, and the builder sign rules."""

import pytest
from hypothesis import given, strategies as st

from zzmorse.cells import (
    Complex,
    build_cubical,
    build_simplicial,
    chain_addmul,
    field_inv,
    full_triangle,
)
from zzmorse.errors import (
    BrokenBoundary,
    EmptyDims,
    MissingFace,
    MissingFacet,
    NotMaximal,
    UnknownCell,
    ZeroInverse,
)


def test_field_inv_small_values():
    assert field_inv(1, 7) == 1
    assert field_inv(2, 5) == 3
    assert field_inv(4, 7) == 2


def test_field_inv_zero_raises():
    with pytest.raises(ZeroInverse):
        field_inv(0, 5)
    with pytest.raises(ZeroInverse):
        field_inv(10, 5)


@given(st.integers(1, 30), st.sampled_from([2, 3, 5, 7, 31]))
def test_field_inv_is_inverse(a, p):
    if a % p == 0:
        a += 1
    assert (a * field_inv(a, p)) % p == 1


def test_chain_addmul_cancels():
    c = {1: 1, 2: 4}
    chain_addmul(c, {2: 1, 3: 2}, 1, 5)
    assert c == {1: 1, 3: 2}


def test_insert_vertex_and_edge():
    cx = Complex(p=2)
    v1 = cx.insert_cell(0, {})
    v3 = cx.insert_cell(0, {})
    e13 = cx.insert_cell(1, {v1: 1, v3: 1})
    assert cx.boundary(e13) == {v1: 1, v3: 1}
    assert cx.coboundary(v1) == {e13: 1}
    assert cx.boundary(v1) == {}
    cx.check_mirrors()
    cx.check_dd_zero()


def test_insert_missing_facet():
    cx = Complex()
    with pytest.raises(MissingFacet):
        cx.insert_cell(1, {99: 1})


def test_insert_wrong_dim_facet():
    cx = Complex()
    v = cx.insert_cell(0, {})
    with pytest.raises(MissingFacet):
        cx.insert_cell(2, {v: 1})


def test_broken_boundary_detected_in_validate_mode():
    # boundary e12 + e23 over p=2 is not a cycle: its boundary is v1 + v3
    cx = Complex(p=2, validate=True)
    v1 = cx.insert_cell(0, {})
    v2 = cx.insert_cell(0, {})
    v3 = cx.insert_cell(0, {})
    e12 = cx.insert_cell(1, {v1: 1, v2: 1})
    e23 = cx.insert_cell(1, {v2: 1, v3: 1})
    with pytest.raises(BrokenBoundary):
        cx.insert_cell(2, {e12: 1, e23: 1})


def test_remove_cell_rules():
    cx = full_triangle()
    t = cx.simplex_ids[(1, 2, 3)]
    e13 = cx.simplex_ids[(1, 3)]
    with pytest.raises(NotMaximal):
        cx.remove_cell(e13)
    cx.remove_cell(t)
    assert len(cx) == 6
    cx.remove_cell(e13)  # now maximal
    with pytest.raises(UnknownCell):
        cx.remove_cell(t)
    cx.check_mirrors()


def test_remove_from_empty():
    with pytest.raises(UnknownCell):
        Complex().remove_cell(0)


def test_cellids_strictly_increase_and_never_reused():
    cx = Complex()
    a = cx.insert_cell(0, {})
    b = cx.insert_cell(0, {})
    cx.remove_cell(b)
    c = cx.insert_cell(0, {})
    assert a < b < c


def test_build_simplicial_signs():
    cx = build_simplicial([(1,), (2,), (1, 2)], p=5)
    ids = cx.simplex_ids
    assert len(cx) == 3
    # omitting vertex 1 (j=0) leaves (2,) with +1; omitting 2 (j=1) gives -1
    assert cx.boundary(ids[(1, 2)]) == {ids[(2,)]: 1, ids[(1,)]: 4}


def test_build_simplicial_full_triangle_dd_zero():
    for p in (2, 3, 5):
        cx = full_triangle(p)
        assert len(cx) == 7
        cx.check_dd_zero()
        cx.check_mirrors()


def test_build_simplicial_missing_face():
    with pytest.raises(MissingFace):
        build_simplicial([(1, 2)])


def test_build_cubical_counts():
    cx = build_cubical((2, 1, 1))
    assert sorted(cx.dims.values()) == [0, 0, 1]
    cx = build_cubical((2, 2, 1))
    dims = sorted(cx.dims.values())
    assert dims.count(0) == 4 and dims.count(1) == 4 and dims.count(2) == 1
    cx.check_dd_zero()
    assert len(build_cubical((1, 1, 1))) == 1


def test_build_cubical_dd_zero_3d():
    for p in (2, 5):
        cx = build_cubical((2, 2, 2), p=p)
        assert len(cx) == 27
        cx.check_dd_zero()
        cx.check_mirrors()


def test_build_cubical_empty_dims():
    with pytest.raises(EmptyDims):
        build_cubical((0, 1, 1))


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_cubical_cell_count(nx, ny, nz):
    cx = build_cubical((nx, ny, nz))
    assert len(cx) == (2 * nx - 1) * (2 * ny - 1) * (2 * nz - 1)
