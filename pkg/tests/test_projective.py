"""Projective plane primitives: canonical forms, incidence, group lifts."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import chordal, conjugator, make_rng, psl_dist_matrices
from kleinian import (
    CoincidentLinesError,
    CoincidentPointsError,
    GroupElement,
    NotInvertibleError,
    ZeroVectorError,
    apply_line,
    apply_point,
    chordal_dist,
    cofactor_matrix,
    compose,
    count_general_position,
    general_position3,
    identity_element,
    incidence_residual,
    incident,
    inverse,
    line_through,
    make_element,
    meet,
    normalize_line,
    normalize_point,
    psl_distance,
    unit_canonical,
)

complex_coord = st.complex_numbers(
    min_magnitude=0, max_magnitude=1e6, allow_nan=False, allow_infinity=False
)


def nonzero_triples():
    return st.tuples(complex_coord, complex_coord, complex_coord).filter(
        lambda t: max(abs(c) for c in t) > 1e-6
    )


@given(nonzero_triples())
def test_unit_canonical_idempotent_bitwise(t):
    """Canonicalising twice returns the identical array, bit for bit."""
    v = unit_canonical(np.array(t, dtype=complex))
    w = unit_canonical(v)
    assert v.tobytes() == w.tobytes()


@given(nonzero_triples(), st.integers(0, 359))
def test_scaling_invariance(t, deg):
    """Points equal up to a complex scalar have chordal distance ~0.

    sqrt(1 - |<a,b>|^2) cannot resolve below sqrt(2 eps) ~ 2e-8, so that is
    the floor for scale-invariance in floats.
    """
    v = np.array(t, dtype=complex)
    scale = 3.7 * np.exp(1j * np.deg2rad(deg))
    p, q = normalize_point(v), normalize_point(scale * v)
    assert chordal_dist(p, q) < 5e-8


def test_zero_vector_rejected():
    with pytest.raises(ZeroVectorError):
        normalize_point([0, 0, 0])
    with pytest.raises(ZeroVectorError):
        normalize_line(np.zeros(3))


def test_chordal_range_and_extremes():
    e1 = normalize_point([1, 0, 0])
    e2 = normalize_point([0, 1, 0])
    assert chordal_dist(e1, e2) == pytest.approx(1.0)
    assert chordal_dist(e1, e1) == 0.0
    p = normalize_point([1, 1j, 0])
    assert 0.0 <= chordal_dist(p, e2) <= 1.0


def test_line_through_coordinate_points():
    l = line_through(normalize_point([1, 0, 0]), normalize_point([0, 1, 0]))
    assert chordal(l, [0, 0, 1]) < 1e-15


def test_meet_of_coordinate_lines():
    p = meet(normalize_line([1, 0, 0]), normalize_line([0, 1, 0]))
    assert chordal(p, [0, 0, 1]) < 1e-15


def test_line_through_coincident_points_rejected():
    p = normalize_point([1, 2j, 3])
    q = normalize_point([2, 4j, 6])
    with pytest.raises(CoincidentPointsError):
        line_through(p, q)


def test_meet_of_coincident_lines_rejected():
    l = normalize_line([1, 1, 1])
    m = normalize_line([-1j, -1j, -1j])
    with pytest.raises(CoincidentLinesError):
        meet(l, m)


def test_duality_roundtrip(rng):
    """The join of two points is incident with both; same for meets."""
    for _ in range(200):
        a = rng.normal(size=3) + 1j * rng.normal(size=3)
        b = rng.normal(size=3) + 1j * rng.normal(size=3)
        p, q = normalize_point(a), normalize_point(b)
        if chordal_dist(p, q) < 1e-3:
            continue
        l = line_through(p, q)
        assert incidence_residual(p, l) < 1e-12
        assert incidence_residual(q, l) < 1e-12
        assert incident(p, l) and incident(q, l)
        l2 = normalize_line(rng.normal(size=3) + 1j * rng.normal(size=3))
        if chordal_dist(l, l2) > 1e-3:
            x = meet(l, l2)
            assert incidence_residual(x, l) < 1e-12
            assert incidence_residual(x, l2) < 1e-12


def test_incidence_is_bilinear_not_hermitian():
    """[1:i:0] pairs to zero with dual [-i:1:0]; the hermitian form would
    pick [i:1:0] instead."""
    p = normalize_point([1, 1j, 0])
    assert incident(p, normalize_line([-1j, 1, 0]))
    assert not incident(p, normalize_line([1j, 1, 0]))


CYCLE = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)


def test_point_image_under_coordinate_cycle():
    g = make_element(CYCLE)
    img = apply_point(g, normalize_point([1, 0, 0]))
    assert chordal(img, [0, 1, 0]) < 1e-12


def test_line_image_under_coordinate_cycle():
    """The cycle e1->e2->e3 maps the line z3=0 onto z1=0."""
    g = make_element(CYCLE)
    img = apply_line(g, normalize_line([0, 0, 1]))
    assert chordal(img, [1, 0, 0]) < 1e-12


def test_line_image_matches_point_images(rng):
    """apply_line agrees with transporting two spanning points."""
    for _ in range(100):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        g = make_element(m)
        a = normalize_point(rng.normal(size=3) + 1j * rng.normal(size=3))
        b = normalize_point(rng.normal(size=3) + 1j * rng.normal(size=3))
        if chordal_dist(a, b) < 1e-3:
            continue
        l = line_through(a, b)
        li = apply_line(g, l)
        assert incidence_residual(apply_point(g, a), li) < 1e-9
        assert incidence_residual(apply_point(g, b), li) < 1e-9


def test_incidence_preserved_under_action(rng):
    for _ in range(100):
        h = conjugator(rng)
        g = make_element(h)
        p = normalize_point(rng.normal(size=3) + 1j * rng.normal(size=3))
        q = normalize_point(rng.normal(size=3) + 1j * rng.normal(size=3))
        if chordal_dist(p, q) < 1e-3:
            continue
        l = line_through(p, q)
        assert incidence_residual(apply_point(g, p), apply_line(g, l)) < 1e-10


def test_cofactor_identity(rng):
    """cof(m) m^T = det(m) I for random matrices."""
    for _ in range(100):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        lhs = cofactor_matrix(m) @ m.T
        rhs = np.linalg.det(m) * np.eye(3)
        assert np.abs(lhs - rhs).max() < 1e-10 * max(1.0, np.abs(lhs).max())


def test_make_element_unit_determinant(rng):
    for _ in range(50):
        m = 5.0 * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        g = make_element(m)
        assert abs(np.linalg.det(g.matrix) - 1.0) < 1e-10


def test_make_element_canonical_among_cube_roots(rng):
    """All three unit-determinant lifts canonicalise to the same array."""
    omega = np.exp(2j * np.pi / 3)
    for _ in range(50):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        g = make_element(m)
        for root in (1.0, omega, omega ** 2):
            h = make_element(root * m)
            assert np.abs(g.matrix - h.matrix).max() < 1e-12


def test_singular_matrix_rejected():
    with pytest.raises(NotInvertibleError):
        make_element(np.diag([1.0, 1.0, 0.0]))


def test_group_element_immutable():
    g = make_element(np.eye(3))
    with pytest.raises(ValueError):
        g.matrix[0, 0] = 5.0


def test_compose_is_matrix_product(rng):
    for _ in range(60):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        g, h = make_element(a), make_element(b)
        assert psl_dist_matrices(compose(g, h), a @ b) < 1e-9


def test_inverse_composes_to_identity(rng):
    for _ in range(60):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        g = make_element(m)
        gi = inverse(g)
        assert psl_distance(compose(g, gi).matrix, np.eye(3)) < 1e-9
        assert psl_distance(compose(gi, g).matrix, np.eye(3)) < 1e-9


def test_word_bookkeeping():
    g = make_element(np.diag([0.5, 1.0, 2.0]), word=(1,))
    h = make_element(CYCLE, word=(2,))
    gh = compose(g, h)
    assert gh.word == (1, 2)
    assert inverse(gh).word == (-2, -1)
    assert compose(g, inverse(g)).word == ()
    assert identity_element().word == ()


def test_psl_distance_kills_cube_roots(rng):
    omega = np.exp(2j * np.pi / 3)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert psl_distance(m, omega * m) < 1e-14
    assert psl_distance(m, omega ** 2 * m) < 1e-14


def test_psl_distance_separates_distinct_elements():
    a = make_element(np.eye(3)).matrix
    b = make_element(CYCLE).matrix
    assert psl_distance(a, b) > 0.5


def test_general_position_triple():
    e = [normalize_line(v) for v in np.eye(3)]
    assert general_position3(*e)


def test_concurrent_triple_fails_general_position():
    """Three lines through [1:0:0] are concurrent, never in general position."""
    duals = [[0, 1, 0], [0, 0, 1], [0, 1, 1]]
    ls = [normalize_line(v) for v in duals]
    assert not general_position3(*ls)


def test_count_general_position_k4():
    e = [normalize_line(v) for v in np.eye(3)]
    assert count_general_position(e, 3)
    assert not count_general_position(e, 4)
    four = e + [normalize_line([1, 1, 1])]
    assert count_general_position(four, 4)
    concurrent = e + [normalize_line([0, 1, 1])]
    # the added line passes through [1:0:0] like two of the axes
    assert count_general_position(concurrent, 3)
    assert not count_general_position(concurrent, 4)


@given(st.integers(0, 2), st.integers(0, 2))
def test_apply_point_on_basis_matches_columns(i, j):
    """g e_i is projectively the i-th column of the matrix."""
    rng = make_rng(1000 + 3 * i + j)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    g = make_element(m)
    p = normalize_point(np.eye(3)[i])
    assert chordal(apply_point(g, p), g.matrix[:, i]) < 1e-7


def test_group_element_repr_mentions_word():
    g = make_element(CYCLE, word=(2, 1))
    assert isinstance(g, GroupElement)
    assert g.word == (2, 1)
