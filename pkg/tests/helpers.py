"""Shared samplers and comparison utilities for the test suite.

Random elements of a given classification kind are built from their
normal forms and optionally conjugated.  Samplers enforce safety
margins (modulus gaps, phase gaps over small powers) so a sampled
element never sits inside a classification dead band.
"""

import numpy as np

from kleinian import GroupElement, ProjLine, ProjPoint, make_element

# margin kept between moduli clusters and between phases of equal-modulus
# eigenvalues, checked over powers 1..POWER_RANGE so k-th powers classify too
MODULUS_GAP = 1.2
PHASE_MARGIN = 0.05
POWER_RANGE = 5


def make_rng(seed):
    return np.random.default_rng(seed)


def unit_complex(rng):
    theta = rng.uniform(-np.pi, np.pi)
    return complex(np.cos(theta), np.sin(theta))


def _phase_safe(theta, rng):
    # keep k*theta away from 0 mod 2pi for k = 1..POWER_RANGE
    while any(
        min(abs(k * theta) % (2 * np.pi), 2 * np.pi - abs(k * theta) % (2 * np.pi))
        < PHASE_MARGIN
        for k in range(1, POWER_RANGE + 1)
    ):
        theta = rng.uniform(-np.pi, np.pi)
    return theta


def safe_unit_complex(rng):
    """Unit complex number whose powers up to POWER_RANGE stay away from 1."""
    theta = _phase_safe(rng.uniform(-np.pi, np.pi), rng)
    return complex(np.cos(theta), np.sin(theta))


def conjugator(rng, lo=0.5, hi=2.0):
    """Random well-conditioned matrix h = U diag(d) V with |d| in [lo, hi]."""
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    u, _, vh = np.linalg.svd(a)
    d = rng.uniform(lo, hi, size=3) * np.array([unit_complex(rng) for _ in range(3)])
    return u @ np.diag(d) @ vh


def conjugate(m, h):
    return h @ np.asarray(m, dtype=complex) @ np.linalg.inv(h)


def sample_matrix(rng, scale=1.0):
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return scale * m


# ---------------------------------------------------------------------------
# normal forms, one per classification kind


def elliptic_finite_matrix(rng=None, order=5):
    z = np.exp(2j * np.pi / order)
    return np.diag([z, np.conj(z), 1.0 + 0j])


def elliptic_suspect_matrix(rng=None):
    # rotation by 1 radian: no finite order within any realistic probe bound
    z = np.exp(1j)
    return np.diag([z, np.conj(z), 1.0 + 0j])


def parabolic_rank1_matrix(rng=None):
    return np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]], dtype=complex)


def parabolic_rank2_matrix(rng=None):
    return np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=complex)


def ellipto_parabolic_matrix(rng=None):
    z = safe_unit_complex(rng) if rng is not None else np.exp(2j * np.pi / 5)
    return np.array([[z, 1, 0], [0, z, 0], [0, 0, z ** -2]], dtype=complex)


def homothety_matrix(rng=None):
    lam = _loxo_scalar(rng)
    return np.diag([lam, lam, lam ** -2])


def screw_matrix(rng=None):
    lam = _loxo_scalar(rng)
    z = safe_unit_complex(rng) if rng is not None else np.exp(2j * np.pi / 7)
    return np.diag([lam, lam * z, 1.0 / (lam * lam * z)])


def loxoparabolic_matrix(rng=None):
    lam = _loxo_scalar(rng)
    return np.array([[lam, 1, 0], [0, lam, 0], [0, 0, lam ** -2]], dtype=complex)


def strongly_loxodromic_matrix(rng=None, gap=MODULUS_GAP):
    if rng is None:
        return np.diag([0.5 + 0j, 1.0 + 0j, 2.0 + 0j])
    r2 = rng.uniform(gap, 1.6 * gap)
    r3 = r2 * rng.uniform(gap, 1.6 * gap)
    phases = [unit_complex(rng) for _ in range(3)]
    d = np.array([1.0, r2, r3]) * phases
    return np.diag(d / np.cbrt(np.abs(np.prod(d))))


def _loxo_scalar(rng):
    # |lam| >= MODULUS_GAP keeps |lam| and |lam|^-2 well separated, powers too
    if rng is None:
        return 2.0 + 0j
    return rng.uniform(MODULUS_GAP, 2.0) * unit_complex(rng)


KIND_MATRICES = {
    "EllipticFinite": elliptic_finite_matrix,
    "EllipticInfiniteOrSuspect": elliptic_suspect_matrix,
    "ParabolicUnipotentRank1": parabolic_rank1_matrix,
    "ParabolicUnipotentRank2": parabolic_rank2_matrix,
    "ParabolicEllipto": ellipto_parabolic_matrix,
    "ComplexHomothety": homothety_matrix,
    "Screw": screw_matrix,
    "Loxoparabolic": loxoparabolic_matrix,
    "StronglyLoxodromic": strongly_loxodromic_matrix,
}

NON_ELLIPTIC_KINDS = (
    "ParabolicUnipotentRank1",
    "ParabolicUnipotentRank2",
    "ParabolicEllipto",
    "ComplexHomothety",
    "Screw",
    "Loxoparabolic",
    "StronglyLoxodromic",
)


def sample_kind(kind, rng, conj=True):
    """Random element of the given kind: normal form, then conjugation."""
    m = KIND_MATRICES[kind](rng)
    if conj:
        m = conjugate(m, conjugator(rng))
    return make_element(m)


# ---------------------------------------------------------------------------
# comparison helpers


def _vec(obj):
    if isinstance(obj, (ProjPoint, ProjLine)):
        return obj.vec
    return np.asarray(obj, dtype=complex)


def _unit(v):
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def proj_close(a, b, tol):
    """Chordal proximity of two projective classes, type-agnostic."""
    return chordal(a, b) <= tol


def sets_match(got, expected, tol):
    """Bijective matching of two collections of projective classes."""
    got = list(got)
    expected = list(expected)
    if len(got) != len(expected):
        return False
    remaining = list(expected)
    for g in got:
        hit = None
        for i, e in enumerate(remaining):
            if proj_close(g, e, tol):
                hit = i
                break
        if hit is None:
            return False
        remaining.pop(hit)
    return True


def limit_desc_parts(desc):
    return list(desc.lines), list(desc.isolated_points)


def psl_dist_matrices(a, b):
    """PSL distance between two invertible matrices via canonical lifts."""
    from kleinian import psl_distance

    ga = a if isinstance(a, GroupElement) else make_element(a)
    gb = b if isinstance(b, GroupElement) else make_element(b)
    return psl_distance(ga.matrix, gb.matrix)


COORDINATE_DUALS = [
    np.array([1, 0, 0], dtype=complex),
    np.array([0, 1, 0], dtype=complex),
    np.array([0, 0, 1], dtype=complex),
]


def chordal(a, b):
    """Chordal distance between projective classes given in any container.

    Computed as the norm of the orthogonal rejection, which resolves
    distances all the way down to working precision.
    """
    x, y = _unit(_vec(a)), _unit(_vec(b))
    r = x - y * np.vdot(y, x)
    return min(1.0, float(np.linalg.norm(r)))
