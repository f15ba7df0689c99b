"""Spectral classification of PSL(3,C) elements.

An element of a unit-determinant lift falls into exactly one of eight kinds,
read off its eigenvalue moduli and Jordan block structure:

  EllipticFinite / EllipticInfiniteOrSuspect   diagonalisable, all moduli 1
  ParabolicUnipotentRank1                      (g - I) has rank 1: one 2-block
  ParabolicUnipotentRank2                      (g - I) has rank 2: one 3-block
  ParabolicEllipto                             defective double unit eigenvalue
  ComplexHomothety                             diag(a, a, a^-2), |a| != 1
  Screw                                        diag(a, b, (ab)^-1), a != b, |a| = |b| != 1
  Loxoparabolic                                defective (a, a, a^-2), |a| != 1
  StronglyLoxodromic                           three distinct moduli

Every modulus comparison carries a dead band: values inside (tol/2, 2*tol) of
a case boundary raise AmbiguousClassification instead of guessing, so a
caller can retry with a different tolerance.  Defective eigenvalues computed
in floating point split at scale ~eps^(1/2) (2-blocks) or ~eps^(1/3)
(3-blocks); the cluster mean cancels the leading split term, which is what
makes the fixed-point data below accurate far beyond the raw eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousClassification,
    NotEllipticError,
    NotInvertibleError,
)
from .projective import (
    GroupElement,
    ProjLine,
    ProjPoint,
    _det3,
    apply_line,
    apply_point,
    chordal_dist,
    normalize_line,
    normalize_point,
    psl_distance,
)

DEFAULT_TOL = 1e-7
IDENTITY_PROX_TOL = 1e-8
FIXED_RESIDUAL_TOL = 1e-7

ELLIPTIC_FINITE = "EllipticFinite"
ELLIPTIC_SUSPECT = "EllipticInfiniteOrSuspect"
PARABOLIC_RANK1 = "ParabolicUnipotentRank1"
PARABOLIC_RANK2 = "ParabolicUnipotentRank2"
PARABOLIC_ELLIPTO = "ParabolicEllipto"
COMPLEX_HOMOTHETY = "ComplexHomothety"
SCREW = "Screw"
LOXOPARABOLIC = "Loxoparabolic"
STRONGLY_LOXODROMIC = "StronglyLoxodromic"

ELLIPTIC_KINDS = frozenset({ELLIPTIC_FINITE, ELLIPTIC_SUSPECT})
PARABOLIC_KINDS = frozenset({PARABOLIC_RANK1, PARABOLIC_RANK2, PARABOLIC_ELLIPTO})
LOXODROMIC_KINDS = frozenset(
    {COMPLEX_HOMOTHETY, SCREW, LOXOPARABOLIC, STRONGLY_LOXODROMIC}
)


@dataclass(frozen=True)
class ElementClass:
    """Classification result together with the element's fixed geometry.

    ``order`` is the PSL order for EllipticFinite and None otherwise.
    ``eigenvalues`` are sorted by (modulus, phase).  ``fixed_points`` are
    projectivised eigenvectors; ``invariant_lines`` come from eigenvectors of
    the transpose.  Defective eigenvalues yield fewer than three of each.
    """

    kind: str
    order: int | None
    eigenvalues: tuple[complex, complex, complex]
    fixed_points: tuple[ProjPoint, ...]
    invariant_lines: tuple[ProjLine, ...]


@dataclass(frozen=True)
class _Cluster:
    value: complex
    members: tuple[complex, ...]
    geo_mult: int
    point_basis: tuple[np.ndarray, ...]
    dual_basis: tuple[np.ndarray, ...]

    @property
    def alg_mult(self) -> int:
        return len(self.members)


def _eig_sorted(m: np.ndarray) -> list[complex]:
    vals = [complex(v) for v in np.linalg.eigvals(m)]
    vals.sort(key=lambda z: (abs(z), np.angle(z)))
    return vals


def _null_basis(m: np.ndarray, threshold: float) -> list[np.ndarray]:
    _, s, vh = np.linalg.svd(m)
    for sv in s:
        if threshold / 2.0 < sv < 2.0 * threshold:
            raise AmbiguousClassification(
                f"singular value {sv:.3e} inside dead band around rank "
                f"threshold {threshold:.3e}; re-run with a different tol"
            )
    return [np.conj(vh[i]) for i in range(3) if s[i] < threshold]


def _spectral(m: np.ndarray, tol: float) -> list[_Cluster]:
    """Eigenvalues clustered at relative tolerance tol, with null-space data."""
    vals = _eig_sorted(m)
    # union-find on the three eigenvalues; join below tol/2, dead band to 2*tol
    parent = list(range(3))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i in range(3):
        for j in range(i + 1, 3):
            scale = max(abs(vals[i]), abs(vals[j]), 1e-30)
            gap = abs(vals[i] - vals[j]) / scale
            if gap <= tol / 2.0:
                parent[find(j)] = find(i)
    for i in range(3):
        for j in range(i + 1, 3):
            scale = max(abs(vals[i]), abs(vals[j]), 1e-30)
            gap = abs(vals[i] - vals[j]) / scale
            if (find(i) == find(j)) != (gap <= tol / 2.0) or (
                find(i) != find(j) and gap < 2.0 * tol
            ):
                raise AmbiguousClassification(
                    f"eigenvalue gap {gap:.3e} inside dead band "
                    f"({tol/2.0:.1e}, {2.0*tol:.1e}); re-run with a different tol"
                )

    groups: dict[int, list[complex]] = {}
    for i, v in enumerate(vals):
        groups.setdefault(find(i), []).append(v)

    norm_m = float(np.linalg.norm(m, 2))
    clusters = []
    for members in groups.values():
        lam = sum(members) / len(members)
        threshold = tol * max(norm_m, 1.0)
        pts = _null_basis(m - lam * np.eye(3), threshold)
        duals = _null_basis(m.T - lam * np.eye(3), threshold)
        if not pts or len(pts) != len(duals):
            raise AmbiguousClassification(
                "inconsistent null-space dimensions for eigenvalue cluster; "
                "re-run with a different tol"
            )
        clusters.append(
            _Cluster(lam, tuple(members), len(pts), tuple(pts), tuple(duals))
        )
    clusters.sort(key=lambda c: (abs(c.value), np.angle(c.value)))
    return clusters


def _unit_band(x: float, tol: float) -> bool | None:
    """Three-way test of |x - 1|: True, False, or None inside the dead band
    (tol/2, 2*tol).  None only raises once a decision actually needs it."""
    d = abs(x - 1.0)
    if d <= tol / 2.0:
        return True
    if d >= 2.0 * tol:
        return False
    return None


def _moduli_equal(a: float, b: float, tol: float) -> bool:
    scale = max(a, b, 1e-30)
    d = abs(a - b) / scale
    if d <= tol / 2.0:
        return True
    if d >= 2.0 * tol:
        return False
    raise AmbiguousClassification(
        f"modulus gap {d:.3e} inside dead band; re-run with a different tol"
    )


def _order_probe(m: np.ndarray, max_order: int) -> int | None:
    eye = np.eye(3, dtype=complex)
    p = m.copy()
    for n in range(1, max_order + 1):
        if psl_distance(p, eye) < IDENTITY_PROX_TOL:
            return n
        p = p @ m
    return None


def _frame(g: GroupElement, clusters: list[_Cluster]):
    points = []
    lines = []
    for c in clusters:
        for v in c.point_basis:
            p = normalize_point(v)
            if chordal_dist(apply_point(g, p), p) > FIXED_RESIDUAL_TOL:
                raise AmbiguousClassification(
                    "computed fixed point fails its residual check; the "
                    "spectrum straddles a cluster boundary at this tolerance"
                )
            points.append(p)
        for w in c.dual_basis:
            l = normalize_line(w)
            if chordal_dist(apply_line(g, l), l) > FIXED_RESIDUAL_TOL:
                raise AmbiguousClassification(
                    "computed invariant line fails its residual check; the "
                    "spectrum straddles a cluster boundary at this tolerance"
                )
            lines.append(l)
    return tuple(points), tuple(lines)


def classify(
    g: GroupElement, tol: float = DEFAULT_TOL, max_order: int = 1000
) -> ElementClass:
    """Classify a PSL(3,C) element into one of the eight kinds.

    tol must lie in (0, 1e-3]; it drives eigenvalue clustering, the rank
    threshold tol*||g|| for diagonalisability, and the dead bands.  The order
    probe for elliptic elements searches powers up to max_order.
    """
    if not 0.0 < tol <= 1e-3:
        raise ValueError("tol must lie in (0, 1e-3]")
    m = np.asarray(g.matrix, dtype=complex)
    if abs(_det3(m)) < tol:
        raise NotInvertibleError("determinant below tolerance")

    clusters = _spectral(m, tol)
    vals = _eig_sorted(m)
    eigenvalues = (vals[0], vals[1], vals[2])
    points, lines = _frame(g, clusters)
    diagonalisable = all(c.geo_mult == c.alg_mult for c in clusters)
    unit = [_unit_band(abs(c.value), tol) for c in clusters]

    def result(kind, order=None):
        return ElementClass(kind, order, eigenvalues, points, lines)

    if all(u is True for u in unit):
        if diagonalisable:
            order = _order_probe(m, max_order)
            if order is not None:
                return result(ELLIPTIC_FINITE, order)
            return result(ELLIPTIC_SUSPECT)
        if len(clusters) == 1:
            # unipotent up to a cube root of unity; name by rank of g - lambda*I
            if clusters[0].geo_mult == 2:
                return result(PARABOLIC_RANK1)
            return result(PARABOLIC_RANK2)
        return result(PARABOLIC_ELLIPTO)

    if not any(u is False for u in unit):
        # no robustly non-unit modulus: the all-unit question is undecidable
        raise AmbiguousClassification(
            "eigenvalue modulus inside dead band around 1; "
            "re-run with a different tol"
        )

    if len(clusters) == 3:
        r = [abs(c.value) for c in clusters]
        eq01 = _moduli_equal(r[0], r[1], tol)
        eq12 = _moduli_equal(r[1], r[2], tol)
        if not eq01 and not eq12:
            return result(STRONGLY_LOXODROMIC)
        if eq01 and eq12:
            raise AmbiguousClassification(
                "three distinct eigenvalues with equal moduli contradict "
                "unit determinant; re-run with a different tol"
            )
        pair = (0, 1) if eq01 else (1, 2)
        pair_unit = _unit_band(abs(clusters[pair[0]].value), tol)
        if pair_unit is None:
            raise AmbiguousClassification(
                "screw pair modulus inside dead band around 1; "
                "re-run with a different tol"
            )
        if pair_unit:
            raise AmbiguousClassification(
                "equal unit moduli with a non-unit third contradict unit "
                "determinant; re-run with a different tol"
            )
        return result(SCREW)

    if len(clusters) == 2:
        double = next(c for c in clusters if c.alg_mult == 2)
        if double.geo_mult == 2:
            return result(COMPLEX_HOMOTHETY)
        return result(LOXOPARABOLIC)

    raise AmbiguousClassification(
        "triple eigenvalue with non-unit modulus contradicts unit "
        "determinant; re-run with a different tol"
    )


def order_if_finite(g: GroupElement, max_order: int) -> int | None:
    """Smallest n <= max_order with g^n the identity in the PSL metric.

    Requires an elliptic element; None means no finite order was detected,
    which for a genuinely elliptic element is a non-discreteness signal.
    """
    cls = classify(g)
    if cls.kind not in ELLIPTIC_KINDS:
        raise NotEllipticError(f"order probe requires an elliptic element, got {cls.kind}")
    return _order_probe(np.asarray(g.matrix, dtype=complex), max_order)


def eigen_frame(
    g: GroupElement, tol: float = DEFAULT_TOL
) -> tuple[tuple[ProjPoint, ...], tuple[ProjLine, ...]]:
    """Fixed points and invariant lines, ordered by eigenvalue cluster."""
    clusters = _spectral(np.asarray(g.matrix, dtype=complex), tol)
    return _frame(g, clusters)
