"""Limit sets of cyclic subgroups and closed-form parabolic powers.

The limit set of the cyclic group generated by a single element depends only
on its classification:

  EllipticFinite          empty
  ParabolicUnipotentRank1 the line of fixed points (the projectivised
                          2-dimensional fixed subspace, which is also the
                          attracting line of the dual dynamics)
  ParabolicUnipotentRank2 the unique invariant line
  ParabolicEllipto        the line through the two fixed points
  ComplexHomothety        the fixed line plus the isolated fixed point off it
  Screw                   the line spanned by the two equal-modulus
                          eigendirections plus the third fixed point
  Loxoparabolic           both invariant lines
  StronglyLoxodromic      line(attracting, saddle) and line(saddle, repelling)

EllipticInfiniteOrSuspect elements witness non-discreteness of the ambient
group and are rejected.  All lines are produced from null-space data of the
original matrix and re-checked against the invariance residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elements import (
    COMPLEX_HOMOTHETY,
    DEFAULT_TOL,
    ELLIPTIC_FINITE,
    ELLIPTIC_SUSPECT,
    FIXED_RESIDUAL_TOL,
    LOXOPARABOLIC,
    PARABOLIC_ELLIPTO,
    PARABOLIC_RANK1,
    PARABOLIC_RANK2,
    SCREW,
    STRONGLY_LOXODROMIC,
    ElementClass,
    _moduli_equal,
    _spectral,
    classify,
)
from .errors import KleinianError, NonDiscreteWitness, UnsupportedShapeError
from .projective import (
    GroupElement,
    ProjLine,
    ProjPoint,
    _cross,
    apply_line,
    chordal_dist,
    line_through,
    normalize_line,
    normalize_point,
)

KIND_EMPTY = "Empty"
KIND_LINES = "Lines"
KIND_WHOLE_PLANE = "WholePlane"


@dataclass(frozen=True)
class LimitSetDesc:
    """A limit set described as a finite union of lines and isolated points.

    For cyclic groups the line count is 0, 1 or 2 and an isolated point can
    occur only alongside a single line, off that line.  Group-level estimates
    reuse the same shape with arbitrarily many lines.
    """

    kind: str
    lines: tuple[ProjLine, ...] = field(default=())
    isolated_points: tuple[ProjPoint, ...] = field(default=())


def _checked_line(g: GroupElement, vec) -> ProjLine:
    l = normalize_line(vec)
    if chordal_dist(apply_line(g, l), l) > FIXED_RESIDUAL_TOL:
        raise KleinianError("limit line failed the invariance residual check")
    return l


def _limit_from_class(g: GroupElement, cls: ElementClass, tol: float) -> LimitSetDesc:
    if cls.kind == ELLIPTIC_FINITE:
        return LimitSetDesc(KIND_EMPTY)
    if cls.kind == ELLIPTIC_SUSPECT:
        raise NonDiscreteWitness(
            g.word, "elliptic element with no detected finite order"
        )

    m = np.asarray(g.matrix, dtype=complex)
    clusters = _spectral(m, tol)

    if cls.kind == PARABOLIC_RANK1:
        v1, v2 = clusters[0].point_basis
        return LimitSetDesc(KIND_LINES, (_checked_line(g, _cross(v1, v2)),))

    if cls.kind == PARABOLIC_RANK2:
        (w,) = clusters[0].dual_basis
        return LimitSetDesc(KIND_LINES, (_checked_line(g, w),))

    if cls.kind == PARABOLIC_ELLIPTO:
        pts = [normalize_point(c.point_basis[0]) for c in clusters]
        l = line_through(pts[0], pts[1])
        return LimitSetDesc(KIND_LINES, (_checked_line(g, l.vec),))

    if cls.kind == COMPLEX_HOMOTHETY:
        double = next(c for c in clusters if c.alg_mult == 2)
        single = next(c for c in clusters if c.alg_mult == 1)
        v1, v2 = double.point_basis
        line = _checked_line(g, _cross(v1, v2))
        return LimitSetDesc(
            KIND_LINES, (line,), (normalize_point(single.point_basis[0]),)
        )

    if cls.kind == SCREW:
        r = [abs(c.value) for c in clusters]
        if _moduli_equal(r[0], r[1], tol):
            i, j, k = 0, 1, 2
        else:
            i, j, k = 1, 2, 0
        pi = normalize_point(clusters[i].point_basis[0])
        pj = normalize_point(clusters[j].point_basis[0])
        line = line_through(pi, pj)
        return LimitSetDesc(
            KIND_LINES,
            (_checked_line(g, line.vec),),
            (normalize_point(clusters[k].point_basis[0]),),
        )

    if cls.kind == LOXOPARABOLIC:
        lines = tuple(_checked_line(g, c.dual_basis[0]) for c in clusters)
        return LimitSetDesc(KIND_LINES, lines)

    if cls.kind == STRONGLY_LOXODROMIC:
        # clusters are sorted by modulus: repelling, saddle, attracting
        p = [normalize_point(c.point_basis[0]) for c in clusters]
        l_att = line_through(p[2], p[1])
        l_rep = line_through(p[1], p[0])
        return LimitSetDesc(
            KIND_LINES,
            (_checked_line(g, l_att.vec), _checked_line(g, l_rep.vec)),
        )

    raise KleinianError(f"unhandled kind {cls.kind}")


def limit_set_cyclic(g: GroupElement, tol: float = DEFAULT_TOL) -> LimitSetDesc:
    """Limit set of the cyclic group generated by g."""
    cls = classify(g, tol)
    return _limit_from_class(g, cls, tol)


def power_matrix_closed_form(g: GroupElement, n: int) -> np.ndarray:
    """n-th power of a matrix already in a parabolic Jordan basis.

    Supports the single 3-block (a 1 0; 0 a 1; 0 0 a) and the 2+1 block shape
    (a 1 0; 0 a 0; 0 0 b); n may be any integer.  The unipotent 3-block gives
    the familiar (1, n, n(n-1)/2) first row.  Other shapes have no closed form
    here and raise UnsupportedShapeError.
    """
    m = np.asarray(g.matrix, dtype=complex)
    zero_tol = 1e-12
    lower = [m[1, 0], m[2, 0], m[2, 1]]
    if any(abs(x) > zero_tol for x in lower):
        raise UnsupportedShapeError("matrix is not upper triangular")
    a = m[0, 0]
    if abs(m[0, 1] - 1.0) > zero_tol or abs(m[1, 1] - a) > zero_tol:
        raise UnsupportedShapeError("leading 2x2 block is not a Jordan block")

    def ipow(base: complex, k: int) -> complex:
        return base ** k

    if abs(m[1, 2] - 1.0) <= zero_tol and abs(m[2, 2] - a) <= zero_tol:
        if abs(m[0, 2]) > zero_tol:
            raise UnsupportedShapeError("corner entry of a 3-block must be 0")
        # single Jordan 3-block
        an = ipow(a, n)
        an1 = n * ipow(a, n - 1)
        an2 = (n * (n - 1) // 2) * ipow(a, n - 2)
        return np.array(
            [[an, an1, an2], [0.0, an, an1], [0.0, 0.0, an]], dtype=complex
        )

    if abs(m[1, 2]) <= zero_tol and abs(m[0, 2]) <= zero_tol:
        b = m[2, 2]
        an = ipow(a, n)
        return np.array(
            [
                [an, n * ipow(a, n - 1), 0.0],
                [0.0, an, 0.0],
                [0.0, 0.0, ipow(b, n)],
            ],
            dtype=complex,
        )

    raise UnsupportedShapeError("matrix is not in a supported parabolic Jordan shape")
