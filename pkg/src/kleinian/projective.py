"""Homogeneous-coordinate geometry on the complex projective plane and its dual.

A point of P^2(C) is a class [z1 : z2 : z3] of nonzero vectors in C^3 up to a
complex scalar; a line is a class [A : B : C] of dual vectors, with incidence
given by the bilinear pairing A*z1 + B*z2 + C*z3 = 0 (no conjugation).  Both
are stored through a canonical representative so that equal classes produced
by the same computation hash and compare identically:

  * unit Euclidean norm,
  * the coordinate of largest modulus is real and positive (ties broken by
    the lowest index).

Group elements are unit-determinant lifts of PSL(3,C) classes.  The canonical
lift is the one of the three cube-root-of-unity scalings whose largest-modulus
entry has phase in [-pi/3, pi/3), ties broken by the lowest row-major index.

Lines transform by the inverse on the right: l -> [(A,B,C) g^{-1}], realised
here through the cofactor matrix, which equals the transposed inverse for
unit-determinant lifts and is exact on integer-like entries.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CoincidentLinesError,
    CoincidentPointsError,
    NotInvertibleError,
    ZeroVectorError,
)

# Two unit representatives within this chordal distance denote the same class.
COINCIDENCE_TOL = 1e-9
# Default residual below which a point is accepted as lying on a line.
INCIDENCE_TOL = 1e-10
# |det l1,l2,l3| above this means the three lines are in general position.
GENERAL_POSITION_TOL = 1e-9

_OMEGA = cmath.exp(2j * math.pi / 3)
_CUBE_ROOTS = (1.0 + 0.0j, _OMEGA, _OMEGA * _OMEGA)


def unit_canonical(v) -> np.ndarray:
    """Canonical unit representative of a nonzero vector in C^3.

    Iterates the normalisation pass to a bitwise fixed point so that applying
    the function to its own output returns the stored values unchanged.
    """
    w = np.asarray(v, dtype=complex).reshape(3).copy()
    for _ in range(8):
        n = math.sqrt(float((w.real * w.real + w.imag * w.imag).sum()))
        if n < 1e-300:
            raise ZeroVectorError("zero homogeneous vector")
        u = w / n
        k = int(np.argmax(np.abs(u)))
        a = u[k]
        r = abs(a)
        if a != r:
            u = u * (r / a)
        u[k] = complex(abs(u[k]), 0.0)
        if np.array_equal(u, w):
            return u
        w = u
    return w


def _chordal(u: np.ndarray, v: np.ndarray) -> float:
    # sqrt(1 - |<u,v>|^2) via the orthogonal rejection, which stays accurate
    # near zero where the direct formula cancels to noise around sqrt(eps)
    x = u / np.linalg.norm(u)
    y = v / np.linalg.norm(v)
    r = x - y * np.vdot(y, x)
    return min(1.0, float(np.linalg.norm(r)))


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^2(C), held as its canonical unit representative."""

    coords: tuple[complex, complex, complex]

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)


@dataclass(frozen=True)
class ProjLine:
    """A line of P^2(C), held as the canonical unit representative of its dual."""

    dual: tuple[complex, complex, complex]

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.dual, dtype=complex)


def normalize_point(v) -> ProjPoint:
    u = unit_canonical(v)
    return ProjPoint((complex(u[0]), complex(u[1]), complex(u[2])))


def normalize_line(v) -> ProjLine:
    u = unit_canonical(v)
    return ProjLine((complex(u[0]), complex(u[1]), complex(u[2])))


def chordal_dist(a, b) -> float:
    """Chordal distance sqrt(1 - |<a,b>|^2) between two classes.

    Accepts points or lines; both arguments must be of the same kind.
    """
    return _chordal(a.vec, b.vec)


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # bilinear cross product; annihilates both factors under the pairing
    return np.array(
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ],
        dtype=complex,
    )


def line_through(p: ProjPoint, q: ProjPoint) -> ProjLine:
    """The unique line through two distinct points."""
    if chordal_dist(p, q) <= COINCIDENCE_TOL:
        raise CoincidentPointsError("points coincide projectively")
    return normalize_line(_cross(p.vec, q.vec))


def meet(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    """The intersection point of two distinct lines."""
    if chordal_dist(l1, l2) <= COINCIDENCE_TOL:
        raise CoincidentLinesError("lines coincide projectively")
    return normalize_point(_cross(l1.vec, l2.vec))


def incident(p: ProjPoint, l: ProjLine, tol: float = INCIDENCE_TOL) -> bool:
    """Whether the bilinear pairing of unit representatives is below tol."""
    return incidence_residual(p, l) <= tol


def incidence_residual(p: ProjPoint, l: ProjLine) -> float:
    return abs(complex(np.dot(l.vec, p.vec)))


def _det3(m: np.ndarray) -> complex:
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def cofactor_matrix(m: np.ndarray) -> np.ndarray:
    """Matrix of signed 2x2 minors; its transpose is the adjugate.

    For a unit-determinant matrix this is the transposed inverse, so it is a
    lift of the inverse class and stays exact on integer-like entries.
    """
    m = np.asarray(m, dtype=complex)
    return np.array(
        [
            [
                m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1],
                m[1, 2] * m[2, 0] - m[1, 0] * m[2, 2],
                m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0],
            ],
            [
                m[0, 2] * m[2, 1] - m[0, 1] * m[2, 2],
                m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0],
                m[0, 1] * m[2, 0] - m[0, 0] * m[2, 1],
            ],
            [
                m[0, 1] * m[1, 2] - m[0, 2] * m[1, 1],
                m[0, 2] * m[1, 0] - m[0, 0] * m[1, 2],
                m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0],
            ],
        ],
        dtype=complex,
    )


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A PSL(3,C) element held as a concrete matrix lift of its class.

    ``make_element`` builds the canonical unit-determinant lift; the power
    sequence machinery substitutes sup-normalised representatives when the
    unit lift would leave the float range.  ``word`` records a witnessing
    product of generators as signed 1-based indices (empty for elements
    constructed directly from a matrix).  Equality of classes is semantic,
    through ``psl_distance``; the dataclass itself compares by identity.
    """

    matrix: np.ndarray
    word: tuple[int, ...] = field(default=())

    def __post_init__(self):
        self.matrix.setflags(write=False)

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"GroupElement(word={self.word!r})"


def make_element(matrix, word: tuple[int, ...] = ()) -> GroupElement:
    """Build the canonical unit-determinant lift of an invertible matrix."""
    m = np.array(matrix, dtype=complex).reshape(3, 3)
    d = _det3(m)
    if abs(d) < 1e-12:
        raise NotInvertibleError("matrix determinant too close to zero")
    if d != 1.0:
        # principal cube root; the canonical scaling below absorbs the branch
        m = m * d ** (-1.0 / 3.0)
    m = _psl_canonical(m)
    return GroupElement(m, tuple(word))


def _psl_canonical(m: np.ndarray) -> np.ndarray:
    """Choose among the three cube-root-of-unity scalings of a unit-det lift."""
    flat = m.reshape(-1)
    k = int(np.argmax(np.abs(flat)))
    theta = cmath.phase(flat[k])
    third = 2.0 * math.pi / 3.0
    best = None
    for j, root in enumerate(_CUBE_ROOTS):
        phi = theta + j * third
        while phi > math.pi:
            phi -= 2.0 * math.pi
        if -math.pi / 3.0 <= phi < math.pi / 3.0:
            return m if j == 0 else m * root
        if best is None or abs(phi) < best[0]:
            best = (abs(phi), j, root)
    # boundary roundoff can exclude all three half-open tests; take the
    # scaling with smallest absolute phase
    _, j, root = best
    return m if j == 0 else m * root


def identity_element() -> GroupElement:
    return make_element(np.eye(3, dtype=complex))


def _reduce_word(word: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for s in word:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    return make_element(g.matrix @ h.matrix, _reduce_word(g.word + h.word))


def inverse(g: GroupElement) -> GroupElement:
    # transpose of the cofactor matrix = inverse for unit-determinant lifts
    return make_element(
        cofactor_matrix(g.matrix).T, tuple(-s for s in reversed(g.word))
    )


def psl_distance(m1: np.ndarray, m2: np.ndarray) -> float:
    """Sup-norm distance between PSL classes: min over cube-root scalings."""
    best = math.inf
    for root in _CUBE_ROOTS:
        d = float(np.abs(m1 - root * m2).max())
        if d < best:
            best = d
    return best


def apply_point(g: GroupElement, p: ProjPoint) -> ProjPoint:
    return normalize_point(g.matrix @ p.vec)


def apply_line(g: GroupElement, l: ProjLine) -> ProjLine:
    """Image of a line: dual coordinates transform by g^{-1} on the right."""
    return normalize_line(cofactor_matrix(g.matrix) @ l.vec)


def general_position3(l1: ProjLine, l2: ProjLine, l3: ProjLine) -> bool:
    """Pairwise distinct and not concurrent: |det of the dual triple| > 1e-9."""
    m = np.array([l1.vec, l2.vec, l3.vec])
    return abs(_det3(m)) > GENERAL_POSITION_TOL


def count_general_position(lines, k: int) -> bool:
    """Whether some k-subset of the lines is in general position.

    k = 3 asks for a non-concurrent triple of pairwise distinct lines; k = 4
    asks for four pairwise distinct lines no three of which are concurrent,
    i.e. every triple inside the 4-subset passes the k = 3 test.
    """
    from itertools import combinations

    lines = list(lines)
    if k == 3:
        return any(general_position3(*t) for t in combinations(lines, 3))
    if k == 4:
        for quad in combinations(lines, 4):
            if all(general_position3(*t) for t in combinations(quad, 3)):
                return True
        return False
    raise ValueError("k must be 3 or 4")
