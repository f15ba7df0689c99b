"""Pseudo-projective maps: projective limits of diverging element sequences.

A sequence of unit-determinant lifts, rescaled to sup-norm 1 and made phase
canonical, can converge entrywise to a nonzero singular matrix s.  The class
[s] still acts on the complement of its kernel, and for rank < 3 the
projective dimensions satisfy dim Ker + dim Im = 1: the kernel is a point and
the image a line, or the kernel is a line and the image a point.

The cofactor matrices of the same sequence give the dual-plane (line side)
action, so a second limit taken over them captures the backward dynamics.
Because the cofactor is the transpose of the inverse, the transpose of the
cofactor limit T is the pseudo-projective limit T' of the inverse powers,
and transposing swaps kernel and image vectors.  The duality therefore
pairs like with like: Im(S) lies on the line that Im(T) represents and the
pencil point of Ker(T) lies on Ker(S); when S keeps rank 2 those
incidences sharpen to Im(S) being exactly the line of Im(T) and Ker(S)
exactly the pencil point of Ker(T).  Equivalently, Im(S) is inside Ker(T')
and Im(T') inside Ker(S), with equality of the line/point pairs in the
rank-2 case.  The equicontinuity set of the family is the complement of
the kernel, which is what makes these kernels the building blocks of
group-level limit sets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from .errors import (
    EmptySequenceError,
    FullRankMemberError,
    ImagePointOnLineError,
    InKernelError,
    ZeroMatrixError,
)
from .projective import (
    GroupElement,
    ProjLine,
    ProjPoint,
    chordal_dist,
    cofactor_matrix,
    incidence_residual,
    normalize_line,
    normalize_point,
)

# singular values of a sup-normalised matrix below this count as zero
RANK_SV_TOL = 1e-9
# residual distance from the kernel required before evaluating a map
KERNEL_GUARD_TOL = 1e-8
# consecutive canonical terms needed pairwise within tol to declare a limit
CONVERGENCE_WINDOW = 5


def sup_canonical(m) -> np.ndarray:
    """Sup-norm-1, phase-canonical representative of a nonzero matrix class.

    The entry of largest modulus (lowest row-major index on ties) is made
    real positive, mirroring the point canonicalisation.
    """
    w = np.asarray(m, dtype=complex).reshape(3, 3).copy()
    for _ in range(8):
        flat = w.reshape(-1)
        mods = np.abs(flat)
        k = int(np.argmax(mods))
        n = float(mods[k])
        if n < 1e-300:
            raise ZeroMatrixError("zero matrix has no projective class")
        u = w / n
        a = u.reshape(-1)[k]
        r = abs(a)
        if a != r:
            u = u * (r / a)
        u.reshape(-1)[k] = complex(abs(u.reshape(-1)[k]), 0.0)
        if np.array_equal(u, w):
            return u
        w = u
    return w


@dataclass(frozen=True, eq=False)
class PseudoProjMap:
    """A singular-or-not matrix class with its rank, kernel and image.

    kernel: None (empty), a ProjPoint (rank 2) or a ProjLine (rank 1, the
    dual of the 2-dimensional null space).  image: None means the whole
    plane (rank 3), a ProjLine (rank 2) or a ProjPoint (rank 1).
    """

    matrix: np.ndarray
    rank: int
    kernel: Union[None, ProjPoint, ProjLine]
    image: Union[None, ProjPoint, ProjLine]

    def __post_init__(self):
        self.matrix.setflags(write=False)


def from_matrix(s) -> PseudoProjMap:
    """Canonicalise a nonzero matrix and read off rank, kernel and image."""
    m = sup_canonical(s)
    u, sv, vh = np.linalg.svd(m)
    rank = int((sv > RANK_SV_TOL).sum())
    if rank == 3:
        kernel = None
        image = None
    elif rank == 2:
        kernel = normalize_point(np.conj(vh[2]))
        image = normalize_line(np.conj(u[:, 2]))
    elif rank == 1:
        # the 2-dim null space span{v2, v3} is the line bilinear-dual to vh[0]
        kernel = normalize_line(vh[0])
        image = normalize_point(u[:, 0])
    else:  # pragma: no cover - sup_canonical rejects the zero matrix
        raise ZeroMatrixError("rank-0 matrix has no projective class")
    return PseudoProjMap(m, rank, kernel, image)


def _kernel_clearance(S: PseudoProjMap, p: ProjPoint) -> float:
    if S.kernel is None:
        return float("inf")
    if isinstance(S.kernel, ProjPoint):
        return chordal_dist(p, S.kernel)
    return incidence_residual(p, S.kernel)


def evaluate(S: PseudoProjMap, p: ProjPoint) -> ProjPoint:
    """Image of a point not in the kernel."""
    if _kernel_clearance(S, p) <= KERNEL_GUARD_TOL:
        raise InKernelError("point lies in (or too near) the kernel")
    return normalize_point(S.matrix @ p.vec)


def _limit_core(
    mats: Iterator[np.ndarray], max_terms: int, tol: float
) -> Optional[PseudoProjMap]:
    window: deque[np.ndarray] = deque(maxlen=CONVERGENCE_WINDOW)
    count = 0
    for m in mats:
        count += 1
        c = sup_canonical(m)
        window.append(c)
        if len(window) == CONVERGENCE_WINDOW:
            ws = list(window)
            converged = True
            for i in range(CONVERGENCE_WINDOW):
                for j in range(i + 1, CONVERGENCE_WINDOW):
                    if float(np.abs(ws[i] - ws[j]).max()) >= tol:
                        converged = False
                        break
                if not converged:
                    break
            if converged:
                return from_matrix(ws[-1])
        if count >= max_terms:
            break
    if count == 0:
        raise EmptySequenceError("sequence yielded no terms")
    return None


def limit_of_sequence(
    seq: Iterable[GroupElement], max_terms: int, tol: float
) -> Optional[PseudoProjMap]:
    """Pseudo-projective limit of a sequence of group elements.

    Each term is sup-norm normalised and phase canonicalised; convergence is
    declared when five consecutive terms agree pairwise within tol in the
    entrywise sup metric.  Returns None when no such window appears within
    max_terms (reported honestly rather than extrapolated).
    """
    return _limit_core((g.matrix for g in iter(seq)), max_terms, tol)


def inverse_limit(
    seq: Iterable[GroupElement], max_terms: int, tol: float
) -> Optional[PseudoProjMap]:
    """Pseudo-projective limit of the cofactor lifts of the inverses.

    Cofactors are taken term by term, which is the only option for a
    generic sequence but loses precision once a term is nearly singular:
    the minors of a matrix with singular-value spread sigma1/sigma2 carry a
    relative error of about that spread times machine epsilon.  For power
    sequences, accumulate powers of the cofactor matrix of the generator
    instead; cofactors are multiplicative, so the limit is the same and
    every term is computed from a well-conditioned product.
    """
    return _limit_core(
        (cofactor_matrix(g.matrix) for g in iter(seq)), max_terms, tol
    )


def line_collapse_check(seq: Iterable[GroupElement], l: ProjLine, S: PseudoProjMap) -> float:
    """Residual of the inverse-image lines against the kernel line of S.

    Tracks the dual iterates [(A,B,C) g_n] (the images of l under the
    inverses) along the whole sequence and returns the chordal distance of
    the final one to Ker(S).  Requires Ker(S) to be a line and l to avoid
    the image point of S.
    """
    if not isinstance(S.kernel, ProjLine):
        raise ValueError("line collapse needs a map whose kernel is a line")
    if isinstance(S.image, ProjPoint) and incidence_residual(S.image, l) <= 1e-6:
        raise ImagePointOnLineError("line passes through the image point")
    last = None
    for g in iter(seq):
        last = normalize_line(l.vec @ g.matrix)
    if last is None:
        raise EmptySequenceError("sequence yielded no terms")
    return chordal_dist(last, S.kernel)


def equicontinuity_complement(limits: Iterable[PseudoProjMap]) -> list[Union[ProjPoint, ProjLine]]:
    """Deduplicated kernel descriptors of a family of singular limits.

    The equicontinuity set of the family is the complement of the union of
    these kernels.  A rank-3 member has empty kernel and is rejected.
    """
    out: list[Union[ProjPoint, ProjLine]] = []
    for S in limits:
        if S.kernel is None:
            raise FullRankMemberError("rank-3 member has empty kernel")
        k = S.kernel
        duplicate = False
        for seen in out:
            if type(seen) is type(k) and chordal_dist(seen, k) <= 1e-8:
                duplicate = True
                break
        if not duplicate:
            out.append(k)
    return out


def power_sequence(g: GroupElement, n_max: int) -> Iterator[GroupElement]:
    """Yields g, g^2, ..., g^{n_max} as projective representatives.

    The matrix of the n-th term is the sup-normalised, phase-canonical
    representative of the class of g^n.  High powers of a hyperbolic
    element leave the float range of every unit-determinant lift while
    their projective classes stay perfectly representable, so the terms
    carry the normalised form, and the accumulation itself runs on
    normalised products to keep every multiplication well scaled.
    """
    m = np.asarray(g.matrix, dtype=complex)
    p = m.copy()
    for n in range(1, n_max + 1):
        w = sup_canonical(p)
        yield GroupElement(w, tuple(g.word) * n)
        if n < n_max:
            p = w @ m
