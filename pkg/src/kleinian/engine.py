"""Group-level limit set machinery: word balls, accumulation, diagnostics.

The limit set of a finitely generated subgroup is estimated from below by the
union of the cyclic limit sets of the elements in a word ball.  When at least
three of the collected lines are in general position, that union is the whole
limit set; otherwise the collection is only a lower bound and says so.

Enumeration is breadth-first over freely reduced words, with deduplication by
the canonical unit-determinant lift.  The dedup store hashes entries rounded
to a 1e-8 grid; to keep grid-boundary drift from splitting one class into two
entries, each element is registered under two half-cell-offset grids and all
three cube-root scalings, and every hit is confirmed in the sup-norm PSL
metric.  The identity keeps its empty word; a nonempty reduced word whose
matrix confirms against an existing entry is a relation, while one that lands
within 1e-8 of the identity without confirming is a non-discreteness witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cyclic import KIND_LINES, LimitSetDesc, _limit_from_class
from .elements import (
    DEFAULT_TOL,
    ELLIPTIC_KINDS,
    ELLIPTIC_SUSPECT,
    IDENTITY_PROX_TOL,
    _spectral,
    classify,
)
from .errors import (
    BallTooLargeError,
    EllipticInputError,
    LineNotInAccumulationError,
    NonDiscreteWitness,
)
from .projective import (
    GroupElement,
    ProjLine,
    ProjPoint,
    apply_line,
    apply_point,
    chordal_dist,
    cofactor_matrix,
    count_general_position,
    identity_element,
    incidence_residual,
    inverse,
    make_element,
    normalize_line,
    normalize_point,
    psl_distance,
)

CLUSTER_RADIUS = 1e-7
FRONTIER_CAP = 10_000_000
MAX_RADIUS = 12
MAX_GENERATORS = 6

PROVENANCE_VERIFIED = (
    "hypothesis verified at radius {radius}: three collected lines in general "
    "position; the estimate is the full limit set"
)
PROVENANCE_LOWER_BOUND = (
    "lower bound only - hypothesis not verified at radius {radius}"
)


@dataclass(frozen=True)
class GroupPresentation:
    """A finite list of generators with printable labels."""

    generators: tuple[GroupElement, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if not 1 <= len(self.generators) <= MAX_GENERATORS:
            raise ValueError(f"need between 1 and {MAX_GENERATORS} generators")
        if len(self.labels) != len(self.generators):
            raise ValueError("one label per generator")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct")


def presentation(matrices, labels=None) -> GroupPresentation:
    """Build a presentation; generator i gets the one-letter word (i+1,)."""
    gens = []
    for i, m in enumerate(matrices):
        if isinstance(m, GroupElement):
            gens.append(GroupElement(m.matrix, (i + 1,)))
        else:
            gens.append(make_element(m, (i + 1,)))
    if labels is None:
        labels = tuple(chr(ord("a") + i) for i in range(len(gens)))
    return GroupPresentation(tuple(gens), tuple(labels))


@dataclass(frozen=True)
class DualAccumulation:
    """Accumulated limit lines and isolated points over a word ball.

    witnesses maps each line to the shortest word whose cyclic limit set
    produced it.  Points lying on a collected line are absorbed by it and do
    not appear as isolated.
    """

    lines: tuple[ProjLine, ...]
    isolated_points: tuple[ProjPoint, ...]
    witnesses: dict[ProjLine, tuple[int, ...]]
    cluster_radius: float = CLUSTER_RADIUS


@dataclass(frozen=True)
class GroupDiagnostics:
    discreteness_verdict: str  # "NoWitness" | "NonDiscreteWitness"
    witness_word: tuple[int, ...] | None
    witness_reason: str | None
    global_fixed_point: ProjPoint | None
    invariant_line: ProjLine | None
    gp3: bool
    gp4: bool


@dataclass(frozen=True)
class LimitSetEstimate:
    description: LimitSetDesc
    provenance: str
    radius: int


class _DedupStore:
    """Grid-hashed store of canonical PSL lifts with metric confirmation."""

    CELL = 1e-8
    CONFIRM = 1e-9

    _ROOTS = (1.0 + 0.0j, np.exp(2j * math.pi / 3), np.exp(-2j * math.pi / 3))

    def __init__(self):
        self.items: list[GroupElement] = []
        self._buckets: dict[tuple, list[int]] = {}

    def _keys(self, m: np.ndarray):
        for root in self._ROOTS:
            mm = m if root == 1.0 else m * root
            flat = np.concatenate([mm.real.reshape(-1), mm.imag.reshape(-1)])
            scaled = flat / self.CELL
            for offset in (0.0, 0.5):
                yield tuple(np.round(scaled - offset).astype(np.int64).tolist())

    def find(self, m: np.ndarray) -> int | None:
        seen: set[int] = set()
        for key in self._keys(m):
            for idx in self._buckets.get(key, ()):
                if idx in seen:
                    continue
                seen.add(idx)
                if psl_distance(self.items[idx].matrix, m) < self.CONFIRM:
                    return idx
        return None

    def add(self, g: GroupElement) -> int:
        idx = len(self.items)
        self.items.append(g)
        for key in self._keys(g.matrix):
            self._buckets.setdefault(key, []).append(idx)
        return idx


def example_group(perturb: float = 0.0) -> GroupPresentation:
    """The built-in two-generator test group: a diagonal stretch and a 3-cycle.

    Its limit set is the union of the three coordinate lines.  A nonzero
    perturb is added to the first diagonal entry of the stretch for
    exploratory runs.
    """
    a = np.diag([0.5 + perturb, 1.0, 2.0]).astype(complex)
    b = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    return presentation([a, b], ("a", "b"))


def enumerate_ball(G: GroupPresentation, radius: int) -> list[GroupElement]:
    """All distinct elements spelled by freely reduced words of length <= radius.

    Returned in breadth-first order, the identity (empty word) first; each
    element carries a shortest witnessing word.  Raises BallTooLargeError
    past the frontier cap.
    """
    if not 0 <= radius <= MAX_RADIUS:
        raise ValueError(f"radius must lie in [0, {MAX_RADIUS}]")
    letters = []
    for i, g in enumerate(G.generators):
        letters.append((i + 1, GroupElement(g.matrix, (i + 1,))))
        letters.append((-(i + 1), inverse(GroupElement(g.matrix, (i + 1,)))))

    store = _DedupStore()
    store.add(identity_element())
    frontier = [0]
    for _ in range(radius):
        new: list[int] = []
        for idx in frontier:
            g = store.items[idx]
            for s, letter in letters:
                if g.word and g.word[-1] == -s:
                    continue
                cand = make_element(g.matrix @ letter.matrix, g.word + (s,))
                if store.find(cand.matrix) is None:
                    new.append(store.add(cand))
                    if len(store.items) > FRONTIER_CAP:
                        raise BallTooLargeError(
                            f"ball exceeded {FRONTIER_CAP} elements"
                        )
        frontier = new
    return list(store.items)


@dataclass
class _BallAnalysis:
    ball: list[GroupElement]
    witness: tuple[tuple[int, ...], str] | None
    lines: list[ProjLine]
    line_witnesses: dict[ProjLine, tuple[int, ...]]
    isolated: list[ProjPoint]


def _analyze_ball(
    G: GroupPresentation, radius: int, tol: float, max_order: int
) -> _BallAnalysis:
    ball = enumerate_ball(G, radius)
    eye = np.eye(3, dtype=complex)

    witness = None
    for g in ball[1:]:
        if psl_distance(g.matrix, eye) < IDENTITY_PROX_TOL:
            witness = (g.word, "nontrivial element within 1e-8 of the identity")
            break

    lines: list[ProjLine] = []
    line_witnesses: dict[ProjLine, tuple[int, ...]] = {}
    isolated_raw: list[tuple[ProjPoint, tuple[int, ...]]] = []
    if witness is None:
        for g in ball[1:]:
            cls = classify(g, tol, max_order)
            if cls.kind == ELLIPTIC_SUSPECT:
                witness = (g.word, "elliptic element with no detected finite order")
                break
            desc = _limit_from_class(g, cls, tol)
            for l in desc.lines:
                hit = None
                for seen in lines:
                    if chordal_dist(seen, l) <= CLUSTER_RADIUS:
                        hit = seen
                        break
                if hit is None:
                    lines.append(l)
                    line_witnesses[l] = g.word
            for p in desc.isolated_points:
                isolated_raw.append((p, g.word))

    isolated: list[ProjPoint] = []
    for p, _w in isolated_raw:
        if any(incidence_residual(p, l) <= CLUSTER_RADIUS for l in lines):
            continue  # absorbed by a collected line
        if any(chordal_dist(p, q) <= CLUSTER_RADIUS for q in isolated):
            continue
        isolated.append(p)

    return _BallAnalysis(ball, witness, lines, line_witnesses, isolated)


def c_gamma(
    G: GroupPresentation,
    radius: int,
    tol: float = DEFAULT_TOL,
    max_order: int = 1000,
) -> DualAccumulation:
    """Union of cyclic limit sets over the word ball of the given radius.

    Lines are deduplicated at the cluster radius and keep their shortest
    witnessing word.  An element presenting non-discreteness evidence aborts
    the accumulation with NonDiscreteWitness.
    """
    analysis = _analyze_ball(G, radius, tol, max_order)
    if analysis.witness is not None:
        raise NonDiscreteWitness(*analysis.witness)
    return DualAccumulation(
        tuple(analysis.lines),
        tuple(analysis.isolated),
        dict(analysis.line_witnesses),
    )


def _eigenspaces(m: np.ndarray, tol: float) -> list[np.ndarray]:
    return [np.column_stack(c.point_basis) for c in _spectral(m, tol)]


def _complement_rows(basis: np.ndarray) -> np.ndarray:
    # rows whose Hermitian pairing vanishes exactly on span(basis)
    u, _s, _vh = np.linalg.svd(basis, full_matrices=True)
    k = basis.shape[1]
    return u[:, k:].conj().T


def _intersect(spaces: list[np.ndarray]) -> np.ndarray:
    rows = np.vstack([_complement_rows(b) for b in spaces])
    if rows.shape[0] == 0:
        return np.eye(3, dtype=complex)
    _u, s, vh = np.linalg.svd(rows)
    null = [np.conj(vh[i]) for i in range(3) if (i >= len(s) or s[i] < 1e-7)]
    if not null:
        return np.zeros((3, 0), dtype=complex)
    return np.column_stack(null)


def _common_candidates(mats: list[np.ndarray], tol: float) -> list[np.ndarray]:
    spaces = _eigenspaces(mats[0], tol)
    for m in mats[1:]:
        refined = []
        for s in spaces:
            for t in _eigenspaces(m, tol):
                inter = _intersect([s, t])
                if inter.shape[1] > 0:
                    refined.append(inter)
        spaces = refined
        if not spaces:
            return []
    out = []
    for s in spaces:
        for j in range(s.shape[1]):
            out.append(s[:, j])
    return out


def _global_fixed_point(G: GroupPresentation, tol: float) -> ProjPoint | None:
    try:
        candidates = _common_candidates(
            [np.asarray(g.matrix, dtype=complex) for g in G.generators], tol
        )
    except Exception:
        return None
    for v in candidates:
        p = normalize_point(v)
        if all(
            chordal_dist(apply_point(g, p), p) <= CLUSTER_RADIUS
            for g in G.generators
        ):
            return p
    return None


def _global_invariant_line(G: GroupPresentation, tol: float) -> ProjLine | None:
    try:
        candidates = _common_candidates(
            [np.asarray(g.matrix, dtype=complex).T for g in G.generators], tol
        )
    except Exception:
        return None
    for v in candidates:
        l = normalize_line(v)
        if all(
            chordal_dist(apply_line(g, l), l) <= CLUSTER_RADIUS
            for g in G.generators
        ):
            return l
    return None


def diagnostics(
    G: GroupPresentation,
    radius: int,
    tol: float = DEFAULT_TOL,
    max_order: int = 1000,
) -> GroupDiagnostics:
    """Discreteness evidence, common fixed geometry and general position.

    The verdict is NonDiscreteWitness when the ball holds a nontrivial
    element within 1e-8 of the identity in the PSL metric, or an elliptic
    element with no order <= max_order; otherwise NoWitness.
    """
    analysis = _analyze_ball(G, radius, tol, max_order)
    if analysis.witness is not None:
        word, reason = analysis.witness
        return GroupDiagnostics(
            "NonDiscreteWitness",
            word,
            reason,
            _global_fixed_point(G, tol),
            _global_invariant_line(G, tol),
            False,
            False,
        )
    return GroupDiagnostics(
        "NoWitness",
        None,
        None,
        _global_fixed_point(G, tol),
        _global_invariant_line(G, tol),
        count_general_position(analysis.lines, 3),
        count_general_position(analysis.lines, 4),
    )


def kulkarni_estimate(
    G: GroupPresentation,
    radius: int,
    tol: float = DEFAULT_TOL,
    max_order: int = 1000,
) -> LimitSetEstimate:
    """Limit set estimate from the accumulated lines, tagged by provenance.

    With three collected lines in general position the estimate is the whole
    limit set; otherwise it is reported as a lower bound only.
    """
    acc = c_gamma(G, radius, tol, max_order)
    desc = LimitSetDesc(KIND_LINES, acc.lines, acc.isolated_points)
    if count_general_position(acc.lines, 3):
        return LimitSetEstimate(desc, PROVENANCE_VERIFIED.format(radius=radius), radius)
    return LimitSetEstimate(desc, PROVENANCE_LOWER_BOUND.format(radius=radius), radius)


def minimality_probe(
    G: GroupPresentation,
    l: ProjLine,
    radius: int,
    tol: float = DEFAULT_TOL,
    coverage_tol: float = 1e-3,
) -> float:
    """Fraction of accumulation lines reached by the ball orbit of l.

    l must itself belong to the accumulation (within the cluster radius).
    Coverage 1.0 is evidence that the closure of the orbit of any limit line
    already contains every collected line.
    """
    acc = c_gamma(G, radius, tol)
    if not any(chordal_dist(l, seen) <= CLUSTER_RADIUS for seen in acc.lines):
        raise LineNotInAccumulationError("probe line is not an accumulation line")
    ball = enumerate_ball(G, radius)
    orbit = [apply_line(g, l) for g in ball]
    covered = 0
    for target in acc.lines:
        if any(chordal_dist(target, o) <= coverage_tol for o in orbit):
            covered += 1
    return covered / len(acc.lines)


def attracting_line_probe(
    g: GroupElement,
    l: ProjLine,
    n_max: int = 1 << 25,
    tol: float = DEFAULT_TOL,
):
    """Forward and backward limits of the dual iteration started at l.

    Follows the power subsequence n = 1, 2, 4, 8, ... (computed by normalised
    squaring, so huge powers stay finite) and declares a side stabilised when
    consecutive sampled lines agree within 1e-7.  A stabilised line is
    returned only when it lies in the cyclic limit set; pencil-exceptional
    inputs stabilise elsewhere and honestly return None for that side.
    """
    cls = classify(g, tol)
    if cls.kind in ELLIPTIC_KINDS:
        raise EllipticInputError("attracting lines require a non-elliptic element")
    desc = _limit_from_class(g, cls, tol)
    if any(chordal_dist(l, lam) <= 1e-9 for lam in desc.lines):
        raise ValueError("probe line already lies in the cyclic limit set")

    from .pseudo import sup_canonical

    def side(step_matrix: np.ndarray):
        p = sup_canonical(step_matrix)
        prev = normalize_line(p @ l.vec)
        steps = 1
        while steps * 2 <= n_max:
            p = sup_canonical(p @ p)
            steps *= 2
            cur = normalize_line(p @ l.vec)
            if chordal_dist(cur, prev) < 1e-7:
                for lam in desc.lines:
                    if chordal_dist(cur, lam) <= 1e-6:
                        return lam
                return None
            prev = cur
        return None

    forward = side(cofactor_matrix(g.matrix))
    backward = side(np.asarray(g.matrix, dtype=complex).T)
    return forward, backward
