"""Boolean set cover over characteristic vectors.

After enumeration, every retained formula contributes a base set: the
rows of the sample (positives first, then negatives) on which it holds,
together with a weight (the formula's size). A solution is a positive
Boolean combination of base sets, built from unions and intersections
only, that evaluates to exactly the positive rows; its weight is the
total leaf weight plus one per connective, which equals the size of the
reconstructed formula (union -> or, intersection -> and).

The solver pipeline: `collapse` builds the instance from a formula
bank (one base set per distinct characteristic vector, carrying the
smallest formula for it), `existence_check` decides solvability by
pairwise separability, domination pruning (`reduce_antichain_exact`,
`fast_non_dominated`) shrinks the family, `beam_search` explores
combinations in weight order keeping the best-scoring few per weight,
and `div_conq` splits the instance when beam search stalls, combining
the halves' solutions with a union (positives split) or intersection
(negatives split). `reconstruct` maps a combination back to a formula.

sat(theta) is the set of rows a combination classifies correctly:
the covered positives plus the excluded negatives. theta2 is dominated
by theta1 when theta1 weighs no more and sat(theta2) is a subset of
sat(theta1); dominated elements can be dropped without losing any
solution, because replacing theta2 by theta1 inside a bigger
combination never shrinks its sat set and never raises its weight.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union as TUnion

from .deadlines import check_deadline
from .formulas import And, Formula, Or
from .traces import Sample


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BaseSet:
    """A subset of the sample rows with a weight and its source formula."""

    members: int  # bit i set iff row i belongs to the set
    weight: int
    provenance: Optional[Formula] = None

    def __post_init__(self):
        if self.weight < 1:
            raise ValueError("base-set weight must be >= 1")


@dataclass(frozen=True)
class BscInstance:
    """Weighted base sets over the universe P ∪ N (positives first)."""

    n_pos: int
    n_neg: int
    base_sets: tuple[BaseSet, ...]

    @property
    def pos_mask(self) -> int:
        return (1 << self.n_pos) - 1

    @property
    def neg_mask(self) -> int:
        return ((1 << self.n_neg) - 1) << self.n_pos

    @property
    def universe(self) -> int:
        return (1 << (self.n_pos + self.n_neg)) - 1


# ---------------------------------------------------------------------------
# Combinations
# ---------------------------------------------------------------------------

class BoolCombination:
    """Base class; positive combinations of base sets (no negation)."""

    weight: int


def _set_weight(node: BoolCombination, weight: int) -> None:
    object.__setattr__(node, "weight", weight)


@dataclass(frozen=True)
class Empty(BoolCombination):
    """The empty combination; evaluates to no rows, weight 0."""

    def __post_init__(self):
        _set_weight(self, 0)


@dataclass(frozen=True)
class Leaf(BoolCombination):
    index: int  # into the owning instance's base_sets
    weight: int


@dataclass(frozen=True)
class Union(BoolCombination):
    left: BoolCombination
    right: BoolCombination

    def __post_init__(self):
        _set_weight(self, 1 + self.left.weight + self.right.weight)


@dataclass(frozen=True)
class Inter(BoolCombination):
    left: BoolCombination
    right: BoolCombination

    def __post_init__(self):
        _set_weight(self, 1 + self.left.weight + self.right.weight)


def eval_combination(comb: BoolCombination, base_sets: Sequence[BaseSet]) -> int:
    """The rows a combination evaluates to; iterative, safe for deep trees."""
    stack: list[tuple[BoolCombination, bool]] = [(comb, False)]
    values: list[int] = []
    while stack:
        node, ready = stack.pop()
        if isinstance(node, Empty):
            values.append(0)
        elif isinstance(node, Leaf):
            values.append(base_sets[node.index].members)
        elif ready:
            right = values.pop()
            left = values.pop()
            values.append(left | right if isinstance(node, Union) else left & right)
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return values[0]


def sat_bits(eval_bits: int, pos_mask: int, neg_mask: int) -> int:
    """Rows classified correctly: covered positives + excluded negatives."""
    return (eval_bits & pos_mask) | (neg_mask & ~eval_bits)


@dataclass(frozen=True)
class Scored:
    """A combination (or base set) with its evaluation state."""

    eval_bits: int
    sat_bits: int
    score: int
    weight: int
    payload: object = None


def make_scored(comb: BoolCombination, inst: BscInstance) -> Scored:
    ev = eval_combination(comb, inst.base_sets) & inst.universe
    sat = sat_bits(ev, inst.pos_mask, inst.neg_mask)
    return Scored(ev, sat, sat.bit_count(), comb.weight, comb)


def scored_base_sets(inst: BscInstance) -> list[Scored]:
    """One Scored per base set, payload = the base set's index."""
    out = []
    for i, bs in enumerate(inst.base_sets):
        ev = bs.members & inst.universe
        sat = sat_bits(ev, inst.pos_mask, inst.neg_mask)
        out.append(Scored(ev, sat, sat.bit_count(), bs.weight, i))
    return out


def is_solution_combination(comb: BoolCombination, inst: BscInstance) -> bool:
    return eval_combination(comb, inst.base_sets) & inst.universe == inst.pos_mask


# ---------------------------------------------------------------------------
# Collapse
# ---------------------------------------------------------------------------

def collapse(bank, sample: Sample) -> tuple[BscInstance, dict]:
    """One base set per distinct characteristic vector of the bank.

    The representative (weight and provenance) is the first bank
    formula with that vector; the bank enumerates by increasing size,
    so it is also a smallest one. Returns the instance and statistics
    including the collapse ratio |bank| / |base sets|.
    """
    n_formulas = 0
    seen_vectors: set[int] = set()
    base: list[BaseSet] = []
    for entry in bank.entries():
        n_formulas += 1
        vec = 0
        for i, row_bits in enumerate(entry.rows):
            vec |= (row_bits & 1) << i
        if vec in seen_vectors:
            continue
        seen_vectors.add(vec)
        base.append(BaseSet(vec, entry.formula.size, entry.formula))
    if not base:
        raise ValueError("cannot collapse an empty bank")
    inst = BscInstance(sample.n_pos, sample.n_neg, tuple(base))
    stats = {
        "n_formulas": n_formulas,
        "n_base_sets": len(base),
        "collapse_ratio": n_formulas / len(base),
    }
    return inst, stats


# ---------------------------------------------------------------------------
# Existence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """An unseparable pair: indices into positives / negatives.

    neg_index is None in the degenerate case of a positive no base set
    covers while there are no negatives at all.
    """

    pos_index: int
    neg_index: Optional[int]


def existence_check(inst: BscInstance) -> Optional[Witness]:
    """None if a solution exists; otherwise a witness pair proving none does.

    A solution exists iff every positive p is in some base set and for
    every (p, n) some base set contains p and excludes n. The second
    condition alone is the textbook criterion; the first closes its
    N = ∅ edge case, where it is vacuous yet an uncovered positive can
    never be reached by a positive combination.
    """
    for p in range(inst.n_pos):
        bit = 1 << p
        inter: Optional[int] = None
        for bs in inst.base_sets:
            if bs.members & bit:
                inter = bs.members if inter is None else inter & bs.members
        if inter is None:
            return Witness(p, 0 if inst.n_neg else None)
        # Negatives inside every set containing p.
        bad = (inter & inst.neg_mask) >> inst.n_pos
        if bad:
            return Witness(p, (bad & -bad).bit_length() - 1)
    return None


def witness_solution(inst: BscInstance) -> BoolCombination:
    """The constructive solution ∪_p ∩_{F ∋ p} F; requires existence.

    A completeness backstop of weight O(|base sets| * |P|), not the
    primary output path.
    """
    thetas: list[BoolCombination] = []
    for p in range(inst.n_pos):
        bit = 1 << p
        part: Optional[BoolCombination] = None
        for i, bs in enumerate(inst.base_sets):
            if bs.members & bit:
                leaf = Leaf(i, bs.weight)
                part = leaf if part is None else Inter(part, leaf)
        if part is None:
            raise ValueError(f"positive {p} is in no base set")
        thetas.append(part)
    theta: BoolCombination = thetas[0]
    for part in thetas[1:]:
        theta = Union(theta, part)
    if eval_combination(theta, inst.base_sets) & inst.universe != inst.pos_mask:
        raise ValueError("existence check fails on this instance")
    return theta


# ---------------------------------------------------------------------------
# Domination
# ---------------------------------------------------------------------------

def dominates(a: Scored, b: Scored) -> bool:
    """Whether a dominates b: a weighs no more and b.sat ⊆ a.sat."""
    return a.weight <= b.weight and b.sat_bits & ~a.sat_bits == 0


def _removed(items: Sequence[Scored], i: int, js) -> bool:
    """Whether items[i] is removed given candidate dominator indices js.

    Removed iff strictly dominated by some other element, or mutually
    dominating with an earlier one (keep-first tie-breaking).
    """
    x = items[i]
    for j in js:
        if j == i:
            continue
        y = items[j]
        if dominates(y, x) and (not dominates(x, y) or j < i):
            return True
    return False


def reduce_antichain_exact(items: Sequence[Scored]) -> list[Scored]:
    """Keep the elements not dominated by another; quadratic scan.

    The output is an antichain; every removed element is dominated by
    some survivor (domination is transitive and the tie-break acyclic).
    """
    all_js = range(len(items))
    return [x for i, x in enumerate(items) if not _removed(items, i, all_js)]


def fast_non_dominated(items: Sequence[Scored], k: int) -> list[Scored]:
    """Approximate reduction via top-k-score candidate pools per weight.

    Only elements of the pools T(w, k) with w <= an element's weight are
    consulted as dominators: sound (never removes a non-dominated
    element) but incomplete (may keep dominated ones). With k >= the
    pool sizes it coincides with the exact reduction.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    by_weight: dict[int, list[int]] = {}
    for idx, item in enumerate(items):
        by_weight.setdefault(item.weight, []).append(idx)
    pools = {
        w: sorted(idxs, key=lambda i: (-items[i].score, i))[:k]
        for w, idxs in by_weight.items()
    }
    weights = sorted(pools)
    kept = []
    for i, x in enumerate(items):
        candidate_js = (
            j for w in weights if w <= x.weight for j in pools[w]
        )
        if not _removed(items, i, candidate_js):
            kept.append(x)
    return kept


def reduce_instance(inst: BscInstance, k: Optional[int]) -> BscInstance:
    """Instance with dominated base sets dropped (k=None: exact scan)."""
    items = scored_base_sets(inst)
    kept = reduce_antichain_exact(items) if k is None else fast_non_dominated(items, k)
    return BscInstance(
        inst.n_pos, inst.n_neg, tuple(inst.base_sets[s.payload] for s in kept)
    )


# ---------------------------------------------------------------------------
# Beam search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubProblem:
    """A restriction of an instance to a subset of its rows.

    Member bits keep their original row positions; `sets` carries
    (masked members, weight, base-set index) triples, so leaves always
    refer to the original instance and evaluate in its universe.
    """

    pos_mask: int
    neg_mask: int
    sets: tuple[tuple[int, int, int], ...]


def full_subproblem(inst: BscInstance) -> SubProblem:
    universe = inst.universe
    return SubProblem(
        inst.pos_mask,
        inst.neg_mask,
        tuple(
            (bs.members & universe, bs.weight, i)
            for i, bs in enumerate(inst.base_sets)
        ),
    )


@dataclass(frozen=True)
class BeamResult:
    combination: BoolCombination
    is_solution: bool
    score: int
    iterations: int


class _BoundedQueue:
    """AddBounded priority queue: keeps the `capacity` best by score.

    A full queue admits only a strictly higher score than its current
    minimum and evicts the oldest entry among the lowest-scoring.
    """

    __slots__ = ("capacity", "heap")

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.heap: list[tuple[int, int, object]] = []  # (score, seq, entry)

    def add(self, score: int, seq: int, entry: object) -> bool:
        if len(self.heap) < self.capacity:
            heapq.heappush(self.heap, (score, seq, entry))
            return True
        if score > self.heap[0][0]:
            heapq.heappushpop(self.heap, (score, seq, entry))
            return True
        return False

    @property
    def min_score(self) -> int:
        return self.heap[0][0]

    def full(self) -> bool:
        return len(self.heap) >= self.capacity

    def ordered(self) -> list:
        """Entries in insertion order."""
        return [t[2] for t in sorted(self.heap, key=lambda t: t[1])]

    def __len__(self) -> int:
        return len(self.heap)


class _DominationPools:
    """Per-weight top-k sat sets of retained members, for pruning."""

    __slots__ = ("k", "pools")

    def __init__(self, k: int):
        self.k = k
        self.pools: dict[int, list[tuple[int, int, int]]] = {}  # (score, seq, sat)

    def add(self, weight: int, score: int, seq: int, sat: int) -> None:
        pool = self.pools.setdefault(weight, [])
        pool.append((score, seq, sat))
        if len(pool) > self.k:
            # Drop the lowest score; among ties the newest, keeping
            # the earliest top-k stable.
            pool.remove(min(pool, key=lambda t: (t[0], -t[1])))

    def dominated(self, weight: int, sat: int) -> bool:
        for w, pool in self.pools.items():
            if w > weight:
                continue
            for _, _, pool_sat in pool:
                if sat & ~pool_sat == 0:
                    return True
        return False


def _beam(
    view: SubProblem,
    beam_width: int,
    max_weight: int,
    domination_k: int,
    deadline: Optional[float],
    stats: Optional[dict],
) -> BeamResult:
    if beam_width < 1:
        raise ValueError("beam width must be >= 1")
    posm, negm = view.pos_mask, view.neg_mask
    universe = posm | negm
    queues: dict[int, _BoundedQueue] = {}
    seen: set[int] = set()
    pools = _DominationPools(domination_k)
    seq = 0
    n_candidates = 0

    # The empty combination is the fallback best: right on all negatives.
    best_comb: BoolCombination = Empty()
    best_score = negm.bit_count()
    best_weight = 0

    def consider(eval_full: int, weight: int, make_comb) -> Optional[BoolCombination]:
        """Returns a solution combination, or None after bookkeeping."""
        nonlocal seq, best_comb, best_score, best_weight, n_candidates
        n_candidates += 1
        masked = eval_full & universe
        sat = (masked & posm) | (negm & ~eval_full)
        if sat == universe:
            return make_comb()
        score = sat.bit_count()
        if score > best_score or (score == best_score and weight < best_weight):
            best_comb = make_comb()
            best_score = score
            best_weight = weight
        queue = queues.get(weight)
        if queue is None:
            queue = queues[weight] = _BoundedQueue(beam_width)
        elif queue.full() and score <= queue.min_score:
            return None
        if masked in seen:
            return None
        if pools.dominated(weight, sat):
            return None
        comb = make_comb()
        if queue.add(score, seq, (comb, eval_full)):
            seen.add(masked)
            pools.add(weight, score, seq, sat)
            seq += 1
        return None

    for members, weight, index in view.sets:
        found = consider(members, weight, lambda: Leaf(index, weight))
        if found is not None:
            if stats is not None:
                stats["beam_candidates"] = stats.get("beam_candidates", 0) + n_candidates
            return BeamResult(found, True, universe.bit_count(), 0)

    iterations = 0
    k = 2
    while k + 1 <= max_weight and any(len(q) for q in queues.values()):
        check_deadline(deadline)
        iterations += 1
        for i in range(1, k // 2 + 1):
            j = k - i
            qi = queues.get(i)
            qj = queues.get(j)
            if qi is None or qj is None or not len(qi) or not len(qj):
                continue
            for comb1, eval1 in qi.ordered():
                for comb2, eval2 in qj.ordered():
                    for make, eval_full in (
                        (Union, eval1 | eval2),
                        (Inter, eval1 & eval2),
                    ):
                        found = consider(
                            eval_full,
                            k + 1,
                            lambda: make(comb1, comb2),
                        )
                        if found is not None:
                            if stats is not None:
                                stats["beam_candidates"] = (
                                    stats.get("beam_candidates", 0) + n_candidates
                                )
                                stats["beam_iterations"] = (
                                    stats.get("beam_iterations", 0) + iterations
                                )
                            return BeamResult(found, True, universe.bit_count(), iterations)
        k += 1

    if stats is not None:
        stats["beam_candidates"] = stats.get("beam_candidates", 0) + n_candidates
        stats["beam_iterations"] = stats.get("beam_iterations", 0) + iterations
    return BeamResult(best_comb, False, best_score, iterations)


def beam_search(
    inst: BscInstance,
    beam_width: int = 100,
    max_weight: int = 70,
    domination_k: int = 10,
    deadline: Optional[float] = None,
    stats: Optional[dict] = None,
) -> BeamResult:
    """Weight-ordered beam search for a solution combination.

    Seeds per-weight bounded queues with the base sets, then combines
    queue members pairwise under union and intersection, weight k+1
    from child weights summing to k. Returns immediately on a solution;
    otherwise, once the next weight would exceed max_weight (or nothing
    is left to combine), returns the best explored combination: highest
    score, then lowest weight, then earliest discovery.
    """
    return _beam(full_subproblem(inst), beam_width, max_weight, domination_k, deadline, stats)


# ---------------------------------------------------------------------------
# Divide and conquer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoSolution:
    witness: Witness


def _split_mask(mask: int, rng: random.Random) -> tuple[int, int]:
    """Shuffle the rows of the mask and split them n//2 / n - n//2."""
    rows = [i for i in range(mask.bit_length()) if mask >> i & 1]
    rng.shuffle(rows)
    half = len(rows) // 2
    m1 = 0
    for r in rows[:half]:
        m1 |= 1 << r
    return m1, mask ^ m1


def _restricted(
    sets: Sequence[tuple[int, int, int]], pos_mask: int, neg_mask: int, k: int
) -> tuple[tuple[int, int, int], ...]:
    """Mask the family to a subproblem's rows, re-dedup, re-reduce.

    Keeps, per distinct masked vector, the minimal-weight (then first)
    set; drops empty vectors; then applies the approximate domination
    reduction. Any set separating a surviving (p, n) pair keeps a
    separating representative: a dominating survivor classifies a
    superset of rows correctly, p and n included.
    """
    view_mask = pos_mask | neg_mask
    out: list[tuple[int, int, int]] = []
    by_vec: dict[int, int] = {}
    for members, weight, index in sets:
        m = members & view_mask
        if m == 0:
            continue
        at = by_vec.get(m)
        if at is None:
            by_vec[m] = len(out)
            out.append((m, weight, index))
        elif weight < out[at][1]:
            out[at] = (m, weight, index)
    items = []
    for m, w, idx in out:
        sat = sat_bits(m, pos_mask, neg_mask)
        items.append(Scored(m, sat, sat.bit_count(), w, (m, w, idx)))
    return tuple(s.payload for s in fast_non_dominated(items, k))


def div_conq(
    inst: BscInstance,
    solver: Optional[Callable[[SubProblem], BeamResult]] = None,
    seed: int = 0,
    *,
    beam_width: int = 100,
    max_weight: int = 70,
    domination_k: int = 10,
    deadline: Optional[float] = None,
    stats: Optional[dict] = None,
) -> TUnion[BoolCombination, NoSolution]:
    """Solve via the inner solver, splitting the instance when it stalls.

    When the solver's result is not a solution, the larger of P and N
    (P on ties) is split by a seeded shuffle into halves; the first
    half's subproblem is solved first, the second is simplified by it
    (positives already covered / negatives already excluded are
    dropped, and if none remain the first solution is returned alone),
    and the two solutions combine with a union (P split) or an
    intersection (N split). The 1-positive/1-negative base case returns
    the minimal-weight separating base set directly, or NoSolution with
    the witness pair; by induction this finds a solution whenever the
    existence check passes.
    """
    if solver is None:
        def solver(view: SubProblem) -> BeamResult:
            return _beam(view, beam_width, max_weight, domination_k, deadline, stats)

    rng = random.Random(seed)
    base_sets = inst.base_sets
    n_pos = inst.n_pos

    def recurse(view: SubProblem, depth: int) -> TUnion[BoolCombination, NoSolution]:
        check_deadline(deadline)
        if stats is not None:
            stats["dc_depth"] = max(stats.get("dc_depth", 0), depth)
        n_p = view.pos_mask.bit_count()
        n_n = view.neg_mask.bit_count()
        if n_p == 1 and n_n == 1:
            best: Optional[tuple[int, int]] = None
            for members, weight, index in view.sets:
                if members & view.pos_mask and not members & view.neg_mask:
                    if best is None or weight < best[0]:
                        best = (weight, index)
            if best is None:
                p_row = view.pos_mask.bit_length() - 1
                n_row = view.neg_mask.bit_length() - 1
                return NoSolution(Witness(p_row, n_row - n_pos))
            return Leaf(best[1], best[0])

        result = solver(view)
        if result.is_solution:
            return result.combination
        if stats is not None:
            stats["dc_splits"] = stats.get("dc_splits", 0) + 1

        if n_p >= n_n:
            half1, half2 = _split_mask(view.pos_mask, rng)
            first = recurse(
                SubProblem(half1, view.neg_mask,
                           _restricted(view.sets, half1, view.neg_mask, domination_k)),
                depth + 1,
            )
            if isinstance(first, NoSolution):
                return first
            remaining = half2 & ~eval_combination(first, base_sets)
            if remaining == 0:
                return first
            second = recurse(
                SubProblem(remaining, view.neg_mask,
                           _restricted(view.sets, remaining, view.neg_mask, domination_k)),
                depth + 1,
            )
            if isinstance(second, NoSolution):
                return second
            return Union(first, second)

        half1, half2 = _split_mask(view.neg_mask, rng)
        first = recurse(
            SubProblem(view.pos_mask, half1,
                       _restricted(view.sets, view.pos_mask, half1, domination_k)),
            depth + 1,
        )
        if isinstance(first, NoSolution):
            return first
        remaining = half2 & eval_combination(first, base_sets)
        if remaining == 0:
            return first
        second = recurse(
            SubProblem(view.pos_mask, remaining,
                       _restricted(view.sets, view.pos_mask, remaining, domination_k)),
            depth + 1,
        )
        if isinstance(second, NoSolution):
            return second
        return Inter(first, second)

    return recurse(full_subproblem(inst), 1)


# ---------------------------------------------------------------------------
# Reconstruction
# ---------------------------------------------------------------------------

def reconstruct(comb: BoolCombination, inst: BscInstance) -> Formula:
    """Map a combination back to a formula: leaves to their source
    formulas, unions to |, intersections to &. The result's size equals
    the combination's weight."""
    if isinstance(comb, Leaf):
        phi = inst.base_sets[comb.index].provenance
        if phi is None:
            raise ValueError("base set has no source formula")
        return phi
    if isinstance(comb, Union):
        return Or(reconstruct(comb.left, inst), reconstruct(comb.right, inst))
    if isinstance(comb, Inter):
        return And(reconstruct(comb.left, inst), reconstruct(comb.right, inst))
    raise ValueError("cannot reconstruct the empty combination")
