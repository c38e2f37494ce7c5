import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlflearn.boolcover import (
    BaseSet,
    BeamResult,
    BscInstance,
    Empty,
    Inter,
    Leaf,
    NoSolution,
    Scored,
    Union,
    Witness,
    _BoundedQueue,
    beam_search,
    collapse,
    div_conq,
    dominates,
    eval_combination,
    existence_check,
    fast_non_dominated,
    full_subproblem,
    is_solution_combination,
    make_scored,
    reconstruct,
    reduce_antichain_exact,
    reduce_instance,
    sat_bits,
    scored_base_sets,
    witness_solution,
)
from ltlflearn.enumeration import bank_from_formulas
from ltlflearn.formulas import And, Atom, Finally, Or
from ltlflearn.traces import Alphabet, Sample, Trace


def mask(*rows: int) -> int:
    out = 0
    for r in rows:
        out |= 1 << r
    return out


def worked_instance() -> BscInstance:
    # P = rows 0..2, N = rows 3..5; three unit-weight sets whose only
    # minimal cover is the first set union the other two intersected.
    return BscInstance(3, 3, (
        BaseSet(mask(0), 1),
        BaseSet(mask(1, 2, 5), 1),
        BaseSet(mask(0, 1, 2, 4), 1),
    ))


# --- instances and combinations ----------------------------------------------

def test_instance_masks():
    inst = worked_instance()
    assert inst.pos_mask == 0b000111
    assert inst.neg_mask == 0b111000
    assert inst.universe == 0b111111


def test_combination_weights():
    leaf = Leaf(0, 3)
    assert Empty().weight == 0
    assert leaf.weight == 3
    assert Union(leaf, Leaf(1, 1)).weight == 5
    assert Inter(Union(leaf, leaf), leaf).weight == 11


def test_eval_combination():
    inst = worked_instance()
    comb = Union(Leaf(0, 1), Inter(Leaf(1, 1), Leaf(2, 1)))
    assert eval_combination(comb, inst.base_sets) == 0b000111
    assert is_solution_combination(comb, inst)
    assert eval_combination(Empty(), inst.base_sets) == 0


def test_eval_combination_handles_deep_trees():
    inst = BscInstance(1, 0, (BaseSet(1, 1),))
    comb = Leaf(0, 1)
    for _ in range(5000):
        comb = Union(comb, Leaf(0, 1))
    assert eval_combination(comb, inst.base_sets) == 1


def test_sat_bits_counts_both_sides():
    # eval covers pos row 0 and neg row 2: correct on 0, wrong on 2.
    assert sat_bits(0b101, pos_mask=0b011, neg_mask=0b100) == 0b001
    assert sat_bits(0b011, pos_mask=0b011, neg_mask=0b100) == 0b111


# --- collapse ------------------------------------------------------------------

def test_collapse_keeps_smallest_per_vector():
    # a and F a have equal vectors on this sample but different tables.
    s = Sample(Alphabet(("a",)), (Trace((1, 0, 1)),), (Trace((0, 0, 0)),))
    bank = bank_from_formulas(s, [Atom(0), Finally(Atom(0))])
    assert len(bank) == 2
    inst, stats = collapse(bank, s)
    assert stats["n_formulas"] == 2
    assert stats["n_base_sets"] == 1
    assert stats["collapse_ratio"] == 2.0
    assert inst.base_sets[0].provenance == Atom(0)
    assert inst.base_sets[0].weight == 1
    assert inst.base_sets[0].members == 0b01


def test_collapse_rejects_empty_bank():
    s = Sample(Alphabet(("a",)), (Trace((1,)),), ())
    with pytest.raises(ValueError):
        collapse(bank_from_formulas(s, []), s)


# --- existence ------------------------------------------------------------------

def test_empty_family_gives_the_trivial_witness():
    inst = BscInstance(1, 1, ())
    assert existence_check(inst) == Witness(0, 0)


def test_uncovered_positive_with_no_negatives():
    inst = BscInstance(2, 0, (BaseSet(mask(0), 1),))
    assert existence_check(inst) == Witness(1, None)


def test_inseparable_pair_is_reported():
    # every set containing p0 also contains n0 (row 1)
    inst = BscInstance(1, 2, (BaseSet(mask(0, 1), 1), BaseSet(mask(0, 1, 2), 2)))
    assert existence_check(inst) == Witness(0, 0)


def test_separable_instance_passes():
    assert existence_check(worked_instance()) is None


def test_witness_solution_is_valid_but_heavy():
    inst = worked_instance()
    theta = witness_solution(inst)
    assert eval_combination(theta, inst.base_sets) & inst.universe == inst.pos_mask
    assert theta.weight >= 5


# --- domination ------------------------------------------------------------------

def scored(eval_bits: int, weight: int, inst: BscInstance, payload=None) -> Scored:
    sat = sat_bits(eval_bits, inst.pos_mask, inst.neg_mask)
    return Scored(eval_bits, sat, sat.bit_count(), weight, payload)


def test_dominates_needs_weight_and_sat():
    inst = BscInstance(2, 1, ())
    big = scored(0b011, 1, inst)  # both positives, no negative
    small = scored(0b001, 2, inst)
    assert dominates(big, small)
    assert not dominates(small, big)
    assert dominates(big, big)


def test_exact_reduction_keeps_first_of_ties():
    inst = BscInstance(2, 1, ())
    a = scored(0b001, 1, inst, "a")
    b = scored(0b001, 1, inst, "b")  # mutually dominating twin
    kept = reduce_antichain_exact([a, b])
    assert [s.payload for s in kept] == ["a"]


POOLS = st.lists(
    st.tuples(st.integers(0, 255), st.integers(1, 6)), min_size=1, max_size=24
)


@given(POOLS)
@settings(max_examples=200)
def test_exact_reduction_is_an_antichain_with_dominating_survivors(pool):
    inst = BscInstance(4, 4, ())
    items = [scored(ev, w, inst, i) for i, (ev, w) in enumerate(pool)]
    kept = reduce_antichain_exact(items)
    for i, x in enumerate(kept):
        for j, y in enumerate(kept):
            if i != j:
                assert not (dominates(y, x) and not dominates(x, y))
    survivors = {s.payload for s in kept}
    for item in items:
        if item.payload not in survivors:
            assert any(dominates(s, item) for s in kept)


@given(POOLS)
@settings(max_examples=200)
def test_fast_reduction_monotone_and_exact_at_full_k(pool):
    inst = BscInstance(4, 4, ())
    items = [scored(ev, w, inst, i) for i, (ev, w) in enumerate(pool)]
    sizes = [len(fast_non_dominated(items, k)) for k in range(1, len(items) + 1)]
    assert all(a >= b for a, b in zip(sizes, sizes[1:]))
    exact = reduce_antichain_exact(items)
    full = fast_non_dominated(items, len(items))
    assert [s.payload for s in full] == [s.payload for s in exact]


@given(POOLS)
@settings(max_examples=100)
def test_fast_reduction_is_sound_for_every_k(pool):
    inst = BscInstance(4, 4, ())
    items = [scored(ev, w, inst, i) for i, (ev, w) in enumerate(pool)]
    exact_kept = {s.payload for s in reduce_antichain_exact(items)}
    for k in (1, 2, 5):
        kept = {s.payload for s in fast_non_dominated(items, k)}
        assert exact_kept <= kept  # never removes a non-dominated element


def test_reduce_instance_drops_dominated_sets():
    inst = BscInstance(2, 1, (
        BaseSet(0b011, 1),  # dominates everything below
        BaseSet(0b001, 2),
        BaseSet(0b011, 3),
    ))
    reduced = reduce_instance(inst, 10)
    assert len(reduced.base_sets) == 1
    assert reduced.base_sets[0].weight == 1
    assert reduce_instance(inst, None).base_sets == reduced.base_sets


# --- bounded queues ----------------------------------------------------------

def test_bounded_queue_admission_and_eviction():
    q = _BoundedQueue(2)
    assert q.add(5, 0, "a") and q.add(3, 1, "b")
    assert q.full()
    assert not q.add(3, 2, "c")  # ties lose against a full queue
    assert q.add(4, 3, "d")  # strict improvement evicts the min ("b")
    assert sorted(t[2] for t in q.heap) == ["a", "d"]
    assert q.ordered() == ["a", "d"]  # insertion order


def test_bounded_queue_evicts_oldest_among_lowest():
    q = _BoundedQueue(2)
    q.add(1, 0, "old")
    q.add(1, 1, "new")
    assert q.add(2, 2, "best")
    assert sorted(t[2] for t in q.heap) == ["best", "new"]


# --- beam search ------------------------------------------------------------

def test_beam_finds_single_set_solution_at_seeding():
    inst = BscInstance(2, 1, (BaseSet(0b011, 4),))
    res = beam_search(inst)
    assert res.is_solution
    assert res.combination == Leaf(0, 4)
    assert res.iterations == 0


def test_beam_on_the_worked_instance():
    res = beam_search(worked_instance())
    assert res.is_solution
    assert res.combination == Union(Leaf(0, 1), Inter(Leaf(1, 1), Leaf(2, 1)))
    assert res.combination.weight == 5


def test_beam_without_budget_returns_best():
    # max_weight 2 forbids any union or intersection (weight >= 3).
    inst = worked_instance()
    res = beam_search(inst, max_weight=2)
    assert not res.is_solution
    assert res.score < inst.universe.bit_count()


def test_beam_on_empty_family_returns_empty_best():
    inst = BscInstance(1, 1, ())
    res = beam_search(inst)
    assert not res.is_solution
    assert res.combination == Empty()
    assert res.score == 1  # right on the one negative


def test_beam_stats_are_recorded():
    stats = {}
    beam_search(worked_instance(), stats=stats)
    assert stats["beam_candidates"] > 0


def test_make_scored_matches_eval():
    inst = worked_instance()
    comb = Union(Leaf(0, 1), Leaf(1, 1))
    s = make_scored(comb, inst)
    assert s.eval_bits == eval_combination(comb, inst.base_sets) & inst.universe
    assert s.weight == 3
    assert s.payload is comb


# --- divide and conquer -------------------------------------------------------

def random_instance(rng: random.Random) -> BscInstance:
    n_pos = rng.randint(1, 6)
    n_neg = rng.randint(1, 6)
    n_bits = n_pos + n_neg
    sets = tuple(
        BaseSet(rng.getrandbits(n_bits) | 1 << rng.randrange(n_bits), rng.randint(1, 5))
        for _ in range(rng.randint(2, 12))
    )
    return BscInstance(n_pos, n_neg, sets)


def plant_witness(inst: BscInstance, rng: random.Random) -> BscInstance:
    """Make some (p, n) unseparable by adding n to every set containing p."""
    p = rng.randrange(inst.n_pos)
    n_row = inst.n_pos + rng.randrange(inst.n_neg)
    sets = tuple(
        BaseSet(bs.members | (1 << n_row), bs.weight)
        if bs.members >> p & 1 else bs
        for bs in inst.base_sets
    )
    return BscInstance(inst.n_pos, inst.n_neg, sets)


def witness_is_correct(w: Witness, inst: BscInstance) -> bool:
    p_bit = 1 << w.pos_index
    if w.neg_index is None:
        return not any(bs.members & p_bit for bs in inst.base_sets)
    n_bit = 1 << (inst.n_pos + w.neg_index)
    return not any(
        bs.members & p_bit and not bs.members & n_bit for bs in inst.base_sets
    )


def test_div_conq_solves_every_separable_instance():
    rng = random.Random(11)
    done = 0
    while done < 60:
        inst = random_instance(rng)
        if existence_check(inst) is not None:
            continue
        done += 1
        out = div_conq(inst, seed=done)
        assert not isinstance(out, NoSolution)
        assert is_solution_combination(out, inst)


def test_div_conq_reports_correct_witnesses():
    rng = random.Random(12)
    for i in range(60):
        inst = plant_witness(random_instance(rng), rng)
        out = div_conq(inst, seed=i)
        assert isinstance(out, NoSolution)
        assert witness_is_correct(out.witness, inst)


def test_div_conq_is_deterministic_per_seed():
    rng = random.Random(13)
    inst = random_instance(rng)
    while existence_check(inst) is not None:
        inst = random_instance(rng)
    assert div_conq(inst, seed=5) == div_conq(inst, seed=5)


def test_div_conq_base_case_picks_lightest_separating_set():
    inst = BscInstance(1, 1, (
        BaseSet(mask(0, 1), 1),  # covers the negative too
        BaseSet(mask(0), 3),
        BaseSet(mask(0), 2),
    ))
    out = div_conq(inst, seed=0)
    assert out == Leaf(2, 2)


def test_div_conq_splits_when_the_solver_stalls():
    # A solver that never solves forces splitting all the way down.
    def stubborn(view):
        return BeamResult(Empty(), False, 0, 0)

    inst = worked_instance()
    stats = {}
    out = div_conq(inst, solver=stubborn, seed=3, stats=stats)
    assert not isinstance(out, NoSolution)
    assert is_solution_combination(out, inst)
    assert stats["dc_splits"] >= 1
    assert stats["dc_depth"] >= 2


# --- reconstruction ------------------------------------------------------------

def test_reconstruct_maps_union_and_inter():
    s = Sample(
        Alphabet(("a", "b")),
        (Trace((0b01, 0b10)), Trace((0b10, 0b01))),
        (Trace((0b01, 0b01)), Trace((0b10, 0b10))),
    )
    bank = bank_from_formulas(s, [Finally(Atom(0)), Finally(Atom(1))])
    inst, _ = collapse(bank, s)
    comb = Inter(Leaf(0, 2), Leaf(1, 2))
    phi = reconstruct(comb, inst)
    assert phi == And(Finally(Atom(0)), Finally(Atom(1)))
    assert phi.size == comb.weight
    assert reconstruct(Union(Leaf(0, 2), Leaf(1, 2)), inst) == Or(
        Finally(Atom(0)), Finally(Atom(1))
    )


def test_reconstruct_rejects_empty():
    inst = worked_instance()
    with pytest.raises(ValueError):
        reconstruct(Empty(), inst)


def test_full_subproblem_masks_members():
    inst = worked_instance()
    view = full_subproblem(inst)
    assert view.pos_mask == inst.pos_mask
    assert view.sets[1] == (mask(1, 2, 5), 1, 1)


def test_scored_base_sets_indexes_payloads():
    items = scored_base_sets(worked_instance())
    assert [s.payload for s in items] == [0, 1, 2]
    assert items[0].score == 4  # one positive right, all three negatives right
