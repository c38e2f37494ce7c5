"""The Boolean set cover layer on a worked three-set instance.

Three positives p1..p3 and three negatives n1..n3; three base sets of
unit weight. No single set separates, but a weight-5 combination does.

Run with: python3 demos/demo_set_cover.py
"""

import random

from ltlflearn import (
    BaseSet,
    BscInstance,
    NoSolution,
    beam_search,
    div_conq,
    existence_check,
)
from ltlflearn.boolcover import dominates, scored_base_sets


def bits(*rows: int) -> int:
    out = 0
    for r in rows:
        out |= 1 << r
    return out


def show(members: int, n: int) -> str:
    names = [f"p{i + 1}" for i in range(3)] + [f"n{i + 1}" for i in range(3)]
    return "{" + ", ".join(names[i] for i in range(n) if members >> i & 1) + "}"


def render(comb) -> str:
    kind = type(comb).__name__
    if kind == "Leaf":
        return f"phi{comb.index + 1}"
    op = " u " if kind == "Union" else " n "
    return "(" + render(comb.left) + op + render(comb.right) + ")"


def main() -> None:
    inst = BscInstance(
        n_pos=3,
        n_neg=3,
        base_sets=(
            BaseSet(bits(0), 1),           # phi1 = {p1}
            BaseSet(bits(1, 2, 5), 1),     # phi2 = {p2, p3, n3}
            BaseSet(bits(0, 1, 2, 4), 1),  # phi3 = {p1, p2, p3, n2}
        ),
    )
    for i, bs in enumerate(inst.base_sets):
        print(f"phi{i + 1} = {show(bs.members, 6)}, weight {bs.weight}")

    # sat counts correctly classified examples: covered positives plus
    # excluded negatives. Score orders the beam; domination prunes.
    scored = scored_base_sets(inst)
    for i, s in enumerate(scored):
        print(f"sat(phi{i + 1}) = {show(s.sat_bits, 6)}, score {s.score}")
    print("phi1 dominates phi2:", dominates(scored[0], scored[1]))

    print("\nexistence check:", existence_check(inst), "(None means separable)")
    result = beam_search(inst)
    print(f"beam search: {render(result.combination)}, "
          f"weight {result.combination.weight}, solution={result.is_solution}")

    # Planting a witness: add n1 to every set containing p1. Now any
    # combination covering p1 also admits n1, and the divide-and-conquer
    # proves it by exhausting a 1x1 subproblem.
    planted = BscInstance(3, 3, tuple(
        BaseSet(bs.members | bits(3), bs.weight) if bs.members & 1 else bs
        for bs in inst.base_sets
    ))
    out = div_conq(planted, seed=0)
    assert isinstance(out, NoSolution)
    w = out.witness
    print(f"\nplanted instance: NoSolution, witness p{w.pos_index + 1} "
          f"vs n{w.neg_index + 1} (no set covers one without the other)")

    # Larger random instances go through the same machinery.
    rng = random.Random(7)
    solved = 0
    for _ in range(200):
        sets = tuple(BaseSet(rng.getrandbits(12) | 1, rng.randint(1, 4))
                     for _ in range(8))
        inst = BscInstance(6, 6, sets)
        if existence_check(inst) is None:
            out = div_conq(inst, seed=1)
            solved += not isinstance(out, NoSolution)
    print(f"random instances: {solved} separable ones, all solved")


if __name__ == "__main__":
    main()
