"""Laws of the branch-sequence algebra.

Checked on randomized sequences with a commutative payload join, plus a
hand-picked witness showing sequential composition is order-sensitive.
"""

import random

import pytest

from spacetime_vm import lattice
from spacetime_vm.branches import (PRUNED, SpaceBranch, par_and, par_or,
                                   seq_concat)


def random_seq(rng, max_len=4):
    out = []
    for _ in range(rng.randint(0, max_len)):
        if rng.random() < 0.3:
            out.append(PRUNED)
        else:
            payload = {k: lattice.LMax(rng.randint(0, 5))
                       for k in rng.sample("abc", rng.randint(1, 2))}
            out.append(SpaceBranch(payload))
    return tuple(out)


def seq_triple_cases(count=400, seed=20260816):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_seq(rng), random_seq(rng), random_seq(rng)


def test_empty_sequence_is_the_identity_for_all_three():
    xs = (SpaceBranch({"a": lattice.LMax(1)}), PRUNED)
    assert seq_concat((), xs) == xs
    assert seq_concat(xs, ()) == xs
    assert par_or((), xs) == xs
    assert par_or(xs, ()) == xs
    assert par_and((), xs) == xs
    assert par_and(xs, ()) == xs


def test_sequential_composition_is_associative():
    for a, b, c in seq_triple_cases(seed=11):
        assert seq_concat(seq_concat(a, b), c) == seq_concat(a, seq_concat(b, c))


def test_sequential_composition_is_not_commutative():
    left = SpaceBranch({"a": lattice.LMax(1)})
    right = SpaceBranch({"a": lattice.LMax(2)})
    assert seq_concat((left,), (right,)) != seq_concat((right,), (left,))


def test_both_parallel_merges_are_commutative():
    for a, b, _ in seq_triple_cases(seed=22):
        assert par_or(a, b) == par_or(b, a)
        assert par_and(a, b) == par_and(b, a)


def test_both_parallel_merges_are_associative():
    for a, b, c in seq_triple_cases(seed=33):
        assert par_or(par_or(a, b), c) == par_or(a, par_or(b, c))
        assert par_and(par_and(a, b), c) == par_and(a, par_and(b, c))


def test_parallel_merges_are_idempotent_on_pruned_patterns():
    # joining a sequence with itself keeps the same kept/pruned shape
    for a, _, _ in seq_triple_cases(seed=44):
        for op in (par_or, par_and):
            merged = op(a, a)
            assert len(merged) == len(a)
            assert [x is PRUNED for x in merged] == [x is PRUNED for x in a]


def test_prune_is_identity_for_or_and_absorbing_for_and():
    for a, _, _ in seq_triple_cases(seed=55):
        if not a:
            continue
        assert par_or(a, (PRUNED,)) == a
        assert all(x is PRUNED for x in par_and(a, (PRUNED,)))


def test_or_keeps_what_either_side_keeps_and_keeps_nothing_else():
    for a, b, _ in seq_triple_cases(seed=66):
        merged = par_or(a, b)
        size = max(len(a), len(b)) if a and b else len(a) + len(b)
        assert len(merged) == size
        for i, branch in enumerate(merged):
            xa = a[min(i, len(a) - 1)] if a else PRUNED
            xb = b[min(i, len(b) - 1)] if b else PRUNED
            assert (branch is PRUNED) == (xa is PRUNED and xb is PRUNED)


def test_and_prunes_what_either_side_prunes():
    for a, b, _ in seq_triple_cases(seed=77):
        if not a or not b:
            continue
        merged = par_and(a, b)
        for i, branch in enumerate(merged):
            xa = a[min(i, len(a) - 1)]
            xb = b[min(i, len(b) - 1)]
            assert (branch is PRUNED) == (xa is PRUNED or xb is PRUNED)


def test_shorter_side_pads_with_its_last_element():
    deep = tuple(SpaceBranch({"a": lattice.LMax(i)}) for i in range(3))
    stub = (SpaceBranch({"b": lattice.LMax(9)}),)
    merged = par_and(deep, stub)
    assert len(merged) == 3
    for i, branch in enumerate(merged):
        assert branch.payload == {"a": lattice.LMax(i), "b": lattice.LMax(9)}


def test_payloads_merge_with_the_supplied_combine():
    a = (SpaceBranch(("x",)),)
    b = (SpaceBranch(("y",)),)
    merged = par_and(a, b, combine=lambda p, q: p + q)
    assert merged == (SpaceBranch(("x", "y")),)


def test_default_combine_rejects_unjoinable_payloads():
    with pytest.raises(TypeError):
        par_and((SpaceBranch(3),), (SpaceBranch(4),))


def test_lattice_payloads_join_by_default():
    a = (SpaceBranch(lattice.LMax(1)),)
    b = (SpaceBranch(lattice.LMax(5)),)
    assert par_or(a, b) == (SpaceBranch(lattice.LMax(5)),)
