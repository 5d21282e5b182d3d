"""Finite-domain kernel: filters, fixpoint, classification, search.

Filter soundness is checked against exhaustive enumeration: narrowing
may keep junk but must never drop a solution.  The reference search is
checked against the same enumeration for counts and optima.
"""

import random

import pytest

from spacetime_vm import lattice, solver
from spacetime_vm.solver import (Bound, CStoreValue, EqDiff, GtConst, LeConst,
                                 LtVar, NeOffset, VStoreValue,
                                 brute_force_solutions, consistency,
                                 domain_join, domain_leq, fail_first_var,
                                 middle_value, propagate_fixpoint,
                                 reference_search)


def random_csp(rng):
    nvars = rng.randint(2, 4)
    doms = {v: frozenset(rng.sample(range(6), rng.randint(1, 5)))
            for v in range(nvars)}
    props = []
    for _ in range(rng.randint(1, 5)):
        kind = rng.choice(("ne", "lt", "le", "gt", "diff"))
        x, y = rng.sample(range(nvars), 2) if nvars > 1 else (0, 0)
        if kind == "ne":
            props.append(NeOffset(x, y, rng.randint(-2, 2)))
        elif kind == "lt":
            props.append(LtVar(x, y))
        elif kind == "le":
            props.append(LeConst(x, rng.randint(0, 5)))
        elif kind == "gt":
            props.append(GtConst(x, rng.randint(-1, 4)))
        elif nvars >= 3:
            z = next(v for v in range(nvars) if v not in (x, y))
            props.append(EqDiff(z, x, y))
    return doms, props


def test_narrowing_never_drops_a_solution():
    rng = random.Random(20260816)
    for _ in range(200):
        doms, props = random_csp(rng)
        solutions = brute_force_solutions(VStoreValue(doms),
                                          CStoreValue(props))
        narrowed = propagate_fixpoint(doms, props)
        for sol in solutions:
            for var, val in sol.items():
                assert val in narrowed[var]


def test_fixpoint_is_schedule_independent():
    # narrowing stops at the first emptied domain, so failed stores may
    # carry schedule-dependent junk; success/failure and the successful
    # fixpoint itself must not depend on the order
    rng = random.Random(777)
    for _ in range(100):
        doms, props = random_csp(rng)
        base = propagate_fixpoint(doms, props)
        base_failed = any(not d for d in base.values())
        for seed in range(3):
            shuffled = list(props)
            random.Random(seed).shuffle(shuffled)
            again = propagate_fixpoint(doms, shuffled)
            failed = any(not d for d in again.values())
            assert failed == base_failed
            if not failed:
                assert again == base


def test_fixpoint_is_idempotent():
    rng = random.Random(31337)
    for _ in range(100):
        doms, props = random_csp(rng)
        once = propagate_fixpoint(doms, props)
        if any(not d for d in once.values()):
            continue
        assert propagate_fixpoint(once, props) == once


def test_individual_filters():
    doms = {0: frozenset({1, 2, 3, 4}), 1: frozenset({2, 3})}
    assert LeConst(0, 2).filter(doms)[0] == {1, 2}
    assert GtConst(0, 2).filter(doms)[0] == {3, 4}
    # y fixed: x loses y + c
    fixed = {0: frozenset({1, 2, 3}), 1: frozenset({2})}
    assert NeOffset(0, 1, 1).filter(fixed)[0] == {1, 2}
    # bounds reasoning for x < y; filters only report domains they cut,
    # and y > min(x) = 1 removes nothing from {2, 3}
    out = LtVar(0, 1).filter(doms)
    assert out[0] == {1, 2} and 1 not in out
    # z = x - y
    diff = {2: frozenset(range(-5, 6)),
            0: frozenset({4, 5}), 1: frozenset({1, 2})}
    assert EqDiff(2, 0, 1).filter(diff)[2] == {2, 3, 4}


def test_consistency_classification():
    props = CStoreValue([NeOffset(0, 1, 0)])
    assert consistency(VStoreValue({0: frozenset(), 1: frozenset({1})}),
                       props) == lattice.Es("false")
    assert consistency(VStoreValue({0: frozenset({1}), 1: frozenset({2})}),
                       props) == lattice.Es("true")
    assert consistency(VStoreValue({0: frozenset({1}), 1: frozenset({1})}),
                       props) == lattice.Es("false")
    assert consistency(VStoreValue({0: frozenset({1, 2}), 1: frozenset({1})}),
                       props) == lattice.Es("unknown")


def test_branching_helpers():
    vstore = VStoreValue({0: frozenset({1, 2, 3}),
                          1: frozenset({4, 5}),
                          2: frozenset({9})})
    assert fail_first_var(vstore) == 1
    assert middle_value(vstore, 0) == 2
    assert middle_value(vstore, 1) == 4
    solved = VStoreValue({0: frozenset({1})})
    assert fail_first_var(solved) is None


def test_bound_domains_join_by_filtering():
    assert domain_join(Bound(5), Bound(3)) == Bound(3)
    assert domain_join(Bound(5), frozenset({3, 5, 7})) == {3, 5}
    assert domain_join(frozenset({3, 5, 7}), Bound(4)) == {3}
    assert domain_leq(Bound(5), Bound(3))
    assert not domain_leq(Bound(3), Bound(5))
    assert domain_leq(Bound(5), frozenset({1, 2}))
    assert not domain_leq(frozenset({1, 2}), Bound(5))


def test_store_values_are_lattices():
    a = VStoreValue({0: frozenset({1, 2, 3})})
    b = VStoreValue({0: frozenset({2, 3, 4}), 1: frozenset({7})})
    joined = a.join(b)
    assert joined.domains == {0: frozenset({2, 3}), 1: frozenset({7})}
    assert a.leq(joined) and b.leq(joined)
    assert VStoreValue().is_bottom()

    ca = CStoreValue([LeConst(0, 3)])
    cb = CStoreValue([GtConst(0, 1)])
    assert set(ca.join(cb).propagators) == {LeConst(0, 3), GtConst(0, 1)}
    assert ca.leq(ca.join(cb))


def test_reference_search_counts_match_enumeration():
    rng = random.Random(4242)
    for _ in range(60):
        doms, props = random_csp(rng)
        vstore, cstore = VStoreValue(doms), CStoreValue(props)
        want = len(brute_force_solutions(vstore, cstore))
        stats = reference_search(vstore, cstore, mode="all")
        assert stats.solutions == want


def test_reference_search_first_stops_early():
    rng = random.Random(909)
    for _ in range(60):
        doms, props = random_csp(rng)
        vstore, cstore = VStoreValue(doms), CStoreValue(props)
        any_solution = bool(brute_force_solutions(vstore, cstore, limit=1))
        stats = reference_search(vstore, cstore, mode="first")
        assert stats.solutions == (1 if any_solution else 0)


def test_reference_search_minimize_finds_the_optimum():
    rng = random.Random(60602)
    for _ in range(60):
        doms, props = random_csp(rng)
        vstore, cstore = VStoreValue(doms), CStoreValue(props)
        sols = brute_force_solutions(vstore, cstore)
        want = min((s[0] for s in sols), default=None)
        stats = reference_search(vstore, cstore, mode="minimize", objective=0)
        assert stats.best_objective == want


def test_minimize_requires_an_objective():
    with pytest.raises(solver.SolverError):
        reference_search(VStoreValue({0: frozenset({1})}), CStoreValue(),
                         mode="minimize")


def test_propagator_with_undeclared_variable_is_an_error():
    with pytest.raises(solver.SolverError):
        propagate_fixpoint({0: frozenset({1})}, [LtVar(0, 9)])
