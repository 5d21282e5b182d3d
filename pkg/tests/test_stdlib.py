"""Bundled programs and their compositions.

The numeric expectations are small enough to audit by hand: a binary
tree explored under a depth bound of d visits 2^(d+1) - 1 nodes, and
the number of depth-3 leaves reachable with at most k right turns is
the cumulative binomial sum C(3,0) + ... + C(3,k).
"""

import pytest

from spacetime_vm import assets, lattice, problems, solver
from spacetime_vm.assets import (asset, asset_source, compose_par,
                                 discrepancy_sweep, iterative_deepening,
                                 run_source)


def test_binary_tree_is_infinite_and_fair():
    m = run_source(asset_source("binary_tree"), max_instants=15, watch=["x"])
    assert m.stats.exhausted
    assert m.stats.instants == 15
    # depth-first: the left spine is explored immediately
    assert [r.depth for r in m.trace[:4]] == [0, 1, 2, 3]


def test_node_count_asset_counts_popped_nodes():
    src = compose_par([asset_source("binary_tree"),
                       asset_source("node_count")])
    m = run_source(src, max_instants=9, watch=["nodes"])
    assert m.trace[-1].values["nodes"] == lattice.LMax(9)


def test_depth_count_asset_tracks_tree_depth():
    src = compose_par([asset_source("binary_tree"),
                       asset_source("depth_count")])
    m = run_source(src, max_instants=7, watch=["depth"])
    for rec in m.trace:
        assert rec.values["depth"] == lattice.LMax(rec.depth)


@pytest.mark.parametrize("limit,nodes", [(0, 1), (1, 3), (2, 7), (3, 15)])
def test_depth_bounded_binary_tree(limit, nodes):
    src = compose_par([asset_source("binary_tree"),
                       asset_source("bounded_depth")])
    m = run_source(src, inputs={"depth_limit": limit})
    assert m.stats.instants == nodes
    assert not m.stats.exhausted
    assert m.stats.queue_left == 0
    assert max(r.depth for r in m.trace) == limit


def test_discrepancy_bound_skips_right_heavy_subtrees():
    src = compose_par([asset_source("binary_tree"),
                       asset_source("bd_and_bdis")])
    m = run_source(src, inputs={"depth_limit": 2, "dis_limit": 1},
                   watch=["dis"])
    # visits root, L, LL, LR, R, RL; RR needs two right turns
    assert m.stats.instants == 6
    assert [r.values["dis"] for r in m.trace] == [
        lattice.LMax(0), lattice.LMax(0), lattice.LMax(0),
        lattice.LMax(1), lattice.LMax(1), lattice.LMax(1)]


def test_iterative_deepening_restarts():
    reports = iterative_deepening(max_limit=4)
    assert [r.stats.instants for r in reports] == [1, 3, 7, 15]
    assert [r.leaves for r in reports] == [1, 2, 4, 8]
    assert not any(r.complete for r in reports)  # the tree never bottoms out


def test_discrepancy_sweep_grows_cumulative_binomials():
    reports = discrepancy_sweep(depth_limit=3, max_discrepancy=4)
    assert [r.leaves for r in reports] == [1, 4, 7, 8, 8]
    assert [r.complete for r in reports] == [False] * 4 + [True]


def test_asset_parameters_patch_initializers():
    src = asset("bounded_depth", depth_limit=2)
    composed = compose_par([asset_source("binary_tree"), src])
    m = run_source(composed)
    assert m.stats.instants == 7


def test_composition_renames_processes_apart():
    # both strategy assets define count/bound processes; composition
    # must keep them from clashing
    src = compose_par([asset_source("binary_tree"),
                       asset_source("bounded_depth"),
                       asset_source("node_count")])
    m = run_source(src, inputs={"depth_limit": 2}, watch=["nodes"])
    assert m.stats.instants == 7
    assert m.trace[-1].values["nodes"] == lattice.LMax(7)


def test_unknown_asset_name():
    with pytest.raises(KeyError):
        asset_source("not_a_real_asset")


# --- the constraint-solving assets -------------------------------------------

def vm_counts(name, prob, **kw):
    m = run_source(asset_source(name), inputs=prob.inputs(),
                   watch=["consistent"], **kw)
    return m


def test_enumeration_agrees_with_the_reference_engine():
    for n in (4, 5, 6):
        prob = problems.queens(n)
        m = vm_counts("csp_search", prob)
        ref = solver.reference_search(prob.vstore, prob.cstore, mode="all")
        assert (m.stats.instants, m.stats.solutions, m.stats.failures) == \
            (ref.nodes, ref.solutions, ref.failures)


def test_enumeration_agrees_with_exhaustive_counting():
    prob = problems.queens(5)
    m = vm_counts("csp_search", prob)
    want = len(solver.brute_force_solutions(prob.vstore, prob.cstore))
    assert m.stats.solutions == want == 10


def test_first_solution_stops_the_machine():
    prob = problems.queens(6)
    m = vm_counts("csp_search_first", prob)
    ref = solver.reference_search(prob.vstore, prob.cstore, mode="first")
    assert m.stats.solutions == 1
    assert m.stats.completion == 2  # stopped
    assert m.stats.instants == ref.nodes
    # a solved store: every queen placed, no constraint violated
    doms = m.value_of("domains").domains
    placement = {v: next(iter(d)) for v, d in doms.items()}
    assert all(len(d) == 1 for d in doms.values())
    for p in prob.cstore.propagators:
        assert p.entailed({v: frozenset({x}) for v, x in placement.items()})


def test_branch_and_bound_minimizes():
    prob = problems.golomb(5)
    m = run_source(asset_source("minimize_bab"), inputs=prob.inputs(),
                   watch=["consistent", "obj"])
    ref = solver.reference_search(prob.vstore, prob.cstore, mode="minimize",
                                  objective=prob.objective)
    assert m.stats.best_objective == ref.best_objective == 11
    assert m.stats.instants == ref.nodes
    assert m.stats.solutions == ref.solutions


def test_breadth_first_finds_the_same_solution_set():
    prob = problems.queens(5)
    dfs = vm_counts("csp_search", prob)
    bfs = vm_counts("csp_search", prob, queue="bfs")
    assert dfs.stats.solutions == bfs.stats.solutions == 10
    assert dfs.stats.instants == bfs.stats.instants
