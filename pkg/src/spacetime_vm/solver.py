"""Finite-domain constraint solving over lattice stores.

The solver state is split into two lattice values so that search
strategies can backtrack them independently:

* `VStoreValue` maps variable ids to domains.  Domains only shrink, so
  the pointwise order is superset inclusion and join is intersection.
* `CStoreValue` is the set of posted propagators; it only grows, so join
  is union.

Domains are finite sets of integers.  A second representation, `Bound`,
stands for the infinite set of integers below an upper bound; it exists
so a branch-and-bound strategy can tighten an objective with a pure
join-write (no read of the current domain required).  Joining a `Bound`
into a finite set just filters the set.

`propagate_fixpoint` runs the propagators to their mutual fixpoint.  All
filters are monotone (they only remove values), so on success the
fixpoint is unique regardless of scheduling order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import lattice


class SolverError(Exception):
    pass


# ---------------------------------------------------------------------------
# Domains


@dataclass(frozen=True)
class Bound:
    """The set of every integer at most `hi`."""

    hi: int


Domain = object  # frozenset[int] | Bound


def domain_join(a: Domain, b: Domain) -> Domain:
    if isinstance(a, Bound) and isinstance(b, Bound):
        return Bound(min(a.hi, b.hi))
    if isinstance(a, Bound):
        return frozenset(v for v in b if v <= a.hi)
    if isinstance(b, Bound):
        return frozenset(v for v in a if v <= b.hi)
    return a & b


def domain_leq(a: Domain, b: Domain) -> bool:
    """a <= b in the information order: a is the larger set."""
    if isinstance(a, Bound):
        if isinstance(b, Bound):
            return a.hi >= b.hi
        return all(v <= a.hi for v in b)
    if isinstance(b, Bound):
        return False  # a finite set cannot cover an infinite one
    return a >= b


def concrete(dom: Domain) -> frozenset:
    if isinstance(dom, Bound):
        raise SolverError("domain has an upper bound but no enumerated values")
    return dom


# ---------------------------------------------------------------------------
# Stores


class VStoreValue(lattice.Value):
    """Variable store: fd-var id -> domain, ordered pointwise."""

    tag = "VStore"

    def __init__(self, domains: Mapping[int, Domain] | None = None):
        self.domains: dict[int, Domain] = dict(domains or {})

    def leq(self, other: lattice.Value) -> bool:
        if not isinstance(other, VStoreValue):
            raise lattice.LatticeTypeError("cannot compare VStore with other variants")
        for var, dom in self.domains.items():
            if var not in other.domains:
                return False
            if not domain_leq(dom, other.domains[var]):
                return False
        return True

    def join(self, other: lattice.Value) -> "VStoreValue":
        if not isinstance(other, VStoreValue):
            raise lattice.LatticeTypeError("cannot join VStore with other variants")
        merged = dict(self.domains)
        for var, dom in other.domains.items():
            merged[var] = domain_join(merged[var], dom) if var in merged else dom
        return VStoreValue(merged)

    def is_bottom(self) -> bool:
        return not self.domains

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VStoreValue):
            return NotImplemented
        return self.domains == other.domains

    def __repr__(self) -> str:
        return f"VStoreValue({self.domains!r})"

    def show(self) -> str:
        parts = []
        for var in sorted(self.domains):
            dom = self.domains[var]
            if isinstance(dom, Bound):
                parts.append(f"x{var}:<={dom.hi}")
            else:
                parts.append(f"x{var}:{{{','.join(map(str, sorted(dom)))}}}")
        return "{" + " ".join(parts) + "}"


class CStoreValue(lattice.Value):
    """Constraint store: a growing set of propagators."""

    tag = "CStore"

    def __init__(self, propagators: Iterable["Propagator"] = ()):
        self.propagators: frozenset[Propagator] = frozenset(propagators)

    def leq(self, other: lattice.Value) -> bool:
        if not isinstance(other, CStoreValue):
            raise lattice.LatticeTypeError("cannot compare CStore with other variants")
        return self.propagators <= other.propagators

    def join(self, other: lattice.Value) -> "CStoreValue":
        if not isinstance(other, CStoreValue):
            raise lattice.LatticeTypeError("cannot join CStore with other variants")
        return CStoreValue(self.propagators | other.propagators)

    def is_bottom(self) -> bool:
        return not self.propagators

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CStoreValue):
            return NotImplemented
        return self.propagators == other.propagators

    def __hash__(self) -> int:
        return hash(self.propagators)

    def __repr__(self) -> str:
        return f"CStoreValue({sorted(map(repr, self.propagators))})"

    def show(self) -> str:
        return f"{{{len(self.propagators)} constraints}}"


lattice.register_variant("VStore", VStoreValue)
lattice.register_variant("CStore", CStoreValue)


# ---------------------------------------------------------------------------
# Propagators


@dataclass(frozen=True)
class Propagator:
    def vars(self) -> tuple[int, ...]:
        raise NotImplementedError

    def filter(self, doms: dict[int, frozenset]) -> dict[int, frozenset]:
        """Return the narrowed domains for the variables this touches."""
        raise NotImplementedError

    def entailed(self, doms: dict[int, frozenset]) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class LeConst(Propagator):
    """x <= v"""

    x: int
    v: int

    def vars(self):
        return (self.x,)

    def filter(self, doms):
        dom = doms[self.x]
        if dom and max(dom) > self.v:
            return {self.x: frozenset(a for a in dom if a <= self.v)}
        return {}

    def entailed(self, doms):
        return all(a <= self.v for a in doms[self.x])


@dataclass(frozen=True)
class GtConst(Propagator):
    """x > v"""

    x: int
    v: int

    def vars(self):
        return (self.x,)

    def filter(self, doms):
        dom = doms[self.x]
        if dom and min(dom) <= self.v:
            return {self.x: frozenset(a for a in dom if a > self.v)}
        return {}

    def entailed(self, doms):
        return all(a > self.v for a in doms[self.x])


@dataclass(frozen=True)
class NeOffset(Propagator):
    """x != y + c, filtered once either side is fixed."""

    x: int
    y: int
    c: int

    def vars(self):
        return (self.x, self.y)

    def filter(self, doms):
        dx, dy = doms[self.x], doms[self.y]
        out = {}
        if len(dy) == 1:
            (b,) = dy
            if b + self.c in dx:
                out[self.x] = dx - {b + self.c}
        if len(dx) == 1:
            (a,) = dx
            if a - self.c in dy:
                out[self.y] = dy - {a - self.c}
        return out

    def entailed(self, doms):
        if len(doms[self.x]) == 1 and len(doms[self.y]) == 1:
            (a,), (b,) = doms[self.x], doms[self.y]
            return a != b + self.c
        shifted = {b + self.c for b in doms[self.y]}
        return not (doms[self.x] & shifted)


@dataclass(frozen=True)
class LtVar(Propagator):
    """x < y, bounds reasoning."""

    x: int
    y: int

    def vars(self):
        return (self.x, self.y)

    def filter(self, doms):
        dx, dy = doms[self.x], doms[self.y]
        out = {}
        if dx and dy:
            cap = max(dy)
            if max(dx) >= cap:
                out[self.x] = frozenset(a for a in dx if a < cap)
            floor = min(dx)
            if min(dy) <= floor:
                out[self.y] = frozenset(b for b in dy if b > floor)
        return out

    def entailed(self, doms):
        dx, dy = doms[self.x], doms[self.y]
        return bool(dx) and bool(dy) and max(dx) < min(dy)


@dataclass(frozen=True)
class EqDiff(Propagator):
    """z = x - y, bounds reasoning."""

    z: int
    x: int
    y: int

    def vars(self):
        return (self.z, self.x, self.y)

    def filter(self, doms):
        dz, dx, dy = doms[self.z], doms[self.x], doms[self.y]
        if not (dz and dx and dy):
            return {self.z: frozenset(), self.x: frozenset(), self.y: frozenset()}
        min_x, max_x = min(dx), max(dx)
        min_y, max_y = min(dy), max(dy)
        min_z, max_z = min(dz), max(dz)
        out = {}
        lo, hi = min_x - max_y, max_x - min_y
        if min_z < lo or max_z > hi:
            out[self.z] = frozenset(c for c in dz if lo <= c <= hi)
        lo, hi = min_z + min_y, max_z + max_y
        if min_x < lo or max_x > hi:
            out[self.x] = frozenset(a for a in dx if lo <= a <= hi)
        lo, hi = min_x - max_z, max_x - min_z
        if min_y < lo or max_y > hi:
            out[self.y] = frozenset(b for b in dy if lo <= b <= hi)
        return out

    def entailed(self, doms):
        dz, dx, dy = doms[self.z], doms[self.x], doms[self.y]
        if len(dz) == len(dx) == len(dy) == 1:
            (c,), (a,), (b,) = dz, dx, dy
            return c == a - b
        return False


# ---------------------------------------------------------------------------
# Propagation


def propagate_fixpoint(domains: Mapping[int, Domain],
                       propagators: Iterable[Propagator]) -> dict[int, frozenset]:
    """Narrow `domains` to the mutual fixpoint of `propagators`.

    Returns the narrowed domains; an empty domain in the result signals
    failure, and narrowing stops as soon as one shows up.  Every filter
    only removes values, so on success the result is the unique fixpoint
    whatever order the worklist fires in, and whether a run fails does
    not depend on the order either (only the leftover junk in a failed
    store does).
    """
    doms: dict[int, frozenset] = {v: concrete(d) for v, d in domains.items()}
    props = list(propagators)
    watching: dict[int, list[int]] = {}
    for idx, p in enumerate(props):
        for v in p.vars():
            if v not in doms:
                raise SolverError(f"propagator {p!r} mentions an undeclared variable")
            watching.setdefault(v, []).append(idx)

    pending = list(range(len(props)))
    queued = set(pending)
    while pending:
        idx = pending.pop()
        queued.discard(idx)
        prop = props[idx]
        changed = []
        for var, new in prop.filter(doms).items():
            if new != doms[var]:
                doms[var] = new
                changed.append(var)
                if not new:
                    return doms  # failed; no point continuing
        for var in changed:
            for widx in watching.get(var, ()):
                if widx not in queued:
                    queued.add(widx)
                    pending.append(widx)
    return doms


def consistency(vstore: VStoreValue, cstore: CStoreValue) -> lattice.Es:
    """Classify a store: false on any empty domain, true on a solved store."""
    doms = {v: concrete(d) for v, d in vstore.domains.items()}
    if any(not d for d in doms.values()):
        return lattice.Es("false")
    if all(len(d) == 1 for d in doms.values()):
        if all(p.entailed(doms) for p in cstore.propagators):
            return lattice.Es("true")
        return lattice.Es("false")
    return lattice.Es("unknown")


def fail_first_var(vstore: VStoreValue) -> int | None:
    """Smallest non-singleton domain; ties broken by lowest variable id."""
    best: tuple[int, int] | None = None
    for var, dom in vstore.domains.items():
        size = len(concrete(dom))
        if size > 1 and (best is None or (size, var) < best):
            best = (size, var)
    return best[1] if best else None


def middle_value(vstore: VStoreValue, var: int) -> int:
    dom = concrete(vstore.domains[var])
    if not dom:
        raise SolverError(f"variable x{var} has an empty domain")
    return (min(dom) + max(dom)) // 2


# ---------------------------------------------------------------------------
# Reference depth-first search
#
# A plain recursive solver over the same stores and propagators, splitting
# on the same variable and value choices.  The search runtime must agree
# with it node for node; the benchmark harness checks exactly that.


@dataclass
class RefStats:
    nodes: int = 0
    solutions: int = 0
    failures: int = 0
    best_objective: int | None = None


class _StopSearch(Exception):
    pass


def reference_search(vstore: VStoreValue, cstore: CStoreValue,
                     mode: str = "all", objective: int | None = None,
                     node_limit: int | None = None) -> RefStats:
    """Depth-first left-to-right search mirroring the csp strategy assets.

    mode: 'all' enumerates every solution, 'first' stops at the first,
    'minimize' runs branch and bound on `objective`.
    """
    if mode == "minimize" and objective is None:
        raise SolverError("minimize mode needs an objective variable")
    stats = RefStats()

    def visit(domains: dict[int, Domain], props: frozenset[Propagator]) -> None:
        stats.nodes += 1
        if node_limit is not None and stats.nodes > node_limit:
            raise _StopSearch()
        if mode == "minimize" and stats.best_objective is not None:
            domains = dict(domains)
            domains[objective] = domain_join(domains[objective],
                                             Bound(stats.best_objective - 1))
        doms = propagate_fixpoint(domains, props)
        store = VStoreValue(doms)
        status = consistency(store, CStoreValue(props)).value
        if status == "false":
            stats.failures += 1
            return
        if status == "true":
            stats.solutions += 1
            if mode == "minimize":
                val = min(doms[objective])
                if stats.best_objective is None or val < stats.best_objective:
                    stats.best_objective = val
            if mode == "first":
                raise _StopSearch()
            return
        var = fail_first_var(store)
        mid = middle_value(store, var)
        visit(doms, props | {LeConst(var, mid)})
        visit(doms, props | {GtConst(var, mid)})

    try:
        visit(dict(vstore.domains), cstore.propagators)
    except _StopSearch:
        pass
    return stats


def brute_force_solutions(vstore: VStoreValue, cstore: CStoreValue,
                          limit: int | None = None) -> list[dict[int, int]]:
    """Enumerate all solutions by exhaustive assignment.  Test oracle only."""
    vars_sorted = sorted(vstore.domains)
    doms = [sorted(concrete(vstore.domains[v])) for v in vars_sorted]
    props = list(cstore.propagators)
    out = []
    for combo in itertools.product(*doms):
        point = {v: frozenset({a}) for v, a in zip(vars_sorted, combo)}
        if all(p.entailed(point) for p in props):
            out.append({v: a for v, a in zip(vars_sorted, combo)})
            if limit is not None and len(out) >= limit:
                break
    return out
