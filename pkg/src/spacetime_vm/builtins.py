"""Host functions callable from programs.

Each function declares the access mode and lattice type of its parameters.
At run time the machine hands the implementation the current values of its
read and readwrite parameters (by parameter index) and the implementation
returns contributions, also by index.  Contributions are joined into the
target variables, never assigned, so a host call can only move values up
their lattice.  Implementations are pure: same inputs, same contributions.

The fd_* family wraps the finite-domain solver: propagation to a fixpoint,
variable and value selection, posting branching constraints, and the
bounding step that makes branch and bound a plain monotone write.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import lattice, solver
from .ast import READ, READWRITE, WRITE


@dataclass(frozen=True)
class Param:
    access: str
    type_tag: str | None = None  # None accepts any lattice type


@dataclass(frozen=True)
class BuiltinSpec:
    name: str
    params: tuple[Param, ...] | None  # None: any number of read-only args
    impl: Callable[[dict[int, lattice.Value]], dict[int, lattice.Value]]
    # Parameter groups that must share one lattice type (for polymorphic
    # functions such as join_into).
    same_type_groups: tuple[tuple[int, ...], ...] = ()


def _nothing(values: dict[int, lattice.Value]) -> dict[int, lattice.Value]:
    return {}


def _join_into(values):
    return {0: values[1]}


def _inc(values):
    current = values[0]
    return {0: lattice.LMax(current.value + 1)}


def _fd_propagate(values):
    cstore: solver.CStoreValue = values[1]
    vstore: solver.VStoreValue = values[2]
    narrowed = solver.propagate_fixpoint(vstore.domains, cstore.propagators)
    new_store = solver.VStoreValue(narrowed)
    return {0: solver.consistency(new_store, cstore), 2: new_store}


def _fd_fail_first(values):
    var = solver.fail_first_var(values[1])
    if var is None:
        return {}
    return {0: lattice.LMax(var)}


def _fd_middle(values):
    vstore: solver.VStoreValue = values[1]
    var = values[2]
    if var.is_bottom():
        return {}
    return {0: lattice.LMax(solver.middle_value(vstore, int(var.value)))}


def _fd_post_le(values):
    var, value = values[1], values[2]
    if var.is_bottom() or value.is_bottom():
        return {}
    constraint = solver.LeConst(int(var.value), int(value.value))
    return {0: solver.CStoreValue((constraint,))}


def _fd_post_gt(values):
    var, value = values[1], values[2]
    if var.is_bottom() or value.is_bottom():
        return {}
    constraint = solver.GtConst(int(var.value), int(value.value))
    return {0: solver.CStoreValue((constraint,))}


def _fd_lb(values):
    vstore: solver.VStoreValue = values[1]
    var = values[2]
    if var.is_bottom():
        return {}
    dom = solver.concrete(vstore.domains[int(var.value)])
    if not dom:
        return {}
    return {0: lattice.LMin(min(dom))}


def _fd_update_bound(values):
    var, best = values[1], values[2]
    if var.is_bottom() or best.is_bottom():
        return {}
    # Requiring x <= best - 1 is a join: Bound only ever shrinks the domain.
    return {0: solver.VStoreValue({int(var.value): solver.Bound(int(best.value) - 1)})}


_REGISTRY: dict[str, BuiltinSpec] = {}


def _register(name: str, params, impl, groups=()) -> None:
    _REGISTRY[name] = BuiltinSpec(name, params, impl, groups)


# Core helpers.
_register("join_into",
          (Param(WRITE), Param(READ)), _join_into, groups=((0, 1),))
_register("inc", (Param(READWRITE, "LMax"),), _inc)
_register("probe", None, _nothing)

# Finite-domain solving.
_register("fd_propagate",
          (Param(WRITE, "ES"), Param(READ, "CStore"), Param(READWRITE, "VStore")),
          _fd_propagate)
_register("fd_fail_first",
          (Param(WRITE, "LMax"), Param(READ, "VStore")), _fd_fail_first)
_register("fd_middle",
          (Param(WRITE, "LMax"), Param(READ, "VStore"), Param(READ, "LMax")),
          _fd_middle)
_register("fd_post_le",
          (Param(WRITE, "CStore"), Param(READ, "LMax"), Param(READ, "LMax")),
          _fd_post_le)
_register("fd_post_gt",
          (Param(WRITE, "CStore"), Param(READ, "LMax"), Param(READ, "LMax")),
          _fd_post_gt)
_register("fd_lb",
          (Param(WRITE, "LMin"), Param(READ, "VStore"), Param(READ, "LMax")),
          _fd_lb)
_register("fd_update_bound",
          (Param(WRITE, "VStore"), Param(READ, "LMax"), Param(READ, "LMin")),
          _fd_update_bound)


def lookup(name: str) -> BuiltinSpec | None:
    return _REGISTRY.get(name)


def names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))
