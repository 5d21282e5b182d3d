"""Lattice values that spacetime variables range over.

Every variable in a spacetime program holds a value drawn from a join
semilattice with a least element.  Programs can only grow these values
(writes are joins), which is what makes concurrent instants deterministic:
the final value of an instant does not depend on the interleaving of the
writes that produced it.

The entailment test `x |= y` asks whether y is below x in the lattice
order.  It can answer `UNKNOWN` only when the two values are incomparable;
on totally ordered domains it always decides.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping


class LatticeTypeError(TypeError):
    """Raised when two values of different lattice variants are combined."""


class Entailment(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


NEG_INF = float("-inf")
POS_INF = float("inf")


def _check_same_variant(a: "Value", b: "Value") -> None:
    if type(a) is not type(b):
        raise LatticeTypeError(
            f"cannot combine {type(a).__name__} with {type(b).__name__}"
        )


class Value:
    """Base class for lattice values.  Subclasses implement `leq` and `join`."""

    tag: str = "?"

    def leq(self, other: "Value") -> bool:
        raise NotImplementedError

    def join(self, other: "Value") -> "Value":
        raise NotImplementedError

    def is_bottom(self) -> bool:
        raise NotImplementedError

    def show(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class LMax(Value):
    """Increasing integers: join is max, bottom is -infinity."""

    value: int | float = NEG_INF
    tag = "LMax"

    def leq(self, other: Value) -> bool:
        _check_same_variant(self, other)
        return self.value <= other.value

    def join(self, other: Value) -> "LMax":
        _check_same_variant(self, other)
        return self if other.value <= self.value else other

    def is_bottom(self) -> bool:
        return self.value == NEG_INF

    def show(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class LMin(Value):
    """Decreasing integers: join is min, bottom is +infinity."""

    value: int | float = POS_INF
    tag = "LMin"

    def leq(self, other: Value) -> bool:
        _check_same_variant(self, other)
        return self.value >= other.value

    def join(self, other: Value) -> "LMin":
        _check_same_variant(self, other)
        return self if other.value >= self.value else other

    def is_bottom(self) -> bool:
        return self.value == POS_INF

    def show(self) -> str:
        return str(self.value)


_ES_RANK = {"unknown": 0, "true": 1, "false": 2}


@dataclass(frozen=True)
class Es(Value):
    """Entailment status: the chain unknown < true < false.

    `false` sits on top because a result that turned out false refutes the
    weaker claims below it; joining a true and a false verdict keeps the
    refutation.
    """

    value: str = "unknown"
    tag = "ES"

    def __post_init__(self) -> None:
        if self.value not in _ES_RANK:
            raise ValueError(f"not an entailment status: {self.value!r}")

    def leq(self, other: Value) -> bool:
        _check_same_variant(self, other)
        return _ES_RANK[self.value] <= _ES_RANK[other.value]

    def join(self, other: Value) -> "Es":
        _check_same_variant(self, other)
        return self if _ES_RANK[other.value] <= _ES_RANK[self.value] else other

    def is_bottom(self) -> bool:
        return self.value == "unknown"

    def show(self) -> str:
        return self.value


@dataclass(frozen=True)
class FSet(Value):
    """Finite sets ordered by superset inclusion.

    Information grows by *removing* candidates, so join is intersection and
    bottom is the full universe.  The universe is left implicit: the bottom
    value stands for "every element still possible" without enumerating
    them (members=None).
    """

    members: frozenset | None = None
    tag = "FSet"

    @staticmethod
    def of(items: Iterable) -> "FSet":
        return FSet(frozenset(items))

    def leq(self, other: Value) -> bool:
        _check_same_variant(self, other)
        if self.members is None:
            return True
        if other.members is None:
            return False
        return self.members >= other.members

    def join(self, other: Value) -> "FSet":
        _check_same_variant(self, other)
        if self.members is None:
            return other
        if other.members is None:
            return self
        return FSet(self.members & other.members)

    def is_bottom(self) -> bool:
        return self.members is None

    def show(self) -> str:
        if self.members is None:
            return "universe"
        return "{" + ",".join(str(x) for x in sorted(self.members)) + "}"


class Store(Value):
    """Partial map from keys to lattice values, ordered pointwise.

    A key that is absent is implicitly bound to bottom, so the empty store
    is the bottom element and join is the pointwise join over the union of
    the two domains.
    """

    tag = "Store"

    def __init__(self, bindings: Mapping[Any, Value] | None = None):
        self.bindings: dict[Any, Value] = dict(bindings or {})

    def leq(self, other: Value) -> bool:
        _check_same_variant(self, other)
        for key, val in self.bindings.items():
            if val.is_bottom():
                continue
            if key not in other.bindings:
                return False
            if not val.leq(other.bindings[key]):
                return False
        return True

    def join(self, other: Value) -> "Store":
        _check_same_variant(self, other)
        merged = dict(self.bindings)
        for key, val in other.bindings.items():
            merged[key] = merged[key].join(val) if key in merged else val
        return Store(merged)

    def is_bottom(self) -> bool:
        return all(v.is_bottom() for v in self.bindings.values())

    def get(self, key: Any, default: Value | None = None) -> Value | None:
        return self.bindings.get(key, default)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Store):
            return NotImplemented
        mine = {k: v for k, v in self.bindings.items() if not v.is_bottom()}
        theirs = {k: v for k, v in other.bindings.items() if not v.is_bottom()}
        return mine == theirs

    def __repr__(self) -> str:
        return f"Store({self.bindings!r})"

    def show(self) -> str:
        parts = [f"{k}:{v.show()}" for k, v in sorted(self.bindings.items(), key=lambda kv: str(kv[0]))]
        return "{" + ", ".join(parts) + "}"


def join(a: Value, b: Value) -> Value:
    """Least upper bound of two values of the same variant."""
    return a.join(b)


def entails(a: Value, b: Value) -> Entailment:
    """Decide `a |= b`, i.e. whether b is below a in the lattice order.

    Returns FALSE when a is strictly below b, UNKNOWN when the two are
    incomparable.  Growing a can turn FALSE or UNKNOWN into TRUE but never
    the reverse, which is what makes a TRUE verdict safe to act on early.
    """
    if b.leq(a):
        return Entailment.TRUE
    if a.leq(b):
        return Entailment.FALSE
    return Entailment.UNKNOWN


# Bottom construction is tag-driven so the runtime can build initial values
# from surface type names.  The solver registers its own store variants here.
_BOTTOM_FACTORIES: dict[str, Callable[[], Value]] = {
    "LMax": LMax,
    "LMin": LMin,
    "ES": Es,
    "FSet": FSet,
    "Store": Store,
}


def register_variant(tag: str, factory: Callable[[], Value]) -> None:
    _BOTTOM_FACTORIES[tag] = factory


def bottom_of(tag: str) -> Value:
    try:
        return _BOTTOM_FACTORIES[tag]()
    except KeyError:
        raise LatticeTypeError(f"unknown lattice variant: {tag}") from None


def variant_tags() -> tuple[str, ...]:
    return tuple(_BOTTOM_FACTORIES)


def store_project(bindings: Mapping[Any, Any], spacetime: str) -> dict[Any, Value]:
    """Restrict an annotated store to the bindings with a given lifetime.

    Works over any mapping whose values expose `.spacetime` and `.value`
    (the runtime's variable cells) or are `(spacetime, value)` pairs.
    """
    out: dict[Any, Value] = {}
    for key, entry in bindings.items():
        if isinstance(entry, tuple):
            st, val = entry
        else:
            st, val = entry.spacetime, entry.value
        if st == spacetime:
            out[key] = val
    return out
