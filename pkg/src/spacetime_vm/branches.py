"""The algebra of branch sequences produced by one instant.

Each instant of a search process emits an ordered sequence of branches:
`space` pushes a child node, `prune` marks the position as cut.  Sequences
compose in three ways, mirroring the statement combinators:

* sequential composition concatenates (left branches come first, so it is
  deliberately noncommutative);
* `||` joins pointwise, keeping a branch when either side keeps it;
* `<>` joins pointwise, pruning a branch when either side prunes it.

For the pointwise operators the shorter sequence is padded by repeating
its last element, and the empty sequence is the identity: a process that
emitted nothing has no opinion about the tree shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

from . import lattice

P = TypeVar("P")


class _PrunedType:
    """Singleton marker for a cut branch."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "PRUNED"


PRUNED = _PrunedType()


@dataclass(frozen=True)
class SpaceBranch:
    """A kept branch carrying the child's world-line payload."""

    payload: object

    def __repr__(self) -> str:
        return f"SpaceBranch({self.payload!r})"


Branch = object  # SpaceBranch | PRUNED
BranchSeq = tuple


def _default_join(a: P, b: P) -> P:
    if isinstance(a, lattice.Value):
        return a.join(b)
    if isinstance(a, dict):
        out = dict(a)
        for key, val in b.items():
            out[key] = out[key].join(val) if key in out else val
        return out
    raise TypeError(f"no default join for payload {type(a).__name__}")


def merge_or(a: Branch, b: Branch, combine: Callable = _default_join) -> Branch:
    """Keep the branch if either operand keeps it."""
    if a is PRUNED:
        return b
    if b is PRUNED:
        return a
    return SpaceBranch(combine(a.payload, b.payload))


def merge_and(a: Branch, b: Branch, combine: Callable = _default_join) -> Branch:
    """Prune the branch if either operand prunes it."""
    if a is PRUNED or b is PRUNED:
        return PRUNED
    return SpaceBranch(combine(a.payload, b.payload))


def seq_concat(a: Sequence[Branch], b: Sequence[Branch]) -> BranchSeq:
    return tuple(a) + tuple(b)


def _pointwise(a: Sequence[Branch], b: Sequence[Branch],
               op: Callable, combine: Callable) -> BranchSeq:
    a, b = tuple(a), tuple(b)
    if not a:
        return b
    if not b:
        return a
    # Pad the shorter side by repeating its last element.
    size = max(len(a), len(b))
    out = []
    for i in range(size):
        x = a[i] if i < len(a) else a[-1]
        y = b[i] if i < len(b) else b[-1]
        out.append(op(x, y, combine))
    return tuple(out)


def par_or(a: Sequence[Branch], b: Sequence[Branch],
           combine: Callable = _default_join) -> BranchSeq:
    return _pointwise(a, b, merge_or, combine)


def par_and(a: Sequence[Branch], b: Sequence[Branch],
            combine: Callable = _default_join) -> BranchSeq:
    return _pointwise(a, b, merge_and, combine)
