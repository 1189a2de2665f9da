"""Finite unions of symbolic vectors with a unique canonical form.

A symbolic vector set (SVS) denotes the union of its members'
denotations.  Raw operations follow the plain set-theoretic recursions;
canonical operations additionally maintain the set-level canonical form:
every member canonical, no empty members, and no two members shareable
(hence pairwise disjoint denotations).  Canonical forms are unique per
denoted set, so semantic equality of canonical values is structural
equality.
"""

from __future__ import annotations

from itertools import combinations, product
from math import prod
from typing import Iterable, Iterator

from .symbolic import SymbolicVector, full, sentinel
from .vectors import Vector, as_vector, join, leq

#: Work-unit cap for the canonical-union/difference recursions, which are
#: factorial in the worst case.  Breaching it raises instead of hanging.
DEFAULT_STEP_LIMIT = 5_000_000


class CanonicalLimitError(RuntimeError):
    """Canonical-form maintenance exceeded its configured work budget."""


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int = DEFAULT_STEP_LIMIT):
        self.left = limit

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise CanonicalLimitError(
                "canonical operation exceeded its step budget"
            )


class SymbolicVectorSet:
    """Immutable set of symbolic vectors, union semantics."""

    __slots__ = ("members", "dim")

    def __init__(self, members: Iterable[SymbolicVector] = (), dim: int | None = None):
        mems = tuple(sorted(set(members), key=_member_key))
        dims = {sv.dim for sv in mems}
        if len(dims) > 1:
            raise ValueError(f"mixed dimensions in members: {sorted(dims)}")
        if dims:
            d = dims.pop()
            if dim is not None and dim != d:
                raise ValueError(f"dimension mismatch: {dim} vs {d}")
            dim = d
        if dim is None:
            raise ValueError("dimension required for the empty set")
        object.__setattr__(self, "members", mems)
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, *_):
        raise AttributeError("SymbolicVectorSet is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymbolicVectorSet)
            and self.dim == other.dim
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash((self.members, self.dim))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SymbolicVector]:
        return iter(self.members)

    def __repr__(self) -> str:
        return "SVS{" + ", ".join(map(repr, self.members)) + "}"

    # -- denotation ---------------------------------------------------------

    def contains(self, q: Vector) -> bool:
        q = as_vector(q)
        if len(q) != self.dim:
            raise ValueError(f"dimension mismatch: {len(q)} vs {self.dim}")
        return any(sv.contains(q) for sv in self.members)

    def is_empty_denoting(self) -> bool:
        """Member of the empty-set family: every member denotes nothing."""
        return all(sv.is_empty() for sv in self.members)

    def decode(self, box: int, check_cover: bool = False) -> set[Vector]:
        """All members' vectors within ``[0, box]^dim``.

        ``check_cover`` enforces that the box dominates every bound, in
        which case the decode determines the denotation (clamping).
        """
        if check_cover and not self.covered_by(box):
            raise ValueError(f"box {box} smaller than some bound component")
        return {
            q
            for q in product(range(box + 1), repeat=self.dim)
            if self.contains(q)
        }

    def covered_by(self, box: int) -> bool:
        return all(sv.covered_by(box) for sv in self.members)

    # -- raw set algebra ----------------------------------------------------

    def raw_union(self, other: "SymbolicVectorSet") -> "SymbolicVectorSet":
        self._check_dim(other)
        return SymbolicVectorSet(self.members + other.members, dim=self.dim)

    def raw_intersect(self, other: "SymbolicVectorSet") -> "SymbolicVectorSet":
        self._check_dim(other)
        pairs = [a.intersect(b) for a in self.members for b in other.members]
        return SymbolicVectorSet(pairs, dim=self.dim)

    def raw_subtract(self, other: "SymbolicVectorSet") -> "SymbolicVectorSet":
        """Inductive elementwise difference (no canonical maintenance)."""
        self._check_dim(other)
        if other.is_empty_denoting():
            return self
        if self.is_empty_denoting():
            return self
        acc = SymbolicVectorSet([], dim=self.dim)
        for sv in self.members:
            piece = SymbolicVectorSet([sv], dim=self.dim)
            for sv2 in other.members:
                piece = SymbolicVectorSet(
                    [
                        out
                        for p in piece.members
                        for out in p.subtract(sv2).members
                    ],
                    dim=self.dim,
                )
                if piece.is_empty_denoting():
                    break
            acc = acc.raw_union(piece)
        return acc

    def raw_negate(self) -> "SymbolicVectorSet":
        return SymbolicVectorSet([full(self.dim)], dim=self.dim).raw_subtract(self)

    def rm_empty(self) -> "SymbolicVectorSet":
        return SymbolicVectorSet(
            [sv for sv in self.members if not sv.is_empty()], dim=self.dim
        )

    # -- canonical set algebra ----------------------------------------------

    def union(self, other: "SymbolicVectorSet") -> "SymbolicVectorSet":
        """Canonical union: transfers shareable portions so the result is
        canonical whenever both operands are."""
        self._check_dim(other)
        budget = _Budget()
        target = list(other.members)
        for sv in self.members:
            _insert(sv, target, budget)
        return SymbolicVectorSet(target, dim=self.dim)

    def intersect(self, other: "SymbolicVectorSet") -> "SymbolicVectorSet":
        """Canonical intersection: pairwise, dropping empty products."""
        self._check_dim(other)
        out = SymbolicVectorSet([], dim=self.dim)
        for a in self.members:
            for b in other.members:
                piece = a.intersect(b)
                if not piece.is_empty():
                    out = out.union(SymbolicVectorSet([piece], dim=self.dim))
        return out

    def subtract(self, other: "SymbolicVectorSet") -> "SymbolicVectorSet":
        """Canonical difference."""
        self._check_dim(other)
        if not other.members:
            return self
        if not self.members:
            return self
        out = SymbolicVectorSet([], dim=self.dim)
        for sv in self.members:
            piece = SymbolicVectorSet([sv], dim=self.dim)
            for sv2 in other.members:
                next_piece = SymbolicVectorSet([], dim=self.dim)
                for p in piece.members:
                    next_piece = next_piece.union(p.canonical_subtract(sv2))
                piece = next_piece
                if not piece.members:
                    break
            out = out.union(piece)
        return out

    def negate(self) -> "SymbolicVectorSet":
        """Canonical complement relative to the whole space."""
        return SymbolicVectorSet([full(self.dim)], dim=self.dim).subtract(self)

    def canonical(self) -> "SymbolicVectorSet":
        """Rebuild the set member by member through the canonical union."""
        out = SymbolicVectorSet([], dim=self.dim)
        for sv in self.members:
            c = sv.canonical()
            if c.is_empty():
                continue
            out = out.union(SymbolicVectorSet([c], dim=self.dim))
        return out

    def is_canonical(self) -> bool:
        if not all(sv.is_canonical() for sv in self.members):
            return False
        if self.members and self.is_empty_denoting():
            return False
        for a, b in combinations(self.members, 2):
            if a.shareable(b):
                return False
        return True

    # -- relations ----------------------------------------------------------

    def is_subset(self, other: "SymbolicVectorSet") -> bool:
        self._check_dim(other)
        if self.members == other.members:
            return True
        a, b = self, other
        if not a.is_canonical():
            a = a.canonical()
        if not b.is_canonical():
            b = b.canonical()
        return not a.subtract(b).members

    def equals(self, other: "SymbolicVectorSet") -> bool:
        """Semantic equality (structural on canonical forms)."""
        self._check_dim(other)
        if self.is_canonical() and other.is_canonical():
            return self.members == other.members
        return self.is_subset(other) and other.is_subset(self)

    # -- counting -----------------------------------------------------------

    def count_within(self, capacity: int) -> int:
        """Exact number of members' vectors within ``[0, capacity]^dim``.

        Canonical members are pairwise disjoint, so the counts add.  Each
        member is counted by inclusion-exclusion over subsets of its
        exclude antichain; exponential in the exclude size.
        """
        svs = self if self.is_canonical() else self.canonical()
        return sum(_count_member(sv, capacity) for sv in svs.members)

    # -- plumbing -----------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [sv.to_json() for sv in self.members]

    @classmethod
    def from_json(cls, data: list[dict], dim: int) -> "SymbolicVectorSet":
        return cls(
            [SymbolicVector.from_json(d, dim=dim) for d in data], dim=dim
        )

    def _check_dim(self, other: "SymbolicVectorSet") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")


def _member_key(sv: SymbolicVector):
    return (sv.include, sv.exclude)


def _insert(sv: SymbolicVector, target: list[SymbolicVector], budget: _Budget) -> None:
    """Union a single member into a canonical target, in place.

    Shareable partners get resolved by moving the shared portion onto the
    lexicographically smaller side (merge) and carving it out of the
    larger one (canonical subtraction); the new pieces re-enter the
    worklist until nothing shareable remains.
    """
    work = [sv]
    while work:
        budget.spend()
        x = work.pop(0)
        if x.is_empty():
            continue
        partners = sorted(
            (y for y in target if x.shareable(y)), key=_member_key
        )
        if not partners:
            target.append(x)
            continue
        y = partners[0]
        target.remove(y)
        lo, hi = x, y
        if not (lo.include_bound() <= hi.include_bound()):
            lo, hi = hi, lo
        sh = lo.share(hi)
        pieces = lo.merge(sh).members + hi.canonical_subtract(sh).members
        work = sorted(pieces, key=_member_key) + work


def _count_member(sv: SymbolicVector, capacity: int) -> int:
    if sv.is_empty():
        return 0
    dim = sv.dim
    qa = sv.include_bound()
    total = 0
    excl = list(sv.exclude)
    for r in range(len(excl) + 1):
        for subset in combinations(excl, r):
            low = join([qa, *subset], dim)
            cells = prod(max(0, capacity - low[i] + 1) for i in range(dim))
            total += cells if r % 2 == 0 else -cells
    return total


def empty_svs(dim: int) -> SymbolicVectorSet:
    return SymbolicVectorSet([], dim=dim)


def full_svs(dim: int) -> SymbolicVectorSet:
    return SymbolicVectorSet([full(dim)], dim=dim)
