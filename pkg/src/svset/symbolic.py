"""Symbolic vectors: generalized intervals on the vector partial order.

A symbolic vector ``(a, b)`` denotes the set of all vectors that dominate
every member of the include set ``a`` and dominate no member of the
exclude set ``b``.  The denotation is infinite in general; all operations
here work directly on the bounds.

The canonical form makes the representation unique per denoted set:
``a`` is a singleton, emptiness is the sentinel ``({0}, {0})``, the
exclude set is an antichain, and every exclude bound dominates the
include bound componentwise.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, TYPE_CHECKING

from .vectors import Vector, as_vector, join, leq, lex_leq, zero

if TYPE_CHECKING:  # pragma: no cover
    from .svs import SymbolicVectorSet


class SymbolicVector:
    """Immutable pair of bound sets denoting a set of vectors."""

    __slots__ = ("include", "exclude", "dim", "_bound", "_empty")

    def __init__(
        self,
        include: Iterable[Iterable[int]] = (),
        exclude: Iterable[Iterable[int]] = (),
        dim: int | None = None,
    ):
        inc = tuple(sorted({as_vector(q) for q in include}))
        exc = tuple(sorted({as_vector(q) for q in exclude}))
        dims = {len(q) for q in inc} | {len(q) for q in exc}
        if len(dims) > 1:
            raise ValueError(f"mixed dimensions in bounds: {sorted(dims)}")
        if dims:
            d = dims.pop()
            if dim is not None and dim != d:
                raise ValueError(f"dimension mismatch: {dim} vs {d}")
            dim = d
        if dim is None:
            raise ValueError("dimension required when both bound sets are empty")
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        object.__setattr__(self, "include", inc)
        object.__setattr__(self, "exclude", exc)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_bound", None)
        object.__setattr__(self, "_empty", None)

    def __setattr__(self, *_):
        raise AttributeError("SymbolicVector is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymbolicVector)
            and self.dim == other.dim
            and self.include == other.include
            and self.exclude == other.exclude
        )

    def __hash__(self) -> int:
        return hash((self.include, self.exclude, self.dim))

    def __repr__(self) -> str:
        inc = "{" + ", ".join(map(str, self.include)) + "}"
        exc = "{" + ", ".join(map(str, self.exclude)) + "}"
        return f"SV({inc}, {exc})"

    # -- denotation ---------------------------------------------------------

    def contains(self, q: Vector) -> bool:
        """Membership: dominate all include bounds, no exclude bound."""
        q = as_vector(q)
        if len(q) != self.dim:
            raise ValueError(f"dimension mismatch: {len(q)} vs {self.dim}")
        return all(leq(qa, q) for qa in self.include) and not any(
            leq(qb, q) for qb in self.exclude
        )

    def include_bound(self) -> Vector:
        """Least upper bound of the include set (zero vector if empty)."""
        if self._bound is None:
            object.__setattr__(self, "_bound", join(self.include, self.dim))
        return self._bound

    def is_empty(self) -> bool:
        """Emptiness: some exclude bound is below the include bound."""
        if self._empty is None:
            qa = self.include_bound()
            object.__setattr__(
                self, "_empty", any(leq(qb, qa) for qb in self.exclude)
            )
        return self._empty

    def decode(self, box: int, check_cover: bool = False) -> set[Vector]:
        """All members within the finite box ``[0, box]^dim``.

        With ``check_cover`` the box must dominate every bound component,
        which (by clamping) makes the result determine the full denotation.
        """
        if check_cover and not self.covered_by(box):
            raise ValueError(f"box {box} smaller than some bound component")
        return {
            q for q in product(range(box + 1), repeat=self.dim) if self.contains(q)
        }

    def covered_by(self, box: int) -> bool:
        return all(x <= box for q in self.include + self.exclude for x in q)

    # -- canonical form -----------------------------------------------------

    def canonical(self) -> "SymbolicVector":
        """Unique representative of the denoted set.

        Joins the include set, routes empties to the sentinel, lifts each
        exclude bound above the include bound, and prunes the exclude set
        down to its minimal antichain.
        """
        qa = self.include_bound()
        if any(leq(qb, qa) for qb in self.exclude):
            return sentinel(self.dim)
        lifted = {join([qa, qb], self.dim) for qb in self.exclude}
        minimal = [
            qb
            for qb in lifted
            if not any(other != qb and leq(other, qb) for other in lifted)
        ]
        return SymbolicVector([qa], minimal, dim=self.dim)

    def is_canonical(self) -> bool:
        if len(self.include) != 1:
            return False
        if self.is_empty():
            return self == sentinel(self.dim)
        qa = self.include[0]
        for qb in self.exclude:
            if not leq(qa, qb):
                return False
        for qb in self.exclude:
            for qb2 in self.exclude:
                if qb != qb2 and leq(qb, qb2):
                    return False
        return True

    # -- binary operations --------------------------------------------------

    def intersect(self, other: "SymbolicVector") -> "SymbolicVector":
        """Intersection: union the bounds on both sides, then canonicalize."""
        self._check_dim(other)
        return SymbolicVector(
            self.include + other.include,
            self.exclude + other.exclude,
            dim=self.dim,
        ).canonical()

    def subtract(self, other: "SymbolicVector") -> "SymbolicVectorSet":
        """Set difference, as a (generally redundant) union of pieces.

        One piece per include bound of ``other`` (stay below it) and one
        per exclude bound of ``other`` (climb above it).  Pieces are
        individually canonical but may overlap each other.
        """
        from .svs import SymbolicVectorSet

        self._check_dim(other)
        pieces = []
        for qc in other.include:
            pieces.append(
                SymbolicVector(
                    self.include, self.exclude + (qc,), dim=self.dim
                ).canonical()
            )
        for qd in other.exclude:
            pieces.append(
                SymbolicVector(
                    self.include + other.include + (qd,),
                    self.exclude,
                    dim=self.dim,
                ).canonical()
            )
        return SymbolicVectorSet(pieces, dim=self.dim)

    def canonical_subtract(self, other: "SymbolicVector") -> "SymbolicVectorSet":
        """Difference of canonical operands, as a canonical (disjoint) set.

        The exclude bounds of ``other`` are consumed in lexicographic
        order; each one processed becomes a new exclude bound for the
        later pieces, which removes the overlap the raw difference leaves
        behind.
        """
        from .svs import SymbolicVectorSet

        self._check_dim(other)
        self._require_canonical(other)
        if other.is_empty():
            keep = [] if self.is_empty() else [self]
            return SymbolicVectorSet(keep, dim=self.dim)
        pieces = [
            SymbolicVector(
                self.include, self.exclude + other.include, dim=self.dim
            ).canonical()
        ]
        accumulated: tuple[Vector, ...] = ()
        for qd in sorted(other.exclude):
            pieces.append(
                SymbolicVector(
                    self.include + (qd,),
                    self.exclude + accumulated,
                    dim=self.dim,
                ).canonical()
            )
            accumulated = accumulated + (qd,)
        return SymbolicVectorSet(
            [p for p in pieces if not p.is_empty()], dim=self.dim
        )

    # -- merge / share ------------------------------------------------------

    def mergeable(self, other: "SymbolicVector") -> bool:
        """Whether the two denotations combine into a single symbolic vector."""
        self._check_dim(other)
        if self.is_empty() or other.is_empty():
            return True
        qa, b = self.include_bound(), self.exclude
        qc, d = other.include_bound(), other.exclude
        if leq(qa, qc):
            return all(
                leq(qc, qb) or any(leq(qd, join([qb, qc], self.dim)) for qd in d)
                for qb in b
            )
        if leq(qc, qa):
            return all(
                leq(qa, qd) or any(leq(qb, join([qd, qa], self.dim)) for qb in b)
                for qd in d
            )
        return False

    def merge(self, other: "SymbolicVector") -> "SymbolicVectorSet":
        """Union as a singleton when mergeable, else the two-element set."""
        from .svs import SymbolicVectorSet

        self._check_dim(other)
        if self.is_empty() and other.is_empty():
            return SymbolicVectorSet([], dim=self.dim)
        if self.is_empty():
            return SymbolicVectorSet([other], dim=self.dim)
        if other.is_empty():
            return SymbolicVectorSet([self], dim=self.dim)
        if not self.mergeable(other):
            return SymbolicVectorSet([self, other], dim=self.dim)
        lo, hi = self, other
        if not leq(lo.include_bound(), hi.include_bound()):
            lo, hi = hi, lo
        qc, d = hi.include_bound(), hi.exclude
        b_keep = [qb for qb in lo.exclude if not leq(qc, qb)]
        b_joined = [
            join([qb, qd], self.dim)
            for qb in lo.exclude
            if leq(qc, qb)
            for qd in d
        ]
        merged = SymbolicVector(
            lo.include, b_keep + b_joined, dim=self.dim
        ).canonical()
        return SymbolicVectorSet([merged], dim=self.dim)

    def shareable(self, other: "SymbolicVector") -> bool:
        """Whether set-level canonicity forces a transfer between the two.

        Covers overlap, mergeability and a constraint sitting on the
        lexicographically wrong operand.  Symmetric; empties always share.
        """
        self._check_dim(other)
        if self.is_empty() or other.is_empty():
            return True
        lo, hi = self, other
        if not lex_leq(lo.include_bound(), hi.include_bound()):
            lo, hi = hi, lo
        q_max = join([lo.include_bound(), hi.include_bound()], self.dim)
        blocked_low = any(
            leq(qb, q_max) and qb != q_max for qb in lo.exclude
        )
        blocked_high = any(leq(qd, q_max) for qd in hi.exclude)
        return not blocked_low and not blocked_high

    def share(self, other: "SymbolicVector") -> "SymbolicVector":
        """The joinable portion transferred during canonical union.

        Everything above the join of the two include bounds, constrained
        by the exclude set of the lexicographically larger operand plus
        the smaller operand's exclude bounds lifted to the join point.
        The lifts keep the portion mergeable into the smaller operand, so
        the union recursion always makes progress.
        """
        if not self.shareable(other):
            raise ValueError("share requires a shareable pair")
        if self.is_empty() or other.is_empty():
            raise ValueError("share requires non-empty operands")
        lo, hi = self, other
        if not lex_leq(lo.include_bound(), hi.include_bound()):
            lo, hi = hi, lo
        q_max = join([lo.include_bound(), hi.include_bound()], self.dim)
        lifted = [
            join([q_max, qb], self.dim)
            for qb in lo.exclude
            if not leq(qb, q_max)
        ]
        return SymbolicVector(
            [q_max], tuple(hi.exclude) + tuple(lifted), dim=self.dim
        ).canonical()

    # -- spatial relations --------------------------------------------------

    def overlap(self, other: "SymbolicVector") -> bool:
        """True iff the denotations intersect."""
        q_max = self._q_max(other)
        return self._clears(q_max) and other._clears(q_max)

    def gap(self, other: "SymbolicVector") -> bool:
        """True iff some exclude bound falls strictly under the join point."""
        q_max = self._q_max(other)
        if any(leq(qb, q_max) and qb != q_max for qb in self.exclude):
            return True
        if any(leq(qd, q_max) and qd != q_max for qd in other.exclude):
            return True
        return q_max in self.exclude and q_max in other.exclude

    def adjacent(self, other: "SymbolicVector") -> bool:
        """Joinable but not overlapping: they meet exactly at the join point."""
        q_max = self._q_max(other)
        at_border = q_max in self.exclude or q_max in other.exclude
        both = q_max in self.exclude and q_max in other.exclude
        return at_border and not both

    def _clears(self, q_max: Vector) -> bool:
        # every exclude bound is non-comparable with q_max or strictly above it
        return all(
            not leq(qb, q_max) or (leq(q_max, qb) and q_max != qb)
            for qb in self.exclude
        )

    def _q_max(self, other: "SymbolicVector") -> Vector:
        self._require_canonical(other)
        if self.is_empty() or other.is_empty():
            raise ValueError("relation undefined on empty symbolic vectors")
        return join([self.include[0], other.include[0]], self.dim)

    # -- plumbing -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "include": [list(q) for q in self.include],
            "exclude": [list(q) for q in self.exclude],
        }

    @classmethod
    def from_json(cls, data: dict, dim: int | None = None) -> "SymbolicVector":
        return cls(data["include"], data["exclude"], dim=dim)

    def _check_dim(self, other: "SymbolicVector") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _require_canonical(self, other: "SymbolicVector") -> None:
        self._check_dim(other)
        if not self.is_canonical() or not other.is_canonical():
            raise ValueError("operation requires canonical operands")


def sentinel(dim: int) -> SymbolicVector:
    """The unique canonical empty symbolic vector ``({0}, {0})``."""
    z = zero(dim)
    return SymbolicVector([z], [z], dim=dim)


def full(dim: int) -> SymbolicVector:
    """The symbolic vector denoting the whole space."""
    return SymbolicVector([zero(dim)], [], dim=dim)
