"""Fixed-dimension vectors of naturals.

A vector doubles as a Petri net marking: component ``i`` counts the tokens
in the ``i``-th place.  Two orders matter throughout the library: the
componentwise partial order (``leq``) and the lexicographic total order
(``lex_leq``), which backs every determinism decision in the canonical
forms.
"""

from __future__ import annotations

from typing import Iterable

Vector = tuple[int, ...]


def as_vector(values: Iterable[int]) -> Vector:
    """Validate and freeze a sequence of naturals into a vector."""
    q = tuple(values)
    if len(q) == 0:
        raise ValueError("vectors must have dimension >= 1")
    for x in q:
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise ValueError(f"vector components must be naturals, got {x!r}")
    return q


def zero(dim: int) -> Vector:
    """The all-zero vector of the given dimension."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    return (0,) * dim


def _check_same_dim(q: Vector, q2: Vector) -> None:
    if len(q) != len(q2):
        raise ValueError(f"dimension mismatch: {len(q)} vs {len(q2)}")


def leq(q: Vector, q2: Vector) -> bool:
    """Componentwise inclusion: every component of ``q`` is <= that of ``q2``."""
    _check_same_dim(q, q2)
    return all(a <= b for a, b in zip(q, q2))


def lex_leq(q: Vector, q2: Vector) -> bool:
    """Lexicographic (total, reflexive) comparison."""
    _check_same_dim(q, q2)
    return q <= q2


def join(qs: Iterable[Vector], dim: int) -> Vector:
    """Componentwise least upper bound; the empty join is the zero vector."""
    out = list(zero(dim))
    for q in qs:
        if len(q) != dim:
            raise ValueError(f"dimension mismatch: {len(q)} vs {dim}")
        for i, x in enumerate(q):
            if x > out[i]:
                out[i] = x
    return tuple(out)


def parse_vector(text: str) -> Vector:
    """Parse the CLI form ``"1,0,1,0,1"``."""
    parts = [p.strip() for p in text.split(",")]
    try:
        return as_vector(int(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"bad vector {text!r}: {exc}") from exc


def format_vector(q: Vector) -> str:
    return ",".join(str(x) for x in q)
