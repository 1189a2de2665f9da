"""Capacity Petri nets: structure, firing, reverse firing, PNML ingestion.

Markings are vectors indexed by the lexicographically sorted place ids,
so a net parsed twice from the same bytes yields identical vector
layouts.  Capacities are per place, ``inf`` meaning unbounded; a
transition is enabled only when firing it both finds enough tokens and
stays within every capacity.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from math import inf
from pathlib import Path
from typing import Iterable, Mapping

from .svs import SymbolicVectorSet, empty_svs
from .symbolic import SymbolicVector
from .vectors import Vector, as_vector

Capacity = float | int  # int or math.inf


class PnmlError(ValueError):
    """Malformed or unsupported PNML input."""


@dataclass(frozen=True)
class PetriNet:
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    weight_in: dict[tuple[str, str], int]  # (place, transition) -> tokens consumed
    weight_out: dict[tuple[str, str], int]  # (transition, place) -> tokens produced
    capacity: dict[str, Capacity] = field(default_factory=dict)
    initial: Vector | None = None

    def __post_init__(self):
        if len(set(self.places)) != len(self.places):
            raise ValueError("duplicate place ids")
        if len(set(self.transitions)) != len(self.transitions):
            raise ValueError("duplicate transition ids")
        for (p, t), w in self.weight_in.items():
            if p not in self.places or t not in self.transitions or w < 1:
                raise ValueError(f"bad input arc ({p}, {t}) weight {w}")
        for (t, p), w in self.weight_out.items():
            if p not in self.places or t not in self.transitions or w < 1:
                raise ValueError(f"bad output arc ({t}, {p}) weight {w}")
        if self.initial is not None:
            if len(self.initial) != len(self.places):
                raise ValueError("initial marking dimension mismatch")
            for p, m0 in zip(self.places, self.initial):
                if m0 > self.k(p):
                    raise ValueError(f"initial marking exceeds capacity at {p}")

    # -- structure ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.places)

    def w_in(self, p: str, t: str) -> int:
        return self.weight_in.get((p, t), 0)

    def w_out(self, t: str, p: str) -> int:
        return self.weight_out.get((t, p), 0)

    def k(self, p: str) -> Capacity:
        return self.capacity.get(p, inf)

    def arc_weights(self) -> list[int]:
        """All arc weights, sorted ascending (saturation jump candidates)."""
        return sorted(set(self.weight_in.values()) | set(self.weight_out.values()))

    def with_capacities(
        self,
        uniform: Capacity | None = None,
        per_place: Mapping[str, Capacity] | None = None,
    ) -> "PetriNet":
        """Copy with capacities overridden; per-place entries win."""
        caps = dict(self.capacity)
        if uniform is not None:
            caps = {p: uniform for p in self.places}
        if per_place:
            unknown = set(per_place) - set(self.places)
            if unknown:
                raise ValueError(f"unknown places in capacity config: {sorted(unknown)}")
            caps.update(per_place)
        caps = {p: c for p, c in caps.items() if c != inf}
        initial = self.initial
        if initial is not None:
            clipped = tuple(
                min(m0, int(caps[p])) if p in caps else m0
                for p, m0 in zip(self.places, initial)
            )
            initial = clipped
        return PetriNet(
            self.places, self.transitions, self.weight_in, self.weight_out,
            caps, initial,
        )

    def _check_t(self, t: str) -> None:
        if t not in self.transitions:
            raise ValueError(f"unknown transition {t!r}")

    def _check_m(self, m: Vector) -> Vector:
        m = as_vector(m)
        if len(m) != self.dim:
            raise ValueError(f"marking dimension mismatch: {len(m)} vs {self.dim}")
        return m

    # -- firing semantics ---------------------------------------------------

    def enabled(self, m: Vector, t: str) -> bool:
        """Enough tokens on every input and room within every capacity."""
        self._check_t(t)
        m = self._check_m(m)
        return all(
            self.w_in(p, t) <= m[i] <= self.k(p) - self.w_out(t, p)
            for i, p in enumerate(self.places)
        )

    def fire(self, m: Vector, t: str) -> Vector:
        if not self.enabled(m, t):
            raise ValueError(f"transition {t!r} not enabled at {m}")
        return tuple(
            m[i] - self.w_in(p, t) + self.w_out(t, p)
            for i, p in enumerate(self.places)
        )

    def input_marking(self, t: str) -> Vector:
        """Fewest tokens per place that enable ``t`` (ignoring capacities)."""
        self._check_t(t)
        return tuple(self.w_in(p, t) for p in self.places)

    def reversible(self, t: str, m: Vector) -> bool:
        """Whether reverse-firing ``t`` from ``m`` stays within capacities."""
        self._check_t(t)
        m = self._check_m(m)
        return all(
            m[i] <= self.k(p) - self.w_in(p, t)
            for i, p in enumerate(self.places)
        )

    def pre_t(self, m: Vector, t: str) -> Vector:
        """Reverse firing; clamps so ``t`` is enabled in the result."""
        if not self.reversible(t, m):
            raise ValueError(f"transition {t!r} not reversible at {m}")
        out = []
        for i, p in enumerate(self.places):
            win, wout = self.w_in(p, t), self.w_out(t, p)
            out.append(win if m[i] <= wout else m[i] + win - wout)
        return tuple(out)

    # -- symbolic predecessor operators --------------------------------------

    def pre_sv(self, sv: SymbolicVector) -> SymbolicVectorSet:
        """Reverse-fire a symbolic vector through every transition.

        Follows the source definition literally: if any bound vector is
        non-reversible for any transition, the whole result is empty;
        otherwise empty bound sets map to the input marking (include) or
        stay empty (exclude), non-empty sets map elementwise.
        """
        if sv.dim != self.dim:
            raise ValueError(f"dimension mismatch: {sv.dim} vs {self.dim}")
        bounds = sv.include + sv.exclude
        for t in self.transitions:
            if any(not self.reversible(t, q) for q in bounds):
                return empty_svs(self.dim)
        pieces = []
        for t in self.transitions:
            inc = (
                [self.input_marking(t)]
                if not sv.include
                else [self.pre_t(q, t) for q in sv.include]
            )
            exc = [self.pre_t(q, t) for q in sv.exclude]
            pieces.append(SymbolicVector(inc, exc, dim=self.dim))
        return SymbolicVectorSet(pieces, dim=self.dim)

    def pre_svs(
        self, svs: SymbolicVectorSet, cap_bound: Capacity | None = None
    ) -> SymbolicVectorSet:
        """Exact symbolic predecessor: all markings with an enabled firing
        into the set.

        Per transition, include/exclude bounds map through ``pre_t`` and
        the enabledness capacity ceilings are added as exclude bounds, so
        the bounded decode matches the explicit predecessor operator.
        With a finite ``cap_bound`` n, pieces whose include bound exceeds
        n anywhere are discarded (the saturation-bounded variant).
        """
        if svs.dim != self.dim:
            raise ValueError(f"dimension mismatch: {svs.dim} vs {self.dim}")
        if cap_bound is None:
            cap_bound = inf
        out = empty_svs(self.dim)
        for sv in svs.members:
            for t in self.transitions:
                piece = self._pre_piece(sv, t)
                if piece is None or piece.is_empty():
                    continue
                if cap_bound != inf and any(
                    x > cap_bound for x in piece.include[0]
                ):
                    continue
                out = out.union(SymbolicVectorSet([piece], dim=self.dim))
        return out

    def _pre_piece(self, sv: SymbolicVector, t: str) -> SymbolicVector | None:
        inc = (
            [self.input_marking(t)]
            if not sv.include
            else [self._pre_t_unchecked(q, t) for q in sv.include]
        )
        exc = [self._pre_t_unchecked(q, t) for q in sv.exclude]
        exc.extend(self.enabledness_excludes(t))
        return SymbolicVector(inc, exc, dim=self.dim).canonical()

    def _pre_t_unchecked(self, m: Vector, t: str) -> Vector:
        out = []
        for i, p in enumerate(self.places):
            win, wout = self.w_in(p, t), self.w_out(t, p)
            out.append(win if m[i] <= wout else m[i] + win - wout)
        return tuple(out)

    def enabledness_excludes(self, t: str) -> list[Vector]:
        """Exclude bounds encoding the capacity ceilings of enabling ``t``:
        a marking at or above ``k(p) - w(t,p) + 1`` somewhere cannot fire ``t``."""
        out = []
        for i, p in enumerate(self.places):
            cap = self.k(p)
            if cap == inf:
                continue
            threshold = max(0, int(cap) - self.w_out(t, p) + 1)
            vec = [0] * self.dim
            vec[i] = threshold
            out.append(tuple(vec))
        return out

    def fireable_svs(self, t: str) -> SymbolicVectorSet:
        """The enabled-markings set of ``t`` as a canonical SVS."""
        self._check_t(t)
        sv = SymbolicVector(
            [self.input_marking(t)], self.enabledness_excludes(t), dim=self.dim
        ).canonical()
        if sv.is_empty():
            return empty_svs(self.dim)
        return SymbolicVectorSet([sv], dim=self.dim)


# -- construction helpers ----------------------------------------------------


def build_net(
    place_tokens: Mapping[str, int],
    arcs: Iterable[tuple[str, str, int]],
    capacities: Mapping[str, Capacity] | None = None,
    transitions: Iterable[str] = (),
) -> PetriNet:
    """Assemble a net from ``{place: initial}`` and ``(src, dst, weight)`` arcs."""
    arcs = list(arcs)
    places = tuple(sorted(place_tokens))
    tset = set(transitions)
    for src, dst, _ in arcs:
        tset.add(dst if src in place_tokens else src)
    trans = tuple(sorted(tset))
    w_in: dict[tuple[str, str], int] = {}
    w_out: dict[tuple[str, str], int] = {}
    for src, dst, w in arcs:
        if src in place_tokens and dst in tset:
            w_in[(src, dst)] = w_in.get((src, dst), 0) + w
        elif src in tset and dst in place_tokens:
            w_out[(src, dst)] = w_out.get((src, dst), 0) + w
        else:
            raise ValueError(f"arc ({src}, {dst}) does not link a place and a transition")
    caps = {p: c for p, c in (capacities or {}).items() if c != inf}
    initial = tuple(place_tokens[p] for p in places)
    return PetriNet(places, trans, w_in, w_out, caps, initial)


# -- PNML ---------------------------------------------------------------------


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _text_of(elem: ET.Element, child: str) -> str | None:
    for node in elem.iter():
        if _local(node.tag) == child:
            for sub in node:
                if _local(sub.tag) == "text":
                    return (sub.text or "").strip()
            return (node.text or "").strip()
    return None


def parse_pnml(source: bytes | str | Path) -> PetriNet:
    """Parse a P/T PNML document (the model-checking-contest subset).

    Missing arc inscriptions default to weight 1, capacities default to
    unbounded, and places are ordered by sorted id.
    """
    if isinstance(source, Path):
        data = source.read_bytes()
    elif isinstance(source, str):
        data = source.encode() if source.lstrip().startswith("<") else Path(source).read_bytes()
    else:
        data = source
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise PnmlError(f"malformed PNML: {exc}") from exc

    place_tokens: dict[str, int] = {}
    transitions: set[str] = set()
    arcs: list[tuple[str, str, int]] = []
    for node in root.iter():
        kind = _local(node.tag)
        if kind == "place":
            pid = node.get("id")
            if pid is None:
                raise PnmlError("place without id")
            if pid in place_tokens:
                raise PnmlError(f"duplicate place id {pid!r}")
            marking = _text_of(node, "initialMarking")
            place_tokens[pid] = int(marking) if marking else 0
        elif kind == "transition":
            tid = node.get("id")
            if tid is None:
                raise PnmlError("transition without id")
            if tid in transitions:
                raise PnmlError(f"duplicate transition id {tid!r}")
            transitions.add(tid)
    for node in root.iter():
        if _local(node.tag) != "arc":
            continue
        src, dst = node.get("source"), node.get("target")
        if src is None or dst is None:
            raise PnmlError("arc without endpoints")
        inscription = _text_of(node, "inscription")
        weight = int(inscription) if inscription else 1
        src_is_place = src in place_tokens
        dst_is_place = dst in place_tokens
        if src_is_place == dst_is_place:
            raise PnmlError(f"arc ({src}, {dst}) must link a place and a transition")
        if not src_is_place and src not in transitions:
            raise PnmlError(f"arc references unknown id {src!r}")
        if not dst_is_place and dst not in transitions:
            raise PnmlError(f"arc references unknown id {dst!r}")
        arcs.append((src, dst, weight))
    if place_tokens and transitions & set(place_tokens):
        raise PnmlError("place and transition share an id")
    if not place_tokens:
        raise PnmlError("no places found")
    return build_net(place_tokens, arcs, transitions=transitions)


def load_capacity_config(path: str | Path) -> dict[str, int]:
    """Sidecar JSON: ``{"capacities": {"placeId": k}}``."""
    data = json.loads(Path(path).read_text())
    caps = data.get("capacities", {})
    return {p: int(k) for p, k in caps.items()}
