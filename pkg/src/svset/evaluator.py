"""Global CTL evaluation as symbolic fixpoints over vector sets.

``evaluate`` maps a core formula to the canonical set of ALL markings
satisfying it, with no initial marking involved.  EU runs as a least
fixpoint from the empty set, EG as a greatest fixpoint seeded with its
operand; EG unions the weak predecessor so maximal finite paths (sink
states) satisfy it too.  Saturation evaluates reachability under growing
capacity bounds, jumping by arc weights, to keep intermediate sets small.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import inf
from typing import Callable

from . import ctl
from .petrinet import Capacity, PetriNet
from .svs import SymbolicVectorSet, empty_svs, full_svs


@dataclass
class EvalOptions:
    capacity: Capacity = inf  # uniform bound for the saturation loop
    saturation: bool = True
    max_iterations: int = 10_000
    collect_stats: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class EvalStats:
    iterations: list[int] = field(default_factory=list)  # per fixpoint
    peak: int = 0  # largest member count observed
    final: int = 0
    ms: float = 0.0
    capacity_schedule: list[int] = field(default_factory=list)

    def snap(self, svs: SymbolicVectorSet) -> None:
        if len(svs) > self.peak:
            self.peak = len(svs)

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "peak": self.peak,
            "final": self.final,
            "ms": self.ms,
            "capacity_schedule": self.capacity_schedule,
        }


class NonConvergenceError(RuntimeError):
    """A fixpoint failed to stabilise within the iteration cap."""

    def __init__(self, message: str, last: SymbolicVectorSet, iterations: int):
        super().__init__(message)
        self.last = last
        self.iterations = iterations


Watch = Callable[[SymbolicVectorSet], None] | None


def evaluate(
    net: PetriNet, f: ctl.Formula, opts: EvalOptions | None = None
) -> SymbolicVectorSet:
    return evaluate_with_stats(net, f, opts)[0]


def evaluate_with_stats(
    net: PetriNet,
    f: ctl.Formula,
    opts: EvalOptions | None = None,
    watch: Watch = None,
) -> tuple[SymbolicVectorSet, EvalStats]:
    opts = opts or EvalOptions()
    stats = EvalStats()
    start = time.perf_counter()
    cache: dict[ctl.Formula, SymbolicVectorSet] = {}
    result = _eval(net, f, opts, stats, cache, watch)
    stats.ms = (time.perf_counter() - start) * 1000.0
    stats.final = len(result)
    stats.snap(result)
    return result, stats


def _eval(net, f, opts, stats, cache, watch) -> SymbolicVectorSet:
    hit = cache.get(f)
    if hit is not None:
        return hit
    if isinstance(f, ctl.TrueF):
        out = full_svs(net.dim)
    elif isinstance(f, ctl.Fireable):
        out = net.fireable_svs(f.transition)
    elif isinstance(f, ctl.Not):
        out = _eval(net, f.child, opts, stats, cache, watch).negate()
    elif isinstance(f, ctl.Or):
        out = _eval(net, f.left, opts, stats, cache, watch).union(
            _eval(net, f.right, opts, stats, cache, watch)
        )
    elif isinstance(f, ctl.EX):
        out = net.pre_svs(_eval(net, f.child, opts, stats, cache, watch))
    elif isinstance(f, ctl.EG):
        out = eval_eg(net, _eval(net, f.child, opts, stats, cache, watch), opts, stats, watch)
    elif isinstance(f, ctl.EU):
        phi = _eval(net, f.left, opts, stats, cache, watch)
        psi = _eval(net, f.right, opts, stats, cache, watch)
        if opts.saturation and phi == full_svs(net.dim):
            out = saturated_reach(net, psi, opts, stats, watch)
        else:
            out = eval_eu(net, phi, psi, opts, stats, watch)
    else:
        raise ValueError(f"not a core formula node: {f!r} (desugar first)")
    stats.snap(out)
    cache[f] = out
    return out


def weak_pre(
    net: PetriNet, svs: SymbolicVectorSet, cap_bound: Capacity | None = None
) -> SymbolicVectorSet:
    """Markings whose every enabled firing stays in the set (sinks included)."""
    return net.pre_svs(svs.negate(), cap_bound).negate()


def eval_eu(
    net: PetriNet,
    phi: SymbolicVectorSet,
    psi: SymbolicVectorSet,
    opts: EvalOptions,
    stats: EvalStats | None = None,
    watch: Watch = None,
) -> SymbolicVectorSet:
    """Least fixpoint of ``Y = psi | (phi & pre(Y))`` from the empty set.

    Each round reverse-fires only the members added by the previous one;
    the accumulated iterates coincide with the plain Kleene chain.
    """
    stats = stats if stats is not None else EvalStats()
    y = psi
    frontier = psi
    stats.snap(y)
    if watch:
        watch(y)
    for i in range(1, opts.max_iterations + 1):
        new = y.union(phi.intersect(net.pre_svs(frontier)))
        stats.snap(new)
        if watch:
            watch(new)
        if new.is_subset(y):
            stats.iterations.append(i + 1)
            return y
        frontier = _new_members(new, y)
        y = new
    raise NonConvergenceError(
        f"EU fixpoint did not converge within {opts.max_iterations} iterations",
        y,
        opts.max_iterations,
    )


def _new_members(new: SymbolicVectorSet, old: SymbolicVectorSet) -> SymbolicVectorSet:
    previous = set(old.members)
    return SymbolicVectorSet(
        [sv for sv in new.members if sv not in previous], dim=new.dim
    )


def eval_eg(
    net: PetriNet,
    phi: SymbolicVectorSet,
    opts: EvalOptions,
    stats: EvalStats | None = None,
    watch: Watch = None,
) -> SymbolicVectorSet:
    """Greatest fixpoint of ``Y = phi & (pre(Y) | weak_pre(Y))`` seeded
    with ``phi`` (one iteration ahead of the full-space seed)."""
    stats = stats if stats is not None else EvalStats()
    y = phi
    for i in range(opts.max_iterations):
        new = phi.intersect(net.pre_svs(y).union(weak_pre(net, y)))
        stats.snap(new)
        if watch:
            watch(new)
        if y.is_subset(new):
            stats.iterations.append(i + 1)
            return new
        y = new
    raise NonConvergenceError(
        f"EG fixpoint did not converge within {opts.max_iterations} iterations",
        y,
        opts.max_iterations,
    )


def _loop_bound(net: PetriNet, opts: EvalOptions) -> Capacity:
    if opts.capacity != inf:
        return opts.capacity
    caps = [net.k(p) for p in net.places]
    if caps and all(c != inf for c in caps):
        return max(int(c) for c in caps)
    return inf


def saturated_reach(
    net: PetriNet,
    psi: SymbolicVectorSet,
    opts: EvalOptions,
    stats: EvalStats | None = None,
    watch: Watch = None,
) -> SymbolicVectorSet:
    """Reachability (EF) under increasing capacity bounds.

    Runs the EU(true, psi) fixpoint with the bounded predecessor at
    capacity ``n``; once a fixpoint matches the previous capacity's, ``n``
    jumps to the smallest arc weight above it, and the loop ends when no
    such weight remains or ``n`` passes the uniform capacity.
    """
    stats = stats if stats is not None else EvalStats()
    k = _loop_bound(net, opts)
    weights = net.arc_weights()
    res = psi
    n = 1
    spent = 0
    while n <= k:
        stats.capacity_schedule.append(n)
        at_prev_cap = res
        frontier = res  # a fresh bound may revive previously discarded pieces
        while True:
            spent += 1
            if spent > opts.max_iterations:
                raise NonConvergenceError(
                    f"saturated reachability did not converge within "
                    f"{opts.max_iterations} iterations",
                    res,
                    opts.max_iterations,
                )
            new = res.union(net.pre_svs(frontier, cap_bound=n))
            stats.snap(new)
            if watch:
                watch(new)
            if new.is_subset(res):
                break
            frontier = _new_members(new, res)
            res = new
        if res.is_subset(at_prev_cap):
            weight = next((w for w in weights if w > n), None)
            if weight is None:
                break
            n = weight
        else:
            n += 1
    stats.iterations.append(spent)
    return res


def saturated_eg(
    net: PetriNet,
    phi: SymbolicVectorSet,
    opts: EvalOptions,
    stats: EvalStats | None = None,
    watch: Watch = None,
) -> SymbolicVectorSet:
    """EG under the saturation loop; subset tests run in the greatest-
    fixpoint direction (both stabilisation relations swapped)."""
    stats = stats if stats is not None else EvalStats()
    k = _loop_bound(net, opts)
    weights = net.arc_weights()
    res = phi
    n = 1
    spent = 0
    while n <= k:
        stats.capacity_schedule.append(n)
        at_prev_cap = res
        while True:
            spent += 1
            if spent > opts.max_iterations:
                raise NonConvergenceError(
                    f"saturated EG did not converge within "
                    f"{opts.max_iterations} iterations",
                    res,
                    opts.max_iterations,
                )
            new = phi.intersect(
                net.pre_svs(res, cap_bound=n).union(
                    weak_pre(net, res, cap_bound=n)
                )
            )
            stats.snap(new)
            if watch:
                watch(new)
            if res.is_subset(new):
                res = new
                break
            res = new
        if at_prev_cap.is_subset(res):
            weight = next((w for w in weights if w > n), None)
            if weight is None:
                break
            n = weight
        else:
            n += 1
    stats.iterations.append(spent)
    return res


def eval_extended_saturated(
    net: PetriNet,
    f: ctl.Formula,
    opts: EvalOptions | None = None,
    stats: EvalStats | None = None,
) -> SymbolicVectorSet:
    """Saturated evaluation for a formula headed by EF, AF, EG or AG."""
    opts = opts or EvalOptions()
    stats = stats if stats is not None else EvalStats()
    cache: dict[ctl.Formula, SymbolicVectorSet] = {}

    def sub(g: ctl.Formula) -> SymbolicVectorSet:
        return _eval(net, ctl.desugar(g), opts, stats, cache, None)

    if isinstance(f, ctl.EF):
        return saturated_reach(net, sub(f.child), opts, stats)
    if isinstance(f, ctl.AG):
        return saturated_reach(net, sub(ctl.Not(f.child)), opts, stats).negate()
    if isinstance(f, ctl.EG):
        return saturated_eg(net, sub(f.child), opts, stats)
    if isinstance(f, ctl.AF):
        return saturated_eg(net, sub(ctl.Not(f.child)), opts, stats).negate()
    raise ValueError(f"saturated evaluation needs an EF/AF/EG/AG head, got {f!r}")
