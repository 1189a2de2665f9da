"""Brute-force explicit-state reference for cross-checking the symbolic path.

Enumerates the whole bounded marking universe, builds the transition
relation, and evaluates CTL by textbook fixpoints over boolean masks —
including the maximal-finite-path reading of EG, under which a sink all
of whose (single-state) maximal path satisfies the operand qualifies.

Deliberately independent of the symbolic algebra: the only shared code
is the net structure and the formula AST.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import inf, prod

import numpy as np

from . import ctl
from .evaluator import EvalOptions, evaluate
from .petrinet import PetriNet, build_net
from .svs import SymbolicVectorSet
from .vectors import Vector

DEFAULT_BUDGET = 10**6


class BudgetExceededError(RuntimeError):
    """The bounded universe is larger than the configured budget."""


@dataclass
class ExplicitSpace:
    net: PetriNet
    caps: tuple[int, ...]  # per place, aligned with net.places
    markings: np.ndarray  # (S, P)
    enabled: np.ndarray  # (T, S) bool
    succ: np.ndarray  # (T, S) state index, -1 where disabled
    sinks: np.ndarray  # (S,) bool

    @property
    def n_states(self) -> int:
        return self.markings.shape[0]

    def index_of(self, m: Vector) -> int:
        shape = tuple(c + 1 for c in self.caps)
        return int(np.ravel_multi_index(m, shape))

    def marking_of(self, i: int) -> Vector:
        return tuple(int(x) for x in self.markings[i])

    def marking_set(self, mask: np.ndarray) -> set[Vector]:
        return {self.marking_of(i) for i in np.flatnonzero(mask)}


def build_space(
    net: PetriNet,
    capacity: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> ExplicitSpace:
    """Enumerate ``prod(k(p)+1)`` markings and the full firing relation."""
    caps = []
    for p in net.places:
        k = capacity if capacity is not None else net.k(p)
        if k == inf:
            raise ValueError(f"place {p!r} has no finite capacity")
        caps.append(int(k))
    shape = tuple(c + 1 for c in caps)
    n_states = prod(shape)
    if n_states > budget:
        raise BudgetExceededError(
            f"{n_states} states exceed the budget of {budget}"
        )
    grids = np.unravel_index(np.arange(n_states), shape)
    markings = np.stack(grids, axis=1).astype(np.int32)
    caps_row = np.array(caps, dtype=np.int32)

    n_t = len(net.transitions)
    enabled = np.zeros((n_t, n_states), dtype=bool)
    succ = np.full((n_t, n_states), -1, dtype=np.int64)
    for ti, t in enumerate(net.transitions):
        w_in = np.array([net.w_in(p, t) for p in net.places], dtype=np.int32)
        w_out = np.array([net.w_out(t, p) for p in net.places], dtype=np.int32)
        en = (markings >= w_in).all(axis=1) & (
            markings <= caps_row - w_out
        ).all(axis=1)
        enabled[ti] = en
        after = markings[en] - w_in + w_out
        succ[ti, en] = np.ravel_multi_index(tuple(after.T), shape)
    sinks = ~enabled.any(axis=0)
    return ExplicitSpace(net, tuple(caps), markings, enabled, succ, sinks)


def pre_exists(space: ExplicitSpace, mask: np.ndarray) -> np.ndarray:
    """States with some enabled firing landing in the set."""
    out = np.zeros(space.n_states, dtype=bool)
    for ti in range(space.enabled.shape[0]):
        en = space.enabled[ti]
        hit = np.zeros(space.n_states, dtype=bool)
        hit[en] = mask[space.succ[ti, en]]
        out |= hit
    return out


def pre_forall(space: ExplicitSpace, mask: np.ndarray) -> np.ndarray:
    """States whose every enabled firing lands in the set (sinks vacuously)."""
    out = np.ones(space.n_states, dtype=bool)
    for ti in range(space.enabled.shape[0]):
        en = space.enabled[ti]
        ok = np.ones(space.n_states, dtype=bool)
        ok[en] = mask[space.succ[ti, en]]
        out &= ok
    return out


def explicit_eval(space: ExplicitSpace, f: ctl.Formula) -> np.ndarray:
    """Satisfying-state mask of a desugared formula."""
    cache: dict[ctl.Formula, np.ndarray] = {}

    def go(g: ctl.Formula) -> np.ndarray:
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, ctl.TrueF):
            out = np.ones(space.n_states, dtype=bool)
        elif isinstance(g, ctl.Fireable):
            ti = space.net.transitions.index(g.transition)
            out = space.enabled[ti].copy()
        elif isinstance(g, ctl.Not):
            out = ~go(g.child)
        elif isinstance(g, ctl.Or):
            out = go(g.left) | go(g.right)
        elif isinstance(g, ctl.EX):
            out = pre_exists(space, go(g.child))
        elif isinstance(g, ctl.EU):
            p, q = go(g.left), go(g.right)
            y = q.copy()
            while True:
                new = q | (p & pre_exists(space, y))
                if (new == y).all():
                    break
                y = new
            out = y
        elif isinstance(g, ctl.EG):
            p = go(g.child)
            y = p.copy()
            while True:
                new = p & (pre_exists(space, y) | space.sinks)
                if (new == y).all():
                    break
                y = new
            out = y
        else:
            raise ValueError(f"not a core formula node: {g!r} (desugar first)")
        cache[g] = out
        return out

    return go(f)


def backward_reach(space: ExplicitSpace, goal: np.ndarray) -> np.ndarray:
    """Plain backward closure of a goal mask; EF self-check."""
    y = goal.copy()
    while True:
        new = y | pre_exists(space, y)
        if (new == y).all():
            return y
        y = new


def svs_mask(space: ExplicitSpace, svs: SymbolicVectorSet) -> np.ndarray:
    """Which universe markings a symbolic vector set contains."""
    m = space.markings
    out = np.zeros(space.n_states, dtype=bool)
    for sv in svs.members:
        member = np.ones(space.n_states, dtype=bool)
        for qa in sv.include:
            member &= (m >= np.array(qa, dtype=np.int32)).all(axis=1)
        for qb in sv.exclude:
            member &= ~(m >= np.array(qb, dtype=np.int32)).all(axis=1)
        out |= member
    return out


@dataclass
class EquivReport:
    passed: bool
    n_states: int
    counterexample: Vector | None = None
    expected: bool | None = None  # oracle's answer at the counterexample
    formula: str = ""

    def __str__(self) -> str:
        if self.passed:
            return f"pass ({self.n_states} states)"
        return (
            f"fail at {self.counterexample}: oracle={self.expected}, "
            f"symbolic={not self.expected} [{self.formula}]"
        )


def check_equiv(
    net: PetriNet,
    f: ctl.Formula,
    capacity: int | None = None,
    opts: EvalOptions | None = None,
    budget: int = DEFAULT_BUDGET,
    _evaluate=evaluate,
) -> EquivReport:
    """Compare the symbolic evaluation against the explicit one.

    The first differing marking (in lexicographic scan order) is reported
    on failure.  ``capacity`` uniformly overrides the net's capacities for
    both routes.
    """
    effective = net.with_capacities(uniform=capacity) if capacity is not None else net
    space = build_space(effective, budget=budget)
    core = ctl.desugar(f)
    sym = _evaluate(effective, core, opts or EvalOptions())
    sym_mask = svs_mask(space, sym)
    oracle_mask = explicit_eval(space, core)
    diff = sym_mask != oracle_mask
    if not diff.any():
        return EquivReport(True, space.n_states, formula=str(f))
    i = int(np.flatnonzero(diff)[0])
    return EquivReport(
        False,
        space.n_states,
        counterexample=space.marking_of(i),
        expected=bool(oracle_mask[i]),
        formula=str(f),
    )


# -- random instances ----------------------------------------------------------


def random_net(rng: random.Random) -> PetriNet:
    """Small random capacity net: <=4 places, <=4 transitions, weights <=2."""
    n_p = rng.randint(1, 4)
    n_t = rng.randint(1, 4)
    places = [f"p{i}" for i in range(n_p)]
    transitions = [f"t{i}" for i in range(n_t)]
    cap = rng.randint(1, 3)
    arcs = []
    for t in transitions:
        for p in places:
            if rng.random() < 0.4:
                arcs.append((p, t, rng.randint(1, 2)))
            if rng.random() < 0.4:
                arcs.append((t, p, rng.randint(1, 2)))
    tokens = {p: rng.randint(0, cap) for p in places}
    net = build_net(tokens, arcs, transitions=transitions)
    return net.with_capacities(uniform=cap)


def random_formula(rng: random.Random, net: PetriNet, depth: int = 3) -> ctl.Formula:
    if depth == 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.15:
            return ctl.TRUE
        if roll < 0.25:
            return ctl.FALSE
        return ctl.Fireable(rng.choice(net.transitions))
    kind = rng.choice(
        ["not", "or", "and", "EX", "EF", "EG", "AX", "AF", "AG", "EU", "AU"]
    )
    sub = lambda: random_formula(rng, net, depth - 1)
    if kind == "not":
        return ctl.Not(sub())
    if kind == "or":
        return ctl.Or(sub(), sub())
    if kind == "and":
        return ctl.And(sub(), sub())
    if kind == "EU":
        return ctl.EU(sub(), sub())
    if kind == "AU":
        return ctl.AU(sub(), sub())
    return {
        "EX": ctl.EX, "EF": ctl.EF, "EG": ctl.EG,
        "AX": ctl.AX, "AF": ctl.AF, "AG": ctl.AG,
    }[kind](sub())


def run_random_suite(
    seed: int,
    n_cases: int,
    depth: int = 3,
    opts: EvalOptions | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[EquivReport]:
    """Seeded random equivalence suite; returns one report per case."""
    rng = random.Random(seed)
    reports = []
    for _ in range(n_cases):
        net = random_net(rng)
        f = random_formula(rng, net, depth)
        reports.append(check_equiv(net, f, opts=opts, budget=budget))
    return reports
