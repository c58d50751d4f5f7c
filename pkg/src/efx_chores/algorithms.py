"""EFX solvers for the three tractable chore regimes, plus round-robin.

All solvers take an ``Instance`` and return an ``Allocation`` to agents.
Passing ``debug=True`` re-verifies the intermediate guarantees each solver
relies on and raises ``InvariantViolation`` on the first failure; the fast
path skips those checks.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .efx_graph import (
    SlotTable,
    _find_agent_cycle,
    _hopcroft_karp,
    _insert_keeping_matching,
    _swap_along,
    build_graph,
    find_perfect_matching,
    insert_chore_try_all,
)
from .errors import InvariantViolation, PreconditionError
from .model import (
    Allocation,
    ChoreKind,
    Instance,
    Owner,
    Regime,
    RegimeKind,
    rank_signature,
    chore_type_from_flags,
    classify_regimes,
    identical_ordering_special,
    is_bivalued_three,
)

logger = logging.getLogger(__name__)


# -- round-robin ----------------------------------------------------------------

@dataclass(frozen=True)
class RoundRobinTrace:
    allocation: Allocation
    last_round: tuple[int, ...]  # 0 for agents that received nothing
    order: tuple[int, ...]
    picks: tuple[int, ...] = ()  # chore taken in each round, in order


def round_robin(inst: Instance, chores: Iterable[int], order: Sequence[int]) -> RoundRobinTrace:
    """Agents take turns in ``order``, each picking its cheapest remaining
    chore (smallest index on ties), until ``chores`` is exhausted.

    >>> inst = Instance.from_rows([[1, 2, 3, 4], [4, 3, 2, 1]])
    >>> t = round_robin(inst, range(4), (0, 1))
    >>> t.allocation.to_lists(), t.last_round
    ([[0, 1], [2, 3]], (3, 4))
    """
    order = tuple(order)
    if sorted(order) != list(range(inst.n)):
        raise PreconditionError(f"{order!r} is not an ordering of the {inst.n} agents")
    pool = sorted(set(chores))
    for e in pool:
        inst.check_chore(e)
    rows = inst.int_rows
    prefs = {a: sorted(pool, key=lambda e, r=rows[a]: (r[e], e)) for a in set(order)}
    cursor = dict.fromkeys(prefs, 0)
    taken: set[int] = set()
    bundles: list[set[int]] = [set() for _ in range(inst.n)]
    last = [0] * inst.n
    picks = []
    for rnd in range(1, len(pool) + 1):
        a = order[(rnd - 1) % len(order)]
        pref, k = prefs[a], cursor[a]
        while pref[k] in taken:
            k += 1
        e = pref[k]
        cursor[a] = k + 1
        taken.add(e)
        bundles[a].add(e)
        last[a] = rnd
        picks.append(e)
    alloc = Allocation(tuple(frozenset(b) for b in bundles), Owner.AGENTS)
    return RoundRobinTrace(alloc, tuple(last), order, tuple(picks))


class RankPattern(enum.Enum):
    FIRST_BEFORE_OTHERS = "r1<min(r2,r3)"
    CHAIN = "r1<r2<r3"


# role ordering by m' mod 3; the last three rounds go to roles 0, 1, 2
_ORDER_BY_RESIDUE = {0: (0, 1, 2), 1: (2, 0, 1), 2: (1, 2, 0)}


def choose_order_for_ranks(m_prime: int, target: RankPattern) -> tuple[int, int, int]:
    """Ordering of three agents so round-robin over ``m_prime`` chores ends
    with agent 0, then 1, then 2 taking the final rounds.

    >>> choose_order_for_ranks(4, RankPattern.CHAIN)
    (2, 0, 1)
    """
    minimum = 2 if target is RankPattern.CHAIN else 3
    if m_prime < minimum:
        raise PreconditionError(f"{target.value} needs at least {minimum} chores, got {m_prime}")
    return _ORDER_BY_RESIDUE[m_prime % 3]


# -- m <= 2n --------------------------------------------------------------------

def _cheapest(row: Sequence[int], pool: Iterable[int]) -> int:
    return min(pool, key=lambda e: (row[e], e))


def _perfect_matching_of(table: SlotTable) -> list[int]:
    g = table.graph()
    match = _hopcroft_karp(g.adjacency, g.n)
    if any(u is None for u in match):
        raise InvariantViolation("EFX-graph has no perfect matching")
    return match


def _check_round_invariant(table: SlotTable, x: list[int], done: int) -> None:
    if not table.is_perfect_matching(x):
        raise InvariantViolation(f"round {done}: tracked matching is not perfect")
    for a in range(done, table.n):
        if len(table.bundles[x[a]]) > 1:
            raise InvariantViolation(
                f"round {done}: agent {a} is matched to a slot with "
                f"{len(table.bundles[x[a]])} chores")


def _small_m(inst: Instance, debug: bool) -> tuple[SlotTable, list[tuple[Allocation, list[int]]]]:
    n, m = inst.n, inst.m
    if m > 2 * n:
        raise PreconditionError(f"needs m <= 2n, got m={m}, n={n}")
    rows = inst.int_rows
    extra = max(m - n, 0)
    remaining = set(range(m))
    held = [0] * extra
    for i in reversed(range(extra)):
        held[i] = _cheapest(rows[i], remaining)
        remaining.discard(held[i])
    rest = sorted(remaining)
    table = SlotTable(rows, [[rest[u]] if u < len(rest) else [] for u in range(n)])

    # Matching tracked across merge rounds: agents 0..done-1 may sit on merged
    # slots, every later agent still holds at most one chore.
    x = list(range(n))
    history = []
    if debug:
        _check_round_invariant(table, x, 0)
        history.append((table.allocation(), list(x)))
    for i in range(extra):
        u = table.first_min_slot(i)
        table.add(u, held[i])
        if debug:
            if x[i] != u:
                j = x.index(u)
                x[i], x[j] = u, x[i]
            _check_round_invariant(table, x, i + 1)
            history.append((table.allocation(), list(x)))
    return table, history


def solve_small_m(inst: Instance, *, debug: bool = False) -> Allocation:
    """EFX allocation when there are at most twice as many chores as agents.

    Agents ``l-1, ..., 0`` (``l = max(m - n, 0)``) each hold back their
    cheapest remaining chore, the other chores are dealt one per slot, then
    each held chore goes to that agent's cheapest slot in order ``0..l-1``.
    A perfect matching of the resulting EFX-graph gives the allocation.
    """
    table, _ = _small_m(inst, debug)
    return table.matched_allocation(_perfect_matching_of(table))


def small_m_round_matchings(inst: Instance) -> list[tuple[Allocation, list[int]]]:
    """Slot allocation and tracked matching after each merge round.

    Entry ``t`` is the state after ``t`` held chores were merged; its
    matching (``x[agent] = slot``) is perfect in that state's EFX-graph and
    puts agents ``t..n-1`` on slots with at most one chore.  Raises
    ``InvariantViolation`` as soon as a round breaks this.
    """
    _, history = _small_m(inst, debug=True)
    return history


# -- n-1 identical ordering -------------------------------------------------------

def solve_identical_ordering(inst: Instance, special: int | None = None, *,
                             debug: bool = False, use_fallback: bool = False) -> Allocation:
    """EFX allocation when all agents but ``special`` share one chore ranking.

    Chores are inserted from most to least costly (in the shared ranking)
    into initially empty slots, each placed so that the EFX-graph keeps a
    perfect matching.  ``special`` only enters through bundle-cost
    comparisons.  ``use_fallback`` swaps the constructive placement for a
    try-every-slot search (slow; for differential testing).
    """
    n = inst.n
    if special is None:
        special = identical_ordering_special(inst)
        if special is None:
            raise PreconditionError("no agent leaves the others pairwise identical ordering")
    inst.check_agent(special)
    rows = inst.int_rows
    others = [a for a in range(n) if a != special]
    if len({rank_signature(rows[a]) for a in others}) > 1:
        raise PreconditionError(f"agents other than {special} are not identical ordering")

    if others:
        ref = rows[others[0]]
        sequence = sorted(range(inst.m), key=lambda e: (-ref[e], e))
    else:
        sequence = list(range(inst.m))

    if use_fallback:
        alloc = Allocation.empty(n)
        for e in sequence:
            alloc, _ = insert_chore_try_all(inst, alloc, e)
        x = find_perfect_matching(build_graph(inst, alloc))
        if x is None:
            raise InvariantViolation("EFX-graph has no perfect matching")
        return x.extract(alloc)

    table = SlotTable(rows, [[] for _ in range(n)])
    x = list(range(n))
    for e in sequence:
        _, x = _insert_keeping_matching(table, x, e, special)
        if debug and not table.is_perfect_matching(x):
            raise InvariantViolation(f"matching broke after inserting chore {e}")
    return table.matched_allocation(x)


# -- three agents, personalized bi-valued ---------------------------------------------

@dataclass
class BivaluedTrace:
    """How the bi-valued solver reached its answer.

    ``depth`` counts chores that were set aside and re-inserted (one per
    nesting level); ``cases`` names the branch taken at each level, outermost
    first: ``small_for_all`` or ``large_for_one`` for set-aside chores, then
    one of ``base``, ``all_large``, ``one_cheap``, ``two_cheap``.
    """

    depth: int = 0
    cases: list[str] = field(default_factory=list)


def _large_flags(inst: Instance) -> list[list[bool]]:
    """``flags[i][e]``: chore ``e`` costs agent ``i`` its larger value.

    Rows with one distinct value count as all large.
    """
    flags = []
    for row in inst.int_rows:
        top = max(row, default=0)
        flags.append([c == top for c in row])
    return flags


def _rotate_table(table: SlotTable, x: list[int]) -> tuple[int, list[int]]:
    """Agent sitting on a min-edge, after rotating ``x`` if needed."""
    for i in range(table.n):
        if table.total[i][x[i]] == table.min_cost(i):
            return i, x
    agent_of = [0] * table.n
    for a, u in enumerate(x):
        agent_of[u] = a
    succ = [table.first_min_slot(a) for a in range(table.n)]
    cycle = _find_agent_cycle(succ, agent_of)
    if cycle is None:
        raise InvariantViolation("no rotating cycle although every agent has a min-edge")
    return min(cycle), _swap_along(x, succ, cycle)


def _bivalued_base(inst: Instance, chores: list[int], large: list[list[bool]],
                   kinds: dict, trace: BivaluedTrace, debug: bool) -> list[set[int]]:
    if len(chores) <= 3:
        trace.cases.append("base")
        bundles = [set() for _ in range(3)]
        for j, e in enumerate(chores):
            bundles[j].add(e)
        return bundles

    if all(kinds[e].kind is ChoreKind.CONSISTENTLY_LARGE for e in chores):
        trace.cases.append("all_large")
        return [set(b) for b in round_robin(inst, chores, (0, 1, 2)).allocation.bundles]

    small_only = [e for e in chores if kinds[e].kind is ChoreKind.SMALL_ONLY_FOR]
    if len(small_only) + sum(kinds[e].kind is ChoreKind.CONSISTENTLY_LARGE for e in chores) != len(chores):
        raise InvariantViolation("case analysis exhausted: unexpected chore types at the bottom")
    e = small_only[0]
    first = kinds[e].agent
    second_pick = [f for f in small_only if f != e and kinds[f].agent != first]

    if not second_pick:
        trace.cases.append("one_cheap")
        second, third = [a for a in range(3) if a != first]
        roles = (first, second, third)
        rest = [f for f in chores if f != e]
        if debug and not all(large[second][f] and large[third][f] for f in rest):
            raise InvariantViolation("one-cheap branch: a remaining chore is small for agent 2 or 3")
        order = tuple(roles[k] for k in choose_order_for_ranks(len(rest), RankPattern.FIRST_BEFORE_OTHERS))
        rr = round_robin(inst, rest, order)
        if debug:
            r = rr.last_round
            if not r[first] < min(r[second], r[third]):
                raise InvariantViolation(f"one-cheap branch: rank pattern not met {r}")
        bundles = [set(b) for b in rr.allocation.bundles]
        bundles[first].add(e)
        return bundles

    trace.cases.append("two_cheap")
    e2 = second_pick[0]
    second = kinds[e2].agent
    third = 3 - first - second
    roles = (first, second, third)
    rest = [f for f in chores if f != e and f != e2]
    order = tuple(roles[k] for k in choose_order_for_ranks(len(rest), RankPattern.CHAIN))
    rr = round_robin(inst, rest, order)
    if debug:
        r = rr.last_round
        if not r[first] < r[second] < r[third]:
            raise InvariantViolation(f"two-cheap branch: rank pattern not met {r}")
    bundles = [set(b) for b in rr.allocation.bundles]
    bundles[first].add(e)
    bundles[second].add(e2)
    return bundles


def solve_bivalued_three_traced(inst: Instance, *, debug: bool = False
                                ) -> tuple[Allocation, BivaluedTrace]:
    if not is_bivalued_three(inst):
        raise PreconditionError("needs exactly three agents with at most two distinct costs each")
    large = _large_flags(inst)
    kinds = {e: chore_type_from_flags([large[i][e] for i in range(3)]) for e in range(inst.m)}
    # Dead-weight rows are normalized to all-large, matching the flags above.
    rows = [list(r) if len(set(r)) > 1 else [1] * inst.m for r in inst.int_rows]
    trace = BivaluedTrace()

    # Recursion unrolled: a consistently-small or large-only-for-one chore is
    # set aside while more than three chores remain; the rest is solved
    # directly, then the set-aside chores are re-inserted innermost first.
    peel = ([e for e in range(inst.m) if kinds[e].kind is ChoreKind.CONSISTENTLY_SMALL]
            + [e for e in range(inst.m) if kinds[e].kind is ChoreKind.LARGE_ONLY_FOR])
    peeled = peel[:max(inst.m - 3, 0)]
    bottom = sorted(set(range(inst.m)) - set(peeled))
    trace.depth = len(peeled)
    for e in peeled:
        trace.cases.append("small_for_all" if kinds[e].kind is ChoreKind.CONSISTENTLY_SMALL else "large_for_one")

    bundles = _bivalued_base(inst, bottom, large, kinds, trace, debug)
    table = SlotTable(rows, [sorted(b) for b in bundles])
    x = list(range(3))
    if debug and not table.is_perfect_matching(x):
        raise InvariantViolation("innermost allocation is not EFX")

    for e in reversed(peeled):
        t = kinds[e]
        if t.kind is ChoreKind.CONSISTENTLY_SMALL:
            i, x = _rotate_table(table, x)
            table.add(x[i], e)
        else:
            _, x = _insert_keeping_matching(table, x, e, t.agent)
        if debug and not table.is_perfect_matching(x):
            raise InvariantViolation(f"matching broke after re-inserting chore {e}")
    return table.matched_allocation(x), trace


def solve_bivalued_three(inst: Instance, *, debug: bool = False) -> Allocation:
    """EFX allocation for three agents whose costs each take at most two values.

    Each row is read on the scale {small, large}.  While more than three
    chores remain, one that is small for everybody or large for exactly one
    agent is set aside and later re-inserted without losing a perfect
    matching of the EFX-graph.  What remains is solved by one chore per
    agent, plain round-robin (all chores large for everyone), or a
    round-robin with a rigged agent order in which the agents' own cheap
    chores are handed out afterwards.
    """
    return solve_bivalued_three_traced(inst, debug=debug)[0]


# -- dispatcher -------------------------------------------------------------------------

NO_ALGORITHM = "no algorithm known for this instance"


@dataclass
class SolveResult:
    regimes: tuple[Regime, ...]
    solutions: dict[Regime, Allocation]

    @property
    def supported(self) -> bool:
        return bool(self.solutions)

    @property
    def notice(self) -> str | None:
        return None if self.supported else NO_ALGORITHM


def solve(inst: Instance, only: Iterable[RegimeKind] | None = None, *,
          debug: bool = False) -> SolveResult:
    """Run every applicable solver (optionally restricted to ``only``)."""
    wanted = set(only) if only is not None else None
    regimes = classify_regimes(inst)
    solutions: dict[Regime, Allocation] = {}
    for regime in regimes:
        if wanted is not None and regime.kind not in wanted:
            continue
        if regime.kind is RegimeKind.SMALL_M:
            solutions[regime] = solve_small_m(inst, debug=debug)
        elif regime.kind is RegimeKind.IDENTICAL_ORDERING:
            solutions[regime] = solve_identical_ordering(inst, regime.special, debug=debug)
        elif regime.kind is RegimeKind.BIVALUED_THREE:
            solutions[regime] = solve_bivalued_three(inst, debug=debug)
    if not solutions:
        logger.info("%s (regimes: %s)", NO_ALGORITHM, [r.describe() for r in regimes])
    return SolveResult(regimes, solutions)
