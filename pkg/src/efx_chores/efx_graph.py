"""EFX-graphs between agents and bundle slots, and matching maintenance.

Given bundles placed on slots, the EFX-graph has an edge ``(i, u)`` when
agent ``i`` could take slot ``u`` without strongly envying any bundle:

    max over e in bundle[u] of cost_i(bundle[u] - e)  <=  min_k cost_i(bundle[k])

With additive costs the left side is ``cost_i(bundle[u])`` minus the
cheapest chore of that bundle for ``i`` (0 for an empty slot).  An edge is a
*min-edge* when slot ``u`` also holds a cheapest bundle for ``i``.  A perfect matching in this graph hands every
agent a bundle it does not strongly envy, i.e. an EFX allocation.

Vertices: agent ids ``0..n-1`` on one side, slot ids ``0..n-1`` on the other.
A perfect matching is represented internally as a list ``x`` with
``x[agent] = slot``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError, InvariantViolation, PreconditionError
from .model import Allocation, Instance, Owner

Edge = tuple[int, int]


@dataclass(frozen=True)
class EfxGraph:
    n: int
    edges: frozenset[Edge]
    min_edges: frozenset[Edge]

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for i, u in self.edges:
            adj[i].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def min_adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for i, u in self.min_edges:
            adj[i].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def to_json(self) -> dict:
        return {
            "edges": [list(p) for p in sorted(self.edges)],
            "min_edges": [list(p) for p in sorted(self.min_edges)],
        }


@dataclass(frozen=True)
class Matching:
    """A set of disjoint (agent, slot) pairs."""

    n: int
    pairs: frozenset[Edge]

    def __post_init__(self):
        pairs = frozenset((int(i), int(u)) for i, u in self.pairs)
        agents = [i for i, _ in pairs]
        slots = [u for _, u in pairs]
        if len(set(agents)) != len(agents) or len(set(slots)) != len(slots):
            raise InputError("matching repeats a vertex")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_slots(cls, slot_of: Sequence[int]) -> "Matching":
        """Perfect matching from ``slot_of[agent] = slot``."""
        return cls(len(slot_of), frozenset(enumerate(slot_of)))

    @classmethod
    def identity(cls, n: int) -> "Matching":
        return cls.from_slots(list(range(n)))

    @property
    def perfect(self) -> bool:
        return len(self.pairs) == self.n

    def __len__(self):
        return len(self.pairs)

    def slot_of(self) -> list[int]:
        """``x[agent] = slot``; only valid for perfect matchings."""
        if not self.perfect:
            raise PreconditionError("matching is not perfect")
        x = [0] * self.n
        for i, u in self.pairs:
            x[i] = u
        return x

    def extract(self, alloc: Allocation) -> Allocation:
        """Give each agent the bundle of the slot it is matched to."""
        x = self.slot_of()
        return Allocation(tuple(alloc.bundles[x[i]] for i in range(self.n)), Owner.AGENTS)


# -- incremental cost table ---------------------------------------------------

class SlotTable:
    """Mutable bundle state with per-agent running sums and minima.

    ``total[i][u]`` is agent ``i``'s cost for slot ``u``; ``cheapest[i][u]``
    is the cheapest chore of that slot for ``i`` (``None`` for an empty slot).  Costs are the
    instance's scaled integer rows.
    """

    def __init__(self, rows: Sequence[Sequence[int]], bundles: Iterable[Iterable[int]]):
        self.rows = rows
        self.bundles = [list(b) for b in bundles]
        self.n = len(self.bundles)
        self.total = [[0] * self.n for _ in range(len(rows))]
        self.cheapest: list[list[int | None]] = [[None] * self.n for _ in range(len(rows))]
        for u, b in enumerate(self.bundles):
            for i, row in enumerate(rows):
                if b:
                    costs = [row[e] for e in b]
                    self.total[i][u] = sum(costs)
                    self.cheapest[i][u] = min(costs)

    @classmethod
    def from_allocation(cls, inst: Instance, alloc: Allocation) -> "SlotTable":
        alloc.check_for(inst)
        return cls(inst.int_rows, [sorted(b) for b in alloc.bundles])

    def add(self, u: int, e: int) -> None:
        self.bundles[u].append(e)
        for i, row in enumerate(self.rows):
            c = row[e]
            self.total[i][u] += c
            low = self.cheapest[i][u]
            if low is None or c < low:
                self.cheapest[i][u] = c

    def removal(self, i: int, u: int) -> int:
        low = self.cheapest[i][u]
        return 0 if low is None else self.total[i][u] - low

    def min_cost(self, i: int) -> int:
        return min(self.total[i])

    def is_edge(self, i: int, u: int) -> bool:
        return self.removal(i, u) <= self.min_cost(i)

    def first_min_slot(self, i: int) -> int:
        """Smallest slot carrying a min-edge of agent ``i``."""
        tot = self.total[i]
        low = min(tot)
        for u in range(self.n):
            if tot[u] == low:
                return u
        raise InvariantViolation("no cheapest slot")  # pragma: no cover

    def edges_of(self, i: int) -> tuple[list[int], list[int]]:
        tot = self.total[i]
        low = min(tot)
        edges, mins = [], []
        for u in range(self.n):
            if self.removal(i, u) <= low:
                edges.append(u)
                if tot[u] == low:
                    mins.append(u)
        return edges, mins

    def graph(self) -> EfxGraph:
        edges, mins = set(), set()
        for i in range(len(self.rows)):
            es, ms = self.edges_of(i)
            edges.update((i, u) for u in es)
            mins.update((i, u) for u in ms)
        return EfxGraph(self.n, frozenset(edges), frozenset(mins))

    def allocation(self, owner: Owner = Owner.SLOTS) -> Allocation:
        return Allocation(tuple(frozenset(b) for b in self.bundles), owner)

    def matched_allocation(self, x: Sequence[int]) -> Allocation:
        return Allocation(tuple(frozenset(self.bundles[x[i]]) for i in range(self.n)), Owner.AGENTS)

    def is_perfect_matching(self, x: Sequence[int]) -> bool:
        return sorted(x) == list(range(self.n)) and all(self.is_edge(i, x[i]) for i in range(self.n))


def build_graph(inst: Instance, alloc: Allocation) -> EfxGraph:
    """EFX-graph of ``alloc`` (read as an allocation to slots)."""
    if alloc.n != inst.n:
        raise InputError(f"allocation has {alloc.n} slots, instance has {inst.n} agents")
    return SlotTable.from_allocation(inst, alloc).graph()


# -- bipartite matching -------------------------------------------------------

def _hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> list[int | None]:
    """Maximum matching; returns ``match[left] = right or None``.

    Agents are scanned in index order and neighbours in the given order, so
    the result is deterministic.
    """
    n_left = len(adj)
    match_l: list[int | None] = [None] * n_left
    match_r: list[int | None] = [None] * n_right
    inf = n_left + 1

    while True:
        # BFS layers from free left vertices
        dist = [inf] * n_left
        queue = [i for i in range(n_left) if match_l[i] is None]
        for i in queue:
            dist[i] = 0
        found = False
        head = 0
        while head < len(queue):
            i = queue[head]
            head += 1
            for u in adj[i]:
                j = match_r[u]
                if j is None:
                    found = True
                elif dist[j] == inf:
                    dist[j] = dist[i] + 1
                    queue.append(j)
        if not found:
            return match_l

        def augment(i: int) -> bool:
            for u in adj[i]:
                j = match_r[u]
                if j is None or (dist[j] == dist[i] + 1 and augment(j)):
                    match_l[i] = u
                    match_r[u] = i
                    return True
            dist[i] = inf
            return False

        for i in range(n_left):
            if match_l[i] is None:
                augment(i)


def maximum_matching(g: EfxGraph) -> Matching:
    match = _hopcroft_karp(g.adjacency, g.n)
    return Matching(g.n, frozenset((i, u) for i, u in enumerate(match) if u is not None))


def find_perfect_matching(g: EfxGraph) -> Matching | None:
    """A perfect matching of ``g``, or ``None`` if none exists."""
    x = maximum_matching(g)
    return x if x.perfect else None


def _check_perfect_in(g: EfxGraph, x: Matching) -> list[int]:
    if x.n != g.n or not x.perfect:
        raise PreconditionError("matching is not perfect")
    if not x.pairs <= g.edges:
        raise PreconditionError(f"matching uses non-edges {sorted(x.pairs - g.edges)}")
    return x.slot_of()


# -- envy digraph ---------------------------------------------------------------

@dataclass(frozen=True)
class EnvyDigraph:
    """Arcs agent -> min-edge slots (designated agents only) and slot -> its
    matched agent.

    Walks use the functional sub-digraph that keeps only the smallest-index
    min-edge of each designated agent.  It already has every property the
    matching-repair arguments need: a cycle in it is a cycle of the full
    digraph, and when it is acyclic every walk ends at the one agent without
    an outgoing arc.
    """

    n: int
    agent_arcs: tuple[tuple[int, ...], ...]
    slot_arcs: tuple[int, ...]

    @classmethod
    def build(cls, g: EfxGraph, x: Sequence[int], designated: Iterable[int]) -> "EnvyDigraph":
        designated = set(designated)
        arcs = tuple(g.min_adjacency[i] if i in designated else () for i in range(g.n))
        agent_of = [0] * g.n
        for i, u in enumerate(x):
            agent_of[u] = i
        return cls(g.n, arcs, tuple(agent_of))

    @property
    def successor(self) -> list[int | None]:
        return [a[0] if a else None for a in self.agent_arcs]

    def find_cycle(self) -> list[int] | None:
        return _find_agent_cycle(self.successor, self.slot_arcs)

    def path_to_sink(self, slot: int) -> list[int]:
        """Agents visited walking from ``slot`` until an arc-less agent."""
        return _walk_to_sink(self.successor, self.slot_arcs, slot)


def _find_agent_cycle(succ: Sequence[int | None], agent_of: Sequence[int]) -> list[int] | None:
    """Agents of the first cycle in the walk agent -> succ slot -> matched agent.

    Agents with ``succ[a] is None`` are sinks.  Starts are tried in index
    order; the first vertex seen twice on the current walk closes the cycle.
    """
    n = len(succ)
    state = [0] * n  # 0 unseen, 1 on current walk, 2 finished
    for start in range(n):
        if state[start]:
            continue
        walk = []
        a: int | None = start
        while a is not None and state[a] == 0:
            state[a] = 1
            walk.append(a)
            s = succ[a]
            a = None if s is None else agent_of[s]
        if a is not None and state[a] == 1:
            return walk[walk.index(a):]
        for b in walk:
            state[b] = 2
    return None


def _walk_to_sink(succ: Sequence[int | None], agent_of: Sequence[int], slot: int) -> list[int]:
    walk = []
    a = agent_of[slot]
    for _ in range(len(succ) + 1):
        walk.append(a)
        s = succ[a]
        if s is None:
            return walk
        a = agent_of[s]
    raise InvariantViolation("walk to the arc-less agent revisits a vertex")


def _swap_along(x: Sequence[int], succ: Sequence[int | None], agents: Iterable[int]) -> list[int]:
    new_x = list(x)
    for a in agents:
        new_x[a] = succ[a]
    return new_x


# -- rotation and insertion ------------------------------------------------------

def rotate_to_min_edge(g: EfxGraph, x: Matching) -> Matching:
    """Perfect matching of ``g`` with at least one agent on a min-edge.

    ``x`` is returned unchanged if it already has one; otherwise it is
    switched along a cycle of min-edges and matching arcs.
    """
    slots = _check_perfect_in(g, x)
    if any(p in g.min_edges for p in x.pairs):
        return x
    d = EnvyDigraph.build(g, slots, range(g.n))
    cycle = d.find_cycle()
    if cycle is None or len(cycle) < 2:
        raise InvariantViolation("every agent has a min-edge, yet no rotating cycle was found")
    return Matching.from_slots(_swap_along(slots, d.successor, cycle))


def _agents_not_minimal(rows, allocated, e, agents) -> list[int]:
    """Agents for whom some allocated chore is strictly cheaper than ``e``."""
    bad = []
    for i in agents:
        c = rows[i][e]
        if any(rows[i][f] < c for f in allocated):
            bad.append(i)
    return bad


def add_chore_for_min_agent(inst: Instance, alloc: Allocation, i: int, u_i: int,
                            e: int, *, check: bool = True) -> Allocation:
    """Add ``e`` to slot ``u_i`` where ``(i, u_i)`` is a min-edge and ``e`` is a
    cheapest chore for ``i``.

    Then ``(i, u_i)`` stays an edge and no edge at another slot is lost, so a
    perfect matching through ``(i, u_i)`` survives.
    """
    inst.check_agent(i)
    inst.check_chore(e)
    if check:
        g = build_graph(inst, alloc)
        if (i, u_i) not in g.min_edges:
            raise PreconditionError(f"({i}, {u_i}) is not a min-edge")
        if e in alloc.universe:
            raise PreconditionError(f"chore {e} is already allocated")
        if _agents_not_minimal(inst.int_rows, alloc.universe, e, [i]):
            raise PreconditionError(f"chore {e} is not a cheapest chore for agent {i}")
    return alloc.as_slots().adding(u_i, e)


def _insert_keeping_matching(table: SlotTable, x: Sequence[int], e: int,
                             special: int) -> tuple[int, list[int]]:
    """Place ``e`` so that a perfect matching survives; mutates ``table``.

    Every agent except ``special`` must find ``e`` no costlier than any chore
    already placed, and ``x`` must be perfect in the current graph.  Returns
    the chosen slot and the repaired matching.
    """
    n = table.n
    agent_of = [0] * n
    for a, u in enumerate(x):
        agent_of[u] = a
    succ: list[int | None] = [None if a == special else table.first_min_slot(a) for a in range(n)]

    cycle = _find_agent_cycle(succ, agent_of)
    if cycle is not None:
        # 2-cycle: the agent's min slot is already its own, x stays
        new_x = _swap_along(x, succ, cycle)
        target = new_x[min(cycle)]
        table.add(target, e)
        return target, new_x

    target = x[special]
    table.add(target, e)
    if table.is_edge(special, target):
        return target, list(x)
    u = table.first_min_slot(special)
    if u == target:
        raise InvariantViolation("special agent lost its edge to its own cheapest slot")
    path = _walk_to_sink(succ, agent_of, u)
    if path[-1] != special:
        raise InvariantViolation("walk did not end at the special agent")
    new_x = _swap_along(x, succ, path[:-1])
    new_x[special] = u
    return target, new_x


def insert_chore_keeping_matching(inst: Instance, alloc: Allocation, x: Matching, e: int,
                                  special: int, *, check: bool = True
                                  ) -> tuple[Allocation, Matching]:
    """Add unallocated chore ``e`` to some slot while keeping a perfect matching.

    ``e`` must be a cheapest chore (among those allocated) for every agent
    except ``special``; ``special`` is only consulted through bundle costs.
    """
    inst.check_agent(special)
    inst.check_chore(e)
    table = SlotTable.from_allocation(inst, alloc)
    if check:
        g = table.graph()
        _check_perfect_in(g, x)
        if e in alloc.universe:
            raise PreconditionError(f"chore {e} is already allocated")
        others = [a for a in range(inst.n) if a != special]
        bad = _agents_not_minimal(inst.int_rows, alloc.universe, e, others)
        if bad:
            raise PreconditionError(f"chore {e} is not a cheapest chore for agents {bad}")
    _, new_x = _insert_keeping_matching(table, x.slot_of(), e, special)
    if check and not table.is_perfect_matching(new_x):
        raise InvariantViolation("repaired matching is not perfect in the new graph")
    return table.allocation(), Matching.from_slots(new_x)


def feasible_insertion_slots(inst: Instance, alloc: Allocation, e: int) -> list[int]:
    """All slots ``u`` such that adding ``e`` to ``A_u`` leaves a graph with a
    perfect matching (brute force, one matching per slot)."""
    good = []
    for u in range(alloc.n):
        g = build_graph(inst, alloc.as_slots().adding(u, e))
        if find_perfect_matching(g) is not None:
            good.append(u)
    return good


def insert_chore_try_all(inst: Instance, alloc: Allocation, e: int) -> tuple[Allocation, Matching]:
    """Reference insertion: first slot (by index) that keeps a perfect matching."""
    for u in range(alloc.n):
        new = alloc.as_slots().adding(u, e)
        x = find_perfect_matching(build_graph(inst, new))
        if x is not None:
            return new, x
    raise InvariantViolation(f"no slot accepts chore {e} with a perfect matching")
