"""Ground truth: envy reports, EFX/EF1 checks and brute-force enumeration."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapExceeded
from .model import Allocation, Instance, Owner

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class EnvyReport:
    """Pairwise envy of an allocation.

    ``envies`` holds ``(i, j)`` where agent ``i`` finds its own bundle costlier
    than ``j``'s.  ``strong`` maps each ``(i, j)`` where ``i`` strongly envies
    ``j`` to a witness chore in ``i``'s bundle whose removal still leaves it
    costlier than ``j``'s bundle.  The two are computed
    independently; neither implies the other once zero-cost chores appear.
    """

    n: int
    envies: frozenset[tuple[int, int]]
    strong: dict[tuple[int, int], int]

    @property
    def efx(self) -> bool:
        return not self.strong

    def lines(self) -> list[str]:
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if i == j:
                    continue
                flags = []
                if (i, j) in self.envies:
                    flags.append("envies")
                if (i, j) in self.strong:
                    flags.append(f"strongly envies (witness chore {self.strong[(i, j)]})")
                if flags:
                    out.append(f"agent {i} -> agent {j}: " + ", ".join(flags))
        return out


def _totals(rows, alloc: Allocation) -> list[list[int]]:
    return [[sum(row[e] for e in b) for b in alloc.bundles] for row in rows]


def envy_report(inst: Instance, alloc: Allocation) -> EnvyReport:
    alloc.check_for(inst, complete=True)
    rows = inst.int_rows
    totals = _totals(rows, alloc)
    envies, strong = set(), {}
    for i in range(inst.n):
        own = alloc.bundles[i]
        # removing the cheapest chore leaves the costliest remainder
        witness = min(own, key=lambda e: (rows[i][e], e)) if own else None
        left = totals[i][i] - rows[i][witness] if own else 0
        for j in range(inst.n):
            if j == i:
                continue
            if totals[i][i] > totals[i][j]:
                envies.add((i, j))
            if own and left > totals[i][j]:
                strong[(i, j)] = witness
    return EnvyReport(inst.n, frozenset(envies), strong)


def is_efx(inst: Instance, alloc: Allocation) -> bool:
    """No agent's bundle minus its cheapest chore costs more than another bundle."""
    alloc.check_for(inst, complete=True)
    rows = inst.int_rows
    for i, row in enumerate(rows):
        own = alloc.bundles[i]
        if len(own) <= 1:
            continue
        costs = [row[e] for e in own]
        worst_left = sum(costs) - min(costs)
        if any(worst_left > sum(row[e] for e in b) for j, b in enumerate(alloc.bundles) if j != i):
            return False
    return True


def is_ef1(inst: Instance, alloc: Allocation) -> bool:
    """Every non-empty bundle has some chore whose removal clears all envy."""
    alloc.check_for(inst, complete=True)
    rows = inst.int_rows
    totals = _totals(rows, alloc)
    for i, row in enumerate(rows):
        own = alloc.bundles[i]
        if not own:
            continue
        best_left = totals[i][i] - max(row[e] for e in own)
        if any(best_left > totals[i][j] for j in range(inst.n) if j != i):
            return False
    return True


def enumerate_efx(inst: Instance, cap: int = DEFAULT_CAP) -> list[Allocation]:
    """Every EFX allocation of all chores, by brute force over ``n**m``
    assignments.

    Assignments are visited as base-``n`` numbers with chore 0 as the most
    significant digit.  Refuses (``CapExceeded``) when ``n**m > cap``.
    """
    n, m = inst.n, inst.m
    if n**m > cap:
        raise CapExceeded(f"{n}^{m} assignments exceed the cap of {cap}")
    rows = inst.int_rows
    found = []
    for owners in itertools.product(range(n), repeat=m):
        bundles = [[] for _ in range(n)]
        for e, a in enumerate(owners):
            bundles[a].append(e)
        if _efx_lists(rows, bundles):
            found.append(Allocation(tuple(frozenset(b) for b in bundles), Owner.AGENTS))
    return found


def _efx_lists(rows, bundles) -> bool:
    for i, row in enumerate(rows):
        own = bundles[i]
        if len(own) <= 1:
            continue
        worst_left = sum(row[e] for e in own) - min(row[e] for e in own)
        for j, b in enumerate(bundles):
            if j != i and worst_left > sum(row[e] for e in b):
                return False
    return True


def count_efx(inst: Instance, cap: int = DEFAULT_CAP) -> int:
    return len(enumerate_efx(inst, cap))
