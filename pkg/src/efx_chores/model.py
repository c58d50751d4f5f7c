"""Problem data: instances, allocations, cost queries and regime detection.

Costs are exact rationals (``fractions.Fraction``).  Every comparison the
algorithms make is between costs *of the same agent*, so each row can be
multiplied by a positive constant without changing any outcome.  Instances
exploit this by caching an integer copy of every row (row times the lcm of
its denominators); the hot paths work on those integers.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError, PreconditionError


def to_cost(value) -> Fraction:
    """Coerce an int, Fraction, Decimal or numeric string to an exact cost.

    Floats are read through their shortest repr, so ``0.1`` means 1/10.

    >>> to_cost("0.25"), to_cost(3), to_cost("2/3")
    (Fraction(1, 4), Fraction(3, 1), Fraction(2, 3))
    """
    if isinstance(value, bool):
        raise InputError(f"cost must be numeric, got {value!r}")
    try:
        if isinstance(value, float):
            if not math.isfinite(value):
                raise InputError(f"cost must be finite, got {value!r}")
            c = Fraction(repr(value))
        elif isinstance(value, (int, Fraction, Decimal)):
            c = Fraction(value)
        elif isinstance(value, str):
            c = Fraction(value.strip())
        else:
            raise InputError(f"cost must be numeric, got {type(value).__name__}")
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        raise InputError(f"cannot parse cost {value!r}") from exc
    if c < 0:
        raise InputError(f"costs must be non-negative, got {value!r}")
    return c


@dataclass(frozen=True)
class Instance:
    """``n`` agents, ``m`` chores and an additive cost matrix ``costs[i][e]``."""

    n: int
    m: int
    costs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InputError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.m, int) or self.m < 0:
            raise InputError(f"m must be a non-negative integer, got {self.m!r}")
        rows = tuple(tuple(to_cost(c) for c in row) for row in self.costs)
        if len(rows) != self.n:
            raise InputError(f"expected {self.n} cost rows, got {len(rows)}")
        for i, row in enumerate(rows):
            if len(row) != self.m:
                raise InputError(f"row {i} has {len(row)} entries, expected {self.m}")
        object.__setattr__(self, "costs", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], n: int | None = None) -> "Instance":
        rows = [list(r) for r in rows]
        if n is None:
            n = len(rows)
        m = len(rows[0]) if rows else 0
        return cls(n=n, m=m, costs=tuple(tuple(r) for r in rows))

    @property
    def agents(self) -> range:
        return range(self.n)

    @property
    def chores(self) -> range:
        return range(self.m)

    @cached_property
    def int_rows(self) -> tuple[tuple[int, ...], ...]:
        """Each row scaled by the lcm of its denominators; all entries ints."""
        out = []
        for row in self.costs:
            scale = 1
            for c in row:
                scale = math.lcm(scale, c.denominator)
            out.append(tuple(int(c * scale) for c in row))
        return tuple(out)

    def cost(self, agent: int, chore: int) -> Fraction:
        self.check_agent(agent)
        self.check_chore(chore)
        return self.costs[agent][chore]

    def check_agent(self, agent: int) -> None:
        if not isinstance(agent, int) or not 0 <= agent < self.n:
            raise InputError(f"agent id {agent!r} out of range 0..{self.n - 1}")

    def check_chore(self, chore: int) -> None:
        if not isinstance(chore, int) or not 0 <= chore < self.m:
            raise InputError(f"chore id {chore!r} out of range 0..{self.m - 1}")

    def permute_agents(self, order: Sequence[int]) -> "Instance":
        """Instance whose agent ``k`` is this instance's agent ``order[k]``."""
        if sorted(order) != list(range(self.n)):
            raise InputError(f"{order!r} is not a permutation of the agents")
        return Instance(self.n, self.m, tuple(self.costs[a] for a in order))


def bundle_cost(inst: Instance, agent: int, bundle: Iterable[int]) -> Fraction:
    """Additive cost ``c_agent(bundle)``; the empty bundle costs 0.

    >>> inst = Instance.from_rows([[1, 2, 3]])
    >>> bundle_cost(inst, 0, {0, 2})
    Fraction(4, 1)
    """
    inst.check_agent(agent)
    row = inst.costs[agent]
    total = Fraction(0)
    for e in bundle:
        inst.check_chore(e)
        total += row[e]
    return total


class Owner(enum.Enum):
    AGENTS = "agents"
    SLOTS = "slots"


@dataclass(frozen=True)
class Allocation:
    """An n-partition of a chore subset.

    ``bundles[k]`` belongs to agent ``k`` (``Owner.AGENTS``) or to slot ``k``
    of the EFX-graph's second vertex side (``Owner.SLOTS``).
    """

    bundles: tuple[frozenset[int], ...]
    owner: Owner = Owner.AGENTS
    universe: frozenset[int] = field(init=False, compare=False)

    def __post_init__(self):
        bundles = tuple(frozenset(b) for b in self.bundles)
        seen: set[int] = set()
        for k, b in enumerate(bundles):
            for e in b:
                if not isinstance(e, int) or e < 0:
                    raise InputError(f"bad chore id {e!r} in bundle {k}")
                if e in seen:
                    raise InputError(f"chore {e} appears in more than one bundle")
                seen.add(e)
        object.__setattr__(self, "bundles", bundles)
        object.__setattr__(self, "universe", frozenset(seen))

    @classmethod
    def empty(cls, n: int, owner: Owner = Owner.SLOTS) -> "Allocation":
        return cls(tuple(frozenset() for _ in range(n)), owner)

    @property
    def n(self) -> int:
        return len(self.bundles)

    def as_slots(self) -> "Allocation":
        return Allocation(self.bundles, Owner.SLOTS)

    def as_agents(self) -> "Allocation":
        return Allocation(self.bundles, Owner.AGENTS)

    def adding(self, slot: int, chore: int) -> "Allocation":
        """Copy with ``chore`` added to ``bundles[slot]``."""
        if chore in self.universe:
            raise InputError(f"chore {chore} is already allocated")
        bundles = list(self.bundles)
        bundles[slot] = bundles[slot] | {chore}
        return Allocation(tuple(bundles), self.owner)

    def check_for(self, inst: Instance, *, complete: bool = False) -> None:
        """Raise ``InputError`` unless this allocation fits ``inst``."""
        if self.n != inst.n:
            raise InputError(f"allocation has {self.n} bundles, instance has {inst.n} agents")
        for e in self.universe:
            if e >= inst.m:
                raise InputError(f"chore {e} does not exist (m={inst.m})")
        if complete and len(self.universe) != inst.m:
            missing = sorted(set(range(inst.m)) - self.universe)
            raise InputError(f"allocation is not a partition: chores {missing} unallocated")

    def to_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.bundles]


# -- identical ordering -----------------------------------------------------

def rank_signature(row: Sequence) -> tuple[int, ...]:
    levels = {v: r for r, v in enumerate(sorted(set(row)))}
    return tuple(levels[v] for v in row)


def is_identical_ordering(inst: Instance, i: int, j: int) -> bool:
    """True iff agent ``i`` strictly prefers chore ``e`` to ``f`` exactly when
    agent ``j`` does, for every pair of chores.

    Applying the biconditional in both directions forces ties to co-occur,
    so the relation holds iff both rows induce the same dense ranking.
    """
    inst.check_agent(i)
    inst.check_agent(j)
    rows = inst.int_rows
    return rank_signature(rows[i]) == rank_signature(rows[j])


def identical_ordering_special(inst: Instance) -> int | None:
    """Smallest agent ``k`` such that all other agents are pairwise
    identical ordering, or ``None`` when no such agent exists."""
    groups: dict[tuple[int, ...], list[int]] = {}
    for i, row in enumerate(inst.int_rows):
        groups.setdefault(rank_signature(row), []).append(i)
    if len(groups) == 1:
        return 0
    if len(groups) == 2:
        a, b = groups.values()
        singles = [g[0] for g in (a, b) if len(g) == 1]
        if singles:
            return min(singles)
    return None


# -- personalized bi-valued ---------------------------------------------------

def scale_bivalued(inst: Instance) -> tuple[Instance, tuple[Fraction, ...], tuple[int, ...]]:
    """Divide each row by its maximum so values lie in ``{eps, 1}``.

    Returns ``(scaled, eps, degenerate)``.  A row with a single distinct
    value (including all zeros) becomes all ones with eps 0; such
    agents are listed in ``degenerate``.
    """
    rows, eps, degenerate = [], [], []
    for i, row in enumerate(inst.costs):
        values = sorted(set(row))
        if len(values) > 2:
            raise PreconditionError(f"agent {i} has {len(values)} distinct cost values")
        if len(values) <= 1:
            degenerate.append(i)
            rows.append(tuple(Fraction(1) for _ in row))
            eps.append(Fraction(0))
            continue
        lo, hi = values
        rows.append(tuple(c / hi for c in row))
        eps.append(lo / hi)
    return Instance(inst.n, inst.m, tuple(rows)), tuple(eps), tuple(degenerate)


class ChoreKind(enum.Enum):
    CONSISTENTLY_LARGE = "consistently_large"
    CONSISTENTLY_SMALL = "consistently_small"
    LARGE_ONLY_FOR = "large_only_for"
    SMALL_ONLY_FOR = "small_only_for"


@dataclass(frozen=True)
class ChoreType:
    kind: ChoreKind
    agent: int | None = None

    def __str__(self):
        return self.kind.value if self.agent is None else f"{self.kind.value}({self.agent})"


def chore_type_from_flags(large: Sequence[bool]) -> ChoreType:
    """Classify a chore of a 3-agent instance from per-agent "is large" flags."""
    count = sum(large)
    if count == 3:
        return ChoreType(ChoreKind.CONSISTENTLY_LARGE)
    if count == 0:
        return ChoreType(ChoreKind.CONSISTENTLY_SMALL)
    if count == 1:
        return ChoreType(ChoreKind.LARGE_ONLY_FOR, large.index(True))
    return ChoreType(ChoreKind.SMALL_ONLY_FOR, large.index(False))


def classify_chore(inst: Instance, e: int) -> ChoreType:
    """Type of chore ``e`` in a scaled 3-agent bi-valued instance."""
    if inst.n != 3:
        raise PreconditionError("chore taxonomy is defined for exactly three agents")
    inst.check_chore(e)
    for i, row in enumerate(inst.costs):
        below = {c for c in row if c != 1}
        if max(row) != 1 or len(below) > 1 or any(c > 1 for c in below):
            raise PreconditionError(f"row {i} is not scaled to values {{eps, 1}}")
    return chore_type_from_flags([row[e] == 1 for row in inst.costs])


# -- regimes ------------------------------------------------------------------

class RegimeKind(enum.Enum):
    SMALL_M = "small_m"
    IDENTICAL_ORDERING = "identical_ordering"
    BIVALUED_THREE = "bivalued_three"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    special: int | None = None
    epsilons: tuple[Fraction, ...] | None = None
    degenerate: tuple[int, ...] = ()

    def describe(self) -> str:
        if self.kind is RegimeKind.IDENTICAL_ORDERING:
            return f"{self.kind.value}(special={self.special})"
        if self.kind is RegimeKind.BIVALUED_THREE:
            eps = ", ".join(str(x) for x in self.epsilons)
            extra = f", constant rows={list(self.degenerate)}" if self.degenerate else ""
            return f"{self.kind.value}(eps=[{eps}]{extra})"
        return self.kind.value


def is_bivalued_three(inst: Instance) -> bool:
    return inst.n == 3 and all(len(set(row)) <= 2 for row in inst.int_rows)


def classify_regimes(inst: Instance) -> tuple[Regime, ...]:
    """Every tractable regime this instance falls in (or just UNSUPPORTED)."""
    found = []
    if inst.m <= 2 * inst.n:
        found.append(Regime(RegimeKind.SMALL_M))
    special = identical_ordering_special(inst)
    if special is not None:
        found.append(Regime(RegimeKind.IDENTICAL_ORDERING, special=special))
    if is_bivalued_three(inst):
        _, eps, degenerate = scale_bivalued(inst)
        found.append(Regime(RegimeKind.BIVALUED_THREE, epsilons=eps, degenerate=degenerate))
    return tuple(found) or (Regime(RegimeKind.UNSUPPORTED),)


def regime_kinds(regimes: Iterable[Regime]) -> set[RegimeKind]:
    return {r.kind for r in regimes}
