"""Seeded random instances that land in a requested regime by construction."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, InvariantViolation
from .model import Instance, RegimeKind, classify_regimes, regime_kinds
from .rng import Pcg32

GENERIC = "generic"
MAX_COST = 1000

# per-agent "is this chore large" patterns of the 3-agent chore taxonomy
_TYPE_PATTERNS = (
    (True, True, True),                                   # consistently large
    (False, False, False),                                # consistently small
    (True, False, False), (False, True, False), (False, False, True),  # large only for one
    (False, True, True), (True, False, True), (True, True, False),     # small only for one
)


@dataclass(frozen=True)
class GeneratorSpec:
    """``target`` is a ``RegimeKind`` or ``"generic"`` (no structure)."""

    target: RegimeKind | str
    n: int
    m: int
    seed: int
    max_cost: int = 100

    def validate(self) -> None:
        if self.n < 1 or self.m < 0:
            raise InputError("need n >= 1 and m >= 0")
        if not 0 <= self.seed < 1 << 64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if not 1 <= self.max_cost <= MAX_COST:
            raise InputError(f"max_cost must lie in 1..{MAX_COST}")
        if self.target is RegimeKind.SMALL_M and self.m > 2 * self.n:
            raise InputError(f"small_m needs m <= 2n, got n={self.n}, m={self.m}")
        if self.target is RegimeKind.BIVALUED_THREE and self.n != 3:
            raise InputError("bivalued_three needs n = 3")
        if self.target is RegimeKind.UNSUPPORTED:
            raise InputError("cannot target the unsupported regime; use 'generic'")


def _uniform_rows(rng: Pcg32, n: int, m: int, max_cost: int) -> list[list[int]]:
    return [[rng.randint(0, max_cost) for _ in range(m)] for _ in range(n)]


def _identical_ordering_rows(rng: Pcg32, n: int, m: int, max_cost: int) -> list[list[int]]:
    """One shared ranking with random ties; every agent but a random one
    applies its own strictly increasing cost map to the ranks."""
    levels = rng.randint(1, max(1, min(m, max_cost + 1)))
    rank = [rng.below(levels) for _ in range(m)]
    special = rng.below(n)
    rows = []
    for a in range(n):
        if a == special:
            rows.append([rng.randint(0, max_cost) for _ in range(m)])
            continue
        scale = sorted(rng.sample(range(max_cost + 1), levels))
        rows.append([scale[r] for r in rank])
    return rows


def _bivalued_rows(rng: Pcg32, m: int) -> list[list[int]]:
    """Large cost ``10*s``, small cost ``k*s`` (so eps = k/10).

    Each instance draws a random subset of chore types so that every branch
    of the three-agent solver is exercised frequently.
    """
    unit = [rng.randint(1, 10) for _ in range(3)]
    small = [rng.randint(0, 9) * unit[i] for i in range(3)]
    large = [10 * unit[i] for i in range(3)]
    k = rng.randint(1, len(_TYPE_PATTERNS))
    allowed = rng.sample(_TYPE_PATTERNS, k)
    rows = [[0] * m for _ in range(3)]
    for e in range(m):
        pattern = rng.choice(allowed)
        for i in range(3):
            rows[i][e] = large[i] if pattern[i] else small[i]
    return rows


def generate(spec: GeneratorSpec) -> Instance:
    spec.validate()
    rng = Pcg32(spec.seed)
    n, m = spec.n, spec.m
    if spec.target is RegimeKind.IDENTICAL_ORDERING:
        rows = _identical_ordering_rows(rng, n, m, spec.max_cost)
    elif spec.target is RegimeKind.BIVALUED_THREE:
        rows = _bivalued_rows(rng, m)
    elif spec.target is RegimeKind.SMALL_M or spec.target == GENERIC:
        rows = _uniform_rows(rng, n, m, spec.max_cost)
    else:
        raise InputError(f"unknown generator target {spec.target!r}")
    inst = Instance(n, m, tuple(tuple(r) for r in rows))
    if isinstance(spec.target, RegimeKind) and spec.target not in regime_kinds(classify_regimes(inst)):
        raise InvariantViolation(f"generated instance misses its target regime {spec.target.value}")
    return inst


def parse_target(name: str) -> RegimeKind | str:
    if name == GENERIC:
        return GENERIC
    try:
        return RegimeKind(name)
    except ValueError:
        raise InputError(f"unknown regime {name!r}") from None
