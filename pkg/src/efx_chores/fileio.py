"""JSON instance and allocation files.

Instance: ``{"n": int, "m": int, "costs": [[cost, ...], ...]}`` where a cost is
a JSON integer, a JSON decimal, or a string (``"0.25"``, ``"2/3"``).
Allocation: ``{"bundles": [[chore, ...], ...]}`` with 0-based ids, in agent order.

Costs are written back as integers when integral, as decimal strings when
the value has a finite decimal expansion, and as ``"p/q"`` otherwise, so
reading a written file gives back exactly the same values.
"""
from __future__ import annotations

import json
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from .errors import InputError
from .model import Allocation, Instance, Owner


def format_cost(c: Fraction) -> int | str:
    if c.denominator == 1:
        return c.numerator
    d = c.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{c.numerator}/{c.denominator}"
    places = max(twos, fives)
    digits = str(c.numerator * 10**places // c.denominator).rjust(places + 1, "0")
    return f"{digits[:-places]}.{digits[-places:]}"


def _loads(text: str):
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def instance_from_json(data) -> Instance:
    if not isinstance(data, dict) or "costs" not in data:
        raise InputError("instance must be an object with a 'costs' field")
    costs = data["costs"]
    if not isinstance(costs, list) or not all(isinstance(r, list) for r in costs):
        raise InputError("'costs' must be a list of rows")
    n = data.get("n", len(costs))
    m = data.get("m", len(costs[0]) if costs else 0)
    if not isinstance(n, int) or not isinstance(m, int):
        raise InputError("'n' and 'm' must be integers")
    return Instance(n, m, tuple(tuple(r) for r in costs))


def instance_to_json(inst: Instance) -> dict:
    return {"n": inst.n, "m": inst.m,
            "costs": [[format_cost(c) for c in row] for row in inst.costs]}


def allocation_from_json(data) -> Allocation:
    if not isinstance(data, dict) or not isinstance(data.get("bundles"), list):
        raise InputError("allocation must be an object with a 'bundles' list")
    bundles = []
    for k, b in enumerate(data["bundles"]):
        if not isinstance(b, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in b):
            raise InputError(f"bundle {k} must be a list of chore indices")
        if len(set(b)) != len(b):
            raise InputError(f"bundle {k} lists a chore twice")
        bundles.append(frozenset(b))
    return Allocation(tuple(bundles), Owner.AGENTS)


def allocation_to_json(alloc: Allocation) -> dict:
    return {"bundles": alloc.to_lists()}


def dumps(data) -> str:
    return json.dumps(data, separators=(", ", ": ")) + "\n"


def read_instance(path: str | Path) -> Instance:
    return instance_from_json(_loads(_read(path)))


def read_allocation(path: str | Path) -> Allocation:
    return allocation_from_json(_loads(_read(path)))


def write_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps(instance_to_json(inst)))


def write_allocation(alloc: Allocation, path: str | Path) -> None:
    Path(path).write_text(dumps(allocation_to_json(alloc)))


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
