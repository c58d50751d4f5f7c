import itertools

import pytest
from hypothesis import given, settings, strategies as st

from efx_chores import (
    Allocation,
    CapExceeded,
    InputError,
    Instance,
    Owner,
    RegimeKind,
    enumerate_efx,
    envy_report,
    is_ef1,
    is_efx,
)
from efx_chores.generators import GeneratorSpec, generate
from efx_chores.oracle import count_efx

from oracles import naive_is_ef1, naive_is_efx, random_instance


def agents(*bs):
    return Allocation(tuple(frozenset(b) for b in bs), Owner.AGENTS)


def test_efx_examples():
    inst = Instance.from_rows([[5, 1], [5, 1]])
    bad = agents({0, 1}, set())
    assert not is_efx(inst, bad)
    report = envy_report(inst, bad)
    assert not report.efx and report.strong == {(0, 1): 1}
    assert (0, 1) in report.envies
    assert "witness chore 1" in report.lines()[0]

    good = agents({0}, {1})
    assert is_efx(inst, good) and envy_report(inst, good).efx


def test_one_chore_each_is_efx():
    inst = Instance.from_rows([[9, 1, 4], [2, 8, 8], [0, 3, 7]])
    for perm in itertools.permutations(range(3)):
        assert is_efx(inst, agents(*({e} for e in perm)))


def test_ef1_examples():
    inst = Instance.from_rows([[1, 1, 1], [1, 1, 1]])
    assert not is_ef1(inst, agents({0, 1, 2}, set()))
    inst = Instance.from_rows([[1, 1], [1, 1]])
    assert not is_ef1(inst, agents({0, 1}, set()))  # one chore still costs 1 > 0
    assert is_ef1(inst, agents({0}, {1}))


def test_zero_cost_envy_without_strong_envy():
    # envy comes from a chore whose removal leaves nothing to envy over
    inst = Instance.from_rows([[0, 3], [1, 1]])
    report = envy_report(inst, agents({0, 1}, set()))
    assert report.envies == {(0, 1)}
    assert report.strong == {(0, 1): 0}
    assert not is_efx(inst, agents({0, 1}, set()))


def test_checks_reject_partial_allocations():
    inst = Instance.from_rows([[1, 2], [3, 4]])
    with pytest.raises(InputError, match="1"):
        is_efx(inst, agents({0}, set()))
    with pytest.raises(InputError):
        envy_report(inst, agents({0, 1}, set(), set()))


@settings(max_examples=300)
@given(st.integers(1, 4), st.integers(0, 7), st.randoms(use_true_random=False))
def test_checks_agree_with_definitions(n, m, rnd):
    inst = random_instance(rnd, n, m, hi=rnd.choice([2, 9]))
    owners = [rnd.randrange(n) for _ in range(m)]
    alloc = agents(*({e for e in range(m) if owners[e] == a} for a in range(n)))
    efx = is_efx(inst, alloc)
    assert efx == naive_is_efx(inst, alloc) == envy_report(inst, alloc).efx
    assert is_ef1(inst, alloc) == naive_is_ef1(inst, alloc)
    if efx:
        assert is_ef1(inst, alloc)


def test_enumerate_matches_definition_exhaustively():
    for seed, m in itertools.product(range(4), range(7)):
        inst = generate(GeneratorSpec("generic", 3, m, seed, max_cost=4))
        found = set(enumerate_efx(inst))
        for owners in itertools.product(range(3), repeat=m):
            alloc = agents(*({e for e in range(m) if owners[e] == a} for a in range(3)))
            assert (alloc in found) == naive_is_efx(inst, alloc)


def test_enumerate_examples():
    assert count_efx(Instance.from_rows([[3], [4]])) == 2
    only = enumerate_efx(Instance.from_rows([[], []]))
    assert only == [agents(set(), set())]
    with pytest.raises(CapExceeded):
        enumerate_efx(Instance.from_rows([[1] * 20] * 3))
    with pytest.raises(CapExceeded):
        enumerate_efx(Instance.from_rows([[1] * 3] * 3), cap=26)
    assert count_efx(Instance.from_rows([[1] * 3] * 3), cap=27) > 0


def test_enumerate_order_is_lexicographic():
    found = enumerate_efx(Instance.from_rows([[1, 1], [1, 1]]))
    assert [a.to_lists() for a in found] == [[[0], [1]], [[1], [0]]]


@pytest.mark.parametrize("seed", range(10))
def test_bivalued_instances_have_efx_allocations(seed):
    inst = generate(GeneratorSpec(RegimeKind.BIVALUED_THREE, 3, 1 + seed % 7, seed))
    assert enumerate_efx(inst)
