"""Acceptance criteria, one test each.

Every test prints a ``[PASS]``/``[FAIL]`` line (also collected in the
terminal summary) and then asserts the criterion at its stated tolerance.
Instances are drawn from seeded ``random.Random`` streams built here, not
from the package's generators, except for the performance runs.
"""
import itertools
import random
import time
from fractions import Fraction

from efx_chores import (
    Instance,
    RegimeKind,
    build_graph,
    enumerate_efx,
    insert_chore_keeping_matching,
    is_efx,
    is_identical_ordering,
    round_robin,
    solve,
    solve_bivalued_three,
    solve_identical_ordering,
    solve_small_m,
)
from efx_chores.algorithms import small_m_round_matchings, solve_bivalued_three_traced
from efx_chores.efx_graph import insert_chore_try_all
from efx_chores.generators import GeneratorSpec, generate

from oracles import (
    brute_perfect_matchings,
    cost,
    naive_edges,
    naive_identical_ordering,
    naive_is_efx,
    random_insertion_input,
    random_instance,
)

RUNS = 500


def small_m_instances():
    rnd = random.Random(20240101)
    out = []
    for _ in range(RUNS):
        n = rnd.randint(1, 6)
        out.append(random_instance(rnd, n, rnd.randint(0, 2 * n), hi=100))
    return out


def identical_ordering_instance(rnd, n=None, max_m=30):
    n = n or rnd.randint(2, 6)
    m = rnd.randint(0, max_m)
    levels = rnd.randint(1, max(m, 1))
    rank = [rnd.randrange(levels) for _ in range(m)]
    special = rnd.randrange(n)
    rows = []
    for a in range(n):
        if a == special:
            rows.append([rnd.randint(0, 100) for _ in range(m)])
        elif rnd.random() < 0.5:
            scale = sorted(rnd.sample(range(0, 300), levels))
            rows.append([scale[r] for r in rank])
        else:
            # affine rescaling of the shared ranks
            mul, add = Fraction(rnd.randint(1, 9), rnd.randint(1, 4)), rnd.randint(0, 5)
            rows.append([mul * r + add for r in rank])
    return Instance.from_rows(rows, n=n), special


def bivalued_instance(rnd, m):
    eps = [Fraction(rnd.randrange(10), 10) for _ in range(3)]
    scale = [rnd.randint(1, 5) for _ in range(3)]
    patterns = rnd.sample(list(itertools.product([False, True], repeat=3)), rnd.randint(1, 8))
    chosen = [rnd.choice(patterns) for _ in range(m)]
    rows = [[scale[i] * (1 if p[i] else eps[i]) for p in chosen] for i in range(3)]
    return Instance.from_rows(rows)


def test_small_m_suite(acceptance_line):
    t0 = time.perf_counter()
    passed = 0
    for inst in small_m_instances():
        passed += is_efx(inst, solve_small_m(inst))
    elapsed = time.perf_counter() - t0
    ok = passed == RUNS and elapsed < 5
    acceptance_line("m<=2n suite: 500 instances EFX, runtime < 5 s", ok,
                    f"{passed}/{RUNS} EFX in {elapsed:.2f}s")
    assert ok


def test_identical_ordering_suite(acceptance_line):
    rnd = random.Random(20240202)
    passed = verified = 0
    for _ in range(RUNS):
        inst, special = identical_ordering_instance(rnd)
        others = [a for a in range(inst.n) if a != special]
        verified += all(is_identical_ordering(inst, i, j) and naive_identical_ordering(inst, i, j)
                        for i, j in itertools.combinations(others, 2))
        passed += naive_is_efx(inst, solve_identical_ordering(inst, special))
    ok = passed == verified == RUNS
    acceptance_line("identical-ordering suite: 500 instances EFX", ok,
                    f"{passed}/{RUNS} EFX, {verified}/{RUNS} orderings verified")
    assert ok


def test_bivalued_suite(acceptance_line):
    rnd = random.Random(20240303)
    passed = depth_ok = 0
    cases = set()
    for _ in range(RUNS):
        m = rnd.randint(0, 25)
        inst = bivalued_instance(rnd, m)
        alloc, trace = solve_bivalued_three_traced(inst)
        passed += naive_is_efx(inst, alloc)
        depth_ok += trace.depth <= m
        cases.update(trace.cases)
    ok = passed == depth_ok == RUNS
    acceptance_line("three-agent bi-valued suite: 500 instances EFX, depth <= m", ok,
                    f"{passed}/{RUNS} EFX, depth bound {depth_ok}/{RUNS}, branches {sorted(cases)}")
    assert ok


def test_oracle_cross_check(acceptance_line):
    rnd = random.Random(20240404)
    inside = nonempty = total = 0
    per_kind = dict.fromkeys(["small_m", "identical_ordering", "bivalued_three"], 0)
    for k in range(100):
        kind = list(per_kind)[k % 3]
        if kind == "small_m":
            inst = random_instance(rnd, 3, rnd.randint(0, 6), hi=rnd.choice([3, 20]))
            outputs = [solve_small_m(inst)]
        elif kind == "identical_ordering":
            inst, special = identical_ordering_instance(rnd, n=3, max_m=7)
            outputs = [solve_identical_ordering(inst, special)]
        else:
            inst = bivalued_instance(rnd, rnd.randint(0, 7))
            outputs = [solve_bivalued_three(inst)]
        outputs += list(solve(inst).solutions.values())
        found = set(enumerate_efx(inst))
        per_kind[kind] += 1
        nonempty += bool(found)
        inside += sum(a in found for a in outputs)
        total += len(outputs)
    ok = nonempty == 100 and inside == total
    acceptance_line("oracle cross-check: 100 instances n=3, m<=7", ok,
                    f"nonempty {nonempty}/100, outputs in EFX set {inside}/{total}, per regime {per_kind}")
    assert ok


def test_round_robin_envy_bound(acceptance_line):
    rnd = random.Random(20240505)
    checked = failures = 0
    for _ in range(RUNS):
        n, m = rnd.randint(2, 6), rnd.randint(0, 20)
        inst = random_instance(rnd, n, m, hi=rnd.choice([3, 100]))
        order = list(range(n))
        rnd.shuffle(order)
        t = round_robin(inst, range(m), order)
        a, r = t.allocation.bundles, t.last_round
        for i, j in itertools.permutations(range(n), 2):
            if r[i] < r[j]:
                checked += 1
                first = cost(inst, i, a[i]) <= cost(inst, i, a[j])
                second = any(cost(inst, j, a[j] - {e}) <= cost(inst, j, a[i]) for e in a[j])
                failures += not (first and second)
    ok = failures == 0
    acceptance_line("round-robin envy bound: 500 (instance, order) pairs", ok,
                    f"{checked - failures}/{checked} ordered pairs satisfy both inequalities")
    assert ok


def test_efx_graph_golden(acceptance_line, sample, sample_alloc):
    g = build_graph(sample, sample_alloc)
    edges = {(0, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)}
    mins = {(0, 0), (1, 2), (2, 0), (2, 1), (2, 2)}
    ok = g.edges == edges and g.min_edges == mins
    acceptance_line("EFX-graph golden test on the running example", ok,
                    f"edges {sorted(g.edges)}, min edges {sorted(g.min_edges)}")
    assert ok


def test_merge_round_matchings(acceptance_line):
    rounds = bad = 0
    for inst in small_m_instances():
        history = small_m_round_matchings(inst)
        held = max(inst.m - inst.n, 0)
        if len(history) != held + 1:
            bad += 1
            continue
        for t, (alloc, x) in enumerate(history):
            rounds += 1
            edges, _ = naive_edges(inst, alloc)
            perfect = sorted(x) == list(range(inst.n)) and all((a, x[a]) in edges for a in range(inst.n))
            sizes = [len(alloc.bundles[x[a]]) for a in range(t, inst.n)]
            cond = all(s == 1 for s in sizes) if held else all(s <= 1 for s in sizes)
            bad += not (perfect and cond)
        final = history[-1][0]
        bad += final.universe != set(range(inst.m))
    ok = bad == 0
    acceptance_line("merge-round matching invariant on all m<=2n suite instances", ok,
                    f"{rounds - bad}/{rounds} round states hold a perfect matching with the singleton condition")
    assert ok


def test_insertion_property(acceptance_line):
    rnd = random.Random(20240606)
    kept = agree = 0
    for k in range(RUNS):
        inst, alloc, x, e, special = random_insertion_input(rnd)
        new, x2 = insert_chore_keeping_matching(inst, alloc, x, e, special)
        edges, _ = naive_edges(inst, new)
        kept += x2.perfect and x2.pairs <= edges and new.universe == alloc.universe | {e}
        if k < 100:
            placed = next(u for u in range(inst.n) if new.bundles[u] != alloc.bundles[u])
            feasible = [u for u in range(inst.n)
                        if brute_perfect_matchings(inst.n, naive_edges(inst, alloc.adding(u, e))[0])]
            ref, ref_x = insert_chore_try_all(inst, alloc, e)
            ref_u = next(u for u in range(inst.n) if ref.bundles[u] != alloc.bundles[u])
            agree += placed in feasible and ref_u == feasible[0] and ref_x.pairs <= naive_edges(inst, ref)[0]
    ok = kept == RUNS and agree == 100
    acceptance_line("insertion property: 500 inputs keep a perfect matching, 100 agree with try-all", ok,
                    f"kept {kept}/{RUNS}, differential {agree}/100")
    assert ok


def _worst_time(solver, inst, repeat=3):
    worst = 0.0
    for _ in range(repeat):
        t0 = time.perf_counter()
        alloc = solver(inst)
        worst = max(worst, time.perf_counter() - t0)
    return worst, is_efx(inst, alloc)


def test_performance(acceptance_line):
    runs = [
        ("n=50 m=100 m<=2n", RegimeKind.SMALL_M, 50, 100, solve_small_m, 1.0),
        ("n=50 m=500 identical ordering", RegimeKind.IDENTICAL_ORDERING, 50, 500, solve_identical_ordering, 2.0),
        ("n=3 m=10000 bi-valued", RegimeKind.BIVALUED_THREE, 3, 10_000, solve_bivalued_three, 2.0),
    ]
    all_ok = True
    for name, kind, n, m, solver, limit in runs:
        inst = generate(GeneratorSpec(kind, n, m, seed=17))
        worst, efx = _worst_time(solver, inst)
        ok = worst < limit and efx
        all_ok &= ok
        acceptance_line(f"performance {name} < {limit:g} s", ok, f"worst of 3: {worst:.3f}s, EFX {efx}")
    assert all_ok

