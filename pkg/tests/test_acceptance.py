"""End-to-end acceptance checks, one per criterion.

Each check prints a single PASS/FAIL line; the lines are repeated in the
pytest terminal summary.  Run directly with `python3 tests/test_acceptance.py`.
"""

import itertools
import json
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from zerocycles import decompose as dec
from zerocycles import monodromy as mono
from zerocycles.cli import analyze, load_problem, solve_report
from zerocycles.cycles import Chain, characteristic_poly, invariant_parts, is_balanced, module_structure
from zerocycles.decompose import decompose_chain
from zerocycles.errors import NoSolution, NonConstantBalanced
from zerocycles.monodromy import base_labeling, group_elements, monodromy_generators
from zerocycles.oracle import (
    SamplePlan,
    brute_force_balanced,
    integral_report,
    integral_values,
    ng_crosscheck,
    semidirect_check,
)
from zerocycles.polycore import Poly, chebyshev, cyclotomic, euler_phi
from zerocycles.solver import (
    TheoremCNode,
    digit_family,
    sample_solutions,
    solve,
    solve_inhomogeneous,
    solve_poly,
)

from conftest import CUBIC_INNER, CUBIC_OUTER, P, SEXTIC
from strategies import random_chain

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
RESULTS: dict[int, str] = {}


def _clear_caches():
    for fn in (mono.monodromy, mono.critical_data, mono._labeling_cached, dec.decompose_chain):
        fn.cache_clear()


def _problem(name):
    return load_problem(json.loads((PROBLEMS / name).read_text(encoding="utf-8")))


def _record(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    return ok


def criterion_1() -> bool:
    _clear_caches()
    start = time.perf_counter()
    prob = _problem("cubic_cubic.json")
    rep = analyze(prob)
    classes = [f["class"] for f in rep["decomposition"]["factors"]]
    proj = rep["projections"][0]
    pc = proj["projected_cycle"]
    proportional = pc[2] == 0 and pc[0] == -pc[1] != 0
    S = solve(prob.chain, prob.cycle)
    constraint_ok = S.constraint() == "3*g0(w) - 2*g1(w) + 4*g2(w) = gt(w)"
    particular, kernel = digit_family(S, P(1), 2)
    rng = random.Random(11)
    plan = SamplePlan(10, seed=1)
    worst = 0.0
    for _ in range(10):
        g = particular
        for k in kernel:
            g = g + k * rng.randint(-4, 4)
        worst = max(worst, integral_report(prob.f, prob.cycle, g, plan).max_residual)
    elapsed = time.perf_counter() - start
    ok = (classes == ["TwoTransitive", "TwoTransitive"] and rep["hypothesis_ok"] and rep["balanced"]
          and proportional and proj["projected_balanced"] is False and constraint_ok
          and particular is not None and len(kernel) == 6 and worst < 1e-8 and elapsed < 10)
    return _record(1, ok, f"two cubics: free params {len(kernel)}, max residual {worst:.1e}, {elapsed:.2f}s")


def criterion_2() -> bool:
    prob = _problem("cubic_sextic.json")
    rep = analyze(prob)
    proj = next(p for p in rep["projections"] if len(p["h"]) == 7)
    parts = [characteristic_poly(p) for p in invariant_parts(prob.cycle, 6)]
    sol = solve_report(prob)
    S = solve(prob.chain, prob.cycle)
    D = prob.degree_bound
    exps_ok = isinstance(S, TheoremCNode) and sol["u_exponents"] == [j for j in range(D + 1) if j % 3]
    plan = SamplePlan(10, seed=2)
    members = sample_solutions(S, D, 20, seed=9)
    worst = max(integral_report(prob.f, prob.cycle, g, plan).max_residual for g in members)
    cube = integral_report(prob.f, prob.cycle, Poly.monomial(3), plan)
    ok = (proj["projected_cycle"] == [3, -3, 0] and proj["projected_balanced"] is False
          and parts == [P(1, 0, 1, 0, 1), P(-1, 0, -1, 0, -1), Poly()]
          and exps_ok and len(members) == 20 and worst < 1e-8
          and cube.verdict == "NotMember" and cube.max_residual > 1e-4)
    return _record(2, ok, f"cubic over z^6: 20 members max residual {worst:.1e}, "
                          f"z^3 residual {cube.max_residual:.2e}")


def criterion_3() -> bool:
    want = {(1, -1, 1, -1, 1, -1): (0, 1, 2, 4, 5), (2, -1, -1, 2, -1, -1): (0, 1, 3, 5)}
    ok = True
    for cs, expected in want.items():
        C = Chain(cs)
        exact = solve_poly(SEXTIC, C).allowed
        plan = SamplePlan(10, seed=3, tolerance=1e-9)
        numeric = tuple(j for j in range(6)
                        if integral_report(SEXTIC, C, Poly.monomial(j), plan).verdict == "MemberNumeric")
        ok = ok and exact == expected == numeric
    return _record(3, ok, "z^6 exponent sets agree (cyclotomic vs numeric)")


def criterion_4() -> bool:
    rng = random.Random(4)
    checked = 0
    ok = True
    for m in (4, 6, 8, 9, 12):
        divs = [d for d in range(1, m + 1) if m % d == 0]
        for _ in range(25):
            C = Chain([rng.randint(-3, 3) for _ in range(m)])
            for s in module_structure(C, divs).summands:
                ok = ok and s.dimension == euler_phi(s.divisor) == len(s.indices)
                checked += 1
        # chains built from whole cyclotomic factors hit every divisor
        for d in divs:
            P_C = (Poly.monomial(m) - P(1)) // cyclotomic(d)
            C = Chain([int(c.re) for c in P_C.coeffs] + [0] * (m - len(P_C.coeffs)))
            for s in module_structure(C, divs).summands:
                ok = ok and s.dimension == euler_phi(s.divisor)
                checked += 1
    return _record(4, ok and checked > 0, f"{checked} summands with dimension phi(d)")


def criterion_5() -> bool:
    hs = [CUBIC_INNER] + [Poly.monomial(d) for d in range(1, 7)] + [chebyshev(3).monic(), chebyshev(4)]
    devs = [ng_crosscheck(h, SamplePlan(5, seed=5)) for h in hs]
    return _record(5, max(devs) < 1e-10, f"max power-sum deviation {max(devs):.1e}")


def criterion_6() -> bool:
    f = P(0, -1, 0, 1)
    G = monodromy_generators(f)
    elems = group_elements(G)
    ok = G.order() == 6
    balanced = 0
    for cs in itertools.product(range(-3, 4), repeat=3):
        C = Chain(cs)
        if brute_force_balanced(C, elems):
            balanced += 1
            ok = ok and C.is_constant()
        try:
            solve_poly(f, C)
        except NonConstantBalanced:
            ok = False
    return _record(6, ok, f"{balanced} balanced chains among 343, all constant")


def criterion_7() -> bool:
    ok = True
    orders = []
    for inner in (CUBIC_INNER, SEXTIC):
        rep = semidirect_check(CUBIC_OUTER, inner)
        ok = ok and rep.ok and rep.order_G == rep.order_N * rep.order_H and rep.intersection_trivial
        ok = ok and rep.alpha_permutes_blocks and rep.beta_in_one_block
        orders.append(f"{rep.order_G}={rep.order_N}*{rep.order_H}")
    return _record(7, ok, "semidirect splitting " + ", ".join(orders))


def criterion_8() -> bool:
    rng = random.Random(8)
    cases = [
        (P(0, -1, 0, 1), [Chain([1, 1, 1]), Chain([1, -1, 0]), Chain([2, 0, -1])]),
        (SEXTIC, [Chain([1, -1, 1, -1, 1, -1]), Chain([2, -1, -1, 2, -1, -1]), Chain([1, 0, 0, -1, 0, 0])]),
        (chebyshev(6), [Chain([1, -1, 1, -1, 1, -1]), Chain([1, 2, 3, -3, -2, -1])]),
        (P(0, 1, 1, 0, 1), [Chain([1, -1, 0, 0]), Chain([1, 1, 1, 1])]),
        (CUBIC_OUTER(CUBIC_INNER), [Chain([1, -1, 0] * 3), Chain([1, 0, 0, -1, 0, 0, 0, 0, 0])]),
        (CUBIC_OUTER(SEXTIC), [Chain([1, -1, 0, 0, 0, 0] * 3)]),
    ]
    ok = True
    n = 0
    for f, chains in cases:
        G = monodromy_generators(f)
        elems = group_elements(G)
        for C in chains:
            base = is_balanced(C, G)
            ok = ok and base == brute_force_balanced(C, G.elements())
            for g in rng.sample(elems, min(50, len(elems))) if len(elems) >= 50 else \
                    [rng.choice(elems) for _ in range(50)]:
                ok = ok and is_balanced(C.act(g.images), G) == base
            n += 1
    return _record(8, ok, f"{n} chains x 50 relabelings, brute force agrees")


def criterion_9() -> bool:
    rng = random.Random(9)
    ok = True
    errors = 0
    worst = 0.0
    for case in range(100):
        m = rng.randint(2, 5)
        f = Poly([rng.randint(-3, 3) for _ in range(m)] + [rng.choice([1, 2])])
        cs = [rng.randint(-3, 3) for _ in range(m)]
        if case % 2 == 0:
            cs[-1] -= sum(cs)
        C = Chain(cs)
        p = Poly([rng.randint(-3, 3) for _ in range(rng.randint(0, 3))])
        expect_error = C.total() == 0 and not p.is_zero()
        try:
            g = solve_inhomogeneous(C, f, p)
        except NoSolution:
            errors += 1
            ok = ok and expect_error
            continue
        ok = ok and not expect_error
        if C.total() != 0:
            ts = SamplePlan(5, seed=case).points(base_labeling(f).t0)
            vals = integral_values(f, C, g, ts)
            for t, v in zip(ts, vals):
                want = complex(p(t)) if p.coeffs else 0j
                r = abs(v - want) / (1 + abs(want))
                worst = max(worst, r)
    ok = ok and worst < 1e-8
    return _record(9, ok, f"100 cases, {errors} obstructions, max residual {worst:.1e}")


def criterion_10() -> bool:
    rng = random.Random(10)
    ok = True
    shapes = []
    for k in range(20):
        factors, built, f = random_chain(rng, count=2 + k % 2)
        ch = decompose_chain(f)
        ok = ok and ch.degrees == built.degrees and ch.tags == built.tags and f.degree <= 24
        shapes.append("x".join(map(str, built.degrees)))
    return _record(10, ok, f"20 compositions recovered ({', '.join(sorted(set(shapes)))})")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("n", range(1, 11))
def test_acceptance_criterion(n):
    assert CRITERIA[n - 1]()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
