"""Command line front end.

    zerocycles --input problem.json --command analyze|solve|verify|oracle

A problem file is UTF-8 JSON with either "poly" (coefficients, lowest degree
first) or "factors" (a list of such arrays, outermost first), plus "cycle"
(integers).  Optional keys: degree_bound, samples, tol, seed, element_cap, g.

Exit codes: 0 success, 1 bad input, 2 hypothesis violated or unsupported
factor, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import monodromy as mono
from .cycles import Chain, characteristic_poly, invariant_parts, is_balanced, module_structure, project
from .decompose import (
    CHEBYSHEV,
    MONOMIAL,
    DecompositionChain,
    decompose_chain,
    divisor_set,
    enumerate_right_factors,
)
from .errors import (
    CapExceeded,
    HypothesisViolated,
    InputError,
    NonConstantBalanced,
    NumericFailure,
    UnsupportedFactor,
    ZeroCycleError,
)
from .oracle import SamplePlan, brute_force_balanced, integral_report, ng_crosscheck, semidirect_check
from .polycore import Poly, compose_all, poly_str
from .solver import TheoremCNode, contains, sample_solutions, solve

LABELING = (
    "roots of f(z) = t are labeled at a real base point t0 = 2*max|critical value| + 2; "
    "root 1 lies on the principal branch (t/a)^(1/m) - a_(m-1)/(m*a), chosen at large real t "
    "and continued down the real axis; root k+1 is where root k goes on the counter-clockwise "
    "circle |t| = t0, so the loop at infinity is (1 2 ... m); loop generators are listed in "
    "angular order around t0, applied first to last, and multiply to (1 2 ... m)"
)

COMMANDS = ("analyze", "solve", "verify", "oracle")


@dataclass
class Problem:
    chain: DecompositionChain
    cycle: Chain
    degree_bound: int = 12
    samples: int = 10
    tol: float = 1e-8
    seed: int = 0
    element_cap: int = mono.DEFAULT_ELEMENT_CAP
    g: Poly | None = None

    @property
    def f(self) -> Poly:
        return self.chain.composed


def _parse_poly(obj, what: str) -> Poly:
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{what} must be a non-empty list of coefficients")
    return Poly.parse(obj)


def load_problem(data: dict) -> Problem:
    if not isinstance(data, dict):
        raise InputError("problem file must hold a JSON object")
    if ("poly" in data) == ("factors" in data):
        raise InputError('give exactly one of "poly" or "factors"')
    if "poly" in data:
        f = _parse_poly(data["poly"], "poly")
        if f.degree < 2:
            raise InputError("poly must have degree >= 2")
        chain = decompose_chain(f)
    else:
        facs = data["factors"]
        if not isinstance(facs, list) or not facs:
            raise InputError('"factors" must be a non-empty list')
        polys = [_parse_poly(p, "factor") for p in facs]
        if any(p.degree < 1 for p in polys):
            raise InputError("factors must be nonconstant")
        if compose_all(polys).degree < 2:
            raise InputError("composed polynomial must have degree >= 2")
        chain = DecompositionChain.from_factors(polys, normalize=False)
    cyc = data.get("cycle")
    if not isinstance(cyc, list):
        raise InputError('"cycle" must be a list of integers')
    cycle = Chain(cyc)
    if cycle.m != chain.composed.degree:
        raise InputError(f"cycle has {cycle.m} entries but deg f = {chain.composed.degree}")
    prob = Problem(chain, cycle)
    for key, typ in (("degree_bound", int), ("samples", int), ("seed", int), ("element_cap", int)):
        if key in data:
            if not isinstance(data[key], int) or isinstance(data[key], bool):
                raise InputError(f'"{key}" must be an integer')
            setattr(prob, key, data[key])
    if "tol" in data:
        if not isinstance(data["tol"], (int, float)) or isinstance(data["tol"], bool):
            raise InputError('"tol" must be a number')
        prob.tol = float(data["tol"])
    if "g" in data:
        prob.g = _parse_poly(data["g"], "g")
    return prob


# ---------------------------------------------------------------------------

def analyze(prob: Problem) -> dict:
    f, C, chain = prob.f, prob.cycle, prob.chain
    md = mono.monodromy(f)
    G = md.group(prob.element_cap)
    rep = {
        "labeling": LABELING,
        "f": f.to_json(),
        "cycle": C.to_json(),
        "decomposition": chain.to_json(),
        "hypothesis_ok": chain.hypothesis_ok,
        "monodromy": {**md.to_json(),
                      "two_transitive": mono.is_two_transitive(G),
                      "block_systems": [s.to_json() for s in mono.imprimitivity_blocks(G)]},
        "is_cycle": C.total() == 0,
        "characteristic_poly": characteristic_poly(C).to_json(),
        "balanced": is_balanced(C, G),
    }
    projections = []
    for rf in enumerate_right_factors(chain):
        hC = project(C, rf.degree)
        entry = {"h": rf.inner.to_json(), "outer": rf.outer.to_json(), "projected_cycle": hC.to_json()}
        if rf.outer.degree >= 2:
            entry["projected_balanced"] = is_balanced(hC, mono.monodromy(rf.outer).group(prob.element_cap))
        projections.append(entry)
    rep["projections"] = projections
    if len(chain.factors) >= 2:
        d = chain.factors[-1].degree
        parts = invariant_parts(C, d)
        rep["invariant_parts"] = {
            "h": chain.factors[-1].to_json(),
            "parts": [p.to_json() for p in parts],
            "characteristic_polys": [characteristic_poly(p).to_json() for p in parts],
        }
    if len(chain.factors) == 1 and chain.classes[0].tag in (MONOMIAL, CHEBYSHEV):
        rep["module_structure"] = module_structure(C, divisor_set(chain)).to_json()
    return rep


def solve_report(prob: Problem) -> dict:
    S = solve(prob.chain, prob.cycle)
    members = sample_solutions(S, prob.degree_bound, prob.samples, prob.seed)
    rep = {
        "labeling": LABELING,
        "space": S.to_json(),
        "degree_bound": prob.degree_bound,
        "samples": [g.to_json() for g in members],
    }
    if isinstance(S, TheoremCNode):
        rep["u_exponents"] = [j for j in range(prob.degree_bound + 1) if j % S.d in S.allowed]
    return rep


def verify_report(prob: Problem) -> dict:
    if prob.g is None:
        raise InputError("verify needs g (--g or a \"g\" key in the problem file)")
    plan = SamplePlan(prob.samples, prob.seed, prob.tol)
    S = solve(prob.chain, prob.cycle)
    v = contains(S, prob.g, plan)
    numeric = integral_report(prob.f, prob.cycle, prob.g, plan)
    return {
        "labeling": LABELING,
        "g": prob.g.to_json(),
        "structural": v.to_json(),
        "oracle": numeric.to_json(),
        "verdict": v.kind,
    }


def oracle_report(prob: Problem) -> dict:
    chain, C = prob.chain, prob.cycle
    plan = SamplePlan(5, prob.seed, prob.tol)
    rep: dict = {"labeling": LABELING}
    rep["newton_girard"] = [
        {"h": p.to_json(), "max_deviation": f"{ng_crosscheck(p, plan):.3e}"} for p in chain.factors
    ]
    splits = []
    for k in range(1, len(chain.factors)):
        outer = compose_all(chain.factors[:k])
        inner = compose_all(chain.factors[k:])
        try:
            splits.append(semidirect_check(outer, inner, prob.element_cap).to_json())
        except CapExceeded as exc:
            splits.append({"status": "CapExceeded", "message": str(exc)})
    rep["semidirect"] = splits
    G = mono.monodromy(prob.f).group(prob.element_cap)
    try:
        rep["brute_force_balanced"] = brute_force_balanced(C, G.elements())
        rep["group_order"] = G.order()
    except CapExceeded as exc:
        rep["brute_force_balanced"] = None
        rep["cap_exceeded"] = str(exc)
    rep["balanced"] = is_balanced(C, G)
    return rep


def render_text(command: str, rep: dict) -> str:
    lines = [f"command: {command}"]
    if command == "analyze":
        dec = rep["decomposition"]
        for fct in dec["factors"]:
            lines.append(f"factor {poly_str(Poly.parse(fct['coeffs']))}: {fct['class']}")
        lines.append(f"hypothesis_ok: {rep['hypothesis_ok']}")
        lines.append(f"generators: {rep['monodromy']['generators']}")
        lines.append(f"balanced: {rep['balanced']}")
        for p in rep["projections"]:
            lines.append(f"h = {poly_str(Poly.parse(p['h']))}: projected cycle {p['projected_cycle']}"
                         + (f", balanced {p['projected_balanced']}" if "projected_balanced" in p else ""))
        if "invariant_parts" in rep:
            for cp in rep["invariant_parts"]["characteristic_polys"]:
                lines.append(f"invariant part: P = {poly_str(Poly.parse(cp), 'w') if cp else '0'}")
    elif command == "solve":
        lines.append(rep["space"]["meaning"])
        if "u_exponents" in rep:
            lines.append(f"u exponents up to {rep['degree_bound']}: {rep['u_exponents']}")
        for g in rep["samples"]:
            lines.append(f"member: {poly_str(Poly.parse(g)) if g else '0'}")
    elif command == "verify":
        lines.append(f"verdict: {rep['verdict']} ({rep['structural']['detail']})")
        lines.append(f"oracle: {rep['oracle']['verdict']}, max residual {rep['oracle']['max_residual']}")
    else:
        for ng in rep["newton_girard"]:
            lines.append(f"power sums of {poly_str(Poly.parse(ng['h']))}: deviation {ng['max_deviation']}")
        for s in rep["semidirect"]:
            lines.append(f"semidirect: {s}")
        lines.append(f"brute-force balanced: {rep['brute_force_balanced']}, span test: {rep['balanced']}")
    lines.append(f"labeling: {rep['labeling']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zerocycles", description=__doc__.split("\n\n")[0])
    ap.add_argument("--input", required=True, help="problem file (JSON)")
    ap.add_argument("--command", required=True, choices=COMMANDS)
    ap.add_argument("--g", help="polynomial to verify, as a JSON coefficient array")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--samples", type=int)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--degree-bound", type=int, dest="degree_bound")
    ap.add_argument("--element-cap", type=int, dest="element_cap")
    return ap


def run(command: str, prob: Problem) -> dict:
    if command == "analyze":
        return analyze(prob)
    if command == "solve":
        return solve_report(prob)
    if command == "verify":
        return verify_report(prob)
    return oracle_report(prob)


def _emit(obj: dict, fmt: str, command: str, out) -> None:
    if fmt == "json" or "error" in obj:
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        out.write(render_text(command, obj))


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        try:
            with open(args.input, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read problem file: {exc}") from exc
        prob = load_problem(data)
        for key in ("samples", "tol", "seed", "degree_bound", "element_cap"):
            val = getattr(args, key)
            if val is not None:
                setattr(prob, key, val)
        if args.g is not None:
            try:
                prob.g = _parse_poly(json.loads(args.g), "g")
            except json.JSONDecodeError as exc:
                raise InputError(f"--g is not a JSON array: {exc}") from exc
        rep = run(args.command, prob)
    except (HypothesisViolated, UnsupportedFactor) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.format, args.command, out)
        return 2
    except (NumericFailure, NonConstantBalanced) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.format, args.command, out)
        return 3
    except (InputError, ZeroCycleError, ValueError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.format, args.command, out)
        return 1
    _emit(rep, args.format, args.command, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
