"""Solution spaces of  sum_i n_i g(z_i(t)) == 0  for a cycle C of f.

The space is returned as a tree:

* MonomialNode: f is z^m or T_m up to linear maps; a cyclotomic test picks the
  allowed basis functions.
* NGOrthogonalNode: f is 2-transitive and C is constant; the f-adic digits of
  g must be orthogonal to the power sums of the roots.
* TheoremBNode / TheoremCNode: C is balanced and the innermost factor h is
  2-transitive, resp. monomial or Chebyshev-like; the problem moves to the
  projected cycle h(C) of the outer factor.
* SumNode: C is unbalanced; g is a sum of compositions g_i o h_i over the
  right factors h_i of f.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .cycles import Chain, characteristic_poly, invariant_parts, is_balanced, is_cycle, project
from .decompose import (
    CHEBYSHEV,
    MONOMIAL,
    TWO_TRANSITIVE,
    DecompositionChain,
    decompose_chain,
    enumerate_right_factors,
)
from .errors import (
    HypothesisViolated,
    InputError,
    NoSolution,
    NonConstantBalanced,
    ShapeError,
    ZeroCycleError,
)
from .linalg import IncrementalSpan, nullspace, solve as linsolve
from .monodromy import monodromy_generators
from .oracle import SamplePlan, integral_report
from .polycore import (
    ONE,
    ZERO,
    GRat,
    Poly,
    Z,
    chebyshev,
    chebyshev_basis_change,
    cyclotomic,
    divides,
    f_adic_expand,
    format_coefficient,
    poly_compose,
    poly_str,
    power_sums,
)

DEFAULT_DEPTH = 8


class DepthExceeded(ZeroCycleError):
    """The recursion ran past its depth budget."""


# ---------------------------------------------------------------------------
# nodes

@dataclass
class SolutionNode:
    f: Poly
    chain: Chain

    kind = "node"

    def describe(self) -> str:
        raise NotImplementedError

    def _json(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {"node": self.kind, "f": self.f.to_json(), "cycle": self.chain.to_json(),
                "meaning": self.describe(), **self._json()}


@dataclass
class FullSpace(SolutionNode):
    kind = "FullSpace"

    def describe(self) -> str:
        return "every polynomial g"


@dataclass
class ZeroOnly(SolutionNode):
    kind = "ZeroOnly"

    def describe(self) -> str:
        return "only g = 0"


def _linear_str(p: Poly) -> str:
    return "z" if p == Z else f"({poly_str(p)})"


@dataclass
class MonomialNode(SolutionNode):
    m: int = 0
    core_kind: str = "power"     # power | chebyshev
    allowed: tuple = ()
    nu: Poly = Z

    kind = "MonomialNode"

    def basis_function(self, j: int) -> Poly:
        if self.core_kind == "power":
            return self.nu ** j
        return poly_compose(chebyshev(j), self.nu)

    def describe(self) -> str:
        b = f"{_linear_str(self.nu)}^j" if self.core_kind == "power" else f"T_j{_linear_str(self.nu)}"
        return f"g = sum over j in {{{', '.join(map(str, self.allowed))}}} of c_j(f(z))*{b}, c_j free"

    def _json(self) -> dict:
        return {"m": self.m, "core": self.core_kind, "allowed_exponents": list(self.allowed),
                "nu": self.nu.to_json()}


def _constraint_str(s: Sequence[GRat], rhs: str) -> str:
    terms = []
    for i, c in enumerate(s):
        if not c:
            continue
        cs = format_coefficient(c)
        if c.im:
            cs = f"({cs})"
        terms.append(f"{cs}*g{i}(w)")
    lhs = " + ".join(terms).replace("+ -", "- ") if terms else "0"
    return f"{lhs} = {rhs}"


@dataclass
class NGOrthogonalNode(SolutionNode):
    s: tuple = ()
    n: int = 0

    kind = "NGOrthogonalNode"

    def describe(self) -> str:
        return ("g = sum_i z^i g_i(f(z)) with " + _constraint_str(self.s, "0"))

    def _json(self) -> dict:
        return {"newton_girard": [format_coefficient(x) for x in self.s], "constant": self.n}


@dataclass
class TheoremBNode(SolutionNode):
    h: Poly = Z
    s: tuple = ()
    outer: Poly = Z
    projected_chain: Chain | None = None
    projected: SolutionNode | None = None

    kind = "TheoremBNode"

    @property
    def d(self) -> int:
        return self.h.degree

    def constraint(self) -> str:
        return _constraint_str(self.s, "gt(w)")

    def describe(self) -> str:
        return (f"g = sum_(i<{self.d}) z^i g_i(h(z)), h = {poly_str(self.h)}, with "
                f"{self.constraint()} and gt in [{self.projected.describe()}]")

    def _json(self) -> dict:
        return {"h": self.h.to_json(), "newton_girard": [format_coefficient(x) for x in self.s],
                "constraint": self.constraint(), "outer": self.outer.to_json(),
                "projected_cycle": self.projected_chain.to_json(),
                "projected": self.projected.to_json()}


@dataclass
class TheoremCNode(SolutionNode):
    h: Poly = Z
    d: int = 0
    core_kind: str = "power"
    nu: Poly = Z
    mu: Poly = Z
    outer: Poly = Z
    projected_chain: Chain | None = None
    projected: SolutionNode | None = None
    parts: list = field(default_factory=list)

    kind = "TheoremCNode"

    @property
    def allowed(self) -> tuple:
        sets = [set(p.allowed) for p in self.parts]
        return tuple(sorted(set.intersection(*sets))) if sets else ()

    def basis_function(self, j: int) -> Poly:
        if self.core_kind == "power":
            return self.nu ** j
        return poly_compose(chebyshev(j), self.nu)

    def describe(self) -> str:
        b = f"{_linear_str(self.nu)}^j" if self.core_kind == "power" else f"T_j{_linear_str(self.nu)}"
        return (f"g = gt(h(z))/({self.d}-1) + u, h = {poly_str(self.h)}, gt in [{self.projected.describe()}], "
                f"u = sum over j in {{{', '.join(map(str, self.allowed))}}} of c_j(h(z))*{b}")

    def _json(self) -> dict:
        return {"h": self.h.to_json(), "d": self.d, "core": self.core_kind, "nu": self.nu.to_json(),
                "outer": self.outer.to_json(), "projected_cycle": self.projected_chain.to_json(),
                "projected": self.projected.to_json(),
                "part_cycles": [p.chain.to_json() for p in self.parts],
                "part_allowed": [list(p.allowed) for p in self.parts],
                "allowed_exponents": list(self.allowed)}


@dataclass
class SumChild:
    h: Poly
    outer: Poly
    projected_chain: Chain
    space: SolutionNode

    def to_json(self) -> dict:
        return {"h": self.h.to_json(), "outer": self.outer.to_json(),
                "projected_cycle": self.projected_chain.to_json(), "space": self.space.to_json()}


@dataclass
class SumNode(SolutionNode):
    children: list = field(default_factory=list)

    kind = "SumNode"

    def describe(self) -> str:
        parts = [f"g{i}(h{i}), h{i} = {poly_str(c.h)}, g{i} in [{c.space.describe()}]"
                 for i, c in enumerate(self.children)]
        return "g = sum of " + "; ".join(parts)

    def _json(self) -> dict:
        return {"children": [c.to_json() for c in self.children]}


# ---------------------------------------------------------------------------
# base cases

def allowed_exponents(C: Chain, m: int) -> tuple:
    """j < m with Phi_(m/gcd(m,j)) dividing P_C."""
    P = characteristic_poly(C)
    return tuple(j for j in range(m) if divides(cyclotomic(m // math.gcd(m, j)), P))


def solve_base_monomial_chebyshev(C: Chain, kind: str, m: int, f: Poly | None = None,
                                  nu: Poly | None = None) -> MonomialNode:
    if kind not in ("power", "chebyshev"):
        raise InputError(f"unknown core kind {kind!r}")
    if C.m != m:
        raise ShapeError("chain length must equal m")
    if f is None:
        f = Poly.monomial(m) if kind == "power" else chebyshev(m)
    return MonomialNode(f, C, m, kind, allowed_exponents(C, m), nu if nu is not None else Z)


def solve_base_two_transitive(C: Chain, f: Poly, G=None) -> SolutionNode:
    if C.m != f.degree:
        raise ShapeError("chain length must equal deg f")
    if C.is_zero():
        return FullSpace(f, C)
    G = G or monodromy_generators(f)
    if not is_balanced(C, G):
        raise InputError("chain is not balanced")
    if not C.is_constant():
        raise NonConstantBalanced(f"balanced chain {C.to_json()} is not constant")
    return NGOrthogonalNode(f, C, power_sums(f, f.degree), C.coeffs[0])


def solve_inhomogeneous(C: Chain, f: Poly, p: Poly) -> Poly:
    """A particular g with sum_i n_i g(z_i(t)) = p(t)."""
    if p.is_zero():
        return Poly()
    total = C.total()
    if total == 0:
        raise NoSolution("the integral over a cycle cannot equal a nonzero polynomial")
    return poly_compose(p, f) / total


# ---------------------------------------------------------------------------
# recursion

def _trivial(f: Poly, C: Chain) -> SolutionNode:
    if f.degree == 1:
        return FullSpace(f, C) if C.coeffs[0] == 0 else ZeroOnly(f, C)
    return FullSpace(f, C)


def solve_poly(f: Poly, C: Chain, depth: int = DEFAULT_DEPTH) -> SolutionNode:
    if C.m != f.degree:
        raise ShapeError(f"chain has {C.m} entries but deg f = {f.degree}")
    if f.degree <= 1 or C.is_zero():
        return _trivial(f, C)
    return solve(decompose_chain(f), C, depth)


def solve(chain: DecompositionChain, C: Chain, depth: int = DEFAULT_DEPTH) -> SolutionNode:
    if depth < 0:
        raise DepthExceeded("recursion depth budget exhausted")
    f = chain.composed
    if C.m != f.degree:
        raise ShapeError(f"chain has {C.m} entries but deg f = {f.degree}")
    if f.degree <= 1 or C.is_zero():
        return _trivial(f, C)
    if not chain.hypothesis_ok:
        bad = [w for w in chain.witnesses if not w.ok]
        raise HypothesisViolated(f"adjacent factors merge: {bad[0].to_json() if bad else ''}")

    if len(chain.factors) == 1:
        cls = chain.classes[0]
        if cls.tag in (MONOMIAL, CHEBYSHEV):
            return solve_base_monomial_chebyshev(C, cls.kind, f.degree, f, cls.nu)
        G = monodromy_generators(f)
        if is_balanced(C, G):
            return solve_base_two_transitive(C, f, G)
        if not is_cycle(C):
            # a non-constant chain of a 2-transitive f spans every chain
            return ZeroOnly(f, C)
        return _sum_node(chain, C, depth)

    if not is_cycle(C):
        raise InputError("composite f needs a cycle (coefficients summing to zero)")
    G = monodromy_generators(f)
    if not is_balanced(C, G):
        return _sum_node(chain, C, depth)

    h = chain.factors[-1]
    cls = chain.classes[-1]
    d = h.degree
    outer_chain = DecompositionChain.from_factors(chain.factors[:-1], normalize=False)
    hC = project(C, d)
    projected = solve(outer_chain, hC, depth - 1) if outer_chain.factors else _trivial(outer_chain.composed, hC)
    parts = invariant_parts(C, d)
    if cls.tag == TWO_TRANSITIVE:
        for p in parts:
            if not p.is_constant():
                raise NonConstantBalanced(f"invariant part {p.to_json()} of a balanced cycle is not constant")
        return TheoremBNode(f, C, h, power_sums(h, d), outer_chain.composed, hC, projected)
    part_nodes = [solve_base_monomial_chebyshev(p, cls.kind, d, h, cls.nu) for p in parts]
    return TheoremCNode(f, C, h, d, cls.kind, cls.nu, cls.mu, outer_chain.composed, hC, projected, part_nodes)


def _sum_node(chain: DecompositionChain, C: Chain, depth: int) -> SumNode:
    children = []
    for rf in enumerate_right_factors(chain, include_whole=True):
        hC = project(C, rf.degree)
        space = solve_poly(rf.outer, hC, depth - 1)
        children.append(SumChild(rf.inner, rf.outer, hC, space))
    return SumNode(chain.composed, C, children)


# ---------------------------------------------------------------------------
# bounded-degree bases

def _independent(polys: Sequence[Poly], D: int) -> list[Poly]:
    span = IncrementalSpan(D + 1)
    out = []
    for p in polys:
        if p.degree > D or p.is_zero():
            continue
        if span.add([p[k] for k in range(D + 1)]):
            out.append(p)
    return out


def _digit_layout(D: int, base_degree: int, count: int) -> list[tuple[int, int]]:
    """(digit i, power k) slots with k*base_degree + i <= D."""
    return [(i, k) for i in range(count) for k in range(0, (D - i) // base_degree + 1) if i <= D]


def _digits_to_poly(vec, layout, base: Poly) -> Poly:
    digits: dict[int, list] = {}
    for (i, k), c in zip(layout, vec):
        digits.setdefault(i, {})[k] = c
    out = Poly()
    for i, coeffs in digits.items():
        gi = Poly([coeffs.get(k, ZERO) for k in range(max(coeffs) + 1)])
        out = out + poly_compose(gi, base) * Z ** i
    return out


def _orthogonality_basis(s: Sequence[GRat], base: Poly, D: int, extra: Sequence[Poly] = ()) -> list[Poly]:
    """Polynomials sum_i z^i g_i(base) of degree <= D with sum_i s_i g_i in span(extra)."""
    d = base.degree
    layout = _digit_layout(D, d, d)
    E = D // d
    ncols = len(layout) + len(extra)
    rows = []
    for k in range(E + max([p.degree for p in extra], default=0) + 1):
        row = [s[i] if kk == k else ZERO for (i, kk) in layout]
        row += [-p[k] for p in extra]
        rows.append(row)
    kern = nullspace(rows, ncols, ONE, ZERO)
    polys = [_digits_to_poly(v[:len(layout)], layout, base) for v in kern]
    return _independent(polys, D)


def basis_upto(node: SolutionNode, D: int) -> list[Poly]:
    """A basis of the members of degree <= D (for SumNode: of the spanned part)."""
    if D < 0:
        return []
    if isinstance(node, FullSpace):
        return [Z ** k for k in range(D + 1)]
    if isinstance(node, ZeroOnly):
        return []
    if isinstance(node, MonomialNode):
        out = []
        for j in node.allowed:
            b = node.basis_function(j)
            k = 0
            while k * node.m + j <= D:
                out.append(node.f ** k * b)
                k += 1
        return _independent(out, D)
    if isinstance(node, NGOrthogonalNode):
        return _orthogonality_basis(node.s, node.f, D)
    if isinstance(node, TheoremBNode):
        extra = basis_upto(node.projected, D // node.d)
        return _orthogonality_basis(node.s, node.h, D, extra)
    if isinstance(node, TheoremCNode):
        out = []
        A = node.allowed
        for j in A:
            if j == 0:
                continue
            b = node.basis_function(j)
            k = 0
            while k * node.d + j <= D:
                out.append(node.h ** k * b)
                k += 1
        if 0 in A:
            out += [node.h ** k for k in range(D // node.d + 1)]
        else:
            out += [poly_compose(p, node.h) for p in basis_upto(node.projected, D // node.d)]
        return _independent(out, D)
    if isinstance(node, SumNode):
        out = []
        for c in node.children:
            out += [poly_compose(p, c.h) for p in basis_upto(c.space, D // c.h.degree)]
        return _independent(out, D)
    raise TypeError(f"unknown node {node!r}")


def sample_solutions(S: SolutionNode, degree_bound: int, count: int, seed: int = 0) -> list[Poly]:
    basis = basis_upto(S, degree_bound)
    if not basis:
        return []
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        coeffs = [rng.randint(-3, 3) for _ in basis]
        if not any(coeffs):
            continue
        g = Poly()
        for c, b in zip(coeffs, basis):
            if c:
                g = g + b * c
        out.append(g)
    return out


def digit_family(node: TheoremBNode, k0: Poly, digit_degree: int) -> tuple[Poly | None, list[Poly]]:
    """Particular solution with sum_i s_i g_i = k0(outer) and the homogeneous digit kernel.

    Digits g_i range over polynomials of degree <= digit_degree.
    """
    d = node.d
    layout = [(i, k) for i in range(d) for k in range(digit_degree + 1)]
    rhs_poly = poly_compose(k0, node.outer)
    top = max(digit_degree, rhs_poly.degree)
    rows = []
    rhs = []
    for k in range(top + 1):
        rows.append([node.s[i] if kk == k else ZERO for (i, kk) in layout])
        rhs.append(rhs_poly[k])
    part = linsolve(rows, rhs, len(layout), ZERO)
    kern = nullspace(rows, len(layout), ONE, ZERO)
    particular = _digits_to_poly(part, layout, node.h) if part is not None else None
    return particular, [_digits_to_poly(v, layout, node.h) for v in kern]


# ---------------------------------------------------------------------------
# membership

@dataclass
class Verdict:
    kind: str                    # MemberExact | MemberNumeric | NotMember | Inconclusive
    residual: float | None = None
    detail: str = ""

    @property
    def member(self) -> bool:
        return self.kind in ("MemberExact", "MemberNumeric")

    def to_json(self) -> dict:
        d = {"verdict": self.kind, "detail": self.detail}
        if self.residual is not None:
            d["residual"] = f"{self.residual:.3e}"
        return d


def core_digits(g: Poly, nu: Poly, core_kind: str, n: int) -> list[Poly]:
    """Digits e_j with g = sum_j e_j(core(nu(z))) * b_j(nu(z)), b_j = y^j or T_j(y).

    The digits are polynomials in the core value s = core(nu(z)).
    """
    a, b = nu[1], nu[0]
    ginv = poly_compose(g, Poly([-b / a, ONE / a]))
    core = Poly.monomial(n) if core_kind == "power" else chebyshev(n)
    exp = f_adic_expand(ginv, core)
    if core_kind == "power":
        return list(exp.digits)
    rows = chebyshev_basis_change(n)
    out = [Poly() for _ in range(n)]
    for j, e in enumerate(exp.digits):
        for i in range(n):
            if rows[j][i]:
                out[i] = out[i] + e * rows[j][i]
    return out


def contains(S: SolutionNode, g: Poly, plan: SamplePlan | None = None) -> Verdict:
    if isinstance(S, FullSpace):
        return Verdict("MemberExact", detail="every g solves")
    if isinstance(S, ZeroOnly):
        return Verdict("MemberExact" if g.is_zero() else "NotMember", detail="only g = 0 solves")
    if isinstance(S, MonomialNode):
        digits = core_digits(g, S.nu, S.core_kind, S.m)
        bad = [j for j, e in enumerate(digits) if not e.is_zero() and j not in S.allowed]
        if bad:
            return Verdict("NotMember", detail=f"uses excluded exponents {bad}")
        return Verdict("MemberExact", detail="only allowed exponents appear")
    if isinstance(S, NGOrthogonalNode):
        exp = f_adic_expand(g, S.f)
        comb = Poly()
        for s, gi in zip(S.s, exp.digits):
            comb = comb + gi * s
        if comb.is_zero():
            return Verdict("MemberExact", detail="digits orthogonal to the power sums")
        return Verdict("NotMember", detail=f"sum_i s_i g_i = {poly_str(comb, 'w')}")
    if isinstance(S, TheoremBNode):
        exp = f_adic_expand(g, S.h)
        gt = Poly()
        for s, gi in zip(S.s, exp.digits):
            gt = gt + gi * s
        v = contains(S.projected, gt, plan)
        v.detail = f"gt(w) = {poly_str(gt, 'w')}; " + v.detail
        return v
    if isinstance(S, TheoremCNode):
        digits = core_digits(g, S.nu, S.core_kind, S.d)
        A = set(S.allowed)
        bad = [j for j, e in enumerate(digits) if j and not e.is_zero() and j not in A]
        if bad:
            return Verdict("NotMember", detail=f"u uses excluded exponents {bad}")
        if 0 in A:
            return Verdict("MemberExact", detail="all exponents allowed")
        # digit 0 is a polynomial in s = core(nu(z)); h = mu(s)
        c, e = S.mu[1], S.mu[0]
        gt = poly_compose(digits[0], Poly([-e / c, ONE / c]))
        v = contains(S.projected, gt, plan)
        v.detail = f"gt(w) = {poly_str(gt, 'w')}; " + v.detail
        return v
    if isinstance(S, SumNode):
        rep = integral_report(S.f, S.chain, g, plan)
        return Verdict(rep.verdict, rep.max_residual, "numeric integral over the unbalanced cycle")
    raise TypeError(f"unknown node {S!r}")
