"""Functional decomposition into 2-transitive, monomial-like and Chebyshev-like factors.

Factors are listed outermost first: f = f_0 o f_1 o ... o f_d.  Every factor
except the outermost is normalized to be monic with zero constant term, so
the linear ambiguity of a decomposition is pushed into f_0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InputError, UnsupportedFactor
from .monodromy import is_two_transitive, monodromy_generators
from .polycore import (
    ONE,
    ZERO,
    Poly,
    Z,
    chebyshev,
    compose_all,
    divisors,
    f_adic_expand,
    format_coefficient,
    grat_sqrt,
    poly_compose,
    poly_gcd,
    squarefree_part,
    value_polynomial,
)

TWO_TRANSITIVE = "TwoTransitive"
MONOMIAL = "MonomialEquiv"
CHEBYSHEV = "ChebyshevEquiv"

NUMERIC_TOL = 1e-8


@dataclass(frozen=True)
class FactorClass:
    """p = mu o core o nu with nu(z) = a z + b and mu(w) = c w + e."""

    tag: str
    pre_linear: tuple
    post_linear: tuple
    core_degree: int

    @property
    def nu(self) -> Poly:
        a, b = self.pre_linear
        return Poly([b, a])

    @property
    def mu(self) -> Poly:
        c, e = self.post_linear
        return Poly([e, c])

    def core(self) -> Poly:
        if self.tag == MONOMIAL:
            return Poly.monomial(self.core_degree)
        if self.tag == CHEBYSHEV:
            return chebyshev(self.core_degree)
        raise ValueError("two-transitive factors have no core")

    @property
    def kind(self) -> str | None:
        return {MONOMIAL: "power", CHEBYSHEV: "chebyshev"}.get(self.tag)

    def to_json(self) -> dict:
        return {
            "class": self.tag,
            "core_degree": self.core_degree,
            "pre_linear": [format_coefficient(x) for x in self.pre_linear],
            "post_linear": [format_coefficient(x) for x in self.post_linear],
        }


def _identity_class(tag: str, n: int) -> FactorClass:
    return FactorClass(tag, (ONE, ZERO), (ONE, ZERO), n)


def monomial_fit(p: Poly) -> FactorClass | None:
    n = p.degree
    if n < 1:
        return None
    c = -p[n - 1] / (p.lc * n)
    q = poly_compose(p, Poly([c, 1]))
    if any(q[k] for k in range(1, n)):
        return None
    return FactorClass(MONOMIAL, (ONE, -c), (q.lc, q[0]), n)


def chebyshev_fit(p: Poly) -> FactorClass | None:
    """Exact fit p = C*T_n(a(z - c)) + E over Q(i); None if there is none."""
    n = p.degree
    if n < 3:
        return None
    c = -p[n - 1] / (p.lc * n)
    q = poly_compose(p, Poly([c, 1]))
    if not q[n - 2]:
        return None
    a2 = -q.lc * n / (q[n - 2] * 4)
    a = grat_sqrt(a2)
    if a is None or not a:
        return None
    tn = chebyshev(n)
    scaled = poly_compose(tn, Poly([0, a]))
    C = q.lc / scaled.lc
    E = q[0] - C * scaled[0]
    if scaled * C + Poly([E]) != q:
        return None
    return FactorClass(CHEBYSHEV, (a, -a * c), (C, E), n)


def classify_factor(p: Poly) -> FactorClass:
    n = p.degree
    if n < 2:
        raise InputError("factors must have degree >= 2")
    mono = monomial_fit(p)
    if mono is not None:
        return mono
    if n == 3:
        # every cubic with two critical values has the full symmetric action
        return _identity_class(TWO_TRANSITIVE, 3)
    cheb = chebyshev_fit(p)
    if cheb is not None:
        return cheb
    if is_two_transitive(monodromy_generators(p)):
        return _identity_class(TWO_TRANSITIVE, n)
    raise UnsupportedFactor(f"factor of degree {n} is neither 2-transitive nor monomial/Chebyshev-like")


def is_special(p: Poly) -> bool:
    """Monomial or Chebyshev equivalent, by exact fit only."""
    return monomial_fit(p) is not None or chebyshev_fit(p) is not None


# ---------------------------------------------------------------------------
# right factors by the power series method

def _root_series(a: list, alpha: Fraction, count: int) -> list:
    """First count coefficients of (1 + a_1 x + a_2 x^2 + ...)^alpha."""
    b = [ONE]
    for n in range(1, count):
        acc = ZERO
        for k in range(1, n + 1):
            if k < len(a) and a[k]:
                acc = acc + a[k] * b[n - k] * (alpha * k - (n - k))
        b.append(acc / n)
    return b


def right_factor(f: Poly, s: int) -> tuple[Poly, Poly] | None:
    """(outer, inner) with f = outer o inner, inner monic of degree s with inner(0) = 0."""
    n = f.degree
    if s < 1 or n % s:
        return None
    r = n // s
    F = (f - Poly([f[0]])) / f.lc
    # F = z^n (1 + a_1/z + ...): a_k is the coefficient of z^(n-k)
    a = [F[n - k] for k in range(n + 1)]
    b = _root_series(a, Fraction(1, r), s)
    inner = Poly([ZERO] + [b[s - j] for j in range(1, s + 1)])
    exp = f_adic_expand(F, inner)
    if any(not d.is_zero() for d in exp.digits[1:]):
        return None
    g = exp.digits[0]
    outer = g * f.lc + Poly([f[0]])
    if poly_compose(outer, inner) != f:
        return None
    return outer, inner


def _full_decomposition(f: Poly) -> list[Poly]:
    """Complete decomposition into indecomposables, smallest inner factor peeled first."""
    n = f.degree
    for s in divisors(n)[1:-1]:
        split = right_factor(f, s)
        if split is not None:
            outer, inner = split
            return _full_decomposition(outer) + [inner]
    return [f]


def _normalize(factors: list[Poly]) -> list[Poly]:
    """Make every factor but the outermost monic with zero constant term."""
    out = list(factors)
    for k in range(len(out) - 1, 0, -1):
        p = out[k]
        c, e = p.lc, p[0]
        out[k] = (p - Poly([e])) / c
        # p = c*q + e, so outer o p = (outer o (c w + e)) o q
        out[k - 1] = poly_compose(out[k - 1], Poly([e, c]))
    return out


def _fuse(factors: list[Poly]) -> list[Poly]:
    """Merge maximal adjacent windows whose composite is monomial or Chebyshev-like."""
    out = list(factors)
    changed = True
    while changed:
        changed = False
        for length in range(len(out), 1, -1):
            for i in range(len(out) - length + 1):
                window = out[i:i + length]
                comp = compose_all(window)
                if is_special(comp):
                    out = out[:i] + [comp] + out[i + length:]
                    changed = True
                    break
            if changed:
                break
    return out


@dataclass(frozen=True)
class MergeWitness:
    ok: bool
    condition: int | None = None
    values: tuple = ()
    method: str = "exact"

    def to_json(self) -> dict:
        d = {"ok": self.ok, "method": self.method}
        if not self.ok:
            d["failed_condition"] = self.condition
            d["values"] = [f"{complex(v).real:.12e}{complex(v).imag:+.12e}j" for v in self.values]
        return d


@dataclass
class DecompositionChain:
    factors: list            # Poly, outermost first
    classes: list            # FactorClass per factor
    composed: Poly
    hypothesis_ok: bool = True
    witnesses: list = field(default_factory=list)

    @property
    def degrees(self) -> list[int]:
        return [p.degree for p in self.factors]

    @property
    def tags(self) -> list[str]:
        return [c.tag for c in self.classes]

    def __len__(self):
        return len(self.factors)

    @classmethod
    def from_factors(cls, factors: Sequence[Poly], fuse: bool = True,
                     normalize: bool = True) -> "DecompositionChain":
        """Chain from explicit factors (outermost first).

        With normalize=False the given representatives are kept as they are,
        so digits and projections refer to the caller's own inner factor.
        """
        fs = [p for p in factors]
        if not fs:
            return cls([], [], Z, True, [])
        composed = compose_all(fs)
        if any(p.degree < 1 for p in fs):
            raise InputError("factors must be nonconstant")
        fs = [p for p in fs if p.degree > 1] or [composed]
        if composed.degree == 1:
            return cls([], [], composed, True, [])
        if normalize:
            fs = _normalize(fs)
        if fuse:
            fs = _fuse(fs)
            if normalize:
                fs = _normalize(fs)
        classes = [classify_factor(p) for p in fs]
        witnesses = []
        ok = True
        for k in range(1, len(fs)):
            w = check_no_merge(compose_all(fs[:k]), fs[k])
            witnesses.append(w)
            ok = ok and w.ok
        chain = cls(fs, classes, composed, ok, witnesses)
        if compose_all(fs) != composed:
            raise AssertionError("decomposition does not recompose")
        return chain

    def to_json(self) -> dict:
        return {
            "factors": [
                {"coeffs": p.to_json(), **c.to_json()} for p, c in zip(self.factors, self.classes)
            ],
            "composed": self.composed.to_json(),
            "hypothesis_ok": self.hypothesis_ok,
            "splits": [w.to_json() for w in self.witnesses],
        }


@lru_cache(maxsize=256)
def decompose_chain(f: Poly) -> DecompositionChain:
    if f.degree < 2:
        raise InputError("decomposition needs degree >= 2")
    return DecompositionChain.from_factors(_full_decomposition(f))


# ---------------------------------------------------------------------------
# non-merging test

def _critical_value_poly(p: Poly) -> Poly:
    """Squarefree monic polynomial whose roots are the distinct critical values of p."""
    sf = squarefree_part(p.derivative())
    return squarefree_part(value_polynomial(p, sf))


def _numeric_roots(p: Poly) -> np.ndarray:
    if p.degree < 1:
        return np.array([], dtype=complex)
    return np.roots(p.to_numpy()[::-1])


def check_no_merge(ftilde: Poly, h: Poly) -> MergeWitness:
    """Decide both non-merging conditions for the split ftilde o h.

    (1) critical values of ftilde are disjoint from ftilde(critical values of h);
    (2) ftilde is injective on the critical values of h.

    Decided exactly through the polynomials whose roots are these value sets;
    the numeric values only supply a witness when a condition fails.
    """
    if ftilde.degree < 2 or h.degree < 2:
        raise InputError("non-merging test needs two factors of degree >= 2")
    A = _critical_value_poly(ftilde)
    hv = _critical_value_poly(h)
    B = value_polynomial(ftilde, hv)
    common = poly_gcd(A, B)
    if common.degree >= 1:
        vals = _numeric_roots(common)
        return MergeWitness(False, 1, (complex(vals[0]),))
    if squarefree_part(B).degree < B.degree:
        hvals = _numeric_roots(hv)
        img = np.polynomial.polynomial.polyval(hvals, ftilde.to_numpy())
        best = None
        for i in range(len(hvals)):
            for j in range(i + 1, len(hvals)):
                d = abs(img[i] - img[j])
                if best is None or d < best[0]:
                    best = (d, hvals[i], hvals[j])
        return MergeWitness(False, 2, (complex(best[1]), complex(best[2])))
    return MergeWitness(True)


# ---------------------------------------------------------------------------
# right factors

@dataclass(frozen=True)
class RightFactor:
    outer: Poly
    inner: Poly

    @property
    def degree(self) -> int:
        return self.inner.degree


def _norm_inner(outer: Poly, inner: Poly) -> tuple[Poly, Poly]:
    c, e = inner.lc, inner[0]
    return poly_compose(outer, Poly([e, c])), (inner - Poly([e])) / c


def enumerate_right_factors(chain: DecompositionChain, include_whole: bool = False) -> list[RightFactor]:
    """Pairs (ftilde, h) with f = ftilde o h and deg h > 1, read off the chain."""
    fs = chain.factors
    out: dict[Poly, Poly] = {}

    def add(outer_factors, inner_factors):
        inner = compose_all(inner_factors)
        outer = compose_all(outer_factors) if outer_factors else Z
        if inner.degree < 2:
            return
        if inner.degree == chain.composed.degree and not include_whole:
            return
        o, i = _norm_inner(outer, inner)
        out.setdefault(i, o)

    for k in range(len(fs)):
        if k >= 1 or include_whole:
            add(fs[:k], fs[k:])
        cls = chain.classes[k]
        if cls.tag in (MONOMIAL, CHEBYSHEV):
            n = cls.core_degree
            for e in divisors(n)[1:-1]:
                # core_n = core_(n/e) o core_e
                if cls.tag == MONOMIAL:
                    outer_core, inner_core = Poly.monomial(n // e), Poly.monomial(e)
                else:
                    outer_core, inner_core = chebyshev(n // e), chebyshev(e)
                inner = [poly_compose(inner_core, cls.nu)] + list(fs[k + 1:])
                outer = list(fs[:k]) + [poly_compose(cls.mu, outer_core)]
                add(outer, inner)
    res = [RightFactor(o, i) for i, o in out.items()]
    for r in res:
        if poly_compose(r.outer, r.inner) != chain.composed:
            raise AssertionError("right factor does not recompose")
    return sorted(res, key=lambda r: (r.degree, r.inner.to_json()))


def divisor_set(chain: DecompositionChain) -> set[int]:
    """D(f): outer degrees m/deg(h) over all right factors, plus 1 and m."""
    m = chain.composed.degree
    out = {1, m}
    for r in enumerate_right_factors(chain, include_whole=True):
        out.add(m // r.degree)
    return out
