"""Independent numeric and brute-force checks.

Nothing in here uses the solver.  The abelian integral sum_i n_i g(z_i(t)) is
evaluated at real sample points to the right of the base point, reached by
continuation along the real axis so the labels stay those of the base point.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .cycles import Chain, characteristic_poly
from .decompose import check_no_merge
from .errors import HypothesisViolated, ShapeError
from .monodromy import (
    Permutation,
    base_labeling,
    critical_data,
    monodromy,
    residue_blocks,
    roots_along_ray,
    subgroup_elements,
    normal_closure,
)
from .polycore import Poly, chebyshev, cyclotomic, euler_phi, power_sums

MEMBER_TOL = 1e-8
NOT_MEMBER_TOL = 1e-4
NOT_MEMBER_MIN_SAMPLES = 3


@dataclass(frozen=True)
class SamplePlan:
    count: int = 10
    seed: int = 0
    tolerance: float = MEMBER_TOL

    def points(self, t0: float) -> list[float]:
        rng = random.Random(self.seed)
        return [t0 * (1.0 + rng.random()) for _ in range(self.count)]


@dataclass
class IntegralReport:
    samples: list
    residuals: list
    verdict: str
    precision: str = "double"
    escalations: list = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "max_residual": f"{self.max_residual:.3e}",
            "samples": [f"{t:.12e}" for t in self.samples],
            "residuals": [f"{r:.3e}" for r in self.residuals],
            "precision": self.precision,
            "escalations": list(self.escalations),
        }


def classify_residuals(residuals: Sequence[float], tol: float = MEMBER_TOL) -> str:
    if max(residuals, default=0.0) < tol:
        return "MemberNumeric"
    if sum(1 for r in residuals if r > NOT_MEMBER_TOL) >= NOT_MEMBER_MIN_SAMPLES:
        return "NotMember"
    return "Inconclusive"


def _polish(f: Poly, roots: np.ndarray, precision: str):
    if precision == "mp":
        with mpmath.workdps(30):
            cs = [mpmath.mpc(complex(c)) for c in f.coeffs]
            out = []
            for z in roots:
                w = mpmath.mpc(complex(z))
                for _ in range(6):
                    fv = mpmath.polyval(cs[::-1], w)
                    dv = mpmath.polyval([c * k for k, c in enumerate(cs)][:0:-1], w)
                    if dv == 0:
                        break
                    w = w - fv / dv
                out.append(w)
            return out
    c = f.to_numpy()
    dc = np.polynomial.polynomial.polyder(c)
    pv = np.polynomial.polynomial.polyval
    z = np.array(roots, dtype=complex)
    for _ in range(3):
        d = pv(z, dc)
        with np.errstate(all="ignore"):
            step = np.where(d != 0, pv(z, c) / d, 0)
        z = z - step
    return z


def labeled_roots(f: Poly, ts: Sequence[float], precision: str = "double"):
    """Roots of f(z) = t in the canonical labeling, for each real t >= base point."""
    lab = base_labeling(f)
    raw = roots_along_ray(lab, ts)
    out = []
    for t, r in zip(ts, raw):
        out.append(_polish(f - Poly([Fraction(t)]), r, precision))
    return out


def _residual(C: Chain, g: Poly, roots, precision: str) -> float:
    if precision == "mp":
        with mpmath.workdps(30):
            cs = [mpmath.mpc(complex(c)) for c in g.coeffs][::-1] or [mpmath.mpc(0)]
            vals = [mpmath.polyval(cs, z) for z in roots]
            s = mpmath.fsum(n * v for n, v in zip(C.coeffs, vals))
            return float(abs(s) / (1 + max(abs(v) for v in vals)))
    vals = np.polynomial.polynomial.polyval(np.asarray(roots), g.to_numpy()) if g.coeffs else np.zeros(len(roots))
    s = np.sum(np.array(C.coeffs) * vals)
    return float(abs(s) / (1.0 + np.max(np.abs(vals))))


def integral_report(f: Poly, C: Chain, g: Poly, plan: SamplePlan | None = None,
                    precision: str = "double") -> IntegralReport:
    plan = plan or SamplePlan()
    if C.m != f.degree:
        raise ShapeError("chain length must equal deg f")
    if f.degree == 1:
        # a single root: the integral is n_1 g(f^{-1}(t))
        lab_t0 = 2.0
        ts = plan.points(lab_t0)
        res = []
        for t in ts:
            z = (t - complex(f[0])) / complex(f[1])
            v = complex(g(z)) if g.coeffs else 0j
            res.append(abs(C.coeffs[0] * v) / (1 + abs(v)))
        return IntegralReport(ts, res, classify_residuals(res, plan.tolerance), precision)
    lab = base_labeling(f)
    ts = plan.points(lab.t0)
    roots = labeled_roots(f, ts, precision)
    res = [_residual(C, g, r, precision) for r in roots]
    esc = [] if lab.backend == "numpy" else ["mp-root-finding"]
    verdict = classify_residuals(res, plan.tolerance)
    if verdict == "Inconclusive" and precision == "double":
        # gap zone: polish and sum again at 30 digits before giving up
        res = [_residual(C, g, _polish(f - Poly([Fraction(t)]), r, "mp"), "mp") for t, r in zip(ts, roots)]
        esc.append("mp-polish")
        precision = "mp"
        verdict = classify_residuals(res, plan.tolerance)
    return IntegralReport(ts, res, verdict, precision, esc)


def abelian_integral(f: Poly, C: Chain, g: Poly, plan: SamplePlan | None = None,
                     precision: str = "double") -> float:
    """Max relative residual of sum_i n_i g(z_i(t)) over the sample plan."""
    return integral_report(f, C, g, plan, precision).max_residual


def integral_values(f: Poly, C: Chain, g: Poly, ts: Sequence[float]) -> list[complex]:
    """Raw values of sum_i n_i g(z_i(t)) at the given real points."""
    if g.is_zero():
        return [0j for _ in ts]
    roots = labeled_roots(f, ts)
    return [complex(np.sum(np.array(C.coeffs) * np.polynomial.polynomial.polyval(r, g.to_numpy())))
            for r in roots]


# ---------------------------------------------------------------------------

def ng_crosscheck(h: Poly, plan: SamplePlan | None = None) -> float:
    """Max |power_sums(h) - numeric power sums of the roots of h(z) = w|."""
    plan = plan or SamplePlan(count=5)
    d = h.degree
    exact = [complex(s) for s in power_sums(h, d)]
    vals = critical_data(h).critical_values if d >= 2 else ()
    w0 = 2.0 * max((abs(v) for v in vals), default=0.0) + 2.0
    c = h.to_numpy()
    dev = 0.0
    for w in plan.points(w0):
        cw = c.copy()
        cw[0] -= w
        rts = _polish(h - Poly([Fraction(w)]), np.roots(cw[::-1]), "double")
        for k in range(d):
            dev = max(dev, abs(complex(np.sum(rts ** k)) - exact[k]))
    return dev


def _xi(t: complex) -> complex:
    """Branch of arccos used for the closed form: principal, -i*arccosh on t > 1."""
    if isinstance(t, (int, float)) or complex(t).imag == 0:
        x = complex(t).real
        if abs(x) <= 1:
            return complex(math.acos(x))
        if x > 1:
            return -1j * math.acosh(x)
    return cmath.acos(t)


def chebyshev_roots(m: int, t) -> list[complex]:
    xi = _xi(t)
    return [cmath.cos((xi + 2 * math.pi * (k - 1)) / m) for k in range(1, m + 1)]


def chebyshev_integral_closed_form(C: Chain, j: int, m: int, t) -> complex:
    """(e^{i xi j/m} P_C(e^j) + e^{-i xi j/m} P_C(e^{-j}))/2, with e = exp(2 pi i/m)."""
    if C.m != m:
        raise ShapeError("chain length must equal m")
    xi = _xi(t)
    eps = cmath.exp(2j * math.pi / m)
    P = characteristic_poly(C).to_numpy()
    pv = np.polynomial.polynomial.polyval
    plus = pv(eps ** j, P) if P.size else 0
    minus = pv(eps ** (-j), P) if P.size else 0
    return complex(cmath.exp(1j * xi * j / m) / 2 * plus + cmath.exp(-1j * xi * j / m) / 2 * minus)


def chebyshev_direct_sum(C: Chain, j: int, m: int, t) -> complex:
    Tj = chebyshev(j).to_numpy()
    zs = chebyshev_roots(m, t)
    return complex(sum(n * np.polynomial.polynomial.polyval(z, Tj) for n, z in zip(C.coeffs, zs)))


# ---------------------------------------------------------------------------

def _power_residues(m: int) -> np.ndarray:
    """Row i holds the coefficients of z^i mod Phi_m."""
    phi = cyclotomic(m)
    k = euler_phi(m)
    rows = []
    for i in range(m):
        r = Poly.monomial(i) % phi
        rows.append([int(r[j].re) for j in range(k)])
    return np.array(rows, dtype=np.int64)


def brute_force_balanced(C: Chain, elements) -> bool:
    """sum_i n_sigma(i) e^(i-1) = 0 for every sigma, in exact residues mod Phi_m."""
    m = C.m
    M = _power_residues(m)
    n = np.array(C.coeffs, dtype=np.int64)
    perms = [tuple(p.images) if isinstance(p, Permutation) else tuple(x + 1 for x in p) for p in elements]
    if not perms:
        return True
    idx = np.array(perms, dtype=np.int64) - 1
    vecs = n[idx]
    return bool(np.all(vecs @ M == 0))


# ---------------------------------------------------------------------------

@dataclass
class SemidirectReport:
    status: str
    order_G: int = 0
    order_N: int = 0
    order_H: int = 0
    order_ftilde: int = 0
    product_ok: bool = False
    intersection_trivial: bool = False
    alpha_permutes_blocks: bool = False
    beta_in_one_block: bool = False
    alphas: list = field(default_factory=list)
    betas: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.status == "ok" and self.product_ok and self.intersection_trivial
                and self.alpha_permutes_blocks and self.beta_in_one_block
                and self.order_H == self.order_ftilde)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "order_G": self.order_G,
            "order_N_h": self.order_N,
            "order_alpha_subgroup": self.order_H,
            "order_G_ftilde": self.order_ftilde,
            "product_ok": self.product_ok,
            "intersection_trivial": self.intersection_trivial,
            "alpha_permutes_blocks": self.alpha_permutes_blocks,
            "beta_in_one_block": self.beta_in_one_block,
        }


def _blocks_mapped(p: Permutation, blocks) -> bool:
    cells = {frozenset(b) for b in blocks.blocks}
    return all(frozenset(p(i) for i in b) in cells for b in blocks.blocks)


def _in_one_block(p: Permutation, blocks) -> bool:
    sup = p.support()
    return any(sup <= set(b) for b in blocks.blocks)


def semidirect_check(ftilde: Poly, h: Poly, element_cap: int = 2_000_000,
                     strict: bool = False) -> SemidirectReport:
    """G_f = N_h x| <alpha> for f = ftilde o h, by full enumeration."""
    if not check_no_merge(ftilde, h).ok:
        if strict:
            raise HypothesisViolated("critical values of the two factors merge")
        return SemidirectReport("HypothesisViolated")
    f = ftilde(h)
    md = monodromy(f)
    G = md.group(element_cap)
    A = list(critical_data(ftilde).critical_values)
    hv = critical_data(h).critical_values
    B = [complex(b) for b in np.polynomial.polynomial.polyval(np.array(hv), ftilde.to_numpy())]
    alphas, betas = [], []
    for v, g in zip(md.values, md.generators):
        da = min(abs(v - a) for a in A)
        db = min(abs(v - b) for b in B)
        (alphas if da < db else betas).append(g)
    elems = G.elements()
    N = normal_closure(betas, G) if betas else frozenset({tuple(range(G.degree))})
    H = subgroup_elements(alphas, G.degree, element_cap) if alphas else frozenset({tuple(range(G.degree))})
    blocks = residue_blocks(f.degree, h.degree)
    rep = SemidirectReport(
        "ok",
        order_G=len(elems),
        order_N=len(N),
        order_H=len(H),
        order_ftilde=monodromy(ftilde).group(element_cap).order(),
        alphas=alphas,
        betas=betas,
    )
    rep.product_ok = rep.order_G == rep.order_N * rep.order_H
    rep.intersection_trivial = len(N & H) == 1
    rep.alpha_permutes_blocks = all(_blocks_mapped(a, blocks) for a in alphas)
    rep.beta_in_one_block = all(_in_one_block(b, blocks) for b in betas)
    return rep
