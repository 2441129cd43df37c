"""Exact univariate polynomials over the Gaussian rationals Q(i).

Coefficients are stored lowest degree first.  The zero polynomial has an
empty coefficient tuple and degree -1.  Everything here is immutable, so
polynomials can be used as dictionary keys and cache keys.

Serialized coefficients are strings such as ``"3"``, ``"-1/2"`` or
``"1/2+3/4*i"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, InvalidBase, OutOfRange


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to a rational")


class GRat:
    """Gaussian rational ``re + im*i`` with exact components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x) -> "GRat":
        if isinstance(x, GRat):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, str):
            return parse_coefficient(x)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, float):
            return cls(Fraction(x))
        raise TypeError(f"cannot convert {x!r} to a Gaussian rational")

    def __add__(self, other):
        o = _as_grat(other)
        if o is None:
            return NotImplemented
        return GRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_grat(other)
        if o is None:
            return NotImplemented
        return GRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _as_grat(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _as_grat(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return GRat(self.re * o.re)
        return GRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_grat(other)
        if o is None:
            return NotImplemented
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return GRat(self.re / o.re, self.im / o.re)
        n = o.re * o.re + o.im * o.im
        return GRat((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = _as_grat(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return GRat(1) / (self ** (-k))
        out = GRat(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = _as_grat(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "GRat":
        return GRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def __repr__(self):
        return f"GRat({format_coefficient(self)!r})"

    def __str__(self):
        return format_coefficient(self)


def _as_grat(x):
    if isinstance(x, GRat):
        return x
    if isinstance(x, (int, Fraction)):
        return GRat(x)
    return None


ZERO = GRat(0)
ONE = GRat(1)
I = GRat(0, 1)


def parse_coefficient(text) -> GRat:
    """Parse ``"a/b"``, ``"a/b+c/d*i"``, ``"c*i"``, ``"-i"`` and plain numbers."""
    if isinstance(text, GRat):
        return text
    if isinstance(text, bool):
        raise InputError(f"bad coefficient {text!r}")
    if isinstance(text, (int, Fraction)):
        return GRat(text)
    if isinstance(text, float):
        if not math.isfinite(text):
            raise InputError(f"bad coefficient {text!r}")
        return GRat(Fraction(repr(text)))
    if not isinstance(text, str):
        raise InputError(f"bad coefficient {text!r}")
    s = text.replace(" ", "")
    if not s:
        raise InputError("empty coefficient")
    try:
        if not s.endswith("i"):
            return GRat(Fraction(s))
        body = s[:-1]
        if body.endswith("*"):
            body = body[:-1]
        # split at the last sign that is not leading and not an exponent sign
        k = -1
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                k = pos
                break
        if k == -1:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:k], body[k:]
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return GRat(Fraction(re_part), Fraction(im_part))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad coefficient {text!r}") from exc


def format_coefficient(c: GRat) -> str:
    if not c.im:
        return str(c.re)
    sign = "-" if c.im < 0 else "+"
    return f"{c.re}{sign}{abs(c.im)}*i"


def grat_sqrt(x: GRat) -> GRat | None:
    """Exact square root in Q(i), or None when x is not a square there."""
    x = GRat.coerce(x)
    if not x:
        return ZERO
    n = _frac_sqrt(x.norm())
    if n is None:
        return None
    a2 = (x.re + n) / 2
    b2 = (n - x.re) / 2
    a = _frac_sqrt(a2)
    b = _frac_sqrt(b2)
    if a is None or b is None:
        return None
    if x.im < 0:
        b = -b
    r = GRat(a, b)
    return r if r * r == x else None


def _frac_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    p, d = q.numerator, q.denominator
    rp, rd = math.isqrt(p), math.isqrt(d)
    if rp * rp == p and rd * rd == d:
        return Fraction(rp, rd)
    return None


@dataclass(frozen=True, eq=False)
class Poly:
    """Dense polynomial, coefficients lowest degree first."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable = ()):
        cs = [GRat.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, n: int, c=1) -> "Poly":
        return cls([0] * n + [c])

    @classmethod
    def linear(cls, a, b) -> "Poly":
        """The polynomial a*z + b."""
        return cls([b, a])

    @classmethod
    def parse(cls, items: Sequence) -> "Poly":
        if not isinstance(items, (list, tuple)):
            raise InputError("polynomial must be a list of coefficients")
        return cls(parse_coefficient(c) for c in items)

    # basic data ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int) -> GRat:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    @property
    def lc(self) -> GRat:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.coeffs)

    def to_json(self) -> list[str]:
        return [format_coefficient(c) for c in self.coeffs]

    def to_numpy(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    # arithmetic ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        o = _as_grat(other)
        if o is None:
            return NotImplemented
        return self.coeffs == Poly([o]).coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self[k] - o[k] for k in range(n))

    def __rsub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return Poly()
        if len(o.coeffs) == 1:
            c = o.coeffs[0]
            return Poly(a * c for a in self.coeffs)
        out = [ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        c = GRat.coerce(scalar)
        return Poly(a / c for a in self.coeffs)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def __call__(self, x):
        """Evaluate.  Polynomials compose, exact scalars stay exact, numbers go numeric."""
        if isinstance(x, Poly):
            return poly_compose(self, x)
        if isinstance(x, (GRat, int, Fraction)):
            acc = ZERO
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        return np.polynomial.polynomial.polyval(x, self.to_numpy()) if self.coeffs else 0 * x

    def derivative(self) -> "Poly":
        return Poly(self.coeffs[k] * k for k in range(1, len(self.coeffs)))

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self / self.lc

    def conjugate(self) -> "Poly":
        return Poly(c.conjugate() for c in self.coeffs)

    def __repr__(self):
        return f"Poly({self.to_json()})"

    def __str__(self):
        return poly_str(self)


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    g = _as_grat(x)
    if g is None:
        return None
    return Poly([g])


Z = Poly.x()


def poly_str(p: Poly, var: str = "z") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p[k]
        if not c:
            continue
        cs = format_coefficient(c)
        if c.im:
            cs = f"({cs})"
        if k == 0:
            terms.append(cs)
            continue
        mon = var if k == 1 else f"{var}^{k}"
        if cs == "1":
            terms.append(mon)
        elif cs == "-1":
            terms.append("-" + mon)
        else:
            terms.append(f"{cs}*{mon}")
    s = " + ".join(terms)
    return s.replace("+ -", "- ")


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.degree < b.degree:
        return Poly(), a
    rem = list(a.coeffs)
    db = b.degree
    inv = ONE / b.lc
    q = [ZERO] * (a.degree - db + 1)
    for k in range(a.degree - db, -1, -1):
        c = rem[k + db] * inv
        q[k] = c
        if c:
            for j in range(db + 1):
                rem[k + j] = rem[k + j] - c * b.coeffs[j]
    return Poly(q), Poly(rem[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_compose(outer: Poly, inner: Poly) -> Poly:
    """outer(inner(z)), exactly, via Horner."""
    acc = Poly()
    for c in reversed(outer.coeffs):
        acc = acc * inner + Poly([c])
    return acc


def compose_all(factors: Sequence[Poly]) -> Poly:
    """f_0 o f_1 o ... o f_d for an outermost-first list."""
    if not factors:
        return Z
    acc = factors[-1]
    for p in reversed(factors[:-1]):
        acc = poly_compose(p, acc)
    return acc


def squarefree_part(p: Poly) -> Poly:
    if p.degree < 1:
        return p.monic()
    return (p // poly_gcd(p, p.derivative())).monic()


@dataclass(frozen=True)
class FAdicExpansion:
    """g(z) = sum_k digits[k](base(z)) * z^k with deg(digits) arbitrary, k < deg(base)."""

    base: Poly
    digits: tuple

    def reassemble(self) -> Poly:
        out = Poly()
        zk = Poly([1])
        for d in self.digits:
            out = out + poly_compose(d, self.base) * zk
            zk = zk * Z
        return out


def f_adic_expand(g: Poly, f: Poly) -> FAdicExpansion:
    m = f.degree
    if m < 1:
        raise InvalidBase("expansion base must be nonconstant")
    digits: list[list[GRat]] = [[] for _ in range(m)]
    q = g
    while not q.is_zero():
        q, r = poly_divmod(q, f)
        for k in range(m):
            digits[k].append(r[k])
    return FAdicExpansion(f, tuple(Poly(d) for d in digits))


@lru_cache(maxsize=None)
def chebyshev(n: int) -> Poly:
    """Chebyshev polynomial of the first kind, T_n(cos x) = cos(n x)."""
    if n < 0:
        raise ValueError("negative Chebyshev index")
    if n == 0:
        return Poly([1])
    if n == 1:
        return Z
    return Poly([0, 2]) * chebyshev(n - 1) - chebyshev(n - 2)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Poly:
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    num = Poly.monomial(n) - Poly([1])
    for d in divisors(n)[:-1]:
        num = num // cyclotomic(d)
    return num


def euler_phi(n: int) -> int:
    out = n
    p, k = 2, n
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            out -= out // p
        p += 1
    if k > 1:
        out -= out // k
    return out


def divides(a: Poly, b: Poly) -> bool:
    """True when a | b (everything divides 0)."""
    return (b % a).is_zero()


def power_sums(h: Poly, count: int) -> tuple:
    """Power sums s_0..s_{count-1} of the roots of h(z) - w.

    For k < deg h these do not depend on w, so count > deg h is refused.
    """
    d = h.degree
    if d < 1:
        raise InvalidBase("power sums need a nonconstant polynomial")
    if count > d or count < 0:
        raise OutOfRange(f"power sums beyond s_{d - 1} depend on w (asked for {count})")
    a = h.monic()
    # elementary symmetric e_k = (-1)^k a_{d-k}; e_d is the only one seeing w
    e = [ONE] + [a[d - k] * (-1) ** k for k in range(1, d)]
    s = [GRat(d)]
    for k in range(1, count):
        acc = e[k] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            acc = acc + e[i] * s[k - i] * ((-1) ** (i - 1))
        s.append(acc)
    return tuple(s[:count])


def chebyshev_basis_change(n: int) -> list[list[GRat]]:
    """Row k gives z^k = sum_j rows[k][j] T_j(z) for k < n."""
    rows = []
    for k in range(n):
        target = Poly.monomial(k)
        row = [ZERO] * n
        for j in range(k, -1, -1):
            c = target[j] / chebyshev(j).lc
            row[j] = c
            target = target - chebyshev(j) * c
        rows.append(row)
    return rows


def recognize_grat(z: complex, max_den: int = 10**6, tol: float = 1e-9) -> GRat | None:
    """Best small-denominator Gaussian rational close to z (not a proof by itself)."""
    re_ = Fraction(z.real).limit_denominator(max_den)
    im_ = Fraction(z.imag).limit_denominator(max_den)
    if abs(complex(float(re_), float(im_)) - z) > tol * (1 + abs(z)):
        return None
    return GRat(re_, im_)


def resultant(a: Poly, b: Poly) -> GRat:
    """Resultant of two polynomials by the Euclidean remainder sequence."""
    if a.is_zero() or b.is_zero():
        return ZERO
    acc = ONE
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return acc * b.lc ** da
        r = a % b
        if r.is_zero():
            return ZERO
        if (da * db) % 2:
            acc = -acc
        acc = acc * b.lc ** (da - r.degree)
        a, b = b, r


def interpolate(xs: Sequence, ys: Sequence) -> Poly:
    """Exact Newton interpolation through the points (xs[k], ys[k])."""
    xs = [GRat.coerce(x) for x in xs]
    coef = [GRat.coerce(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly([coef[-1]]) if coef else Poly()
    for i in range(n - 2, -1, -1):
        out = out * Poly([-xs[i], 1]) + Poly([coef[i]])
    return out


def value_polynomial(f: Poly, p: Poly) -> Poly:
    """Monic polynomial whose roots are f(c) for the roots c of p, with multiplicity."""
    k = p.degree
    if k < 1:
        return Poly([1])
    r = f % p
    if r.degree < 1:
        return Poly([-r[0], 1]) ** k
    norm = p.lc ** r.degree
    xs = list(range(k + 1))
    ys = [resultant(p, Poly([x]) - r) / norm for x in xs]
    return interpolate(xs, ys).monic()


def count_distinct_roots(p: Poly) -> int:
    return max(squarefree_part(p).degree, 0)
