"""Monodromy of f(z) = t by numerical continuation, plus permutation group tools.

Roots of f(z) = t are labeled at a real base point t0 to the right of every
critical value.  Label 1 is the root closest to the leading asymptotic
branch (t0/a)^(1/m) - a_{m-1}/(m a), and label k+1 is where root k lands after
one counter-clockwise trip around the circle |t| = t0.  With this choice the
loop around infinity is the cycle (1 2 ... m).

Permutation convention: sigma(i) = j means root i ends at the position of
root j after the loop.  Loops around finite critical values are composed in
their angular order around t0 (sigma_1 applied first).
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .errors import CapExceeded, DegenerateGeometry, NotTransitive, NumericFailure
from .polycore import Poly, count_distinct_roots, squarefree_part, value_polynomial

DEFAULT_ELEMENT_CAP = 2_000_000
MATCH_FACTOR = 3.0
DEDUP_TOL = 1e-8
DEGENERATE_TOL = 1e-6


# ---------------------------------------------------------------------------
# permutations

@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..m}, stored as its 1-based image list."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def from_cycles(cls, m: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(1, m + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b
        return cls(tuple(img))

    @classmethod
    def long_cycle(cls, m: int) -> "Permutation":
        return cls(tuple(list(range(2, m + 1)) + [1]))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def then(self, other: "Permutation") -> "Permutation":
        """Apply self first, then other."""
        return Permutation(tuple(other.images[x - 1] for x in self.images))

    def __mul__(self, other: "Permutation") -> "Permutation":
        # usual composition: (p * q)(i) = p(q(i))
        return other.then(self)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x - 1] = i + 1
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(x == i + 1 for i, x in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple]:
        seen = set()
        out = []
        for i in range(1, self.degree + 1):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self(i)
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*[len(c) for c in self.cycles(include_fixed=True)])

    def support(self) -> set:
        return {i + 1 for i, x in enumerate(self.images) if x != i + 1}

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def compose_in_order(perms: Sequence[Permutation]) -> Permutation:
    """sigma_n o ... o sigma_1, i.e. perms[0] is applied first."""
    out = Permutation.identity(perms[0].degree)
    for p in perms:
        out = out.then(p)
    return out


# ---------------------------------------------------------------------------
# groups (internally 0-based tuples)

def _t_compose(p: tuple, q: tuple) -> tuple:
    """p then q."""
    return tuple(q[x] for x in p)


def _closure(gens: Sequence[tuple], degree: int, cap: int) -> set:
    ident = tuple(range(degree))
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = _t_compose(g, s)
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    raise CapExceeded(f"group closure exceeded {cap} elements")
                queue.append(h)
    return seen


def _inverse_t(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


@dataclass
class PermGroup:
    degree: int
    generators: list
    element_cap: int = DEFAULT_ELEMENT_CAP
    _elements: frozenset | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        gens = [g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in self.generators]
        for g in gens:
            if g.degree != self.degree:
                raise ValueError("generator degree mismatch")
        if not gens:
            gens = [Permutation.identity(self.degree)]
        self.generators = gens

    def _gens0(self) -> list[tuple]:
        return [tuple(x - 1 for x in g.images) for g in self.generators]

    def elements(self) -> frozenset:
        """All elements as 0-based tuples (cached)."""
        if self._elements is None:
            self._elements = frozenset(_closure(self._gens0(), self.degree, self.element_cap))
        return self._elements

    def order(self) -> int:
        return len(self.elements())

    def orbits(self) -> list[list[int]]:
        parent = list(range(self.degree))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for g in self._gens0():
            for i, x in enumerate(g):
                ra, rb = find(i), find(x)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = {}
        for i in range(self.degree):
            groups.setdefault(find(i), []).append(i + 1)
        return sorted(groups.values())

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def to_json(self) -> dict:
        return {"degree": self.degree, "generators": [list(g.images) for g in self.generators]}


def group_elements(G: PermGroup) -> list[Permutation]:
    return [Permutation(tuple(x + 1 for x in e)) for e in sorted(G.elements())]


def subgroup_elements(gens: Sequence[Permutation], degree: int, cap: int = DEFAULT_ELEMENT_CAP) -> frozenset:
    g0 = [tuple(x - 1 for x in g.images) for g in gens]
    return frozenset(_closure(g0, degree, cap))


def normal_closure(gens: Sequence[Permutation], G: PermGroup) -> frozenset:
    """Smallest normal subgroup of G containing gens, as 0-based tuples."""
    conj = set()
    elems = G.elements()
    for s in gens:
        s0 = tuple(x - 1 for x in s.images)
        for g in elems:
            gi = _inverse_t(g)
            conj.add(_t_compose(_t_compose(gi, s0), g))
    return frozenset(_closure(sorted(conj), G.degree, G.element_cap))


def is_two_transitive(G: PermGroup) -> bool:
    m = G.degree
    if m < 2:
        return False
    if m == 2:
        return G.is_transitive()
    gens = G._gens0()
    start = (0, 1)
    seen = {start}
    stack = [start]
    while stack:
        a, b = stack.pop()
        for g in gens:
            nxt = (g[a], g[b])
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == m * (m - 1)


@dataclass(frozen=True)
class BlockSystem:
    """Partition of {1..m} into equal cells, cells sorted by smallest element."""

    blocks: tuple

    def __post_init__(self):
        cells = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", cells)

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def degree(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self, i: int) -> int:
        for k, b in enumerate(self.blocks):
            if i in b:
                return k
        raise KeyError(i)

    def to_json(self) -> list:
        return [list(b) for b in self.blocks]


def residue_blocks(m: int, d: int) -> BlockSystem:
    """Cells {k, k + m/d, k + 2m/d, ...}: the fibres of an inner factor of degree d."""
    if d < 1 or m % d:
        raise ValueError(f"block size {d} does not divide {m}")
    step = m // d
    return BlockSystem(tuple(tuple(range(k, m + 1, step)) for k in range(1, step + 1)))


def _minimal_block(gens: list[tuple], m: int, j: int) -> tuple:
    """Smallest block containing 0 and j (Atkinson's union-find closure)."""
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[max(ra, rb)] = min(ra, rb)
        return True

    union(0, j)
    queue = deque([(0, j)])
    while queue:
        a, b = queue.popleft()
        for g in gens:
            ga, gb = g[a], g[b]
            if find(ga) != find(gb):
                union(ga, gb)
                queue.append((ga, gb))
    return tuple(find(i) for i in range(m))


def _labels_to_system(labels: Sequence[int]) -> BlockSystem:
    cells: dict[int, list[int]] = {}
    for i, r in enumerate(labels):
        cells.setdefault(r, []).append(i + 1)
    return BlockSystem(tuple(tuple(c) for c in cells.values()))


def _join(a: BlockSystem, b: BlockSystem, m: int) -> BlockSystem:
    parent = list(range(m + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for sysm in (a, b):
        for cell in sysm.blocks:
            for x in cell[1:]:
                ra, rb = find(cell[0]), find(x)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    return _labels_to_system([find(i) for i in range(1, m + 1)])


def imprimitivity_blocks(G: PermGroup) -> list[BlockSystem]:
    """All nontrivial block systems of a transitive group, smallest blocks first."""
    if not G.is_transitive():
        raise NotTransitive("imprimitivity blocks need a transitive action")
    m = G.degree
    gens = G._gens0()
    found = set()
    for j in range(1, m):
        sysm = _labels_to_system(_minimal_block(gens, m, j))
        if 1 < sysm.block_size < m:
            found.add(sysm)
    # joins of block systems are block systems; close up
    changed = True
    while changed:
        changed = False
        for a in list(found):
            for b in list(found):
                c = _join(a, b, m)
                if 1 < c.block_size < m and c not in found:
                    found.add(c)
                    changed = True
    return sorted(found, key=lambda s: (s.block_size, s.blocks))


def is_block_system(G: PermGroup, sysm: BlockSystem) -> bool:
    cells = {frozenset(b) for b in sysm.blocks}
    for g in G.generators:
        for b in sysm.blocks:
            if frozenset(g(i) for i in b) not in cells:
                return False
    return True


# ---------------------------------------------------------------------------
# critical data

@dataclass(frozen=True)
class CriticalData:
    critical_points: tuple
    critical_values: tuple
    dedup_tolerance: float = DEDUP_TOL

    def to_json(self) -> dict:
        return {
            "critical_points": [_cstr(z) for z in self.critical_points],
            "critical_values": [_cstr(v) for v in self.critical_values],
            "dedup_tolerance": self.dedup_tolerance,
        }


def _cstr(z: complex) -> str:
    z = complex(z)
    re_, im_ = z.real + 0.0, z.imag + 0.0
    if abs(re_) < 5e-13 * (1 + abs(z)):
        re_ = 0.0
    if abs(im_) < 5e-13 * (1 + abs(z)):
        im_ = 0.0
    return f"{re_:.12e}{im_:+.12e}j"


def _newton_polish(p: np.ndarray, dp: np.ndarray, roots: np.ndarray, iters: int = 4) -> np.ndarray:
    pv = np.polynomial.polynomial.polyval
    out = np.array(roots, dtype=complex)
    for _ in range(iters):
        d = pv(out, dp)
        ok = np.abs(d) > 0
        step = np.zeros_like(out)
        step[ok] = pv(out[ok], p) / d[ok]
        out = out - step
    return out


def _np_roots(c_low: np.ndarray) -> np.ndarray:
    return np.roots(c_low[::-1])


@lru_cache(maxsize=256)
def critical_data(f: Poly) -> CriticalData:
    if f.degree < 2:
        raise ValueError("critical data need degree >= 2")
    sf = squarefree_part(f.derivative())
    if sf.degree < 1:
        raise ValueError("derivative has no roots")
    c = sf.to_numpy()
    pts = _newton_polish(c, np.polynomial.polynomial.polyder(c), _np_roots(c))
    fp = f.derivative().to_numpy()
    scale = np.sum(np.abs(fp))
    for z in pts:
        res = abs(np.polynomial.polynomial.polyval(z, fp)) / (scale * max(1.0, abs(z)) ** (len(fp) - 1))
        if not np.isfinite(res) or res > 1e-10:
            raise NumericFailure(f"critical point {z} has residual {res:.2e}")
    vals = np.polynomial.polynomial.polyval(pts, f.to_numpy())
    # the number of distinct values is known exactly; cluster to that count
    target = count_distinct_roots(value_polynomial(f, sf))
    clusters = _cluster(list(vals), target)
    vscale = 1.0 + max(abs(v) for v in vals)
    spread = max((max(abs(vals[i] - vals[j]) for i in cl for j in cl) for cl in clusters), default=0.0)
    means = [complex(np.mean([vals[i] for i in cl])) for cl in clusters]
    gap = min((abs(a - b) for k, a in enumerate(means) for b in means[k + 1:]), default=math.inf)
    if spread > DEDUP_TOL * vscale or gap < DEGENERATE_TOL * vscale:
        raise DegenerateGeometry(
            f"critical values not resolvable (spread {spread:.2e}, gap {gap:.2e})")
    order = sorted(range(len(pts)), key=lambda k: (round(pts[k].real, 12), round(pts[k].imag, 12)))
    means.sort(key=lambda v: (round(v.real, 12), round(v.imag, 12)))
    return CriticalData(tuple(complex(pts[k]) for k in order), tuple(means))


def _cluster(vals: list, target: int) -> list[list[int]]:
    """Single-linkage clustering of vals into exactly target groups."""
    n = len(vals)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    pairs = sorted((abs(vals[i] - vals[j]), i, j) for i in range(n) for j in range(i + 1, n))
    groups = n
    for _, i, j in pairs:
        if groups <= target:
            break
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
            groups -= 1
    out: dict[int, list[int]] = {}
    for i in range(n):
        out.setdefault(find(i), []).append(i)
    return list(out.values())


# ---------------------------------------------------------------------------
# paths

class _Segment:
    def __init__(self, a: complex, b: complex):
        self.a, self.b = complex(a), complex(b)
        self.length = abs(self.b - self.a)

    def point(self, s: float) -> complex:
        if self.length == 0:
            return self.a
        return self.a + (self.b - self.a) * (s / self.length)

    def reversed(self):
        return _Segment(self.b, self.a)


class _Arc:
    def __init__(self, center: complex, radius: float, theta0: float, dtheta: float):
        self.center, self.radius = complex(center), float(radius)
        self.theta0, self.dtheta = float(theta0), float(dtheta)
        self.length = abs(self.radius * self.dtheta)

    def point(self, s: float) -> complex:
        th = self.theta0 + self.dtheta * (s / self.length if self.length else 0.0)
        return self.center + self.radius * cmath.exp(1j * th)

    def reversed(self):
        return _Arc(self.center, self.radius, self.theta0 + self.dtheta, -self.dtheta)


def _reverse_path(path: list) -> list:
    return [p.reversed() for p in reversed(path)]


def _angle(z: complex) -> float:
    a = math.atan2(z.imag, z.real)
    return a + 2 * math.pi if a < 0 else a


# ---------------------------------------------------------------------------
# continuation

class _Tracker:
    def __init__(self, f: Poly, crit_values: Sequence[complex], backend: str = "numpy"):
        self.c = f.to_numpy()
        self.dc = np.polynomial.polynomial.polyder(self.c)
        self.crit = np.array(list(crit_values), dtype=complex)
        self.backend = backend
        self.m = f.degree

    def roots_at(self, t: complex) -> np.ndarray:
        c = self.c.copy()
        c[0] -= t
        if self.backend == "numpy":
            return _np_roots(c)
        with mpmath.workdps(40):
            rts = mpmath.polyroots([mpmath.mpc(x) for x in c[::-1]], maxsteps=400, extraprec=80)
        return np.array([complex(r) for r in rts], dtype=complex)

    def _dist(self, t: complex) -> float:
        if len(self.crit) == 0:
            return math.inf
        return float(np.min(np.abs(self.crit - t)))

    def match(self, pred: np.ndarray, new: np.ndarray):
        d = np.abs(pred[:, None] - new[None, :])
        order = np.argsort(d, axis=1)
        idx = order[:, 0]
        if len(set(idx.tolist())) != len(idx):
            return None
        if d.shape[1] > 1:
            d1 = d[np.arange(len(idx)), idx]
            d2 = d[np.arange(len(idx)), order[:, 1]]
            if np.any(d2 < MATCH_FACTOR * d1):
                return None
        return idx

    def track(self, path: list, z: np.ndarray) -> np.ndarray:
        pv = np.polynomial.polynomial.polyval
        z = np.array(z, dtype=complex)
        for piece in path:
            L = piece.length
            if L == 0:
                continue
            s = 0.0
            t = piece.point(0.0)
            h = L
            while s < L - 1e-15 * L:
                cap = 0.25 * self._dist(t)
                step = min(h, cap, L - s)
                if step < 1e-13 * (1.0 + abs(t)):
                    raise NumericFailure(f"continuation stalled near t={t}")
                t_new = piece.point(s + step)
                dfz = pv(z, self.dc)
                with np.errstate(all="ignore"):
                    pred = z + (t_new - t) / dfz
                if not np.all(np.isfinite(pred)):
                    pred = z
                new = self.roots_at(t_new)
                idx = self.match(pred, new)
                if idx is None:
                    h = step / 2
                    continue
                z = new[idx]
                s += step
                t = t_new
                h = step * 1.5
        return z


# ---------------------------------------------------------------------------
# labeling and loops

@dataclass
class Labeling:
    f: Poly
    t0: float
    roots: np.ndarray
    crit: CriticalData
    backend: str = "numpy"

    @property
    def m(self) -> int:
        return self.f.degree


def _base_radius(crit_values: Sequence[complex]) -> float:
    mx = max((abs(v) for v in crit_values), default=0.0)
    return 2.0 * mx + 2.0


def _perm_from_positions(start: np.ndarray, end: np.ndarray) -> tuple:
    d = np.abs(end[:, None] - start[None, :])
    idx = np.argmin(d, axis=1)
    if len(set(idx.tolist())) != len(idx):
        raise NumericFailure("could not match continued roots to base roots")
    sep = np.min(np.abs(start[:, None] - start[None, :]) + np.eye(len(start)) * 1e300)
    if np.max(d[np.arange(len(idx)), idx]) > sep / MATCH_FACTOR:
        raise NumericFailure("continued roots do not return near base roots")
    return tuple(int(i) for i in idx)


def _anchor(f: Poly, t0: float) -> complex:
    m = f.degree
    a = complex(f.lc)
    b = complex(f[m - 1])
    return complex(t0 / a) ** (1.0 / m) - b / (m * a)


def _anchor_index(f: Poly, t0: float, start: np.ndarray, tr: "_Tracker") -> int:
    """Index of the root on the principal asymptotic branch.

    Near t0 the asymptotic formula can be nearly equidistant from two roots,
    so the branch is picked far out on the real axis, where it is unambiguous,
    and carried back to t0.
    """
    m = f.degree
    r0 = float(np.max(np.abs(start)))
    big = min(abs(complex(f.lc)) * (100.0 * (1.0 + r0)) ** m, 1e200)
    big = max(big, t0)
    far = tr.roots_at(big)
    k = int(np.argmin(np.abs(far - _anchor(f, big))))
    if big > t0:
        back = tr.track([_Segment(big, t0)], far)
        return int(np.argmin(np.abs(start - back[k])))
    return k


def _labeling(f: Poly, backend: str) -> Labeling:
    m = f.degree
    if m < 1:
        raise ValueError("labeling needs a nonconstant polynomial")
    crit = critical_data(f) if m >= 2 else CriticalData((), ())
    t0 = _base_radius(crit.critical_values)
    tr = _Tracker(f, crit.critical_values, backend)
    start = tr.roots_at(t0)
    if m == 1:
        return Labeling(f, t0, start, crit, backend)
    circle = [_Arc(0.0, t0, 0.0, 2 * math.pi)]
    end = tr.track(circle, start)
    perm = _perm_from_positions(start, end)
    # perm[k] = index of the base root that root k moved to
    first = _anchor_index(f, t0, start, tr)
    order = [first]
    for _ in range(m - 1):
        order.append(perm[order[-1]])
    if len(set(order)) != m or perm[order[-1]] != first:
        raise NumericFailure("loop around infinity is not a single m-cycle")
    return Labeling(f, t0, start[order], crit, backend)


@lru_cache(maxsize=256)
def _labeling_cached(f: Poly, backend: str) -> Labeling:
    return _labeling(f, backend)


def base_labeling(f: Poly, backend: str | None = None) -> Labeling:
    """Canonical labeling; escalates to mpmath root finding on numeric trouble."""
    if backend is not None:
        return _labeling_cached(f, backend)
    try:
        return _labeling_cached(f, "numpy")
    except DegenerateGeometry:
        raise
    except NumericFailure:
        return _labeling_cached(f, "mp")


def _loop_radius(v: complex, values: Sequence[complex], t0: float) -> float:
    others = [abs(v - w) for w in values if w != v]
    gap = min(others) if others else math.inf
    return min(gap / 3.0, 0.1 * abs(v - t0))


def _order_key(v: complex, t0: float):
    return (_angle(v - t0), abs(v - t0))


def ordered_critical_values(lab: Labeling) -> list[complex]:
    return sorted(lab.crit.critical_values, key=lambda v: _order_key(v, lab.t0))


def _outgoing(lab: Labeling, v: complex) -> tuple[list, complex, float]:
    """Path from t0 to the small circle around v, detouring round other disks."""
    t0 = complex(lab.t0)
    values = list(lab.crit.critical_values)
    r = _loop_radius(v, values, lab.t0)
    u = (v - t0) / abs(v - t0)
    p = v - r * u
    total = abs(p - t0)
    key_v = _order_key(v, lab.t0)
    crossings = []
    for w in values:
        if w == v:
            continue
        rho = _loop_radius(w, values, lab.t0)
        rel = (w - t0) * u.conjugate()
        lam, delta = rel.real, abs(rel.imag)
        if delta >= rho:
            continue
        half = math.sqrt(rho * rho - delta * delta)
        if lam + half <= 0 or lam - half >= total:
            continue
        e1 = t0 + (lam - half) * u
        e2 = t0 + (lam + half) * u
        th1, th2 = _angle(e1 - w), _angle(e2 - w)
        if _order_key(w, lab.t0) < key_v:
            dth = -((th1 - th2) % (2 * math.pi))  # clockwise, w stays on the right
        else:
            dth = (th2 - th1) % (2 * math.pi)
        crossings.append((lam - half, e1, _Arc(w, rho, th1, dth), e2))
    crossings.sort(key=lambda c: c[0])
    path = []
    cur = t0
    for _, e1, arc, e2 in crossings:
        path.append(_Segment(cur, e1))
        path.append(arc)
        cur = e2
    path.append(_Segment(cur, p))
    return path, p, r


def loop_path(lab: Labeling, v: complex) -> list:
    out, p, r = _outgoing(lab, v)
    circle = _Arc(v, r, _angle(p - v), 2 * math.pi)
    return out + [circle] + _reverse_path(out)


def _loop_perm(lab: Labeling, v: complex, reverse: bool) -> Permutation:
    path = loop_path(lab, v)
    if reverse:
        path = _reverse_path(path)
    tr = _Tracker(lab.f, lab.crit.critical_values, lab.backend)
    end = tr.track(path, lab.roots)
    idx = _perm_from_positions(lab.roots, end)
    return Permutation(tuple(i + 1 for i in idx))


def _nearest_value(lab: Labeling, v: complex) -> complex:
    vals = lab.crit.critical_values
    k = int(np.argmin([abs(v - w) for w in vals]))
    if abs(vals[k] - v) > 1e-6 * (1 + abs(v)):
        raise ValueError(f"{v} is not a critical value")
    return vals[k]


def loop_permutation(f: Poly, labeling: Labeling | None, critical_value: complex,
                     reverse: bool = False) -> Permutation:
    lab = labeling or base_labeling(f)
    v = _nearest_value(lab, complex(critical_value))
    try:
        return _loop_perm(lab, v, reverse)
    except DegenerateGeometry:
        raise
    except NumericFailure:
        if lab.backend == "mp":
            raise
        return _loop_perm(base_labeling(f, "mp"), v, reverse)


@dataclass
class MonodromyData:
    labeling: Labeling
    values: list          # critical values in loop order
    generators: list      # one Permutation per value, same order
    infinity_ok: bool

    def group(self, element_cap: int = DEFAULT_ELEMENT_CAP) -> PermGroup:
        return PermGroup(self.labeling.m, list(self.generators), element_cap)

    def to_json(self) -> dict:
        return {
            "base_point": f"{self.labeling.t0:.12e}",
            "critical_values": [_cstr(v) for v in self.values],
            "generators": [list(g.images) for g in self.generators],
            "infinity_check": self.infinity_ok,
        }


def _monodromy(f: Poly) -> MonodromyData:
    lab = base_labeling(f)
    values = ordered_critical_values(lab)
    gens = [loop_permutation(f, lab, v) for v in values]
    ok = compose_in_order(gens) == Permutation.long_cycle(f.degree)
    if not ok and lab.backend == "numpy":
        lab = base_labeling(f, "mp")
        gens = [loop_permutation(f, lab, v) for v in values]
        ok = compose_in_order(gens) == Permutation.long_cycle(f.degree)
    if not ok:
        raise NumericFailure("loop permutations do not multiply to the loop at infinity")
    return MonodromyData(lab, values, gens, ok)


@lru_cache(maxsize=256)
def monodromy(f: Poly) -> MonodromyData:
    return _monodromy(f)


def monodromy_generators(f: Poly, element_cap: int = DEFAULT_ELEMENT_CAP) -> PermGroup:
    if f.degree < 2:
        raise ValueError("monodromy needs degree >= 2")
    return monodromy(f).group(element_cap)


# ---------------------------------------------------------------------------
# transport to other base points (used by the oracle)

def roots_along_ray(lab: Labeling, targets: Sequence[float]) -> list[np.ndarray]:
    """Labeled roots at real targets >= t0, transported along the real axis."""
    tr = _Tracker(lab.f, lab.crit.critical_values, lab.backend)
    out = []
    cur_t = complex(lab.t0)
    cur = lab.roots
    for t in sorted(targets):
        if t < lab.t0:
            raise ValueError("transport targets must lie right of the base point")
        cur = tr.track([_Segment(cur_t, complex(t))], cur)
        cur_t = complex(t)
        out.append(cur)
    order = np.argsort(np.argsort(targets, kind="stable"), kind="stable")
    return [out[k] for k in order]
