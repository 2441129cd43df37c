"""0-chains of f, their characteristic polynomial, balancedness and projections.

A chain is an integer vector (n_1, ..., n_m) in the canonical labeling of
the roots of f(z) = t.  Group elements act on chains by (sigma . n)_i = n_sigma(i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, ShapeError
from .linalg import IncrementalSpan
from .monodromy import BlockSystem, PermGroup, residue_blocks
from .polycore import Poly, cyclotomic, divides, euler_phi


@dataclass(frozen=True)
class Chain:
    m: int
    coeffs: tuple

    def __init__(self, coeffs: Iterable[int], m: int | None = None):
        cs = tuple(coeffs)
        for c in cs:
            if isinstance(c, bool) or not isinstance(c, int):
                raise InputError(f"chain coefficients must be integers, got {c!r}")
        if m is not None and m != len(cs):
            raise ShapeError(f"chain has {len(cs)} coefficients, expected {m}")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "m", len(cs))

    @classmethod
    def zero(cls, m: int) -> "Chain":
        return cls([0] * m)

    def __getitem__(self, i: int) -> int:
        """1-based access, matching root labels."""
        return self.coeffs[i - 1]

    def total(self) -> int:
        return sum(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_constant(self) -> bool:
        return len(set(self.coeffs)) <= 1

    def act(self, images: Sequence[int]) -> "Chain":
        """(sigma . n)_i = n_sigma(i) for a 1-based image list."""
        return Chain(self.coeffs[j - 1] for j in images)

    def __neg__(self):
        return Chain(-c for c in self.coeffs)

    def __add__(self, other: "Chain") -> "Chain":
        if self.m != other.m:
            raise ShapeError("chains of different length")
        return Chain(a + b for a, b in zip(self.coeffs, other.coeffs))

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs, 1):
            if c:
                terms.append(f"{c:+d}*z{i}")
        return " ".join(terms) if terms else "0"


def is_cycle(C: Chain) -> bool:
    return C.total() == 0


def characteristic_poly(C: Chain) -> Poly:
    return Poly(C.coeffs)


@dataclass(frozen=True)
class OrbitSpan:
    basis: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)


def orbit_span(C: Chain, G: PermGroup) -> OrbitSpan:
    if G.degree != C.m:
        raise ShapeError("group degree and chain length differ")
    span = IncrementalSpan(C.m)
    queue = []
    start = [Fraction(c) for c in C.coeffs]
    if span.add(start):
        queue.append(start)
    while queue:
        v = queue.pop()
        for g in G.generators:
            w = [v[j - 1] for j in g.images]
            if span.add(w):
                queue.append(w)
    basis = tuple(tuple(v) for v in span.vectors)
    for b in basis:
        for g in G.generators:
            if [b[j - 1] for j in g.images] not in span:
                raise AssertionError("orbit span is not invariant")
    return OrbitSpan(basis)


def _vector_poly(v: Sequence) -> Poly:
    return Poly(v)


def is_balanced(C: Chain, G: PermGroup) -> bool:
    """Every group translate of C is orthogonal to (1, e, ..., e^(m-1)), e = exp(2 pi i/m).

    Checked exactly: Phi_m divides the polynomial of each orbit-span basis vector.
    """
    phi = cyclotomic(C.m)
    return all(divides(phi, _vector_poly(b)) for b in orbit_span(C, G).basis)


def _check_blocks(C: Chain, blocks: BlockSystem) -> None:
    cells = blocks.blocks
    if blocks.degree != C.m or sorted(x for b in cells for x in b) != list(range(1, C.m + 1)):
        raise ShapeError("block system does not partition the chain's labels")
    if len({len(b) for b in cells}) != 1:
        raise ShapeError("blocks have unequal sizes")


def _as_blocks(C: Chain, blocks) -> BlockSystem:
    if isinstance(blocks, int):
        if blocks < 1 or C.m % blocks:
            raise ShapeError(f"block size {blocks} does not divide {C.m}")
        return residue_blocks(C.m, blocks)
    _check_blocks(C, blocks)
    return blocks


def project(C: Chain, blocks) -> Chain:
    """Sum of coefficients over each block; blocks given as a system or a block size."""
    bs = _as_blocks(C, blocks)
    return Chain(sum(C[i] for i in b) for b in bs.blocks)


def invariant_parts(C: Chain, blocks) -> list[Chain]:
    """Restriction of C to each block, as a chain of the inner factor."""
    bs = _as_blocks(C, blocks)
    return [Chain(C[i] for i in b) for b in bs.blocks]


def reassemble_parts(parts: Sequence[Chain], blocks) -> Chain:
    m = sum(p.m for p in parts)
    bs = residue_blocks(m, parts[0].m) if isinstance(blocks, int) else blocks
    out = [0] * m
    for p, b in zip(parts, bs.blocks):
        for c, i in zip(p.coeffs, b):
            out[i - 1] += c
    return Chain(out)


@dataclass(frozen=True)
class Summand:
    divisor: int
    dimension: int
    indices: tuple

    def to_json(self) -> dict:
        return {"divisor": self.divisor, "dimension": self.dimension, "indices": list(self.indices)}


@dataclass(frozen=True)
class ModuleStructure:
    summands: tuple

    @property
    def indices(self) -> list[int]:
        return sorted(k for s in self.summands for k in s.indices)

    def to_json(self) -> list:
        return [s.to_json() for s in self.summands]


def module_structure(C: Chain, divisors_of_f: Iterable[int]) -> ModuleStructure:
    """Summands U_d (d in D(f)) that lie in the solution space of C."""
    m = C.m
    P = characteristic_poly(C)
    out = []
    for d in sorted(set(divisors_of_f)):
        if m % d:
            raise ShapeError(f"{d} does not divide {m}")
        if not divides(cyclotomic(d), P):
            continue
        idx = tuple(k for k in range(m) if math.gcd(m, k) == m // d)
        out.append(Summand(d, euler_phi(d), idx))
    return ModuleStructure(tuple(out))
