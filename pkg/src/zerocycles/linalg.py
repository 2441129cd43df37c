"""Exact linear algebra over Q or Q(i).

Matrices are lists of rows.  Entries may be ints, Fractions or GRat; the
routines only use field operations, so whatever goes in comes out.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    mat = [[Fraction(x) if isinstance(x, int) else x for x in r] for r in rows]
    if not mat:
        return [], []
    if ncols is None:
        ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        piv = mat[r][c]
        mat[r] = [x / piv if x else x for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                fac = mat[i][c]
                mat[i] = [a - fac * b if b else a for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int, one=Fraction(1), zero=Fraction(0)) -> list[list]:
    """Basis of {x : A x = 0}; one basis vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for row, pc in zip(red, pivots):
            if row[fc]:
                v[pc] = -row[fc]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int, zero=Fraction(0)):
    """One solution of A x = b, or None when the system is inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


class IncrementalSpan:
    """Grow a span one vector at a time, keeping an echelon basis for membership tests."""

    def __init__(self, dim: int):
        self.dim = dim
        self.echelon: list[tuple[int, list]] = []  # (pivot, normalized row)
        self.vectors: list[list] = []

    def reduce(self, v: Sequence) -> list:
        w = [Fraction(x) if isinstance(x, int) else x for x in v]
        for piv, row in self.echelon:
            if w[piv]:
                c = w[piv]
                w = [a - c * b if b else a for a, b in zip(w, row)]
        return w

    def add(self, v: Sequence) -> bool:
        """Add v; returns True when the span grew."""
        w = self.reduce(v)
        for i, x in enumerate(w):
            if x:
                w = [y / x if y else y for y in w]
                self.echelon.append((i, w))
                self.vectors.append(list(v))
                return True
        return False

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def __len__(self):
        return len(self.vectors)
