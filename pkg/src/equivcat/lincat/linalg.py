"""Exact dense linear algebra over a :class:`Field`.

Matrices are lists of rows, vectors are sequences.  Nothing here touches
floating point.
"""
from __future__ import annotations

from typing import Sequence

from .field import Field


def zeros(F: Field, rows: int, cols: int) -> list[list]:
    return [[F.zero] * cols for _ in range(rows)]


def identity(F: Field, n: int) -> list[list]:
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def from_columns(columns: Sequence[Sequence], nrows: int) -> list[list]:
    if not columns:
        return [[] for _ in range(nrows)]
    return [[col[i] for col in columns] for i in range(nrows)]


def matmul(F: Field, A, B) -> list[list]:
    if not A:
        return []
    inner = len(B)
    ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * ncols
        for k in range(inner):
            a = row[k]
            if a:
                Bk = B[k]
                for j in range(ncols):
                    if Bk[j]:
                        acc[j] += a * Bk[j]
        out.append(_reduced(F, acc))
    return out


def _reduced(F: Field, xs) -> list:
    p = F.p
    return [x % p for x in xs] if p else list(xs)


def matvec(F: Field, A, v) -> list:
    out = []
    for row in A:
        s = 0
        for a, x in zip(row, v):
            if a and x:
                s += a * x
        out.append(s)
    return _reduced(F, out)


def vadd(F: Field, u, v) -> list:
    p = F.p
    return [(a + b) % p for a, b in zip(u, v)] if p else [a + b for a, b in zip(u, v)]


def vsub(F: Field, u, v) -> list:
    p = F.p
    return [(a - b) % p for a, b in zip(u, v)] if p else [a - b for a, b in zip(u, v)]


def vscale(F: Field, c, v) -> list:
    p = F.p
    return [(c * a) % p for a in v] if p else [c * a for a in v]


def lincomb(F: Field, coeffs, vectors, length: int) -> list:
    acc = [0] * length
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                if a:
                    acc[i] += c * a
    return _reduced(F, acc)


def rref(F: Field, A) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in A]
    if not M:
        return M, []
    nrows, ncols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = vscale(F, inv, M[r])
        Mr = M[r]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = vsub(F, M[i], [f * b for b in Mr])
        pivots.append(c)
        r += 1
    return M, pivots


def rank(F: Field, A) -> int:
    return len(rref(F, A)[1])


def nullspace(F: Field, A, ncols: int | None = None) -> list[list]:
    """Basis of {x : A x = 0}; ``ncols`` is needed when A has no rows."""
    if not A:
        n = ncols or 0
        return [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    n = len(A[0])
    R, pivots = rref(F, A)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fc in free:
        x = [F.zero] * n
        x[fc] = F.one
        for r, pc in enumerate(pivots):
            x[pc] = F.neg(R[r][fc])
        basis.append(x)
    return basis


def solve_affine(F: Field, A, b, ncols: int | None = None):
    """All solutions of A x = b as ``(particular, null_basis)``, or None."""
    if not A:
        n = ncols or 0
        return [F.zero] * n, nullspace(F, A, n)
    n = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(F, aug)
    if n in pivots:
        return None
    x = [F.zero] * n
    for r, pc in enumerate(pivots):
        x[pc] = R[r][n]
    return x, nullspace(F, A, n)


def solve(F: Field, A, b, ncols: int | None = None):
    sol = solve_affine(F, A, b, ncols)
    return None if sol is None else sol[0]


def inverse(F: Field, A):
    n = len(A)
    if n == 0:
        return []
    aug = [list(row) + idrow for row, idrow in zip(A, identity(F, n))]
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in R]


def independent_subset(F: Field, vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    if not vectors:
        return []
    _, pivots = rref(F, from_columns(vectors, len(vectors[0])))
    return pivots


class Subspace:
    """A subspace of F^n with a fixed ordered basis and a coordinate map."""

    def __init__(self, F: Field, basis: Sequence[Sequence], ambient_dim: int):
        self.F = F
        self.basis = [list(v) for v in basis]
        self.ambient_dim = ambient_dim
        k = len(self.basis)
        if k:
            # independent rows of the basis matrix give a square invertible block
            _, rows = rref(F, self.basis)
            if len(rows) != k:
                raise ValueError("subspace basis is not linearly independent")
            block = [[v[r] for v in self.basis] for r in rows]
            self._rows = rows
            self._block_inv = inverse(F, block)
        else:
            self._rows = []
            self._block_inv = []

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, v: Sequence, check: bool = True) -> list | None:
        """Coordinates of v in the basis, or None if v is outside the span."""
        F = self.F
        if not self.basis:
            return [] if not check or all(x == 0 for x in v) else None
        c = matvec(F, self._block_inv, [v[r] for r in self._rows])
        if check and lincomb(F, c, self.basis, self.ambient_dim) != [F.reduce(x) for x in v]:
            return None
        return c

    def contains(self, v: Sequence) -> bool:
        return self.coords(v) is not None

    def vector(self, coords: Sequence) -> list:
        return lincomb(self.F, coords, self.basis, self.ambient_dim)
