"""Dense exact linear algebra over a `Field`.

GF(2) matrices are bit-packed into uint64 words and reduced with word-level
XOR; every other field uses vectorised row operations on element codes.
Pivot choice is always the lowest-index nonzero entry, so reduced forms are
canonical and reproducible.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .field import Field


def _rref_gf2(M: np.ndarray):
    rows, cols = M.shape
    if rows == 0 or cols == 0:
        return M.copy(), []
    words = (cols + 63) // 64
    padded = np.zeros((rows, words * 64), dtype=np.uint8)
    padded[:, :cols] = M & 1
    P = np.packbits(padded, axis=1, bitorder="little").view(np.uint64).copy()
    pivots = []
    r = 0
    one = np.uint64(1)
    for c in range(cols):
        w = c // 64
        b = np.uint64(c % 64)
        bits = (P[r:, w] >> b) & one
        nz = np.flatnonzero(bits)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            P[[r, i]] = P[[i, r]]
        hit = ((P[:, w] >> b) & one).astype(bool)
        hit[r] = False
        if hit.any():
            P[hit, w:] ^= P[r, w:]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    out = np.unpackbits(P.view(np.uint8), axis=1, bitorder="little")[:, :cols]
    return out.astype(np.int64), pivots


def _rref_general(F: Field, M: np.ndarray):
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        piv = int(R[r, c])
        if piv != 1:
            R[r] = F.mul(R[r], int(F.inv(piv)))
        hit = np.flatnonzero(R[:, c])
        hit = hit[hit != r]
        if hit.size:
            factors = R[hit, c]
            if F.m == 1:
                R[hit] = (R[hit] - np.outer(factors, R[r])) % F.p
            else:
                R[hit] = F.sub(R[hit], F.mul(factors[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rref(F: Field, M):
    """Reduced row echelon form and the (strictly increasing) pivot columns."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise DimensionMismatch("rref expects a 2-d matrix")
    if F.q == 2:
        return _rref_gf2(M)
    return _rref_general(F, M)


def rank(F: Field, M) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def row_basis(F: Field, M):
    """Nonzero rows of rref(M): a canonical basis of the row space."""
    R, piv = rref(F, M)
    return R[: len(piv)], piv


def kernel_basis(F: Field, M):
    """Rows spanning the right null space {v : M v = 0}, in rref."""
    M = np.asarray(M, dtype=np.int64)
    rows, cols = M.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(F, M)
    free = [c for c in range(cols) if c not in set(piv)]
    K = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        K[k, f] = 1
        for i, pc in enumerate(piv):
            if R[i, f]:
                K[k, pc] = F.neg(int(R[i, f]))
    if K.shape[0] == 0:
        return K
    return rref(F, K)[0]


def solve_many(F: Field, A, B):
    """Solve A X = B column by column.

    Returns (X, ok) where ok[j] says whether column j of B lies in the image
    of A.  Unsolvable columns of X are zero.  Free variables are set to zero,
    so the answer is deterministic.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if B.ndim == 1:
        B = B[:, None]
    rows, cols = A.shape
    if B.shape[0] != rows:
        raise DimensionMismatch(f"A is {A.shape}, b has {B.shape[0]} rows")
    nrhs = B.shape[1]
    X = np.zeros((cols, nrhs), dtype=np.int64)
    if rows == 0:
        return X, np.ones(nrhs, dtype=bool)
    R, piv = rref(F, np.hstack([A, B]))
    bad_rows = []
    for i, pc in enumerate(piv):
        if pc >= cols:
            bad_rows.append(i)
        else:
            X[pc] = R[i, cols:]
    # rows with empty A-part are the consistency conditions
    ok = ~np.any(R[bad_rows, cols:] != 0, axis=0) if bad_rows else np.ones(nrhs, dtype=bool)
    X[:, ~ok] = 0
    return X, ok


def solve(F: Field, A, b):
    """Solution x of A x = b with zeros in free positions, or None."""
    b = np.asarray(b, dtype=np.int64)
    X, ok = solve_many(F, A, b.reshape(-1, 1))
    if not ok[0]:
        return None
    return X[:, 0]


def coords_mod_subspace(F: Field, v, S):
    """Reduce v modulo the row span of S (S in rref); zero iff v in span(S)."""
    v = np.array(v, dtype=np.int64, copy=True)
    S = np.asarray(S, dtype=np.int64)
    if S.size == 0:
        return v
    if S.shape[1] != v.shape[-1]:
        raise DimensionMismatch(f"vector of length {v.shape[-1]} vs subspace in {S.shape[1]}")
    for row in S:
        nz = np.flatnonzero(row)
        if nz.size == 0:
            continue
        pc = nz[0]
        c = v[..., pc]
        if np.any(c):
            v = F.sub(v, F.mul(np.asarray(c)[..., None], row))
    return v


class QuotientSpace:
    """Canonical coordinates on span(top) / span(sub) for row-vector spaces.

    `sub` rows span a subspace of `top`'s span.  A canonical basis of the
    quotient is formed by the rref rows of [sub; top] whose pivots are not
    pivots of sub.  `coords(v)` returns coordinates of v (assumed in top) in
    that basis.
    """

    def __init__(self, F: Field, top, sub, ambient: int):
        self.F = F
        self.ambient = ambient
        if ambient == 0:
            top = sub = np.zeros((0, 0), dtype=np.int64)
        else:
            top = np.asarray(top, dtype=np.int64).reshape(-1, ambient)
            sub = np.asarray(sub, dtype=np.int64).reshape(-1, ambient)
        self.sub, sub_piv = row_basis(F, sub) if sub.shape[0] else (sub[:0], [])
        self.sub_piv = list(sub_piv)
        # reduce top modulo sub, then row reduce the remainders
        reduced = coords_mod_subspace(F, top, self.sub) if top.shape[0] else top
        basis, piv = row_basis(F, reduced) if reduced.shape[0] else (reduced[:0], [])
        self.basis = basis
        self.piv = list(piv)
        self.dim = len(piv)

    def reduce(self, v):
        return coords_mod_subspace(self.F, v, self.sub)

    def coords(self, v):
        """Coordinates of v mod sub in the quotient basis (v must lie in top)."""
        F = self.F
        r = self.reduce(np.asarray(v, dtype=np.int64))
        single = r.ndim == 1
        r = r.reshape(-1, self.ambient)
        out = np.zeros((r.shape[0], self.dim), dtype=np.int64)
        for j, pc in enumerate(self.piv):
            c = r[:, pc].copy()
            out[:, j] = c
            if np.any(c):
                r = F.sub(r, F.mul(c[:, None], self.basis[j][None, :]))
        if np.any(r):
            raise ValueError("vector does not lie in the ambient subspace")
        return out[0] if single else out

    def lift(self, coords):
        coords = np.asarray(coords, dtype=np.int64)
        if self.dim == 0:
            return np.zeros(self.ambient, dtype=np.int64)
        return self.F.matmul(coords.reshape(1, -1), self.basis)[0]
