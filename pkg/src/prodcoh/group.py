"""Finite groups, the group algebra kG, free kG-modules and kG-linear maps.

Element orderings of the presets (identity is always index 0):

  Cn          index a stands for t^a
  products    mixed radix, first factor varies fastest: (a0, a1, ...) -> a0 + n0*a1 + ...
  Q8          index u + 4*s for (+/-)^s times u in (1, i, j, k)
  D8          index a + 4*b for r^a s^b  (r of order 4, s a reflection)

Modules come in two flavours.  A `PermModule` has a basis permuted by G
(free modules kG^r, tensor products of those, the trivial module k); a
`RepModule` carries one action matrix per group element.  Free permutation
modules know their orbit structure, which is what lets a kG-linear map be
stored by the images of its generators.
"""

from __future__ import annotations

import json
import re
from functools import cached_property

import numpy as np

from . import linalg
from .errors import (
    Mismatch,
    NoIdentity,
    NonAssociative,
    NotGStable,
    NotLatinSquare,
    UnknownPreset,
)
from .field import Field


class Group:
    """A finite group given by its multiplication table, identity at index 0."""

    def __init__(self, table, name: str | None = None, check_assoc: bool = True):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise NotLatinSquare("table must be square")
        n = table.shape[0]
        if n == 0:
            raise NotLatinSquare("empty table")
        if table.min() < 0 or table.max() >= n:
            raise NotLatinSquare("entries out of range")
        full = np.arange(n)
        for i in range(n):
            if not np.array_equal(np.sort(table[i]), full):
                raise NotLatinSquare(f"row {i} repeats an entry")
            if not np.array_equal(np.sort(table[:, i]), full):
                raise NotLatinSquare(f"column {i} repeats an entry")
        if not (np.array_equal(table[0], full) and np.array_equal(table[:, 0], full)):
            raise NoIdentity("index 0 must be a two-sided identity")
        if check_assoc and n <= 64:
            # (ab)c == a(bc) for all triples, vectorised over b, c
            for a in range(n):
                left = table[table[a][:, None], full[None, :]]
                right = table[a][table]
                if not np.array_equal(left, right):
                    raise NonAssociative(f"associativity fails with first factor {a}")
        self.table = table
        self.order = n
        self.name = name or f"G{n}"
        self.inv = np.argmin(table, axis=1)  # table[g, inv[g]] == 0
        assert np.all(table[full, self.inv] == 0)

    def mul(self, a, b):
        return self.table[a, b]

    def element_order(self, g: int) -> int:
        x, k = g, 1
        while x != 0:
            x = self.table[x, g]
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce([self.element_order(g) for g in range(self.order)]))

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def __repr__(self):
        return f"Group({self.name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, Group) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())


def group_from_table(table, name=None) -> Group:
    return Group(table, name)


def load_group_file(path) -> Group:
    """Read {"order": n, "table": [[...]]} from a JSON file."""
    with open(path) as fh:
        data = json.load(fh)
    table = data["table"]
    if int(data.get("order", len(table))) != len(table):
        raise NotLatinSquare("declared order does not match the table")
    return Group(table, name=str(path))


# ---------------------------------------------------------------- presets


def _cyclic(n):
    a = np.arange(n)
    return (a[:, None] + a[None, :]) % n


def _product(t1, t2):
    n1, n2 = len(t1), len(t2)
    idx = np.arange(n1 * n2)
    a, b = idx % n1, idx // n1
    return t1[a[:, None], a[None, :]] + n1 * t2[b[:, None], b[None, :]]


def _quaternion():
    # unit products in (1, i, j, k) as (unit, sign)
    prod = {
        (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
        (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
        (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
        (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
    }
    t = np.zeros((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            u, s = prod[(x % 4, y % 4)]
            t[x, y] = u + 4 * ((s + x // 4 + y // 4) % 2)
    return t


def _dihedral8():
    t = np.zeros((8, 8), dtype=np.int64)
    for x in range(8):
        a, b = x % 4, x // 4
        for y in range(8):
            c, d = y % 4, y // 4
            t[x, y] = (a + (c if b == 0 else -c)) % 4 + 4 * ((b + d) % 2)
    return t


PRESETS = ("C2", "C3", "C4", "C8", "C2xC2", "C2xC2xC2", "Q8", "D8")
_CYC = re.compile(r"^C(\d+)$")


def preset_group(name: str) -> Group:
    """Named preset; besides the documented list any product of cyclic
    factors written like "C3xC3" is accepted."""
    key = name.strip()
    if key == "Q8":
        return Group(_quaternion(), "Q8")
    if key == "D8":
        return Group(_dihedral8(), "D8")
    parts = key.split("x")
    tables = []
    for part in parts:
        m = _CYC.match(part)
        if not m or int(m.group(1)) < 1 or int(m.group(1)) > 64:
            raise UnknownPreset(name)
        tables.append(_cyclic(int(m.group(1))))
    table = tables[0]
    for t in tables[1:]:
        table = _product(table, t)
    if len(table) > 64:
        raise UnknownPreset(f"{name}: order exceeds 64")
    return Group(table, key)


# ---------------------------------------------------------------- group algebra


class AlgebraElem:
    """Element of kG as a coefficient vector indexed by group elements."""

    def __init__(self, G: Group, F: Field, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (G.order,):
            raise Mismatch(f"need {G.order} coefficients")
        self.G, self.F, self.coeffs = G, F, coeffs

    @classmethod
    def basis(cls, G, F, g, c=1):
        v = np.zeros(G.order, dtype=np.int64)
        v[g] = c
        return cls(G, F, v)

    def _check(self, other):
        if self.G != other.G or self.F != other.F:
            raise Mismatch("group or field differs")

    def __add__(self, other):
        self._check(other)
        return AlgebraElem(self.G, self.F, self.F.add(self.coeffs, other.coeffs))

    def __mul__(self, other):
        return algebra_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, AlgebraElem) and np.array_equal(self.coeffs, other.coeffs)

    def is_zero(self):
        return not self.coeffs.any()

    def __repr__(self):
        terms = [f"{self.F.format(c)}*g{g}" for g, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


def algebra_mul(a: AlgebraElem, b: AlgebraElem) -> AlgebraElem:
    a._check(b)
    G, F = a.G, a.F
    out = np.zeros(G.order, dtype=np.int64)
    for h in np.flatnonzero(a.coeffs):
        # h * h' lands at table[h, h']
        contrib = np.zeros(G.order, dtype=np.int64)
        contrib[G.table[h]] = F.mul(b.coeffs, int(a.coeffs[h]))
        out = F.add(out, contrib)
    return AlgebraElem(G, F, out)


def regular_matrix(a: AlgebraElem) -> np.ndarray:
    """Matrix of left multiplication by a on kG (basis = group elements)."""
    G = a.G
    M = np.zeros((G.order, G.order), dtype=np.int64)
    for g in np.flatnonzero(a.coeffs):
        # column h gets a(g) at row g*h
        M[G.table[g], np.arange(G.order)] = a.F.add(M[G.table[g], np.arange(G.order)], int(a.coeffs[g]))
    return M


class FreeMap:
    """kG-linear map kG^src -> kG^dst.

    entries[i, j] is the coefficient vector (over G) of e_i in f(e_j), where
    a coefficient a acts on e_i by left multiplication.
    """

    def __init__(self, G: Group, F: Field, entries):
        entries = np.asarray(entries, dtype=np.int64)
        if entries.ndim != 3 or entries.shape[2] != G.order:
            raise Mismatch("entries must have shape (dst, src, |G|)")
        self.G, self.F, self.entries = G, F, entries
        self.dst_rank, self.src_rank = entries.shape[:2]

    @classmethod
    def identity(cls, G, F, r):
        e = np.zeros((r, r, G.order), dtype=np.int64)
        e[np.arange(r), np.arange(r), 0] = 1
        return cls(G, F, e)

    @classmethod
    def zero(cls, G, F, dst, src):
        return cls(G, F, np.zeros((dst, src, G.order), dtype=np.int64))

    def entry(self, i, j) -> AlgebraElem:
        return AlgebraElem(self.G, self.F, self.entries[i, j])

    def compose(self, first: "FreeMap") -> "FreeMap":
        """self o first."""
        if first.G != self.G or first.F != self.F:
            raise Mismatch("group or field differs")
        if first.dst_rank != self.src_rank:
            raise Mismatch(f"cannot compose rank {first.dst_rank} into rank {self.src_rank}")
        out = np.zeros((self.dst_rank, first.src_rank, self.G.order), dtype=np.int64)
        for l in range(self.dst_rank):
            for j in range(first.src_rank):
                acc = AlgebraElem(self.G, self.F, out[l, j])
                for i in range(self.src_rank):
                    acc = acc + first.entry(i, j) * self.entry(l, i)
                out[l, j] = acc.coeffs
        return FreeMap(self.G, self.F, out)

    def __matmul__(self, other):
        return self.compose(other)

    @classmethod
    def from_k(cls, G, F, M, dst_rank, src_rank):
        """Inverse of freemap_to_k for a kG-linear matrix (reads generator columns)."""
        n = G.order
        M = np.asarray(M, dtype=np.int64)
        e = np.zeros((dst_rank, src_rank, n), dtype=np.int64)
        for j in range(src_rank):
            col = M[:, j * n]
            e[:, j, :] = col.reshape(dst_rank, n)
        return cls(G, F, e)


def freemap_to_k(f: FreeMap) -> np.ndarray:
    """Expand a FreeMap through the regular representation.

    Basis index j*|G| + h stands for h*e_j; the result has shape
    (dst_rank*|G|, src_rank*|G|).
    """
    G, F = f.G, f.F
    n = G.order
    M = np.zeros((f.dst_rank * n, f.src_rank * n), dtype=np.int64)
    hs = np.arange(n)
    for i in range(f.dst_rank):
        for j in range(f.src_rank):
            for g in np.flatnonzero(f.entries[i, j]):
                c = int(f.entries[i, j, g])
                rows = i * n + G.table[hs, g]
                cols = j * n + hs
                M[rows, cols] = F.add(M[rows, cols], c)
    return M


# ---------------------------------------------------------------- modules


class PermModule:
    """k-span of a G-set; perm[g, x] is the index of g.x."""

    def __init__(self, G: Group, perm):
        self.G = G
        self.perm = np.asarray(perm, dtype=np.int64).reshape(G.order, -1)
        self.dim = self.perm.shape[1]

    @classmethod
    def free(cls, G, rank):
        n = G.order
        perm = np.zeros((n, rank * n), dtype=np.int64)
        for j in range(rank):
            perm[:, j * n:(j + 1) * n] = j * n + G.table
        return cls(G, perm)

    @classmethod
    def trivial(cls, G, dim=1):
        return cls(G, np.tile(np.arange(dim), (G.order, 1)))

    @cached_property
    def orbits(self):
        """(gens, orbit_gen, orbit_elt): x = orbit_elt[x] . gens[orbit_gen[x]].

        gens is the smallest index of each orbit, in increasing order; None
        if the action is not free.
        """
        n, d = self.G.order, self.dim
        orbit_gen = np.full(d, -1, dtype=np.int64)
        orbit_elt = np.zeros(d, dtype=np.int64)
        gens = []
        for x in range(d):
            if orbit_gen[x] >= 0:
                continue
            images = self.perm[:, x]
            if len(set(images.tolist())) != n:
                return None
            orbit_gen[images] = len(gens)
            orbit_elt[images] = np.arange(n)
            gens.append(x)
        return np.asarray(gens, dtype=np.int64), orbit_gen, orbit_elt

    @property
    def is_free(self):
        return self.orbits is not None

    @property
    def rank(self):
        return len(self.orbits[0])

    @property
    def gens(self):
        return self.orbits[0]

    @cached_property
    def by_elt(self):
        """For each g, the basis indices g.gen_t in generator order."""
        gens, og, oe = self.orbits
        return np.stack([self.perm[g, gens] for g in range(self.G.order)])

    def act(self, g, V, F=None):
        """rho(g) V for a matrix V whose rows are indexed by the basis."""
        out = np.empty_like(V)
        out[self.perm[g]] = V
        return out

    def matrix(self, g, F=None):
        M = np.zeros((self.dim, self.dim), dtype=np.int64)
        M[self.perm[g], np.arange(self.dim)] = 1
        return M

    def direct_sum(self, other: "PermModule") -> "PermModule":
        return PermModule(self.G, np.hstack([self.perm, other.perm + self.dim]))

    def tensor(self, other: "PermModule") -> "PermModule":
        """Diagonal action; index a*dim(other) + b."""
        p = self.perm[:, :, None] * other.dim + other.perm[:, None, :]
        return PermModule(self.G, p.reshape(self.G.order, -1))

    def __repr__(self):
        return f"PermModule(dim={self.dim})"


def perm_sum(G, mods):
    perms = []
    off = 0
    for M in mods:
        perms.append(M.perm + off)
        off += M.dim
    if not perms:
        return PermModule(G, np.zeros((G.order, 0), dtype=np.int64))
    return PermModule(G, np.hstack(perms))


class RepModule:
    """Module given by one action matrix per group element."""

    def __init__(self, G: Group, F: Field, mats, check: bool = True):
        self.G, self.F = G, F
        mats = np.asarray(mats, dtype=np.int64)
        if mats.ndim != 3 or mats.shape[0] != G.order or mats.shape[1] != mats.shape[2]:
            raise Mismatch("need one square action matrix per group element")
        self.mats = mats
        self.dim = mats.shape[1]
        if check:
            self.check()

    def check(self):
        F, G = self.F, self.G
        if self.dim == 0:
            return
        if not np.array_equal(self.mats[0], np.eye(self.dim, dtype=np.int64)):
            raise NotGStable("identity does not act trivially")
        for g in range(G.order):
            for h in range(G.order):
                if not np.array_equal(F.matmul(self.mats[g], self.mats[h]), self.mats[G.table[g, h]]):
                    raise NotGStable(f"action({g})*action({h}) != action({g}*{h})")

    @classmethod
    def from_perm(cls, P: PermModule, F: Field):
        return cls(P.G, F, np.stack([P.matrix(g) for g in range(P.G.order)]), check=False)

    @classmethod
    def trivial(cls, G, F, dim=1):
        return cls(G, F, np.tile(np.eye(dim, dtype=np.int64), (G.order, 1, 1)), check=False)

    def act(self, g, V, F=None):
        return self.F.matmul(self.mats[g], V)

    def matrix(self, g, F=None):
        return self.mats[g]

    def dual(self) -> "RepModule":
        inv = self.G.inv
        return RepModule(self.G, self.F, np.stack([self.mats[inv[g]].T for g in range(self.G.order)]), check=False)

    def tensor(self, other: "RepModule") -> "RepModule":
        F = self.F
        mats = []
        for g in range(self.G.order):
            A, B = self.mats[g], other.mats[g]
            mats.append(kron(F, A, B))
        return RepModule(self.G, F, np.stack(mats), check=False)

    def is_trivial(self):
        return all(np.array_equal(m, np.eye(self.dim, dtype=np.int64)) for m in self.mats)

    def __repr__(self):
        return f"RepModule(dim={self.dim})"


def as_rep(M, F) -> RepModule:
    return M if isinstance(M, RepModule) else RepModule.from_perm(M, F)


def kron(F: Field, A, B):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.size == 0 or B.size == 0:
        return np.zeros((A.shape[0] * B.shape[0], A.shape[1] * B.shape[1]), dtype=np.int64)
    if F.m == 1 or A.max() <= 1 or B.max() <= 1:
        return np.kron(A, B) % F.q if F.m == 1 else np.kron(A, B)
    out = F.mul(A[:, None, :, None], B[None, :, None, :])
    return out.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


# ---------------------------------------------------------------- kG-linear maps out of free modules


def expand(F: Field, src: PermModule, tgt, images) -> np.ndarray:
    """Full k-matrix of the kG-map sending generator t of `src` to images[:, t]."""
    images = np.asarray(images, dtype=np.int64)
    out = np.zeros((tgt.dim, src.dim), dtype=np.int64)
    if src.dim == 0 or tgt.dim == 0:
        return out
    cols = src.by_elt  # (n, rank)
    if isinstance(tgt, PermModule):
        for g in range(src.G.order):
            out[np.ix_(tgt.perm[g], cols[g])] = images
    else:
        for g in range(src.G.order):
            out[:, cols[g]] = F.matmul(tgt.mats[g], images)
    return out


def gen_images(src: PermModule, full) -> np.ndarray:
    return np.asarray(full)[:, src.gens]


def kg_apply_coeffs(F: Field, src: PermModule, tgt, w) -> list:
    """Linear dependence of X(w) on the generator images of a kG-map X: src -> tgt.

    Returns one (tgt.dim x tgt.dim) coefficient matrix per generator t so that
    X_full @ w = sum_t C_t @ X(gen_t).
    """
    w = np.asarray(w, dtype=np.int64)
    gens, og, oe = src.orbits
    blocks = [np.zeros((tgt.dim, tgt.dim), dtype=np.int64) for _ in gens]
    for x in np.flatnonzero(w):
        c = int(w[x])
        t, g = og[x], oe[x]
        blocks[t] = F.add(blocks[t], F.scale(c, tgt.matrix(g)))
    return blocks


def invariant_functional(src: PermModule, values) -> np.ndarray:
    """Row vector of the kG-map src -> k taking value values[t] on generator t."""
    gens, og, oe = src.orbits
    return np.asarray(values, dtype=np.int64)[og]


# ---------------------------------------------------------------- sub-modules


def _stable_basis(F, M, basis_cols):
    """Action matrices of M restricted to the column span of basis_cols."""
    G = M.G
    d = basis_cols.shape[1]
    mats = np.zeros((G.order, d, d), dtype=np.int64)
    for g in range(G.order):
        img = M.act(g, basis_cols) if isinstance(M, PermModule) else F.matmul(M.mats[g], basis_cols)
        X, ok = linalg.solve_many(F, basis_cols, img)
        if not ok.all():
            raise NotGStable(f"subspace not stable under element {g}")
        mats[g] = X
    return mats


def subspace_module(F: Field, M, basis_cols) -> RepModule:
    basis_cols = np.asarray(basis_cols, dtype=np.int64)
    return RepModule(M.G, F, _stable_basis(F, M, basis_cols), check=False)


def submodule_as_rep(f: FreeMap, which: str = "kernel"):
    """Kernel or image of a FreeMap as a RepModule plus its basis embedding (columns)."""
    F, G = f.F, f.G
    K = freemap_to_k(f)
    if which == "kernel":
        basis = linalg.kernel_basis(F, K).T
        ambient = PermModule.free(G, f.src_rank)
    elif which == "image":
        basis = linalg.row_basis(F, K.T)[0].T
        ambient = PermModule.free(G, f.dst_rank)
    else:
        raise ValueError("which must be 'kernel' or 'image'")
    if basis.size == 0:
        basis = np.zeros((ambient.dim, 0), dtype=np.int64)
    mod = RepModule(G, F, _stable_basis(F, ambient, basis), check=True)
    return mod, basis
