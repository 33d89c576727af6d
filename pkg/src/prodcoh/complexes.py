"""Chain complexes of kG-modules, graded maps between them, and contractions.

Sign conventions (fixed throughout):
  tensor differential   d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy
  Hom differential      D(f) = d f - (-1)^deg(f) f d
  shift                 (S^n C)_i = C_{i-n},  differential (-1)^n d
  cross product         (f x g)(x (x) y) = (-1)^(|x| deg g) f(x) (x) g(y)
  transposition         T(a (x) b) = (-1)^(|a||b|) b (x) a

A chain map C -> S^n D is stored as a degree -n map between the unshifted
complexes; it is a chain map exactly when D(f) = 0.

Graded maps are operators: `apply(i, Y)` sends a block of column vectors in
degree i of the source to degree i + deg of the target.  Large tensor
products are never expanded into dense differentials; everything acts
block by block.
"""

from __future__ import annotations

import json
import numpy as np

from . import linalg
from .errors import Mismatch, NotAChainMap, PreconditionViolated, TruncationUnderflow
from .field import Field
from .group import PermModule, RepModule, expand, kg_apply_coeffs, kron, perm_sum


def _sign(F: Field, s: int, Y):
    """(-1)^s * Y."""
    return F.neg(Y) if s % 2 else Y


def zero_module(G):
    return PermModule(G, np.zeros((G.order, 0), dtype=np.int64))


def gen_indicator(M: PermModule):
    E = np.zeros((M.dim, len(M.gens)), dtype=np.int64)
    E[M.gens, np.arange(len(M.gens))] = 1
    return E


# ====================================================================== complexes


class Complex:
    """Chain complex stored in degrees lo..hi; zero below lo, unknown above hi."""

    def __init__(self, F: Field, G, lo: int, hi: int):
        self.F, self.G, self.lo, self.hi = F, G, lo, hi
        self._mods = {}
        self._dense = {}

    def _module(self, i):
        raise NotImplementedError

    def _apply_d(self, i, Y):
        raise NotImplementedError

    def module(self, i):
        if i < self.lo:
            return zero_module(self.G)
        if i > self.hi:
            raise TruncationUnderflow(f"degree {i} beyond stored bound {self.hi}")
        if i not in self._mods:
            self._mods[i] = self._module(i)
        return self._mods[i]

    def dim(self, i) -> int:
        return self.module(i).dim

    def apply_d(self, i, Y):
        Y = np.asarray(Y, dtype=np.int64)
        if i <= self.lo:
            return np.zeros((0, Y.shape[1]), dtype=np.int64)
        return self._apply_d(i, Y)

    def d(self, i):
        """Dense matrix of d_i: C_i -> C_{i-1}."""
        if i not in self._dense:
            self._dense[i] = self.apply_d(i, np.eye(self.dim(i), dtype=np.int64))
        return self._dense[i]

    def ranks(self, hi=None):
        hi = self.hi if hi is None else hi
        out = []
        for i in range(self.lo, hi + 1):
            M = self.module(i)
            out.append(M.rank if M.dim and M.is_free else (0 if M.dim == 0 else None))
        return out

    def check(self, hi=None):
        """d o d = 0 through hi; raises NotAChainMap otherwise."""
        hi = self.hi if hi is None else hi
        for i in range(self.lo + 2, hi + 1):
            Y = np.eye(self.dim(i), dtype=np.int64)
            if np.any(self.apply_d(i - 1, self.apply_d(i, Y))):
                raise NotAChainMap(f"d^2 != 0 at degree {i}")
        return True


class DenseComplex(Complex):
    def __init__(self, F, G, modules: dict, diffs: dict, lo, hi, check=True):
        super().__init__(F, G, lo, hi)
        self.modules = modules
        self.diffs = diffs
        if check:
            self.check()

    def _module(self, i):
        return self.modules[i]

    def _apply_d(self, i, Y):
        return self.F.matmul(self.diffs[i], Y)

    def d(self, i):
        if self.lo < i <= self.hi:
            return self.diffs[i]
        return super().d(i)


class PointComplex(Complex):
    """A single module M (default k) in one degree, zero everywhere else."""

    def __init__(self, F, G, degree=0, M=None):
        super().__init__(F, G, degree, 1 << 30)
        self.degree = degree
        self.M = PermModule.trivial(G) if M is None else M

    def _module(self, i):
        return self.M if i == self.degree else zero_module(self.G)

    def _apply_d(self, i, Y):
        return np.zeros((self.dim(i - 1), Y.shape[1]), dtype=np.int64)


def point_complex(F, G, degree=0, M=None):
    return PointComplex(F, G, degree, M)


class ShiftComplex(Complex):
    def __init__(self, C: Complex, n: int):
        super().__init__(C.F, C.G, C.lo + n, C.hi + n)
        self.base, self.n = C, n

    def _module(self, i):
        return self.base.module(i - self.n)

    def _apply_d(self, i, Y):
        return _sign(self.F, self.n, self.base.apply_d(i - self.n, Y))


def shift(C: Complex, n: int) -> Complex:
    if n == 0:
        return C
    return ShiftComplex(C, n)


class TruncComplex(Complex):
    def __init__(self, C: Complex, k: int):
        super().__init__(C.F, C.G, max(C.lo, k), C.hi)
        self.base = C

    def _module(self, i):
        return self.base.module(i)

    def _apply_d(self, i, Y):
        return self.base.apply_d(i, Y)


def truncate(C: Complex, k: int) -> Complex:
    """Keep degrees >= k."""
    if k <= C.lo:
        return C
    return TruncComplex(C, k)


_TENSOR_CACHE = {}


class TensorComplex(Complex):
    """C (x) D with diagonal action; block (i, j) uses index a*dim(D_j) + b."""

    def __init__(self, C: Complex, D: Complex):
        if C.F != D.F or C.G != D.G:
            raise Mismatch("tensor factors over different groups or fields")
        hi = min(C.hi + D.lo, C.lo + D.hi)
        super().__init__(C.F, C.G, C.lo + D.lo, hi)
        self.left, self.right = C, D
        self._blocks = {}

    def blocks(self, deg):
        """List of (i, j, offset, dim C_i, dim D_j) making up degree deg."""
        if deg not in self._blocks:
            if deg > self.hi:
                raise TruncationUnderflow(f"tensor degree {deg} beyond {self.hi}")
            C, D = self.left, self.right
            out, off = [], 0
            for i in range(max(C.lo, deg - D.hi), min(C.hi, deg - D.lo) + 1):
                a, b = C.dim(i), D.dim(deg - i)
                if a * b:
                    out.append((i, deg - i, off, a, b))
                    off += a * b
            self._blocks[deg] = out
        return self._blocks[deg]

    def block_lookup(self, deg):
        return {(i, j): (off, a, b) for i, j, off, a, b in self.blocks(deg)}

    def _module(self, deg):
        C, D = self.left, self.right
        mods = [C.module(i).tensor(D.module(j)) for i, j, *_ in self.blocks(deg)]
        return perm_sum(self.G, mods)

    def _apply_d(self, deg, Y):
        F = self.F
        C, D = self.left, self.right
        k = Y.shape[1]
        out = np.zeros((self.dim(deg - 1), k), dtype=np.int64)
        tgt = self.block_lookup(deg - 1)
        for i, j, off, a, b in self.blocks(deg):
            Yb = Y[off:off + a * b].reshape(a, b * k)
            if (i - 1, j) in tgt:
                o2, a2, b2 = tgt[(i - 1, j)]
                Z = F.matmul(C.d(i), Yb).reshape(a2 * b2, k)
                out[o2:o2 + a2 * b2] = F.add(out[o2:o2 + a2 * b2], Z)
            if (i, j - 1) in tgt:
                o2, a2, b2 = tgt[(i, j - 1)]
                Z = _apply_right(F, D.d(j), Yb.reshape(a, b, k))
                Z = _sign(F, i, Z).reshape(a2 * b2, k)
                out[o2:o2 + a2 * b2] = F.add(out[o2:o2 + a2 * b2], Z)
        return out


def _apply_right(F, M, Y3):
    """Apply M along axis 1 of a (a, b, k) array."""
    a, b, k = Y3.shape
    Z = F.matmul(M, Y3.transpose(1, 0, 2).reshape(b, a * k))
    return Z.reshape(M.shape[0], a, k).transpose(1, 0, 2)


def tensor(C: Complex, D: Complex) -> TensorComplex:
    key = (id(C), id(D))
    hit = _TENSOR_CACHE.get(key)
    if hit is not None and hit[1] is C and hit[2] is D:
        return hit[0]
    T = TensorComplex(C, D)
    _TENSOR_CACHE[key] = (T, C, D)
    return T


class BlockComplex(Complex):
    """Direct sum of parts with an upper-triangular block differential.

    offdiag[(r, c)] is a degree -1 graded map from part c to part r; the
    diagonal blocks are the parts' own differentials.
    """

    def __init__(self, parts, offdiag=None, check=False):
        F, G = parts[0].F, parts[0].G
        lo = min(p.lo for p in parts)
        hi = min(p.hi for p in parts)
        super().__init__(F, G, lo, hi)
        self.parts = list(parts)
        self.offdiag = dict(offdiag or {})
        for (r, c), m in self.offdiag.items():
            if m.deg != -1:
                raise Mismatch("off-diagonal blocks must have degree -1")
        if check:
            self.check()

    def offsets(self, i):
        offs, o = [], 0
        for p in self.parts:
            d = p.dim(i)
            offs.append((o, d))
            o += d
        return offs

    def split(self, i, Y):
        return [Y[o:o + d] for o, d in self.offsets(i)]

    def _module(self, i):
        return perm_sum(self.G, [p.module(i) for p in self.parts])

    def _apply_d(self, i, Y):
        F = self.F
        pieces = self.split(i, Y)
        outs = []
        for r, p in enumerate(self.parts):
            acc = p.apply_d(i, pieces[r])
            for c in range(len(self.parts)):
                m = self.offdiag.get((r, c))
                if m is not None and pieces[c].shape[0]:
                    acc = F.add(acc, m.apply(i, pieces[c]))
            outs.append(acc)
        return np.vstack(outs) if outs else np.zeros((0, Y.shape[1]), dtype=np.int64)


def direct_sum(*parts):
    return BlockComplex(parts)


def extension_total(A: Complex, C: Complex, alpha: "GradedMap", check=True) -> BlockComplex:
    """Total complex with differential [[dA, alpha], [0, dC]]; alpha: C -> A of degree -1."""
    if alpha.src is not C or alpha.tgt is not A:
        raise Mismatch("alpha must map C to A")
    if check and not is_zero(hom_differential(alpha), lo=C.lo, hi=min(C.hi, A.hi + 1)):
        raise NotAChainMap("alpha fails -d alpha = alpha d")
    B = BlockComplex([A, C], {(0, 1): alpha})
    B.alpha = alpha
    return B


def extension_class(B: BlockComplex) -> "GradedMap":
    return B.offdiag[(0, 1)]


def dump(C: Complex, hi=None) -> str:
    """JSON with ranks and nonzero differential entries, for golden files."""
    hi = C.hi if hi is None else hi
    out = {"lo": C.lo, "hi": hi, "dims": [C.dim(i) for i in range(C.lo, hi + 1)], "diffs": {}}
    for i in range(C.lo + 1, hi + 1):
        D = C.d(i)
        rows, cols = np.nonzero(D)
        out["diffs"][str(i)] = [[int(r), int(c), int(D[r, c])] for r, c in zip(rows, cols)]
    return json.dumps(out, sort_keys=True)


# ====================================================================== graded maps


class GradedMap:
    def __init__(self, src: Complex, tgt: Complex, deg: int):
        self.src, self.tgt, self.deg = src, tgt, deg
        self.F = src.F

    def apply(self, i, Y):
        raise NotImplementedError

    def matrix(self, i):
        return self.apply(i, np.eye(self.src.dim(i), dtype=np.int64))

    def on_gens(self, i):
        return self.apply(i, gen_indicator(self.src.module(i)))

    def compose(self, first: "GradedMap") -> "GradedMap":
        return Composite(self, first)

    def __matmul__(self, other):
        return Composite(self, other)

    def __add__(self, other):
        return LinComb([(1, self), (1, other)])

    def __sub__(self, other):
        return LinComb([(1, self), (-1, other)])

    def __neg__(self):
        return LinComb([(-1, self)])

    def scale(self, c):
        return LinComb([(c, self)])

    def _zeros(self, i, k):
        j = i + self.deg
        d = self.tgt.dim(j) if j >= self.tgt.lo else 0
        return np.zeros((d, k), dtype=np.int64)


class DenseMap(GradedMap):
    """Explicit matrices comps[i]: src_i -> tgt_{i+deg}, valid for src degrees <= hi."""

    def __init__(self, src, tgt, deg, comps: dict, hi=None):
        super().__init__(src, tgt, deg)
        self.comps = comps
        self.hi = max(comps) if hi is None and comps else (src.lo - 1 if hi is None else hi)

    def apply(self, i, Y):
        Y = np.asarray(Y, dtype=np.int64)
        if i in self.comps:
            return self.F.matmul(self.comps[i], Y)
        if i < self.src.lo or i + self.deg < self.tgt.lo or i <= self.hi:
            return self._zeros(i, Y.shape[1])
        if isinstance(self.tgt, PointComplex) and i + self.deg != self.tgt.degree:
            return self._zeros(i, Y.shape[1])
        raise TruncationUnderflow(f"map known through degree {self.hi}, asked for {i}")

    def matrix(self, i):
        if i in self.comps:
            return self.comps[i]
        return super().matrix(i)


class Composite(GradedMap):
    def __init__(self, f, g):
        if g.tgt is not f.src:
            raise Mismatch("composition of non-matching maps")
        super().__init__(g.src, f.tgt, f.deg + g.deg)
        self.f, self.g = f, g

    def apply(self, i, Y):
        return self.f.apply(i + self.g.deg, self.g.apply(i, Y))


class LinComb(GradedMap):
    def __init__(self, terms):
        f0 = terms[0][1]
        for _, f in terms:
            if f.src is not f0.src or f.tgt is not f0.tgt or f.deg != f0.deg:
                raise Mismatch("linear combination of maps with different shapes")
        super().__init__(f0.src, f0.tgt, f0.deg)
        # coefficients are field codes, except -1 which means negation
        self.terms = [(int(c), f) for c, f in terms]

    def apply(self, i, Y):
        F = self.F
        acc = None
        for c, f in self.terms:
            Z = f.apply(i, Y)
            if c == -1:
                Z = F.neg(Z)
            elif c != 1:
                Z = F.scale(c, Z)
            acc = Z if acc is None else F.add(acc, Z)
        return acc


class Identity(GradedMap):
    def __init__(self, C):
        super().__init__(C, C, 0)

    def apply(self, i, Y):
        return np.asarray(Y, dtype=np.int64).copy()


class Reindex(GradedMap):
    """Identity matrices between complexes with the same modules, e.g. k (x) C -> C,
    or C -> S^-1 C viewed as a degree -1 map."""

    def __init__(self, src, tgt, deg=0):
        super().__init__(src, tgt, deg)

    def apply(self, i, Y):
        Y = np.asarray(Y, dtype=np.int64)
        if Y.shape[0] != self.tgt.dim(i + self.deg):
            raise Mismatch("reindexing between modules of different size")
        return Y.copy()


class Relabel(GradedMap):
    """The operator of f viewed between other complexes with the same modules."""

    def __init__(self, f: GradedMap, src, tgt, deg):
        super().__init__(src, tgt, deg)
        self.f = f

    def apply(self, i, Y):
        return self.f.apply(i, Y)


class ZeroMap(GradedMap):
    def apply(self, i, Y):
        return self._zeros(i, np.shape(Y)[1])


class Cross(GradedMap):
    """f x g on C (x) E -> D (x) H."""

    def __init__(self, f: GradedMap, g: GradedMap):
        super().__init__(tensor(f.src, g.src), tensor(f.tgt, g.tgt), f.deg + g.deg)
        self.f, self.g = f, g

    def apply(self, d, Y):
        F = self.F
        k = Y.shape[1]
        out = self._zeros(d, k)
        tgt = self.tgt.block_lookup(d + self.deg) if out.shape[0] else {}
        for i, j, off, a, b in self.src.blocks(d):
            i2, j2 = i + self.f.deg, j + self.g.deg
            if (i2, j2) not in tgt:
                continue
            o2, a2, b2 = tgt[(i2, j2)]
            Yb = Y[off:off + a * b].reshape(a, b * k)
            Z = self.f.apply(i, Yb).reshape(a2, b, k)
            Z = _apply_right_op(F, lambda M, j=j: self.g.apply(j, M), Z)
            Z = _sign(F, i * self.g.deg, Z).reshape(a2 * b2, k)
            out[o2:o2 + a2 * b2] = F.add(out[o2:o2 + a2 * b2], Z)
        return out


def cross(f, g):
    return Cross(f, g)


class Transposition(GradedMap):
    def __init__(self, C, D):
        super().__init__(tensor(C, D), tensor(D, C), 0)

    def apply(self, d, Y):
        F = self.F
        k = Y.shape[1]
        out = np.zeros((self.tgt.dim(d), k), dtype=np.int64)
        tgt = self.tgt.block_lookup(d)
        for i, j, off, a, b in self.src.blocks(d):
            o2, _, _ = tgt[(j, i)]
            Z = Y[off:off + a * b].reshape(a, b, k).transpose(1, 0, 2).reshape(a * b, k)
            out[o2:o2 + a * b] = _sign(F, i * j, Z)
        return out


def transposition(C, D):
    return Transposition(C, D)


class StackMap(GradedMap):
    """Map into a BlockComplex given by one map per target part (None = zero)."""

    def __init__(self, src, tgt: BlockComplex, rows, deg=None):
        deg = next(r.deg for r in rows if r is not None) if deg is None else deg
        super().__init__(src, tgt, deg)
        self.rows = rows

    def apply(self, i, Y):
        outs = []
        for r, part in enumerate(self.tgt.parts):
            m = self.rows[r]
            j = i + self.deg
            if m is None:
                outs.append(np.zeros((part.dim(j) if j >= part.lo else 0, Y.shape[1]), dtype=np.int64))
            else:
                outs.append(m.apply(i, Y))
        return np.vstack(outs)


class RowMap(GradedMap):
    """Map out of a BlockComplex given by one map per source part (None = zero)."""

    def __init__(self, src: BlockComplex, tgt, cols, deg=None):
        deg = next(c.deg for c in cols if c is not None) if deg is None else deg
        super().__init__(src, tgt, deg)
        self.cols = cols

    def apply(self, i, Y):
        F = self.F
        pieces = self.src.split(i, Y)
        acc = self._zeros(i, Y.shape[1])
        for c, m in enumerate(self.cols):
            if m is not None and pieces[c].shape[0]:
                acc = F.add(acc, m.apply(i, pieces[c]))
        return acc


def block_matrix(src: BlockComplex, tgt: BlockComplex, mat, deg=0):
    """Map between block complexes from a nested list mat[r][c] (None = zero)."""
    rows = []
    for r, part in enumerate(tgt.parts):
        cols = mat[r]
        if all(m is None for m in cols):
            rows.append(None)
        else:
            rows.append(RowMap(src, part, cols, deg))
    return StackMap(src, tgt, rows, deg)


def inclusion(B: BlockComplex, r: int):
    return StackMap(B.parts[r], B, [Identity(B.parts[r]) if k == r else None for k in range(len(B.parts))], 0)


def projection(B: BlockComplex, r: int):
    return RowMap(B, B.parts[r], [Identity(B.parts[r]) if k == r else None for k in range(len(B.parts))], 0)


class HomDifferential(GradedMap):
    def __init__(self, f: GradedMap):
        super().__init__(f.src, f.tgt, f.deg - 1)
        self.f = f

    def apply(self, i, Y):
        F, f = self.F, self.f
        out = f.tgt.apply_d(i + f.deg, f.apply(i, Y))
        if i > f.src.lo:
            back = f.apply(i - 1, f.src.apply_d(i, Y))
            out = F.add(out, _sign(F, f.deg + 1, back))
        return out


def hom_differential(f: GradedMap) -> GradedMap:
    return HomDifferential(f)


def homotopy_defect(f: GradedMap, lo=None, hi=None) -> dict:
    """Per-degree matrices of d f - (-1)^r f d."""
    D = HomDifferential(f)
    lo = f.src.lo if lo is None else lo
    hi = f.src.hi if hi is None else hi
    return {i: D.matrix(i) for i in range(lo, hi + 1)}


def is_zero(f: GradedMap, lo=None, hi=None) -> bool:
    lo = f.src.lo if lo is None else lo
    hi = f.src.hi if hi is None else hi
    for i in range(lo, hi + 1):
        if f.src.dim(i) == 0:
            continue
        if i + f.deg < f.tgt.lo:
            continue
        if np.any(f.matrix(i)):
            return False
    return True


def is_chain_map(f: GradedMap, lo=None, hi=None) -> bool:
    return is_zero(HomDifferential(f), lo, hi)


def maps_equal(f, g, lo=None, hi=None) -> bool:
    return is_zero(f - g, lo, hi)


# ====================================================================== contractions


class Contracted:
    """A complex C, bottom degree b, augmentation C_b -> M with section, and a
    k-linear contraction S with dS + Sd = 1 - sect.aug (the last term only at b)."""

    def __init__(self, cx: Complex, bottom: int, base, aug, sect):
        self.cx, self.bottom, self.base = cx, bottom, base
        self.aug = np.asarray(aug, dtype=np.int64)
        self.sect = np.asarray(sect, dtype=np.int64)
        self.F = cx.F

    def S(self, j, Y):
        raise NotImplementedError

    def pi(self, Y):
        return self.F.matmul(self.sect, self.F.matmul(self.aug, Y))

    def verify(self, hi=None):
        """Check aug.sect = 1, aug.d = 0 and dS + Sd = 1 - pi through hi."""
        F, C, b = self.F, self.cx, self.bottom
        hi = C.hi - 1 if hi is None else hi
        if not np.array_equal(F.matmul(self.aug, self.sect), np.eye(self.base.dim, dtype=np.int64)):
            return False
        if C.hi > b and np.any(F.matmul(self.aug, C.d(b + 1))):
            return False
        for j in range(b, hi + 1):
            I = np.eye(C.dim(j), dtype=np.int64)
            lhs = C.apply_d(j + 1, self.S(j, I))
            if j > b:
                lhs = F.add(lhs, self.S(j - 1, C.apply_d(j, I)))
            rhs = I if j > b else F.sub(I, self.pi(I))
            if not np.array_equal(lhs, rhs):
                return False
        return True


class DenseContracted(Contracted):
    def __init__(self, cx, bottom, base, aug, sect, s: dict):
        super().__init__(cx, bottom, base, aug, sect)
        self.s = s

    def S(self, j, Y):
        if j not in self.s:
            raise TruncationUnderflow(f"contraction known through degree {max(self.s)}")
        return self.F.matmul(self.s[j], Y)


class ShiftContracted(Contracted):
    def __init__(self, A: Contracted, n: int):
        super().__init__(shift(A.cx, n), A.bottom + n, A.base, A.aug, A.sect)
        self.inner, self.n = A, n

    def S(self, j, Y):
        return _sign(self.F, self.n, self.inner.S(j - self.n, Y))


def shift_contracted(A: Contracted, n: int) -> Contracted:
    return A if n == 0 else ShiftContracted(A, n)


class TensorContracted(Contracted):
    """S = s (x) 1 + (-1)^b pi (x) s on A (x) B."""

    def __init__(self, A: Contracted, B: Contracted):
        F = A.F
        cx = tensor(A.cx, B.cx)
        base = _tensor_base(F, A.base, B.base)
        super().__init__(cx, A.bottom + B.bottom, base, kron(F, A.aug, B.aug), kron(F, A.sect, B.sect))
        self.A, self.B = A, B

    def S(self, d, Y):
        F = self.F
        A, B = self.A, self.B
        k = Y.shape[1]
        out = np.zeros((self.cx.dim(d + 1), k), dtype=np.int64)
        tgt = self.cx.block_lookup(d + 1)
        for i, j, off, a, b in self.cx.blocks(d):
            Yb = Y[off:off + a * b].reshape(a, b * k)
            if (i + 1, j) in tgt:
                o2, a2, b2 = tgt[(i + 1, j)]
                Z = A.S(i, Yb).reshape(a2 * b2, k)
                out[o2:o2 + a2 * b2] = F.add(out[o2:o2 + a2 * b2], Z)
            if i == A.bottom and (i, j + 1) in tgt:
                o2, a2, b2 = tgt[(i, j + 1)]
                Z = A.pi(Yb).reshape(a, b, k)
                Z = _apply_right_op(F, lambda M: B.S(j, M), Z)
                Z = _sign(F, i, Z).reshape(a2 * b2, k)
                out[o2:o2 + a2 * b2] = F.add(out[o2:o2 + a2 * b2], Z)
        return out


def _apply_right_op(F, op, Y3):
    a, b, k = Y3.shape
    Z = op(Y3.transpose(1, 0, 2).reshape(b, a * k))
    return Z.reshape(Z.shape[0], a, k).transpose(1, 0, 2)


def _tensor_base(F, M, N):
    if isinstance(M, PermModule) and isinstance(N, PermModule):
        return M.tensor(N)
    from .group import as_rep

    return as_rep(M, F).tensor(as_rep(N, F))


def tensor_contracted(A: Contracted, B: Contracted) -> Contracted:
    return TensorContracted(A, B)


# ====================================================================== solving D(X) = R


def extend(src: Complex, tgt: Contracted, deg: int, rhs: GradedMap | None = None,
           bottom="zero", hi=None, check=True):
    """Solve D(X) = rhs for a degree-`deg` map X: src -> tgt.cx using the contraction.

    Works generator by generator: X_i(gen) = S(rhs_i(gen) + (-1)^deg X_{i-1}(d gen)).
    The component landing in the bottom degree of the target is free; it is
    either zero, prescribed (`bottom` = values in the base module on the
    generators) or, with bottom="solve", chosen so that the next step is
    unobstructed.  Returns None exactly when no solution exists.
    """
    F = src.F
    b = tgt.bottom
    hi = src.hi if hi is None else hi
    c = 1 if deg % 2 else -1  # X_{i-1} d enters the equation with this sign
    comps = {}
    for i in range(src.lo, hi + 1):
        j = i + deg
        Mi = src.module(i)
        if Mi.dim == 0 or j < b:
            comps[i] = np.zeros((tgt.cx.dim(j) if j >= tgt.cx.lo else 0, Mi.dim), dtype=np.int64)
            continue
        r = len(Mi.gens)
        if j == b:
            if isinstance(bottom, str) and bottom == "zero":
                vals = np.zeros((tgt.base.dim, r), dtype=np.int64)
            elif isinstance(bottom, str) and bottom == "solve":
                vals = _solve_bottom(src, tgt, i, rhs, c) if i + 1 <= hi else np.zeros((tgt.base.dim, r), dtype=np.int64)
                if vals is None:
                    return None
            else:
                vals = np.asarray(bottom, dtype=np.int64).reshape(tgt.base.dim, r)
            X = F.matmul(tgt.sect, vals)
        else:
            Y = rhs.on_gens(i) if rhs is not None else np.zeros((tgt.cx.dim(j - 1), r), dtype=np.int64)
            if i - 1 in comps and comps[i - 1].size:
                back = F.matmul(comps[i - 1], src.apply_d(i, gen_indicator(Mi)))
                Y = F.sub(Y, back) if c == 1 else F.add(Y, back)
            if j - 1 == b and np.any(F.matmul(tgt.aug, Y)):
                return None
            X = tgt.S(j - 1, Y)
            if check and not np.array_equal(tgt.cx.apply_d(j, X), Y):
                raise NotAChainMap(f"right-hand side is not a cycle at degree {i}")
        comps[i] = expand(F, Mi, tgt.cx.module(j), X)
    return DenseMap(src, tgt.cx, deg, comps, hi)


def _solve_bottom(src, tgt, i, rhs, c):
    """Base-module values on generators of src_i making aug(rhs - c X d) vanish."""
    F = src.F
    M = tgt.base
    dm = M.dim
    Mi, Mn = src.module(i), src.module(i + 1)
    r0, r1 = len(Mi.gens), len(Mn.gens)
    if r1 == 0:
        return np.zeros((dm, r0), dtype=np.int64)
    target = F.matmul(tgt.aug, rhs.on_gens(i + 1)) if rhs is not None else np.zeros((dm, r1), dtype=np.int64)
    if c == -1:
        target = F.neg(target)
    dgen = src.apply_d(i + 1, gen_indicator(Mn))
    A = np.zeros((dm * r1, dm * r0), dtype=np.int64)
    for t in range(r1):
        blocks = kg_apply_coeffs(F, Mi, M, dgen[:, t])
        for t2, Bk in enumerate(blocks):
            A[t * dm:(t + 1) * dm, t2 * dm:(t2 + 1) * dm] = Bk
    x = linalg.solve(F, A, target.T.reshape(-1))
    if x is None:
        return None
    return x.reshape(r0, dm).T


def bottom_cochain(src: Complex, tgt: Contracted, deg: int, rhs: GradedMap):
    """aug o rhs on generators in the first degree that reaches the target bottom."""
    i = tgt.bottom - deg + 1
    return i, tgt.F.matmul(tgt.aug, rhs.on_gens(i))


class LinearSystem:
    """Named blocks of unknowns and block equations, solved in one elimination."""

    def __init__(self, F: Field):
        self.F = F
        self.blocks = {}
        self.size = 0
        self.rows = []  # (coeff dict, rhs)

    def unknown(self, name, size):
        self.blocks[name] = (self.size, size)
        self.size += size

    def equation(self, coeffs: dict, rhs):
        rhs = np.asarray(rhs, dtype=np.int64).reshape(-1)
        self.rows.append((coeffs, rhs))

    def solve(self):
        F = self.F
        m = sum(len(r) for _, r in self.rows)
        A = np.zeros((m, self.size), dtype=np.int64)
        b = np.zeros(m, dtype=np.int64)
        o = 0
        for coeffs, rhs in self.rows:
            h = len(rhs)
            for name, C in coeffs.items():
                off, sz = self.blocks[name]
                A[o:o + h, off:off + sz] = F.add(A[o:o + h, off:off + sz], C)
            b[o:o + h] = rhs
            o += h
        if m == 0:
            return {name: np.zeros(sz, dtype=np.int64) for name, (off, sz) in self.blocks.items()}
        x = linalg.solve(F, A, b)
        if x is None:
            return None
        return {name: x[off:off + sz] for name, (off, sz) in self.blocks.items()}


def _map_unknowns(sys, tag, src, tgt, deg, lo, hi):
    for i in range(lo, hi + 1):
        j = i + deg
        if src.dim(i) == 0 or j < tgt.lo or j > tgt.hi or tgt.dim(j) == 0:
            continue
        sys.unknown((tag, i), tgt.dim(j) * len(src.module(i).gens))


def _value_coeffs(F, src, tgt, deg, tag, i, W, sys):
    """Coefficient blocks expressing X_i applied to the columns of W."""
    out = []
    if (tag, i) not in sys.blocks:
        return out
    Mi = src.module(i)
    T = tgt.module(i + deg)
    dt = T.dim
    for col in range(W.shape[1]):
        blocks = kg_apply_coeffs(F, Mi, T, W[:, col])
        out.append(np.hstack(blocks) if blocks else np.zeros((dt, 0), dtype=np.int64))
    return out


def _add_hom_equations(sys, F, src, tgt, deg, tag, lo, hi, rhs_of, extra=None):
    """Equations D(X)_i(gen) + extra = rhs for i in lo..hi."""
    c = -1 if deg % 2 == 0 else 1
    for i in range(lo, hi + 1):
        Mi = src.module(i)
        if Mi.dim == 0 or i + deg - 1 < tgt.lo:
            continue
        r = len(Mi.gens)
        dt = tgt.dim(i + deg - 1)
        if dt == 0:
            continue
        rhs = rhs_of(i)
        dgen = src.apply_d(i, gen_indicator(Mi)) if i > src.lo else np.zeros((0, r), dtype=np.int64)
        back = _value_coeffs(F, src, tgt, deg, tag, i - 1, dgen, sys) if dgen.shape[0] else []
        for t in range(r):
            coeffs = {}
            if (tag, i) in sys.blocks:
                dX = np.zeros((dt, sys.blocks[(tag, i)][1]), dtype=np.int64)
                Dm = tgt.d(i + deg)
                T = tgt.dim(i + deg)
                dX[:, t * T:(t + 1) * T] = Dm
                coeffs[(tag, i)] = dX
            if back:
                coeffs[(tag, i - 1)] = back[t] if c == 1 else F.neg(back[t])
            if extra is not None:
                for name, C in extra(i, t).items():
                    coeffs[name] = F.add(coeffs[name], C) if name in coeffs else C
            sys.equation(coeffs, rhs[:, t] if rhs is not None else np.zeros(dt, dtype=np.int64))


def _assemble(F, src, tgt, deg, tag, sol, lo, hi):
    comps = {}
    for i in range(lo, hi + 1):
        j = i + deg
        if (tag, i) in sol:
            T = tgt.module(j)
            vals = sol[(tag, i)].reshape(-1, T.dim).T
            comps[i] = expand(F, src.module(i), T, vals)
        else:
            comps[i] = np.zeros((tgt.dim(j) if tgt.lo <= j <= tgt.hi else 0, src.dim(i)), dtype=np.int64)
    return DenseMap(src, tgt, deg, comps, hi)


def solve_hom(src: Complex, tgt: Complex, deg: int, rhs: GradedMap | None, hi=None, lo=None):
    """Global solve of D(X) = rhs for src degrees lo..hi (one linear system)."""
    F = src.F
    lo = src.lo if lo is None else lo
    hi = src.hi if hi is None else hi
    sys = LinearSystem(F)
    _map_unknowns(sys, "X", src, tgt, deg, lo, hi)
    rhs_of = (lambda i: rhs.on_gens(i)) if rhs is not None else (lambda i: None)
    _add_hom_equations(sys, F, src, tgt, deg, "X", lo, hi, rhs_of)
    sol = sys.solve()
    if sol is None:
        return None
    return _assemble(F, src, tgt, deg, "X", sol, lo, hi)


def find_homotopy(f: GradedMap, g: GradedMap, through: int | None = None):
    """H of degree deg+1 with D(H) = f - g in source degrees <= through, or None."""
    if f.src is not g.src or f.tgt is not g.tgt or f.deg != g.deg:
        raise Mismatch("maps must share source, target and degree")
    hi = f.src.hi if through is None else through
    if hi > f.src.hi or hi + f.deg + 1 > f.tgt.hi:
        raise TruncationUnderflow("homotopy window exceeds stored degrees")
    return solve_hom(f.src, f.tgt, f.deg + 1, f - g, hi)


# ====================================================================== extensions


def lifting_obstruction(f: GradedMap, B: BlockComplex, contraction: Contracted | None = None, hi=None):
    """Lift f: D -> C through B = ext(A, C, alpha).

    Returns (True, lift) with lift = (H, f) and -dH + Hd = alpha f, or
    (False, certificate) where the certificate is the bottom cochain when a
    contraction of A is supplied, otherwise None.
    """
    A, C = B.parts
    alpha = extension_class(B)
    if f.tgt is not C:
        raise Mismatch("f must land in the quotient complex")
    af = Composite(alpha, f)
    rhs = -af
    hi = f.src.hi if hi is None else hi
    if contraction is not None:
        H = extend(f.src, contraction, f.deg, rhs, bottom="solve", hi=hi)
        if H is None:
            return False, bottom_cochain(f.src, contraction, f.deg, rhs)
    else:
        H = solve_hom(f.src, A, f.deg, rhs, hi)
        if H is None:
            return False, None
    return True, StackMap(f.src, B, [H, f], f.deg)


def extension_rotate(B: BlockComplex):
    """The complex A' = S^-1 C + A + C with j, q and H; dH + Hd = 1 - jq holds exactly."""
    A, C = B.parts
    alpha = extension_class(B)
    Cm = shift(C, -1)
    ident = Reindex(C, Cm, -1)
    Ap = BlockComplex([Cm, A, C], {(0, 2): ident, (1, 2): alpha})
    j = StackMap(A, Ap, [None, Identity(A), None], 0)
    q = RowMap(Ap, A, [-Composite(alpha, Reindex(Cm, C, 1)), Identity(A), None], 0)
    H = StackMap(Ap, Ap, [None, None, RowMap(Ap, C, [Reindex(Cm, C, 1), None, None], 1)], 1)
    return Ap, j, q, H


def factor_decision(phi: GradedMap, B: BlockComplex, hi=None):
    """Decide phi ~ [0, u alpha] for phi: B -> D with phi restricted to A zero.

    One joint linear system in (u, G): D(u) = 0 and D(G) + u alpha = phi_2.
    Returns (u, G) or None.
    """
    A, C = B.parts
    alpha = extension_class(B)
    Dt = phi.tgt
    F = phi.F
    hi = min(B.hi, phi.src.hi) if hi is None else hi
    phi1 = Composite(phi, inclusion(B, 0))
    if not is_zero(phi1, hi=hi):
        raise PreconditionViolated("phi does not vanish on the sub-complex")
    phi2 = Composite(phi, inclusion(B, 1))
    du = phi.deg + 1
    sys = LinearSystem(F)
    _map_unknowns(sys, "u", A, Dt, du, A.lo, hi)
    _map_unknowns(sys, "G", C, Dt, phi.deg + 1, C.lo, hi)
    _add_hom_equations(sys, F, A, Dt, du, "u", A.lo, hi, lambda i: None)

    cache = {}

    def u_alpha(i, t):
        if i not in cache:
            cache[i] = _value_coeffs(F, A, Dt, du, "u", i - 1, alpha.on_gens(i), sys)
        blocks = cache[i]
        return {("u", i - 1): blocks[t]} if blocks else {}

    _add_hom_equations(sys, F, C, Dt, phi.deg + 1, "G", C.lo, hi, lambda i: phi2.on_gens(i), extra=u_alpha)
    sol = sys.solve()
    if sol is None:
        return None
    u = _assemble(F, A, Dt, du, "u", sol, A.lo, hi)
    G = _assemble(F, C, Dt, phi.deg + 1, "G", sol, C.lo, hi)
    return u, G


def factor_reduce(phi2: GradedMap, H: GradedMap, alpha: GradedMap) -> GradedMap:
    """phi_2' = phi_2 - H alpha, for H a null-homotopy of phi_1."""
    return phi2 - Composite(H, alpha)


# ====================================================================== homology


def homology(C: Complex, i: int):
    """(dim, RepModule on H_i, cycle basis columns of the chosen section)."""
    from .group import as_rep

    F = C.F
    if i + 1 > C.hi:
        raise TruncationUnderflow(f"need degree {i + 1} to compute H_{i}")
    n = C.dim(i)
    Z = linalg.kernel_basis(F, C.d(i)) if i > C.lo else np.eye(n, dtype=np.int64)
    Bm = C.d(i + 1).T if C.dim(i + 1) else np.zeros((0, n), dtype=np.int64)
    qs = linalg.QuotientSpace(F, Z, Bm, n)
    basis = qs.basis.T if qs.dim else np.zeros((n, 0), dtype=np.int64)
    M = as_rep(C.module(i), F)
    mats = np.zeros((C.G.order, qs.dim, qs.dim), dtype=np.int64)
    for g in range(C.G.order):
        img = F.matmul(M.mats[g], basis).T if qs.dim else np.zeros((0, n), dtype=np.int64)
        mats[g] = qs.coords(img).T if qs.dim else mats[g]
    return qs.dim, RepModule(C.G, F, mats, check=False), basis
