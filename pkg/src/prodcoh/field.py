"""Finite fields GF(p^m) with elements encoded as small integers.

An element c_0 + c_1 a + ... + c_{m-1} a^{m-1} (a a root of the defining
polynomial) is stored as the integer sum c_i p^i.  Matrices are plain numpy
int64 arrays of such codes; every arithmetic helper here is vectorised.
"""

from __future__ import annotations

import re
from functools import cached_property

import numpy as np

from .errors import NonPrime, ReduciblePolynomial, UnsupportedSize

MAX_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _polymod(a, b, p):
    """Remainder of a by monic b, coefficient lists low-to-high over GF(p)."""
    a = [c % p for c in a]
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        c = a[-1]
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a.pop()
    return a


def _monic_polys(p, d):
    for idx in range(p ** d):
        coeffs = []
        for _ in range(d):
            coeffs.append(idx % p)
            idx //= p
        yield coeffs + [1]


def is_irreducible(poly, p) -> bool:
    m = len(poly) - 1
    if m <= 1:
        return True
    for d in range(1, m // 2 + 1):
        for q in _monic_polys(p, d):
            if not any(_polymod(list(poly), q, p)):
                return False
    return True


class Field:
    """GF(p^m) with log/exp tables; `poly` is monic, low-to-high."""

    def __init__(self, p: int, m: int = 1, poly=None):
        if not is_prime(p):
            raise NonPrime(p)
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if p ** m > MAX_ORDER:
            raise UnsupportedSize(f"{p}^{m} exceeds 2^16")
        if m == 1:
            poly = (0, 1)
        else:
            if poly is None or len(poly) != m + 1:
                raise ValueError(f"need {m + 1} coefficients for a degree-{m} polynomial")
            poly = tuple(int(c) % p for c in poly)
            if poly[-1] != 1:
                raise ValueError("polynomial must be monic")
            if not is_irreducible(poly, p):
                raise ReduciblePolynomial(poly)
        self.p, self.m, self.poly = p, m, tuple(poly)
        self.q = p ** m
        self._build_tables()

    # -- construction -------------------------------------------------

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        self.powers = p ** np.arange(m, dtype=np.int64)
        codes = np.arange(q, dtype=np.int64)
        self.digits = (codes[:, None] // self.powers[None, :]) % p  # q x m
        # reduction of a^s for s < 2m-1 into the basis 1..a^{m-1}
        red = np.zeros((max(2 * m - 1, 1), m), dtype=np.int64)
        for s in range(2 * m - 1):
            vec = [0] * s + [1]
            r = _polymod(vec, list(self.poly), p) if m > 1 else [1]
            r = (r + [0] * m)[:m]
            red[s] = r
        self._red = red
        self.exp = np.zeros(2 * q, dtype=np.int64)
        self.log = np.zeros(q, dtype=np.int64)
        if q == 2:
            self.exp[:] = 1
            self.gen = 1
            return
        for g in range(2, q):
            x, order = 1, 0
            seen = np.zeros(q, dtype=bool)
            while not seen[x]:
                seen[x] = True
                order += 1
                x = self._slow_mul(x, g)
            if order == q - 1:
                break
        self.gen = g
        x = 1
        for k in range(q - 1):
            self.exp[k] = x
            self.log[x] = k
            x = self._slow_mul(x, g)
        self.exp[q - 1:2 * (q - 1)] = self.exp[:q - 1]

    def _slow_mul(self, a, b):
        da, db = self.digits[a], self.digits[b]
        prod = np.convolve(da, db) % self.p
        out = (prod[:, None] * self._red[:len(prod)]).sum(axis=0) % self.p
        return int(out @ self.powers)

    # -- scalar and vector arithmetic ------------------------------------

    @property
    def prime(self) -> bool:
        return self.m == 1

    def add(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        s = (self.digits[a] + self.digits[b]) % self.p
        return s @ self.powers

    def neg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        if self.p == 2:
            return np.asarray(a)
        return ((-self.digits[a]) % self.p) @ self.powers

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (np.asarray(a) * b) % self.p
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return np.asarray(pow_mod_inverse(a, self.p))
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def power(self, a: int, e: int) -> int:
        a = int(a)
        if a == 0:
            return 0 if e > 0 else 1
        if self.q == 2:
            return 1
        return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])

    def frobenius(self, a):
        """x -> x^p."""
        a = np.asarray(a)
        if self.m == 1:
            return a % self.p
        out = self.exp[(self.log[a] * self.p) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def from_int(self, n: int) -> int:
        return int(n) % self.p

    @cached_property
    def alpha(self) -> int:
        """Code of the adjoined root a; 1 in a prime field."""
        return self.p if self.m > 1 else 1

    # -- matrices ---------------------------------------------------------

    def zeros(self, *shape):
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] != B.shape[0]:
            from .errors import DimensionMismatch

            raise DimensionMismatch(f"{A.shape} @ {B.shape}")
        if A.size == 0 or B.size == 0:
            return np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
        p = self.p
        if self.m == 1:
            # float64 BLAS is exact while sums stay below 2^53
            C = A.astype(np.float64) @ B.astype(np.float64)
            return np.mod(C, p).astype(np.int64)
        m = self.m
        Ad = [self.digits[A, k].astype(np.float64) for k in range(m)]
        Bd = [self.digits[B, k].astype(np.float64) for k in range(m)]
        planes = []
        for s in range(2 * m - 1):
            acc = None
            for k in range(max(0, s - m + 1), min(s, m - 1) + 1):
                term = Ad[k] @ Bd[s - k]
                acc = term if acc is None else acc + term
            planes.append(np.mod(acc, p).astype(np.int64))
        out = np.zeros(planes[0].shape, dtype=np.int64)
        for t in range(m):
            coeff = np.zeros(planes[0].shape, dtype=np.int64)
            for s in range(2 * m - 1):
                if self._red[s, t]:
                    coeff += planes[s] * self._red[s, t]
            out += (coeff % p) * int(self.powers[t])
        return out

    def scale(self, c, A):
        return self.mul(np.asarray(A, dtype=np.int64), int(c))

    def axpy(self, c, X, Y):
        """c*X + Y."""
        return self.add(self.scale(c, X), Y)

    def lincomb(self, coeffs, mats):
        out = None
        for c, M in zip(coeffs, mats):
            c = int(c)
            if c == 0:
                continue
            term = self.scale(c, M)
            out = term if out is None else self.add(out, term)
        if out is None:
            return np.zeros_like(np.asarray(mats[0], dtype=np.int64))
        return out

    # -- text -------------------------------------------------------------

    def spec(self) -> str:
        if self.m == 1:
            return str(self.p)
        return f"{self.p}^{self.m}:" + ",".join(str(c) for c in self.poly)

    def __repr__(self):
        return f"Field({self.spec()})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.m, self.poly) == (other.p, other.m, other.poly)

    def __hash__(self):
        return hash((self.p, self.m, self.poly))

    @cached_property
    def _alpha_log(self):
        """Discrete log table base a, when a generates the unit group."""
        if self.m == 1:
            return None
        a = self.alpha
        table = {}
        x = 1
        for k in range(self.q - 1):
            if x in table:
                return None
            table[x] = k
            x = self._slow_mul(x, a)
        return table

    def format(self, c: int) -> str:
        c = int(c)
        if self.m == 1:
            return str(c)
        if c == 0:
            return "0"
        logs = self._alpha_log
        if logs is not None:
            k = logs[c]
            return "1" if k == 0 else ("a" if k == 1 else f"a^{k}")
        terms = []
        for i, d in enumerate(self.digits[c]):
            if d == 0:
                continue
            mono = "1" if i == 0 else ("a" if i == 1 else f"a^{i}")
            terms.append(mono if d == 1 else f"{d}*{mono}")
        return "+".join(reversed(terms))


def pow_mod_inverse(a, p):
    return np.asarray(pow_vec(np.asarray(a), p - 2, p))


def pow_vec(a, e, p):
    result = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


_SPEC = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+)\s*(?::\s*([\d,\s]+))?)?\s*$")


def field_make(p: int, m: int = 1, poly=None) -> Field:
    return Field(p, m, poly)


def parse_field(text: str) -> Field:
    """Parse "p" or "p^m:c0,c1,...,cm" (coefficients low-to-high)."""
    match = _SPEC.match(text)
    if not match:
        raise ValueError(f"bad field spec {text!r}")
    p = int(match.group(1))
    m = int(match.group(2) or 1)
    if m == 1:
        return Field(p)
    if match.group(3) is None:
        raise ValueError(f"field spec {text!r} needs an explicit polynomial")
    poly = [int(c) for c in match.group(3).split(",") if c.strip()]
    return Field(p, m, poly)


GF2 = Field(2)
