"""Exact arithmetic in GF(p^n) on integer-encoded elements.

An element is encoded as an integer in [0, q), q = p^n, whose base-p digits
(least significant first) are its coordinates in the polynomial basis
1, g, ..., g^(n-1) modulo the field modulus.  For p = 2 this makes addition
a bitwise XOR and multiplication a carry-less multiply followed by
reduction, which keeps exhaustive sweeps cache friendly.

Field objects are immutable after construction and all operations are pure,
so they can be shared freely across worker processes.
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_ORDER_CAP = 2 ** 24


class FieldError(ValueError):
    """Invalid field construction or misuse of field arithmetic."""


class FieldMismatchError(FieldError):
    """Operands belong to different fields; there are no implicit coercions."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def prime_factors(m: int) -> list[int]:
    """Distinct prime factors of m, ascending."""
    out = []
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out.append(m)
    return out


# ---------------------------------------------------------------------------
# GF(p)[x] helpers on coefficient lists (index = degree).  Used to validate
# and construct field moduli; everything else runs on integer encodings.
# ---------------------------------------------------------------------------

def _gfp_strip(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _gfp_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _gfp_strip(out)


def _gfp_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], -1, p)
    while len(r) >= len(b) and _gfp_strip(r):
        shift = len(r) - len(b)
        factor = (r[-1] * inv_lead) % p
        q[shift] = factor
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - factor * bi) % p
        _gfp_strip(r)
    return _gfp_strip(q), r


def _gfp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _gfp_divmod(a, b, p)[1]
    if a:
        inv_lead = pow(a[-1], -1, p)
        a = [(c * inv_lead) % p for c in a]
    return a


def _gfp_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _gfp_divmod(a, m, p)[1]
    while e:
        if e & 1:
            result = _gfp_divmod(_gfp_mul(result, base, p), m, p)[1]
        base = _gfp_divmod(_gfp_mul(base, base, p), m, p)[1]
        e >>= 1
    return result


def is_irreducible_modulus(coeffs: list[int], p: int) -> bool:
    """Rabin irreducibility test for a monic polynomial over GF(p)."""
    f = _gfp_strip(list(coeffs))
    n = len(f) - 1
    if n < 1:
        return False
    x_red = _gfp_divmod([0, 1], f, p)[1]
    if _gfp_powmod([0, 1], p ** n, f, p) != x_red:
        return False
    for r in prime_factors(n):
        g = list(_gfp_powmod([0, 1], p ** (n // r), f, p))
        while len(g) < 2:
            g.append(0)
        g[1] = (g[1] - 1) % p
        g = _gfp_strip(g)
        if len(_gfp_gcd(f, g, p)) > 1 or not g:
            return False
    return True


_DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {}


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over GF(p).

    Lexicographic on the digit string written most significant first, which
    coincides with ascending order of the base-p integer encoding.
    """
    key = (p, n)
    cached = _DEFAULT_MODULI.get(key)
    if cached is not None:
        return cached
    for enc in range(p ** n, 2 * p ** n):
        coeffs = []
        v = enc
        while v:
            coeffs.append(v % p)
            v //= p
        if is_irreducible_modulus(coeffs, p):
            result = tuple(coeffs)
            _DEFAULT_MODULI[key] = result
            return result
    raise FieldError(f"no irreducible polynomial of degree {n} over GF({p})")


# ---------------------------------------------------------------------------
# Field
# ---------------------------------------------------------------------------

class Field:
    """GF(p^n) arithmetic context operating on integer encodings."""

    __slots__ = ("p", "n", "q", "modulus", "cap", "_mod_int", "_scale_tables",
                 "_add_mat", "_primitive", "_digit_pows")

    def __init__(self, p: int, n: int, modulus=None, cap: int = DEFAULT_ORDER_CAP):
        if not is_prime(p):
            raise FieldError(f"p={p} is not prime")
        if n < 1:
            raise FieldError(f"extension degree must be >= 1, got {n}")
        q = p ** n
        if q > cap:
            raise FieldError(f"field order {p}^{n} exceeds the cap {cap}")
        if modulus is None:
            mod = default_modulus(p, n)
        else:
            mod = tuple(int(c) % p for c in modulus)
            while mod and mod[-1] == 0:
                mod = mod[:-1]
            if len(mod) != n + 1 or mod[-1] != 1:
                raise FieldError("modulus must be monic of degree exactly n")
            if not is_irreducible_modulus(list(mod), p):
                raise FieldError("modulus is reducible over GF(p)")
        self.p = p
        self.n = n
        self.q = q
        self.modulus = mod
        self.cap = cap
        self._mod_int = sum(c * p ** i for i, c in enumerate(mod))
        self._scale_tables: dict[int, np.ndarray] = {}
        self._add_mat = None
        self._primitive = None
        self._digit_pows = tuple(p ** i for i in range(n))

    # -- identity ----------------------------------------------------------

    def __repr__(self):
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    def __eq__(self, other):
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __reduce__(self):
        return (Field, (self.p, self.n, self.modulus, self.cap))

    def descriptor(self) -> str:
        """Text form "p=2 n=8 mod=100011011" (digits most significant first)."""
        digits = "".join(str(c) for c in reversed(self.modulus))
        return f"p={self.p} n={self.n} mod={digits}"

    @classmethod
    def from_descriptor(cls, text: str, cap: int = DEFAULT_ORDER_CAP) -> "Field":
        parts = dict(item.split("=", 1) for item in text.split())
        try:
            p = int(parts["p"])
            n = int(parts["n"])
            digits = parts["mod"]
        except (KeyError, ValueError) as exc:
            raise FieldError(f"malformed field descriptor: {text!r}") from exc
        mod = [int(ch) for ch in reversed(digits)]
        return cls(p, n, mod, cap=cap)

    # -- element handling ----------------------------------------------------

    def check(self, x) -> int:
        """Coerce an int encoding or FieldElement of this field to an int."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldMismatchError(f"element of {x.field} used in {self}")
            return x.value
        v = int(x)
        if not 0 <= v < self.q:
            raise FieldError(f"encoding {v} out of range for {self}")
        return v

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self, self.check(value))

    def elements(self):
        return range(self.q)

    # -- scalar arithmetic on encodings -------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p, out = self.p, 0
        for w in self._digit_pows:
            out += ((a // w + b // w) % p) * w
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p, out = self.p, 0
        for w in self._digit_pows:
            out += ((-(a // w)) % p) * w
        return out

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                a <<= 1
                b >>= 1
            m, top = self._mod_int, self.n
            while r.bit_length() > top:
                r ^= m << (r.bit_length() - top - 1)
            return r
        p, n = self.p, self.n
        da = [(a // w) % p for w in self._digit_pows]
        db = [(b // w) % p for w in self._digit_pows]
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(da):
            if ai:
                for j, bj in enumerate(db):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        mod = self.modulus
        for i in range(len(prod) - 1, n - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(n):
                    prod[i - n + j] = (prod[i - n + j] - c * mod[j]) % p
        return sum(prod[i] * self._digit_pows[i] for i in range(n))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv(a)
            e = -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        """Multiplicative inverse via exponentiation by q-2."""
        if a == 0:
            raise FieldError("inversion of zero")
        return self.pow(a, self.q - 2)

    def inv_euclid(self, a: int) -> int:
        """Multiplicative inverse via extended Euclid; must agree with inv()."""
        if a == 0:
            raise FieldError("inversion of zero")
        p = self.p
        r0, r1 = list(self.modulus), self._encoding_to_digits(a)
        t0, t1 = [], [1]
        while r1:
            qpoly, rem = _gfp_divmod(r0, r1, p)
            r0, r1 = r1, rem
            t0, t1 = t1, _gfp_strip([(x - y) % p for x, y in
                                     self._zip_pad(t0, _gfp_mul(qpoly, t1, p))])
        scale = pow(r0[0], -1, p)
        t0 = [(c * scale) % p for c in t0]
        return sum(c * self._digit_pows[i] for i, c in enumerate(t0))

    @staticmethod
    def _zip_pad(a: list[int], b: list[int]):
        if len(a) < len(b):
            a = a + [0] * (len(b) - len(a))
        elif len(b) < len(a):
            b = b + [0] * (len(a) - len(b))
        return zip(a, b)

    def _encoding_to_digits(self, v: int) -> list[int]:
        return _gfp_strip([(v // w) % self.p for w in self._digit_pows])

    def frobenius(self, a: int, k: int = 1) -> int:
        """k-fold Frobenius a -> a^(p^k)."""
        if a == 0:
            return 0
        if self.q == 2:
            return a
        return self.pow(a, pow(self.p, k % self.n, self.q - 1))

    def subfield_degree(self, c) -> int:
        """Minimal l >= 1 with c^(p^l) = c; always divides n."""
        c = self.check(c)
        x = c
        for l in range(1, self.n + 1):
            x = self.pow(x, self.p)
            if x == c:
                return l
        raise AssertionError("unreachable: every element is fixed by p^n")

    def primitive_element(self) -> int:
        """Smallest encoding generating the multiplicative group."""
        if self._primitive is not None:
            return self._primitive
        order = self.q - 1
        if order == 1:
            self._primitive = 1
            return 1
        factors = prime_factors(order)
        for g in range(2, self.q):
            if all(self.pow(g, order // r) != 1 for r in factors):
                self._primitive = g
                return g
        raise AssertionError("unreachable: the multiplicative group is cyclic")

    def multiplicative_order(self, a) -> int:
        a = self.check(a)
        if a == 0:
            raise FieldError("0 has no multiplicative order")
        order = self.q - 1
        for r in prime_factors(order):
            while order % r == 0 and self.pow(a, order // r) == 1:
                order //= r
        return order

    # -- vectorized helpers (numpy) ------------------------------------------

    def _vec_digits(self, arr: np.ndarray) -> list[np.ndarray]:
        return [(arr // w) % self.p for w in self._digit_pows]

    def add_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        out = 0
        for w in self._digit_pows:
            out = out + ((a // w + b // w) % self.p) * w
        return out

    def sub_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        out = 0
        for w in self._digit_pows:
            out = out + ((a // w - b // w) % self.p) * w
        return out

    def mul_vec(self, a, b) -> np.ndarray:
        """Elementwise product of two encoding arrays (shift-and-add)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        shape = np.broadcast(a, b).shape
        if self.p == 2:
            acc = np.zeros(shape, dtype=np.int64)
            shifted = np.broadcast_to(a, shape).astype(np.int64).copy()
            rest = np.broadcast_to(b, shape).astype(np.int64).copy()
            mod, top = self._mod_int, self.n
            for _ in range(self.n):
                acc ^= np.where(rest & 1 == 1, shifted, 0)
                rest >>= 1
                shifted <<= 1
                shifted ^= np.where((shifted >> top) & 1 == 1, mod, 0)
            return acc
        p, n = self.p, self.n
        A = np.broadcast_to(a, shape)
        B = np.broadcast_to(b, shape)
        da = [(A // w) % p for w in self._digit_pows]
        db = [(B // w) % p for w in self._digit_pows]
        prod = [np.zeros(shape, dtype=np.int64) for _ in range(2 * n - 1)]
        for i in range(n):
            for j in range(n):
                prod[i + j] = prod[i + j] + da[i] * db[j]
        mod = self.modulus
        for k in range(2 * n - 2, n - 1, -1):
            ck = prod[k] % p
            for j in range(n):
                if mod[j]:
                    prod[k - n + j] = prod[k - n + j] - ck * mod[j]
        out = np.zeros(shape, dtype=np.int64)
        for i in range(n):
            out += (prod[i] % p) * self._digit_pows[i]
        return out

    def scale_table(self, c) -> np.ndarray:
        """Table of x -> c*x over all encodings, built by F_p-linearity."""
        c = self.check(c)
        cached = self._scale_tables.get(c)
        if cached is not None:
            return cached
        q, p = self.q, self.p
        tab = [0] * q
        if p == 2:
            imgs = [self.mul(c, 1 << i) for i in range(self.n)]
            for x in range(1, q):
                lsb = x & -x
                tab[x] = tab[x ^ lsb] ^ imgs[lsb.bit_length() - 1]
        else:
            imgs = [[0] + [self.mul(c, v * w) for v in range(1, p)]
                    for w in self._digit_pows]
            for x in range(1, q):
                j, xx = 0, x
                while xx % p == 0:
                    xx //= p
                    j += 1
                v = xx % p
                rest = x - v * self._digit_pows[j]
                tab[x] = self.add(tab[rest], imgs[j][v])
        arr = np.asarray(tab, dtype=np.int64)
        self._scale_tables[c] = arr
        return arr

    def add_row(self, a: int) -> np.ndarray:
        """Permutation array x -> x + a."""
        xs = np.arange(self.q, dtype=np.int64)
        if self.p == 2:
            return xs ^ a
        return self.add_vec(xs, np.int64(a))

    def add_matrix(self) -> np.ndarray:
        """Dense q x q addition table; only for q <= 4096."""
        if self._add_mat is not None:
            return self._add_mat
        if self.q > 4096:
            raise FieldError("dense addition table limited to q <= 2^12")
        xs = np.arange(self.q, dtype=np.int64)
        if self.p == 2:
            mat = xs[:, None] ^ xs[None, :]
        else:
            mat = self.add_vec(xs[:, None], xs[None, :])
        self._add_mat = mat
        return mat


class FieldElement:
    """Thin wrapper carrying its owning field; arithmetic is exact."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    def __reduce__(self):
        return (FieldElement, (self.field, self.value))

    def __repr__(self):
        return f"{self.field!r}({self.value})"

    def _other(self, other) -> int:
        if not isinstance(other, FieldElement):
            raise FieldMismatchError(
                f"cannot combine {self.field} element with {type(other).__name__};"
                " wrap constants explicitly")
        if other.field != self.field:
            raise FieldMismatchError(f"mixed fields {self.field} and {other.field}")
        return other.value

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return FieldElement(self.field,
                            self.field.mul(self.value, self.field.inv(self._other(other))))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.value == other.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value


def make_field(p: int, n: int, modulus=None, cap: int = DEFAULT_ORDER_CAP) -> Field:
    """Construct a validated GF(p^n); default modulus is deterministic."""
    return Field(p, n, modulus, cap=cap)


# ---------------------------------------------------------------------------
# Extensions and embeddings
# ---------------------------------------------------------------------------

class Embedding:
    """Ring embedding of GF(p^n) into GF(p^(n*m)) fixing GF(p)."""

    def __init__(self, source: Field, target: Field, image: int):
        self.source = source
        self.target = target
        self.image = image
        pows = [1]
        for _ in range(source.n - 1):
            pows.append(target.mul(pows[-1], image))
        self._image_pows = pows
        self._section: dict[int, int] | None = None

    def __repr__(self):
        return f"Embedding({self.source!r} -> {self.target!r}, image={self.image})"

    def apply(self, x) -> int:
        x = self.source.check(x)
        out = 0
        for i, w in enumerate(self.source._digit_pows):
            d = (x // w) % self.source.p
            if d:
                out = self.target.add(out, self.target.mul(d, self._image_pows[i]))
        return out

    def map_poly(self, f):
        from .poly import Poly
        return Poly(self.target, [self.apply(c) for c in f.coeffs])

    def section(self, y) -> int:
        """Inverse of apply() on the embedded copy of the source field."""
        if self._section is None:
            self._section = {self.apply(x): x for x in self.source.elements()}
        y = self.target.check(y)
        try:
            return self._section[y]
        except KeyError:
            raise FieldError(f"{y} is not in the embedded subfield") from None


_EXTENSIONS: dict[tuple[Field, int], tuple[Field, Embedding]] = {}


def extend(base: Field, m: int) -> tuple[Field, Embedding]:
    """GF(p^(n*m)) together with an embedding of the base field.

    The image of the base generator is the smallest root of the base modulus
    inside the target field, so the construction is deterministic.
    """
    if m < 1:
        raise FieldError("extension factor must be >= 1")
    key = (base, m)
    cached = _EXTENSIONS.get(key)
    if cached is not None:
        return cached
    target = make_field(base.p, base.n * m, cap=base.cap)
    from .poly import Poly, roots
    mod_in_target = Poly(target, list(base.modulus))
    rs = roots(mod_in_target)
    if len(rs) != base.n:
        raise AssertionError("base modulus must split completely in the extension")
    emb = Embedding(base, target, min(rs))
    if mod_in_target.evaluate(emb.image) != 0:
        raise AssertionError("embedding image is not a root of the base modulus")
    result = (target, emb)
    _EXTENSIONS[key] = result
    return result
