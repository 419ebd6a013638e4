"""Univariate polynomial algebra over a Field.

Covers evaluation, Hasse derivatives and Taylor shifts f(x+a), gcd,
characteristic-p squarefree parts, resultants (including the resultant in a
formal parameter t), root extraction inside the coefficient field, and the
structural predicates needed to screen S-box candidate polynomials.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .field import Field, FieldElement, FieldError


class PolyError(ValueError):
    """Invalid polynomial operation."""


class Poly:
    """Immutable dense polynomial; coeffs[i] is the coefficient of x^i.

    The zero polynomial has an empty coefficient tuple and degree -1 (the
    explicit sentinel; never confuse with degree-0 constants).
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs=()):
        vals = [field.check(c) for c in coeffs]
        while vals and vals[-1] == 0:
            vals.pop()
        self.field = field
        self.coeffs = tuple(vals)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field: Field) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field: Field, k: int, c=1) -> "Poly":
        c = field.check(c)
        return cls(field, (0,) * k + (c,))

    @classmethod
    def from_pairs(cls, field: Field, pairs: dict[int, int]) -> "Poly":
        if not pairs:
            return cls.zero(field)
        coeffs = [0] * (max(pairs) + 1)
        for k, c in pairs.items():
            coeffs[k] = field.add(coeffs[k], field.check(c))
        return cls(field, coeffs)

    # -- basic structure -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        if self.is_zero:
            raise PolyError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"Poly({self.field!r}, {to_string(self)!r})"

    def __bool__(self):
        return not self.is_zero

    # -- arithmetic ----------------------------------------------------------

    def _same_field(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            raise PolyError(f"expected Poly, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError("polynomials over different fields")
        return other

    def __add__(self, other):
        other = self._same_field(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __neg__(self):
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._same_field(other))

    def __mul__(self, other):
        other = self._same_field(other)
        if self.is_zero or other.is_zero:
            return Poly.zero(self.field)
        F = self.field
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    def scale(self, c) -> "Poly":
        F = self.field
        c = F.check(c)
        return Poly(F, [F.mul(c, a) for a in self.coeffs])

    def __divmod__(self, other):
        other = self._same_field(other)
        if other.is_zero:
            raise PolyError("polynomial division by zero")
        F = self.field
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return Poly.zero(F), self
        q = [0] * (dq + 1)
        inv_lead = F.inv(other.lead)
        ob = other.coeffs
        while len(r) >= len(ob):
            if r[-1] == 0:
                r.pop()
                continue
            shift = len(r) - len(ob)
            factor = F.mul(r[-1], inv_lead)
            q[shift] = factor
            for i, c in enumerate(ob):
                if c:
                    r[shift + i] = F.sub(r[shift + i], F.mul(factor, c))
            r.pop()
        return Poly(F, q), Poly(F, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero:
            raise PolyError("cannot normalize the zero polynomial")
        if self.lead == 1:
            return self
        return self.scale(self.field.inv(self.lead))

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, x) -> int:
        F = self.field
        x = F.check(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def evaluate_all(self) -> np.ndarray:
        """Values at every field element, indexed by encoding."""
        F = self.field
        xs = np.arange(F.q, dtype=np.int64)
        acc = np.zeros(F.q, dtype=np.int64)
        for c in reversed(self.coeffs):
            acc = F.mul_vec(acc, xs)
            if c:
                acc = F.add_vec(acc, np.int64(c))
        return acc


# ---------------------------------------------------------------------------
# Derivatives and shifts
# ---------------------------------------------------------------------------

def hasse_derivative(f: Poly, k: int) -> Poly:
    """k-th Hasse derivative: coefficient j maps to binom(j, k) c_j x^(j-k)."""
    if k < 0:
        raise PolyError("Hasse derivative order must be >= 0")
    if k == 0:
        return f
    F = f.field
    out = {}
    for j, c in enumerate(f.coeffs):
        if c and j >= k:
            w = math.comb(j, k) % F.p
            if w:
                out[j - k] = F.mul(w, c)
    return Poly.from_pairs(F, out)


def derivative(f: Poly) -> Poly:
    """Ordinary formal derivative (same as the first Hasse derivative)."""
    return hasse_derivative(f, 1)


def shift(f: Poly, a) -> Poly:
    """Taylor shift f(x+a) = sum_k H_k(f)(a) x^k."""
    F = f.field
    a = F.check(a)
    if a == 0 or f.is_zero:
        return f
    out = [0] * (f.degree + 1)
    for k in range(f.degree + 1):
        out[k] = hasse_derivative(f, k).evaluate(a)
    return Poly(F, out)


# ---------------------------------------------------------------------------
# gcd / squarefree machinery (characteristic aware)
# ---------------------------------------------------------------------------

def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd with the zero polynomial is the other argument."""
    f._same_field(g)
    if f.is_zero and g.is_zero:
        raise PolyError("gcd(0, 0) is undefined")
    while not g.is_zero:
        f, g = g, f % g
    return f.monic()


def pth_root(f: Poly) -> Poly:
    """Inverse of h -> h^p; requires every exponent divisible by p."""
    F = f.field
    p = F.p
    out = [0] * (f.degree // p + 1) if not f.is_zero else []
    for j, c in enumerate(f.coeffs):
        if c:
            if j % p:
                raise PolyError("polynomial is not a p-th power")
            out[j // p] = F.frobenius(c, F.n - 1)
    return Poly(F, out)


def squarefree_part(f: Poly) -> Poly:
    """Radical: product of the distinct irreducible factors, multiplicity one.

    When the ordinary derivative vanishes, f is a p-th power; the recursion
    strips the power via coefficient p-th roots, which keeps the criterion
    correct over the algebraic closure in characteristic p.
    """
    if f.is_zero:
        raise PolyError("squarefree part of the zero polynomial")
    f = f.monic()
    if f.degree == 0:
        return f
    d1 = derivative(f)
    if d1.is_zero:
        return squarefree_part(pth_root(f))
    g = gcd(f, d1)
    w = f // g
    if g.degree == 0:
        return w.monic()
    rest = squarefree_part(g)
    return ((w // gcd(w, rest)) * rest).monic()


def is_squarefree(f: Poly) -> bool:
    return squarefree_part(f).degree == f.degree


# ---------------------------------------------------------------------------
# Resultants
# ---------------------------------------------------------------------------

def resultant(f: Poly, g: Poly) -> int:
    """Res(f, g) via the Euclidean remainder scheme; exact value."""
    f._same_field(g)
    if f.is_zero or g.is_zero:
        raise PolyError("resultant with a zero argument")
    F = f.field
    if f.degree == 0 and g.degree == 0:
        return 1
    res = 1
    a, b = f, g
    while b.degree > 0:
        r = a % b
        if r.is_zero:
            return 0
        res = F.mul(res, F.pow(b.lead, a.degree - r.degree))
        if (a.degree * b.degree) % 2 == 1:
            res = F.neg(res)
        a, b = b, r
    return F.mul(res, F.pow(b.coeffs[0], a.degree))


def interpolate(field: Field, points: list[tuple[int, int]]) -> Poly:
    """Lagrange interpolation through distinct-abscissa points."""
    out = Poly.zero(field)
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        num = Poly.one(field)
        den = 1
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            num = num * Poly(field, (field.neg(xj), 1))
            den = field.mul(den, field.sub(xi, xj))
        out = out + num.scale(field.mul(yi, field.inv(den)))
    return out


def resultant_in_t(s: Poly, T: Poly) -> Poly:
    """V(t) = Res_x(s(x), T(x) - t) as a polynomial in t.

    For monic s this equals the product of (T(alpha) - t) over the roots of s
    counted with multiplicity, so deg V = deg s.  Evaluation/interpolation is
    used when the field has more than deg(s) elements; otherwise the Sylvester
    determinant is computed fraction-free with coefficients in F_q[t].
    """
    s._same_field(T)
    if s.is_zero or s.degree < 1:
        raise PolyError("resultant_in_t needs deg(s) >= 1")
    F = s.field
    m = s.degree
    if T.degree <= 0:
        # constant T = tau: every root of s maps there, V = (tau - t)^m
        base = Poly(F, (T.coeff(0), F.neg(1)))
        out = Poly.one(F)
        for _ in range(m):
            out = out * base
        return out
    if F.q > m:
        pts = []
        for tv in range(m + 1):
            shifted = Poly(F, (F.sub(T.coeff(0), tv),) + T.coeffs[1:])
            pts.append((tv, resultant(s, shifted)))
        return interpolate(F, pts)
    return _resultant_in_t_sylvester(s, T)


def _t_strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _resultant_in_t_sylvester(s: Poly, T: Poly) -> Poly:
    """Fraction-free (Bareiss) Sylvester determinant over F_q[t]."""
    F = s.field
    m, d = s.degree, T.degree

    def tadd(a, b):
        out = [0] * max(len(a), len(b))
        for i, c in enumerate(a):
            out[i] = c
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return _t_strip(out)

    def tneg(a):
        return [F.neg(c) for c in a]

    def tmul(a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return _t_strip(out)

    def tdiv_exact(a, b):
        if not a:
            return []
        if not b:
            raise ZeroDivisionError
        a = list(a)
        q = [0] * (len(a) - len(b) + 1)
        inv_lead = F.inv(b[-1])
        while len(a) >= len(b) and _t_strip(a):
            shiftn = len(a) - len(b)
            factor = F.mul(a[-1], inv_lead)
            q[shiftn] = factor
            for i, c in enumerate(b):
                a[shiftn + i] = F.sub(a[shiftn + i], F.mul(factor, c))
            _t_strip(a)
        if _t_strip(a):
            raise AssertionError("inexact division in fraction-free elimination")
        return q

    size = m + d
    # rows 0..d-1: shifts of s (constant in t); rows d..d+m-1: shifts of T - t
    mat: list[list[list[int]]] = []
    s_rev = list(reversed(s.coeffs))
    for r in range(d):
        row = [[] for _ in range(size)]
        for i, c in enumerate(s_rev):
            if c:
                row[r + i] = [c]
        mat.append(row)
    tc = list(reversed(T.coeffs))
    for r in range(m):
        row = [[] for _ in range(size)]
        for i, c in enumerate(tc):
            entry = [c] if c else []
            if i == d:  # constant coefficient of T - t picks up -t
                entry = _t_strip([c, F.neg(1)])
            row[r + i] = entry
        mat.append(row)

    sign = 1
    prev = [1]
    for k in range(size - 1):
        if not mat[k][k]:
            pivot_row = next((r for r in range(k + 1, size) if mat[r][k]), None)
            if pivot_row is None:
                return Poly.zero(F)
            mat[k], mat[pivot_row] = mat[pivot_row], mat[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = tadd(tmul(mat[k][k], mat[i][j]),
                           tneg(tmul(mat[i][k], mat[k][j])))
                mat[i][j] = tdiv_exact(num, prev)
            mat[i][k] = []
        prev = mat[k][k]
    det = mat[size - 1][size - 1]
    if sign < 0:
        det = tneg(det)
    return Poly(F, det)


# ---------------------------------------------------------------------------
# Roots inside the coefficient field
# ---------------------------------------------------------------------------

def powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.one(base.field) % mod
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def roots(f: Poly) -> list[int]:
    """Distinct roots of f lying in its own coefficient field, sorted."""
    if f.is_zero:
        raise PolyError("the zero polynomial vanishes everywhere")
    if f.degree < 1:
        return []
    F = f.field
    x = Poly.x(F)
    xq = powmod(x, F.q, f)
    lin = xq - (x % f)
    if lin.is_zero:
        base = f.monic()
    else:
        base = gcd(f, lin)
    base = squarefree_part(base)
    if base.degree < 1:
        return []
    return sorted(_split_linear(base))


def _split_linear(R: Poly) -> list[int]:
    """Extract the roots of a squarefree product of linear factors."""
    F = R.field
    if R.degree == 0:
        return []
    if R.degree == 1:
        c0, c1 = R.coeff(0), R.coeff(1)
        return [F.mul(F.neg(c0), F.inv(c1))]
    x = Poly.x(F)
    for delta in range(1, F.q):
        if F.p == 2:
            term = (x.scale(delta)) % R
            acc = term
            for _ in range(F.n - 1):
                term = (term * term) % R
                acc = acc + term
            g = gcd(R, acc) if not acc.is_zero else Poly.zero(F)
        else:
            h = powmod(x + Poly(F, (delta,)), (F.q - 1) // 2, R)
            g = gcd(R, h - Poly.one(F)) if not (h - Poly.one(F)).is_zero \
                else Poly.zero(F)
        if not g.is_zero and 0 < g.degree < R.degree:
            return _split_linear(g) + _split_linear(R // g)
    raise AssertionError("split exhausted the field without separating roots")


def distinct_degree_profile(f: Poly) -> dict[int, int]:
    """Map k -> degree of the product of the degree-k irreducible factors."""
    if f.is_zero or f.degree < 1:
        return {}
    F = f.field
    rem = squarefree_part(f)
    profile: dict[int, int] = {}
    x = Poly.x(F)
    h = x % rem
    k = 0
    while rem.degree >= 1:
        k += 1
        if 2 * k > rem.degree:
            profile[rem.degree] = profile.get(rem.degree, 0) + rem.degree
            break
        h = powmod(h, F.q, rem)
        g = gcd(rem, h - (x % rem)) if not (h - (x % rem)).is_zero else rem.monic()
        if g.degree > 0:
            profile[k] = profile.get(k, 0) + g.degree
            rem = rem // g
            h = h % rem if rem.degree >= 1 else h
    return profile


# ---------------------------------------------------------------------------
# Structural classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    is_monomial: bool
    in_xp_subring: bool
    h1_zero: bool
    h2_zero: bool
    has_deg3mod4_monomial: bool
    decomposition: tuple[Poly, Poly] | None  # (A, B) with f = x*A^4 + B^4


def classify(f: Poly) -> Classification:
    """Structural flags used to screen S-box candidates.

    A monomial is a single term c*x^k with k >= 1; a nonzero constant term
    already disqualifies.  For p = 2 with vanishing second Hasse derivative
    the constructive witness f = x*A(x)^4 + B(x)^4 is returned.
    """
    if f.is_zero:
        raise PolyError("cannot classify the zero polynomial")
    F = f.field
    terms = [(j, c) for j, c in enumerate(f.coeffs) if c]
    is_monomial = len(terms) == 1 and terms[0][0] >= 1
    in_xp = all(j % F.p == 0 for j, _ in terms)
    h1 = hasse_derivative(f, 1)
    h2 = hasse_derivative(f, 2)
    deg3mod4 = any(j % 4 == 3 for j, _ in terms)
    decomposition = None
    if F.p == 2 and h2.is_zero:
        a_pairs, b_pairs = {}, {}
        for j, c in terms:
            root4 = F.frobenius(c, F.n - 2) if F.n >= 2 else c
            if j % 4 == 0:
                b_pairs[j // 4] = root4
            elif j % 4 == 1:
                a_pairs[(j - 1) // 4] = root4
            else:
                raise AssertionError("vanishing H2 forbids exponents 2,3 mod 4")
        A = Poly.from_pairs(F, a_pairs)
        B = Poly.from_pairs(F, b_pairs)
        decomposition = (A, B)
    return Classification(is_monomial, in_xp, h1.is_zero, h2.is_zero,
                          deg3mod4, decomposition)


def reassemble_decomposition(A: Poly, B: Poly) -> Poly:
    """x*A(x)^4 + B(x)^4 for checking classification round trips."""
    F = A.field
    A4 = A * A
    A4 = A4 * A4
    B4 = B * B
    B4 = B4 * B4
    return Poly.x(F) * A4 + B4


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------

def to_string(f: Poly) -> str:
    """Canonical text form "c_d*x^d + ... + c_0" with integer encodings."""
    if f.is_zero:
        return "0"
    parts = []
    for j in range(f.degree, -1, -1):
        c = f.coeff(j)
        if not c:
            continue
        if j == 0:
            parts.append(str(c))
        elif j == 1:
            parts.append(f"{c}*x")
        else:
            parts.append(f"{c}*x^{j}")
    return " + ".join(parts)


def from_string(field: Field, text: str) -> Poly:
    """Parse "c*x^k + ..." terms; coefficient defaults to 1, x^1 may be "x"."""
    pairs: dict[int, int] = {}
    for raw in text.replace(" ", "").split("+"):
        if not raw and text.strip():
            raise PolyError(f"empty term in {text!r}")
        if not raw:
            continue
        m = re.match(r"^(?:(\d+)\*?)?(x(?:\^(\d+))?)?$", raw)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise PolyError(f"cannot parse polynomial term {raw!r} in {text!r}")
        coeff = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            k = 0
        elif m.group(3) is not None:
            k = int(m.group(3))
        else:
            k = 1
        prev = pairs.get(k, 0)
        pairs[k] = field.add(prev, field.check(coeff))
    return Poly.from_pairs(field, pairs)
