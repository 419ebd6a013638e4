"""Root-multiplicity structure of shifted c-differences.

For f over F_q, a shift a and parameter c, write T(x) = f(x+a) - c*f(x) and
G_t = T - t.  The critical polynomial D = H1(T) cuts out, over the algebraic
closure, exactly the points where some G_t has a multiple root; D2 = H2(T)
refines multiplicity-at-least-3.  The predicates here decide, without any
factorization, whether some G_t has a triple root or two distinct double
roots, and the census counts the c values admitting no good shift at all,
which the theory bounds by (2d-1)(2d-3) independently of q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .field import Field, FieldError, extend
from . import poly as P
from .poly import Poly


class StructureError(ValueError):
    """Invalid input to a structure computation."""


class IneligibleError(StructureError):
    """Polynomial violates a hypothesis required by the requested analysis."""


class DegenerateShiftError(StructureError):
    """The critical polynomial vanishes identically for this (a, c)."""


# ---------------------------------------------------------------------------
# Critical polynomials and verdicts
# ---------------------------------------------------------------------------

def critical_poly(f: Poly, a, c) -> Poly:
    """D(x) = H1(f)(x+a) - c*H1(f)(x); its closure roots are the critical points."""
    fld = f.field
    a = fld.check(a)
    c = fld.check(c)
    if a == 0:
        raise StructureError("shift a must be nonzero")
    h1 = P.hasse_derivative(f, 1)
    return P.shift(h1, a) - h1.scale(c)


def second_critical_poly(f: Poly, a, c) -> Poly:
    """D2(x) = H2(f)(x+a) - c*H2(f)(x)."""
    fld = f.field
    a = fld.check(a)
    c = fld.check(c)
    if a == 0:
        raise StructureError("shift a must be nonzero")
    h2 = P.hasse_derivative(f, 2)
    return P.shift(h2, a) - h2.scale(c)


def shifted_difference(f: Poly, a, c) -> Poly:
    """T(x) = f(x+a) - c*f(x)."""
    fld = f.field
    a = fld.check(a)
    c = fld.check(c)
    return P.shift(f, a) - f.scale(c)


@dataclass(frozen=True)
class RootStructureReport:
    """Verdicts for one (f, a, c): multiplicities of G_t over the closure."""

    a: int
    c: int
    degenerate: bool          # D identically zero
    fully_degenerate: bool    # D and D2 both identically zero
    has_triple_root: bool
    has_critical_collision: bool | None  # None when degenerate
    good_shift: bool          # no triple root, no collision, not degenerate


def _triple_root_verdict(D: Poly, D2: Poly) -> tuple[bool, bool, bool]:
    """(triple, degenerate, fully_degenerate) from the two critical polys.

    Multiplicity >= 3 at x0 (for the matching t) means D(x0) = D2(x0) = 0,
    so a triple root exists iff D and D2 share a closure root; the vanishing
    cases reduce to whether the surviving polynomial has any root at all.
    """
    if D.is_zero and D2.is_zero:
        return True, True, True
    if D.is_zero:
        return D2.degree >= 1, True, False
    if D2.is_zero:
        return D.degree >= 1, False, False
    return P.gcd(D, D2).degree >= 1, False, False


def has_triple_root(f: Poly, a, c) -> bool:
    """Whether some G_t acquires a root of multiplicity >= 3 in the closure."""
    D = critical_poly(f, a, c)
    D2 = second_critical_poly(f, a, c)
    triple, _, _ = _triple_root_verdict(D, D2)
    return triple


def has_critical_collision(f: Poly, a, c) -> bool:
    """Whether two distinct critical points share a critical value.

    Algorithm: s = squarefree part of D; fewer than two distinct critical
    points cannot collide; otherwise V(t) = Res_x(s, T - t) is, up to a
    nonzero constant, the product of (T(alpha) - t) over the distinct roots
    of D, and a collision is exactly a repeated root of V.  The squarefree
    test on V is characteristic-aware, so V falling into F_q[t^p] (a p-th
    power) correctly reports a collision.
    """
    D = critical_poly(f, a, c)
    if D.is_zero:
        raise DegenerateShiftError("D vanishes identically; no collision verdict")
    s = P.squarefree_part(D)
    if s.degree <= 1:
        return False
    T = shifted_difference(f, a, c)
    V = P.resultant_in_t(s, T)
    return P.squarefree_part(V).degree < V.degree


def root_structure(f: Poly, a, c) -> RootStructureReport:
    """Full per-(a, c) verdict; good means every G_t has at most one double root."""
    fld = f.field
    a = fld.check(a)
    c = fld.check(c)
    D = critical_poly(f, a, c)
    D2 = second_critical_poly(f, a, c)
    triple, degen, fully = _triple_root_verdict(D, D2)
    if degen:
        collision = None
    elif triple:
        # already disqualified; still compute the collision verdict cheaply
        s = P.squarefree_part(D)
        if s.degree <= 1:
            collision = False
        else:
            T = shifted_difference(f, a, c)
            V = P.resultant_in_t(s, T)
            collision = P.squarefree_part(V).degree < V.degree
    else:
        collision = has_critical_collision(f, a, c)
    good = (not degen) and (not triple) and (collision is False)
    return RootStructureReport(a, c, degen, fully, triple, collision, good)


# ---------------------------------------------------------------------------
# Eligibility and preconditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PreconditionReport:
    """Hypothesis checklist for the worst-case-uniformity statement."""

    p: int
    d: int
    not_monomial: bool
    not_in_xp_subring: bool
    d_odd: bool                   # char-2 branch
    h1_nonzero: bool
    h2_nonzero: bool
    d_mod_p_ok: bool              # odd-char branch: d not 0 or 1 mod p
    has_deg3mod4_monomial: bool   # sufficient condition in char 2
    eligible: bool

    def failures(self) -> list[str]:
        out = []
        if not self.not_monomial:
            out.append("f is a monomial")
        if not self.not_in_xp_subring:
            out.append("f lies in F_q[x^p]")
        if self.p == 2:
            if not self.d_odd:
                out.append("degree is even")
            if not self.h1_nonzero:
                out.append("first Hasse derivative vanishes")
            if not self.h2_nonzero:
                out.append("second Hasse derivative vanishes")
        else:
            if not self.d_mod_p_ok:
                out.append("degree is 0 or 1 mod p")
        return out

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "not_monomial": self.not_monomial,
            "not_in_xp_subring": self.not_in_xp_subring,
            "d_odd": self.d_odd,
            "h1_nonzero": self.h1_nonzero,
            "h2_nonzero": self.h2_nonzero,
            "d_mod_p_ok": self.d_mod_p_ok,
            "has_deg3mod4_monomial": self.has_deg3mod4_monomial,
            "eligible": self.eligible,
            "failures": self.failures(),
        }


def precondition_report(f: Poly) -> PreconditionReport:
    if f.is_zero:
        raise StructureError("zero polynomial")
    cls = P.classify(f)
    p = f.field.p
    d = f.degree
    not_mono = not cls.is_monomial
    not_xp = not cls.in_xp_subring
    d_odd = d % 2 == 1
    h1_nz = not cls.h1_zero
    h2_nz = not cls.h2_zero
    d_mod_ok = d % p not in (0, 1)
    branch = (d_odd and h1_nz and h2_nz) if p == 2 else d_mod_ok
    return PreconditionReport(
        p=p, d=d,
        not_monomial=not_mono,
        not_in_xp_subring=not_xp,
        d_odd=d_odd,
        h1_nonzero=h1_nz,
        h2_nonzero=h2_nz,
        d_mod_p_ok=d_mod_ok,
        has_deg3mod4_monomial=cls.has_deg3mod4_monomial,
        eligible=not_mono and not_xp and branch,
    )


def _require_census_eligible(f: Poly):
    if f.is_zero:
        raise IneligibleError("zero polynomial")
    if f.degree < 2:
        raise IneligibleError("degree must be at least 2")
    cls = P.classify(f)
    if cls.is_monomial:
        raise IneligibleError("f is a monomial")
    if cls.in_xp_subring:
        raise IneligibleError("f lies in F_q[x^p]")


# ---------------------------------------------------------------------------
# Good-shift search and census
# ---------------------------------------------------------------------------

def good_shift_search(f: Poly, c) -> int | None:
    """First a in F_q* (encoding order) making every G_t at worst one-double-root."""
    _require_census_eligible(f)
    fld = f.field
    c = fld.check(c)
    for a in range(1, fld.q):
        if root_structure(f, a, c).good_shift:
            return a
    return None


@dataclass
class CensusReport:
    """Per-c witness census with the (2d-1)(2d-3) bound comparison."""

    field_descriptor: str
    f_text: str
    d: int
    eligible_for_main: bool
    per_c: list[dict]
    theta_count: int
    bound: int
    passed: bool
    hypothesis_warning: str | None

    def to_dict(self) -> dict:
        return {
            "field": self.field_descriptor,
            "f": self.f_text,
            "d": self.d,
            "eligible": self.eligible_for_main,
            "per_c": self.per_c,
            "theta_count": self.theta_count,
            "bound": self.bound,
            "pass": self.passed,
            "hypothesis_warning": self.hypothesis_warning,
        }


def theta_census(f: Poly) -> CensusReport:
    """For every c, search for a good shift; count the c with none.

    The count is the empirical analogue of the exceptional set in the
    one-double-root statement and must stay within (2d-1)(2d-3).  A field
    smaller than the bound violates that statement's hypothesis; the census
    still runs but carries a warning.
    """
    _require_census_eligible(f)
    fld = f.field
    d = f.degree
    bound = bound_value(d, "finale")
    warning = None
    if fld.q <= bound:
        warning = (f"q={fld.q} does not exceed the bound {bound}; "
                   "the one-double-root statement gives no guarantee here")
    per_c = []
    theta = 0
    for c in range(fld.q):
        best = None
        all_degenerate = True
        for a in range(1, fld.q):
            rep = root_structure(f, a, c)
            if not rep.degenerate:
                all_degenerate = False
            if rep.good_shift:
                best = a
                break
        if best is None:
            theta += 1
        per_c.append({"c": c, "good_a": best,
                      "degenerate": best is None and all_degenerate})
    eligible_main = precondition_report(f).eligible
    return CensusReport(
        field_descriptor=fld.descriptor(),
        f_text=P.to_string(f),
        d=d,
        eligible_for_main=eligible_main,
        per_c=per_c,
        theta_count=theta,
        bound=bound,
        passed=theta <= bound,
        hypothesis_warning=warning,
    )


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

_BOUNDS = {
    "lemma2": lambda d: (d - 2) ** 3,
    "pcn": lambda d: max(6.3 * d ** (13 / 3), (d - 2) ** 2),
    "main": lambda d: 4 * d * d,
    "finale": lambda d: (2 * d - 1) * (2 * d - 3),
    "only2": lambda d: (2 * d - 2) * (2 * d - 3),
}


def bound_value(d: int, variant: str):
    """Explicit q-independent bounds, keyed by the statement they belong to."""
    if d < 2:
        raise StructureError("bounds require degree >= 2")
    try:
        return _BOUNDS[variant](d)
    except KeyError:
        raise StructureError(f"unknown bound variant {variant!r}") from None


# ---------------------------------------------------------------------------
# Exceptional set from roots of unity
# ---------------------------------------------------------------------------

def exceptional_set(d: int, base: Field) -> list[int]:
    """The set {xi^i (1-xi^j) / (1-xi^k)} intersected with the base field.

    xi is a primitive (d-1)-th root of unity, found in the extension of
    degree ord_(d-1)(q); i and j range over 0..d-2 and k over 1..d-2 (the
    denominator must not vanish, so k = 0 is excluded).  Only the
    combinations fixed by the q-Frobenius land in the base field and are
    returned, as sorted encodings.
    """
    if d < 2:
        raise StructureError("exceptional set requires d >= 2")
    r = d - 1
    p = base.p
    if r % p == 0:
        raise StructureError(
            f"p={p} divides d-1={r}: no primitive (d-1)-th root of unity exists")
    if r == 1:
        return []
    # multiplicative order of q modulo r
    m = 1
    acc = base.q % r
    while acc != 1:
        acc = (acc * base.q) % r
        m += 1
    if m == 1:
        target, into_base = base, None
    else:
        target, emb = extend(base, m)
        into_base = emb
    g = target.primitive_element()
    xi = target.pow(g, (target.q - 1) // r)
    xi_pows = [1]
    for _ in range(r - 1):
        xi_pows.append(target.mul(xi_pows[-1], xi))
    found = set()
    for k in range(1, r):
        den_inv = target.inv(target.sub(1, xi_pows[k]))
        for j in range(r):
            num = target.sub(1, xi_pows[j])
            for i in range(r):
                v = target.mul(target.mul(xi_pows[i], num), den_inv)
                if target.frobenius(v, base.n) == v:  # fixed by the q-power map
                    found.add(v)
    if into_base is None:
        return sorted(found)
    return sorted(into_base.section(v) for v in found)
