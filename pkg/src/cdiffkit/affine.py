"""F_p-affine permutations as linearized polynomials plus a constant.

A map A(x) = L(x) + s with L(x) = sum a_i x^(p^i) is F_p-linear in the
coordinates, so invertibility reduces to an n x n matrix rank over GF(p).
The checks here exercise how composing with A on either side of a function
transforms its c-difference table: input composition permutes rows through
L, while output composition preserves the table only when L commutes with
multiplication by c, i.e. when a_i = 0 unless i = 0 or l | i for
l = [F_p(c) : F_p].
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .field import Field, FieldError
from .difftab import FunctionTable, c_ddt, c_uniformity


class AffineError(ValueError):
    """Invalid affine map construction or use."""


class AffineMap:
    """A(x) = sum a_i x^(p^i) + s over a fixed field."""

    __slots__ = ("field", "lin", "s", "_table", "_lin_table")

    def __init__(self, field: Field, lin, s=0):
        lin = tuple(field.check(c) for c in lin)
        if len(lin) != field.n:
            raise AffineError(f"need exactly n={field.n} linearized coefficients")
        self.field = field
        self.lin = lin
        self.s = field.check(s)
        self._table = None
        self._lin_table = None

    def __repr__(self):
        return f"AffineMap({self.field!r}, {self.text()!r})"

    def text(self) -> str:
        coeffs = ",".join(str(c) for c in self.lin)
        return f"L=[{coeffs}] s={self.s}"

    @classmethod
    def from_text(cls, field: Field, text: str) -> "AffineMap":
        try:
            lpart, spart = text.split("]")
            coeffs = [int(v) for v in lpart.split("[")[1].split(",")]
            s = int(spart.split("=")[1])
        except (ValueError, IndexError) as exc:
            raise AffineError(f"malformed affine map text {text!r}") from exc
        return cls(field, coeffs, s)

    @classmethod
    def identity(cls, field: Field) -> "AffineMap":
        return cls(field, (1,) + (0,) * (field.n - 1), 0)

    @classmethod
    def translation(cls, field: Field, s) -> "AffineMap":
        return cls(field, (1,) + (0,) * (field.n - 1), s)

    def linear_evaluate(self, x) -> int:
        fld = self.field
        x = fld.check(x)
        acc = 0
        for i, a in enumerate(self.lin):
            if a:
                acc = fld.add(acc, fld.mul(a, fld.frobenius(x, i)))
        return acc

    def evaluate(self, x) -> int:
        return self.field.add(self.linear_evaluate(x), self.s)

    def linear_table(self) -> np.ndarray:
        """Value table of the linear part, built by F_p-linearity."""
        if self._lin_table is not None:
            return self._lin_table
        fld = self.field
        q, p = fld.q, fld.p
        imgs = [[0] + [self.linear_evaluate(v * w) for v in range(1, p)]
                for w in fld._digit_pows]
        tab = [0] * q
        if p == 2:
            flat = [imgs[i][1] for i in range(fld.n)]
            for x in range(1, q):
                lsb = x & -x
                tab[x] = tab[x ^ lsb] ^ flat[lsb.bit_length() - 1]
        else:
            for x in range(1, q):
                j, xx = 0, x
                while xx % p == 0:
                    xx //= p
                    j += 1
                v = xx % p
                tab[x] = fld.add(tab[x - v * fld._digit_pows[j]], imgs[j][v])
        self._lin_table = np.asarray(tab, dtype=np.int64)
        return self._lin_table

    def as_table(self) -> np.ndarray:
        if self._table is None:
            self._table = self.field.add_vec(self.linear_table(),
                                             np.int64(self.s))
        return self._table

    def matrix(self) -> list[list[int]]:
        """Columns are the coordinate vectors of L(basis_j) over GF(p)."""
        fld = self.field
        cols = []
        for j in range(fld.n):
            img = self.linear_evaluate(fld._digit_pows[j])
            cols.append([(img // w) % fld.p for w in fld._digit_pows])
        return cols

    def is_invertible(self) -> bool:
        fld = self.field
        p, n = fld.p, fld.n
        rows = [[self.matrix()[j][i] for j in range(n)] for i in range(n)]
        rank = 0
        for col in range(n):
            pivot = next((r for r in range(rank, n) if rows[r][col]), None)
            if pivot is None:
                return False
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = pow(rows[rank][col], -1, p)
            rows[rank] = [(v * inv) % p for v in rows[rank]]
            for r in range(n):
                if r != rank and rows[r][col]:
                    fac = rows[r][col]
                    rows[r] = [(a - fac * b) % p
                               for a, b in zip(rows[r], rows[rank])]
            rank += 1
        return True

    def inverse_table(self) -> np.ndarray:
        """Value table of A^(-1)(y) = L^(-1)(y - s)."""
        if not self.is_invertible():
            raise AffineError("map is not invertible")
        fld = self.field
        lt = self.linear_table()
        lin_inv = np.empty(fld.q, dtype=np.int64)
        lin_inv[lt] = np.arange(fld.q, dtype=np.int64)
        ys = fld.sub_vec(np.arange(fld.q, dtype=np.int64), np.int64(self.s))
        return lin_inv[ys]


def commutes_with_scalar(A: AffineMap, c) -> bool:
    """L(c*x) = c*L(x) for all x, decided by the coefficient-support criterion.

    With l the degree of c over the prime field, commutation holds exactly
    when every nonzero a_i sits at i = 0 or at an index divisible by l.
    """
    fld = A.field
    c = fld.check(c)
    l = fld.subfield_degree(c)
    return all(i == 0 or i % l == 0 for i, a in enumerate(A.lin) if a)


def compose_tables(F: FunctionTable, A: AffineMap, side: str) -> FunctionTable:
    """Table of F(A(x)) for side="input" or A(F(x)) for side="output"."""
    if A.field != F.field:
        raise FieldError("affine map and function table over different fields")
    at = A.as_table()
    if side == "input":
        return FunctionTable(F.field, F.values[at])
    if side == "output":
        return FunctionTable(F.field, at[F.values])
    raise AffineError(f"side must be 'input' or 'output', got {side!r}")


@dataclass
class InputInvarianceReport:
    """Row-permutation equality of the c-tables of F and F o A."""

    equal: bool
    delta_f: int
    delta_fa: int
    note: str = ("table identity checked in the derivation-true direction "
                 "cDDT_{FoA}[a,b] = cDDT_F[L(a),b]")

    def to_dict(self) -> dict:
        return {"equal": self.equal, "delta_f": self.delta_f,
                "delta_fa": self.delta_fa, "note": self.note}


def verify_input_invariance(F: FunctionTable, A: AffineMap, c) -> InputInvarianceReport:
    """Input composition must never change the c-table up to the row map L.

    A failure indicates an implementation bug, not a mathematical phenomenon.
    """
    if not A.is_invertible():
        raise AffineError("affine map must be invertible")
    fld = F.field
    c = fld.check(c)
    t_f = c_ddt(F, c)
    t_fa = c_ddt(compose_tables(F, A, "input"), c)
    lt = A.linear_table()
    equal = bool(np.array_equal(t_fa.counts, t_f.counts[lt]))
    return InputInvarianceReport(
        equal=equal,
        delta_f=c_uniformity(F, c),
        delta_fa=c_uniformity(compose_tables(F, A, "input"), c),
    )


@dataclass
class OutputInvarianceReport:
    """Column-bijection check for A o F against the commutation criterion."""

    commutes: bool
    column_bijection_ok: bool | None
    delta_f: int
    delta_af: int
    deltas_equal: bool
    note: str = ("when L commutes with c the columns map by b -> L(b)+(1-c)s; "
                 "this is the derivation-true form of the output identity")

    def to_dict(self) -> dict:
        return {"commutes": self.commutes,
                "column_bijection_ok": self.column_bijection_ok,
                "delta_f": self.delta_f, "delta_af": self.delta_af,
                "deltas_equal": self.deltas_equal, "note": self.note}


def verify_output_invariance(F: FunctionTable, A: AffineMap, c) -> OutputInvarianceReport:
    if not A.is_invertible():
        raise AffineError("affine map must be invertible")
    fld = F.field
    c = fld.check(c)
    AF = compose_tables(F, A, "output")
    d_f = c_uniformity(F, c)
    d_af = c_uniformity(AF, c)
    commutes = commutes_with_scalar(A, c)
    col_ok = None
    if commutes:
        t_f = c_ddt(F, c)
        t_af = c_ddt(AF, c)
        shift_const = fld.mul(fld.sub(1, c), A.s)
        colmap = fld.add_vec(A.linear_table(), np.int64(shift_const))
        col_ok = bool(np.array_equal(t_f.counts, t_af.counts[:, colmap]))
    return OutputInvarianceReport(
        commutes=commutes,
        column_bijection_ok=col_ok,
        delta_f=d_f,
        delta_af=d_af,
        deltas_equal=d_f == d_af,
    )


def random_affine(field: Field, seed_or_rng, with_constant: bool = True) -> AffineMap:
    """Rejection-sample linearized coefficients until the map is invertible."""
    rng = seed_or_rng if isinstance(seed_or_rng, random.Random) \
        else random.Random(seed_or_rng)
    while True:
        lin = [rng.randrange(field.q) for _ in range(field.n)]
        if all(v == 0 for v in lin):
            continue
        s = rng.randrange(field.q) if with_constant else 0
        A = AffineMap(field, lin, s)
        if A.is_invertible():
            return A


def subfield_linear_affine(field: Field, c, seed_or_rng) -> AffineMap:
    """Random invertible A whose linear part commutes with the given c."""
    rng = seed_or_rng if isinstance(seed_or_rng, random.Random) \
        else random.Random(seed_or_rng)
    l = field.subfield_degree(c)
    allowed = [i for i in range(field.n) if i == 0 or i % l == 0]
    while True:
        lin = [0] * field.n
        for i in allowed:
            lin[i] = rng.randrange(field.q)
        if all(v == 0 for v in lin):
            continue
        A = AffineMap(field, lin, rng.randrange(field.q))
        if A.is_invertible():
            return A


@dataclass
class CounterexampleWitness:
    """Recorded instance where output composition changes the c-uniformity."""

    trial: int
    c: int
    affine_text: str
    function_values: list[int]
    delta_f: int
    delta_af: int

    def to_dict(self) -> dict:
        return {"trial": self.trial, "c": self.c, "affine": self.affine_text,
                "function": self.function_values,
                "delta_f": self.delta_f, "delta_af": self.delta_af}


def output_counterexample_search(field: Field, seed: int,
                                 budget: int = 500) -> CounterexampleWitness | None:
    """Seeded search for delta_F != delta_{AoF} with non-commuting A, c outside F_p."""
    rng = random.Random(seed)
    degrees = [field.subfield_degree(c) for c in range(field.q)]
    big_c = [c for c in range(field.q) if degrees[c] >= 2]
    if not big_c:
        raise AffineError("field has no elements outside the prime field")
    for trial in range(budget):
        F = FunctionTable.random(field, rng)
        c = big_c[rng.randrange(len(big_c))]
        A = random_affine(field, rng)
        while commutes_with_scalar(A, c):
            A = random_affine(field, rng)
        rep = verify_output_invariance(F, A, c)
        if not rep.deltas_equal:
            return CounterexampleWitness(trial, c, A.text(), F.as_list(),
                                         rep.delta_f, rep.delta_af)
    return None
