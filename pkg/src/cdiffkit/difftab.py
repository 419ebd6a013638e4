"""Difference distribution tables for classical, c-, and circ-differences.

A c-DDT counts solutions of F(x+a) - c*F(x) = b per cell (a, b); the
circ table counts F(x + c*a) = b + c*F(x), the table of the generalized
difference a o b = a + c*b.  Uniformities exclude a = 0 only in the c = 1
case; full spectra sweep every c in the field and compare the census
against the explicit degree-based bounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import Field, FieldError
from .poly import Poly, to_string
from . import structure as _structure_bounds  # bound formulas live there

DENSE_LIMIT = 2 ** 12


class FunctionTable:
    """A function F_q -> F_q as a value array indexed by input encoding."""

    __slots__ = ("field", "values")

    def __init__(self, field: Field, values):
        arr = np.asarray(values, dtype=np.int64)
        if arr.shape != (field.q,):
            raise FieldError(f"function table must have exactly q={field.q} values")
        if arr.min() < 0 or arr.max() >= field.q:
            raise FieldError("function table contains out-of-range encodings")
        self.field = field
        self.values = arr

    @classmethod
    def from_poly(cls, f: Poly) -> "FunctionTable":
        return cls(f.field, f.evaluate_all())

    @classmethod
    def identity(cls, field: Field) -> "FunctionTable":
        return cls(field, np.arange(field.q, dtype=np.int64))

    @classmethod
    def random(cls, field: Field, rng) -> "FunctionTable":
        return cls(field, [rng.randrange(field.q) for _ in range(field.q)])

    def __call__(self, x) -> int:
        return int(self.values[self.field.check(x)])

    def __eq__(self, other):
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.values, other.values)

    def is_permutation(self) -> bool:
        return len(np.unique(self.values)) == self.field.q

    def as_list(self) -> list[int]:
        return [int(v) for v in self.values]


@dataclass
class DdtTable:
    """Dense q x q count table; kind is "classical", "c", or "circ"."""

    field: Field
    kind: str
    c: int
    counts: np.ndarray

    def row_sums_ok(self) -> bool:
        return bool((self.counts.sum(axis=1) == self.field.q).all())

    def max_entry(self, exclude_a0: bool) -> int:
        if exclude_a0:
            return int(self.counts[1:].max())
        return int(self.counts.max())

    def to_csv(self) -> str:
        lines = [f"# field={self.field.descriptor()}, kind={self.kind}, c={self.c}"]
        q = self.field.q
        for a in range(q):
            row = self.counts[a]
            for b in range(q):
                lines.append(f"{a},{b},{int(row[b])}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "kind": self.kind,
            "c": self.c,
            "counts": [[int(v) for v in row] for row in self.counts],
        }


def _dense_guard(field: Field):
    if field.q > DENSE_LIMIT:
        raise FieldError(
            f"dense q x q tables are limited to q <= {DENSE_LIMIT}; "
            "use c_uniformity / spectrum which stream rows")


def _diff_rows(F: FunctionTable, c: int, row_shift: np.ndarray | None = None):
    """Matrix D[a, x] = F(x + s(a)) - c*F(x) with s the optional row shift."""
    fld = F.field
    cF = fld.scale_table(c)[F.values]
    AM = fld.add_matrix()
    if row_shift is not None:
        AM = AM[row_shift]
    FX = F.values[AM]
    return fld.sub_vec(FX, cF[None, :])


def _counts_from_diffs(diffs: np.ndarray, q: int) -> np.ndarray:
    offsets = np.arange(q, dtype=np.int64)[:, None] * q
    return np.bincount((diffs + offsets).ravel(), minlength=q * q).reshape(q, q)


def c_ddt(F: FunctionTable, c) -> DdtTable:
    """Count table of F(x+a) - c*F(x) = b, one counting pass per row."""
    fld = F.field
    c = fld.check(c)
    _dense_guard(fld)
    counts = _counts_from_diffs(_diff_rows(F, c), fld.q)
    return DdtTable(fld, "c", c, counts)


def classical_ddt(F: FunctionTable) -> DdtTable:
    """The plain difference table; identical counts to the c = 1 table."""
    t = c_ddt(F, 1)
    return DdtTable(t.field, "classical", 1, t.counts)


def circ_ddt(F: FunctionTable, c) -> DdtTable:
    """Count table of F(x + c*a) = b + c*F(x); rejects c = 0.

    For c = 0 the generalized difference collapses to x o a = x, so the
    maximization domain is empty and the table is meaningless.
    """
    fld = F.field
    c = fld.check(c)
    if c == 0:
        raise FieldError("circ table requires c != 0")
    _dense_guard(fld)
    row_shift = fld.scale_table(c)
    counts = _counts_from_diffs(_diff_rows(F, c, row_shift=row_shift), fld.q)
    return DdtTable(fld, "circ", c, counts)


def _shifted_values(F: FunctionTable) -> np.ndarray:
    """Matrix F(x+a) with the row offset a*q pre-added (c-independent)."""
    fld = F.field
    q = fld.q
    FX = F.values[fld.add_matrix()]
    return FX + np.arange(q, dtype=np.int64)[:, None] * q


def _maxima_from_shifted(fld: Field, FX_off: np.ndarray, cF: np.ndarray):
    q = fld.q
    if fld.p == 2:
        flat = FX_off ^ cF[None, :]
    else:
        offsets = np.arange(q, dtype=np.int64)[:, None] * q
        flat = fld.sub_vec(FX_off - offsets, cF[None, :]) + offsets
    counts = np.bincount(flat.ravel(), minlength=q * q).reshape(q, q)
    row_max = counts.max(axis=1)
    return int(row_max.max()), int(row_max[1:].max())


def _row_maxima(F: FunctionTable, c: int) -> tuple[int, int]:
    """(max over all rows, max over rows a != 0) of the c-DDT."""
    fld = F.field
    q = fld.q
    if q <= DENSE_LIMIT:
        cF = fld.scale_table(c)[F.values]
        return _maxima_from_shifted(fld, _shifted_values(F), cF)
    cF = fld.scale_table(c)[F.values]
    max_all = 0
    max_nz = 0
    for a in range(q):
        row = np.bincount(fld.sub_vec(F.values[fld.add_row(a)], cF), minlength=q)
        m = int(row.max())
        max_all = max(max_all, m)
        if a != 0:
            max_nz = max(max_nz, m)
    return max_all, max_nz


def c_uniformity(F: FunctionTable, c) -> int:
    """Max c-DDT entry; rows with a = 0 are excluded exactly when c = 1."""
    fld = F.field
    c = fld.check(c)
    max_all, max_nz = _row_maxima(F, c)
    return max_nz if c == 1 else max_all


def circ_uniformity(F: FunctionTable, c) -> int:
    """Max circ-DDT entry over rows with c*a != 0, i.e. a != 0."""
    fld = F.field
    c = fld.check(c)
    if c == 0:
        raise FieldError("circ uniformity requires c != 0")
    _, max_nz = _row_maxima(F, c)
    return max_nz


def is_pcn(F: FunctionTable, c) -> bool:
    return c_uniformity(F, c) == 1


@dataclass
class SpectrumReport:
    """Census of c -> c-uniformity over the whole field."""

    field_descriptor: str
    f_text: str
    d: int
    deltas: list[int]
    a0_only: list[int]
    pcn_set: list[int]
    bad_c_count: int
    worst_count: int
    delta_c0: int
    delta_c1: int
    bound_4d2: int
    bound_pcn: float

    def to_dict(self) -> dict:
        return {
            "field": self.field_descriptor,
            "f": self.f_text,
            "d": self.d,
            "spectrum": [
                {"c": c, "delta": int(delta)} | ({"a0_only": True} if c in set(self.a0_only) else {})
                for c, delta in enumerate(self.deltas)
            ],
            "pcn_set": self.pcn_set,
            "bad_c_count": self.bad_c_count,
            "worst_count": self.worst_count,
            "delta_c0": self.delta_c0,
            "delta_c1": self.delta_c1,
            "bound_4d2": self.bound_4d2,
            "bound_pcn": self.bound_pcn,
        }


def _spectrum_chunk(descriptor: str, values: list[int], cs: list[int]):
    fld = Field.from_descriptor(descriptor)
    F = FunctionTable(fld, values)
    out = []
    dense = fld.q <= DENSE_LIMIT
    FX_off = _shifted_values(F) if dense else None
    for c in cs:
        if dense:
            cF = fld.scale_table(c)[F.values]
            max_all, max_nz = _maxima_from_shifted(fld, FX_off, cF)
        else:
            max_all, max_nz = _row_maxima(F, c)
        delta = max_nz if c == 1 else max_all
        out.append((c, delta, bool(c != 1 and max_all > max_nz)))
    return out


def spectrum(F: FunctionTable, d: int, f_text: str | None = None,
             workers: int = 1) -> SpectrumReport:
    """c-uniformity for every c in the field plus the PcN / bad-c census.

    d is the degree of the polynomial behind F; it anchors the bound
    comparisons.  Results are independent of the worker count.
    """
    fld = F.field
    q = fld.q
    cs = list(range(q))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        chunks = [cs[i::workers] for i in range(workers)]
        results = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_spectrum_chunk, fld.descriptor(), F.as_list(), ch)
                    for ch in chunks if ch]
            for fut in futs:
                for c, delta, a0only in fut.result():
                    results[c] = (delta, a0only)
        triples = [(c,) + results[c] for c in cs]
    else:
        triples = _spectrum_chunk(fld.descriptor(), F.as_list(), cs)
    deltas = [delta for _, delta, _ in triples]
    a0_only = [c for c, _, flag in triples if flag]
    pcn = [c for c, delta, _ in triples if delta == 1]
    bad = sum(1 for delta in deltas if delta < d)
    worst = sum(1 for delta in deltas if delta == d)
    return SpectrumReport(
        field_descriptor=fld.descriptor(),
        f_text=f_text or "",
        d=d,
        deltas=deltas,
        a0_only=a0_only,
        pcn_set=pcn,
        bad_c_count=bad,
        worst_count=worst,
        delta_c0=deltas[0],
        delta_c1=deltas[1] if q > 1 else deltas[0],
        bound_4d2=4 * d * d,
        bound_pcn=_structure_bounds.bound_value(d, "pcn") if d >= 2 else float(q),
    )


def spectrum_of_poly(f: Poly, workers: int = 1) -> SpectrumReport:
    return spectrum(FunctionTable.from_poly(f), f.degree, to_string(f),
                    workers=workers)
