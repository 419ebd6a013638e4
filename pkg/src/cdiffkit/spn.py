"""Toy field-based SPN: one full-block S-box per round over GF(2^n).

Rounds are (add key, S-box, linear layer) with a final key addition, the
key-alternating shape with independent uniform subkeys.  The module carries
the classical chosen-plaintext differential attack against the last round
key and an experiment tracking generalized c-differences of intermediate
states, whose key-addition step contributes the state-and-key-dependent
term c*delta - (c-1)(x+k) that breaks trail chaining for c != 1.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

import numpy as np

from .field import Field, FieldError
from .affine import AffineMap, random_affine
from .difftab import FunctionTable, classical_ddt


class SpnError(ValueError):
    """Invalid SPN specification or experiment parameters."""


@dataclass
class SpnSpec:
    """Cipher description: S-box table, F_2-linear layer, r+1 round keys."""

    field: Field
    rounds: int
    sbox: FunctionTable
    linear: AffineMap
    keys: tuple[int, ...]

    def __post_init__(self):
        fld = self.field
        if fld.p != 2:
            raise SpnError("the toy SPN is defined over characteristic 2")
        if self.rounds < 1:
            raise SpnError("need at least one round")
        if self.sbox.field != fld or self.linear.field != fld:
            raise SpnError("component field mismatch")
        if not self.sbox.is_permutation():
            raise SpnError("S-box must be a permutation")
        if self.linear.s != 0:
            raise SpnError("linear layer must have zero constant part")
        if not self.linear.is_invertible():
            raise SpnError("linear layer must be invertible")
        self.keys = tuple(fld.check(k) for k in self.keys)
        if len(self.keys) != self.rounds + 1:
            raise SpnError(f"need rounds+1={self.rounds + 1} keys")

    # -- core transform ------------------------------------------------------

    def encrypt(self, m) -> int:
        return int(self.encrypt_vec(np.asarray([self.field.check(m)]))[0])

    def decrypt(self, ct) -> int:
        return int(self.decrypt_vec(np.asarray([self.field.check(ct)]))[0])

    def encrypt_vec(self, state: np.ndarray) -> np.ndarray:
        s_tab = self.sbox.values
        l_tab = self.linear.linear_table()
        out = np.asarray(state, dtype=np.int64)
        for i in range(self.rounds):
            out = l_tab[s_tab[out ^ self.keys[i]]]
        return out ^ self.keys[self.rounds]

    def decrypt_vec(self, state: np.ndarray) -> np.ndarray:
        s_tab = self.sbox.values
        l_tab = self.linear.linear_table()
        s_inv = np.empty(self.field.q, dtype=np.int64)
        s_inv[s_tab] = np.arange(self.field.q, dtype=np.int64)
        l_inv = np.empty(self.field.q, dtype=np.int64)
        l_inv[l_tab] = np.arange(self.field.q, dtype=np.int64)
        out = np.asarray(state, dtype=np.int64) ^ self.keys[self.rounds]
        for i in range(self.rounds - 1, -1, -1):
            out = s_inv[l_inv[out]] ^ self.keys[i]
        return out

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "r": self.rounds,
            "sbox_table": self.sbox.as_list(),
            "L_coeffs": list(self.linear.lin),
            "keys": list(self.keys),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpnSpec":
        fld = Field.from_descriptor(data["field"])
        return cls(fld, int(data["r"]),
                   FunctionTable(fld, data["sbox_table"]),
                   AffineMap(fld, data["L_coeffs"], 0),
                   tuple(data["keys"]))


def nibble_inverse_sbox(field: Field) -> FunctionTable:
    """Deterministic weak permutation: field inversion on each half-block.

    Splitting the n-bit block into two (n/2)-bit halves and inverting each in
    GF(2^(n/2)) keeps the map bijective and nonlinear while one inactive half
    inflates the difference table maximum to (q^(1/2)) * 4, e.g. 64 at n = 8.
    """
    if field.p != 2 or field.n % 2:
        raise SpnError("half-block inversion S-box needs p=2 and even n")
    half = field.n // 2
    sub = Field(2, half) if half > 1 else None
    size = 1 << half

    def inv_half(v: int) -> int:
        if v == 0:
            return 0
        if sub is None:
            return v
        return sub.inv(v)

    small = [inv_half(v) for v in range(size)]
    values = [(small[x >> half] << half) | small[x & (size - 1)]
              for x in range(field.q)]
    return FunctionTable(field, values)


def random_spn(field: Field, rounds: int, seed: int,
               sbox: FunctionTable | None = None) -> SpnSpec:
    """Seeded spec: given or default weak S-box, random layer and keys."""
    rng = random.Random(seed)
    if sbox is None:
        sbox = nibble_inverse_sbox(field)
    linear = random_affine(field, rng, with_constant=False)
    keys = tuple(rng.randrange(field.q) for _ in range(rounds + 1))
    return SpnSpec(field, rounds, sbox, linear, keys)


# ---------------------------------------------------------------------------
# Generalized differences through key addition
# ---------------------------------------------------------------------------

def circ_difference(field: Field, u, v, c) -> int:
    """The b with v = b + c*u, i.e. the generalized difference of (u, v)."""
    return field.sub(field.check(v), field.mul(field.check(c), field.check(u)))


def key_addition_difference(field: Field, x, k, delta, c) -> int:
    """((x o delta) + k) obar (x + k), checked against c*delta - (c-1)(x+k).

    o is a o b = a + c*b and obar its inverse a - c*b; the closed form shows
    the post-key-addition difference depends on both the message and the key
    once c != 1.
    """
    x = field.check(x)
    k = field.check(k)
    delta = field.check(delta)
    c = field.check(c)
    lhs_in = field.add(field.add(x, field.mul(c, delta)), k)
    lhs = field.sub(lhs_in, field.mul(c, field.add(x, k)))
    rhs = field.sub(field.mul(c, delta),
                    field.mul(field.sub(c, 1), field.add(x, k)))
    if lhs != rhs:
        raise AssertionError("key-addition difference identity violated")
    return lhs


# ---------------------------------------------------------------------------
# Uniformity statistics for the experiments
# ---------------------------------------------------------------------------

def uniform_max_stats(q: int, samples: int) -> tuple[float, float]:
    """Mean and standard deviation of the max bin count when sampling
    `samples` draws into q uniform bins (independent-binomial model)."""
    pr = 1.0 / q
    log1m = math.log1p(-pr)
    # binomial pmf by the multiplicative recurrence, in float
    pmf = math.exp(samples * log1m)
    cdf = pmf
    ratio = pr / (1.0 - pr)
    mean = 0.0
    second = 0.0
    prev_pow = 0.0
    for m in range(samples + 1):
        cpow = cdf ** q if cdf < 1.0 else 1.0
        pm = cpow - prev_pow  # P(max == m)
        if pm > 0:
            mean += m * pm
            second += m * m * pm
        prev_pow = cpow
        if 1.0 - cpow < 1e-15 and m > samples * pr:
            break
        pmf *= (samples - m) / (m + 1.0) * ratio
        cdf = min(1.0, cdf + pmf)
    var = max(second - mean * mean, 1e-12)
    return mean, math.sqrt(var)


def _stage_stats(hist: np.ndarray, samples: int, q: int) -> dict:
    mx = int(hist.max())
    mean, sd = uniform_max_stats(q, samples)
    return {
        "histogram": [int(v) for v in hist],
        "max_count": mx,
        "max_prob": mx / samples,
        "argmax": int(hist.argmax()),
        "z_max": (mx - mean) / sd,
    }


@dataclass
class DiffExperimentReport:
    """Per-round distributions of generalized differences of state pairs.

    Each round records the difference right after the key addition (where the
    closed-form key dependence acts) and after the full round.  Entry 0 of
    after_key_add belongs to the first round; the final whitening key
    contributes the last entry.
    """

    c: int
    delta_in: int
    samples: int
    seed: int
    resample_keys: bool
    input_relation: dict
    after_key_add: list[dict]
    after_round: list[dict]

    def to_dict(self) -> dict:
        return {
            "c": self.c, "delta_in": self.delta_in, "samples": self.samples,
            "seed": self.seed, "resample_keys": self.resample_keys,
            "input_relation": self.input_relation,
            "after_key_add": self.after_key_add,
            "after_round": self.after_round,
        }


def diff_experiment(spec: SpnSpec, c, delta_in, samples: int, seed: int,
                    resample_keys: bool = True) -> DiffExperimentReport:
    """Track the o_c-difference of encryptions of (x, x o delta) round by round."""
    if samples < 1:
        raise SpnError("need at least one sample")
    fld = spec.field
    q = fld.q
    c = fld.check(c)
    delta_in = fld.check(delta_in)
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, q, size=samples, dtype=np.int64)
    ys = xs ^ fld.scale_table(c)[delta_in]  # x o delta = x + c*delta
    if resample_keys:
        keys = rng.integers(0, q, size=(spec.rounds + 1, samples), dtype=np.int64)
    else:
        keys = np.repeat(np.asarray(spec.keys, dtype=np.int64)[:, None],
                         samples, axis=1)
    ct = fld.scale_table(c)
    s_tab = spec.sbox.values
    l_tab = spec.linear.linear_table()
    input_hist = np.bincount(np.full(samples, delta_in, dtype=np.int64),
                             minlength=q)
    after_key, after_round = [], []
    s1, s2 = xs, ys
    for i in range(spec.rounds):
        s1 = s1 ^ keys[i]
        s2 = s2 ^ keys[i]
        after_key.append(np.bincount(s2 ^ ct[s1], minlength=q))
        s1 = l_tab[s_tab[s1]]
        s2 = l_tab[s_tab[s2]]
        after_round.append(np.bincount(s2 ^ ct[s1], minlength=q))
    s1 = s1 ^ keys[spec.rounds]
    s2 = s2 ^ keys[spec.rounds]
    after_key.append(np.bincount(s2 ^ ct[s1], minlength=q))
    return DiffExperimentReport(
        c=c, delta_in=delta_in, samples=samples, seed=seed,
        resample_keys=resample_keys,
        input_relation=_stage_stats(input_hist, samples, q),
        after_key_add=[_stage_stats(h, samples, q) for h in after_key],
        after_round=[_stage_stats(h, samples, q) for h in after_round],
    )


# ---------------------------------------------------------------------------
# Classical differential key recovery
# ---------------------------------------------------------------------------

@dataclass
class Trail:
    """Greedy single-path differential over the first r-1 rounds."""

    input_diff: int
    steps: list[tuple[int, int, int]]  # (sbox_in, sbox_out, ddt_count)
    final_diff: int                    # expected difference entering round r
    probability: float

    def to_dict(self) -> dict:
        return {"input_diff": self.input_diff,
                "steps": [list(s) for s in self.steps],
                "final_diff": self.final_diff,
                "probability": self.probability}


def best_trail(spec: SpnSpec) -> Trail:
    """Best-entry-per-round chaining through the exact S-box table."""
    fld = spec.field
    q = fld.q
    ddt = classical_ddt(spec.sbox).counts
    l_tab = spec.linear.linear_table()
    sub = ddt[1:, :]
    a0 = int(sub.max(axis=1).argmax()) + 1
    steps = []
    alpha = a0
    prob = 1.0
    for _ in range(spec.rounds - 1):
        row = ddt[alpha]
        b = int(row.argmax())
        cnt = int(row[b])
        steps.append((alpha, b, cnt))
        prob *= cnt / q
        alpha = int(l_tab[b])
    return Trail(a0, steps, alpha, prob)


@dataclass
class AttackReport:
    """Ranked last-round key guesses from difference matching."""

    sbox_delta: int
    trail: Trail
    pair_count: int
    seed: int
    scores: list[int]
    ranked_keys: list[int]

    def to_dict(self) -> dict:
        return {
            "sbox_delta": self.sbox_delta,
            "sbox_delta_ratio": self.sbox_delta / len(self.scores),
            "trail": self.trail.to_dict(),
            "pair_count": self.pair_count,
            "seed": self.seed,
            "scores": self.scores,
            "ranked_keys": self.ranked_keys,
        }


def last_round_recovery(spec: SpnSpec, pair_count: int, seed: int,
                        scramble_pairs: bool = False) -> AttackReport:
    """Chosen-plaintext differential attack on the final round key.

    Pairs with the trail's input difference are encrypted under the spec's
    keys; each candidate k is scored by partially decrypting the last round
    and counting matches with the trail's predicted difference.  With
    scramble_pairs the ciphertexts are decoupled (control experiment: the
    true key loses its advantage).
    """
    if pair_count < 1:
        raise SpnError("need at least one pair")
    fld = spec.field
    q = fld.q
    ddt = classical_ddt(spec.sbox).counts
    delta = int(ddt[1:, :].max())
    trail = best_trail(spec)
    rng = np.random.default_rng(seed)
    p1 = rng.integers(0, q, size=pair_count, dtype=np.int64)
    p2 = p1 ^ trail.input_diff
    c1 = spec.encrypt_vec(p1)
    c2 = spec.encrypt_vec(p2)
    if scramble_pairs:
        c2 = rng.permutation(c2)
    s_tab = spec.sbox.values
    l_tab = spec.linear.linear_table()
    s_inv = np.empty(q, dtype=np.int64)
    s_inv[s_tab] = np.arange(q, dtype=np.int64)
    l_inv = np.empty(q, dtype=np.int64)
    l_inv[l_tab] = np.arange(q, dtype=np.int64)
    scores = []
    for k in range(q):
        u1 = s_inv[l_inv[c1 ^ k]]
        u2 = s_inv[l_inv[c2 ^ k]]
        scores.append(int(np.count_nonzero((u1 ^ u2) == trail.final_diff)))
    order = sorted(range(q), key=lambda k: (-scores[k], k))
    return AttackReport(delta, trail, pair_count, seed, scores, order)
