"""The quadratically-long chain of idempotent connectivities.

Starting from the identity, the chain fills the strict upper triangle one
cell at a time (stage 1), then the strict lower triangle one column at a
time (stage 2), and finally drops to the zero matrix (stage 3). Each build
cross-checks the plain single-cell/single-column increments against their
widened variants, whose algebra carries the idempotence and absorption
identities this module also verifies.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field

from . import matrix, owl
from .matrix import (
    MAX_H,
    BoolMatrix,
    inner,
    mat_vec,
    ones_col,
    outer,
    tail_row,
    unit_col,
    vec_mat,
)


def num_upper(h: int) -> int:
    """Number of strict-upper-triangle cells, C(h, 2)."""
    return h * (h - 1) // 2


def chain_length(h: int) -> int:
    """Total number of steps in the chain, C(h+1, 2)."""
    return h * (h + 1) // 2


@functools.lru_cache(maxsize=None)
def cell_index(t: int, h: int) -> tuple[int, int]:
    """The t-th strict-upper-triangle cell: columns h down to 2, and bottom
    to top within each column; always i < j."""
    u = num_upper(h)
    if not 1 <= t <= u:
        raise ValueError(f"t={t} outside stage 1 range [1, {u}] for h={h}")
    rem = t
    for j in range(h, 1, -1):
        if rem <= j - 1:
            return (j - rem, j)
        rem -= j - 1
    raise AssertionError("unreachable")


@functools.lru_cache(maxsize=4096)
def e_matrix(t: int, h: int) -> BoolMatrix:
    """Single 1 at the t-th cell."""
    return BoolMatrix.from_cells(h, [cell_index(t, h)])


@functools.lru_cache(maxsize=4096)
def e_prime(t: int, h: int) -> BoolMatrix:
    """The t-th cell plus all cells to its right in the same row."""
    i, j = cell_index(t, h)
    return outer(unit_col(i, h), tail_row(j, h))


def stage2_column(t: int, h: int) -> int:
    """Column filled at step t of stage 2."""
    u, n = num_upper(h), chain_length(h)
    if not u + 1 <= t <= n - 1:
        raise ValueError(f"t={t} outside stage 2 range [{u + 1}, {n - 1}] for h={h}")
    return h - (t - u)


@functools.lru_cache(maxsize=4096)
def d_matrix(t: int, h: int) -> BoolMatrix:
    """1s in the stage-2 column strictly below the diagonal."""
    j = stage2_column(t, h)
    return BoolMatrix.from_cells(h, [(i, j) for i in range(j + 1, h + 1)])


@functools.lru_cache(maxsize=4096)
def d_prime(t: int, h: int) -> BoolMatrix:
    """All-ones columns from the stage-2 column rightward."""
    j = stage2_column(t, h)
    return outer(ones_col(h), tail_row(j, h))


@dataclass(frozen=True)
class ConnectivitySequence:
    h: int
    matrices: tuple[BoolMatrix, ...]

    @property
    def U(self) -> int:
        return num_upper(self.h)

    @property
    def N(self) -> int:
        return chain_length(self.h)

    def __getitem__(self, t: int) -> BoolMatrix:
        return self.matrices[t]

    def __len__(self) -> int:
        return len(self.matrices)

    def to_json(self) -> dict:
        return {"h": self.h, "matrices": [m.row_hex() for m in self.matrices]}


@functools.lru_cache(maxsize=MAX_H)
def build_sequence(h: int) -> ConnectivitySequence:
    """All chain matrices for height h, cross-checked against the widened
    increments."""
    matrix._check_h(h)
    u, n = num_upper(h), chain_length(h)
    mats = [matrix.identity(h)]
    for t in range(1, u + 1):
        plain = matrix.add(mats[-1], e_matrix(t, h))
        primed = matrix.add(mats[-1], e_prime(t, h))
        if plain != primed:
            raise AssertionError(f"plain/widened increment disagree at t={t}, h={h}")
        mats.append(plain)
    for t in range(u + 1, n):
        plain = matrix.add(mats[-1], d_matrix(t, h))
        primed = matrix.add(mats[-1], d_prime(t, h))
        if plain != primed:
            raise AssertionError(f"plain/widened increment disagree at t={t}, h={h}")
        mats.append(plain)
    if mats[-1] != matrix.all_ones(h):
        raise AssertionError(f"stage 2 did not end all-ones for h={h}")
    mats.append(matrix.zero(h))
    assert len(mats) == n + 1
    return ConnectivitySequence(h, tuple(mats))


@dataclass
class SequenceReport:
    """Outcome of the identity and contract checks over a whole chain."""

    h: int
    U: int
    N: int
    checks_run: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def _check(self, cond: bool, fmt: str, *args) -> None:
        """Count a check; the failure label is only formatted on failure,
        since this runs hundreds of thousands of times."""
        self.checks_run += 1
        if not cond:
            self.failures.append(fmt % args if args else fmt)

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "U": self.U,
            "N": self.N,
            "checks_run": self.checks_run,
            "failures": list(self.failures),
            "ok": self.ok,
        }


def verify_sequence(h: int, oracle_samples: int = 3, seed: int = 0) -> SequenceReport:
    """Machine-check every chain identity for height h.

    Covers, for each applicable t: the widened-increment algebra (square and
    two-sided absorption by the predecessor), idempotence of each chain
    matrix, the two-sided consecutive products, strict growth, the rank-one
    vector identities behind the proofs, and (when oracle_samples > 0)
    sampled separation-context and forcing-suffix contracts through the
    string-level liveness oracle.
    """
    seq = build_sequence(h)
    rep = SequenceReport(h, seq.U, seq.N)
    rng = random.Random(seed)
    zero_h = matrix.zero(h)
    # Oracle sampling is O(h^2) strings; thin out the t range for large h
    # so the whole [1, 64] sweep stays fast.
    oracle_stride = max(1, seq.N // 64) if oracle_samples else 0
    mul = matrix.multiply
    check = rep._check
    for t in range(seq.N + 1):
        ct = seq[t]
        check(mul(ct, ct) == ct, "C_%d^2 != C_%d (h=%d)", t, t, h)
        if t == 0:
            continue
        prev = seq[t - 1]
        check(prev != ct, "C_%d == C_%d (h=%d)", t - 1, t, h)
        check(mul(prev, ct) == ct, "C_%dC_%d != C_%d (h=%d)", t - 1, t, t, h)
        check(mul(ct, prev) == ct, "C_%dC_%d != C_%d (h=%d)", t, t - 1, t, h)
        if t < seq.N:
            check(matrix.leq(prev, ct), "C_%d lost a 1 of C_%d (h=%d)", t, t - 1, h)
        if 1 <= t <= seq.U:
            i, j = cell_index(t, h)
            ep = e_prime(t, h)
            e_i, r_j = unit_col(i, h), tail_row(j, h)
            check(mul(ep, ep) == zero_h, "(E'_%d)^2 != 0 (h=%d)", t, h)
            check(mul(prev, ep) == ep, "C_%dE'_%d != E'_%d (h=%d)", t - 1, t, t, h)
            check(mul(ep, prev) == ep, "E'_%dC_%d != E'_%d (h=%d)", t, t - 1, t, h)
            check(ep == outer(e_i, r_j), "E'_%d != outer (h=%d)", t, h)
            check(not inner(r_j, e_i), "inner(r_%d, e_%d) != 0 (h=%d)", j, i, h)
            check(mat_vec(prev, e_i) == e_i, "C_%de_%d != e_%d (h=%d)", t - 1, i, i, h)
            check(vec_mat(r_j, prev) == r_j, "r_%dC_%d != r_%d (h=%d)", j, t - 1, j, h)
        elif t < seq.N:
            j = stage2_column(t, h)
            dp = d_prime(t, h)
            one, r_j = ones_col(h), tail_row(j, h)
            check(mul(dp, dp) == dp, "(D'_%d)^2 != D'_%d (h=%d)", t, t, h)
            check(mul(prev, dp) == dp, "C_%dD'_%d != D'_%d (h=%d)", t - 1, t, t, h)
            check(mul(dp, prev) == dp, "D'_%dC_%d != D'_%d (h=%d)", t, t - 1, t, h)
            check(dp == outer(one, r_j), "D'_%d != outer (h=%d)", t, h)
            check(inner(r_j, one), "inner(r_%d, 1) != 1 (h=%d)", j, h)
            check(mat_vec(prev, one) == one, "C_%d*ones != ones (h=%d)", t - 1, h)
            check(vec_mat(r_j, prev) == r_j, "r_%dC_%d != r_%d (h=%d)", j, t - 1, j, h)
        if oracle_stride and (t % oracle_stride == 0 or t == seq.N):
            _check_contracts(rep, prev, ct, t, h, rng, oracle_samples)
    return rep


def _check_contracts(rep, prev, ct, t, h, rng, samples) -> None:
    """Sampled separation-context and forcing-suffix contracts for one step."""
    u, v, swapped = owl.separation_context(prev, ct)
    suffix = owl.suffix_of_choice_witness(prev, ct)
    ustr = owl.OwlString.make(h, [u])
    vstr = owl.OwlString.make(h, [v])
    for _ in range(samples):
        x = owl.sample_member(prev, rng)
        z = owl.sample_member(ct, rng)
        live_x = owl.is_live(ustr + x + vstr)
        live_z = owl.is_live(ustr + z + vstr)
        rep._check(live_x != live_z, f"separation XOR fails at t={t} (h={h})")
        rep._check(live_z != swapped, f"separation orientation wrong at t={t} (h={h})")
        w = rng.choice([x, z])
        vv = owl.sample_member(prev, rng)
        forced = w + owl.OwlString.make(h, [suffix]) + vv
        rep._check(
            owl.connectivity(forced) == ct, f"forcing suffix fails at t={t} (h={h})"
        )
