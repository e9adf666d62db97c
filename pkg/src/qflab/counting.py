"""Brute-force oracle for local representation densities.

Counts matrices x over Z/p^t with x^T diag(s) x = T mod p^t, either by full
enumeration or by meet-in-the-middle over the rows of x, and normalizes the
counts into density values with stabilization detection. This module is the
independent auditor for every closed form in the package; it must never call
into the closed-form code.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .padic import check_odd_prime, valuation
from .quadform import SymMat, frac_str, jordan_diagonalize

DEFAULT_STATE_BUDGET = 2**29

# dict-based MITM switches to the dense array backend above this many states
_DENSE_SWITCH = 2**24
_DENSE_MAX_Q = 85  # digit sums must fit in uint8 with headroom
_CHUNK_TARGET = 2**22


def state_budget() -> int:
    return int(os.environ.get("QFLAB_STATE_BUDGET", DEFAULT_STATE_BUDGET))


@dataclass(frozen=True)
class CountJob:
    """One counting task: diagonal source form, target form, modulus p^t."""

    s_diag: tuple[Fraction, ...]
    T: SymMat
    p: int
    t: int
    strategy: str = "mitm"

    def __post_init__(self):
        object.__setattr__(self, "s_diag", tuple(Fraction(s) for s in self.s_diag))
        check_odd_prime(self.p)
        if self.t < 1:
            raise ValueError("modulus exponent t must be >= 1")
        if self.strategy not in ("naive", "mitm"):
            raise ValueError(f"unknown strategy: {self.strategy}")
        m, n = len(self.s_diag), self.T.n
        if not m >= n >= 1:
            raise ValueError("need at least as many source rows as target rank")
        for s in self.s_diag:
            if s == 0 or valuation(s, self.p) < 0:
                raise ValueError("source diagonal must be nonzero and p-integral")
        if not self.T.is_p_integral(self.p):
            raise ValueError("target must be p-integral")

    @property
    def m(self) -> int:
        return len(self.s_diag)

    @property
    def n(self) -> int:
        return self.T.n

    @property
    def modulus(self) -> int:
        return self.p**self.t

    def to_json(self) -> dict:
        return {
            "s": [frac_str(s) for s in self.s_diag],
            "T": self.T.to_json(),
            "p": self.p,
            "t": self.t,
            "strategy": self.strategy,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CountJob":
        return cls(
            tuple(Fraction(s) for s in data["s"]),
            SymMat.from_json(data["T"]),
            int(data["p"]),
            int(data["t"]),
            data.get("strategy", "mitm"),
        )


@dataclass(frozen=True)
class DensityResult:
    """Stabilized density: value = raw_count * p^(-norm_exponent) at t_used."""

    raw_count: int
    t_used: int
    value: Fraction
    stabilized: bool
    norm_exponent: int


class OracleError(RuntimeError):
    """Density failed to stabilize; carries the partial value table."""

    def __init__(self, message: str, partial_table):
        super().__init__(message)
        self.partial_table = tuple(partial_table)


def _residue(x: Fraction, q: int) -> int:
    return x.numerator % q * pow(x.denominator % q, -1, q) % q


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def _target_digits(T: SymMat, q: int) -> tuple[int, ...]:
    return tuple(_residue(T[i, j], q) for (i, j) in _pairs(T.n))


def _row_keys(s_res: int, q: int, n: int) -> list[tuple[int, ...]]:
    # contribution of one row vector v: s * v_i * v_j over pairs i <= j
    pairs = _pairs(n)
    out = []
    for v in itertools.product(range(q), repeat=n):
        out.append(tuple(s_res * v[i] * v[j] % q for (i, j) in pairs))
    return out


def _keys_per_row(job: CountJob) -> list[list[tuple[int, ...]]]:
    q = job.modulus
    cache: dict[int, list] = {}
    rows = []
    for s in job.s_diag:
        r = _residue(s, q)
        if r not in cache:
            cache[r] = _row_keys(r, q, job.n)
        rows.append(cache[r])
    return rows


def _add_keys(x: tuple[int, ...], y: tuple[int, ...], q: int) -> tuple[int, ...]:
    return tuple((a + b) % q for a, b in zip(x, y))


def _naive_count(job: CountJob) -> int:
    q = job.modulus
    tgt = _target_digits(job.T, q)
    rows = _keys_per_row(job)
    zero = (0,) * len(tgt)
    count = 0
    for combo in itertools.product(*rows):
        acc = zero
        for k in combo:
            acc = _add_keys(acc, k, q)
        if acc == tgt:
            count += 1
    return count


def _half_sizes(job: CountJob) -> tuple[int, int, int]:
    # rows in the streamed half, rows in the table half, states in the larger
    h = (job.m + 1) // 2
    q_n = job.modulus**job.n
    return h, job.m - h, max(q_n**h, q_n ** (job.m - h))


def _table_counter(rows: list[list[tuple[int, ...]]], q: int, k: int) -> Counter:
    if not rows:
        return Counter({(0,) * k: 1})
    acc = Counter(rows[0])
    for keys in rows[1:]:
        nxt = Counter()
        for cur, c in acc.items():
            for key in keys:
                nxt[_add_keys(cur, key, q)] += c
        acc = nxt
    return acc


def _dict_mitm(job: CountJob, part: tuple[int, int] | None = None) -> int:
    q = job.modulus
    tgt = _target_digits(job.T, q)
    rows = _keys_per_row(job)
    h = (job.m + 1) // 2
    stream_rows, table_rows = rows[:h], rows[h:]
    table = _table_counter(table_rows, q, len(tgt))
    first = stream_rows[0]
    if part is not None:
        k, nparts = part
        lo = len(first) * k // nparts
        hi = len(first) * (k + 1) // nparts
        first = first[lo:hi]
    total = 0
    for combo in itertools.product(first, *stream_rows[1:]):
        acc = combo[0]
        for key in combo[1:]:
            acc = _add_keys(acc, key, q)
        need = tuple((a - b) % q for a, b in zip(tgt, acc))
        total += table.get(need, 0)
    return total


def _dense_feasible(job: CountJob) -> bool:
    q = job.modulus
    k = job.n * (job.n + 1) // 2
    return job.m == 4 and q <= _DENSE_MAX_Q and q**k <= state_budget()


def _row_digit_array(s_res: int, q: int, n: int):
    vecs = np.indices((q,) * n).reshape(n, -1).astype(np.int64)
    cols = [s_res * vecs[i] * vecs[j] % q for (i, j) in _pairs(n)]
    return np.stack(cols, axis=1).astype(np.uint8)


def _dense_mitm(job: CountJob, part: tuple[int, int] | None = None) -> int:
    """Array MITM for 4-row jobs: digit keys in radix q, uint32 count table.

    Both halves are two rows. The table half is accumulated blockwise with
    sort/reduceat so no q^K-sized int64 scratch is ever allocated; the
    streamed half gathers matches chunk by chunk.
    """
    q = job.modulus
    n = job.n
    k = n * (n + 1) // 2
    tgt = np.array(_target_digits(job.T, q), dtype=np.uint8)
    res = [_residue(s, q) for s in job.s_diag]
    digits = {r: _row_digit_array(r, q, n) for r in set(res)}
    d0, d1, d2, d3 = (digits[r] for r in res)
    weights = q ** np.arange(k, dtype=np.int64)

    def radix(block):
        idx = np.zeros(block.shape[:-1], dtype=np.int64)
        for c in range(k):
            idx += block[..., c].astype(np.int64) * weights[c]
        return idx.ravel()

    chunk = max(1, _CHUNK_TARGET // q**n)
    table = np.zeros(q**k, dtype=np.uint32)
    for lo in range(0, q**n, chunk):
        block = (d2[lo:lo + chunk, None, :].astype(np.uint16) + d3[None, :, :]) % q
        idx = radix(block)
        idx.sort()
        starts = np.concatenate(([0], np.flatnonzero(np.diff(idx)) + 1))
        counts = np.diff(np.append(starts, len(idx)))
        table[idx[starts]] += counts.astype(np.uint32)

    lo_all, hi_all = 0, q**n
    if part is not None:
        pk, nparts = part
        lo_all = q**n * pk // nparts
        hi_all = q**n * (pk + 1) // nparts
    total = 0
    base = (np.uint16(2 * q) + tgt.astype(np.uint16)) - d0.astype(np.uint16)  # stays nonnegative
    for lo in range(lo_all, hi_all, chunk):
        block = (base[lo:lo + chunk, None, :] - d1[None, :, :]) % q
        idx = radix(block)
        total += int(table[idx].sum(dtype=np.int64))
    return total


def count_solutions(job: CountJob) -> int:
    """Exact number of x in M_{m,n}(Z/p^t) with x^T diag(s) x = T mod p^t."""
    budget = state_budget()
    q = job.modulus
    if job.strategy == "naive":
        est = q ** (job.m * job.n)
        if est > budget:
            raise RuntimeError(
                f"state budget exceeded: naive enumeration needs {est} states, budget {budget}"
            )
        return _naive_count(job)
    _, _, est = _half_sizes(job)
    if est > budget:
        raise RuntimeError(
            f"state budget exceeded: meet-in-the-middle needs {est} states, budget {budget}"
        )
    if est > _DENSE_SWITCH:
        if not _dense_feasible(job):
            raise RuntimeError(
                f"state budget exceeded: {est} states too large for the dict backend "
                "and the job shape does not fit the dense backend"
            )
        return _dense_mitm(job)
    return _dict_mitm(job)


def count_solutions_partitioned(job: CountJob, parts: int) -> list[int]:
    """Per-range counts for the streamed half; summing them is bit-identical
    to the unpartitioned count (commutative exact addition)."""
    if job.strategy != "mitm":
        raise ValueError("partitioned counting applies to the mitm strategy")
    _, _, est = _half_sizes(job)
    dense = est > _DENSE_SWITCH and _dense_feasible(job)
    runner = _dense_mitm if dense else _dict_mitm
    return [runner(job, part=(i, parts)) for i in range(parts)]


def normalization_exponent(m: int, n: int, t: int) -> int:
    return t * (m * n - n * (n + 1) // 2)


def density_value(job: CountJob, raw: int) -> Fraction:
    return Fraction(raw, job.p ** normalization_exponent(job.m, job.n, job.t))


def density_oracle(
    s_diag,
    T: SymMat,
    p: int,
    t_start: int | None = None,
    t_max: int | None = None,
    strategy: str = "mitm",
) -> DensityResult:
    """Stabilized representation density of T by diag(s) over Z_p.

    Runs consecutive moduli from t_start (default: one past the largest
    Jordan exponent of T) and stops when two consecutive normalized values
    agree. Refuses to return unstabilized values.
    """
    if not T.is_nonsingular:
        raise ValueError("density oracle requires a nonsingular target")
    if t_start is None:
        t_start = max(jordan_diagonalize(T, p).exponents) + 1
    if t_max is None:
        t_max = t_start + 2
    table = []
    prev = None
    for t in range(t_start, t_max + 1):
        job = CountJob(tuple(Fraction(s) for s in s_diag), T, p, t, strategy)
        raw = count_solutions(job)
        value = density_value(job, raw)
        table.append((t, raw, value))
        if prev is not None and prev == value:
            return DensityResult(raw, t, value, True, normalization_exponent(job.m, job.n, t))
        prev = value
    raise OracleError(
        f"density did not stabilize for t in [{t_start}, {t_max}]: "
        + ", ".join(f"t={t}: {frac_str(v)}" for t, _, v in table),
        table,
    )
