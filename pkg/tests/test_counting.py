"""Exact solution counting mod p^t and the stabilized density oracle."""

import random
from fractions import Fraction

import pytest

from qflab import (
    CountJob,
    OracleError,
    SymMat,
    base_diagonal,
    count_solutions,
    count_solutions_partitioned,
    density_oracle,
    density_value,
    least_nonsquare,
    normalization_exponent,
    split_diagonal,
    state_budget,
)


def test_count_examples():
    assert count_solutions(CountJob((1,), SymMat.diag(1), 3, 1)) == 2
    # x^2 + y^2 = 0 mod 3 forces x = y = 0 since -1 is a nonsquare
    assert count_solutions(CountJob((1, 1), SymMat([[0]]), 3, 1)) == 1


def test_count_naive_equals_mitm_exhaustive_small():
    rng = random.Random(5)
    done = 0
    while done < 25:
        m = rng.randint(1, 3)
        n = rng.randint(1, m)
        t = rng.randint(1, 2)
        if (3 ** t) ** (m * n) > 200_000:
            continue
        s = tuple(rng.choice((1, -1, 2, 3)) for _ in range(m))
        entries = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1):
                entries[i][j] = entries[j][i] = rng.randint(-4, 4)
        T = SymMat(entries)
        a = count_solutions(CountJob(s, T, 3, t, "naive"))
        b = count_solutions(CountJob(s, T, 3, t, "mitm"))
        assert a == b
        done += 1


def test_count_invariant_under_coordinate_permutation():
    T = SymMat([[1, 1], [1, 2]])
    P = SymMat([[2, 1], [1, 1]])
    s = split_diagonal(4)
    for t in (1, 2):
        assert count_solutions(CountJob(s, T, 3, t)) == count_solutions(CountJob(s, P, 3, t))


def test_partitioned_count_sums_to_whole():
    job = CountJob(split_diagonal(4), SymMat.diag(1, 1, 3), 3, 2)
    whole = count_solutions(job)
    for parts in (2, 3, 5):
        pieces = count_solutions_partitioned(job, parts)
        assert len(pieces) == parts
        assert sum(pieces) == whole


def test_partitioned_rejects_naive():
    job = CountJob((1,), SymMat.diag(1), 3, 1, "naive")
    with pytest.raises(ValueError, match="mitm"):
        count_solutions_partitioned(job, 2)


def test_state_budget_guard(monkeypatch):
    monkeypatch.setenv("QFLAB_STATE_BUDGET", "10")
    assert state_budget() == 10
    job = CountJob(split_diagonal(4), SymMat.diag(1, 1, 1), 3, 2)
    with pytest.raises(RuntimeError, match="state budget exceeded"):
        count_solutions(job)


def test_job_validation():
    with pytest.raises(ValueError, match="t must be >= 1"):
        CountJob((1,), SymMat.diag(1), 3, 0)
    with pytest.raises(ValueError, match="source rows"):
        CountJob((1,), SymMat.diag(1, 1), 3, 1)
    with pytest.raises(ValueError, match="unknown strategy"):
        CountJob((1,), SymMat.diag(1), 3, 1, "magic")
    with pytest.raises(ValueError, match="p-integral"):
        CountJob((1,), SymMat.diag(Fraction(1, 3)), 3, 1)
    with pytest.raises(ValueError, match="nonzero and p-integral"):
        CountJob((Fraction(1, 3),), SymMat.diag(1), 3, 1)
    with pytest.raises(ValueError, match="odd prime"):
        CountJob((1,), SymMat.diag(1), 4, 1)


def test_job_json_round_trip():
    job = CountJob((1, 1, -1), SymMat.diag(1, 3), 3, 2)
    data = job.to_json()
    back = CountJob.from_json(data)
    assert back == job
    assert back.modulus == 9


def test_normalization_exponent():
    assert normalization_exponent(5, 4, 1) == 10
    assert normalization_exponent(5, 4, 2) == 20
    # two extra hyperbolic source columns shift the exponent by 8 per level
    assert normalization_exponent(7, 4, 1) == 18
    # rank-1 target against the rank-5 base diagonal at t = 2
    assert density_value(CountJob(base_diagonal(), SymMat.diag(1), 3, 2), 7290) == Fraction(10, 9)


def test_density_oracle_unary_examples():
    res = density_oracle(base_diagonal(), SymMat.diag(1), 3)
    assert res.value == Fraction(10, 9)
    assert res.stabilized
    u = least_nonsquare(3)
    assert density_oracle(base_diagonal(), SymMat.diag(u), 3).value == Fraction(8, 9)


def test_density_oracle_starts_past_jordan_exponent():
    res = density_oracle(split_diagonal(4), SymMat.diag(9), 3)
    assert res.t_used >= 3


def test_density_oracle_rejects_singular():
    with pytest.raises(ValueError, match="nonsingular"):
        density_oracle(base_diagonal(), SymMat.diag(0), 3)


def test_density_oracle_reports_non_stabilization():
    with pytest.raises(OracleError, match="did not stabilize") as exc:
        density_oracle(base_diagonal(), SymMat.diag(1), 3, t_start=1, t_max=1)
    table = exc.value.partial_table
    assert len(table) == 1
    assert table[0][0] == 1
