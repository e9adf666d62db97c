"""Symmetric matrices, Jordan splitting, Hasse invariants, and local representability."""

import random
from fractions import Fraction
from math import isqrt

import pytest

from qflab import (
    INFINITE_PLACE,
    CountJob,
    IncoherentCollection,
    Place,
    QuadSpace,
    SymMat,
    base_diagonal,
    base_space,
    chi,
    count_solutions,
    diff_set,
    frac_str,
    hasse,
    is_local_square,
    jordan_diagonalize,
    least_nonsquare,
    parse_frac,
    rational_diagonalization,
    represents_local,
    represents_one_over_Zp,
    signature,
    split_diagonal,
    twisted_space,
)


def _random_symmetric(rng, n, bound=9):
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            m[i][j] = m[j][i] = rng.randint(-bound, bound)
    return SymMat(m)


def _random_nonsingular(rng, n, bound=9):
    while True:
        T = _random_symmetric(rng, n, bound)
        if T.is_nonsingular:
            return T


# ---------------------------------------------------------------- SymMat


def test_symmat_basics():
    T = SymMat.diag(1, 2, 3)
    assert T.n == 3 and T.det == 6
    assert T[1, 1] == 2 and T[0, 2] == 0
    assert T.apply((1, 1, 1)) == 6
    assert T.is_p_integral(3)
    assert not SymMat.diag(Fraction(1, 3)).is_p_integral(3)
    assert SymMat.diag(Fraction(1, 3)).is_p_integral(5)


def test_symmat_rejects_asymmetric():
    with pytest.raises(ValueError, match="symmetric"):
        SymMat([[1, 2], [3, 4]])
    with pytest.raises(ValueError, match="square"):
        SymMat([[1, 2]])


def test_symmat_json_round_trip():
    T = SymMat([[1, Fraction(1, 2)], [Fraction(1, 2), 3]])
    data = T.to_json()
    assert data["n"] == 2
    assert all(isinstance(x, str) for row in data["entries"] for x in row)
    assert SymMat.from_json(data) == T


def test_frac_str_round_trip():
    for x in (Fraction(0), Fraction(7), Fraction(-3, 4), Fraction(10, 9)):
        assert parse_frac(frac_str(x)) == x


def test_signature():
    assert signature(SymMat.diag(1, 1, 1, 1)) == (4, 0)
    assert signature(SymMat.diag(1, 1, -1, -1)) == (2, 2)
    assert signature(SymMat([[0, 1], [1, 0]])) == (1, 1)


def test_rational_diagonalization_is_congruent():
    rng = random.Random(31)
    for _ in range(50):
        T = _random_nonsingular(rng, rng.choice((2, 3, 4)))
        d = rational_diagonalization(T)
        prod = Fraction(1)
        for x in d:
            prod *= x
        # determinants agree up to the square of the change of basis
        ratio = prod / T.det
        assert ratio > 0
        assert isqrt(ratio.numerator) ** 2 == ratio.numerator
        assert isqrt(ratio.denominator) ** 2 == ratio.denominator


def test_least_nonsquare():
    assert least_nonsquare(3) == 2
    assert least_nonsquare(5) == 2
    assert least_nonsquare(7) == 3
    assert least_nonsquare(11) == 2


# ---------------------------------------------------------------- Jordan form


def test_jordan_diagonal_example():
    jd = jordan_diagonalize(SymMat.diag(1, 1, 1, 3), 3)
    assert jd.exponents == (0, 0, 0, 1)
    assert jd.signs == (1, 1, 1, 1)


def test_jordan_hyperbolic_plane():
    jd = jordan_diagonalize(SymMat([[0, 1], [1, 0]]), 3)
    assert jd.exponents == (0, 0)
    # unit classes individually depend on the chosen moves, the product does not
    assert jd.signs[0] * jd.signs[1] == chi(-1, 3)


def test_jordan_off_diagonal_pivot():
    jd = jordan_diagonalize(SymMat([[2, 1], [1, 2]]), 3)
    assert jd.exponents == (0, 1)
    assert jd.signs[0] == chi(2, 3)


def test_jordan_rejects_singular_and_non_integral():
    with pytest.raises(ValueError, match="Jordan form requires nonsingular input"):
        jordan_diagonalize(SymMat.diag(1, 0), 3)
    with pytest.raises(ValueError, match="p-integral"):
        jordan_diagonalize(SymMat.diag(Fraction(1, 3)), 3)


def test_jordan_diagonal_rep_preserves_counts():
    # the diagonal representative and the original represent identically mod p^t
    rng = random.Random(47)
    for _ in range(12):
        n = rng.choice((2, 3))
        T = _random_nonsingular(rng, n, 5)
        rep = SymMat.diag(*jordan_diagonalize(T, 3).diagonal_rep())
        s = split_diagonal(4)
        for t in (1, 2) if n == 2 else (1,):
            a = count_solutions(CountJob(s, T, 3, t))
            b = count_solutions(CountJob(s, rep, 3, t))
            assert a == b


def test_jordan_invariants_under_scaling():
    jd = jordan_diagonalize(SymMat.diag(9, 18, 5), 3)
    assert jd.exponents == (0, 2, 2)
    assert jd.rank == 3
    assert len(jd.unimodular_terms) == 1


# ---------------------------------------------------------------- Hasse invariant


def test_hasse_examples():
    assert hasse(QuadSpace.from_diagonal((1, 1, 1, 1, 1)), Place(3)) == 1
    assert hasse(QuadSpace.from_diagonal((1, 1, -1, -1, 1)), Place(3)) == 1
    for p in (3, 5):
        u = least_nonsquare(p)
        ramified = QuadSpace.from_diagonal((1, -u, -p, u * p))
        assert hasse(ramified, Place(p)) == -1


def test_hasse_independent_of_diagonalization():
    rng = random.Random(11)
    places = [Place(2), Place(3), Place(5), Place(7), INFINITE_PLACE]
    for _ in range(100):
        n = rng.choice((2, 3, 4, 5))
        T = _random_nonsingular(rng, n, 6)
        # congruent Gram matrices present the same space
        while True:
            A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            M2 = [
                [
                    sum(A[k][i] * T[k, l] * A[l][j] for k in range(n) for l in range(n))
                    for j in range(n)
                ]
                for i in range(n)
            ]
            T2 = SymMat(M2)
            if T2.is_nonsingular:
                break
        for v in places:
            assert hasse(QuadSpace(T), v) == hasse(QuadSpace(T2), v)


def test_is_local_square():
    assert is_local_square(4, INFINITE_PLACE)
    assert not is_local_square(-4, INFINITE_PLACE)
    assert is_local_square(Fraction(1, 9), Place(3))
    assert not is_local_square(2, Place(3))
    assert not is_local_square(3, Place(3))
    assert is_local_square(-1, Place(5))
    assert is_local_square(17, Place(2))
    assert not is_local_square(5, Place(2))


# ---------------------------------------------------------------- fixed spaces


def test_fixed_diagonals():
    assert base_diagonal() == (1, 1, -1, 1, -1)
    assert base_diagonal(1) == (1, 1, -1, 1, -1, 1, -1)
    assert split_diagonal(4) == (1, -1, 1, -1)
    assert base_space().gram.n == 5


def test_twisted_space_is_the_other_class_at_p():
    # the local isometry class at p is (dim, det class, Hasse); only Hasse flips
    for p in (3, 5, 7):
        V = base_space()
        W = twisted_space(p)
        assert W.gram.n == V.gram.n == 5
        assert is_local_square(W.gram.det / V.gram.det, Place(p))
        assert hasse(W, Place(p)) == -hasse(V, Place(p)) == -1


# ---------------------------------------------------------------- representability


def test_represents_local_examples():
    assert represents_local(base_space(), SymMat.diag(1, 1, 1, 1), Place(3))
    assert not represents_local(base_space(), SymMat.diag(1, 1, 1, 3), Place(3))
    posdef = QuadSpace.from_diagonal((1, 1, 1, 1, 1))
    assert represents_local(posdef, SymMat.diag(1, 1, 1, 3), INFINITE_PLACE)
    assert not represents_local(posdef, SymMat.diag(-1), INFINITE_PLACE)


def test_dichotomy_sample():
    rng = random.Random(307)
    for _ in range(40):
        T = _random_nonsingular(rng, 4, 50)
        for p in (3, 5, 7):
            a = represents_local(base_space(), T, Place(p))
            b = represents_local(twisted_space(p), T, Place(p))
            assert a != b


def test_represents_one_examples():
    assert represents_one_over_Zp(SymMat.diag(1, 5, 7, 9), 3)
    assert not represents_one_over_Zp(SymMat.diag(2, 6, 3, 9), 3)
    assert represents_one_over_Zp(SymMat.diag(2, 2, 3, 3), 3)


def test_represents_one_against_enumeration():
    # unit values force a unit gradient, so mod p^3 already decides Z_p
    q = 27
    rng = random.Random(99)
    for _ in range(40):
        n = rng.choice((2, 3))
        T = _random_nonsingular(rng, n, 9)
        found = False
        for idx in range(q ** n):
            x = [(idx // q ** k) % q for k in range(n)]
            if T.apply(x) % q == 1:
                found = True
                break
        assert represents_one_over_Zp(T, 3) == found


# ---------------------------------------------------------------- Diff sets


def test_diff_examples():
    C = IncoherentCollection.split()
    assert diff_set(SymMat.diag(1, 1, 1, 3), C) == {Place(3)}
    assert diff_set(SymMat.diag(1, 1, 1, 1), C) == {Place(2)}
    indefinite = diff_set(SymMat.diag(1, 1, 1, -3), C)
    assert INFINITE_PLACE in indefinite
    assert len(indefinite) % 2 == 1


def test_diff_parity_sample():
    rng = random.Random(8128)
    collections = [IncoherentCollection.split(), IncoherentCollection.from_pair(-1, 3)]
    for _ in range(25):
        A = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(4)]
        M = [
            [sum(A[k][i] * A[k][j] for k in range(4)) for j in range(4)]
            for i in range(4)
        ]
        T = SymMat([[M[i][j] + (4 if i == j else 0) for j in range(4)] for i in range(4)])
        assert signature(T) == (4, 0)
        for C in collections:
            assert len(diff_set(T, C)) % 2 == 1


def test_incoherent_collection_structure():
    C = IncoherentCollection.split()
    assert C.finite_ramified == ()
    assert C.finite_discriminant == 1
    D = IncoherentCollection.from_pair(-1, 3)
    assert D.finite_ramified == (2, 3)
    assert D.finite_discriminant == 6
    assert signature(D.space.gram) == (3, 2)


def test_incoherent_collection_rejects_definite():
    with pytest.raises(ValueError, match="indefinite"):
        IncoherentCollection.from_pair(-1, -1)
    with pytest.raises(ValueError, match="nonzero"):
        IncoherentCollection.from_pair(0, 3)
