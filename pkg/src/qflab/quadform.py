"""Symmetric bilinear forms over Q and Z_p (p odd).

Covers exact symmetric matrices, Jordan diagonalization, Hasse invariants,
local representation decisions, the specific rank-5 spaces used elsewhere,
and the set of places where an incoherent collection fails to represent a
target form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint

from .padic import (
    INFINITE_PLACE,
    Place,
    Rational,
    check_odd_prime,
    chi,
    hilbert,
    unit_part,
    valuation,
)


def frac_str(x: Rational) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


class SymMat:
    """Symmetric matrix with exact rational entries."""

    def __init__(self, entries):
        rows = tuple(tuple(Fraction(x) for x in row) for row in entries)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix must be symmetric")
        self.entries = rows
        self.n = n
        self._det = None

    @classmethod
    def diag(cls, *values: Rational) -> "SymMat":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, SymMat) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        if all(self.entries[i][j] == 0 for i in range(self.n) for j in range(self.n) if i != j):
            inner = ",".join(str(self.entries[i][i]) for i in range(self.n))
            return f"SymMat.diag({inner})"
        return f"SymMat({[list(r) for r in self.entries]})"

    @property
    def det(self) -> Fraction:
        if self._det is None:
            self._det = _det(self.entries)
        return self._det

    @property
    def is_nonsingular(self) -> bool:
        return self.det != 0

    def is_p_integral(self, p: int) -> bool:
        return all(x == 0 or valuation(x, p) >= 0 for row in self.entries for x in row)

    def principal_block(self, start: int, size: int) -> "SymMat":
        return SymMat([row[start:start + size] for row in self.entries[start:start + size]])

    def apply(self, x) -> Fraction:
        """Value of the quadratic form: x^T M x."""
        x = [Fraction(v) for v in x]
        return sum(self.entries[i][j] * x[i] * x[j] for i in range(self.n) for j in range(self.n))

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[frac_str(x) for x in row] for row in self.entries]}

    @classmethod
    def from_json(cls, data: dict) -> "SymMat":
        m = cls([[parse_frac(x) for x in row] for row in data["entries"]])
        if m.n != data["n"]:
            raise ValueError("matrix size does not match declared n")
        return m


def _det(rows) -> Fraction:
    # fraction-exact Gaussian elimination
    n = len(rows)
    m = [list(row) for row in rows]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            c = m[i][k] / m[k][k]
            if c:
                m[i] = [a - c * b for a, b in zip(m[i], m[k])]
    return det


def _sym_swap(m, i, j):
    m[i], m[j] = m[j], m[i]
    for row in m:
        row[i], row[j] = row[j], row[i]


def _sym_add(m, i, j, c=Fraction(1)):
    # basis move x_i -> x_i + c*x_j (congruence: row then column)
    n = len(m)
    for t in range(n):
        m[i][t] += c * m[j][t]
    for t in range(n):
        m[t][i] += c * m[t][j]


def rational_diagonalization(T: SymMat) -> tuple[Fraction, ...]:
    """Diagonal entries of a congruent diagonal form over Q (zeros for the radical)."""
    n = T.n
    m = [list(row) for row in T.entries]
    out = []
    for k in range(n):
        if m[k][k] == 0:
            i = next((i for i in range(k, n) if m[i][i] != 0), None)
            if i is not None:
                _sym_swap(m, k, i)
            else:
                pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if m[i][j] != 0), None)
                if pair is None:
                    out.extend(Fraction(0) for _ in range(k, n))
                    break
                _sym_add(m, pair[0], pair[1])
                _sym_swap(m, k, pair[0])
        d = m[k][k]
        for r in range(k + 1, n):
            if m[r][k]:
                _sym_add(m, r, k, -m[r][k] / d)
        out.append(d)
    return tuple(out)


def signature(T: SymMat) -> tuple[int, int]:
    """(positive, negative) inertia indices; requires a nonsingular form."""
    if not T.is_nonsingular:
        raise ValueError("signature requires a nonsingular form")
    d = rational_diagonalization(T)
    return sum(1 for x in d if x > 0), sum(1 for x in d if x < 0)


def least_nonsquare(p: int) -> int:
    check_odd_prime(p)
    return next(u for u in range(2, p) if chi(u, p) == -1)


@dataclass(frozen=True)
class JordanDiagonal:
    """Exponent/unit-class data of a Z_p-diagonalized form, exponents nondecreasing."""

    terms: tuple[tuple[int, int], ...]  # (exponent, unit class sign)
    p: int

    def __post_init__(self):
        exps = [a for a, _ in self.terms]
        if exps != sorted(exps) or any(a < 0 for a in exps):
            raise ValueError("exponents must be nondecreasing and nonnegative")
        if any(s not in (1, -1) for _, s in self.terms):
            raise ValueError("unit classes must be +1 or -1")

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.terms)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.terms)

    @property
    def rank(self) -> int:
        return len(self.terms)

    @property
    def unimodular_terms(self) -> tuple[tuple[int, int], ...]:
        return tuple(t for t in self.terms if t[0] == 0)

    def diagonal_rep(self) -> tuple[int, ...]:
        """Integer diagonal Z_p-equivalent to the original form."""
        ns = least_nonsquare(self.p)
        return tuple((1 if s == 1 else ns) * self.p**a for a, s in self.terms)


def jordan_diagonalize(T: SymMat, p: int) -> JordanDiagonal:
    """Split T into p-power-scaled unit classes via congruence moves over Z_p.

    Pivots on an entry of minimal valuation (diagonal preferred); off-diagonal
    pivots are pulled onto the diagonal with x_i -> x_i + x_j, which keeps the
    minimal valuation only because p is odd.
    """
    check_odd_prime(p)
    if not T.is_p_integral(p):
        raise ValueError("Jordan form requires p-integral entries")
    if not T.is_nonsingular:
        raise ValueError("Jordan form requires nonsingular input")
    n = T.n
    m = [list(row) for row in T.entries]
    diag = []
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(i, n):
                if m[i][j] != 0:
                    key = (valuation(m[i][j], p), 0 if i == j else 1, i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        _, i, j = best
        if i != j:
            _sym_add(m, i, j)
        if i != k:
            _sym_swap(m, k, i)
        d = m[k][k]
        for r in range(k + 1, n):
            if m[r][k]:
                _sym_add(m, r, k, -m[r][k] / d)
        diag.append(d)
    terms = sorted(((valuation(d, p), chi(unit_part(d, p), p)) for d in diag), key=lambda t: t[0])
    return JordanDiagonal(tuple(terms), p)


class QuadSpace:
    """Nonsingular quadratic space over Q with cached local invariants."""

    def __init__(self, gram: SymMat):
        if not gram.is_nonsingular:
            raise ValueError("quadratic space requires a nonsingular Gram matrix")
        self.gram = gram
        self.diagonal = tuple(d for d in rational_diagonalization(gram))
        self.det = gram.det
        self.signature = (
            sum(1 for x in self.diagonal if x > 0),
            sum(1 for x in self.diagonal if x < 0),
        )

    @classmethod
    def from_diagonal(cls, values) -> "QuadSpace":
        return cls(SymMat.diag(*values))

    @property
    def rank(self) -> int:
        return self.gram.n

    def hasse(self, v: Place) -> int:
        return hasse_of_diagonal(self.diagonal, v)

    def __repr__(self):
        return f"QuadSpace({self.gram!r})"


def hasse_of_diagonal(diag, v: Place) -> int:
    """Product of Hilbert symbols (d_i, d_j)_v over i < j."""
    diag = [Fraction(d) for d in diag]
    s = 1
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            s *= hilbert(diag[i], diag[j], v)
    return s


def hasse(Q: QuadSpace, v: Place) -> int:
    return Q.hasse(v)


def is_local_square(x: Rational, v: Place) -> bool:
    x = Fraction(x)
    if x == 0:
        raise ValueError("square class of zero undefined")
    if not v.is_finite:
        return x > 0
    p = v.prime
    if valuation(x, p) % 2:
        return False
    u = unit_part(x, p)
    if p == 2:
        return u.numerator * pow(u.denominator, -1, 8) % 8 == 1
    return chi(u, p) == 1


# Canonical rank-5 spaces and their oracle-ready diagonals.

def base_diagonal(r: int = 0) -> tuple[int, ...]:
    """Diagonalized base space, with r extra split planes appended."""
    return (1, 1, -1, 1, -1) + (1, -1) * r


def base_space() -> QuadSpace:
    return QuadSpace.from_diagonal(base_diagonal())


def split_diagonal(rank: int) -> tuple[int, ...]:
    if rank % 2:
        raise ValueError("split form has even rank")
    return (1, -1) * (rank // 2)


def twisted_diagonal(p: int) -> tuple[int, ...]:
    """Rank-5 twisted space at p: <1> plus the norm form of the ramified quaternions."""
    b = least_nonsquare(p)
    return (1, 1, -b, -p, b * p)


def twisted_complement_diagonal(p: int) -> tuple[int, ...]:
    # the rank-4 quaternion norm form left after splitting off <1>
    b = least_nonsquare(p)
    return (1, -b, -p, b * p)


def twisted_space(p: int) -> QuadSpace:
    return QuadSpace.from_diagonal(twisted_diagonal(p))


def represents_local(S: QuadSpace, T: SymMat, v: Place) -> bool:
    """Whether the rank-5 space S represents the form T over the completion at v.

    Finite places, by corank: equal-rank comparison after forcing the
    determinant (rank 4); a rank-3 target needs a binary complement R with
    forced determinant class, and the only obstruction is det R ~ -1 (then R
    is hyperbolic with Hasse +1) while the forced Hasse of R is -1; corank
    >= 3 always represents. At the real place: signature containment.
    """
    if S.rank != 5:
        raise ValueError("representation test requires a rank-5 space")
    if not (1 <= T.n <= 4):
        raise ValueError("target rank must be between 1 and 4")
    if not T.is_nonsingular:
        raise ValueError("target must be nonsingular")
    if not v.is_finite:
        tp, tn = signature(T)
        sp, sn = S.signature
        return tp <= sp and tn <= sn
    n = T.n
    if n <= 2:
        return True
    diag_t = rational_diagonalization(T)
    det_t = T.det
    if n == 4:
        forced = det_t * S.det
        return hasse_of_diagonal(diag_t + (forced,), v) == S.hasse(v)
    det_r = S.det * det_t
    required = S.hasse(v) * hasse_of_diagonal(diag_t, v) * hilbert(det_t, det_r, v)
    return not (is_local_square(-det_r, v) and required == -1)


def represents_one_over_Zp(T: SymMat, p: int) -> bool:
    """Whether some x over Z_p has x^T T x = 1, via the unimodular Jordan part.

    A unimodular part of rank >= 2 covers every unit class mod p and lifts;
    rank 1 works only for the square class; no unimodular part leaves all
    values divisible by p.
    """
    jd = jordan_diagonalize(T, p)
    uni = jd.unimodular_terms
    if len(uni) >= 2:
        return True
    return len(uni) == 1 and uni[0][1] == 1


class IncoherentCollection:
    """Local spaces of the completed quaternion construction, flipped at the real place.

    B is any object with nonzero rational fields a, b (i^2 = a, j^2 = b) that
    is indefinite, i.e. split at the real place. Finite local spaces all come
    from the rank-5 space <1> + norm(B); the real member is positive definite.
    """

    def __init__(self, B):
        a, b = Fraction(B.a), Fraction(B.b)
        if a == 0 or b == 0:
            raise ValueError("quaternion structure constants must be nonzero")
        if hilbert(a, b, INFINITE_PLACE) == -1:
            raise ValueError("incoherent collection requires an indefinite quaternion algebra")
        self.a = a
        self.b = b
        self.space = QuadSpace.from_diagonal((1, 1, -a, -b, a * b))
        self.finite_ramified = tuple(
            q for q in _candidate_primes(2 * a * b) if hilbert(a, b, Place(q)) == -1
        )
        self.finite_discriminant = 1
        for q in self.finite_ramified:
            self.finite_discriminant *= q

    @classmethod
    def split(cls) -> "IncoherentCollection":
        return cls.from_pair(1, 1)

    @classmethod
    def from_pair(cls, a: Rational, b: Rational) -> "IncoherentCollection":
        holder = type("_B", (), {"a": a, "b": b})
        return cls(holder)


def _candidate_primes(x: Fraction) -> list[int]:
    x = Fraction(x)
    primes = set(factorint(x.numerator)) | set(factorint(x.denominator))
    primes.discard(-1)
    primes.add(2)
    return sorted(primes)


def diff_set(T: SymMat, C: IncoherentCollection) -> set[Place]:
    """Places where the collection fails to represent T.

    The finite search runs over primes dividing 2 D(B) det(2T); everywhere
    else both sides are unimodular of rank 5 at odd primes and the
    comparison passes. The real place joins exactly for signatures (3,1)
    and (1,3); other indefinite signatures never contribute it.
    """
    if T.n != 4 or not T.is_nonsingular:
        raise ValueError("Diff requires a nonsingular rank-4 form")
    bound = 2 * C.finite_discriminant * 16 * T.det
    out = set()
    for q in _candidate_primes(bound):
        if not represents_local(C.space, T, Place(q)):
            out.add(Place(q))
    if signature(T) in ((3, 1), (1, 3)):
        out.add(INFINITE_PLACE)
    return out
