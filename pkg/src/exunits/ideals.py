"""Nonzero integral ideals as full-rank Z-lattices in Hermite Normal Form.

Convention: basis rows are lattice vectors in theta-power coordinates,
lower-triangular with basis[i][j] = 0 for j > i, basis[i][i] > 0 and
0 <= basis[i][j] < basis[j][j] for j < i.  Row i therefore has its pivot in
column i.  This orientation is fixed so golden values are bit-exact.

Prime factorization goes through Dedekind-Kummer: primes above p are read off
from the factorization of g mod p, which is always valid here because the
order is Z[theta] (index 1).
"""

from dataclasses import dataclass
from math import gcd

from .errors import (
    FactorCapExceeded,
    NotFullRank,
    UnitIdeal,
    ZeroIdeal,
)
from .number_ring import elem_mul, is_zero

TRIAL_DIVISION_BOUND = 10 ** 6
COFACTOR_CAP = 10 ** 12


@dataclass(frozen=True)
class IdealHNF:
    """Lower-triangular HNF basis of a nonzero integral ideal."""

    basis: tuple  # tuple of row tuples


@dataclass(frozen=True)
class PrimeFactor:
    """One prime ideal (p, h(theta)) above a rational prime p.

    h_coeffs is a monic lift (constant first, entries in [0, p)) of an
    irreducible factor of g mod p; e_ram is its multiplicity in g mod p,
    f_res its degree, exponent the valuation of the factored ideal here.
    """

    p: int
    h_coeffs: tuple
    e_ram: int
    f_res: int
    exponent: int
    hnf: IdealHNF

    @property
    def norm(self):
        return self.p ** self.f_res


def _ext_gcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _span_rows(ring, vectors):
    """Row-style HNF of the Z-span of the given coordinate vectors.

    Returns a list indexed by pivot column; entry j is a row whose highest
    nonzero coordinate sits at column j (or None if the span misses that
    direction).
    """
    d = ring.deg
    rows = [None] * d
    stack = [list(v) for v in vectors if not is_zero(v)]
    while stack:
        v = stack.pop()
        for j in range(d - 1, -1, -1):
            if v[j] == 0:
                continue
            if rows[j] is None:
                if v[j] < 0:
                    v = [-x for x in v]
                rows[j] = v
                v = None
                break
            r = rows[j]
            g, x, y = _ext_gcd(r[j], v[j])
            new_r = [x * a + y * b for a, b in zip(r, v)]
            coef_r, coef_v = r[j] // g, v[j] // g
            v = [coef_r * b - coef_v * a for a, b in zip(r, v)]
            rows[j] = new_r
        if v is not None and any(v):
            stack.append(v)  # pragma: no cover - loop above always clears v
    return rows


def _reduce_off_diagonal(rows):
    d = len(rows)
    for i in range(d):
        for j in range(i - 1, -1, -1):
            q = rows[i][j] // rows[j][j]
            if q:
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[j])]
    return rows


def _hnf_from_span(ring, vectors):
    rows = _span_rows(ring, vectors)
    if any(r is None for r in rows):
        raise NotFullRank("generated lattice is not full rank")
    rows = _reduce_off_diagonal(rows)
    return IdealHNF(basis=tuple(tuple(r) for r in rows))


def hnf_from_generators(ring, gens):
    """HNF of the ideal generated by gens: span of theta^j * gen over Z."""
    gens = [tuple(g) for g in gens]
    if not gens or all(is_zero(g) for g in gens):
        raise ZeroIdeal("all generators are zero")
    theta = ring.theta
    vectors = []
    for g in gens:
        cur = g
        for _ in range(ring.deg):
            vectors.append(cur)
            cur = elem_mul(ring, cur, theta)
    return _hnf_from_span(ring, vectors)


def unit_ideal(ring):
    rows = tuple(
        tuple(1 if i == j else 0 for j in range(ring.deg)) for i in range(ring.deg)
    )
    return IdealHNF(basis=rows)


def principal_ideal(ring, a):
    return hnf_from_generators(ring, [a])


def ideal_norm(I):
    n = 1
    for i, row in enumerate(I.basis):
        n *= row[i]
    return n


def ideal_contains(I, a):
    """Membership by back-substitution on the triangular basis."""
    c = list(a)
    for i in range(len(c) - 1, -1, -1):
        piv = I.basis[i][i]
        if c[i] % piv != 0:
            return False
        q = c[i] // piv
        if q:
            for j in range(i + 1):
                c[j] -= q * I.basis[i][j]
    return True


def ideal_mul(ring, I, J):
    """HNF of the product ideal, spanned by pairwise basis-row products."""
    products = [elem_mul(ring, r, s) for r in I.basis for s in J.basis]
    theta = ring.theta
    vectors = []
    for v in products:
        cur = v
        for _ in range(ring.deg):
            vectors.append(cur)
            cur = elem_mul(ring, cur, theta)
    return _hnf_from_span(ring, vectors)


def ideal_pow(ring, I, e):
    if e < 0:
        raise ValueError("negative ideal power")
    result = unit_ideal(ring)
    base = I
    while e:
        if e & 1:
            result = ideal_mul(ring, result, base)
        base = ideal_mul(ring, base, base)
        e >>= 1
    return result


def ideal_eq(I, J):
    return I.basis == J.basis


# --- polynomials mod p (coefficient lists, constant first, trimmed) ---


def _trim(poly):
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_divmod_mod_p(num, den, p):
    num = [c % p for c in num]
    den = [c % p for c in den]
    _trim(num)
    _trim(den)
    inv_lead = pow(den[-1], -1, p)
    quot = [0] * (max(len(num) - len(den) + 1, 0))
    while len(num) >= len(den):
        shift = len(num) - len(den)
        coef = num[-1] * inv_lead % p
        quot[shift] = coef
        for i, c in enumerate(den):
            num[shift + i] = (num[shift + i] - coef * c) % p
        _trim(num)
    return quot, num


def factor_poly_mod_p(poly, p):
    """Complete factorization of a monic polynomial mod p.

    Deterministic trial division over all monic candidates of degree up to
    half the remaining degree, so only suitable for small p and small degree
    (the supported envelope).  Factors are returned as (monic lift constant
    first, multiplicity), sorted lexicographically by coefficient sequence.
    """
    work = [c % p for c in poly]
    _trim(work)
    factors = {}

    def smallest_factor(f):
        deg = len(f) - 1
        for fdeg in range(1, deg // 2 + 1):
            # iterate candidates in lexicographic order of (c0,...,c_{fdeg-1})
            cand = [0] * fdeg + [1]
            while True:
                _, rem = _poly_divmod_mod_p(f, cand, p)
                if not rem:
                    return list(cand)
                i = 0
                while i < fdeg and cand[i] == p - 1:
                    cand[i] = 0
                    i += 1
                if i == fdeg:
                    break
                cand[i] += 1
        return None  # irreducible

    while len(work) > 1:
        fac = smallest_factor(work)
        if fac is None:
            fac = list(work)
        key = tuple(fac)
        factors[key] = factors.get(key, 0) + 1
        work, rem = _poly_divmod_mod_p(work, fac, p)
        assert not rem
    return sorted(factors.items())


def _small_prime_factors(n):
    """Distinct prime factors of n by trial division up to the bound.

    The unfactored cofactor left after trial division must be 1 or a prime
    below the cofactor cap; bigger cofactors raise FactorCapExceeded.  This
    lets huge but smooth norms (e.g. powers of a small prime) through.
    """
    n = abs(n)
    primes = []
    d = 2
    while d * d <= n and d <= TRIAL_DIVISION_BOUND:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if n > COFACTOR_CAP:
            raise FactorCapExceeded(
                f"norm cofactor {n} exceeds the factorization cap"
            )
        # cofactor has no divisor below the trial bound and is at most the
        # cap (< bound squared), hence prime
        primes.append(n)
    return primes


def prime_ideals_above(ring, p):
    """Dedekind-Kummer: prime ideals above p, from the factorization of g mod p.

    Each PrimeFactor carries exponent = e_ram, i.e. the valuation of (p).
    """
    out = []
    for h, mult in factor_poly_mod_p(ring.min_poly, p):
        h_elem = list(h) + [0] * (ring.deg - len(h))
        gens = [ring.from_int(p)]
        # h(theta) as an element: substitute theta into the lift
        if len(h) - 1 < ring.deg:
            gens.append(tuple(h_elem[: ring.deg]))
        else:
            gens.append(ring.zero)  # h = g: ideal is just (p)
        hnf = hnf_from_generators(ring, [g for g in gens if not is_zero(g)])
        out.append(
            PrimeFactor(
                p=p,
                h_coeffs=tuple(h),
                e_ram=mult,
                f_res=len(h) - 1,
                exponent=mult,
                hnf=hnf,
            )
        )
    return out


def valuation(ring, I, pf):
    """Largest k with I contained in pf^k, by successive power containment."""
    k = 0
    power = pf.hnf
    while all(ideal_contains(power, row) for row in I.basis):
        k += 1
        power = ideal_mul(ring, power, pf.hnf)
    return k


def factor_ideal(ring, I):
    """Prime ideal factorization of a proper ideal, verified by reassembly."""
    n = ideal_norm(I)
    if n == 1:
        raise UnitIdeal("cannot factor the unit ideal")
    result = []
    for p in _small_prime_factors(n):
        for pf in prime_ideals_above(ring, p):
            e = valuation(ring, I, pf)
            if e > 0:
                result.append(
                    PrimeFactor(
                        p=pf.p,
                        h_coeffs=pf.h_coeffs,
                        e_ram=pf.e_ram,
                        f_res=pf.f_res,
                        exponent=e,
                        hnf=pf.hnf,
                    )
                )
    product = unit_ideal(ring)
    for pf in result:
        product = ideal_mul(ring, product, ideal_pow(ring, pf.hnf, pf.exponent))
    if not ideal_eq(product, I):
        raise NotFullRank(
            "prime factorization does not reassemble the ideal; "
            "the defining polynomial is likely reducible or the order non-maximal"
        )
    return result
