"""Counting polynomial-type exceptional units on affine varieties.

Three mutually checking routes are implemented:

* ``brute_force_count``  -- literal enumeration of (O_K/n)^amb, the oracle;
  it never assumes smoothness or good reduction.
* ``theorem1_count``     -- the local-global product over primes dividing n,
  valid under good reduction; cost is independent of the exponents in n.
* ``example25_count``    -- the closed form for the circle x^2 + y^2 = c over
  Q(sqrt(-5)) with f = x - a, in two gating modes (see below).

Plus diagnostics: a lifting census between successive prime powers, a
Lang-Weil style deviation report, and an asymptotics series used to probe
error-term behaviour empirically.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    BadModulus,
    BadReduction,
    CapExceeded,
    ConstantPolynomial,
    NotQSqrtMinus5,
    UnitIdeal,
)
from .ideals import (
    factor_ideal,
    factor_poly_mod_p,
    ideal_norm,
    ideal_pow,
    prime_ideals_above,
)
from .number_ring import is_zero
from .polys import (
    check_good_reduction,
    compile_equations,
    eval_poly,
    iter_variety_points,
)
from .residues import (
    is_unit_mod,
    prime_ctx,
    reduce_mod,
    residue_ctx,
    residues,
)

log = logging.getLogger(__name__)

DEFAULT_CAP = 10 ** 8


@dataclass
class LocalData:
    """Per-prime fiber data feeding the product formula.

    factor = (count_X - count_N) / norm(p)^(amb - codim), exact.
    """

    prime: object
    count_X: int
    count_N: int
    factor: Fraction


@dataclass
class CountReport:
    modulus_norm: int
    exponent: int  # amb - codim
    locals: list
    total: int
    method: str  # formula | brute | both


@dataclass
class AsymptRecord:
    description: str
    N: int
    count: int
    ratio: Fraction
    omega: int
    sum_inv_sqrt: float
    sum_inv: float
    max_local_dev: float


def _check_f(f):
    if f.amb != 1:
        raise ValueError("f must be a univariate polynomial (amb = 1)")
    if f.is_constant():
        raise ConstantPolynomial("f must be non-constant")


def _chunk_ranges(total, workers):
    workers = max(1, min(workers, total)) if total else 1
    step = -(-total // workers)
    return [(s, min(s + step, total)) for s in range(0, total, step)]


def _sum_chunks(fn, total, workers):
    """Deterministic chunked sum of fn(start, stop) over [0, total).

    Chunks are contiguous index ranges, so the result is invariant under the
    worker count by construction.
    """
    chunks = _chunk_ranges(total, workers)
    if workers <= 1 or len(chunks) <= 1:
        return sum(fn(s, e) for s, e in chunks)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(lambda se: fn(*se), chunks))


def _exunit_flags(ctx, f):
    """flags[i] = True iff f(residue_i) is a unit mod the context ideal."""
    flags = []
    for rep in residues(ctx):
        val = eval_poly(f, (rep,), ctx)
        flags.append(is_unit_mod(ctx, val))
    return flags


_compile_equations = compile_equations


def brute_force_count(ring, V, f, n_ideal, cap=DEFAULT_CAP, workers=1):
    """Literal count of tuples on X with every f(x_i) a unit mod n."""
    _check_f(f)
    ctx = residue_ctx(ring, n_ideal)
    total = ctx.norm ** V.amb
    if total > cap:
        raise CapExceeded(f"{total} candidate tuples exceed the cap {cap}")
    flags = _exunit_flags(ctx, f)
    reps = list(residues(ctx))
    norm = ctx.norm
    amb = V.amb
    vanishes = _compile_equations(ctx, V.equations, reps)

    def count_range(start, stop):
        count = 0
        indices = [0] * amb
        for idx in range(start, stop):
            rem = idx
            ok = True
            for i in range(amb):
                rem, digit = divmod(rem, norm)
                if not flags[digit]:
                    ok = False
                    break
                indices[i] = digit
            if ok and vanishes(indices):
                count += 1
        return count

    return _sum_chunks(count_range, total, workers)


def local_counts(ring, V, f, prime_factor, cap=DEFAULT_CAP, workers=1):
    """#X(O_K/p), #N^f(p, X) and the exact local factor."""
    _check_f(f)
    ctx = prime_ctx(ring, prime_factor)
    total = ctx.norm ** V.amb
    if total > cap:
        raise CapExceeded(f"{total} candidate points exceed the cap {cap}")
    zero = ring.zero
    zero_flags = [
        eval_poly(f, (rep,), ctx) == zero for rep in residues(ctx)
    ]
    reps = list(residues(ctx))
    norm = ctx.norm
    amb = V.amb
    vanishes = _compile_equations(ctx, V.equations, reps)

    def count_range(start, stop):
        count_x = 0
        count_n = 0
        indices = [0] * amb
        for idx in range(start, stop):
            rem = idx
            hits_zero = False
            for i in range(amb):
                rem, digit = divmod(rem, norm)
                hits_zero = hits_zero or zero_flags[digit]
                indices[i] = digit
            if vanishes(indices):
                count_x += 1
                if hits_zero:
                    count_n += 1
        return (count_x, count_n)

    chunks = _chunk_ranges(total, workers)
    if workers <= 1 or len(chunks) <= 1:
        results = [count_range(s, e) for s, e in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda se: count_range(*se), chunks))
    count_x = sum(r[0] for r in results)
    count_n = sum(r[1] for r in results)
    factor = Fraction(count_x - count_n, ctx.norm ** (V.amb - V.codim))
    return LocalData(
        prime=prime_factor, count_X=count_x, count_N=count_n, factor=factor
    )


def prime_power_count(ring, V, f, prime_factor, e, cap=DEFAULT_CAP, workers=1):
    """Exact count modulo p^e: q^((amb-d)(e-1)) times the local count."""
    report = check_good_reduction(ring, V, prime_factor, cap=cap)
    if not report.ok:
        raise BadReduction(prime_factor, report.witness)
    ld = local_counts(ring, V, f, prime_factor, cap=cap, workers=workers)
    q = prime_factor.norm
    return q ** ((V.amb - V.codim) * (e - 1)) * (ld.count_X - ld.count_N)


def theorem1_count(ring, V, f, n_ideal, cap=DEFAULT_CAP, workers=1):
    """The product formula: norm(n)^(amb-d) times the local factors.

    Only the per-prime enumeration caps apply; the modulus itself may be
    astronomically large as long as its primes are small.
    """
    _check_f(f)
    n_norm = ideal_norm(n_ideal)
    if n_norm < 2:
        raise UnitIdeal("modulus must be a proper ideal")
    factors = factor_ideal(ring, n_ideal)
    locals_ = []
    for pf in factors:
        report = check_good_reduction(ring, V, pf, cap=cap)
        if not report.ok:
            raise BadReduction(pf, report.witness)
        locals_.append(local_counts(ring, V, f, pf, cap=cap, workers=workers))
    exponent = V.amb - V.codim
    total = Fraction(n_norm ** exponent)
    for ld in locals_:
        total *= ld.factor
    assert total.denominator == 1, "product formula must clear denominators"
    total = int(total)
    assert 0 <= total <= n_norm ** V.amb
    return CountReport(
        modulus_norm=n_norm,
        exponent=exponent,
        locals=locals_,
        total=total,
        method="formula",
    )


def lifting_census(ring, V, prime_factor, k, cap=DEFAULT_CAP):
    """Histogram of lift multiplicities from X mod p^k to X mod p^(k+1).

    Under good reduction every point must lift in exactly norm(p)^(amb-d)
    ways, i.e. the histogram is a single bin.
    """
    report = check_good_reduction(ring, V, prime_factor, cap=cap)
    if not report.ok:
        raise BadReduction(prime_factor, report.witness)
    q = prime_factor.norm
    if q ** ((k + 1) * V.amb) > cap:
        raise CapExceeded(
            f"{q}^{(k + 1) * V.amb} candidate points exceed the cap {cap}"
        )
    pk = ideal_pow(ring, prime_factor.hnf, k)
    pk1 = ideal_pow(ring, prime_factor.hnf, k + 1)
    ctx_k = residue_ctx(ring, pk)
    ctx_k1 = residue_ctx(ring, pk1)
    lifts = {}
    for point in iter_variety_points(ctx_k, V):
        lifts[point] = 0
    for point in iter_variety_points(ctx_k1, V):
        base = tuple(reduce_mod(ctx_k, x) for x in point)
        lifts[base] += 1
    histogram = {}
    for n_lifts in lifts.values():
        histogram[n_lifts] = histogram.get(n_lifts, 0) + 1
    return histogram


# --- Example: circle x^2 + y^2 = c over Q(sqrt(-5)), f = x - a ---

_QSQRT5_POLY = (5, 0, 1)


def _legendre(n, p):
    """Legendre symbol (n/p) for an odd prime p."""
    n %= p
    if n == 0:
        return 0
    r = pow(n, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def _m_of_p(p, a, c):
    if (c - a * a) % p == 0:
        return 2
    if (c - 2 * a * a) % p == 0:
        return 3
    return 4


def example25_count(ring, a, c, n_ideal, mode="corrected"):
    """Closed-form circle count over Q(sqrt(-5)).

    mode='corrected' weights the intersection by m(p) whenever c - a^2 is a
    square (including 0) in the residue field, which is what the direct count
    of the intersection set gives.  mode='strict_paper' keeps the printed
    (chi + 1)/2 gate, which diverges when chi = 0; the divergence is the
    point of exposing both modes.
    """
    if ring.min_poly != _QSQRT5_POLY:
        raise NotQSqrtMinus5("the closed form is specific to g = x^2 + 5")
    if mode not in ("corrected", "strict_paper"):
        raise ValueError(f"unknown mode {mode!r}")
    if c == 0:
        raise BadModulus("c must be nonzero")
    n_norm = ideal_norm(n_ideal)
    if n_norm < 2:
        raise UnitIdeal("modulus must be a proper ideal")
    if gcd(n_norm, 2 * c) != 1:
        raise BadModulus(f"norm {n_norm} must be coprime to 2c = {2 * c}")
    factors = factor_ideal(ring, n_ideal)
    by_p = {}
    for pf in factors:
        by_p.setdefault(pf.p, []).append(pf)

    locals_ = []
    total = Fraction(n_norm)
    for p, pfs in sorted(by_p.items()):
        g_factors = factor_poly_mod_p(ring.min_poly, p)
        if len(g_factors) == 2:
            splitting = "split"
        elif len(g_factors[0][0]) == 2:  # single linear factor, squared
            splitting = "ramified"
        else:
            splitting = "inert"
        # cross-check against the p mod 20 classification
        if splitting == "split":
            assert p % 20 in (1, 3, 7, 9), p
        elif splitting == "inert":
            assert p % 20 in (11, 13, 17, 19), p
        else:
            assert p == 5, p
        m = _m_of_p(p, a, c)
        if splitting == "inert":
            q = p * p
            count_x = q - 1  # -1 is always a square in F_{p^2}
            count_n = Fraction(m)  # c - a^2 is always a square in F_{p^2}
            factor = 1 - Fraction(1 + m, q)
        else:
            q = p
            chi_minus1 = _legendre(-1, p)
            chi = _legendre(c - a * a, p)
            if mode == "corrected":
                gate = Fraction(1) if chi >= 0 else Fraction(0)
            else:
                gate = Fraction(chi + 1, 2)
            count_x = q - chi_minus1
            count_n = gate * m
            factor = 1 - Fraction(chi_minus1 + gate * m, q)
        for pf in pfs:
            cn = int(count_n) if count_n.denominator == 1 else count_n
            locals_.append(
                LocalData(prime=pf, count_X=count_x, count_N=cn, factor=factor)
            )
            total *= factor
    if total.denominator == 1:
        total = int(total)
    return CountReport(
        modulus_norm=n_norm,
        exponent=1,
        locals=locals_,
        total=total,
        method="formula",
    )


# --- asymptotics diagnostics ---


def langweil_deviation(ring, V, prime_factor, cap=DEFAULT_CAP, workers=1):
    """Deviation of #X(O_K/p) from q^r against the reference bound.

    The bound uses the declared degree l as (l-1)(l-2) q^(r-1/2) plus an
    empirical 3l q^(r-1) stand-in for the unspecified lower-order constant.
    """
    report = check_good_reduction(ring, V, prime_factor, cap=cap)
    if not report.ok:
        raise BadReduction(prime_factor, report.witness)
    ctx = prime_ctx(ring, prime_factor)
    q = ctx.norm
    if q ** V.amb > cap:
        raise CapExceeded(f"{q}^{V.amb} candidate points exceed the cap {cap}")
    count_x = sum(1 for _ in iter_variety_points(ctx, V))
    r = V.amb - V.codim
    ell = V.declared_degree
    deviation = abs(count_x - q ** r)
    bound = (ell - 1) * (ell - 2) * q ** (r - 0.5) + 3 * ell * q ** (r - 1)
    return {
        "q": q,
        "count_X": count_x,
        "deviation": deviation,
        "bound": bound,
    }


def describe_ideal(ring, n_ideal):
    """Deterministic text form of an ideal via its prime factorization."""
    factors = factor_ideal(ring, n_ideal)
    parts = []
    for pf in sorted(factors, key=lambda f: (f.p, f.h_coeffs)):
        base = f"({pf.p},{list(pf.h_coeffs)})".replace(" ", "")
        parts.append(base if pf.exponent == 1 else f"{base}^{pf.exponent}")
    return "*".join(parts)


def asympt_series(ring, V, f, family, cap=DEFAULT_CAP, workers=1):
    """One AsymptRecord per modulus; bad-reduction members are skipped."""
    records = []
    for n_ideal in family:
        try:
            report = theorem1_count(ring, V, f, n_ideal, cap=cap, workers=workers)
        except BadReduction as exc:
            log.info("skipping modulus with bad reduction: %s", exc)
            continue
        ratio = Fraction(report.total, report.modulus_norm ** report.exponent)
        norms = [ld.prime.norm for ld in report.locals]
        max_dev = max((abs(ld.factor - 1) for ld in report.locals), default=Fraction(0))
        records.append(
            AsymptRecord(
                description=describe_ideal(ring, n_ideal),
                N=report.modulus_norm,
                count=report.total,
                ratio=ratio,
                omega=len(report.locals),
                sum_inv_sqrt=sum(q ** -0.5 for q in norms),
                sum_inv=sum(1.0 / q for q in norms),
                max_local_dev=float(max_dev),
            )
        )
    return records


def good_reduction_primes(ring, V, max_norm, cap=DEFAULT_CAP):
    """All prime ideals of norm <= max_norm at which X reduces well."""
    out = []
    p = 2
    while p <= max_norm:
        if all(p % d for d in range(2, int(p ** 0.5) + 1)):
            for pf in prime_ideals_above(ring, p):
                if pf.norm <= max_norm:
                    try:
                        if check_good_reduction(ring, V, pf, cap=cap).ok:
                            out.append(pf)
                    except CapExceeded:
                        log.info("skipping prime of norm %s: cap", pf.norm)
        p += 1
    return out
