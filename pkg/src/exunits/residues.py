"""Arithmetic in and enumeration of the quotient O_K / n.

Residues are canonical coordinate tuples: coordinate i lies in
[0, basis[i][i]) for the modulus HNF basis.  Arithmetic is exact ring
arithmetic followed by reduction; there are no precomputed tables.

Enumeration is fixed in lexicographic order of (c_{d-1}, ..., c_0), i.e.
the highest power-basis coordinate varies slowest; the index decoding in
``residues`` lets disjoint ranges be consumed independently (parallel
partitions must not change any result).
"""

from dataclasses import dataclass

from .errors import EvenCharacteristic, NotAUnit, NotPrime, UnitIdeal, ZeroIdeal
from .ideals import hnf_from_generators, ideal_norm
from .number_ring import elem_add, elem_mul, elem_sub, is_zero


@dataclass(frozen=True)
class ResidueCtx:
    """A number ring together with a proper modulus ideal.

    ``prime`` is set when the context was built from a PrimeFactor, which
    unlocks the residue-field operations (inversion, square classes).
    """

    ring: object
    modulus: object
    norm: int
    prime: object = None


def residue_ctx(ring, modulus):
    n = ideal_norm(modulus)
    if n < 2:
        raise UnitIdeal("modulus must be a proper ideal (norm >= 2)")
    return ResidueCtx(ring=ring, modulus=modulus, norm=n)


def prime_ctx(ring, prime_factor):
    return ResidueCtx(
        ring=ring,
        modulus=prime_factor.hnf,
        norm=prime_factor.norm,
        prime=prime_factor,
    )


def reduce_mod(ctx, a):
    """Canonical representative of a modulo the context ideal."""
    basis = ctx.modulus.basis
    c = list(a)
    for i in range(len(c) - 1, -1, -1):
        q = c[i] // basis[i][i]
        if q:
            row = basis[i]
            for j in range(i + 1):
                c[j] -= q * row[j]
    return tuple(c)


def residues(ctx, start=0, stop=None):
    """Yield canonical representatives for indices [start, stop).

    Index 0 is the zero residue; coordinate 0 is the least significant
    mixed-radix digit.
    """
    radices = [row[i] for i, row in enumerate(ctx.modulus.basis)]
    if stop is None:
        stop = ctx.norm
    for idx in range(start, stop):
        rem = idx
        coords = []
        for r in radices:
            rem, digit = divmod(rem, r)
            coords.append(digit)
        yield tuple(coords)


def add_mod(ctx, a, b):
    return reduce_mod(ctx, elem_add(ctx.ring, a, b))


def sub_mod(ctx, a, b):
    return reduce_mod(ctx, elem_sub(ctx.ring, a, b))


def mul_mod(ctx, a, b):
    return reduce_mod(ctx, elem_mul(ctx.ring, a, b))


def pow_mod(ctx, a, e):
    result = reduce_mod(ctx, ctx.ring.one)
    base = reduce_mod(ctx, a)
    while e:
        if e & 1:
            result = mul_mod(ctx, result, base)
        base = mul_mod(ctx, base, base)
        e >>= 1
    return result


def is_unit_mod(ctx, a):
    """True iff (a) + n = O_K, tested via the HNF of the joint span."""
    if ctx.prime is not None:
        # in a field, unit just means nonzero
        return not is_zero(reduce_mod(ctx, a))
    gens = list(ctx.modulus.basis) + [tuple(a)]
    try:
        joint = hnf_from_generators(ctx.ring, gens)
    except ZeroIdeal:
        return False
    return ideal_norm(joint) == 1


def field_inverse(ctx, a):
    """Inverse in the residue field O_K/p, as a^(q-2) by square-and-multiply."""
    if ctx.prime is None:
        raise NotPrime("field_inverse requires a prime modulus context")
    r = reduce_mod(ctx, a)
    if is_zero(r):
        raise NotAUnit("element lies in the prime ideal")
    return pow_mod(ctx, r, ctx.norm - 2)


def square_class(ctx, a):
    """Euler's criterion in the residue field: 0, +1 or -1."""
    if ctx.prime is None:
        raise NotPrime("square_class requires a prime modulus context")
    if ctx.norm % 2 == 0:
        raise EvenCharacteristic("square classes need odd residue field order")
    r = reduce_mod(ctx, a)
    if is_zero(r):
        return 0
    val = pow_mod(ctx, r, (ctx.norm - 1) // 2)
    if val == reduce_mod(ctx, ctx.ring.one):
        return 1
    assert val == reduce_mod(ctx, ctx.ring.from_int(-1))
    return -1
