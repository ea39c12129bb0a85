import random

import pytest

from exunits import (
    EvenCharacteristic,
    NotAUnit,
    NotPrime,
    UnitIdeal,
    factor_ideal,
    field_inverse,
    hnf_from_generators,
    ideal_contains,
    ideal_mul,
    is_unit_mod,
    make_number_ring,
    prime_ctx,
    principal_ideal,
    reduce_mod,
    residue_ctx,
    residues,
    square_class,
    unit_ideal,
)
from exunits.number_ring import elem_sub, is_zero
from exunits.residues import mul_mod


@pytest.fixture
def q5():
    return make_number_ring([5, 0, 1])


@pytest.fixture
def p3(q5):
    return factor_ideal(q5, principal_ideal(q5, (3, 0)))[0]


@pytest.fixture
def ctx3(q5, p3):
    return prime_ctx(q5, p3)


class TestReduce:
    def test_theta_reduces_to_two(self, ctx3):
        assert reduce_mod(ctx3, (0, 1)) == (2, 0)

    def test_generator_to_zero(self, ctx3):
        assert reduce_mod(ctx3, (3, 0)) == (0, 0)

    def test_already_canonical(self, ctx3):
        assert reduce_mod(ctx3, (1, 0)) == (1, 0)

    def test_idempotent_and_coset_constant(self, ctx3, q5, p3):
        rng = random.Random(3)
        for _ in range(50):
            a = (rng.randint(-40, 40), rng.randint(-40, 40))
            r = reduce_mod(ctx3, a)
            assert reduce_mod(ctx3, r) == r
            assert ideal_contains(p3.hnf, elem_sub(q5, a, r))


class TestEnumeration:
    def test_prime_three(self, ctx3):
        assert list(residues(ctx3)) == [(0, 0), (1, 0), (2, 0)]

    def test_p3_squared(self, q5, p3):
        sq = ideal_mul(q5, p3.hnf, p3.hnf)
        ctx = residue_ctx(q5, sq)
        assert list(residues(ctx)) == [(k, 0) for k in range(9)]

    def test_norm_four(self, q5):
        ctx = residue_ctx(q5, principal_ideal(q5, (2, 0)))
        assert len(list(residues(ctx))) == 4

    def test_range_split(self, ctx3):
        full = list(residues(ctx3))
        assert list(residues(ctx3, 0, 2)) + list(residues(ctx3, 2)) == full

    def test_unit_ideal_rejected(self, q5):
        with pytest.raises(UnitIdeal):
            residue_ctx(q5, unit_ideal(q5))


class TestUnits:
    def test_theta_is_unit(self, q5, p3):
        ctx = residue_ctx(q5, p3.hnf)  # non-prime path on purpose
        assert is_unit_mod(ctx, (0, 1))

    def test_ideal_member_not_unit(self, q5, p3):
        ctx = residue_ctx(q5, p3.hnf)
        assert not is_unit_mod(ctx, (1, 1))
        assert not is_unit_mod(ctx, (0, 0))

    def test_prime_unit_count(self, q5):
        for n in (3, 7, 11):
            pf = factor_ideal(q5, principal_ideal(q5, (n, 0)))[0]
            ctx = prime_ctx(q5, pf)
            units = sum(1 for a in residues(ctx) if is_unit_mod(ctx, a))
            assert units == pf.norm - 1

    def test_composite_unit_count_is_totient(self, q5):
        # O/(3) = F3 x F3, so phi = 2*2 = 4
        ctx = residue_ctx(q5, principal_ideal(q5, (3, 0)))
        units = sum(1 for a in residues(ctx) if is_unit_mod(ctx, a))
        assert units == 4


class TestFieldOps:
    def test_inverse_of_two(self, ctx3):
        assert field_inverse(ctx3, (2, 0)) == (2, 0)

    def test_inverse_of_one(self, ctx3):
        assert field_inverse(ctx3, (1, 0)) == (1, 0)

    def test_inert_theta_inverse(self, q5):
        pf = factor_ideal(q5, principal_ideal(q5, (11, 0)))[0]
        ctx = prime_ctx(q5, pf)
        inv = field_inverse(ctx, (0, 1))
        assert mul_mod(ctx, (0, 1), inv) == reduce_mod(ctx, q5.one)

    def test_not_a_unit(self, ctx3):
        with pytest.raises(NotAUnit):
            field_inverse(ctx3, (3, 0))

    def test_not_prime_ctx(self, q5):
        ctx = residue_ctx(q5, principal_ideal(q5, (3, 0)))
        with pytest.raises(NotPrime):
            field_inverse(ctx, (1, 0))

    def test_inverse_property_random(self, q5):
        rng = random.Random(5)
        for n in (3, 7, 11):
            pf = factor_ideal(q5, principal_ideal(q5, (n, 0)))[0]
            ctx = prime_ctx(q5, pf)
            one = reduce_mod(ctx, q5.one)
            for _ in range(20):
                a = (rng.randint(-20, 20), rng.randint(-20, 20))
                if is_zero(reduce_mod(ctx, a)):
                    continue
                assert mul_mod(ctx, a, field_inverse(ctx, a)) == one


class TestSquareClass:
    def test_minus_one_mod_three(self, ctx3):
        assert square_class(ctx3, q5_minus_one()) == -1

    def test_minus_one_inert(self, q5):
        pf = factor_ideal(q5, principal_ideal(q5, (11, 0)))[0]
        ctx = prime_ctx(q5, pf)
        assert square_class(ctx, (-1, 0)) == 1

    def test_zero_class(self, ctx3):
        assert square_class(ctx3, (3, 0)) == 0

    def test_even_characteristic(self, q5):
        pf = factor_ideal(q5, principal_ideal(q5, (2, 0)))[0]
        ctx = prime_ctx(q5, pf)
        with pytest.raises(EvenCharacteristic):
            square_class(ctx, (1, 0))

    def test_squares_have_class_one(self, q5):
        for n in (3, 7, 11):
            pf = factor_ideal(q5, principal_ideal(q5, (n, 0)))[0]
            ctx = prime_ctx(q5, pf)
            for a in residues(ctx):
                if is_zero(a):
                    continue
                assert square_class(ctx, mul_mod(ctx, a, a)) == 1


def q5_minus_one():
    return (-1, 0)


class TestPartitionAndCRT:
    def test_partition_property(self, q5, ctx3, p3):
        reps = list(residues(ctx3))
        rng = random.Random(9)
        for _ in range(30):
            a = (rng.randint(-30, 30), rng.randint(-30, 30))
            matches = [
                r
                for r in reps
                if ideal_contains(p3.hnf, elem_sub(q5, a, r))
            ]
            assert len(matches) == 1
            assert matches[0] == reduce_mod(ctx3, a)

    def test_crt_bijection(self, q5):
        p3 = hnf_from_generators(q5, [(3, 0), (1, 1)])
        p7 = [
            pf.hnf
            for pf in factor_ideal(q5, principal_ideal(q5, (7, 0)))
        ][0]
        prod = ideal_mul(q5, p3, p7)
        ctx_m = residue_ctx(q5, p3)
        ctx_n = residue_ctx(q5, p7)
        ctx_mn = residue_ctx(q5, prod)
        images = {
            (reduce_mod(ctx_m, a), reduce_mod(ctx_n, a))
            for a in residues(ctx_mn)
        }
        assert len(images) == ctx_m.norm * ctx_n.norm == ctx_mn.norm
