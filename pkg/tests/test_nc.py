"""Never-connect decision vs direct power-equality search."""

from __future__ import annotations

from fractions import Fraction

import pytest

from lelekfan import NcViolation, PreconditionError, check_nc, power, require_nc
from oracles import nc_brute_witness, nc_merge_witness


def test_dependent_pair_one_half_two():
    verdict = check_nc(Fraction(1, 2), Fraction(2))
    assert not verdict.is_nc
    assert verdict.witness == (1, -1)
    assert power(Fraction(1, 2), 1) == power(Fraction(2), -1)


def test_independent_pair_one_half_three():
    # oracle: no equality anywhere on the exponent grid
    assert nc_brute_witness(Fraction(1, 2), Fraction(3)) is None
    verdict = check_nc(Fraction(1, 2), Fraction(3))
    assert verdict.is_nc
    assert verdict.witness is None


def test_dependent_pair_four_ninths():
    verdict = check_nc(Fraction(4, 9), Fraction(27, 8))
    assert not verdict.is_nc
    assert verdict.witness == (3, -2)
    assert power(Fraction(4, 9), 3) == power(Fraction(27, 8), -2) == Fraction(64, 729)


def test_witness_reevaluates_exactly():
    for r, rho in [(Fraction(1, 2), Fraction(4)), (Fraction(2, 3), Fraction(9, 4)), (Fraction(8, 27), Fraction(9, 4))]:
        verdict = check_nc(r, rho)
        assert not verdict.is_nc
        k, l = verdict.witness
        assert k > 0
        assert power(r, k) == power(rho, l)


def test_agrees_with_brute_force_on_small_pool():
    pool_r = [Fraction(p, q) for q in range(2, 13) for p in range(1, q)]
    pool_rho = [Fraction(q, p) for q in range(2, 13) for p in range(1, q)]
    for r in pool_r[::5]:
        for rho in pool_rho[::5]:
            brute = nc_brute_witness(r, rho)
            verdict = check_nc(r, rho)
            assert verdict.is_nc == (brute is None), (r, rho, brute, verdict)
            assert nc_merge_witness(r, rho) == brute, (r, rho)


def test_constructed_dependent_pairs_yield_minimal_witnesses():
    import random

    rng = random.Random(99)
    for _ in range(40):
        s = rng.randint(2, 9)
        t = rng.randint(1, s - 1)
        base = Fraction(s, t)
        r = base ** -rng.randint(1, 4)
        rho = base ** rng.randint(1, 4)
        verdict = check_nc(r, rho)
        assert not verdict.is_nc
        # the naive brute's first hit is the minimal positive k
        assert verdict.witness == nc_brute_witness(r, rho, bound=64)


def test_preconditions_name_the_violated_clause():
    with pytest.raises(PreconditionError, match="0 < r < 1"):
        check_nc(Fraction(3, 2), Fraction(3))
    with pytest.raises(PreconditionError, match="rho > 1"):
        check_nc(Fraction(1, 2), Fraction(2, 3))
    with pytest.raises(PreconditionError, match="0 < r < 1"):
        check_nc(Fraction(0), Fraction(3))
    with pytest.raises(PreconditionError, match="0 < r < 1"):
        check_nc(Fraction(1), Fraction(3))


def test_require_nc_raises_with_witness():
    with pytest.raises(NcViolation) as info:
        require_nc(Fraction(1, 2), Fraction(2))
    assert info.value.witness == (1, -1)
    require_nc(Fraction(1, 2), Fraction(3))  # no raise
