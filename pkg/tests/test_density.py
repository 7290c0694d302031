from fractions import Fraction as F

import pytest

from steintile import density as den
from steintile.errors import CapExceededError, ValidationError


def test_exact_density_small_cases():
    assert den.multiples_density_exact(1) == F(1, 2)
    assert den.multiples_density_exact(2) == F(1, 2)
    assert den.multiples_density_exact(3) == F(7, 15)


def test_exact_density_cap():
    with pytest.raises(CapExceededError):
        den.multiples_density_exact(16)
    with pytest.raises(ValidationError):
        den.multiples_density_exact(0)


def test_sieve_counts():
    assert den.multiples_count_sieve(2, 100) == 50
    assert den.multiples_count_sieve(3, 60) == 28
    with pytest.raises(CapExceededError):
        den.multiples_count_sieve(3, 10**9)


def test_sieve_matches_exact_density_within_truncation():
    X = 10**5
    for N in range(1, 13):
        diff = abs(den.multiples_count_sieve(N, X) - den.multiples_density_exact(N) * X)
        assert diff <= 2**N


def test_union_count_window():
    assert den.union_count_window(2) == 4
    assert den.union_count_window(3) == 9
    assert den.union_count_window(5) == 24


def test_union_window_two_paths_agree():
    for N in range(1, 13):
        X = 2 * N * N
        assert den._count_by_inclusion_exclusion(N, X) == den.union_count_window(N)


def test_inclusion_exclusion_count_against_naive():
    for N, X in [(2, 37), (3, 100), (4, 77), (6, 200)]:
        naive = sum(1 for v in range(1, X + 1)
                    if any(v % q == 0 for q in range(N + 1, 2 * N + 1)))
        assert den._count_by_inclusion_exclusion(N, X) == naive
        assert den.multiples_count_sieve(N, X) == naive


def test_tenenbaum_reference():
    v = den.tenenbaum_reference(100)
    assert abs(v - 0.8768) < 5e-4
    import math
    assert den.tenenbaum_reference(3) == math.log(3) ** (-0.086071)
    with pytest.raises(ValidationError):
        den.tenenbaum_reference(2)
    assert den.TENENBAUM_DELTA_TEXT == "0.086071"


def test_density_report_json():
    rep = den.density_report(3, 60)
    doc = rep.to_json()
    assert doc["N"] == 3
    assert doc["sieve_count"] == 28
    assert doc["exact_density"] == "7/15"
    assert doc["sieve_density"] == "7/15"
    assert doc["reference_delta"] == "0.086071"
    # exact density omitted when beyond the inclusion-exclusion cap
    rep = den.density_report(20, 1000)
    assert rep.exact_density is None
