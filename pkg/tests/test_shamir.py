import itertools
import random

import pytest

from s3cdm.sss import (
    DEFAULT_PRIME,
    InsufficientSharesError,
    lagrange_at_zero,
    shamir_recover,
    shamir_setup,
)

P = 257


def test_hand_checked_polynomial_values():
    # f(x) = 123 + 45x mod 257
    rng = random.Random()
    rng.randrange = lambda p: 45  # force the single random coefficient
    shares = shamir_setup(2, 3, 123, rng, prime=P)
    assert shares == {1: 168, 2: 213, 3: 1}


def test_recover_from_hand_checked_shares():
    assert shamir_recover({1: 168, 2: 213}, 2, prime=P) == 123
    assert shamir_recover({1: 168, 3: 1}, 2, prime=P) == 123
    assert shamir_recover({2: 213, 3: 1}, 2, prime=P) == 123


def test_threshold_one_shares_equal_secret():
    shares = shamir_setup(1, 4, 99, random.Random(1), prime=P)
    assert all(y == 99 for y in shares.values())


def test_roundtrip_default_prime():
    rng = random.Random(2)
    secret = rng.randrange(DEFAULT_PRIME)
    shares = shamir_setup(3, 5, secret, rng)
    for subset in itertools.combinations(shares.items(), 3):
        assert shamir_recover(dict(subset), 3) == secret


def test_insufficient_shares_rejected():
    shares = shamir_setup(3, 5, 42, random.Random(3), prime=P)
    with pytest.raises(InsufficientSharesError):
        shamir_recover({1: shares[1], 2: shares[2]}, 3, prime=P)


def test_duplicate_x_coordinates_rejected():
    with pytest.raises(ValueError):
        shamir_recover([(1, 10), (1, 11), (2, 12)], 2, prime=P)


def test_secret_out_of_field_rejected():
    with pytest.raises(ValueError):
        shamir_setup(2, 3, P + 5, random.Random(4), prime=P)
    with pytest.raises(ValueError):
        shamir_setup(2, 3, -1, random.Random(4), prime=P)


def test_uses_first_t_shares_deterministically():
    rng = random.Random(5)
    shares = shamir_setup(2, 4, 77, rng, prime=P)
    # extra shares beyond t are ignored; recovery is still correct
    assert shamir_recover(shares, 2, prime=P) == 77


def test_against_independent_lagrange_oracle():
    rng = random.Random(6)
    for _ in range(25):
        t = rng.randint(1, 4)
        n = rng.randint(t, 5)
        secret = rng.randrange(P)
        shares = shamir_setup(t, n, secret, rng, prime=P)
        for subset in itertools.combinations(sorted(shares.items()), t):
            assert lagrange_at_zero(subset, P) == secret
