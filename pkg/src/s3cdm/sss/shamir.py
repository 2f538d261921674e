"""Shamir (t, n) threshold scheme over a prime field."""
import random
from typing import Dict, Iterable, Tuple, Union

# 2^256 - 189, the largest prime below 2^256; any 255-bit secret fits.
DEFAULT_PRIME = 2**256 - 189


class InsufficientSharesError(ValueError):
    """Fewer shares than the threshold were supplied."""


def shamir_setup(
    threshold: int,
    participants: int,
    secret: int,
    rng: random.Random,
    prime: int = DEFAULT_PRIME,
) -> Dict[int, int]:
    """Split `secret` into shares (i, f(i)) of a random degree-(t-1) polynomial."""
    if threshold < 1 or threshold > participants:
        raise ValueError(f"invalid threshold parameters: t={threshold}, n={participants}")
    if not 0 <= secret < prime:
        raise ValueError("secret out of field range")
    coeffs = [secret] + [rng.randrange(prime) for _ in range(threshold - 1)]
    shares = {}
    for i in range(1, participants + 1):
        y = 0
        for power, c in enumerate(coeffs):
            y = (y + c * pow(i, power, prime)) % prime
        shares[i] = y
    return shares


def lagrange_at_zero(points: Iterable[Tuple[int, int]], prime: int) -> int:
    """Interpolate the polynomial through `points` and evaluate at x=0."""
    pts = list(points)
    total = 0
    for i, (x_i, y_i) in enumerate(pts):
        num, den = 1, 1
        for j, (x_j, _) in enumerate(pts):
            if i != j:
                num = (num * (-x_j)) % prime
                den = (den * (x_i - x_j)) % prime
        total = (total + y_i * num * pow(den, -1, prime)) % prime
    return total


def shamir_recover(
    shares: Union[Dict[int, int], Iterable[Tuple[int, int]]],
    threshold: int,
    prime: int = DEFAULT_PRIME,
) -> int:
    """Recover the secret from at least `threshold` shares.

    Exactly the first `threshold` shares in ascending index order are used, so
    the subset choice is deterministic.
    """
    if isinstance(shares, dict):
        pairs = sorted(shares.items())
    else:
        pairs = sorted(shares)
        xs = [x for x, _ in pairs]
        if len(set(xs)) != len(xs):
            raise ValueError("duplicate share x-coordinates")
    if len(pairs) < threshold:
        raise InsufficientSharesError(
            f"need {threshold} shares, got {len(pairs)}"
        )
    return lagrange_at_zero(pairs[:threshold], prime)
