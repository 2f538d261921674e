"""Enumeration of minimal authorized subsets for (t, n) threshold schemes."""
import itertools
from typing import List, Tuple


def enumerate_minimal_authorized_subsets(n: int, t: int) -> List[Tuple[int, ...]]:
    """All size-t subsets of participants {1..n}, lexicographically ordered.

    Each subset is an ascending tuple of participant indices.  For example
    (n=3, t=2) yields [(1, 2), (1, 3), (2, 3)].
    """
    if t < 1 or n < 1 or t > n:
        raise ValueError(f"invalid threshold parameters: t={t}, n={n}")
    return list(itertools.combinations(range(1, n + 1), t))
