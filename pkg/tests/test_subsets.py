
import pytest

from s3cdm.sss import enumerate_minimal_authorized_subsets


def brute_force_subsets(n, t):
    """Oracle: scan all bitmasks of {1..n} and keep those with popcount t."""
    out = []
    for mask in range(1 << n):
        members = [i + 1 for i in range(n) if mask >> i & 1]
        if len(members) == t:
            out.append(tuple(members))
    return sorted(out)


def test_3_2_matches_worked_example():
    assert enumerate_minimal_authorized_subsets(3, 2) == [(1, 2), (1, 3), (2, 3)]


def test_full_subset_is_single():
    assert enumerate_minimal_authorized_subsets(4, 4) == [(1, 2, 3, 4)]


def test_5_3_against_bitmask_oracle():
    subsets = enumerate_minimal_authorized_subsets(5, 3)
    assert len(subsets) == 10
    assert subsets[0] == (1, 2, 3)
    assert subsets[-1] == (3, 4, 5)
    assert subsets == brute_force_subsets(5, 3)


@pytest.mark.parametrize("n,t", [(n, t) for n in range(1, 7) for t in range(1, n + 1)])
def test_all_small_cases_match_oracle(n, t):
    assert enumerate_minimal_authorized_subsets(n, t) == brute_force_subsets(n, t)


@pytest.mark.parametrize("n,t", [(3, 4), (3, 0), (0, 1), (5, -1)])
def test_invalid_parameters_rejected(n, t):
    with pytest.raises(ValueError):
        enumerate_minimal_authorized_subsets(n, t)


def test_ordering_is_lexicographic():
    subsets = enumerate_minimal_authorized_subsets(6, 2)
    assert subsets == sorted(subsets)
    assert all(s == tuple(sorted(s)) for s in subsets)
