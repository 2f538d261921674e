"""Hash-based (t, n) threshold secret sharing.

Setup draws n distinct random shares of digest length.  For every minimal
authorized subset the shares are concatenated in ascending participant order
and hashed; a public control value XORs that hash onto the common secret.
Recovery re-hashes a subset's shares and XORs with the matching control.
"""
import hashlib
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .subsets import enumerate_minimal_authorized_subsets

HASH_NAME = "sha256"
DIGEST_LEN = hashlib.new(HASH_NAME).digest_size


class ControlNotFoundError(KeyError):
    """No control record exists for the presented participant set."""


class LengthMismatchError(ValueError):
    """Control or share length disagrees with the digest length."""


@dataclass(frozen=True)
class ControlRecord:
    subset: Tuple[int, ...]
    control: bytes


def xor_bytes(a: bytes, b: bytes) -> bytes:
    if len(a) != len(b):
        raise LengthMismatchError(f"length mismatch: {len(a)} vs {len(b)}")
    return bytes(x ^ y for x, y in zip(a, b))


def _digest(data: bytes) -> bytes:
    return hashlib.new(HASH_NAME, data).digest()


def hash_setup(
    threshold: int,
    participants: int,
    rng: random.Random,
    secret: Optional[bytes] = None,
) -> Tuple[bytes, Dict[int, bytes], List[ControlRecord]]:
    """Generate (secret, shares by participant index, control records).

    The secret is freshly random unless the caller supplies one.  Shares are
    regenerated on the (astronomically rare) collision so they are always
    distinct.
    """
    subsets = enumerate_minimal_authorized_subsets(participants, threshold)
    if secret is None:
        secret = rng.randbytes(DIGEST_LEN)
    elif len(secret) != DIGEST_LEN:
        raise LengthMismatchError(f"secret must be {DIGEST_LEN} bytes")

    shares: Dict[int, bytes] = {}
    seen = set()
    for i in range(1, participants + 1):
        s = rng.randbytes(DIGEST_LEN)
        while s in seen:
            s = rng.randbytes(DIGEST_LEN)
        seen.add(s)
        shares[i] = s

    controls = []
    for subset in subsets:
        private_message = b"".join(shares[i] for i in subset)
        h_i = _digest(private_message)
        controls.append(ControlRecord(subset=subset, control=xor_bytes(h_i, secret)))
    return secret, shares, controls


def hash_recover(shares: Dict[int, bytes], controls: List[ControlRecord]) -> bytes:
    """Recover a secret candidate from a subset's shares.

    Shares are sorted by participant index before concatenation.  The caller
    decides validity (e.g. by database lookup); a wrong share simply yields a
    wrong candidate.
    """
    if not shares:
        raise ValueError("no shares provided")
    indices = tuple(sorted(shares))
    record = next((c for c in controls if c.subset == indices), None)
    if record is None:
        raise ControlNotFoundError(f"control not found for subset {list(indices)}")
    private_message = b"".join(shares[i] for i in indices)
    h_i = _digest(private_message)
    if len(record.control) != len(h_i):
        raise LengthMismatchError("control length does not match digest length")
    return xor_bytes(h_i, record.control)
