from .subsets import enumerate_minimal_authorized_subsets
from .hashscheme import (
    ControlNotFoundError,
    ControlRecord,
    LengthMismatchError,
    DIGEST_LEN,
    hash_recover,
    hash_setup,
    xor_bytes,
)
from .shamir import (
    DEFAULT_PRIME,
    InsufficientSharesError,
    lagrange_at_zero,
    shamir_recover,
    shamir_setup,
)
from .scheme import (
    SchemeConfig,
    SchemeInstance,
    SchemeKind,
    deal,
    instance_from_json,
    instance_to_json,
)

__all__ = [
    "enumerate_minimal_authorized_subsets",
    "ControlNotFoundError",
    "ControlRecord",
    "LengthMismatchError",
    "DIGEST_LEN",
    "hash_recover",
    "hash_setup",
    "xor_bytes",
    "DEFAULT_PRIME",
    "InsufficientSharesError",
    "lagrange_at_zero",
    "shamir_recover",
    "shamir_setup",
    "SchemeConfig",
    "SchemeInstance",
    "SchemeKind",
    "deal",
    "instance_from_json",
    "instance_to_json",
]
