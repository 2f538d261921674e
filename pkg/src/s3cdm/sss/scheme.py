"""Unified scheme interface used by the dealer, plus JSON serialization."""
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from . import hashscheme, shamir
from .hashscheme import ControlRecord


class SchemeKind(str, Enum):
    HASH_BASED = "hash"
    SHAMIR = "shamir"


@dataclass(frozen=True)
class SchemeConfig:
    kind: SchemeKind
    threshold: int
    participants: int

    def __post_init__(self):
        if self.participants < 1 or self.threshold < 1:
            raise ValueError("threshold and participants must be >= 1")
        if self.threshold > self.participants:
            raise ValueError(
                f"threshold {self.threshold} exceeds participants {self.participants}"
            )


@dataclass
class SchemeInstance:
    """One dealt secret: the per-request recovery context the dealer keeps.

    `shares` maps participant index to the share's byte value.  For the
    hash-based kind `controls` holds the public per-subset control records;
    for Shamir `prime` fixes the field.
    """
    config: SchemeConfig
    secret: bytes
    shares: Dict[int, bytes]
    controls: List[ControlRecord] = field(default_factory=list)
    prime: Optional[int] = None

    @property
    def secret_hex(self) -> str:
        return self.secret.hex()

    @property
    def share_length(self) -> int:
        return len(next(iter(self.shares.values())))

    def recover(self, shares: Dict[int, bytes]) -> bytes:
        """Recover a secret candidate from a subset of share bytes."""
        if self.config.kind is SchemeKind.HASH_BASED:
            return hashscheme.hash_recover(shares, self.controls)
        width = field_width(self.prime)
        points = {i: int.from_bytes(s, "big") for i, s in shares.items()}
        value = shamir.shamir_recover(points, self.config.threshold, self.prime)
        return value.to_bytes(width, "big")


def field_width(prime: int) -> int:
    return (prime.bit_length() + 7) // 8


def deal(
    config: SchemeConfig,
    rng: random.Random,
    secret: Optional[bytes] = None,
    prime: int = shamir.DEFAULT_PRIME,
) -> SchemeInstance:
    """Generate a secret and shares under `config`."""
    if config.kind is SchemeKind.HASH_BASED:
        sec, shares, controls = hashscheme.hash_setup(
            config.threshold, config.participants, rng, secret=secret
        )
        return SchemeInstance(config=config, secret=sec, shares=shares, controls=controls)
    width = field_width(prime)
    if secret is None:
        value = rng.randrange(prime)
    else:
        value = int.from_bytes(secret, "big")
        if value >= prime:
            raise ValueError("secret out of field range")
    points = shamir.shamir_setup(config.threshold, config.participants, value, rng, prime)
    shares = {i: y.to_bytes(width, "big") for i, y in points.items()}
    return SchemeInstance(
        config=config, secret=value.to_bytes(width, "big"), shares=shares, prime=prime
    )


def instance_to_json(inst: SchemeInstance) -> dict:
    doc = {
        "scheme": inst.config.kind.value,
        "threshold": inst.config.threshold,
        "participants": inst.config.participants,
        "controls": [
            {"subset": list(c.subset), "control": c.control.hex()} for c in inst.controls
        ],
        "shares": [{"index": i, "value": s.hex()} for i, s in sorted(inst.shares.items())],
    }
    if inst.config.kind is SchemeKind.HASH_BASED:
        doc["hash"] = hashscheme.HASH_NAME
    else:
        doc["prime"] = inst.prime
    return doc


def instance_from_json(doc: dict, secret: bytes) -> SchemeInstance:
    config = SchemeConfig(
        kind=SchemeKind(doc["scheme"]),
        threshold=doc["threshold"],
        participants=doc["participants"],
    )
    return SchemeInstance(
        config=config,
        secret=secret,
        shares={s["index"]: bytes.fromhex(s["value"]) for s in doc["shares"]},
        controls=[
            ControlRecord(subset=tuple(c["subset"]), control=bytes.fromhex(c["control"]))
            for c in doc.get("controls", [])
        ],
        prime=doc.get("prime"),
    )
