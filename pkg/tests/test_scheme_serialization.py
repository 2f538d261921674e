import json
import random

from s3cdm.sss import (
    SchemeConfig,
    SchemeKind,
    deal,
    instance_from_json,
    instance_to_json,
)


def test_hash_instance_roundtrip():
    config = SchemeConfig(SchemeKind.HASH_BASED, 2, 3)
    inst = deal(config, random.Random(1))
    doc = json.loads(json.dumps(instance_to_json(inst)))
    assert doc["scheme"] == "hash"
    assert doc["threshold"] == 2 and doc["participants"] == 3
    assert doc["hash"] == "sha256"
    assert len(doc["controls"]) == 3 and len(doc["shares"]) == 3
    back = instance_from_json(doc, inst.secret)
    assert back.shares == inst.shares
    assert back.controls == inst.controls
    # recovery works through the deserialized instance
    assert back.recover({1: inst.shares[1], 2: inst.shares[2]}) == inst.secret


def test_shamir_instance_roundtrip():
    config = SchemeConfig(SchemeKind.SHAMIR, 2, 3)
    inst = deal(config, random.Random(2))
    doc = instance_to_json(inst)
    assert doc["scheme"] == "shamir"
    assert doc["controls"] == []
    back = instance_from_json(doc, inst.secret)
    assert back.prime == inst.prime
    assert back.recover({1: inst.shares[1], 3: inst.shares[3]}) == inst.secret


def test_all_hex_fields_are_hex():
    inst = deal(SchemeConfig(SchemeKind.HASH_BASED, 2, 3), random.Random(3))
    doc = instance_to_json(inst)
    for share in doc["shares"]:
        bytes.fromhex(share["value"])
    for control in doc["controls"]:
        bytes.fromhex(control["control"])
