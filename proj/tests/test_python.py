"""Smoke tests for the Python bindings."""

import json

import pytest

import ahac


def test_float_roundtrip():
    assert ahac.q_of(6) == 3
    s, m, e = ahac.truncate("5/16", 6)
    assert (s, m, e) == (1, 2, -3)
    assert ahac.float_value(s, m, e) == "1/4"
    bits = ahac.encode(s, m, e, 6)
    assert ahac.decode(bits, 6) == (1, 2, -3)
    assert len(ahac.enumerate_canonical(4)) == 7
    with pytest.raises(ValueError):
        ahac.truncate("1", 7)  # odd precision


def test_compile_and_eval_head():
    c = ahac.compile_head(2, 1, 6)
    assert c.n_inputs == 12
    assert c.n_outputs == 12
    # zero inputs stay zero through the averaging pipeline
    assert c.eval([0] * 12) == [0] * 12
    # X = (1, 3): both positions attend to the maximum and output 3
    one = ahac.encode(*ahac.truncate("1", 6), 6)
    three = ahac.encode(*ahac.truncate("3", 6), 6)
    assert c.eval(one + three) == three + three
    # netlist round trip
    d = ahac.Circuit.deserialize(c.serialize())
    assert d.serialize() == c.serialize()
    assert d.size == c.size and d.depth == c.depth


def test_verify_reports():
    r = json.loads(ahac.verify_head(2, 1, 4, mode="exhaustive"))
    assert r["trials"] == 49
    assert r["mismatch_count"] == 0
    r = json.loads(ahac.verify_op("sum", n=2, p=4))
    assert r["mismatch_count"] == 0


def test_transformer_and_demo():
    model = ahac.majority_demo_model_json()
    assert ahac.transformer_ref("aab", model, 10) == 1
    assert ahac.transformer_ref("abb", model, 10) == 0
    c = ahac.compile_transformer(model, 3, 10, ncap=3)
    assert c.n_inputs == 3 and c.n_outputs == 1
    # code bit 0 = 'a', 1 = 'b'; input order follows word positions
    assert c.eval([0, 0, 1]) == [1]  # aab
    assert c.eval([0, 1, 1]) == [0]  # abb
    demo = json.loads(ahac.demo_majority(4, 10))
    assert demo["all_match"]


def test_growth_and_audit():
    csv, exact = ahac.growth_csv(k=1, p=6, n_from=2, n_to=10)
    assert exact
    assert csv.splitlines()[0].startswith("n,p,size,depth,")
    audit = ahac.audit_streaming(4, 1, 6)
    assert audit["byte_identical"]
    assert audit["peak_counter_bits"] > 0
