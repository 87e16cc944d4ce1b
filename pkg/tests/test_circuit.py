import random

import pytest

from ftqec.circuit import (Circuit, CircuitBuilder, Gate, GateOp, ParseError,
                           parse, serialize, validate)


def test_gateop_arity_and_distinctness():
    with pytest.raises(ValueError):
        GateOp(Gate.CNOT, (0,))
    with pytest.raises(ValueError):
        GateOp(Gate.CNOT, (0, 0))
    with pytest.raises(ValueError):
        GateOp(Gate.TOFFOLI, (1, 2, 2))


def test_two_gates_sharing_a_qubit_in_one_step_is_a_violation():
    c = Circuit(3, steps=[[GateOp(Gate.CNOT, (0, 1)), GateOp(Gate.CNOT, (1, 2))]])
    bad = validate(c)
    assert any("two gates" in v.reason and v.step_index == 0 for v in bad)


def test_idle_qubit_without_wait_is_a_violation():
    c = Circuit(2, steps=[[GateOp(Gate.X, (0,))]])
    bad = validate(c)
    assert any(v.qubit == 1 and "WAIT" in v.reason for v in bad)


def test_empty_circuit_is_valid():
    assert validate(Circuit(0, steps=[])) == []


def test_prep_must_be_first_appearance():
    c = Circuit(1, steps=[[GateOp(Gate.X, (0,))], [GateOp(Gate.PREP0, (0,))]])
    assert any("first appearance" in v.reason for v in validate(c))


def test_wait_before_prep_is_fine():
    c = Circuit(1, steps=[[GateOp(Gate.WAIT, (0,))], [GateOp(Gate.PREP0, (0,))]])
    assert validate(c) == []


def test_builder_greedy_packing_and_wait_fill():
    b = CircuitBuilder(3)
    b.gate(Gate.PREP0, 2)
    b.gate(Gate.CNOT, 0, 2)
    b.gate(Gate.CNOT, 1, 2)
    c = b.build()
    assert validate(c) == []
    # prep is placed just in time, one step before first use
    prep_step = next(t for t, s in enumerate(c.steps)
                     for g in s if g.kind is Gate.PREP0)
    first_use = next(t for t, s in enumerate(c.steps)
                     for g in s if g.kind is Gate.CNOT and 2 in g.qubits)
    assert prep_step == first_use - 1


def test_location_supports_partition_all_slots():
    b = CircuitBuilder(4)
    b.gate(Gate.CNOT, 0, 1).gate(Gate.TOFFOLI, 0, 1, 2).gate(Gate.H, 3)
    c = b.build()
    slots = sum(len(loc.support) for loc in c.locations())
    assert slots == c.n_qubits * c.n_steps
    seen = set()
    for loc in c.locations():
        for q in loc.support:
            assert (loc.step_index, q) not in seen
            seen.add((loc.step_index, q))


def test_serialize_round_trip_simple():
    b = CircuitBuilder(1)
    b.gate(Gate.PREP0, 0)
    c = b.build()
    assert parse(serialize(c)) == c


def random_circuit(rng: random.Random) -> Circuit:
    n = rng.randint(1, 8)
    b = CircuitBuilder(n)
    prepped = set()
    for q in range(n):
        if rng.random() < 0.5:
            b.gate(rng.choice([Gate.PREP0, Gate.PREPPLUS]), q)
            prepped.add(q)
    for _ in range(rng.randint(0, 20)):
        kind = rng.choice([Gate.X, Gate.Z, Gate.H, Gate.CNOT, Gate.TOFFOLI,
                           Gate.ZTOFFOLI])
        k = {Gate.CNOT: 2, Gate.TOFFOLI: 3, Gate.ZTOFFOLI: 3}.get(kind, 1)
        if k > n:
            continue
        qs = rng.sample(range(n), k)
        b.gate(kind, *qs)
    if rng.random() < 0.3:
        b.discard(*rng.sample(range(n), rng.randint(0, n)))
    for q in range(n):
        b.role(rng.choice(["data", "ancilla", "verifier"]), q)
    return b.build()


def test_serialization_round_trip_on_100_random_circuits():
    rng = random.Random(20260809)
    for _ in range(100):
        c = random_circuit(rng)
        assert validate(c) == []
        text = serialize(c)
        again = parse(text)
        assert again == c
        assert serialize(again) == text  # byte-for-byte after re-serialization


def test_parse_reports_line_and_token():
    with pytest.raises(ParseError) as err:
        parse("qubits 2\nstep 0: CNOT 0 0; WAIT 1\n")
    assert err.value.line_no == 2
    assert "CNOT 0 0" in str(err.value)


def test_parse_rejects_unknown_gate():
    with pytest.raises(ParseError) as err:
        parse("qubits 1\nstep 0: FROB 0\n")
    assert err.value.token == "FROB"


def test_parse_requires_header():
    with pytest.raises(ParseError):
        parse("step 0: WAIT 0\n")


def test_parse_checks_step_numbering():
    with pytest.raises(ParseError):
        parse("qubits 1\nstep 1: WAIT 0\n")
