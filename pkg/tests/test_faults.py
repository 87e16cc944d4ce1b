import numpy as np
import pytest

from ftqec.circuit import CircuitBuilder, Gate, Location, GateOp
from ftqec.codes import PauliString, bacon_shor_3x3
from ftqec.faults import (FaultEvent, FrameWalker, fault_alphabet, propagate,
                          restrict)
from ftqec.gadgets import build_ec, logical_state_circuit
from ftqec.oracle import apply_pauli, embed, logical_overlap, run

BS = bacon_shor_3x3()


def _loc(circ, step, kind, *qubits):
    for g in circ.steps[step]:
        if g.kind is kind and g.qubits == tuple(qubits):
            return Location(step, g)
    raise AssertionError("location not found")


def test_x_before_cnot_control_copies():
    b = CircuitBuilder(2)
    b.gate(Gate.WAIT, 0)
    b.gate(Gate.CNOT, 0, 1)
    c = b.build()
    loc = _loc(c, 0, Gate.WAIT, 0)
    out = propagate(c, [FaultEvent(loc, x_mask=1, z_mask=0)])
    assert out == {(0b11, 0)}


def test_z_on_cnot_target_spreads_to_control():
    b = CircuitBuilder(2)
    b.gate(Gate.WAIT, 1)
    b.gate(Gate.CNOT, 0, 1)
    c = b.build()
    loc = _loc(c, 0, Gate.WAIT, 1)
    out = propagate(c, [FaultEvent(loc, x_mask=0, z_mask=0b10)])
    assert out == {(0, 0b11)}


def test_x_on_toffoli_control_branches_in_free_context():
    b = CircuitBuilder(3)
    b.gate(Gate.WAIT, 0)
    b.gate(Gate.TOFFOLI, 0, 1, 2)
    c = b.build()
    loc = _loc(c, 0, Gate.WAIT, 0)
    out = propagate(c, [FaultEvent(loc, x_mask=1, z_mask=0)], "free")
    assert out == {(0b001, 0), (0b101, 0)}  # {X_control, X_control X_target}


def test_branch_set_matches_oracle_on_both_control_values():
    # the other control's value selects the branch the oracle realizes
    b = CircuitBuilder(3)
    b.gate(Gate.WAIT, 0)
    b.gate(Gate.TOFFOLI, 0, 1, 2)
    c = b.build()
    for other in (0, 1):
        clean = run(c, {1: other})
        fault = run(c, {1: other}, faults=[(0, PauliString(3, x_mask=1))])
        clean_idx = np.unravel_index(np.argmax(np.abs(clean)), clean.shape)
        fault_idx = np.unravel_index(np.argmax(np.abs(fault)), fault.shape)
        diff = tuple(a ^ b for a, b in zip(clean_idx, fault_idx))
        want = (1, 0, other)  # X on the control, conditional X on the target
        assert diff == want


def test_clean_zero_context_is_deterministic():
    b = CircuitBuilder(3)
    b.gate(Gate.WAIT, 0)
    b.gate(Gate.TOFFOLI, 0, 1, 2)
    c = b.build()
    loc = _loc(c, 0, Gate.WAIT, 0)
    out = propagate(c, [FaultEvent(loc, x_mask=1, z_mask=0)], "clean_zero")
    assert out == {(0b001, 0)}
    # with both controls covered the target flips
    b2 = CircuitBuilder(3)
    b2.gate(Gate.WAIT, 0)
    b2.gate(Gate.WAIT, 1)
    b2.gate(Gate.TOFFOLI, 0, 1, 2)
    c2 = b2.build()
    la = _loc(c2, 0, Gate.WAIT, 0)
    lb = _loc(c2, 0, Gate.WAIT, 1)
    out = propagate(c2, [FaultEvent(la, x_mask=0b01, z_mask=0),
                         FaultEvent(lb, x_mask=0b10, z_mask=0)], "clean_zero")
    assert out == {(0b111, 0)}


def test_z_into_toffoli_target_spawns_z_on_controls():
    b = CircuitBuilder(3)
    b.gate(Gate.WAIT, 2)
    b.gate(Gate.TOFFOLI, 0, 1, 2)
    c = b.build()
    loc = _loc(c, 0, Gate.WAIT, 2)
    out = propagate(c, [FaultEvent(loc, x_mask=0, z_mask=0b100)], "clean_zero")
    assert out == {(0, 0b111)}


def test_fault_alphabet_sizes():
    b = CircuitBuilder(3)
    b.gate(Gate.PREP0, 0)
    b.gate(Gate.CNOT, 0, 1)
    b.gate(Gate.TOFFOLI, 0, 1, 2)
    c = b.build()
    sizes = {}
    for loc in c.locations():
        sizes.setdefault(loc.gate.kind, len(fault_alphabet(loc)))
    assert sizes[Gate.PREP0] == 1
    assert sizes[Gate.CNOT] == 15
    assert sizes[Gate.TOFFOLI] == 63
    assert sizes[Gate.WAIT] == 3


def test_faults_must_be_at_distinct_locations():
    b = CircuitBuilder(1)
    b.gate(Gate.WAIT, 0)
    c = b.build()
    loc = _loc(c, 0, Gate.WAIT, 0)
    with pytest.raises(ValueError):
        propagate(c, [FaultEvent(loc, 1, 0), FaultEvent(loc, 0, 1)])


def test_fault_on_nonexistent_location():
    b = CircuitBuilder(1)
    b.gate(Gate.WAIT, 0)
    c = b.build()
    bad = Location(5, GateOp(Gate.WAIT, (0,)))
    with pytest.raises(ValueError):
        propagate(c, [FaultEvent(bad, 1, 0)])


def test_propagation_linearity_on_clifford_only_subcircuits():
    # without three-qubit gates the joint residual is the frame product
    import random
    rng = random.Random(11)
    for _ in range(50):
        b = CircuitBuilder(5)
        for _ in range(12):
            kind = rng.choice([Gate.CNOT, Gate.H, Gate.X, Gate.Z])
            if kind is Gate.CNOT:
                qs = rng.sample(range(5), 2)
            else:
                qs = [rng.randrange(5)]
            b.gate(kind, *qs)
        c = b.build()
        locs = c.locations()
        la, lb = rng.sample(locs, 2)
        if (la.step_index, la.gate) == (lb.step_index, lb.gate):
            continue
        fa = rng.choice(fault_alphabet(la))
        fb = rng.choice(fault_alphabet(lb))
        ra = propagate(c, [FaultEvent(la, *fa)], "clean_zero")
        rb = propagate(c, [FaultEvent(lb, *fb)], "clean_zero")
        rab = propagate(c, [FaultEvent(la, *fa), FaultEvent(lb, *fb)], "clean_zero")
        (xa, za), = ra
        (xb, zb), = rb
        assert rab == {(xa ^ xb, za ^ zb)}


def test_oracle_agreement_500_random_single_fault_scenarios():
    """The frame walker's predicted residual matches the statevector
    evolution exactly on the level-1 EC_X gadget: undoing the predicted
    Pauli restores the logical orbit for 500 random (fault, incoming
    error) scenarios.  This checks both sectors and the realized branch."""
    rng = np.random.default_rng(2026)
    ecx = build_ec("X")
    c = ecx.circuit
    walker = FrameWalker(c)
    zl = run(logical_state_circuit("0"))
    locs = c.locations()
    data = list(range(9))
    for _ in range(500):
        loc = locs[rng.integers(len(locs))]
        alpha = fault_alphabet(loc)
        fx, fz = alpha[rng.integers(len(alpha))]
        inc = int(rng.integers(0, 9)) if rng.random() < 0.5 else None
        # frame path: incoming error from the start, fault after its step
        x, z = ((1 << inc, 0) if inc is not None else (0, 0))
        for s in range(0, loc.step_index + 1):
            x, z = walker._one_step(s, x, z)
        x, z = x ^ fx, z ^ fz
        for s in range(loc.step_index + 1, c.n_steps):
            x, z = walker._one_step(s, x, z)
        rx, rz = restrict((x, z), tuple(data))
        # oracle path
        state = zl.copy()
        if inc is not None:
            state = np.flip(state, axis=inc)
        out = run(c, embed(state, data, 18),
                  faults=[(loc.step_index + 1, PauliString(18, fx, fz))])
        undone = apply_pauli(out, PauliString(9, rx, rz), data)
        fid = logical_overlap(BS, undone, data, "zero")
        assert fid > 1 - 1e-9, (loc, fx, fz, inc, fid)


def test_oracle_agreement_ec_z_ztoffoli_rules():
    """Same exact-residual agreement on the Z-correction stage, whose
    corrections are ZTOFFOLIs (200 random scenarios)."""
    rng = np.random.default_rng(77)
    ecz = build_ec("Z")
    c = ecz.circuit
    walker = FrameWalker(c)
    pl = run(logical_state_circuit("+"))
    locs = c.locations()
    data = list(range(9))
    for _ in range(200):
        loc = locs[rng.integers(len(locs))]
        alpha = fault_alphabet(loc)
        fx, fz = alpha[rng.integers(len(alpha))]
        inc = int(rng.integers(0, 9)) if rng.random() < 0.5 else None
        x, z = ((0, 1 << inc) if inc is not None else (0, 0))
        for s in range(0, loc.step_index + 1):
            x, z = walker._one_step(s, x, z)
        x, z = x ^ fx, z ^ fz
        for s in range(loc.step_index + 1, c.n_steps):
            x, z = walker._one_step(s, x, z)
        rx, rz = restrict((x, z), tuple(data))
        state = pl.copy()
        if inc is not None:
            state = apply_pauli(state, PauliString.single(9, inc, "Z"))
        out = run(c, embed(state, data, 18),
                  faults=[(loc.step_index + 1, PauliString(18, fx, fz))])
        undone = apply_pauli(out, PauliString(9, rx, rz), data)
        fid = logical_overlap(BS, undone, data, "plus")
        assert fid > 1 - 1e-9, (loc, fx, fz, inc, fid)
