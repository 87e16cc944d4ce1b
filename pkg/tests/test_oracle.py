import numpy as np
import pytest

from ftqec.circuit import CircuitBuilder, Gate
from ftqec.codes import PauliString, bacon_shor_3x3
from ftqec.gadgets import build_m, logical_state_circuit
from ftqec.oracle import (QubitBudgetExceeded, apply_pauli, basis_state, embed,
                          factor_out, logical_overlap, pauli_expectation, run,
                          run_classical)

BS = bacon_shor_3x3()


def test_h_twice_is_identity():
    b = CircuitBuilder(1)
    b.gate(Gate.H, 0).gate(Gate.H, 0)
    out = run(b.build())
    assert abs(out.reshape(-1)[0] - 1) < 1e-12


def test_cnot_chain_spreads_a_one():
    b = CircuitBuilder(4)
    b.gate(Gate.CNOT, 0, 1).gate(Gate.CNOT, 1, 2).gate(Gate.CNOT, 2, 3)
    out = run(b.build(), "1000")
    idx = np.unravel_index(np.argmax(np.abs(out)), out.shape)
    assert idx == (1, 1, 1, 1)


def test_toffoli_truth():
    b = CircuitBuilder(3)
    b.gate(Gate.TOFFOLI, 0, 1, 2)
    c = b.build()
    for bits, want in [("110", (1, 1, 1)), ("100", (1, 0, 0)), ("111", (1, 1, 0))]:
        out = run(c, bits)
        idx = np.unravel_index(np.argmax(np.abs(out)), out.shape)
        assert idx == want


def test_ztoffoli_is_hadamard_conjugate():
    b1 = CircuitBuilder(3)
    b1.gate(Gate.ZTOFFOLI, 0, 1, 2)
    b2 = CircuitBuilder(3)
    for q in range(3):
        b2.gate(Gate.H, q)
    b2.gate(Gate.TOFFOLI, 0, 1, 2)
    for q in range(3):
        b2.gate(Gate.H, q)
    rng = np.random.default_rng(7)
    amp = rng.normal(size=8) + 1j * rng.normal(size=8)
    amp /= np.linalg.norm(amp)
    s1 = run(b1.build(), amp.reshape(2, 2, 2).copy())
    s2 = run(b2.build(), amp.reshape(2, 2, 2).copy())
    assert np.allclose(s1, s2)


def test_norm_guard_triggers_on_bad_input():
    b = CircuitBuilder(1)
    b.gate(Gate.WAIT, 0)
    with pytest.raises(RuntimeError):
        run(b.build(), np.array([1.0, 1.0], dtype=complex))


def test_qubit_budget():
    with pytest.raises(QubitBudgetExceeded):
        basis_state(25)


def test_meas_gates_rejected():
    b = CircuitBuilder(1)
    b.gate(Gate.MEASZ, 0)
    with pytest.raises(ValueError):
        run(b.build())


def test_logical_overlap_reference_states():
    zl = run(logical_state_circuit("0"))
    ol = run(logical_state_circuit("1"))
    pl = run(logical_state_circuit("+"))
    data = list(range(9))
    assert abs(logical_overlap(BS, zl, data, "zero") - 1) < 1e-10
    assert abs(logical_overlap(BS, ol, data, "zero")) < 1e-10
    assert abs(logical_overlap(BS, ol, data, "one") - 1) < 1e-10
    assert abs(logical_overlap(BS, pl, data, "plus") - 1) < 1e-10


def test_logical_overlap_gauge_invariance():
    zl = run(logical_state_circuit("0"))
    for g in BS.gauge_ops:
        moved = apply_pauli(zl.copy(), g)
        assert abs(logical_overlap(BS, moved, list(range(9)), "zero") - 1) < 1e-10


def test_pauli_expectation_y_phase():
    # <+i| Y |+i> = +1 exercises the iXZ bookkeeping
    plus_i = np.array([1, 1j], dtype=complex) / np.sqrt(2)
    val = pauli_expectation(plus_i.reshape(2), PauliString.from_label("Y"), [0])
    assert abs(val - 1) < 1e-12


def test_classical_path_bit_identical_to_dense():
    g = build_m("X", 3)
    n = g.circuit.n_qubits
    for bits in range(8):
        s = f"{bits:03b}" + "0" * (n - 3)
        cl = run_classical(g.circuit, s)
        dense = run(g.circuit, s)
        idx = np.unravel_index(np.argmax(np.abs(dense)), dense.shape)
        assert np.abs(dense[idx]) > 1 - 1e-9  # basis input stays classical
        assert "".join(str(b) for b in idx) == cl


def test_embed_and_factor_out_round_trip():
    rng = np.random.default_rng(3)
    amp = rng.normal(size=4) + 1j * rng.normal(size=4)
    amp /= np.linalg.norm(amp)
    sub = amp.reshape(2, 2)
    full = embed(sub, [1, 3], 4)
    back = factor_out(full, [0, 2])
    phase = np.vdot(back.ravel(), sub.ravel())
    assert abs(abs(phase) - 1) < 1e-10


def test_factor_out_refuses_entangled_cut():
    b = CircuitBuilder(2)
    b.gate(Gate.H, 0).gate(Gate.CNOT, 0, 1)
    bell = run(b.build())
    with pytest.raises(ValueError):
        factor_out(bell, [0])
