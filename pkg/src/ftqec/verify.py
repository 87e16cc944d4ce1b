"""Oracle test batteries for the CLI `verify` subcommand.

Each suite returns a list of (case-name, passed) pairs; every case is an
exact check against the dense statevector or classical bit-level oracle.
"""

from __future__ import annotations

import itertools

import numpy as np

from .circuit import CircuitBuilder, Gate
from .codes import PauliString, bacon_shor_3x3, steane_logical_x_reps
from .gadgets import (build_cat_verify, build_cooling_tree, build_ec,
                      build_m, build_parity_voter, build_steane_n,
                      logical_state_circuit, _emit_m)
from .oracle import (apply_pauli, embed, factor_out, grouped_logical_overlap,
                     logical_overlap, run, run_classical)

Case = tuple[str, bool]


def _majority(bits) -> int:
    return int(sum(bits) > len(bits) / 2)


def suite_majority() -> list[Case]:
    out = []
    for n in (3, 5):
        g = build_m("X", n)
        ok = True
        for bits in itertools.product((0, 1), repeat=n):
            res = run_classical(g.circuit, {q: b for q, b in zip(g.data_qubits, bits)})
            got = tuple(int(res[q]) for q in g.data_qubits)
            ok &= got == (_majority(bits),) * n
        out.append((f"M({n}) majority truth table", ok))
    # basis example from the construction: 101 -> 111
    g = build_m("X", 3)
    res = run_classical(g.circuit, {q: b for q, b in zip(g.data_qubits, (1, 0, 1))})
    out.append(("M(3) on 101 -> 111", tuple(int(res[q]) for q in g.data_qubits) == (1, 1, 1)))
    # superposition preserved, ancilla disentangled
    a, bb = 0.6, 0.8
    sub = np.zeros((2, 2, 2), complex)
    sub[0, 0, 0], sub[1, 1, 1] = a, bb
    st = run(g.circuit, embed(sub, list(g.data_qubits), g.circuit.n_qubits))
    data = factor_out(st, [q for q in range(g.circuit.n_qubits) if q not in g.data_qubits])
    fid = abs(np.vdot(sub.ravel(), data.ravel())) ** 2
    out.append(("M(3) preserves a|000>+b|111>, ancilla disentangled", abs(fid - 1) < 1e-9))
    # Z-basis voter: |-,+,-> -> |-,-,->
    gz = build_m("Z", 3)
    minus = np.array([1, -1], complex) / np.sqrt(2)
    sub = np.einsum("i,j,k->ijk", minus, np.array([1, 1], complex) / np.sqrt(2), minus)
    st = run(gz.circuit, embed(sub, list(gz.data_qubits), gz.circuit.n_qubits))
    want = np.einsum("i,j,k->ijk", minus, minus, minus)
    data = factor_out(st, [q for q in range(gz.circuit.n_qubits) if q not in gz.data_qubits])
    fid = abs(np.vdot(want.ravel(), data.ravel())) ** 2
    out.append(("M_Z votes X-basis majority", abs(fid - 1) < 1e-9))
    return out


def suite_parity() -> list[Case]:
    out = []
    for n in (2, 3):
        g = build_parity_voter(n)
        ok = True
        for bits in itertools.product((0, 1), repeat=n):
            res = run_classical(g.circuit, {q: b for q, b in zip(g.data_qubits, bits)})
            got = tuple(int(res[q]) for q in g.data_qubits)
            want = (int(sum(bits) % 2),) * n
            ok &= got == want
        out.append((f"parity voter n={n} truth table", ok))
    return out


def suite_cooling() -> list[Case]:
    g = build_cooling_tree(1)
    ok = all(
        int(run_classical(g.circuit, {i: b for i, b in enumerate(bits)})[g.meta["root"]])
        == _majority(bits)
        for bits in itertools.product((0, 1), repeat=3))
    cases = [("cooling tree: one round majority table", ok)]
    g2 = build_cooling_tree(2)
    ok2 = True
    for trial in range(20):
        rng = np.random.default_rng(trial)
        bits = rng.integers(0, 2, size=9)
        res = run_classical(g2.circuit, {i: int(b) for i, b in enumerate(bits)})
        want = _majority([_majority(bits[3 * i:3 * i + 3]) for i in range(3)])
        ok2 &= int(res[g2.meta["root"]]) == want
    cases.append(("cooling tree: two-round majority-of-majorities", ok2))
    return cases


def suite_cat() -> list[Case]:
    g = build_cat_verify()
    cat = np.zeros((2,) * 4, complex)
    cat[0, 0, 0, 0] = cat[1, 1, 1, 1] = 2 ** -0.5
    st = run(g.circuit)
    data = factor_out(st, [q for q in range(g.circuit.n_qubits) if q not in g.data_qubits])
    ok0 = abs(abs(np.vdot(cat.ravel(), data.ravel())) ** 2 - 1) < 1e-9
    cases = [("cat verify: fault-free output is the exact cat state", ok0)]

    # correctable iff the bit-flip pattern stays within one flip of a cat
    # state; phases are harmless on an X-basis extraction ancilla
    ball = {0, 0b1111}
    for q in range(4):
        ball |= {1 << q, 0b1111 ^ (1 << q)}

    def cat_distance_ok(state) -> bool:
        moved = np.moveaxis(state, list(g.data_qubits), [0, 1, 2, 3]).reshape(16, -1)
        probs = np.linalg.norm(moved, axis=1) ** 2
        good = sum(probs[b] for b in ball)
        return good > 1 - 1e-9

    worst_ok = True
    from .counting import GadgetAnalysis
    from .faults import fault_alphabet
    an = GadgetAnalysis(g)
    for loc in an.locations:
        for fx, fz in fault_alphabet(loc):
            st = run(g.circuit, faults=[(loc.step_index + 1,
                                         PauliString(g.circuit.n_qubits, fx, fz))])
            if not cat_distance_ok(st):
                worst_ok = False
                break
        if not worst_ok:
            break
    cases.append(("cat verify: every single-location fault stays correctable", worst_ok))
    return cases


def suite_steane() -> list[Case]:
    g = build_steane_n()
    reps = steane_logical_x_reps()
    cases = [("Steane logical-X has seven weight-3 representatives",
              len(reps) == 7 and all(r.weight() == 3 for r in reps))]
    ok = all(
        tuple(int(run_classical(g.circuit, {q: 1})[b]) for b in g.data_qubits) == (0,) * 7
        for q in range(7))
    cases.append(("Steane N: single data error -> corrected null string", ok))
    m7 = build_m("X", 7)
    res = run_classical(m7.circuit, {q: b for q, b in zip(m7.data_qubits, (1, 1, 1, 0, 0, 0, 0))})
    cases.append(("M(7) corrects 1110000 to the null string",
                  tuple(int(res[q]) for q in m7.data_qubits) == (0,) * 7))
    return cases


def _prep_groups(state: str):
    """Per-group (9-qubit) circuits of the preparation gadget: each group
    is one row (|0_L>) or column (|+_L>) with its own voter ancillas."""
    groups = []
    for gi in range(3):
        b = CircuitBuilder(9)
        prep = Gate.PREP0 if state == "0" else Gate.PREPPLUS
        for q in (0, 1, 2):
            b.gate(prep, q)
        _emit_m(b, [0, 1, 2], [[3, 4, 5], [6, 7, 8]], "Z" if state == "0" else "X")
        groups.append(b.build())
    return groups


def suite_prep() -> list[Case]:
    bs = bacon_shor_3x3()
    cases = []
    for state, ref in (("0", "zero"), ("+", "plus")):
        circuits = _prep_groups(state)
        states = [run(c) for c in circuits]
        if state == "0":
            posmap = [{3 * gi + c: c for c in range(3)} for gi in range(3)]
        else:
            posmap = [{3 * r + gi: r for r in range(3)} for gi in range(3)]
        f = grouped_logical_overlap(states, posmap, bs, ref)
        cases.append((f"prep |{state}_L> stabilized with the logical fixed",
                      abs(f - 1) < 1e-9))
    return cases


def suite_ec() -> list[Case]:
    bs = bacon_shor_3x3()
    ecx, ecz = build_ec("X"), build_ec("Z")
    zl = run(logical_state_circuit("0"))
    pl = run(logical_state_circuit("+"))
    worst = 1.0
    for q in range(9):
        st = run(ecx.circuit, embed(np.flip(zl, axis=q), list(range(9)), 18))
        worst = min(worst, logical_overlap(bs, st, list(range(9)), "zero"))
    cases = [("EC_X corrects all single X errors", worst > 1 - 1e-9)]
    worst = 1.0
    for q in range(9):
        err = apply_pauli(pl.copy(), PauliString.single(9, q, "Z"))
        st = run(ecz.circuit, embed(err, list(range(9)), 18))
        worst = min(worst, logical_overlap(bs, st, list(range(9)), "plus"))
    cases.append(("EC_Z corrects all single Z errors", worst > 1 - 1e-9))
    # gauge pair: identity correction, target column untouched
    gp = apply_pauli(pl.copy(), PauliString(9, x_mask=0b11))
    st = run(ecx.circuit, embed(gp, list(range(9)), 18))
    f = logical_overlap(bs, st, list(range(9)), "plus")
    cases.append(("EC_X on a row gauge pair acts as the identity", abs(f - 1) < 1e-9))
    return cases


SUITES = {
    "majority": suite_majority,
    "parity": suite_parity,
    "cooling": suite_cooling,
    "cat": suite_cat,
    "steane": suite_steane,
    "prep": suite_prep,
    "ec": suite_ec,
}


def run_suite(name: str) -> list[Case]:
    if name == "oracle":
        cases = []
        for fn in SUITES.values():
            cases.extend(fn())
        return cases
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{['oracle'] + sorted(SUITES)}")
    return SUITES[name]()
