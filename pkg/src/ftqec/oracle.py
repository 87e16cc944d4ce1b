"""Dense statevector simulation (<= 24 qubits) and a classical bit-level
fast path for computational-basis reversible subcircuits.

The dense simulator is ground truth for gadget behavior: amplitudes are
double precision, gates are applied in place on a (2,)*n tensor view, and
the L2 norm is asserted to stay within 1e-10 of 1 after every step.  Noise
enters only as explicit Pauli insertions between steps; there are no
measurement collapses (MEAS gates are rejected).

The classical path handles circuits of {PREP0, X, CNOT, TOFFOLI, WAIT} on
basis-string inputs at any qubit count and is bit-identical to the dense
path where both apply.
"""

from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit, Gate, GateOp, MEAS_GATES
from .codes import CodeDef, PauliString

MAX_QUBITS = 24
_NORM_TOL = 1e-10

_CLASSICAL_GATES = frozenset({Gate.PREP0, Gate.X, Gate.CNOT, Gate.TOFFOLI, Gate.WAIT})


class QubitBudgetExceeded(ValueError):
    pass


def basis_state(n: int, bits: dict[int, int] | str | None = None) -> np.ndarray:
    """|b> as a (2,)*n tensor; bits may be a {qubit: 0/1} map or a string."""
    if n > MAX_QUBITS:
        raise QubitBudgetExceeded(f"{n} qubits exceeds the {MAX_QUBITS}-qubit budget")
    state = np.zeros((2,) * n, dtype=np.complex128)
    idx = [0] * n
    if isinstance(bits, str):
        bits = {q: int(ch) for q, ch in enumerate(bits)}
    for q, b in (bits or {}).items():
        idx[q] = b
    state[tuple(idx)] = 1.0
    return state


def embed(sub_state: np.ndarray, sub_qubits: list[int], n: int) -> np.ndarray:
    """Tensor a k-qubit state into an n-qubit register (others |0>)."""
    k = sub_state.ndim
    if n > MAX_QUBITS:
        raise QubitBudgetExceeded(f"{n} qubits exceeds the {MAX_QUBITS}-qubit budget")
    state = np.zeros((2,) * n, dtype=np.complex128)
    rest = [q for q in range(n) if q not in sub_qubits]
    src = sub_state.reshape((2,) * k)
    view = np.moveaxis(state, sub_qubits + rest, list(range(n)))
    view[(...,) + (0,) * len(rest)] = src
    return state


_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
_PREPH = np.array([math.cos(math.pi / 8), math.sin(math.pi / 8)], dtype=np.complex128)


def _apply_1q(state: np.ndarray, mat: np.ndarray, q: int) -> np.ndarray:
    state = np.moveaxis(state, q, 0)
    out = np.tensordot(mat, state, axes=([1], [0]))
    return np.moveaxis(out, 0, q)


def apply_gate(state: np.ndarray, g: GateOp) -> np.ndarray:
    """Apply one gate to a (2,)*n statevector tensor; returns the state."""
    kind, qs = g.kind, g.qubits
    if kind is Gate.WAIT:
        return state
    if kind is Gate.X:
        return np.flip(state, axis=qs[0])
    if kind is Gate.Z:
        state = np.moveaxis(state, qs[0], 0)
        state[1] *= -1
        return np.moveaxis(state, 0, qs[0])
    if kind is Gate.H:
        return _apply_1q(state, _H, qs[0])
    if kind is Gate.CNOT:
        c, t = qs
        state = np.moveaxis(state, c, 0)
        tt = t if t < c else t - 1  # axis of t inside state[1]
        state[1] = np.flip(state[1], axis=tt).copy()
        return np.moveaxis(state, 0, c)
    if kind is Gate.TOFFOLI:
        c1, c2, t = qs
        state = np.moveaxis(state, [c1, c2], [0, 1])
        t_axis = t - sum(1 for c in (c1, c2) if c < t)
        state[1, 1] = np.flip(state[1, 1], axis=t_axis).copy()
        return np.moveaxis(state, [0, 1], [c1, c2])
    if kind is Gate.ZTOFFOLI:
        for q in qs:
            state = _apply_1q(state, _H, q)
        state = apply_gate(state, GateOp(Gate.TOFFOLI, qs))
        for q in qs:
            state = _apply_1q(state, _H, q)
        return state
    if kind is Gate.PREP0:
        return state  # fresh qubits start in |0>; validity is the IR's job
    if kind is Gate.PREPPLUS:
        return _apply_1q(state, _H, qs[0])
    if kind is Gate.PREPH:
        state = np.moveaxis(state, qs[0], 0)
        new = np.empty_like(state)
        new[0] = _PREPH[0] * state[0]
        new[1] = _PREPH[1] * state[0]
        return np.moveaxis(new, 0, qs[0])
    if kind in MEAS_GATES:
        raise ValueError("MEAS gates are not simulable; use expectation queries")
    raise ValueError(f"unhandled gate {kind}")


def apply_pauli(state: np.ndarray, p: PauliString, qubits: list[int] | None = None) -> np.ndarray:
    """Apply a Pauli (as an error insertion); qubits maps p's indices."""
    qubits = qubits if qubits is not None else list(range(p.n))
    for i in range(p.n):
        x = p.x_mask >> i & 1
        z = p.z_mask >> i & 1
        q = qubits[i]
        if x:
            state = np.flip(state, axis=q)
        if z:
            state = np.moveaxis(state, q, 0)
            state[1] *= -1
            state = np.moveaxis(state, 0, q)
    return state


def run(c: Circuit, input_state: np.ndarray | str | dict | None = None,
        faults: list[tuple[int, PauliString]] | None = None) -> np.ndarray:
    """Run a circuit on an input state (default all-|0>).

    ``faults`` is a list of (step_index, pauli-on-all-qubits) insertions
    applied *before* the given step.  Norm is checked after every step.
    """
    if c.n_qubits > MAX_QUBITS:
        raise QubitBudgetExceeded(f"{c.n_qubits} qubits exceeds the {MAX_QUBITS}-qubit budget")
    if input_state is None or isinstance(input_state, (str, dict)):
        state = basis_state(c.n_qubits, input_state)
    else:
        state = input_state.reshape((2,) * c.n_qubits).astype(np.complex128)
    fault_map: dict[int, list[PauliString]] = {}
    for t, p in faults or []:
        fault_map.setdefault(t, []).append(p)
    for t, step in enumerate(c.steps):
        for p in fault_map.get(t, []):
            state = apply_pauli(state, p)
        for g in step:
            state = apply_gate(state, g)
        norm = np.linalg.norm(state)
        if abs(norm - 1.0) > _NORM_TOL:
            raise RuntimeError(f"norm drifted to {norm} after step {t}")
    for p in fault_map.get(c.n_steps, []):
        state = apply_pauli(state, p)
    return state


def run_classical(c: Circuit, input_bits: str | dict[int, int] | None = None,
                  flips: list[tuple[int, int]] | None = None) -> str:
    """Bit-level fast path for computational-basis reversible circuits.

    ``flips`` is a list of (step_index, qubit) X-flips inserted before the
    step.  Returns the output bit string (qubit 0 first).
    """
    bad = {g.kind for step in c.steps for g in step} - _CLASSICAL_GATES
    if bad:
        raise ValueError(f"not a classical-basis circuit: {sorted(k.value for k in bad)}")
    bits = [0] * c.n_qubits
    if isinstance(input_bits, str):
        for q, ch in enumerate(input_bits):
            bits[q] = int(ch)
    else:
        for q, b in (input_bits or {}).items():
            bits[q] = b
    flip_map: dict[int, list[int]] = {}
    for t, q in flips or []:
        flip_map.setdefault(t, []).append(q)
    for t, step in enumerate(c.steps):
        for q in flip_map.get(t, []):
            bits[q] ^= 1
        for g in step:
            if g.kind is Gate.X:
                bits[g.qubits[0]] ^= 1
            elif g.kind is Gate.CNOT:
                bits[g.qubits[1]] ^= bits[g.qubits[0]]
            elif g.kind is Gate.TOFFOLI:
                c1, c2, tq = g.qubits
                bits[tq] ^= bits[c1] & bits[c2]
            elif g.kind is Gate.PREP0:
                bits[g.qubits[0]] = 0
    for q in flip_map.get(c.n_steps, []):
        bits[q] ^= 1
    return "".join(str(b) for b in bits)


def apply_hermitian_pauli(state: np.ndarray, p: PauliString, qubits: list[int]) -> np.ndarray:
    """Apply the Hermitian Pauli P (with proper Y = iXZ phases) to a copy."""
    out = apply_pauli(state.copy(), p, qubits)
    # apply_pauli realizes Z.X per qubit and ZX = iY, so each Y factor
    # needs a compensating -i.
    n_y = bin(p.x_mask & p.z_mask).count("1")
    if n_y % 4:
        out = out * (-1j) ** n_y
    return out


def pauli_expectation(state: np.ndarray, p: PauliString, qubits: list[int]) -> float:
    """<psi| P |psi> for a Pauli supported on the given qubits."""
    val = np.vdot(state, apply_hermitian_pauli(state, p, qubits))
    return float(val.real)


def logical_overlap(code: CodeDef, state: np.ndarray, data_qubits: list[int],
                    reference: str = "zero") -> float:
    """Fidelity with the stabilizer-and-gauge orbit of a reference logical
    state, ancilla traced out.

    Computed as Tr(P rho_data) with P the projector onto the syndrome-zero
    sector with the logical operator fixed, P = prod (1+S_i)/2 * (1+L)/2,
    applied generator by generator to the full state.
    """
    if len(data_qubits) != code.n:
        raise ValueError("data_qubits must match the code size")
    if reference in ("zero", "one"):
        logical, sign = code.logical_z, (+1 if reference == "zero" else -1)
    elif reference in ("plus", "minus"):
        logical, sign = code.logical_x, (+1 if reference == "plus" else -1)
    else:
        raise ValueError("reference must be zero|one|plus|minus")
    projected = state.copy()
    for g, s in [(st, 1) for st in code.stabilizers] + [(logical, sign)]:
        projected = (projected + s * apply_hermitian_pauli(projected, g, data_qubits)) / 2
    return float(np.vdot(state, projected).real)


def grouped_logical_overlap(group_states: list[np.ndarray],
                            group_data: list[list[int]],
                            code: CodeDef, reference: str = "zero") -> float:
    """Logical overlap for a state that factors over disjoint qubit groups
    (e.g. the row- or column-independent preparation gadgets).

    ``group_states[i]`` is the statevector of group i; ``group_data[i]``
    maps code qubit index -> qubit position inside that group (remaining
    group qubits are ancilla).  Every stabilizer and logical of our codes
    factors over the groups, so each projector term is a product of
    per-group expectations.
    """
    if reference in ("zero", "one"):
        logical, sign = code.logical_z, (+1 if reference == "zero" else -1)
    elif reference in ("plus", "minus"):
        logical, sign = code.logical_x, (+1 if reference == "plus" else -1)
    else:
        raise ValueError("reference must be zero|one|plus|minus")
    gens = list(code.stabilizers) + [logical]
    signs = [1] * len(code.stabilizers) + [sign]
    total = 0.0
    n_terms = 1 << len(gens)
    for picks in range(n_terms):
        term = 1.0
        coeff = 1
        for st, posmap in zip(group_states, group_data):
            acted = st
            k = st.ndim
            for i, g in enumerate(gens):
                if not picks >> i & 1:
                    continue
                lx = lz = 0
                for q, pos in posmap.items():
                    lx |= ((g.x_mask >> q) & 1) << pos
                    lz |= ((g.z_mask >> q) & 1) << pos
                if lx or lz:
                    acted = apply_pauli(acted.copy(), PauliString(k, lx, lz),
                                        list(range(k)))
            term *= float(np.vdot(st, acted).real)
        for i, s in enumerate(signs):
            if picks >> i & 1:
                coeff *= s
        total += coeff * term
    return total / n_terms


def factor_out(state: np.ndarray, qubits: list[int], tol: float = 1e-7) -> np.ndarray:
    """Split off qubits that are in a product state with the rest (any
    product state, not just a basis state) and return the statevector of
    the remaining qubits.  Raises if the cut is entangled.

    The remaining qubits keep their relative order, reindexed from 0.
    """
    n = state.ndim
    rest = [q for q in range(n) if q not in qubits]
    moved = np.moveaxis(state, qubits, list(range(len(qubits))))
    flat = moved.reshape(1 << len(qubits), -1)
    # Schmidt cut: rank one iff the qubits are unentangled with the rest
    _, s, vh = np.linalg.svd(flat, full_matrices=False)
    if s[0] < 1 - tol or (len(s) > 1 and s[1] > tol):
        raise ValueError("qubits are entangled with the rest; cannot factor")
    return (vh[0] / np.linalg.norm(vh[0])).reshape((2,) * len(rest))
