"""Pauli fault propagation through circuits.

A fault is a nontrivial Pauli on a location's support, inserted after the
gate at that location executes (a faulty gate is the perfect gate followed
by its error).  Frames are (x_mask, z_mask) integer pairs over the whole
circuit.

TOFFOLI semantics come in two flavours:

* ``free`` (context-free): X or Y entering a control spawns a branch set
  {frame, frame * X_target}, capped at two branches per TOFFOLI; the
  adversary owns the unknown value of the other control.
* ``clean_zero`` (gadget context): correction-gate controls carry
  classical syndrome information that is deterministically zero in the
  fault-free run, so the target flips exactly when the frame covers both
  controls.  This is the semantics used for counting and Monte Carlo;
  the free semantics would flag single faults as malignant, contradicting
  the fault-tolerance property the gadgets are built to have.

In both flavours Z entering the target spreads Z onto both controls
(dropped with the discarded ancilla lines), and ZTOFFOLI is the Hadamard
dual.  Phases are discarded throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Gate, GateOp, Location


@dataclass(frozen=True)
class FaultEvent:
    """A Pauli fault at one location (masks over the whole circuit)."""

    location: Location
    x_mask: int
    z_mask: int

    def __post_init__(self):
        support = 0
        for q in self.location.support:
            support |= 1 << q
        if (self.x_mask | self.z_mask) & ~support:
            raise ValueError("fault support exceeds the location support")
        if not (self.x_mask | self.z_mask):
            raise ValueError("fault must be a nontrivial Pauli")


def _pauli_masks(k: int) -> list[tuple[int, int]]:
    out = []
    for xz in range(1, 4 ** k):
        x = z = 0
        v = xz
        for i in range(k):
            x |= (v & 1) << i
            z |= ((v >> 1) & 1) << i
            v >>= 2
        out.append((x, z))
    return out


_P1 = _pauli_masks(1)
_P2 = _pauli_masks(2)
_P3 = _pauli_masks(3)


def fault_alphabet(loc: Location) -> list[tuple[int, int]]:
    """Nontrivial fault masks (x, z) on the location's support, in global
    qubit positions.

    Two-qubit gates span 15 Paulis, three-qubit gates 63, single-qubit
    gates and waits 3; preparations flip once in the prepared basis;
    measurements flip their outcome.
    """
    kind = loc.gate.kind
    qs = loc.support
    if kind is Gate.PREP0:
        local = [(1, 0)]
    elif kind is Gate.PREPPLUS:
        local = [(0, 1)]
    elif kind is Gate.PREPH:
        local = _P1
    elif kind is Gate.MEASZ:
        local = [(1, 0)]  # outcome flip
    elif kind is Gate.MEASX:
        local = [(0, 1)]
    elif len(qs) == 1:
        local = _P1
    elif len(qs) == 2:
        local = _P2
    else:
        local = _P3
    out = []
    for lx, lz in local:
        gx = gz = 0
        for i, q in enumerate(qs):
            gx |= ((lx >> i) & 1) << q
            gz |= ((lz >> i) & 1) << q
        out.append((gx, gz))
    return out


class FrameWalker:
    """Deterministic (clean-zero-control) frame propagation with optional
    tap recording at three-qubit gates.

    Precomputes, per step, the gates that can act on a frame; WAITs,
    preparations, measurements and Pauli gates are transparent.
    """

    def __init__(self, circuit: Circuit):
        self.circuit = circuit
        self.steps: list[list[tuple]] = []
        self.toffoli_index: dict[tuple[int, int], int] = {}  # (step, target) -> tap id
        n_taps = 0
        for t, step in enumerate(circuit.steps):
            compiled = []
            for g in step:
                if g.kind is Gate.CNOT:
                    c, q = g.qubits
                    compiled.append((0, 1 << c, 1 << q, 0))
                elif g.kind is Gate.H:
                    compiled.append((1, 1 << g.qubits[0], 0, 0))
                elif g.kind is Gate.TOFFOLI:
                    c1, c2, tq = g.qubits
                    compiled.append((2, 1 << c1, 1 << c2, (1 << tq, n_taps)))
                    self.toffoli_index[(t, tq)] = n_taps
                    n_taps += 1
                elif g.kind is Gate.ZTOFFOLI:
                    c1, c2, tq = g.qubits
                    compiled.append((3, 1 << c1, 1 << c2, (1 << tq, n_taps)))
                    self.toffoli_index[(t, tq)] = n_taps
                    n_taps += 1
            self.steps.append(compiled)
        self.n_taps = n_taps

    def walk(self, start_step: int, x: int, z: int,
             record_taps: bool = False) -> tuple[int, int, int, int]:
        """Push a frame from (just before) start_step to the end.

        Returns (x, z, amask, bmask): the final frame plus, when
        ``record_taps``, bitmasks over tap ids describing which control of
        which three-qubit gate the frame touched at gate time.
        """
        amask = bmask = 0
        for t in range(start_step, len(self.steps)):
            for op in self.steps[t]:
                kind = op[0]
                if kind == 0:  # CNOT
                    cb, tb = op[1], op[2]
                    if x & cb:
                        x ^= tb
                    if z & tb:
                        z ^= cb
                elif kind == 1:  # H
                    qb = op[1]
                    if bool(x & qb) != bool(z & qb):
                        x ^= qb
                        z ^= qb
                elif kind == 2:  # TOFFOLI
                    b1, b2, (bt, tap) = op[1], op[2], op[3]
                    a = bool(x & b1)
                    b = bool(x & b2)
                    if record_taps:
                        if a:
                            amask |= 1 << tap
                        if b:
                            bmask |= 1 << tap
                    if z & bt:
                        z ^= b1 | b2
                    if a and b:
                        x ^= bt
                else:  # ZTOFFOLI
                    b1, b2, (bt, tap) = op[1], op[2], op[3]
                    a = bool(z & b1)
                    b = bool(z & b2)
                    if record_taps:
                        if a:
                            amask |= 1 << tap
                        if b:
                            bmask |= 1 << tap
                    if x & bt:
                        x ^= b1 | b2
                    if a and b:
                        z ^= bt
        return x, z, amask, bmask

    def _one_step(self, t: int, x: int, z: int) -> tuple[int, int]:
        for op in self.steps[t]:
            kind = op[0]
            if kind == 0:
                cb, tb = op[1], op[2]
                if x & cb:
                    x ^= tb
                if z & tb:
                    z ^= cb
            elif kind == 1:
                qb = op[1]
                if bool(x & qb) != bool(z & qb):
                    x ^= qb
                    z ^= qb
            elif kind == 2:
                b1, b2, (bt, _) = op[1], op[2], op[3]
                if z & bt:
                    z ^= b1 | b2
                if (x & b1) and (x & b2):
                    x ^= bt
            else:
                b1, b2, (bt, _) = op[1], op[2], op[3]
                if x & bt:
                    x ^= b1 | b2
                if (z & b1) and (z & b2):
                    z ^= bt
        return x, z

    def walk_joint_faults(self, faults: list[tuple[int, int, int]]) -> tuple[int, int]:
        """Exact joint propagation of several faults, each a (step, x, z)
        triple inserted after its own step's gates."""
        by_step: dict[int, tuple[int, int]] = {}
        for t, fx, fz in faults:
            px, pz = by_step.get(t, (0, 0))
            by_step[t] = (px ^ fx, pz ^ fz)
        order = sorted(by_step)
        x, z = by_step[order[0]]
        pos = order[0] + 1
        for t in order[1:]:
            for s in range(pos, t + 1):
                x, z = self._one_step(s, x, z)
            pos = t + 1
            fx, fz = by_step[t]
            x ^= fx
            z ^= fz
        for s in range(pos, len(self.steps)):
            x, z = self._one_step(s, x, z)
        return x, z


def _conjugate_step_free(frames: set[tuple[int, int]], step: list[GateOp]) -> set[tuple[int, int]]:
    """Context-free conjugation of a frame set through one step (branch
    sets at three-qubit gates)."""
    for g in step:
        kind = g.kind
        if kind is Gate.CNOT:
            c, t = g.qubits
            cb, tb = 1 << c, 1 << t
            frames = {(x ^ (tb if x & cb else 0), z ^ (cb if z & tb else 0))
                      for x, z in frames}
        elif kind is Gate.H:
            q = 1 << g.qubits[0]
            frames = {(x ^ q, z ^ q) if bool(x & q) != bool(z & q) else (x, z)
                      for x, z in frames}
        elif kind is Gate.TOFFOLI:
            c1, c2, t = g.qubits
            b1, b2, bt = 1 << c1, 1 << c2, 1 << t
            new = set()
            for x, z in frames:
                if z & bt:
                    z ^= b1 | b2
                new.add((x, z))
                if x & (b1 | b2):
                    new.add((x ^ bt, z))
            frames = new
        elif kind is Gate.ZTOFFOLI:
            c1, c2, t = g.qubits
            b1, b2, bt = 1 << c1, 1 << c2, 1 << t
            new = set()
            for x, z in frames:
                if x & bt:
                    x ^= b1 | b2
                new.add((x, z))
                if z & (b1 | b2):
                    new.add((x, z ^ bt))
            frames = new
    return frames


def propagate(circuit: Circuit, faults: list[FaultEvent],
              control_context: str = "free") -> set[tuple[int, int]]:
    """Residual frame set at the circuit end (over all qubits).

    ``control_context='free'`` returns the branch set of context-free
    TOFFOLI conjugation; ``'clean_zero'`` returns the single deterministic
    residual of the gadget-context semantics.
    """
    locs = {(f.location.step_index, f.location.gate) for f in faults}
    if len(locs) != len(faults):
        raise ValueError("faults must sit at distinct locations")
    for f in faults:
        if f.location.step_index >= circuit.n_steps:
            raise ValueError("fault on nonexistent location")
    if control_context == "clean_zero":
        w = FrameWalker(circuit)
        x, z = w.walk_joint_faults(
            [(f.location.step_index, f.x_mask, f.z_mask) for f in faults])
        return {(x, z)}
    if control_context != "free":
        raise ValueError("control_context must be 'free' or 'clean_zero'")
    by_step: dict[int, list[FaultEvent]] = {}
    for f in faults:
        by_step.setdefault(f.location.step_index, []).append(f)
    start = min(by_step)
    frames: set[tuple[int, int]] = {(0, 0)}
    for t in range(start, circuit.n_steps):
        if t > start:  # faults join after their own step's gates
            frames = _conjugate_step_free(frames, circuit.steps[t])
        for f in by_step.get(t, []):
            frames = {(x ^ f.x_mask, z ^ f.z_mask) for x, z in frames}
    return frames


def restrict(frame: tuple[int, int], qubits: tuple[int, ...]) -> tuple[int, int]:
    """Pack a global frame down to the given qubits (block-local bits)."""
    x, z = frame
    rx = rz = 0
    for i, q in enumerate(qubits):
        rx |= ((x >> q) & 1) << i
        rz |= ((z >> q) & 1) << i
    return rx, rz
