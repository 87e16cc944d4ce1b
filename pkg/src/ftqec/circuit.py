"""Timed circuit representation with fault locations and text serialization.

A Circuit is an ordered list of steps; each step is a set of gates over
distinct qubits.  Every qubit appears in exactly one gate per step, with
idle qubits carrying an explicit WAIT, so fault locations are in one-to-one
correspondence with gates and location supports partition the
(step, qubit) grid.  There is no classical feed-forward anywhere in the
representation; MEAS gates are legal only in top-level readout circuits.

The text format (UTF-8, LF) is the CLI interchange format::

    qubits 6
    roles dddaaa
    discard 3 4 5
    step 0: PREP0 3; PREP0 4; PREP0 5; WAIT 0; WAIT 1; WAIT 2
    step 1: CNOT 0 3; CNOT 1 4; CNOT 2 5

Role letters: d=data, a=ancilla, v=verifier.  Controls are listed before
targets.  Gate names are exactly the Gate enum members.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Gate(enum.Enum):
    X = "X"
    Z = "Z"
    H = "H"
    CNOT = "CNOT"
    TOFFOLI = "TOFFOLI"
    ZTOFFOLI = "ZTOFFOLI"
    PREP0 = "PREP0"
    PREPPLUS = "PREPPLUS"
    PREPH = "PREPH"
    MEASX = "MEASX"
    MEASZ = "MEASZ"
    WAIT = "WAIT"


GATE_ARITY = {
    Gate.X: 1, Gate.Z: 1, Gate.H: 1,
    Gate.CNOT: 2, Gate.TOFFOLI: 3, Gate.ZTOFFOLI: 3,
    Gate.PREP0: 1, Gate.PREPPLUS: 1, Gate.PREPH: 1,
    Gate.MEASX: 1, Gate.MEASZ: 1, Gate.WAIT: 1,
}

PREP_GATES = frozenset({Gate.PREP0, Gate.PREPPLUS, Gate.PREPH})
MEAS_GATES = frozenset({Gate.MEASX, Gate.MEASZ})


@dataclass(frozen=True)
class GateOp:
    """One gate application: kind + ordered operands (controls first)."""

    kind: Gate
    qubits: tuple[int, ...]

    def __post_init__(self):
        if len(self.qubits) != GATE_ARITY[self.kind]:
            raise ValueError(f"{self.kind.value} takes {GATE_ARITY[self.kind]} operands, "
                             f"got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value} has repeated operand: {self.qubits}")

    def __str__(self):
        return " ".join([self.kind.value] + [str(q) for q in self.qubits])


@dataclass(frozen=True)
class Location:
    """A fault location: one gate at one step."""

    step_index: int
    gate: GateOp

    @property
    def support(self) -> tuple[int, ...]:
        return self.gate.qubits


@dataclass
class Circuit:
    n_qubits: int
    steps: list[list[GateOp]] = field(default_factory=list)
    discard_set: frozenset[int] = frozenset()
    roles: dict[int, str] = field(default_factory=dict)  # qubit -> data|ancilla|verifier

    def locations(self) -> list[Location]:
        return [Location(t, g) for t, step in enumerate(self.steps) for g in step]

    def gate_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for loc in self.locations():
            counts[loc.gate.kind.value] = counts.get(loc.gate.kind.value, 0) + 1
        return counts

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.n_qubits == other.n_qubits
                and [sorted(s, key=lambda g: g.qubits) for s in self.steps]
                == [sorted(s, key=lambda g: g.qubits) for s in other.steps]
                and self.discard_set == other.discard_set
                and self.roles == other.roles)


@dataclass(frozen=True)
class Violation:
    step_index: int
    qubit: int
    reason: str

    def __str__(self):
        return f"step {self.step_index}, qubit {self.qubit}: {self.reason}"


def validate(c: Circuit) -> list[Violation]:
    """Check the circuit invariants; an empty list means ok.

    Violations are data, not exceptions: each names the offending step and
    qubit.
    """
    out: list[Violation] = []
    seen: set[int] = set()  # qubits touched by a non-WAIT gate so far
    for t, step in enumerate(c.steps):
        used: set[int] = set()
        for g in step:
            for q in g.qubits:
                if q < 0 or q >= c.n_qubits:
                    out.append(Violation(t, q, "qubit index out of range"))
                elif q in used:
                    out.append(Violation(t, q, "qubit appears in two gates in one step"))
                used.add(q)
            if g.kind in PREP_GATES and any(q in seen for q in g.qubits):
                out.append(Violation(t, g.qubits[0], "prep gate is not the qubit's first appearance"))
        for q in range(c.n_qubits):
            if q not in used:
                out.append(Violation(t, q, "qubit idle without an explicit WAIT"))
        seen |= {q for g in step if g.kind is not Gate.WAIT for q in g.qubits}
    return out


class CircuitBuilder:
    """Greedy scheduler: each gate lands in the earliest step after the
    last use of all its operands, in emission order.  WAITs fill every
    remaining (step, qubit) slot at build time."""

    def __init__(self, n_qubits: int, jit_preps: bool = True):
        self.n_qubits = n_qubits
        self.jit_preps = jit_preps
        self._gates: list[GateOp] = []
        self._discard: set[int] = set()
        self._roles: dict[int, str] = {}

    _BARRIER = None  # sentinel in the emission list

    def gate(self, kind: Gate, *qubits: int) -> "CircuitBuilder":
        self._gates.append(GateOp(kind, tuple(qubits)))
        return self

    def barrier(self) -> "CircuitBuilder":
        """Later gates start after every gate emitted so far has finished
        (stage alignment for composite gadgets)."""
        self._gates.append(self._BARRIER)
        return self

    def discard(self, *qubits: int) -> "CircuitBuilder":
        self._discard.update(qubits)
        return self

    def role(self, role: str, *qubits: int) -> "CircuitBuilder":
        for q in qubits:
            self._roles[q] = role
        return self

    def build(self) -> Circuit:
        # pass 1: schedule everything except preparations greedily
        next_free = [0] * self.n_qubits
        placed: list[tuple[int, GateOp]] = []
        preps: list[GateOp] = []
        floor = 0
        for g in self._gates:
            if g is self._BARRIER:
                floor = max([floor] + next_free)
                continue
            if g.kind in PREP_GATES and self.jit_preps:
                preps.append(g)
                continue
            t = max([floor] + [next_free[q] for q in g.qubits])
            placed.append((t, g))
            for q in g.qubits:
                next_free[q] = t + 1
        # pass 2: preparations go just in time, one step before first use;
        # shift everything if some prepared qubit is first used at step 0
        first_use: dict[int, int] = {}
        for t, g in placed:
            for q in g.qubits:
                first_use[q] = min(first_use.get(q, t), t)
        shift = 1 if any(first_use.get(g.qubits[0], 1) == 0 for g in preps) else 0
        scheduled = [(t + shift, g) for t, g in placed]
        for g in preps:
            q = g.qubits[0]
            scheduled.append((first_use.get(q, 1 - shift) + shift - 1, g))
        n_steps = 1 + max((t for t, _ in scheduled), default=-1)
        steps: list[list[GateOp]] = [[] for _ in range(n_steps)]
        for t, g in scheduled:
            steps[t].append(g)
        for step in steps:
            busy = {q for g in step for q in g.qubits}
            for q in range(self.n_qubits):
                if q not in busy:
                    step.append(GateOp(Gate.WAIT, (q,)))
            step.sort(key=lambda g: g.qubits)
        return Circuit(self.n_qubits, steps, frozenset(self._discard), dict(self._roles))


_ROLE_CHAR = {"data": "d", "ancilla": "a", "verifier": "v"}
_CHAR_ROLE = {v: k for k, v in _ROLE_CHAR.items()}


def serialize(c: Circuit) -> str:
    """Canonical text form; gates within a step are sorted by operands."""
    lines = [f"qubits {c.n_qubits}"]
    if c.roles:
        chars = "".join(_ROLE_CHAR.get(c.roles.get(q, "data"), "d") for q in range(c.n_qubits))
        lines.append(f"roles {chars}")
    if c.discard_set:
        lines.append("discard " + " ".join(str(q) for q in sorted(c.discard_set)))
    for t, step in enumerate(c.steps):
        body = "; ".join(str(g) for g in sorted(step, key=lambda g: g.qubits))
        lines.append(f"step {t}: {body}")
    return "\n".join(lines) + "\n"


class ParseError(ValueError):
    def __init__(self, line_no: int, token: str, msg: str):
        self.line_no = line_no
        self.token = token
        super().__init__(f"line {line_no}: {msg} (at {token!r})")


def parse(text: str) -> Circuit:
    """Parse the text format; reports line number and token on errors."""
    lines = [ln for ln in text.splitlines()]
    n_qubits = None
    roles: dict[int, str] = {}
    discard: frozenset[int] = frozenset()
    steps: list[list[GateOp]] = []
    expected_step = 0
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head = line.split()[0]
        if head == "qubits":
            try:
                n_qubits = int(line.split()[1])
            except (IndexError, ValueError):
                raise ParseError(i, line, "expected 'qubits N'")
        elif head == "roles":
            chars = line.split(None, 1)[1].strip() if len(line.split(None, 1)) > 1 else ""
            for q, ch in enumerate(chars):
                if ch not in _CHAR_ROLE:
                    raise ParseError(i, ch, "unknown role letter")
                roles[q] = _CHAR_ROLE[ch]
        elif head == "discard":
            try:
                discard = frozenset(int(tok) for tok in line.split()[1:])
            except ValueError as e:
                raise ParseError(i, line, str(e))
        elif head == "step":
            try:
                label, body = line.split(":", 1)
                t = int(label.split()[1])
            except (IndexError, ValueError):
                raise ParseError(i, line, "expected 'step t: ...'")
            if t != expected_step:
                raise ParseError(i, label, f"expected step {expected_step}")
            expected_step += 1
            step: list[GateOp] = []
            for item in body.split(";"):
                toks = item.split()
                if not toks:
                    continue
                try:
                    kind = Gate(toks[0])
                except ValueError:
                    raise ParseError(i, toks[0], "unknown gate")
                try:
                    qubits = tuple(int(tok) for tok in toks[1:])
                except ValueError:
                    raise ParseError(i, item.strip(), "bad operand")
                try:
                    step.append(GateOp(kind, qubits))
                except ValueError as e:
                    raise ParseError(i, item.strip(), str(e))
            steps.append(step)
        else:
            raise ParseError(i, head, "unknown directive")
    if n_qubits is None:
        raise ParseError(0, "", "missing 'qubits N' header")
    return Circuit(n_qubits, steps, discard, roles)
