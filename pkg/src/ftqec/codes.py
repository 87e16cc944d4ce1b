"""Pauli arithmetic, code definitions, and ideal-decoder verdicts.

Pauli operators are phase-free: a PauliString is a pair of bit masks
(x_mask, z_mask) over n qubits.  Products XOR the masks; global phases are
discarded because no fault-classification quantity here depends on them.

Three codes are provided:

* the 9-qubit Bacon-Shor subsystem code on a 3x3 array (row-major qubit
  index ``q = 3*row + col``), with X gauge operators on row pairs and Z
  gauge operators on column pairs;
* the distance-d bit-flip / phase-flip repetition code;
* the 7-qubit Steane code.

Two classifications of a residual error are exposed:

* ``reduce_mod_gauge`` -- pure coset membership in the group generated by
  stabilizers and gauge operators (and its logical cosets).  Detectable
  errors fall outside every coset and come back ``UNCORRECTABLE``.
* ``ideal_decode_verdict`` -- the logical class left after one round of
  ideal error correction (syndrome measurement + minimum-weight
  correction).  This is total: every Pauli gets one of I/X/Z/Y.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class PauliString:
    """n-qubit Pauli operator as phase-free X/Z bit masks."""

    n: int
    x_mask: int = 0
    z_mask: int = 0

    def __post_init__(self):
        full = (1 << self.n) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError(f"mask exceeds {self.n} qubits")

    @staticmethod
    def from_label(label: str) -> "PauliString":
        """Build from a string like 'XIZ' or 'IYXI' (qubit 0 first)."""
        x = z = 0
        for i, ch in enumerate(label.upper()):
            if ch == "X":
                x |= 1 << i
            elif ch == "Z":
                z |= 1 << i
            elif ch == "Y":
                x |= 1 << i
                z |= 1 << i
            elif ch != "I":
                raise ValueError(f"bad Pauli letter {ch!r}")
        return PauliString(len(label), x, z)

    @staticmethod
    def single(n: int, qubit: int, kind: str) -> "PauliString":
        x = 1 << qubit if kind in ("X", "Y") else 0
        z = 1 << qubit if kind in ("Z", "Y") else 0
        return PauliString(n, x, z)

    def weight(self) -> int:
        return popcount(self.x_mask | self.z_mask)

    def support(self) -> tuple[int, ...]:
        m = self.x_mask | self.z_mask
        return tuple(q for q in range(self.n) if m >> q & 1)

    def commutes(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise ValueError("size mismatch")
        sym = popcount(self.x_mask & other.z_mask) + popcount(self.z_mask & other.x_mask)
        return sym % 2 == 0

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def label(self) -> str:
        out = []
        for q in range(self.n):
            x = self.x_mask >> q & 1
            z = self.z_mask >> q & 1
            out.append("IXZY"[x + 2 * z] if x + 2 * z != 3 else "Y")
        return "".join(out)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Componentwise Pauli product with the phase discarded."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} != {b.n}")
    return PauliString(a.n, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask)


class LogicalClass(enum.Enum):
    I = "I"
    X = "X"
    Z = "Z"
    Y = "Y"
    UNCORRECTABLE = "Uncorrectable"


@dataclass(frozen=True)
class LogicalVerdict:
    cls: LogicalClass

    @property
    def is_identity(self) -> bool:
        return self.cls is LogicalClass.I

    def __mul__(self, other: "LogicalVerdict") -> "LogicalVerdict":
        """Compose as Pauli classes; Uncorrectable absorbs."""
        if self.cls is LogicalClass.UNCORRECTABLE or other.cls is LogicalClass.UNCORRECTABLE:
            return LogicalVerdict(LogicalClass.UNCORRECTABLE)
        table = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
        ax, az = table[self.cls.value]
        bx, bz = table[other.cls.value]
        inv = {v: k for k, v in table.items()}
        return LogicalVerdict(LogicalClass(inv[(ax ^ bx, az ^ bz)]))


_CLASS_FROM_BITS = {
    (0, 0): LogicalClass.I,
    (1, 0): LogicalClass.X,
    (0, 1): LogicalClass.Z,
    (1, 1): LogicalClass.Y,
}


def _span(masks: list[int]) -> frozenset[int]:
    """GF(2) span of bit masks."""
    out = {0}
    for m in masks:
        out |= {v ^ m for v in out}
    return frozenset(out)


@dataclass(frozen=True)
class CodeDef:
    """A stabilizer (subsystem) code with explicit gauge generators."""

    name: str
    n: int
    stabilizers: tuple[PauliString, ...]
    gauge_ops: tuple[PauliString, ...]
    logical_x: PauliString
    logical_z: PauliString
    # spans of the x-masks / z-masks of <stabilizers, gauge_ops>, cached
    _x_span: frozenset[int] = field(repr=False, default=frozenset({0}))
    _z_span: frozenset[int] = field(repr=False, default=frozenset({0}))

    def __post_init__(self):
        for s in self.stabilizers:
            for t in self.stabilizers + self.gauge_ops + (self.logical_x, self.logical_z):
                if not s.commutes(t):
                    raise ValueError(f"stabilizer {s.label()} fails to commute with {t.label()}")
        if self.logical_x.commutes(self.logical_z):
            raise ValueError("logical_x must anticommute with logical_z")
        group = self.stabilizers + self.gauge_ops
        object.__setattr__(self, "_x_span", _span([p.x_mask for p in group]))
        object.__setattr__(self, "_z_span", _span([p.z_mask for p in group]))


def bacon_shor_3x3() -> CodeDef:
    """The Bacon-Shor code on a 3x3 array, qubit index q = 3*row + col."""

    def mask(coords):
        return sum(1 << (3 * r + c) for r, c in coords)

    x_cols_01 = mask([(r, c) for r in range(3) for c in (0, 1)])
    x_cols_12 = mask([(r, c) for r in range(3) for c in (1, 2)])
    z_rows_01 = mask([(r, c) for r in (0, 1) for c in range(3)])
    z_rows_12 = mask([(r, c) for r in (1, 2) for c in range(3)])
    stabs = (
        PauliString(9, x_mask=x_cols_01),
        PauliString(9, x_mask=x_cols_12),
        PauliString(9, z_mask=z_rows_01),
        PauliString(9, z_mask=z_rows_12),
    )
    # X gauge: pairs along a row; Z gauge: pairs along a column.
    gauge = []
    for r in range(3):
        gauge.append(PauliString(9, x_mask=mask([(r, 0), (r, 1)])))
        gauge.append(PauliString(9, x_mask=mask([(r, 1), (r, 2)])))
    for c in range(3):
        gauge.append(PauliString(9, z_mask=mask([(0, c), (1, c)])))
        gauge.append(PauliString(9, z_mask=mask([(1, c), (2, c)])))
    logical_x = PauliString(9, x_mask=mask([(r, 0) for r in range(3)]))  # a column of X
    logical_z = PauliString(9, z_mask=mask([(0, c) for c in range(3)]))  # a row of Z
    return CodeDef("BaconShor3x3", 9, stabs, tuple(gauge), logical_x, logical_z)


def repetition(distance: int = 3, basis: str = "Z") -> CodeDef:
    """Distance-d repetition code.

    basis='Z': bit-flip code a|0..0>+b|1..1>, stabilizers Z_i Z_{i+1},
    X_L = X^(x)d.  basis='X' is the Hadamard dual.
    """
    d = distance
    if basis == "Z":
        stabs = tuple(PauliString(d, z_mask=(0b11 << i)) for i in range(d - 1))
        lx = PauliString(d, x_mask=(1 << d) - 1)
        lz = PauliString(d, z_mask=1)
    elif basis == "X":
        stabs = tuple(PauliString(d, x_mask=(0b11 << i)) for i in range(d - 1))
        lx = PauliString(d, x_mask=1)
        lz = PauliString(d, z_mask=(1 << d) - 1)
    else:
        raise ValueError("basis must be 'X' or 'Z'")
    return CodeDef(f"Repetition{d}{basis}", d, stabs, (), lx, lz)


def steane() -> CodeDef:
    """The 7-qubit Steane code (check matrix rows 0001111/0110011/1010101)."""
    rows = (0b1111000, 0b0110110, 0b1010101)  # qubit 0 = LSB
    stabs = tuple(PauliString(7, x_mask=m) for m in rows) + tuple(
        PauliString(7, z_mask=m) for m in rows
    )
    lx = PauliString(7, x_mask=0b1111111)
    lz = PauliString(7, z_mask=0b1111111)
    return CodeDef("Steane", 7, stabs, (), lx, lz)


def steane_logical_x_reps() -> list[PauliString]:
    """The seven weight-3 representatives of Steane's logical X.

    Derived from the stabilizer group at call time: X_L times each
    nonzero element of the X-stabilizer span has weight 3.
    """
    code = steane()
    lx = code.logical_x.x_mask
    span = _span([s.x_mask for s in code.stabilizers if s.x_mask])
    reps = [PauliString(7, x_mask=lx ^ g) for g in span if popcount(lx ^ g) == 3]
    assert len(reps) == 7
    return sorted(reps, key=lambda p: p.x_mask)


def reduce_mod_gauge(code: CodeDef, e: PauliString) -> LogicalVerdict:
    """Coset classification of e modulo <stabilizers, gauge_ops>.

    I if e lies in the group itself, X/Z/Y if it equals a logical operator
    times a group element, Uncorrectable otherwise (detectable errors and
    judge contexts with ancilla residue).
    """
    if e.n != code.n:
        raise ValueError(f"size mismatch: {e.n} != {code.n}")
    xs, zs = code._x_span, code._z_span
    if e.x_mask in xs:
        xbit = 0
    elif e.x_mask ^ code.logical_x.x_mask in xs:
        xbit = 1
    else:
        return LogicalVerdict(LogicalClass.UNCORRECTABLE)
    if e.z_mask in zs:
        zbit = 0
    elif e.z_mask ^ code.logical_z.z_mask in zs:
        zbit = 1
    else:
        return LogicalVerdict(LogicalClass.UNCORRECTABLE)
    return LogicalVerdict(_CLASS_FROM_BITS[(xbit, zbit)])


def _min_weight_correction(span: frozenset[int], syndrome_of, n: int):
    """Brute-force syndrome table: syndrome -> minimum-weight mask."""
    table: dict[tuple, int] = {}
    for w in range(n + 1):
        for qs in itertools.combinations(range(n), w):
            m = sum(1 << q for q in qs)
            s = syndrome_of(m)
            if s not in table:
                table[s] = m
        if len(table) == 2 ** len(syndrome_of(0)):
            break
    return table


class IdealDecoder:
    """One round of ideal EC: syndrome extraction + min-weight correction.

    Corrections are brute-forced once per (code, sector) and cached; the
    verdict of the corrected residual is its gauge-coset class.
    """

    def __init__(self, code: CodeDef):
        self.code = code
        # X errors are detected by Z-type stabilizers and vice versa.
        self._z_checks = [s.z_mask for s in code.stabilizers if s.z_mask and not s.x_mask]
        self._x_checks = [s.x_mask for s in code.stabilizers if s.x_mask and not s.z_mask]
        self._x_corr = _min_weight_correction(
            code._x_span, lambda m: tuple(popcount(m & c) % 2 for c in self._z_checks), code.n
        )
        self._z_corr = _min_weight_correction(
            code._z_span, lambda m: tuple(popcount(m & c) % 2 for c in self._x_checks), code.n
        )

    def decode(self, e: PauliString) -> LogicalVerdict:
        if e.n != self.code.n:
            raise ValueError("size mismatch")
        sx = tuple(popcount(e.x_mask & c) % 2 for c in self._z_checks)
        sz = tuple(popcount(e.z_mask & c) % 2 for c in self._x_checks)
        corrected = PauliString(
            e.n, e.x_mask ^ self._x_corr[sx], e.z_mask ^ self._z_corr[sz]
        )
        return reduce_mod_gauge(self.code, corrected)


@lru_cache(maxsize=None)
def _decoder(code_name: str) -> IdealDecoder:
    factories = {
        "BaconShor3x3": bacon_shor_3x3,
        "Steane": steane,
    }
    if code_name in factories:
        return IdealDecoder(factories[code_name]())
    if code_name.startswith("Repetition"):
        d = int(code_name[len("Repetition"):-1])
        return IdealDecoder(repetition(d, code_name[-1]))
    raise ValueError(f"unknown code {code_name}")


def ideal_decode_verdict(code: CodeDef, e: PauliString) -> LogicalVerdict:
    """Logical class of the residual after one ideal EC round (total map)."""
    return _decoder(code.name).decode(e)


def correctable_by_ideal_ec(code: CodeDef, e: PauliString) -> bool:
    """True iff an ideal one-round decoder maps e back to the identity class."""
    return ideal_decode_verdict(code, e).is_identity


def weight_class_mod_gauge(code: CodeDef, e: PauliString) -> int:
    """0 if e is trivial mod gauge, 1 if it equals one single-qubit Pauli
    times a gauge-group element, else 2 (meaning two or more errors)."""
    if reduce_mod_gauge(code, e).is_identity:
        return 0
    for q in range(code.n):
        for kind in ("X", "Z", "Y"):
            if reduce_mod_gauge(code, multiply(e, PauliString.single(code.n, q, kind))).is_identity:
                return 1
    return 2
