"""Constructors for the measurement-free gadget zoo.

Level-1 gadgets are explicit physical circuits; level-k>1 requests return a
recursive schematic over level-(k-1) gate symbols instead of a flattened
circuit.

Conventions baked in here:

* Bacon-Shor data arrays are row-major, q = 3*row + col.
* Cyclic rotations in syndrome extraction go i -> i+1 (mod n); either
  direction gives isomorphic circuits.
* The X-correction stage extracts one difference string per column into a
  3x3 ancilla block, votes the three strings into the block's third column
  (two transversal CNOT layers), computes per-row flip bits with TOFFOLIs
  into work qubits, and fans the flips out to whole data rows with CNOTs.
  Flipping a full row differs from the intended single-qubit correction by
  a gauge operator only.  The Z stage is the Hadamard-conjugate acting on
  one column (transposed layout, reversed CNOTs, ZTOFFOLI flip bits).
* Ancilla preparations are scheduled just in time (one step before first
  use); every idle (step, qubit) slot still carries an explicit WAIT.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .circuit import Circuit, CircuitBuilder, Gate


@dataclass(frozen=True)
class GadgetSpec:
    kind: str
    level: int = 1
    n: int = 3              # string length for M_N / ParityVoter / CatVerify
    rounds: int = 1         # cooling tree rounds
    toffoli_mode: str = "native"  # native | two_qubit_decomposed

    KINDS = (
        "M_X", "M_Z", "M_N", "ParityVoter", "CatVerify", "N_X", "N_Z",
        "VN_row", "EC_X", "EC_Z", "EC_full", "ExRecCNOT", "ExRecBTOFF",
        "ExRecVN", "PrepZero_L", "PrepPlus_L", "Encoder", "CoolingTree",
        "SteaneN",
    )

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown gadget kind {self.kind!r}")
        if self.kind.startswith("EC") and self.level < 1:
            raise ValueError("EC kinds require level >= 1")
        if self.kind == "M_N" and self.n not in (3, 5, 7):
            raise ValueError("M_N requires odd n in {3, 5, 7}")


@dataclass(frozen=True)
class JudgeBlock:
    """An output block and the code + error sector it is judged against."""

    qubits: tuple[int, ...]
    code_name: str
    sector: str  # "X", "Z", or "XZ"


@dataclass
class GadgetCircuit:
    spec: GadgetSpec
    circuit: Circuit
    data_qubits: tuple[int, ...]
    ancilla_qubits: tuple[int, ...]
    judge_blocks: tuple[JudgeBlock, ...]
    input_blocks: tuple[JudgeBlock, ...] = ()
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SchematicOp:
    name: str
    count: int


@dataclass(frozen=True)
class GadgetSchematic:
    """Level-k>1 gadgets as gate lists over level-(k-1) symbols."""

    spec: GadgetSpec
    ops: tuple[SchematicOp, ...]
    note: str = ""


# K-sets for the multi-controlled correction block of M(N): for each data
# qubit the gates are all kappa-subsets of its N-1 difference bits.
K_SETS = {3: (2,), 5: (4, 3), 7: (6, 4)}


def _emit_toffoli(b: CircuitBuilder, c1: int, c2: int, t: int, mode: str,
                  drop_final: bool = False) -> None:
    """A TOFFOLI, either native or as the 5-gate two-qubit stand-in
    (3 time-steps, first two gates simultaneous, final control-restoring
    gate droppable when the controls are discarded)."""
    if mode == "native":
        b.gate(Gate.TOFFOLI, c1, c2, t)
        return
    b.gate(Gate.H, c1)
    b.gate(Gate.CNOT, c2, t)
    b.gate(Gate.CNOT, c1, c2)
    b.gate(Gate.CNOT, c1, t)
    if not drop_final:
        b.gate(Gate.H, c2)


def _emit_ztoffoli(b: CircuitBuilder, c1: int, c2: int, t: int, mode: str) -> None:
    if mode == "native":
        b.gate(Gate.ZTOFFOLI, c1, c2, t)
        return
    b.gate(Gate.H, c1)
    b.gate(Gate.CNOT, t, c2)
    b.gate(Gate.CNOT, c2, c1)
    b.gate(Gate.CNOT, t, c1)
    b.gate(Gate.H, c2)


# ---------------------------------------------------------------------------
# Majority voter (M gate) and friends
# ---------------------------------------------------------------------------

def _emit_m(b: CircuitBuilder, data: list[int], regs: list[list[int]],
            basis: str, mode: str = "native", work: list[int] | None = None) -> None:
    """Syndrome extraction (transversal CNOTs onto fresh registers, then
    cyclic-rotation-offset un-compute CNOTs) followed by the correction
    block C over the K-set for this string length."""
    n = len(data)
    prep = Gate.PREP0 if basis == "X" else Gate.PREPPLUS
    for reg in regs:
        for q in reg:
            b.gate(prep, q)
    # extraction: register i ends holding s XOR R^i(s)
    for i, reg in enumerate(regs, start=1):
        for k in range(n):
            if basis == "X":
                b.gate(Gate.CNOT, data[k], reg[k])
            else:
                b.gate(Gate.CNOT, reg[k], data[k])
    for i, reg in enumerate(regs, start=1):
        for k in range(n):
            if basis == "X":
                b.gate(Gate.CNOT, data[k], reg[(k + i) % n])
            else:
                b.gate(Gate.CNOT, reg[(k + i) % n], data[k])
    # correction block: difference bits for data qubit k sit at position k
    # of every register.
    kset = K_SETS[n]
    nbits = n - 1
    if n == 3:
        for k in range(n):
            if basis == "X":
                _emit_toffoli(b, regs[0][k], regs[1][k], data[k], mode)
            else:
                _emit_ztoffoli(b, regs[0][k], regs[1][k], data[k], mode)
        return
    # n = 5, 7: kappa-controlled NOTs assembled from TOFFOLI trees over
    # work ancillas (uncomputed after each gate so they can be reused).
    assert basis == "X" and work is not None
    for k in range(n):
        bits = [regs[i][k] for i in range(nbits)]
        for kappa in kset:
            for combo in itertools.combinations(bits, kappa):
                _emit_controlled_not(b, list(combo), data[k], work)


def _emit_controlled_not(b: CircuitBuilder, controls: list[int], target: int,
                         work: list[int]) -> None:
    """kappa-controlled NOT via a TOFFOLI tree; work ancillas are
    uncomputed back to |0> afterwards."""
    k = len(controls)
    if k == 1:
        b.gate(Gate.CNOT, controls[0], target)
        return
    if k == 2:
        b.gate(Gate.TOFFOLI, controls[0], controls[1], target)
        return
    # reduce pairs into work qubits, recurse
    used: list[tuple[int, int, int]] = []
    layer = list(controls)
    widx = 0
    while len(layer) > 2:
        nxt = []
        i = 0
        while i + 1 < len(layer):
            w = work[widx]
            widx += 1
            b.gate(Gate.TOFFOLI, layer[i], layer[i + 1], w)
            used.append((layer[i], layer[i + 1], w))
            nxt.append(w)
            i += 2
        if i < len(layer):
            nxt.append(layer[i])
        layer = nxt
    b.gate(Gate.TOFFOLI, layer[0], layer[1], target)
    for c1, c2, w in reversed(used):
        b.gate(Gate.TOFFOLI, c1, c2, w)


def build_m(basis: str = "X", n: int = 3, level: int = 1,
            toffoli_mode: str = "native") -> GadgetCircuit:
    """Majority voting gadget for the length-n repetition code.

    basis='X' corrects bit flips (|0..0> ancillas), basis='Z' is the
    Hadamard conjugate correcting phase flips.
    """
    if n not in K_SETS:
        raise ValueError(f"unsupported n {n}; need odd n in {{3, 5, 7}}")
    if basis == "Z" and n != 3:
        raise ValueError("Z-basis voter is built for n = 3")
    if level != 1:
        return _m_schematic(basis, n, level)  # type: ignore[return-value]
    nbits = n - 1
    data = list(range(n))
    regs = [[n + i * n + k for k in range(n)] for i in range(nbits)]
    n_work = 4 if n == 7 else (2 if n == 5 else 0)
    work = list(range(n + nbits * n, n + nbits * n + n_work))
    b = CircuitBuilder(n + nbits * n + n_work)
    _emit_m(b, data, regs, basis, toffoli_mode, work)
    anc = tuple(q for reg in regs for q in reg) + tuple(work)
    b.role("data", *data).role("ancilla", *anc).discard(*anc)
    code = f"Repetition{n}Z" if basis == "X" else f"Repetition{n}X"
    sector = "X" if basis == "X" else "Z"
    kind = {"X": "M_X", "Z": "M_Z"}[basis] if n == 3 else "M_N"
    return GadgetCircuit(
        GadgetSpec(kind, level=1, n=n, toffoli_mode=toffoli_mode),
        b.build(), tuple(data), anc,
        (JudgeBlock(tuple(data), code, sector),),
        (JudgeBlock(tuple(data), code, sector),),
    )


def _m_schematic(basis: str, n: int, level: int) -> GadgetSchematic:
    # bitwise form of the level-1 circuit minus the preparations, which
    # contract away above level 1
    ops = (
        SchematicOp(f"CNOT({level - 1})", 2 * n * (n - 1)),
        SchematicOp(f"bTOFFOLI({level - 1})", n),
        SchematicOp(f"WAIT({level - 1})", (n - 1) * n - n),
    )
    return GadgetSchematic(GadgetSpec("M_X" if basis == "X" else "M_Z", level, n=n), ops)


def build_parity_voter(n: int = 3) -> GadgetCircuit:
    """Parity voter: |s_1..s_n>|0...> -> |q..q> with q the total parity.

    Same layout as M with the correction block and the final un-compute
    CNOT layer swapped; C is the column-controlled CNOT set.
    """
    if n < 2:
        raise ValueError("parity voter needs n >= 2")
    nbits = n - 1
    data = list(range(n))
    regs = [[n + i * n + k for k in range(n)] for i in range(nbits)]
    b = CircuitBuilder(n + nbits * n)
    for reg in regs:
        for q in reg:
            b.gate(Gate.PREP0, q)
    for reg in regs:
        for k in range(n):
            b.gate(Gate.CNOT, data[k], reg[k])
    # C block: ancilla bits in the (rotated) column k control data qubit k
    for i, reg in enumerate(regs, start=1):
        for k in range(n):
            b.gate(Gate.CNOT, reg[(k - i) % n], data[k])
    # final (un-compute) CNOT layer with rotated targets
    for i, reg in enumerate(regs, start=1):
        for k in range(n):
            b.gate(Gate.CNOT, data[k], reg[(k + i) % n])
    anc = tuple(q for reg in regs for q in reg)
    b.role("data", *data).role("ancilla", *anc).discard(*anc)
    return GadgetCircuit(
        GadgetSpec("ParityVoter", n=n), b.build(), tuple(data), anc,
        (JudgeBlock(tuple(data), f"Repetition{n}Z", "X"),),
)


def build_cat_verify(n: int = 4) -> GadgetCircuit:
    """Deterministic cat verification: CNOT-chain preparation of
    (|0..0>+|1..1>)/sqrt(2) followed by two successive majority voters on
    overlapping triples; no measurement anywhere."""
    if n != 4:
        raise ValueError("the construction is instantiated for n = 4")
    data = list(range(4))
    m1_regs = [[4 + i * 3 + k for k in range(3)] for i in range(2)]
    m2_regs = [[10 + i * 3 + k for k in range(3)] for i in range(2)]
    b = CircuitBuilder(16)
    b.gate(Gate.PREPPLUS, 0)
    for q in (1, 2, 3):
        b.gate(Gate.PREP0, q)
    b.gate(Gate.CNOT, 0, 1)
    b.gate(Gate.CNOT, 1, 2)
    b.gate(Gate.CNOT, 2, 3)
    b.barrier()
    _emit_m(b, [0, 1, 2], m1_regs, "X")
    b.barrier()
    _emit_m(b, [1, 2, 3], m2_regs, "X")
    anc = tuple(q for reg in m1_regs + m2_regs for q in reg)
    b.role("data", *data).role("ancilla", *anc).discard(*anc)
    return GadgetCircuit(
        GadgetSpec("CatVerify", n=4), b.build(), tuple(data), anc,
        (JudgeBlock(tuple(data), "Repetition4Z", "X"),),
    )


# ---------------------------------------------------------------------------
# N gate (BS -> QR decoder) and the VN row subroutine
# ---------------------------------------------------------------------------

def _rc(r: int, c: int) -> int:
    return 3 * r + c


def build_n(basis: str = "X", level: int = 1) -> GadgetCircuit:
    """Coherent decoder from the Bacon-Shor block to the length-3
    repetition code of the same level.

    N_X reads row parities (the logical Z-basis bit) into column 2;
    N_Z is the transposed Hadamard conjugate reading column X-parities
    into row 2.
    """
    if level != 1:
        ops = (SchematicOp(f"CNOT({level - 1})", 6),
               SchematicOp(f"N({level - 2})", 3),
               SchematicOp(f"M({level - 1})", 1))
        return GadgetSchematic(GadgetSpec(f"N_{basis}", level), ops)  # type: ignore[return-value]
    b = CircuitBuilder(9)
    if basis == "X":
        for r in range(3):
            b.gate(Gate.CNOT, _rc(r, 0), _rc(r, 2))
            b.gate(Gate.CNOT, _rc(r, 1), _rc(r, 2))
        out = tuple(_rc(r, 2) for r in range(3))
        dropped = tuple(_rc(r, c) for r in range(3) for c in (0, 1))
        code = "Repetition3Z"
    elif basis == "Z":
        for c in range(3):
            b.gate(Gate.CNOT, _rc(2, c), _rc(0, c))
            b.gate(Gate.CNOT, _rc(2, c), _rc(1, c))
        out = tuple(_rc(2, c) for c in range(3))
        dropped = tuple(_rc(r, c) for r in (0, 1) for c in range(3))
        code = "Repetition3X"
    else:
        raise ValueError("basis must be 'X' or 'Z'")
    b.role("data", *range(9)).discard(*dropped)
    return GadgetCircuit(
        GadgetSpec(f"N_{basis}", 1), b.build(), out, dropped,
        (JudgeBlock(out, code, "X" if basis == "X" else "Z"),),
    )


def build_vn_row() -> GadgetCircuit:
    """One row of the syndrome-processing subroutine: XOR lines 1 and 2
    into line 3 (the vote), top lines discarded."""
    b = CircuitBuilder(3)
    b.gate(Gate.CNOT, 1, 2)
    b.gate(Gate.CNOT, 0, 2)
    b.role("data", 0, 1, 2).discard(0, 1)
    return GadgetCircuit(
        GadgetSpec("VN_row", 1), b.build(), (2,), (0, 1),
        (JudgeBlock((2,), "Repetition3Z", "X"),),
    )


# ---------------------------------------------------------------------------
# The Bacon-Shor EC gadget
# ---------------------------------------------------------------------------

def _ec_x_phases(b: CircuitBuilder, data: list[int], anc: list[int],
                 mode: str) -> dict[str, callable]:
    """X-error correction phases: per-column difference extraction into a
    3x3 ancilla block, transversal vote into the block's third column,
    then one TOFFOLI per row applying the correction.

    Flipping a single qubit of the minority row is gauge-equivalent to
    flipping the whole row, so each TOFFOLI targets just the row's
    third-column qubit."""
    A = lambda r, c: anc[3 * r + c]
    D = lambda r, c: data[3 * r + c]

    def preps():
        for q in anc:
            b.gate(Gate.PREP0, q)

    def extract():
        for r in range(3):
            for c in range(3):
                b.gate(Gate.CNOT, D(r, c), A(r, c))
        for r in range(3):
            for c in range(3):
                b.gate(Gate.CNOT, D(r, c), A((r - 1) % 3, c))  # A[r][c] = x[r][c]^x[r+1][c]

    def vote():
        for r in range(3):
            b.gate(Gate.CNOT, A(r, 0), A(r, 2))
        for r in range(3):
            b.gate(Gate.CNOT, A(r, 1), A(r, 2))  # A[r][2] = p_r ^ p_{r+1}

    def flips():
        # row r is the minority iff beta_{r-1} and beta_r are both set
        for r in range(3):
            _emit_toffoli(b, A((r - 1) % 3, 2), A(r, 2), D(r, 2), mode)

    return {"preps": preps, "extract": extract, "vote": vote, "flips": flips}


def _ec_z_phases(b: CircuitBuilder, data: list[int], anc: list[int],
                 mode: str) -> dict[str, callable]:
    """Hadamard conjugate of the X stage acting on one column: transposed
    layout, reversed CNOTs, |+> ancillas, ZTOFFOLI corrections."""
    B = lambda r, c: anc[3 * r + c]
    D = lambda r, c: data[3 * r + c]

    def preps():
        for q in anc:
            b.gate(Gate.PREPPLUS, q)

    def extract():
        for r in range(3):
            for c in range(3):
                b.gate(Gate.CNOT, B(r, c), D(r, c))
        for r in range(3):
            for c in range(3):
                b.gate(Gate.CNOT, B(r, c), D(r, (c + 1) % 3))  # B[r][c] ~ z diffs in row r

    def vote():
        for c in range(3):
            b.gate(Gate.CNOT, B(2, c), B(0, c))
        for c in range(3):
            b.gate(Gate.CNOT, B(2, c), B(1, c))  # B[2][c] (X-value) = q_c ^ q_{c+1}

    def flips():
        for c in range(3):
            _emit_ztoffoli(b, B(2, (c - 1) % 3), B(2, c), D(2, c), mode)

    return {"preps": preps, "extract": extract, "vote": vote, "flips": flips}


def build_ec(basis: str = "full", level: int = 1,
             toffoli_mode: str = "native") -> GadgetCircuit:
    """Error correction gadget for the Bacon-Shor block.

    basis='X'/'Z' builds one stage; 'full' is the X stage composed with the
    Z stage, interleaved so the full gadget runs exactly two steps longer
    than the X stage alone.  level > 1 returns the recursive schematic.
    """
    if level < 1:
        raise ValueError("EC requires level >= 1")
    if level > 1:
        return _ec_schematic(basis, level)  # type: ignore[return-value]
    data = list(range(9))
    kind = {"X": "EC_X", "Z": "EC_Z", "full": "EC_full"}[basis]
    if basis in ("X", "Z"):
        anc = list(range(9, 18))
        b = CircuitBuilder(18)
        phases = (_ec_x_phases if basis == "X" else _ec_z_phases)(
            b, data, anc, toffoli_mode)
        for name in ("preps", "extract", "vote", "flips"):
            phases[name]()
        judge = (JudgeBlock(tuple(data), "BaconShor3x3", basis),)
    elif basis == "full":
        anc = list(range(9, 27))
        b = CircuitBuilder(27)
        xp = _ec_x_phases(b, data, list(range(9, 18)), toffoli_mode)
        zp = _ec_z_phases(b, data, list(range(18, 27)), toffoli_mode)
        # interleaved emission: the Z extraction rides the X vote steps and
        # the Z corrections trail the X corrections, so the full gadget
        # takes exactly two steps more than the X stage alone
        for phase in (xp["preps"], zp["preps"], xp["extract"], xp["vote"],
                      zp["extract"], zp["vote"], xp["flips"], zp["flips"]):
            phase()
        judge = (JudgeBlock(tuple(data), "BaconShor3x3", "XZ"),)
    else:
        raise ValueError("basis must be 'X', 'Z', or 'full'")
    allanc = tuple(anc)
    b.role("data", *data).role("ancilla", *allanc).discard(*allanc)
    return GadgetCircuit(
        GadgetSpec(kind, 1, toffoli_mode=toffoli_mode), b.build(),
        tuple(data), allanc, judge,
        (JudgeBlock(tuple(data), "BaconShor3x3", "XZ"),),
    )


def _ec_schematic(basis: str, level: int) -> GadgetSchematic:
    k1 = level - 1
    stage = (
        SchematicOp(f"CNOT({k1})", 18),
        SchematicOp(f"VN_row({k1})", 3),
        SchematicOp(f"bTOFFOLI({k1})", 3),
    )
    ops = stage if basis != "full" else stage + stage
    return GadgetSchematic(
        GadgetSpec({"X": "EC_X", "Z": "EC_Z", "full": "EC_full"}[basis], level),
        ops, note="ancilla blocks prepared offline; preparations contract above level 1",
    )


# ---------------------------------------------------------------------------
# Extended rectangles
# ---------------------------------------------------------------------------

def _emit_offset(b: CircuitBuilder, g: GadgetCircuit, qubit_map: list[int]) -> None:
    """Replay a built gadget's gates (in emission order, skipping WAITs)
    onto mapped qubits of a larger builder."""
    for step in g.circuit.steps:
        for op in step:
            if op.kind is Gate.WAIT:
                continue
            b.gate(op.kind, *(qubit_map[q] for q in op.qubits))


def build_exrec(kind: str, level: int = 1, toffoli_mode: str = "native") -> GadgetCircuit:
    """Extended rectangles: leading ECs, the gate, trailing ECs.

    CNOT: 4 EC + transversal CNOT.  bTOFF: 2 EC on the target block, 2x2 M
    gadgets on the repetition-coded control strings, and the bitwise
    TOFFOLI row circuit.  VN_row: EC_X on all three inputs, the two
    transversal vote CNOTs, discarded top lines with no appended EC.
    """
    if level != 1:
        return _exrec_schematic(kind, level, toffoli_mode)  # type: ignore[return-value]
    if kind == "CNOT":
        return _exrec_cnot(toffoli_mode)
    if kind == "bTOFF":
        return _exrec_btoff(toffoli_mode)
    if kind == "VN_row":
        return _exrec_vn(toffoli_mode)
    raise ValueError(f"unknown exRec kind {kind!r}")


def _exrec_cnot(mode: str) -> GadgetCircuit:
    ec = build_ec("full", 1, mode)
    n_anc = len(ec.ancilla_qubits)
    blk_a = list(range(9))
    blk_b = list(range(9, 18))
    base = 18
    b = CircuitBuilder(18 + 4 * n_anc)
    maps = []
    for blk in (blk_a, blk_b, blk_a, blk_b):
        maps.append(blk + list(range(base, base + n_anc)))
        base += n_anc
    _emit_offset(b, ec, maps[0])
    _emit_offset(b, ec, maps[1])
    b.barrier()
    for i in range(9):
        b.gate(Gate.CNOT, blk_a[i], blk_b[i])
    b.barrier()
    _emit_offset(b, ec, maps[2])
    _emit_offset(b, ec, maps[3])
    anc = tuple(range(18, 18 + 4 * n_anc))
    b.role("data", *range(18)).role("ancilla", *anc).discard(*anc)
    return GadgetCircuit(
        GadgetSpec("ExRecCNOT", 1, toffoli_mode=mode), b.build(),
        tuple(range(18)), anc,
        (JudgeBlock(tuple(blk_a), "BaconShor3x3", "XZ"),
         JudgeBlock(tuple(blk_b), "BaconShor3x3", "XZ")),
    )


def _exrec_btoff(mode: str) -> GadgetCircuit:
    """Bitwise TOFFOLI exRec: EC'd target block, M-protected control
    strings, three disjoint TOFFOLIs onto one target row."""
    ec = build_ec("full", 1, mode)
    m = build_m("X", 3, 1, mode)
    n_ec, n_m = len(ec.ancilla_qubits), len(m.ancilla_qubits)
    data = list(range(9))
    c1 = list(range(9, 12))
    c2 = list(range(12, 15))
    base = 15
    def fresh(k):
        nonlocal base
        out = list(range(base, base + k))
        base += k
        return out
    b = CircuitBuilder(15 + 2 * n_ec + 4 * n_m)
    _emit_offset(b, ec, data + fresh(n_ec))
    _emit_offset(b, m, c1 + fresh(n_m))
    _emit_offset(b, m, c2 + fresh(n_m))
    b.barrier()
    target_row = 0
    for k in range(3):
        _emit_toffoli(b, c1[k], c2[k], data[3 * target_row + k], mode,
                      drop_final=True)
    b.barrier()
    _emit_offset(b, ec, data + fresh(n_ec))
    _emit_offset(b, m, c1 + fresh(n_m))
    _emit_offset(b, m, c2 + fresh(n_m))
    anc = tuple(range(15, base))
    b.role("data", *data).role("ancilla", *(tuple(c1) + tuple(c2) + anc))
    b.discard(*anc)
    return GadgetCircuit(
        GadgetSpec("ExRecBTOFF", 1, toffoli_mode=mode), b.build(),
        tuple(data) + tuple(c1) + tuple(c2), anc,
        (JudgeBlock(tuple(data), "BaconShor3x3", "XZ"),
         JudgeBlock(tuple(c1), "Repetition3Z", "X"),
         JudgeBlock(tuple(c2), "Repetition3Z", "X")),
    )


def _exrec_vn(mode: str) -> GadgetCircuit:
    """Contracted VN row exRec: EC_X on the three input blocks, the two
    transversal vote CNOT layers, top lines discarded without output ECs.
    At level 1 N(0) = M(0) = Id and the waiting gate is omitted."""
    ecx = build_ec("X", 1, mode)
    n_anc = len(ecx.ancilla_qubits)
    blocks = [list(range(9 * i, 9 * i + 9)) for i in range(3)]
    base = 27
    b = CircuitBuilder(27 + 3 * n_anc)
    for blk in blocks:
        _emit_offset(b, ecx, blk + list(range(base, base + n_anc)))
        base += n_anc
    b.barrier()
    for i in range(9):
        b.gate(Gate.CNOT, blocks[1][i], blocks[2][i])
    for i in range(9):
        b.gate(Gate.CNOT, blocks[0][i], blocks[2][i])
    anc = tuple(range(27, 27 + 3 * n_anc))
    b.role("data", *range(27)).role("ancilla", *anc)
    b.discard(*(tuple(blocks[0]) + tuple(blocks[1]) + anc))
    return GadgetCircuit(
        GadgetSpec("ExRecVN", 1, toffoli_mode=mode), b.build(),
        tuple(range(27)), anc,
        (JudgeBlock(tuple(blocks[2]), "BaconShor3x3", "X"),),
    )


def _exrec_schematic(kind: str, level: int, mode: str) -> GadgetSchematic:
    k1 = level - 1
    if kind == "CNOT":
        ops = (SchematicOp(f"EC({level})", 4), SchematicOp(f"CNOT({k1})", 9))
    elif kind == "bTOFF":
        ops = (SchematicOp(f"EC({level})", 2), SchematicOp(f"M({level})", 4),
               SchematicOp(f"bTOFFOLI({k1})", 3))
    else:
        ops = (SchematicOp(f"EC_X({level})", 3), SchematicOp(f"CNOT({k1})", 18),
               SchematicOp(f"N({k1})", 1), SchematicOp(f"M({k1})", 1))
    return GadgetSchematic(GadgetSpec(f"ExRec{'BTOFF' if kind == 'bTOFF' else kind}"
                                      if kind != "VN_row" else "ExRecVN",
                                      level, toffoli_mode=mode), ops)


# ---------------------------------------------------------------------------
# Logical state preparation, encoder, cooling, Steane N
# ---------------------------------------------------------------------------

def logical_state_circuit(which: str) -> Circuit:
    """Nine-qubit circuit preparing a canonical gauge representative of a
    logical state: rows of X-basis GHZ for |0_L>/|1_L>, columns of Z-basis
    GHZ for |+_L>/|-L>."""
    b = CircuitBuilder(9)
    if which in ("0", "1"):
        groups = [[_rc(r, c) for c in range(3)] for r in range(3)]
    elif which in ("+", "-"):
        groups = [[_rc(r, c) for r in range(3)] for c in range(3)]
    else:
        raise ValueError("which must be one of 0 1 + -")
    for g in groups:
        b.gate(Gate.PREPPLUS, g[0])
        b.gate(Gate.CNOT, g[0], g[1])
        b.gate(Gate.CNOT, g[0], g[2])
        if which in ("0", "1"):
            for q in g:
                b.gate(Gate.H, q)
    if which == "1":
        for r in range(3):
            b.gate(Gate.X, _rc(r, 0))
    if which == "-":
        for c in range(3):
            b.gate(Gate.Z, _rc(0, c))
    return b.build()


def build_prep_logical(state: str = "0") -> GadgetCircuit:
    """|0_L>: 3x3 array of |0> with a Z-basis voter on every row.
    |+_L>: 3x3 array of |+> with an X-basis voter on every column."""
    data = list(range(9))
    b = CircuitBuilder(9 + 3 * 6)
    if state == "0":
        for q in data:
            b.gate(Gate.PREP0, q)
        groups = [[_rc(r, c) for c in range(3)] for r in range(3)]
        basis = "Z"
    elif state == "+":
        for q in data:
            b.gate(Gate.PREPPLUS, q)
        groups = [[_rc(r, c) for r in range(3)] for c in range(3)]
        basis = "X"
    else:
        raise ValueError("state must be '0' or '+'")
    base = 9
    for grp in groups:
        regs = [[base + i * 3 + k for k in range(3)] for i in range(2)]
        _emit_m(b, grp, regs, basis)
        base += 6
    anc = tuple(range(9, 27))
    b.role("data", *data).role("ancilla", *anc).discard(*anc)
    return GadgetCircuit(
        GadgetSpec("PrepZero_L" if state == "0" else "PrepPlus_L", 1),
        b.build(), tuple(data), anc,
        (JudgeBlock(tuple(data), "BaconShor3x3", "XZ"),),
    )


def build_encoder(level: int = 1) -> GadgetCircuit:
    """Encoder for an arbitrary level-0 state: CNOT fan-out of |phi> onto a
    3x3 array (8 CNOTs, 20 waiting gates, 8 |0> preparations) followed by a
    Z-basis voter in every row."""
    if level != 1:
        k1 = level - 1
        ops = (SchematicOp(f"PREP0({k1})", 8), SchematicOp(f"CNOT({k1})", 8),
               SchematicOp(f"WAIT({k1})", 20), SchematicOp(f"M_Z({level})", 3))
        return GadgetSchematic(GadgetSpec("Encoder", level), ops)  # type: ignore[return-value]
    data = list(range(9))  # qubit 0 holds |phi>
    # preparations pinned to step 0 so stage (i) carries exactly
    # 8 CNOTs, 20 waiting gates and 8 preparations
    b = CircuitBuilder(9 + 18, jit_preps=False)
    for q in data[1:]:
        b.gate(Gate.PREP0, q)
    # doubling schedule: 1+2+4+1 CNOTs over four steps -> exactly 20 waits
    fanout = [(0, 1), (0, 2), (1, 3), (0, 4), (1, 5), (2, 6), (3, 7), (0, 8)]
    for c, t in fanout:
        b.gate(Gate.CNOT, data[c], data[t])
    b.barrier()
    base = 9
    for r in range(3):
        grp = [_rc(r, c) for c in range(3)]
        regs = [[base + i * 3 + k for k in range(3)] for i in range(2)]
        _emit_m(b, grp, regs, "Z")
        base += 6
    anc = tuple(range(9, 27))
    b.role("data", *data).role("ancilla", *anc).discard(*anc)
    return GadgetCircuit(
        GadgetSpec("Encoder", 1), b.build(), tuple(data), anc,
        (JudgeBlock(tuple(data), "BaconShor3x3", "XZ"),),
        meta={"fanout_cnots": len(fanout)},
    )


def build_cooling_tree(rounds: int = 1) -> GadgetCircuit:
    """Algorithmic cooling: per triple (a, b, c) apply CNOT(a,b), CNOT(a,c),
    TOFFOLI((c,b),a); concatenated over `rounds` rounds on 3^rounds qubits.
    The surviving qubit of each triple is its first member."""
    if rounds < 1:
        raise ValueError("rounds >= 1")
    n = 3 ** rounds
    b = CircuitBuilder(n)

    def cool(qs: list[int]) -> int:
        if len(qs) == 1:
            return qs[0]
        third = len(qs) // 3
        a = cool(qs[:third])
        bq = cool(qs[third:2 * third])
        c = cool(qs[2 * third:])
        b.gate(Gate.CNOT, a, bq)
        b.gate(Gate.CNOT, a, c)
        b.gate(Gate.TOFFOLI, c, bq, a)
        return a

    root = cool(list(range(n)))
    b.role("data", *range(n)).discard(*(q for q in range(n) if q != root))
    return GadgetCircuit(
        GadgetSpec("CoolingTree", 1, rounds=rounds), b.build(), (root,),
        tuple(q for q in range(n) if q != root), (),
        meta={"root": root},
    )


def build_steane_n() -> GadgetCircuit:
    """N gate for the Steane code: for each of the seven weight-3 logical-X
    representatives, extract its parity into a fresh 3-qubit string's last
    qubit, then majority-vote the seven parity bits with M(7)."""
    from .codes import steane_logical_x_reps
    reps = steane_logical_x_reps()
    data = list(range(7))
    b_total = 7 + 7 * 3 + 6 * 7 + 4  # data + extraction strings + M(7) regs + work
    b = CircuitBuilder(b_total)
    parity_bits = []
    base = 7
    for rep in reps:
        anc = [base, base + 1, base + 2]
        base += 3
        for q in anc:
            b.gate(Gate.PREP0, q)
        sup = rep.support()
        for i, q in enumerate(sup):
            b.gate(Gate.CNOT, q, anc[i])
        b.gate(Gate.CNOT, anc[0], anc[2])
        b.gate(Gate.CNOT, anc[1], anc[2])
        parity_bits.append(anc[2])
    m_regs = [[base + i * 7 + k for k in range(7)] for i in range(6)]
    work = [base + 42 + i for i in range(4)]
    _emit_m(b, parity_bits, m_regs, "X", work=work)
    anc_all = tuple(q for q in range(7, b_total) if q not in parity_bits)
    b.role("data", *data).role("ancilla", *range(7, b_total))
    b.discard(*(set(range(7, b_total)) - set(parity_bits)))
    return GadgetCircuit(
        GadgetSpec("SteaneN", 1), b.build(), tuple(parity_bits), anc_all,
        (JudgeBlock(tuple(parity_bits), "Repetition7Z", "X"),),
        meta={"input_block": tuple(data)},
    )


def build(spec: GadgetSpec) -> GadgetCircuit | GadgetSchematic:
    """Dispatch a GadgetSpec to its constructor."""
    k = spec.kind
    if k in ("M_X", "M_Z"):
        return build_m(k[-1], 3, spec.level, spec.toffoli_mode)
    if k == "M_N":
        return build_m("X", spec.n, spec.level, spec.toffoli_mode)
    if k == "ParityVoter":
        return build_parity_voter(spec.n)
    if k == "CatVerify":
        return build_cat_verify(spec.n if spec.n != 3 else 4)
    if k in ("N_X", "N_Z"):
        return build_n(k[-1], spec.level)
    if k == "VN_row":
        return build_vn_row()
    if k in ("EC_X", "EC_Z", "EC_full"):
        return build_ec({"EC_X": "X", "EC_Z": "Z", "EC_full": "full"}[k],
                        spec.level, spec.toffoli_mode)
    if k == "ExRecCNOT":
        return build_exrec("CNOT", spec.level, spec.toffoli_mode)
    if k == "ExRecBTOFF":
        return build_exrec("bTOFF", spec.level, spec.toffoli_mode)
    if k == "ExRecVN":
        return build_exrec("VN_row", spec.level, spec.toffoli_mode)
    if k == "PrepZero_L":
        return build_prep_logical("0")
    if k == "PrepPlus_L":
        return build_prep_logical("+")
    if k == "Encoder":
        return build_encoder(spec.level)
    if k == "CoolingTree":
        return build_cooling_tree(spec.rounds)
    if k == "SteaneN":
        return build_steane_n()
    raise ValueError(f"unknown gadget kind {k!r}")
