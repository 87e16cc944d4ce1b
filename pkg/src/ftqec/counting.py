"""Exhaustive malignant-fault counting for level-1 gadgets.

Fault locations are the gadget's live (step, gate) slots: a qubit is live
from its preparation (or from step 0 for input qubits) through its last
non-wait gate if discarded, through the end otherwise.  Dead padding waits
on discarded ancillas are not physical locations.

A fault set is malignant when the exact joint residual on some output
block fails one round of ideal decoding.  Propagation uses the
clean-zero-control semantics (see faults.py), under which a correction
gate fires exactly when the fault frame covers both of its controls.
That rule is nonlinear, so the pair enumeration splits into

* a vectorized linear pass over deduplicated per-location fault
  signatures whose frames touch no common three-qubit gate (their joint
  residual is the XOR of the single residuals), and
* exact joint walks for the interacting minority, identified from
  recorded control taps.

Single-failure parameters follow the worst-case-over-assignments
convention:

* u / m: locations whose worst single failure leaves exactly one
  (gauge-reduced) error on the data;
* u_bar / m_bar: the same, restricted to errors that avoid the block's
  last data qubit;
* alpha / beta: locations where a single failure plus one incoming
  single-qubit data error (worst position and Pauli) defeats the decoder.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .circuit import Gate, Location, PREP_GATES
from .codes import CodeDef, bacon_shor_3x3, repetition, steane
from .faults import FrameWalker, fault_alphabet, restrict
from .gadgets import GadgetCircuit, JudgeBlock

REPORT_PROGRESS_EVERY = 2_000_000


@dataclass
class CountReport:
    """Malignant-parameter bundle for one gadget or exRec."""

    gadget: str
    level_tag: str = "k=1"
    A: int = 0
    u: int | None = None
    u_bar: int | None = None
    alpha: int | None = None
    m: int | None = None
    m_bar: int | None = None
    beta: int | None = None
    B: float | None = None
    B_mode: str = "none"
    n_locations: int = 0
    n_gate_locations: int = 0
    malignant_singles: int = 0
    notes: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _code_for(name: str) -> CodeDef:
    if name == "BaconShor3x3":
        return bacon_shor_3x3()
    if name == "Steane":
        return steane()
    if name.startswith("Repetition"):
        return repetition(int(name[len("Repetition"):-1]), name[-1])
    raise ValueError(name)


def _bs_row_class_table() -> np.ndarray:
    """x-verdict bit for the Bacon-Shor code: majority of the three row
    parities survives ideal decoding as a logical X."""
    tab = np.zeros(512, dtype=bool)
    for m in range(512):
        pars = [bin(m >> 3 * r & 0b111).count("1") % 2 for r in range(3)]
        tab[m] = sum(pars) >= 2
    return tab


def _bs_col_class_table() -> np.ndarray:
    tab = np.zeros(512, dtype=bool)
    for m in range(512):
        pars = [bin(m & (0b001001001 << c)).count("1") % 2 for c in range(3)]
        tab[m] = sum(pars) >= 2
    return tab


def _rep_class_table(n: int) -> np.ndarray:
    tab = np.zeros(1 << n, dtype=bool)
    for m in range(1 << n):
        tab[m] = bin(m).count("1") > n / 2
    return tab


class BlockJudge:
    """Verdict and weight-class machinery for one judged output block."""

    def __init__(self, block: JudgeBlock, offset: int):
        self.block = block
        self.offset = offset
        self.size = len(block.qubits)
        self.mask = (1 << self.size) - 1
        self.code = _code_for(block.code_name)
        if block.code_name == "BaconShor3x3":
            self.tab_x = _bs_row_class_table()
            self.tab_z = _bs_col_class_table()
        else:
            self.tab_x = _rep_class_table(self.size)
            self.tab_z = _rep_class_table(self.size)
        if "X" not in block.sector:
            self.tab_x = np.zeros_like(self.tab_x)
        if "Z" not in block.sector:
            self.tab_z = np.zeros_like(self.tab_z)
        self._xspan = self.code._x_span
        self._zspan = self.code._z_span

    def verdict_bad(self, px, pz):
        bx = (px >> self.offset) & self.mask
        bz = (pz >> self.offset) & self.mask
        return self.tab_x[bx] | self.tab_z[bz]

    def weight_class(self, px: int, pz: int) -> tuple[int, set[int]]:
        """(0 | 1 | 2, achieving qubits for class 1) under the judged
        sector, gauge equivalence included."""
        x = (px >> self.offset) & self.mask if "X" in self.block.sector else 0
        z = (pz >> self.offset) & self.mask if "Z" in self.block.sector else 0
        if x in self._xspan and z in self._zspan:
            return 0, set()
        hits = set()
        for q in range(self.size):
            for dx, dz in ((1, 0), (0, 1), (1, 1)):
                if (x ^ (dx << q)) in self._xspan and (z ^ (dz << q)) in self._zspan:
                    hits.add(q)
        return (1, hits) if hits else (2, set())


@dataclass(frozen=True)
class Signature:
    """Deduplicated behaviour of a fault at a location: packed residual
    plus control-tap masks.  Faults sharing a signature interact
    identically with any partner."""

    px: int
    pz: int
    amask: int
    bmask: int


class GadgetAnalysis:
    """Transfer precomputation and judging for one level-1 gadget."""

    def __init__(self, gadget: GadgetCircuit, omit_preps: bool = False):
        self.gadget = gadget
        self.circuit = gadget.circuit
        self.omit_preps = omit_preps
        offset = 0
        self.judges: list[BlockJudge] = []
        for blk in gadget.judge_blocks:
            self.judges.append(BlockJudge(blk, offset))
            offset += len(blk.qubits)
        self._pack_qubits = tuple(q for blk in gadget.judge_blocks for q in blk.qubits)
        self.walker = FrameWalker(self.circuit)
        self.locations = self._live_locations()
        self._transfer_all()

    # -- locations ---------------------------------------------------------

    def _live_windows(self) -> dict[int, tuple[int, int]]:
        c = self.circuit
        first: dict[int, int] = {}
        last: dict[int, int] = {}
        prep_step: dict[int, int] = {}
        for t, step in enumerate(c.steps):
            for g in step:
                if g.kind is Gate.WAIT:
                    continue
                for q in g.qubits:
                    first.setdefault(q, t)
                    last[q] = t
                if g.kind in PREP_GATES:
                    prep_step[g.qubits[0]] = t
        windows = {}
        for q in range(c.n_qubits):
            start = prep_step.get(q, 0 if q in first else 0)
            if q not in prep_step:
                start = 0  # input qubits carry state from the beginning
            end = last.get(q, -1) if q in c.discard_set else c.n_steps - 1
            windows[q] = (start, end)
        return windows

    def _live_locations(self) -> list[Location]:
        windows = self._live_windows()
        out = []
        for loc in self.circuit.locations():
            if loc.gate.kind in PREP_GATES and self.omit_preps:
                continue
            t = loc.step_index
            if all(windows[q][0] <= t <= windows[q][1] for q in loc.support):
                out.append(loc)
        return out

    # -- transfer ----------------------------------------------------------

    def _pack(self, x: int, z: int) -> tuple[int, int]:
        return restrict((x, z), self._pack_qubits)

    def _transfer_all(self) -> None:
        """Per location: the signature of every fault in its alphabet and
        the deduplicated signature set used for pair enumeration."""
        self.entry_sigs: list[list[Signature]] = []
        self.loc_sigs: list[list[Signature]] = []
        for loc in self.locations:
            per_fault = []
            merged: dict[Signature, None] = {}
            for fx, fz in fault_alphabet(loc):
                x, z, am, bm = self.walker.walk(loc.step_index + 1, fx, fz,
                                                record_taps=True)
                px, pz = self._pack(x, z)
                sig = Signature(px, pz, am, bm)
                per_fault.append(sig)
                merged[sig] = None
            self.entry_sigs.append(per_fault)
            self.loc_sigs.append(list(merged))
        # representative raw fault per (location, signature) for joint walks
        self.sig_fault: dict[tuple[int, Signature], tuple[int, int]] = {}
        for li, loc in enumerate(self.locations):
            for (fx, fz), sig in zip(fault_alphabet(loc), self.entry_sigs[li]):
                self.sig_fault.setdefault((li, sig), (fx, fz))

    def incoming_signatures(self) -> list[tuple[tuple[int, int], Signature]]:
        """Signatures of one single-qubit Pauli on any input data qubit,
        walked from the start of the gadget."""
        out = []
        for blk in self.gadget.input_blocks or ():
            for q in blk.qubits:
                for dx, dz in ((1, 0), (0, 1), (1, 1)):
                    fx, fz = dx << q, dz << q
                    x, z, am, bm = self.walker.walk(0, fx, fz, record_taps=True)
                    px, pz = self._pack(x, z)
                    out.append(((fx, fz), Signature(px, pz, am, bm)))
        return out

    # -- judging -----------------------------------------------------------

    def bad(self, px, pz):
        px = np.asarray(px, dtype=np.int64)
        pz = np.asarray(pz, dtype=np.int64)
        out = np.zeros(px.shape, dtype=bool)
        for j in self.judges:
            out |= j.verdict_bad(px, pz)
        return out

    def bad_one(self, px: int, pz: int) -> bool:
        for j in self.judges:
            bx = (px >> j.offset) & j.mask
            bz = (pz >> j.offset) & j.mask
            if j.tab_x[bx] or j.tab_z[bz]:
                return True
        return False

    def weight_class(self, px: int, pz: int) -> tuple[int, bool]:
        """Total weight class over blocks (capped at 2) and whether a
        class-1 residual can avoid each block's last data qubit."""
        total = 0
        avoids_last = False
        for j in self.judges:
            cls, hits = j.weight_class(px, pz)
            total += cls
            if cls == 1 and any(q != j.size - 1 for q in hits):
                avoids_last = True
        return min(total, 2), avoids_last

    def joint_residual(self, items: list[tuple[int, tuple[int, int]]]) -> tuple[int, int]:
        """Exact packed residual of several (location_index, fault) pairs."""
        faults = [(self.locations[li].step_index, fx, fz) for li, (fx, fz) in items]
        x, z = self.walker.walk_joint_faults(faults)
        return self._pack(x, z)


def judge_exrec(gadget: GadgetCircuit | GadgetAnalysis,
                residuals: set[tuple[int, int]] | tuple[int, int]) -> bool:
    """Malignancy of a propagated residual: true iff, for some branch,
    ideal decoding of some output block differs from the identity class.

    ``residuals`` are global (x, z) frames from propagate(); a single
    frame may be passed directly.
    """
    an = gadget if isinstance(gadget, GadgetAnalysis) else GadgetAnalysis(gadget)
    frames = {residuals} if isinstance(residuals, tuple) else residuals
    for x, z in frames:
        px, pz = an._pack(x, z)
        if an.bad_one(px, pz):
            return True
    return False


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def singles_sweep(an: GadgetAnalysis) -> dict:
    """Exhaustive single-fault sweep: malignant singles (zero for a
    fault-tolerant gadget) plus the single-error parameters."""
    malignant = 0
    u = u_bar = 0
    for li, per_fault in enumerate(an.entry_sigs):
        worst = 0
        avoids = False
        is_malignant = False
        for sig in per_fault:
            if an.bad_one(sig.px, sig.pz):
                is_malignant = True
                break
            cls, av = an.weight_class(sig.px, sig.pz)
            worst = max(worst, cls)
            avoids = avoids or (cls == 1 and av)
        if is_malignant:
            malignant += 1
        elif worst == 1:
            u += 1
            if avoids:
                u_bar += 1
    return {"malignant_singles": malignant, "u": u, "u_bar": u_bar}


def count_alpha(an: GadgetAnalysis) -> int:
    """Locations whose single failure plus one incoming data error (worst
    position and Pauli) defeats the decoder.  Interaction with the
    incoming error's frame is resolved by exact joint walks."""
    incoming = an.incoming_signatures()
    if not incoming:
        return 0
    alpha = 0
    for li, sigs in enumerate(an.loc_sigs):
        hit = False
        for sig in sigs:
            for ifault, isig in incoming:
                if (sig.amask & isig.bmask) or (sig.bmask & isig.amask):
                    px, pz = _joint_with_incoming(an, li, sig, ifault)
                else:
                    px, pz = sig.px ^ isig.px, sig.pz ^ isig.pz
                if an.bad_one(px, pz):
                    hit = True
                    break
            if hit:
                break
        alpha += hit
    return alpha


def _joint_with_incoming(an: GadgetAnalysis, li: int, sig: Signature,
                         inc: tuple[int, int]) -> tuple[int, int]:
    """Exact residual of an internal fault plus an incoming data error."""
    fx, fz = an.sig_fault[(li, sig)]
    t_loc = an.locations[li].step_index
    ifx, ifz = inc
    # the incoming error is present from the very beginning: walk it as a
    # fault "after step -1", i.e. through every step including step 0
    w = an.walker
    x, z = ifx, ifz
    for s in range(0, t_loc + 1):
        x, z = w._one_step(s, x, z)
    x ^= fx
    z ^= fz
    for s in range(t_loc + 1, len(w.steps)):
        x, z = w._one_step(s, x, z)
    return an._pack(x, z)


def count_pairs(an: GadgetAnalysis, progress: callable | None = None) -> int:
    """Number of malignant location pairs, worst case over assignments.

    Signature pairs that touch no common three-qubit gate combine
    linearly; interacting pairs are resolved with exact joint walks.
    Zero-residual non-interacting signatures cannot contribute (the
    partner alone would be a malignant single, and there are none).
    """
    L = len(an.locations)
    sig_loc: list[int] = []
    sigs: list[Signature] = []
    for li, merged in enumerate(an.loc_sigs):
        for sig in merged:
            if sig.px or sig.pz or sig.amask or sig.bmask:
                sig_loc.append(li)
                sigs.append(sig)
    V = len(sigs)
    vloc = np.array(sig_loc, dtype=np.int64)
    vx = np.array([s.px for s in sigs], dtype=np.int64)
    vz = np.array([s.pz for s in sigs], dtype=np.int64)
    tap_dtype = object if an.walker.n_taps > 60 else np.int64
    vam = np.array([s.amask for s in sigs], dtype=tap_dtype)
    vbm = np.array([s.bmask for s in sigs], dtype=tap_dtype)
    starts = np.searchsorted(vloc, np.arange(L + 1))
    pair_bad = np.zeros(L * L, dtype=bool)
    joint_jobs: list[tuple[int, int]] = []
    done = 0
    for a in range(V):
        b0 = starts[vloc[a] + 1]
        if b0 >= V:
            continue
        cx = vx[a] ^ vx[b0:]
        cz = vz[a] ^ vz[b0:]
        interacting = ((vam[b0:] & sigs[a].bmask) != 0) | ((vbm[b0:] & sigs[a].amask) != 0)
        interacting = interacting.astype(bool)
        bad = an.bad(cx, cz) & ~interacting
        if bad.any():
            ids = vloc[a] * L + vloc[b0:][bad]
            pair_bad[ids] = True
        for off in np.nonzero(interacting)[0]:
            joint_jobs.append((a, b0 + off))
        done += V - b0
        if progress and done % REPORT_PROGRESS_EVERY < (V - b0):
            progress(done, joint=len(joint_jobs))
    # exact joint walks for interacting signature pairs
    for a, b in joint_jobs:
        la, lb = int(vloc[a]), int(vloc[b])
        if pair_bad[la * L + lb]:
            continue
        fa = an.sig_fault[(la, sigs[a])]
        fb = an.sig_fault[(lb, sigs[b])]
        px, pz = an.joint_residual([(la, fa), (lb, fb)])
        if an.bad_one(px, pz):
            pair_bad[la * L + lb] = True
    return int(pair_bad.sum())


def sample_triples(an: GadgetAnalysis, n_samples: int, seed: int = 0,
                   progress: callable | None = None) -> float:
    """Estimate the number of malignant location triples by uniform
    sampling (existence over assignments, early exit per triple)."""
    L = len(an.locations)
    if L < 3:
        return 0.0
    rng = np.random.default_rng(seed)
    hits = 0
    total = L * (L - 1) * (L - 2) // 6
    for s in range(n_samples):
        i, j, k = map(int, sorted(rng.choice(L, size=3, replace=False)))
        found = False
        for sa in an.loc_sigs[i]:
            for sb in an.loc_sigs[j]:
                inter_ab = (sa.amask & sb.bmask) | (sa.bmask & sb.amask)
                for sc in an.loc_sigs[k]:
                    inter = (inter_ab or (sa.amask & sc.bmask) or (sa.bmask & sc.amask)
                             or (sb.amask & sc.bmask) or (sb.bmask & sc.amask))
                    if inter:
                        px, pz = an.joint_residual([
                            (i, an.sig_fault[(i, sa)]),
                            (j, an.sig_fault[(j, sb)]),
                            (k, an.sig_fault[(k, sc)]),
                        ])
                    else:
                        px = sa.px ^ sb.px ^ sc.px
                        pz = sa.pz ^ sb.pz ^ sc.pz
                    if an.bad_one(px, pz):
                        found = True
                        break
                if found:
                    break
            if found:
                break
        hits += found
        if progress and (s + 1) % 5000 == 0:
            progress(s + 1, hits=hits)
    return hits / n_samples * total


def count_parameters(gadget: GadgetCircuit, omit_preps: bool = False,
                     triples: str = "none", seed: int = 0,
                     progress: callable | None = None) -> CountReport:
    """Full malignant-parameter bundle for a level-1 gadget.

    ``triples`` is "none", "exhaustive" (small gadgets only), or
    "sample:N".
    """
    an = GadgetAnalysis(gadget, omit_preps=omit_preps)
    rep_like = all(j.block.code_name.startswith("Repetition") for j in an.judges)
    sweep = singles_sweep(an)
    alpha = count_alpha(an)
    A = count_pairs(an, progress=progress)
    report = CountReport(
        gadget=gadget.spec.kind,
        level_tag="k>1" if omit_preps else "k=1",
        A=A,
        n_locations=len(an.locations),
        n_gate_locations=sum(1 for loc in an.locations
                             if loc.gate.kind is not Gate.WAIT),
        malignant_singles=sweep["malignant_singles"],
    )
    if rep_like:
        report.m, report.m_bar, report.beta = sweep["u"], sweep["u_bar"], alpha
    else:
        report.u, report.u_bar, report.alpha = sweep["u"], sweep["u_bar"], alpha
    if triples == "exhaustive":
        report.B = float(_exhaustive_triples(an))
        report.B_mode = "exhaustive"
    elif triples.startswith("sample:"):
        n = int(triples.split(":", 1)[1])
        report.B = sample_triples(an, n, seed, progress=progress)
        report.B_mode = triples
    return report


def _exhaustive_triples(an: GadgetAnalysis) -> int:
    L = len(an.locations)
    hits = 0
    for i, j, k in itertools.combinations(range(L), 3):
        found = False
        for sa in an.loc_sigs[i]:
            for sb in an.loc_sigs[j]:
                for sc in an.loc_sigs[k]:
                    px, pz = an.joint_residual([
                        (i, an.sig_fault[(i, sa)]),
                        (j, an.sig_fault[(j, sb)]),
                        (k, an.sig_fault[(k, sc)]),
                    ])
                    if an.bad_one(px, pz):
                        found = True
                        break
                if found:
                    break
            if found:
                break
        hits += found
    return hits
