"""Monte-Carlo fault injection for exRec failure-rate estimates.

Each live location fails independently with probability p; a failing
location draws uniformly from its nontrivial Pauli alphabet.  Residuals
use the same clean-zero-control propagation and worst-case judging as the
adversarial counts, so the estimate validates those counts from below:
p_fail <= A' p^2 holds by construction of A'.

Per-trial randomness comes from a counter-based Philox stream keyed on
(seed, trial index), so results are bit-identical for a fixed seed no
matter how trials are batched or distributed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .counting import GadgetAnalysis
from .faults import fault_alphabet
from .gadgets import GadgetCircuit


@dataclass
class MCResult:
    gadget: str
    p: float
    trials: int
    seed: int
    failures: int
    p_fail: float
    wilson_low: float
    wilson_high: float
    notes: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    phat = k / n
    denom = 1 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


_BATCH = 16384  # fixed so a given (seed, trials) is bit-reproducible


def monte_carlo(gadget: GadgetCircuit, p: float, trials: int, seed: int = 0,
                analysis: GadgetAnalysis | None = None) -> MCResult:
    """Estimate the exRec failure probability under i.i.d. location
    faults of rate p."""
    if not (0 <= p < 0.1):
        raise ValueError("p must lie in [0, 0.1)")
    if trials < 10_000:
        raise ValueError("trials must be at least 1e4")
    if p == 0:
        return MCResult(gadget.spec.kind, p, trials, seed, 0, 0.0,
                        *wilson_interval(0, trials))
    an = analysis if analysis is not None else GadgetAnalysis(gadget)
    L = len(an.locations)
    alphabets = [fault_alphabet(loc) for loc in an.locations]
    sizes = [len(a) for a in alphabets]
    step_of = [loc.step_index for loc in an.locations]

    failures = 0
    done = 0
    while done < trials:
        n = min(_BATCH, trials - done)
        # fault mask from a block stream, assignments from per-trial
        # streams, both keyed on absolute trial indices
        block = np.random.Generator(np.random.Philox(key=seed, counter=done))
        mask = block.random(size=(n, L)) < p
        for i in np.nonzero(mask.any(axis=1))[0]:
            locs = np.nonzero(mask[i])[0]
            tr = np.random.Generator(np.random.Philox(key=seed + 1, counter=done + int(i)))
            picks = tr.random(size=len(locs))
            if len(locs) == 1:
                li = int(locs[0])
                sig = an.entry_sigs[li][int(picks[0] * sizes[li])]
                if an.bad_one(sig.px, sig.pz):
                    failures += 1
                continue
            faults = []
            for u, li in enumerate(locs):
                li = int(li)
                fx, fz = alphabets[li][int(picks[u] * sizes[li])]
                faults.append((step_of[li], fx, fz))
            x, z = an.walker.walk_joint_faults(faults)
            px, pz = an._pack(x, z)
            if an.bad_one(px, pz):
                failures += 1
        done += n
    p_fail = failures / trials
    lo, hi = wilson_interval(failures, trials)
    return MCResult(gadget.spec.kind, p, trials, seed, failures, p_fail, lo, hi)


def scaling_exponent(points: list[tuple[float, float]],
                     n_locations: int | None = None) -> float:
    """Log-log slope of p_fail against p over the sampled rates.

    With ``n_locations`` the fit divides out the trivial survival factor
    (1-p)^(L-2) -- the probability that no further location faults -- so
    the slope isolates the power of the malignant-set law itself.  For
    circuits with several hundred locations the survival factor alone
    bends the raw curve by ~0.2 at p = 1e-3.
    """
    xs, ys = [], []
    for p, f in points:
        if f <= 0:
            continue
        if n_locations:
            f = f / (1 - p) ** (n_locations - 2)
        xs.append(math.log(p))
        ys.append(math.log(f))
    if len(xs) < 2:
        raise ValueError("need at least two nonzero failure rates")
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx
