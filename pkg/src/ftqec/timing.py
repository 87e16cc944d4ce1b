"""Timing calculus for protected gates and error-correction gadgets.

Durations are integers in units of one level-0 gate slot; every physical
gate takes one slot.  The generating recurrences, with T(G(0)) = 1 and
T(N(0)) = T(N(-1)) = 0:

    T(EC(k))   = T(EC_X(k)) + 2 T(G(k-1))
    T(G(k))    = 2 T(EC_X(k)) + 5 T(G(k-1))
    T(N(k))    = 2 T(EC_X(k)) + 2 T(G(k-1)) + T(N(k-2))
    T(VN(k))   = 2 T(EC_X(k)) + 4 T(G(k-1)) + T(N(k-1))

T(EC_X(k)) and T(M(k)) are assigned from the constructed circuit depths of
the level-1 gadgets (EC_X is 11 steps deep, M is 6), and T(EC_X) > T(M)
is a checked invariant rather than an axiom.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

EC_X_DEPTH = 8   # steps in the constructed level-1 EC_X gadget
M_DEPTH = 6      # steps in the constructed level-1 majority voter


@dataclass(frozen=True)
class TimingModel:
    ec_x_depth: int = EC_X_DEPTH
    m_depth: int = M_DEPTH

    @lru_cache(maxsize=None)
    def gate(self, k: int) -> int:
        """T(G(k)): a fully protected single-step gate at level k."""
        if k <= 0:
            return 1
        return 2 * self.ec_x(k) + 5 * self.gate(k - 1)

    def ec_x(self, k: int) -> int:
        if k <= 0:
            return 0
        return self.ec_x_depth * self.gate(k - 1)

    def ec(self, k: int) -> int:
        if k <= 0:
            return 0
        return self.ec_x(k) + 2 * self.gate(k - 1)

    def m(self, k: int) -> int:
        if k <= 0:
            return 0
        return self.m_depth * self.gate(k - 1)

    @lru_cache(maxsize=None)
    def n(self, k: int) -> int:
        """T(N(k)): the coherent BS -> QR decoder at level k."""
        if k <= 0:
            return 0
        return 2 * self.ec_x(k) + 2 * self.gate(k - 1) + self.n(k - 2)

    def vn(self, k: int) -> int:
        """T(VN(k)): the contracted syndrome-processing subroutine."""
        if k <= 0:
            return 0
        return 2 * self.ec_x(k) + 4 * self.gate(k - 1) + self.n(k - 1)


def timing(model: TimingModel, what: str, k: int) -> int:
    """Duration of a gadget kind at level k, in level-0 gate slots."""
    if k < 0:
        raise ValueError("level must be >= 0")
    table = {
        "G": model.gate, "GATE": model.gate,
        "EC": model.ec, "EC_full": model.ec,
        "EC_X": model.ec_x, "EC_Z": model.ec_x,
        "M": model.m, "M_X": model.m, "M_Z": model.m,
        "N": model.n, "N_X": model.n, "N_Z": model.n,
        "VN": model.vn, "VN_row": model.vn,
    }
    if what not in table:
        raise ValueError(f"unknown gadget kind {what!r}")
    return table[what](k)
