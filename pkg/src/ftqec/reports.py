"""Report writers: JSON documents, CSV series, and matplotlib figures.

Reports are diff-able: keys are sorted, floats use repr, and nothing
time-dependent is embedded.  Figures are rendered to PNG next to the
delimited output.
"""

from __future__ import annotations

import csv
import json
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def write_json(payload: dict, path: str | None) -> str:
    text = json.dumps(payload, indent=2, sort_keys=True, default=float) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def write_csv(rows: list[dict], path: str, fieldnames: list[str] | None = None) -> None:
    if not rows:
        return
    fieldnames = fieldnames or list(rows[0].keys())
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def level_series_rows(p_seq: list[float]) -> list[dict]:
    return [{"level": k, "p": repr(p)} for k, p in enumerate(p_seq)]


def cooling_series_rows(eps_seq: list[float]) -> list[dict]:
    return [{"round": j, "eps": repr(e)} for j, e in enumerate(eps_seq)]


def figure_level_decay(p_seqs: dict[str, list[float]], path: str,
                       threshold: float | None = None) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for label, seq in sorted(p_seqs.items()):
        ax.semilogy(range(len(seq)), seq, marker="o", ms=3.5, label=label)
    if threshold:
        ax.axhline(threshold, color="gray", lw=0.8, ls="--",
                   label="threshold")
    ax.set_xlabel("concatenation level k")
    ax.set_ylabel(r"$p^{(k)}$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def figure_cooling(eps_seqs: dict[str, list[float]], path: str) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for label, seq in sorted(eps_seqs.items()):
        ax.semilogy(range(len(seq)), seq, marker="s", ms=3.5, label=label)
    ax.set_xlabel("cooling round j")
    ax.set_ylabel(r"$\epsilon^{(j)}$")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def figure_mc_scaling(points: list[tuple[float, float, float, float]],
                      bound_coeff: float, path: str) -> None:
    """points: (p, p_fail, wilson_low, wilson_high)."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ps = [p for p, *_ in points]
    fails = [f for _, f, *_ in points]
    lo = [f - l for _, f, l, _ in points]
    hi = [h - f for _, f, _, h in points]
    ax.errorbar(ps, fails, yerr=[lo, hi], fmt="o", ms=4, capsize=3,
                label="Monte Carlo")
    grid = [min(ps) * 0.7 * (max(ps) * 1.4 / (min(ps) * 0.7)) ** (i / 63)
            for i in range(64)]
    ax.plot(grid, [bound_coeff * p * p for p in grid], "--", lw=1,
            label=r"$A' p^2$ bound")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("physical fault rate p")
    ax.set_ylabel("exRec failure rate")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
