"""Command-line entry point.

Subcommands: build, count, threshold, budget, cooling, mc, verify,
reproduce.  Reports are JSON (plus CSV series and PNG figures for the
plotting-friendly commands); circuits use the text interchange format.
Exit codes: 0 success, 1 acceptance/tolerance failure (with a
machine-readable failure list on stdout), 2 usage errors.

FTQEC_THREADS caps worker parallelism; every code path here is
deterministic for a fixed seed regardless of that setting.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analytics
from .analytics import (PAPER_K1, PAPER_KG1, ParamTable, a_prime,
                        derived_threshold_pipeline, encoder_budget,
                        eval_exrec_formulas, iterate_levels, msd_feasible,
                        paper_threshold_pipeline, required_gate_rate,
                        cooling_sequence, cooling_total_prep_error)
from .circuit import serialize, validate
from .counting import GadgetAnalysis, count_parameters
from .gadgets import GadgetSchematic, GadgetSpec, build
from .montecarlo import monte_carlo, scaling_exponent
from .reports import (cooling_series_rows, ensure_dir, figure_cooling,
                      figure_level_decay, figure_mc_scaling, level_series_rows,
                      write_csv, write_json)
from .verify import run_suite


def _max_workers() -> int:
    cap = os.environ.get("FTQEC_THREADS")
    try:
        return max(1, int(cap)) if cap else 1
    except ValueError:
        return 1


def _gadget_spec(args) -> GadgetSpec:
    return GadgetSpec(args.gadget, level=args.level, n=args.n,
                      rounds=args.rounds,
                      toffoli_mode="two_qubit_decomposed" if args.two_qubit
                      else "native")


def _progress(label: str):
    def cb(done, **kw):
        print(f"  .. {label}: {done} combinations "
              + " ".join(f"{k}={v}" for k, v in kw.items()), file=sys.stderr)
    return cb


def cmd_build(args) -> int:
    g = build(_gadget_spec(args))
    if isinstance(g, GadgetSchematic):
        lines = [f"# schematic: {g.spec.kind} level {g.spec.level}"]
        lines += [f"{op.name} x{op.count}" for op in g.ops]
        text = "\n".join(lines) + ("\n# " + g.note + "\n" if g.note else "\n")
    else:
        bad = validate(g.circuit)
        if bad:
            print("\n".join(str(v) for v in bad), file=sys.stderr)
            return 1
        text = serialize(g.circuit)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_count(args) -> int:
    g = build(_gadget_spec(args))
    if isinstance(g, GadgetSchematic):
        print("counting requires a level-1 gadget (flattened physical circuit)",
              file=sys.stderr)
        return 2
    progress = None if args.json else _progress(args.gadget)
    report = count_parameters(g, omit_preps=args.omit_preps,
                              triples=args.triples, seed=args.seed,
                              progress=progress)
    text = report.to_json() + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json or not args.output:
        sys.stdout.write(text)
    return 0


def _derived_tables(triples: str, seed: int, progress=None,
                    toffoli_mode: str = "native"):
    ec = build(GadgetSpec("EC_full", toffoli_mode=toffoli_mode))
    ecx = build(GadgetSpec("EC_X", toffoli_mode=toffoli_mode))
    m = build(GadgetSpec("M_X", toffoli_mode=toffoli_mode))
    rows = {}
    for tag, omit in (("k=1", False), ("k>1", True)):
        r_ec = count_parameters(ec, omit_preps=omit, progress=progress)
        r_ecx = count_parameters(ecx, omit_preps=omit, progress=progress)
        r_m = count_parameters(m, omit_preps=omit, progress=progress)
        rows[tag] = ParamTable(
            tag, A_EC=r_ec.A, u=r_ec.u, u_bar=r_ec.u_bar, alpha=r_ec.alpha,
            A_ECX=r_ecx.A, u_X=r_ecx.u, u_bar_X=r_ecx.u_bar, alpha_X=r_ecx.alpha,
            A_M=r_m.A, m=r_m.m, m_bar=r_m.m_bar, beta=r_m.beta, source="derived")
    return rows["k=1"], rows["k>1"]


def cmd_threshold(args) -> int:
    payload: dict = {"params": args.params,
                     "toffoli_mode": "two_qubit_decomposed" if args.two_qubit
                     else "native"}
    if args.params == "paper":
        res = paper_threshold_pipeline(two_qubit=args.two_qubit)
        payload["formula_evaluated"] = {
            "k=1": eval_exrec_formulas(PAPER_K1),
            "k>1": eval_exrec_formulas(PAPER_KG1),
        }
        payload["printed_level1_coefficients"] = {
            "VN": analytics.PAPER_COEFF_VN1,
            "CNOT": analytics.PAPER_COEFF_CNOT1,
            "bTOFF": analytics.PAPER_COEFF_BTOFF1,
        }
    else:
        mode = "two_qubit_decomposed" if args.two_qubit else "native"
        t1, tg = _derived_tables(args.triples, args.seed,
                                 None if args.json else _progress("derived counts"),
                                 toffoli_mode=mode)
        if args.two_qubit:
            # the decomposition only affects level 1
            _, tg = _derived_tables(args.triples, args.seed, None)
            tg = ParamTable("k>1", tg.A_EC, tg.u, tg.u_bar, tg.alpha, tg.A_ECX,
                            tg.u_X, tg.u_bar_X, tg.alpha_X, tg.A_M, tg.m,
                            tg.m_bar, tg.beta, source="derived")
        res = derived_threshold_pipeline(t1, tg)
        payload["derived_tables"] = {"k=1": t1.__dict__, "k>1": tg.__dict__}
        payload["formula_evaluated"] = {
            "k=1": eval_exrec_formulas(t1), "k>1": eval_exrec_formulas(tg)}
    payload["threshold"] = res.as_dict()
    if args.output_dir:
        ensure_dir(args.output_dir)
        seq = iterate_levels(0.75 * res.p_thresh, res.A1_prime, res.A_kg1_prime, 6)
        write_csv(level_series_rows(seq), os.path.join(args.output_dir, "levels.csv"))
        figure_level_decay({"p0 = 0.75 p_thresh": seq},
                           os.path.join(args.output_dir, "levels.png"),
                           threshold=res.p_thresh)
        write_json(payload, os.path.join(args.output_dir, "threshold.json"))
    sys.stdout.write(write_json(payload, None))
    return 0


def cmd_budget(args) -> int:
    res = paper_threshold_pipeline()
    seq = iterate_levels(args.p0, res.A1_prime, res.A_kg1_prime, args.levels)
    payload = {
        "p0": args.p0,
        "levels": args.levels,
        "p_sequence": seq,
        "p_anc": encoder_budget(seq, args.levels),
        "msd": msd_feasible(encoder_budget(seq, args.levels)),
    }
    if args.output_dir:
        ensure_dir(args.output_dir)
        write_csv(level_series_rows(seq), os.path.join(args.output_dir, "budget_levels.csv"))
        figure_level_decay({f"p0={args.p0:g}": seq},
                           os.path.join(args.output_dir, "budget_levels.png"),
                           threshold=res.p_thresh)
        write_json(payload, os.path.join(args.output_dir, "budget.json"))
    sys.stdout.write(write_json(payload, None))
    return 0


def cmd_cooling(args) -> int:
    seq = cooling_sequence(args.eps0, args.rounds)
    payload = {
        "eps0": args.eps0,
        "rounds": args.rounds,
        "eps_sequence": seq,
        "total_prep_error": cooling_total_prep_error(args.eps0, args.rounds, args.pg),
        "pg": args.pg,
    }
    if args.target is not None:
        payload["required_pg_for_target"] = required_gate_rate(
            args.eps0, args.rounds, args.target)
    if args.output_dir:
        ensure_dir(args.output_dir)
        write_csv(cooling_series_rows(seq), os.path.join(args.output_dir, "cooling.csv"))
        figure_cooling({f"eps0={args.eps0:g}": seq},
                       os.path.join(args.output_dir, "cooling.png"))
        write_json(payload, os.path.join(args.output_dir, "cooling.json"))
    sys.stdout.write(write_json(payload, None))
    return 0


def cmd_mc(args) -> int:
    g = build(_gadget_spec(args))
    if isinstance(g, GadgetSchematic):
        print("Monte Carlo requires a level-1 gadget", file=sys.stderr)
        return 2
    res = monte_carlo(g, args.p, args.trials, args.seed)
    sys.stdout.write(write_json(res.as_dict(), args.output))
    return 0


def cmd_verify(args) -> int:
    cases = run_suite(args.suite)
    failed = [name for name, ok in cases if not ok]
    for name, ok in cases:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    if failed:
        print(f"{len(failed)} of {len(cases)} cases failed", file=sys.stderr)
        return 1
    print(f"all {len(cases)} cases passed")
    return 0


def cmd_reproduce(args) -> int:
    out = ensure_dir(args.output_dir)
    checks: list[dict] = []

    def check(name, value, ok, want=None):
        checks.append({"name": name, "value": value, "want": want, "ok": bool(ok)})
        if not args.json:
            print(f"[{'ok' if ok else 'FAIL'}] {name}: {value}"
                  + (f" (want {want})" if want is not None else ""))

    # 1. formula reproduction on the printed tables
    f1 = eval_exrec_formulas(PAPER_K1)
    fg = eval_exrec_formulas(PAPER_KG1)
    check("A_CNOT(1)", f1["A_CNOT"], f1["A_CNOT"] == 32640, 32640)
    check("A_bTOFF(1)", f1["A_bTOFF"], f1["A_bTOFF"] == 14586, 14586)
    check("A_VN(1)", f1["A_VN"], f1["A_VN"] == 14493, 14493)
    check("A_CNOT(k>1)", fg["A_CNOT"], fg["A_CNOT"] == 21294, 21294)

    # 2. thresholds from the paper-anchored pipeline
    res = paper_threshold_pipeline()
    check("p_thresh", res.p_thresh, abs(res.p_thresh / 3.76e-5 - 1) < 0.01, "3.76e-5 (1%)")
    res2q = paper_threshold_pipeline(two_qubit=True)
    check("p_thresh (two-qubit)", res2q.p_thresh,
          abs(res2q.p_thresh / 2.68e-5 - 1) < 0.05, "2.68e-5 (5%)")

    # 3. worked scenario: budget and cooling
    p0 = 0.75 * res.p_thresh
    seq = iterate_levels(p0, res.A1_prime, res.A_kg1_prime, 6)
    check("p(6)", seq[6], 1e-14 < seq[6] < 1e-12, "~1e-13")
    p_anc = encoder_budget(seq, 6)
    check("p_anc(6)", p_anc, abs(p_anc / 8.32e-3 - 1) < 0.05, "8.32e-3 (5%)")
    pg = required_gate_rate(0.01, 2, p0)
    check("required p_g (1% prep, 2 rounds)", pg, abs(pg / 2.32e-6 - 1) < 0.05,
          "2.32e-6 (5%)")
    check("measurement fixed point", 3 * (1 / 3) ** 2, 3 * (1 / 3) ** 2 == 1 / 3, "1/3")
    feas = msd_feasible(p_anc)
    check("MSD feasibility", feas, feas["H_distillable"] and feas["i_distillable"])

    # 4. derived counts and the derived threshold
    progress = None if args.json else _progress("enumeration")
    t1, tg = _derived_tables("none", args.seed, progress)
    d1 = eval_exrec_formulas(t1)
    dg = eval_exrec_formulas(tg)
    dres = derived_threshold_pipeline(t1, tg)
    check("derived threshold", dres.p_thresh, 1.5e-5 <= dres.p_thresh <= 8e-5,
          "[1.5e-5, 8e-5]")
    check("hierarchy A_VN <= A_CNOT (derived)", (d1["A_VN"], d1["A_CNOT"]),
          d1["A_VN"] <= d1["A_CNOT"])
    check("hierarchy A_bTOFF <= A_CNOT (derived)", (d1["A_bTOFF"], d1["A_CNOT"]),
          d1["A_bTOFF"] <= d1["A_CNOT"])

    # direct exRec enumeration alongside the formula composition
    exrec = build(GadgetSpec("ExRecCNOT"))
    an = GadgetAnalysis(exrec)
    from .counting import count_pairs, sample_triples, singles_sweep
    sweep = singles_sweep(an)
    check("malignant singles in the CNOT exRec", sweep["malignant_singles"],
          sweep["malignant_singles"] == 0, 0)
    A_direct = count_pairs(an)
    B_direct = sample_triples(an, args.triple_samples, seed=args.seed)
    check("direct A_CNOT(1) enumeration", A_direct, A_direct > 0)

    # 5. Monte Carlo consistency
    Ap = a_prime(A_direct, B_direct)
    mc_points = []
    for p in (1e-4, 3e-4, 1e-3):
        r = monte_carlo(exrec, p, args.trials, args.seed, analysis=an)
        mc_points.append((p, r.p_fail, r.wilson_low, r.wilson_high))
        check(f"MC p={p:g} below A'p^2", (r.wilson_high, Ap * p * p),
              r.wilson_high <= Ap * p * p)
    slope = scaling_exponent([(p, f) for p, f, *_ in mc_points],
                             n_locations=len(an.locations))
    check("MC scaling exponent", slope, abs(slope - 2.0) <= 0.2, "2.0 +- 0.2")

    payload = {
        "checks": checks,
        "paper_tables": {"k=1": PAPER_K1.__dict__, "k>1": PAPER_KG1.__dict__},
        "derived_tables": {"k=1": t1.__dict__, "k>1": tg.__dict__},
        "formula_evaluated": {"paper": {"k=1": f1, "k>1": fg},
                              "derived": {"k=1": d1, "k>1": dg}},
        "printed_level1_coefficients": {
            "VN": analytics.PAPER_COEFF_VN1, "CNOT": analytics.PAPER_COEFF_CNOT1,
            "bTOFF": analytics.PAPER_COEFF_BTOFF1},
        "thresholds": {"paper": res.as_dict(), "paper_two_qubit": res2q.as_dict(),
                       "derived": dres.as_dict()},
        "direct_exrec": {"A_CNOT": A_direct, "B_sampled": B_direct,
                         "A_prime": Ap},
        "monte_carlo": [{"p": p, "p_fail": f, "wilson_low": lo, "wilson_high": hi}
                        for p, f, lo, hi in mc_points],
        "levels": seq,
        "encoder_budget": p_anc,
        "cooling": cooling_sequence(0.01, 2),
        "unresolved": {
            "printed_vs_formula_level1": "printed 11836/33036/14784 vs "
                                         "formula 14493/32640/14586; B unpublished",
            "vn_half_cnot_kg1": "11895 > 21294/2; CNOT dominance still holds",
            "two_qubit_main_vs_appendix": "2.69e-5 (main) vs 2.68e-5 (appendix)",
            "pg_139e6": "the quoted 1.39e-6 comparison rate follows from no "
                        "printed scenario; 2.32e-6 does",
        },
    }
    write_json(payload, os.path.join(out, "reproduce.json"))
    write_csv(level_series_rows(seq), os.path.join(out, "levels.csv"))
    write_csv(cooling_series_rows(cooling_sequence(0.01, 2)),
              os.path.join(out, "cooling.csv"))
    figure_level_decay({"p0 = 0.75 p_thresh": seq},
                       os.path.join(out, "levels.png"), threshold=res.p_thresh)
    figure_cooling({"eps0=0.01": cooling_sequence(0.01, 2)},
                   os.path.join(out, "cooling.png"))
    figure_mc_scaling(mc_points, Ap, os.path.join(out, "mc_scaling.png"))
    failures = [c for c in checks if not c["ok"]]
    if args.json:
        sys.stdout.write(write_json({"checks": checks, "failures": failures}, None))
    if failures:
        print(write_json({"failures": failures}, None), file=sys.stderr)
        return 1
    if not args.json:
        print(f"all {len(checks)} reproduction checks passed; reports in {out}/")
    return 0


def _add_gadget_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gadget", required=True, choices=GadgetSpec.KINDS)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--two-qubit", action="store_true",
                   help="decompose TOFFOLIs into the 5-gate two-qubit pattern")


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="ftqec",
                                 description="Measurement-free fault-tolerant "
                                             "QEC toolkit for the Bacon-Shor code")
    ap.add_argument("--json", action="store_true",
                    help="machine-readable output only on stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit a gadget circuit in the text format")
    _add_gadget_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("count", help="malignant-parameter enumeration")
    _add_gadget_args(p)
    p.add_argument("--triples", default="none",
                   help="none | exhaustive | sample:N")
    p.add_argument("--omit-preps", action="store_true",
                   help="contract preparation locations (the k>1 convention)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("threshold", help="threshold recursion")
    p.add_argument("--params", choices=("paper", "derived"), default="paper")
    p.add_argument("--two-qubit", action="store_true")
    p.add_argument("--triples", default="none")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir")
    p.set_defaults(fn=cmd_threshold)

    p = sub.add_parser("budget", help="encoder error budget")
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--output-dir")
    p.set_defaults(fn=cmd_budget)

    p = sub.add_parser("cooling", help="algorithmic cooling recursion")
    p.add_argument("--eps0", type=float, required=True)
    p.add_argument("--rounds", type=int, default=2)
    p.add_argument("--pg", type=float, default=0.0)
    p.add_argument("--target", type=float)
    p.add_argument("--output-dir")
    p.set_defaults(fn=cmd_cooling)

    p = sub.add_parser("mc", help="Monte-Carlo fault injection")
    _add_gadget_args(p)
    p.add_argument("-p", "--p", type=float, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_mc)

    p = sub.add_parser("verify", help="oracle test batteries")
    p.add_argument("--suite", default="oracle")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("reproduce", help="full reproduction pipeline")
    p.add_argument("--output-dir", default="reports")
    p.add_argument("--trials", type=int, default=400_000)
    p.add_argument("--triple-samples", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_reproduce)

    args = ap.parse_args(argv)
    _ = _max_workers()
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
