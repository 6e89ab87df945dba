"""Command-line interface: synthesize, verify, print stabilizer tables, and
run benchmark sweeps.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .circuit import resources, to_text
from .encoder import (
    CombinationSpec,
    assemble_combination,
    assemble_lcu,
    assemble_sbbe,
    build_transforms,
    combination_target_terms,
    example_operator,
    lcu_lambda,
    make_combination_plan,
    make_plan,
    plan_from_json,
    plan_to_json,
)
from .pauli import DEFAULT_DENSE_CAP, PauliString
from .schemes import SCHEME_KINDS, AncillaScheme, stabilizer_table_line
from .simulator import verify_block_encoding

DEFAULT_M_GRID = tuple(range(2, 493, 10))  # 2, 12, 22, ..., 492

CSV_COLUMNS = ("example", "m", "n", "scheme", "method",
               "two_qubit_count", "depth", "seed", "verified")


def _random_alphas(m: int, rng) -> np.ndarray:
    v = rng.standard_normal(m)
    return v / np.linalg.norm(v)


def _parse_alphas(text: str, m: int) -> np.ndarray:
    vals = np.array([float(x) for x in text.split(",")])
    if len(vals) != m:
        raise SystemExit(f"error: expected {m} coefficients, got {len(vals)}")
    return vals


def _load_v_file(path: str) -> tuple[int, ...]:
    vals = []
    for ln in Path(path).read_text().splitlines():
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            vals.append(int(ln, 0))
    return tuple(vals)


def _load_t_file(path: str) -> list[PauliString]:
    out = []
    for ln in Path(path).read_text().splitlines():
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            out.append(PauliString.from_label(ln))
    return out


def _scheme_from_args(args, m: int) -> AncillaScheme:
    if args.scheme == "custom":
        if not args.v_file:
            raise SystemExit("error: --scheme custom requires --v-file")
        v = _load_v_file(args.v_file)
        a = args.ancillas or max((x.bit_length() for x in v), default=1)
        a = max(a, 1)
        return AncillaScheme.custom(a, v)
    return AncillaScheme.named(args.scheme, m)


def _plan_from_args(args):
    """Build (plan-like, circuit, target, lam, label) from CLI flags."""
    rng = np.random.default_rng(args.seed)
    if args.plan:
        plan = plan_from_json(Path(args.plan).read_text())
        circ = assemble_sbbe(plan, u_form=args.u_form)
        return plan, circ, plan.operator, plan.lam, "plan"
    if args.example is None:
        raise SystemExit("error: give --example or --plan")
    m = args.m
    if m is None:
        raise SystemExit("error: --m is required with --example")
    if args.example == 4:
        alphas1 = (_parse_alphas(args.alphas, m) if args.alphas
                   else _random_alphas(m, rng))
        alphas2 = (_parse_alphas(args.alphas2, m) if args.alphas2
                   else _random_alphas(m, rng))
        spec = CombinationSpec(args.beta, (args.ell, args.ell2))
        plan = make_combination_plan(
            spec, alphas1, alphas2,
            AncillaScheme.named(args.scheme, m) if args.scheme != "custom"
            else _scheme_from_args(args, m))
        circ = assemble_combination(plan)
        return plan, circ, combination_target_terms(plan), plan.lam, "example4"
    alphas = (_parse_alphas(args.alphas, m) if args.alphas
              else _random_alphas(m, rng))
    op, tset = example_operator(args.example, args.ell, m, alphas, n=args.n)
    if args.t_file:
        tset = build_transforms(op, user_ts=_load_t_file(args.t_file))
    scheme = _scheme_from_args(args, m)
    plan = make_plan(op, scheme, tset)
    if args.inject_gamma_fault is not None:
        k = args.inject_gamma_fault
        bad = tuple((g + 2) % 4 if i == k else g
                    for i, g in enumerate(plan.transforms.gamma_exps))
        bad_tset = replace(plan.transforms, gamma_exps=bad)
        plan = replace(plan, transforms=bad_tset)
    circ = assemble_sbbe(plan, u_form=args.u_form)
    return plan, circ, op, plan.lam, f"example{args.example}"


def cmd_synth(args) -> int:
    _, circ, _, lam, _ = _plan_from_args(args)
    out = Path(args.out)
    if args.format == "qasm":
        from .circuit import to_qasm
        out.write_text(to_qasm(circ))
    else:
        out.write_text(to_text(circ))
    rep = resources(circ)
    print(f"wrote {out}")
    print(f"qubits: {circ.n_sys} system + {circ.n_anc} ancilla")
    print(f"lambda: {lam}")
    print(f"two_qubit_count: {rep.two_qubit_count}")
    print(f"depth: {rep.depth}")
    print(f"total_gates: {rep.total_gates}")
    return 0


def cmd_verify(args) -> int:
    _, circ, target, lam, _ = _plan_from_args(args)
    if circ.n_total > args.dense_cap:
        raise SystemExit(
            f"error: {circ.n_total} qubits exceed the dense cap "
            f"{args.dense_cap}")
    report = verify_block_encoding(circ, target, lam, tol=args.tol,
                                   seed=args.seed, dense_cap=args.dense_cap)
    print(report.to_json())
    return 0 if report.passed else 1


def cmd_tables(args) -> int:
    lo, hi = (args.m, args.m) if args.m else (args.m_min, args.m_max)
    for m in range(lo, hi + 1):
        print(stabilizer_table_line(args.scheme, m))
    return 0


def _bench_cell_sbbe(example: int, m: int, scheme_kind: str, seed: int,
                     dense_cap: int):
    rng = np.random.default_rng([seed, example, m,
                                 SCHEME_KINDS.index(scheme_kind)])
    if example == 4:
        spec = CombinationSpec(float(rng.uniform(0, 1)), (1, 2))
        plan = make_combination_plan(spec, _random_alphas(m, rng),
                                     _random_alphas(m, rng), scheme_kind)
        circ = assemble_combination(plan)
        target = combination_target_terms(plan)
        lam = plan.lam
        n = plan.n
    else:
        op, tset = example_operator(example, 1, m, _random_alphas(m, rng))
        plan = make_plan(op, scheme_kind, tset)
        circ = assemble_sbbe(plan)
        target, lam, n = op, plan.lam, op.n
    return circ, target, lam, n


def _bench_cell_lcu(example: int, m: int, seed: int):
    rng = np.random.default_rng([seed, example, m, 99])
    if example == 4:
        spec = CombinationSpec(float(rng.uniform(0, 1)), (1, 2))
        plan = make_combination_plan(spec, _random_alphas(m, rng),
                                     _random_alphas(m, rng), "log")
        target = combination_target_terms(plan)
        n = plan.n
    else:
        op, _ = example_operator(example, 1, m, _random_alphas(m, rng))
        target, n = op, op.n
    circ = assemble_lcu(target)
    return circ, target, lcu_lambda(target), n


def cmd_bench(args) -> int:
    examples = [int(x) for x in args.examples.split(",") if x]
    schemes = [s for s in args.schemes.split(",") if s]
    for s in schemes:
        if s not in ("log", "gray", "linear", "linminus1"):
            raise SystemExit(f"error: unknown scheme {s!r} in --schemes")
    m_grid = ([int(x) for x in args.m_grid.split(",") if x]
              if args.m_grid else list(DEFAULT_M_GRID))

    rows = []
    for example in examples:
        for m in m_grid:
            if example == 2 and m < 3:
                continue
            cells = [("SBBE", s) for s in schemes] + [("LCU", "log")]
            for method, scheme_kind in cells:
                try:
                    if method == "SBBE":
                        circ, target, lam, n = _bench_cell_sbbe(
                            example, m, scheme_kind, args.seed, args.dense_cap)
                    else:
                        circ, target, lam, n = _bench_cell_lcu(
                            example, m, args.seed)
                except ValueError as exc:
                    print(f"cell example={example} m={m} {method}/"
                          f"{scheme_kind} failed: {exc}", file=sys.stderr)
                    continue
                rep = resources(circ)
                verified = ""
                if circ.n_total <= args.dense_cap:
                    block = verify_block_encoding(circ, target, lam,
                                                  tol=args.tol,
                                                  dense_cap=args.dense_cap)
                    verified = "true" if block.passed else "false"
                rows.append({
                    "example": example, "m": m, "n": n,
                    "scheme": scheme_kind, "method": method,
                    "two_qubit_count": rep.two_qubit_count,
                    "depth": rep.depth, "seed": args.seed,
                    "verified": verified,
                })
    rows.sort(key=lambda r: (r["example"], r["m"], r["method"], r["scheme"]))

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    Path(args.out).write_text(buf.getvalue())
    print(f"wrote {args.out} ({len(rows)} rows)")

    if not args.no_plot and rows:
        _render_figures(rows, Path(args.out))
    return 0


def _render_figures(rows, csv_path: Path) -> None:
    """Line plots of the two benchmark observables next to the CSV."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    for metric, ylabel in (("two_qubit_count", "Two-qubit gate count"),
                           ("depth", "Circuit depth")):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        series: dict[tuple, list[tuple[int, int]]] = {}
        for row in rows:
            key = (row["example"], row["method"], row["scheme"])
            series.setdefault(key, []).append((row["m"], row[metric]))
        for (example, method, scheme), pts in sorted(series.items()):
            pts.sort()
            label = f"A{example} {method}"
            if method == "SBBE":
                label += f" ({scheme})"
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    marker="o", markersize=3, label=label)
        ax.set_xlabel("Number of summands m")
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.4)
        ax.legend(fontsize=8)
        fig.tight_layout()
        out = csv_path.with_name(csv_path.stem + f"_{metric}.png")
        fig.savefig(out, dpi=150)
        plt.close(fig)
        print(f"wrote {out}")


def _add_common_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--example", type=int, choices=(1, 2, 3, 4))
    p.add_argument("--ell", type=int, default=1, choices=(1, 2, 3),
                   help="Pauli type of the example family")
    p.add_argument("--ell2", type=int, default=2, choices=(1, 2, 3),
                   help="second Pauli type (example 4)")
    p.add_argument("--beta", type=float, default=0.5,
                   help="mixing weight (example 4)")
    p.add_argument("--m", type=int, help="number of summands")
    p.add_argument("--n", type=int, help="qubit count (default m)")
    p.add_argument("--scheme", default="log", choices=SCHEME_KINDS)
    p.add_argument("--ancillas", type=int,
                   help="register size for --scheme custom")
    p.add_argument("--v-file", help="file of control states, one per line")
    p.add_argument("--t-file", help="file of transform labels, one per line")
    p.add_argument("--plan", help="plan JSON file instead of example flags")
    p.add_argument("--alphas", help="comma-separated coefficients")
    p.add_argument("--alphas2", help="second coefficient list (example 4)")
    p.add_argument("--u-form", default="generic",
                   choices=("generic", "cascade"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dense-cap", type=int, default=DEFAULT_DENSE_CAP)
    p.add_argument("--inject-gamma-fault", type=int, metavar="K",
                   help="debug: flip the sign of correction phase K")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbbe",
        description="Block encode weighted Pauli-string sums via the "
                    "stabilizer-based construction, with an LCU baseline.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a circuit and report resources")
    _add_common_spec_flags(p)
    p.add_argument("--out", default="circuit.sbbe")
    p.add_argument("--format", default="text", choices=("text", "qasm"))
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="verify the encoded block densely")
    _add_common_spec_flags(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", help="print stabilizer factorization tables")
    p.add_argument("--scheme", required=True,
                   choices=("log", "gray", "linear", "linminus1"))
    p.add_argument("--m", type=int)
    p.add_argument("--m-min", type=int, default=2)
    p.add_argument("--m-max", type=int, default=14)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("bench", help="resource sweep to CSV (+ figures)")
    p.add_argument("--examples", default="1,2,3")
    p.add_argument("--schemes", default="gray,linear")
    p.add_argument("--m-grid", help="comma-separated m values")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--dense-cap", type=int, default=DEFAULT_DENSE_CAP)
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the matplotlib figures")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
