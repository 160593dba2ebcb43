"""Command-line interface.

Every subcommand emits a JSON report (stdout or --out) and returns exit
code 0 on success, 2 on validation errors, 3 when adaptive precision hit
its cap.  Reports are byte-stable for identical inputs and --seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .algebraic import DEFAULT_PRECISION, make_pisot
from .automaton import (
    ambiguous_word_count,
    automaton_to_json,
    parse_automaton,
    primitivity_check,
    serialize_automaton,
    transition_matrices,
)
from .classify import atoms, classify, verdict_to_dict
from .distribution import cdf_bracket, depth_cloud
from .errors import MeasureLabError, PrecisionExhausted, ValidationError
from .fixtures import run_all
from .fourier import build_weight_cache, nu_hat, nu_hat_initial, psi_hat, rajchman_scan
from .parry import cylinder_measure, cylinder_measure_initial, perron, start_distribution
from .zero_automaton import build_zero_automaton, verify_zero_language


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip() != ""]


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip() != ""]


def _load(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        document = handle.read()
    a = parse_automaton(document)
    if a.beta_minpoly is None:
        raise ValidationError(f"{path}: document lacks beta.minpoly")
    return a


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_validate(args) -> dict:
    a = _load(args.automaton)
    report = {
        "file": args.automaton,
        "states": list(a.states),
        "alphabet": list(a.alphabet),
        "edges": len(a.edges),
        "initial": list(a.initial),
        "terminal": list(a.terminal),
        "beta_minpoly": list(a.beta_minpoly),
        "primitivity": primitivity_check(a),
        "ambiguous_words_up_to_8": ambiguous_word_count(a),
    }
    if report["primitivity"]["primitive"]:
        pd = perron(a, tol=min(args.tol, 1e-12))
        report["lambda"] = pd.lam
        report["residuals"] = {"left": pd.res_L, "right": pd.res_R}
        report["pi"] = [float(x) for x in start_distribution(pd)]
    return report


def _cmd_zero_automaton(args) -> dict:
    p = make_pisot(_int_list(args.minpoly), precision=args.precision)
    trim = {"both": "trim_both", "accessible": "accessible", "none": "none"}[args.trim]
    a = build_zero_automaton(p, _int_list(args.alphabet), trim=trim)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(automaton_to_json(a))
    beta = p.beta_float
    state_table = []
    for name in a.states:
        coords = [int(c) for c in name.strip("()").split(",")]
        decimal = sum(c * beta**i for i, c in enumerate(coords))
        state_table.append({"state": name, "decimal": decimal})
    report = {
        "minpoly": list(p.minpoly),
        "alphabet": list(a.alphabet),
        "trim": args.trim,
        "states": state_table,
        "edges": len(a.edges),
        "empty_language": not a.edges,
        "irreducibility_verified": p.irreducibility_verified,
    }
    if args.verify:
        report["verification"] = verify_zero_language(a, p, args.verify)
    if not args.out:
        report["automaton"] = serialize_automaton(a)
    else:
        report["written"] = args.out
        args.out = None  # --out holds the automaton document; report goes to stdout
    return report


def _pisot_for(a, args):
    return make_pisot(list(a.beta_minpoly), precision=args.precision)


def _cmd_classify(args) -> dict:
    a = _load(args.automaton)
    p = _pisot_for(a, args)
    verdict = classify(a, p, scan_height=args.height, tol=args.tol)
    report = verdict_to_dict(verdict)
    report["file"] = args.automaton
    return report


def _cmd_atoms(args) -> dict:
    a = _load(args.automaton)
    p = _pisot_for(a, args)
    pd = perron(a)
    from .classify import finite_image_test

    fi = finite_image_test(a, p)
    if not fi.ok:
        raise ValidationError(
            f"measure is continuous (witness edge {fi.witness}); no atoms"
        )
    atom_list = atoms(a, p, pd)
    return {
        "file": args.automaton,
        "atoms": [
            {
                "value_coords": [str(c) for c in at.value.coords],
                "value_decimal": at.value_decimal,
                "mass": at.mass,
                "states": list(at.states),
            }
            for at in atom_list
        ],
        "mass_total": float(sum(at.mass for at in atom_list)),
    }


def _cmd_cylinder(args) -> dict:
    a = _load(args.automaton)
    pd = perron(a)
    tm = transition_matrices(a)
    word = _int_list(args.word)
    report = {
        "file": args.automaton,
        "word": word,
        "measure": cylinder_measure(pd, a, word, tm),
        "lambda": pd.lam,
    }
    if a.initial:
        report["measure_initial"] = cylinder_measure_initial(pd, a, word, tm)
    return report


def _cmd_fourier(args) -> dict:
    a = _load(args.automaton)
    p = _pisot_for(a, args)
    pd = perron(a)
    cache = build_weight_cache(a, pd)
    rows = []
    for t in _float_list(args.t):
        if args.initial:
            value, bound = nu_hat_initial(a, p, pd, t, args.tol, cache)
        else:
            value, bound = nu_hat(a, p, pd, t, args.tol, cache)
        rows.append(
            {"t": t, "re": value.real, "im": value.imag, "abs": abs(value), "bound": bound}
        )
    if args.csv:
        _write_csv(
            args.csv,
            ["t_or_z", "re", "im", "abs", "bound"],
            [[r["t"], r["re"], r["im"], r["abs"], r["bound"]] for r in rows],
        )
    return {"file": args.automaton, "tol": args.tol, "values": rows}


def _cmd_limit(args) -> dict:
    a = _load(args.automaton)
    p = _pisot_for(a, args)
    pd = perron(a)
    z = _int_list(args.z)
    if len(z) > p.degree:
        raise ValidationError(f"--z has {len(z)} coordinates, base degree is {p.degree}")
    z = z + [0] * (p.degree - len(z))
    res = psi_hat(a, p, pd, z, args.tol)
    return {
        "file": args.automaton,
        "z": z,
        "re": res.value.real,
        "im": res.value.imag,
        "abs": abs(res.value),
        "bound": res.bound,
        "head_terms": res.head_terms,
        "tail_terms": res.tail_terms,
    }


def _cmd_scan(args) -> dict:
    a = _load(args.automaton)
    p = _pisot_for(a, args)
    pd = perron(a)
    result = rajchman_scan(a, p, pd, height=args.height, tol=args.tol, jobs=args.jobs)
    rows = [
        {
            "z": list(e.z_coords),
            "re": e.value.real,
            "im": e.value.imag,
            "abs": abs(e.value),
            "bound": e.bound,
        }
        for e in result.entries
    ]
    if args.csv:
        _write_csv(
            args.csv,
            ["t_or_z", "re", "im", "abs", "bound"],
            [[";".join(str(c) for c in e.z_coords), e.value.real, e.value.imag,
              abs(e.value), e.bound] for e in result.entries],
        )
    return {
        "file": args.automaton,
        "height": args.height,
        "max_abs": result.max_abs,
        "argmax": list(result.argmax),
        "table": rows,
    }


def _cmd_cdf(args) -> dict:
    a = _load(args.automaton)
    p = _pisot_for(a, args)
    pd = perron(a)
    points = _float_list(args.points)
    brackets = cdf_bracket(a, p, pd, args.depth, points)
    return {
        "file": args.automaton,
        "depth": args.depth,
        "brackets": [
            {"x": x, "lower": lo, "upper": hi} for x, (lo, hi) in zip(points, brackets)
        ],
    }


def _cmd_cloud(args) -> dict:
    a = _load(args.automaton)
    p = _pisot_for(a, args)
    pd = perron(a)
    cloud = depth_cloud(a, p, pd, args.depth)
    entries = sorted(cloud.entries, key=lambda e: (e.value, e.mass))
    if args.csv:
        _write_csv(
            args.csv,
            ["word", "value", "mass", "lo", "hi"],
            [[";".join(str(x) for x in e.word), e.value, e.mass, e.lo, e.hi]
             for e in entries],
        )
    report = {
        "file": args.automaton,
        "depth": args.depth,
        "entries": len(entries),
        "total_mass": cloud.total_mass,
        "max_radius": cloud.max_radius,
    }
    if not args.csv:
        report["cloud"] = [
            {"word": list(e.word), "value": e.value, "mass": e.mass, "lo": e.lo, "hi": e.hi}
            for e in entries
        ]
    else:
        report["written"] = args.csv
    return report


def _cmd_examples(args) -> dict:
    return run_all(args.dir, seed=args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="measure-lab",
        description="Push-forward measures of Parry measures under Pisot digit maps: "
        "classification, atoms, Fourier transforms, distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, automaton=True):
        if automaton:
            sp.add_argument("automaton", help="automaton JSON file")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--precision", type=int, default=DEFAULT_PRECISION)

    sp = sub.add_parser("validate", help="parse and validate an automaton document")
    common(sp)
    sp.set_defaults(fn=_cmd_validate)

    sp = sub.add_parser("zero-automaton", help="build the zero-value digit automaton")
    sp.add_argument("--minpoly", required=True, help="e.g. -1,-1,1")
    sp.add_argument("--alphabet", required=True, help="e.g. -1,0,1")
    sp.add_argument("--trim", choices=["both", "accessible", "none"], default="both")
    sp.add_argument("--verify", type=int, default=0, help="verify language up to this length")
    common(sp, automaton=False)
    sp.set_defaults(fn=_cmd_zero_automaton)

    sp = sub.add_parser("classify", help="atomic vs continuous verdict")
    sp.add_argument("--height", type=int, default=3)
    common(sp)
    sp.set_defaults(fn=_cmd_classify)

    sp = sub.add_parser("atoms", help="exact atom values and masses")
    common(sp)
    sp.set_defaults(fn=_cmd_atoms)

    sp = sub.add_parser("cylinder", help="cylinder masses of a label word")
    sp.add_argument("--word", required=True, help="e.g. 1,0,1")
    common(sp)
    sp.set_defaults(fn=_cmd_cylinder)

    sp = sub.add_parser("fourier", help="transform values at given t")
    sp.add_argument("--t", required=True, help="comma-separated t values")
    sp.add_argument("--initial", action="store_true", help="use the initial-state measure")
    sp.add_argument("--csv", help="write a CSV table here")
    common(sp)
    sp.set_defaults(fn=_cmd_fourier)

    sp = sub.add_parser("limit", help="limit coefficient along z*beta^k")
    sp.add_argument("--z", required=True, help="integer coordinates, e.g. 1,0")
    common(sp)
    sp.set_defaults(fn=_cmd_limit)

    sp = sub.add_parser("scan", help="scan limit coefficients up to a height")
    sp.add_argument("--height", type=int, default=3)
    sp.add_argument("--csv", help="write a CSV table here")
    common(sp)
    sp.set_defaults(fn=_cmd_scan)

    sp = sub.add_parser("cdf", help="certified CDF brackets")
    sp.add_argument("--depth", type=int, default=12)
    sp.add_argument("--points", required=True, help="e.g. 0.5,1.0,1.5")
    common(sp)
    sp.set_defaults(fn=_cmd_cdf)

    sp = sub.add_parser("cloud", help="depth-n weighted point cloud")
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--csv", help="write the cloud as CSV here")
    common(sp)
    sp.set_defaults(fn=_cmd_cloud)

    sp = sub.add_parser("examples", help="materialize bundled fixtures and run their checks")
    sp.add_argument("--dir", default="fixtures", help="directory for fixture files")
    common(sp, automaton=False)
    sp.set_defaults(fn=_cmd_examples)

    return parser


_LIST_FLAGS = {"--minpoly", "--alphabet", "--word", "--z", "--t", "--points"}


def _fuse_list_flags(argv: list[str]) -> list[str]:
    # argparse rejects values like "-1,-1,1" as option strings; fuse them
    # into --flag=value form so the documented syntax works.
    fused = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if token in _LIST_FLAGS and i + 1 < len(argv):
            fused.append(f"{token}={argv[i + 1]}")
            skip = True
        else:
            fused.append(token)
    return fused


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_fuse_list_flags(list(argv if argv is not None else sys.argv[1:])))
    try:
        report = args.fn(args)
    except ValidationError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.out)
        return 2
    except PrecisionExhausted as exc:
        _emit({"error": {"type": "PrecisionExhausted", "message": str(exc)}}, args.out)
        return 3
    except MeasureLabError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.out)
        return 2
    _emit(report, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
