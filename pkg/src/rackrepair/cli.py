"""Command-line front end.

    rackrepair ff --p0 2 --t 4
    rackrepair scheme build --family additive --p0 2 --t 6 --ell 3 --k 32 --out s.json
    rackrepair repair run --scheme s.json --trials 100
    rackrepair repair exhaustive --family gw --p0 2 --t 4 --k 8 --trials 50
    rackrepair cutset --n 64 --k 32 --r 4 --d 3 --q 64 --base 2
    rackrepair sweep --config grid.json --format csv

Exit codes: 0 success, 2 hypothesis or input violation, 3 no admissible
subspace, 4 repair failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .experiments import (CSV_COLUMNS, HELPER_POLICIES, __version__, build_report,
                          exhaustive_repair, repair_trials, report_csv, run_sweep,
                          search_failure_report, sweep_csv)
from .gf_tower import FieldError, make_field
from .grs_code import CodeError, load_codeword
from .rack_engine import (CutSetQuery, RepairError, SchemeError, cutset_bound, dump_scheme,
                          load_scheme, validate_scheme)
from .scheme_forge import (FAMILIES, FamilyParams, HypothesisError, SubspaceSearchError,
                           build_family_scheme, family_field)

EXIT_OK, EXIT_HYPOTHESIS, EXIT_SEARCH, EXIT_REPAIR = 0, 2, 3, 4

class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _add_param_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("family parameters")
    g.add_argument("--family", choices=FAMILIES)
    g.add_argument("--p0", type=int, help="characteristic")
    g.add_argument("--t", type=int, help="degree of F_q over the base field")
    g.add_argument("--base-degree", type=int, help="base field is F_{p0^s}; default 1")
    g.add_argument("--k", type=int, help="code dimension")
    g.add_argument("--ell", type=int, help="subspace dimension")
    g.add_argument("--a", type=int, help="subfield degree for the multiplicative/combined families")
    g.add_argument("--v", type=int, help="exponent of the combined family")
    g.add_argument("--n", type=int, help="code length (two-coset family)")
    g.add_argument("--host-rack", type=int)
    g.add_argument("--host-node", type=int)
    g.add_argument("--subspace", help="auto | subfield | search | explicit basis 'e1;e2;...'")
    g.add_argument("--config", type=Path, help="JSON file mirroring the flags")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--helpers", choices=HELPER_POLICIES)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", dest="fmt", choices=("json", "csv"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rackrepair", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    ff = sub.add_parser("ff", help="describe a finite field")
    ff.add_argument("--p0", type=int, required=True)
    ff.add_argument("--t", type=int, required=True, help="extension degree T over F_{p0}")
    ff.add_argument("--modulus", help="comma-separated coefficients c0,...,cT")

    scheme = sub.add_parser("scheme", help="scheme construction").add_subparsers(
        dest="action", required=True)
    build = scheme.add_parser("build", help="construct and validate a repair scheme")
    _add_param_flags(build)
    build.add_argument("--seed", type=int)
    build.add_argument("--out", type=Path, help="where to write the scheme file")

    repair = sub.add_parser("repair", help="repair experiments").add_subparsers(
        dest="action", required=True)
    run = repair.add_parser("run", help="repeated repairs of one failure position")
    _add_param_flags(run)
    _add_run_flags(run)
    run.add_argument("--scheme", type=Path, help="scheme file from 'scheme build'")
    run.add_argument("--codeword", type=Path, help="repair this codeword file instead of random ones")
    exh = repair.add_parser("exhaustive", help="repairs of every failure position")
    _add_param_flags(exh)
    _add_run_flags(exh)

    cut = sub.add_parser("cutset", help="rack-aware cut-set bound")
    for name in ("n", "k", "r", "d", "q"):
        cut.add_argument(f"--{name}", type=int, required=True)
    cut.add_argument("--base", type=int, default=2, help="base field size p")

    sw = sub.add_parser("sweep", help="evaluate a parameter grid")
    sw.add_argument("--config", type=Path, required=True, help="JSON grid")
    sw.add_argument("--trials", type=int)
    sw.add_argument("--seed", type=int)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--out", type=Path)
    sw.add_argument("--format", dest="fmt", choices=("json", "csv"))
    return ap


def _merged(args: argparse.Namespace) -> dict:
    """Flags override the config file; missing keys fall back to defaults."""
    conf = {}
    if getattr(args, "config", None) is not None:
        try:
            conf = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        conf = {k.replace("-", "_"): v for k, v in conf.items()}
    if "format" in conf:
        conf["fmt"] = conf.pop("format")
    out = dict(conf)
    for key, val in vars(args).items():
        if val is not None:
            out[key] = val
    out.setdefault("seed", 42)
    out.setdefault("trials", 1)
    out.setdefault("helpers", "all")
    out.setdefault("fmt", "json")
    out.setdefault("subspace", "auto")
    return out


def _params(opts: dict) -> FamilyParams:
    missing = [f for f in ("family", "p0", "t", "k") if opts.get(f) is None]
    if missing:
        raise UsageError("missing parameters: " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return FamilyParams(
        family=opts["family"], p0=int(opts["p0"]), t=int(opts["t"]), k=int(opts["k"]),
        s_base=int(opts.get("base_degree") or 1),
        ell=opts.get("ell"), a=opts.get("a"), v=opts.get("v"), n=opts.get("n"),
        host_rack=int(opts.get("host_rack") or 0), host_node=int(opts.get("host_node") or 0),
    )


def _subspace(opts: dict, params: FamilyParams):
    spec = opts.get("subspace", "auto")
    if isinstance(spec, list):
        spec = ";".join(spec)
    if spec in ("auto", "subfield", "search"):
        return spec
    tw = family_field(params)
    try:
        return [tw.parse_element(e) for e in spec.split(";")]
    except (ValueError, FieldError) as exc:
        raise UsageError(f"bad explicit subspace {spec!r}: {exc}") from exc


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        return report_csv([report], CSV_COLUMNS)
    return json.dumps(report, indent=1) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_ff(args) -> int:
    modulus = None if args.modulus is None else [int(c) for c in args.modulus.split(",")]
    tw = make_field(args.p0, args.t, modulus)
    terms = [("1" if i == 0 else "x" if i == 1 else f"x^{i}") if c == 1 else
             (str(c) if i == 0 else f"{c}x" if i == 1 else f"{c}x^{i}")
             for i, c in reversed(list(enumerate(tw.modulus))) if c]
    print(f"field      GF({tw.p0}^{tw.T}), q = {tw.q}")
    print(f"modulus    {' + '.join(terms)}")
    print(f"describe   {tw.describe()}")
    if tw.T == 1:
        print("prime field")
    print(f"primitive  {tw.format_element(tw.primitive)} (order {tw.q - 1})")
    if tw.T > 1:
        print(f"generator  {tw.format_element(tw.generator)} "
              f"(order {tw.multiplicative_order(tw.generator)})")
    print("subfields  " + ", ".join(f"degree {s} (GF({tw.p0 ** s}))" for s in tw.subfield_degrees()))
    return EXIT_OK


def cmd_scheme_build(opts: dict) -> int:
    params = _params(opts)
    try:
        scheme = build_family_scheme(params, _subspace(opts, params), seed=int(opts["seed"]))
    except SubspaceSearchError as err:
        rep = search_failure_report(params, err, family_field(params))
        print(json.dumps(rep, indent=1))
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SEARCH
    text = dump_scheme(scheme, validate_scheme(scheme)) + "\n"
    if opts.get("out") is not None:
        Path(opts["out"]).write_text(text)
    print(json.dumps(build_report(scheme), indent=1))
    return EXIT_OK


def cmd_repair_run(opts: dict) -> int:
    start = time.perf_counter()
    if opts.get("scheme") is not None:
        try:
            scheme = load_scheme(Path(opts["scheme"]).read_text())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot load scheme {opts['scheme']}: {exc}") from exc
        report = validate_scheme(scheme)
        if not report.passed:
            raise SchemeError("invalid scheme: " + "; ".join(report.failures))
    else:
        params = _params(opts)
        try:
            scheme = build_family_scheme(params, _subspace(opts, params), seed=int(opts["seed"]))
        except SubspaceSearchError as err:
            print(json.dumps(search_failure_report(params, err, family_field(params)), indent=1))
            print(f"error: {err}", file=sys.stderr)
            return EXIT_SEARCH
        if opts.get("host_node"):
            scheme = scheme.with_host_node(int(opts["host_node"]))
    source = None
    trials = int(opts["trials"])
    if opts.get("codeword") is not None:
        code, word = load_codeword(Path(opts["codeword"]).read_text())
        if code.points != scheme.code.points or code.k != scheme.k:
            raise UsageError("codeword file does not match the scheme's code")
        source = lambda _trial: word  # noqa: E731
    stats = repair_trials(scheme, trials, int(opts["seed"]), opts["helpers"], word_source=source)
    rep = build_report(scheme, stats, time.perf_counter() - start)
    _emit(_render(rep, opts["fmt"]), opts.get("out"))
    return EXIT_OK if stats.failures == 0 and stats.span_mismatches == 0 else EXIT_REPAIR


def cmd_repair_exhaustive(opts: dict) -> int:
    params = _params(opts)
    try:
        rep, stats = exhaustive_repair(params, int(opts["trials"]), int(opts["seed"]),
                                       opts["helpers"], _subspace(opts, params))
    except SubspaceSearchError as err:
        print(json.dumps(search_failure_report(params, err, family_field(params)), indent=1))
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SEARCH
    _emit(_render(rep, opts["fmt"]), opts.get("out"))
    return EXIT_OK if stats.failures == 0 and stats.span_mismatches == 0 else EXIT_REPAIR


def cmd_cutset(args) -> int:
    bound = cutset_bound(CutSetQuery(args.n, args.k, args.r, args.d, args.q, args.base))
    print(json.dumps({"m": bound.m, "symbols": str(bound.symbols),
                      "bits": bound.bits.exact, "bits_float": round(bound.bits.value, 6)}))
    return EXIT_OK


def cmd_sweep(opts: dict) -> int:
    grid = {k: v for k, v in opts.items() if k in ("family", "p0", "s_base", "t", "a", "v",
                                                   "ell", "n", "k")}
    if "base_degree" in opts and "s_base" not in grid:
        grid["s_base"] = opts["base_degree"]
    rows = run_sweep(grid, int(opts["trials"]), int(opts["seed"]), int(opts.get("jobs") or 1))
    if opts["fmt"] == "csv":
        text = sweep_csv(rows)
    else:
        text = json.dumps(rows, indent=1) + "\n"
    _emit(text, opts.get("out"))
    return EXIT_REPAIR if any(r.get("status") == "repair-failure" for r in rows) else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ff":
            return cmd_ff(args)
        if args.command == "cutset":
            return cmd_cutset(args)
        opts = _merged(args)
        if opts.get("trials") is not None and int(opts["trials"]) < 1:
            raise UsageError("--trials must be >= 1")
        if args.command == "sweep":
            return cmd_sweep(opts)
        if args.command == "scheme":
            return cmd_scheme_build(opts)
        if args.action == "run":
            return cmd_repair_run(opts)
        return cmd_repair_exhaustive(opts)
    except HypothesisError as err:
        print("hypothesis violated:", file=sys.stderr)
        for v in err.violations:
            print(f"  - {v}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (UsageError, FieldError, CodeError, SchemeError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except RepairError as err:
        print(f"repair failed: {err}", file=sys.stderr)
        return EXIT_REPAIR


if __name__ == "__main__":
    sys.exit(main())
