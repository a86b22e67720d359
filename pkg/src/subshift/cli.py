"""Command-line frontend.

Exit codes: 0 success, 2 input error, 3 budget error, 4 precision error
(1 is reserved for ``check`` reporting a failed suite).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import checks
from .blocks import ENUM_CAP, Block
from .entropy import (DENSE_MAX_N, EntropySeries, entropy_series, fekete_estimate,
                      theorem3_counts, theorem3_interval)
from .errors import InputError, SubshiftError
from .language import (GapSet, language_of_point, prune_forbidden, read_block_list,
                       read_language, sgap_forbidden, subordinate_closure, write_language)
from .points import (DEPTH_CAP, DecimalTarget, periodic_point, squarefree_point, theorem3_point,
                     theorem3_trace, verify_trace, write_trace)
from .recode import recode_language, realize_target
from .sgap import sgap_entropy


@dataclass
class RunConfig:
    max_dense_n: int = DENSE_MAX_N
    max_enum: int = ENUM_CAP
    depth_cap: int = DEPTH_CAP
    tol: float = 1e-10
    format: str = "csv"
    out: str = None
    threads: int = 1
    seed: int = 0

    def validate(self) -> RunConfig:
        if min(self.max_dense_n, self.max_enum, self.depth_cap, self.threads) < 1:
            raise InputError("budgets and thread counts must be positive")
        if self.tol < 1e-13:
            raise InputError("tol must be at least 1e-13")
        if self.format not in ("csv", "json"):
            raise InputError("format must be csv or json")
        return self


def load_config(args) -> RunConfig:
    cfg = {}
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config file: {exc}") from None
    names = {f.name for f in fields(RunConfig)}
    unknown = set(cfg) - names
    if unknown:
        raise InputError(f"unknown config keys: {sorted(unknown)}")
    for name in names:
        value = getattr(args, name, None)
        if value is not None:
            cfg[name] = value
    return RunConfig(**cfg).validate()


def _out_dir(cfg: RunConfig):
    if cfg.out is None:
        return None
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit_series(series: EntropySeries, interval, cfg: RunConfig) -> None:
    out = _out_dir(cfg)
    if out is not None:
        (out / "series.csv").write_text(series.to_csv(), encoding="utf-8")
        (out / "plot.dat").write_text(series.plot_text(), encoding="utf-8")
        if interval is not None:
            (out / "interval.json").write_text(json.dumps(interval.to_json(), indent=1) + "\n", encoding="utf-8")
    if cfg.format == "json":
        doc = {"source": series.source, "note": series.note,
               "series": [{"n": e.n, "count": e.count, "a_n": e.a, "ratio": e.ratio, "status": e.status.value}
                          for e in series],
               "interval": interval.to_json() if interval is not None else None}
        print(json.dumps(doc, indent=1))
    else:
        sys.stdout.write(series.to_csv())
        if series.note:
            print(f"# {series.note}")
        if interval is not None:
            print(f"# interval {json.dumps(interval.to_json())}")


def _interval_or_none(series):
    return fekete_estimate(series) if series.exact() else None


# --------------------------------------------------------------------------
# subcommands

def cmd_entropy(args, cfg: RunConfig) -> int:
    r = args.r
    n = args.n
    sources = [s for s in ("full", "sgap", "forbidden", "forbid", "periodic", "language") if getattr(args, s) is not None]
    if len(sources) != 1:
        raise InputError("give exactly one of --full, --sgap, --forbidden, --forbid, --periodic, --language")
    if args.full is not None:
        lang = prune_forbidden([], n, args.full, cap=cfg.max_enum)
    elif args.sgap is not None:
        lang = prune_forbidden(sgap_forbidden(GapSet.parse(args.sgap), max(n, 2)), n, 2, cap=cfg.max_enum)
    elif args.forbidden is not None:
        lang = prune_forbidden(read_block_list(args.forbidden, r), n, r, cap=cfg.max_enum)
    elif args.forbid is not None:
        blocks = [Block.parse(tok, r) for tok in args.forbid.split()] if r > 10 else \
            [Block.parse(tok, r) for tok in args.forbid.split(",") if tok.strip()]
        lang = prune_forbidden(blocks, n, r, cap=cfg.max_enum)
    elif args.language is not None:
        lang = read_language(args.language)
    else:
        g = periodic_point(Block.parse(args.periodic, r))
        series = entropy_series(g, n, subordinate=args.subordinate, prefix_len=args.prefix_len,
                                max_dense_n=cfg.max_dense_n, cap=cfg.max_enum, threads=cfg.threads)
        _emit_series(series, _interval_or_none(series), cfg)
        return 0
    series = entropy_series(lang, n, subordinate=args.subordinate, max_dense_n=cfg.max_dense_n,
                            cap=cfg.max_enum, threads=cfg.threads)
    _emit_series(series, _interval_or_none(series), cfg)
    return 0


def _parse_target(text: str, upper=1) -> DecimalTarget:
    return DecimalTarget.parse(text, upper=upper)


def _construct(t: DecimalTarget, depth: int, cfg: RunConfig, out):
    trace = theorem3_trace(t, depth, cfg.depth_cap)
    report = {
        "target": t.text(),
        "declared_exact": t.declared_exact,
        "p": list(trace.p),
        "s": [str(s) for s in trace.s],
        "invariants": verify_trace(trace),
        "intervals": [dict(level=n, **theorem3_interval(trace, n).to_json()) for n in range(1, depth + 1)],
    }
    if out is not None:
        write_trace(trace, out)
        (out / "report.json").write_text(json.dumps(report, indent=1) + "\n", encoding="utf-8")
    return trace, report


def cmd_construct(args, cfg: RunConfig) -> int:
    t = _parse_target(args.t)
    _, report = _construct(t, args.depth, cfg, _out_dir(cfg))
    print(json.dumps(report, indent=1))
    return 0 if all(report["invariants"].values()) else 1


def cmd_realize(args, cfg: RunConfig) -> int:
    t = _parse_target(args.t, upper=None)
    k, s = realize_target(t, args.s_digits)
    out = _out_dir(cfg)
    trace, report = _construct(s, args.depth, cfg, out)
    horizon = args.horizon
    g = theorem3_point(trace, cfg.depth_cap)
    base = subordinate_closure(language_of_point(g, k * horizon, 10 ** args.depth), cfg.max_enum)
    recoded = recode_language(base, k)
    if out is not None:
        write_language(recoded, out / "recoded_language.txt")
    upper_counts = [theorem3_counts(trace, k * n, max_dense_n=cfg.max_dense_n).periodic_exact
                    for n in range(1, horizon + 1) if k * n <= cfg.max_dense_n]
    doc = {
        "t": t.text(), "k": k, "s": s.text(),
        "p": report["p"],
        "invariants": report["invariants"],
        "intervals": [dict(level=n, **theorem3_interval(trace, n).scaled(k).to_json())
                      for n in range(1, args.depth + 1)],
        "recoded_levels": [{"n": n, "status": recoded.status(n).value, "count": len(recoded.level(n)),
                            "count_upper": upper_counts[n - 1] if n - 1 < len(upper_counts) else None}
                           for n in range(1, recoded.horizon + 1)],
    }
    print(json.dumps(doc, indent=1))
    return 0


def cmd_sgap(args, cfg: RunConfig) -> int:
    sol = sgap_entropy(GapSet.parse(args.set), cfg.tol)
    doc = sol.to_json()
    out = _out_dir(cfg)
    if out is not None:
        (out / "sgap.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    print(json.dumps(doc, indent=1))
    return 0


def cmd_squarefree(args, cfg: RunConfig) -> int:
    if args.N < args.n:
        raise InputError(f"prefix length N={args.N} is shorter than n={args.n}")
    series = entropy_series(squarefree_point(), args.n, subordinate=True, prefix_len=args.N,
                            max_dense_n=cfg.max_dense_n, cap=cfg.max_enum, threads=cfg.threads)
    _emit_series(series, None, cfg)
    return 0


def cmd_check(args, cfg: RunConfig) -> int:
    results = checks.run_all(cfg.seed)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig keys")
    common.add_argument("--out", help="directory for output files")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--max-dense-n", dest="max_dense_n", type=int)
    common.add_argument("--max-enum", dest="max_enum", type=int)
    common.add_argument("--depth-cap", dest="depth_cap", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--threads", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="subshift", description="Block counting and entropy of shift spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("entropy", parents=[common], help="entropy series and Fekete upper bound")
    e.add_argument("--full", type=int, metavar="R", help="full shift on R symbols")
    e.add_argument("--sgap", metavar="S", help='S-gap shift, e.g. "1+" for the golden mean')
    e.add_argument("--forbidden", metavar="FILE", help="file with one forbidden block per line")
    e.add_argument("--forbid", metavar="BLOCKS", help='inline forbidden blocks, e.g. "11,101"')
    e.add_argument("--periodic", metavar="W", help="periodic point W^inf")
    e.add_argument("--language", metavar="FILE", help="language file")
    e.add_argument("--subordinate", action="store_true", help="count the downward closure")
    e.add_argument("--r", type=int, default=2, help="alphabet size for block text")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--prefix-len", dest="prefix_len", type=int)
    e.set_defaults(func=cmd_entropy)

    c = sub.add_parser("construct", parents=[common], help="binary subordinate shift of entropy t in [0, 1]")
    c.add_argument("--t", required=True, help='decimal digits; end with "..." for a truncated expansion')
    c.add_argument("--depth", type=int, required=True)
    c.set_defaults(func=cmd_construct)

    rz = sub.add_parser("realize", parents=[common], help="shift space of entropy t > 1 via recoding")
    rz.add_argument("--t", required=True)
    rz.add_argument("--depth", type=int, required=True)
    rz.add_argument("--s-digits", dest="s_digits", help="digits of t/k when it does not terminate")
    rz.add_argument("--horizon", type=int, default=3, help="levels of the recoded language to emit")
    rz.set_defaults(func=cmd_realize)

    sg = sub.add_parser("sgap", parents=[common], help="solve the S-gap entropy equation")
    sg.add_argument("--set", required=True, help='e.g. "0", "1+", "1,2", "0,3,5+"')
    sg.set_defaults(func=cmd_sgap)

    sq = sub.add_parser("squarefree", parents=[common], help="subordinate counts of the square-free point")
    sq.add_argument("--N", type=int, required=True, help="prefix length")
    sq.add_argument("--n", type=int, required=True, help="largest block length")
    sq.set_defaults(func=cmd_squarefree)

    ck = sub.add_parser("check", parents=[common], help="run the invariant suites")
    ck.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args)
        return args.func(args, cfg)
    except SubshiftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
