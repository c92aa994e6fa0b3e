"""Command-line interface: ``fgc <subcommand> [options]``.

Exit codes: 0 success, 1 computation error or failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__
from .cache import clear, default_cache_dir, list_entries
from .errors import FGCError, ParseError
from .signature import parse_signature

log = logging.getLogger("fgc")


@dataclass
class RunConfig:
    cache_dir: Path
    precision: int = 50
    trunc: int = 200
    jobs: int = 1
    format: str = "text"

    def __post_init__(self):
        self.cache_dir = Path(self.cache_dir)
        if self.precision < 10:
            raise ParseError("precision must be >= 10")
        if self.trunc <= 0:
            raise ParseError("truncation must be positive")
        if self.jobs < 1:
            raise ParseError("worker count must be >= 1")
        if self.format not in ("json", "csv", "text"):
            raise ParseError(f"unknown output format {self.format!r}")


def read_config_file(path) -> dict:
    """Flat ``key = value`` lines; '#' starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def build_config(args) -> RunConfig:
    values: dict = {"cache_dir": default_cache_dir()}
    if args.config:
        values.update(read_config_file(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    known = {f.name for f in fields(RunConfig)}
    unknown = set(values) - known
    if unknown:
        raise ParseError(f"unknown config keys: {sorted(unknown)}")
    for key in ("precision", "trunc", "jobs"):
        values[key] = int(values[key]) if key in values else RunConfig.__dataclass_fields__[key].default
    return RunConfig(**values)


def _encode(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(obj, 20)
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, (set, tuple)):
        return list(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot encode {type(obj).__name__}")


def emit(data, out, cfg: RunConfig | None = None) -> None:
    if isinstance(data, str):
        out.write(data if data.endswith("\n") else data + "\n")
    else:
        out.write(json.dumps(data, default=_encode, indent=1) + "\n")


def _periods(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(";", ",").split(",") if t.strip())
    except ValueError as exc:
        raise ParseError(f"bad period list {text!r}") from exc


# ----------------------------------------------------------------- commands


def cmd_orbits(args, cfg, out):
    from .torsion import orbit_structure

    s = orbit_structure(args.a, args.q)
    emit({"a": s.a, "q": s.q, "orbits": [list(o) for o in s.orbits], "lengths": list(s.lengths)}, out)
    return 0


def cmd_count_j(args, cfg, out):
    from .torsion import count_torsion, count_torsion_total, torsion_report

    if args.k is not None:
        emit(str(count_torsion(args.a, args.q, args.n, args.k)), out)
    elif args.all:
        emit(torsion_report(args.a, args.q, args.n), out)
    else:
        emit(str(count_torsion_total(args.a, args.q, args.n)), out)
    return 0


def cmd_count_J(args, cfg, out):
    from .torsion import count_tuples

    emit(str(count_tuples(_periods(args.periods), args.q, args.n)), out)
    return 0


def cmd_predict(args, cfg, out):
    from .modforms import predict_J, predict_j

    with mpmath.workdps(cfg.precision):
        if args.periods:
            pred = predict_J(_periods(args.periods), args.q, args.n, cfg.trunc, cfg.precision)
        else:
            pred = predict_j(args.a, args.q, args.n, args.k, cfg.trunc, cfg.precision)
        emit(pred.as_json(), out)
    return 0


def cmd_compare(args, cfg, out):
    from .modforms import compare_rows

    ns = list(range(args.n_min, args.n_max + 1, args.step))
    target = _periods(args.periods) if args.periods else args.a
    rows = compare_rows(target, args.q, ns, None if args.periods else args.k, cfg.trunc, cfg.precision)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "exact_count", "predicted_mantissa", "predicted_exponent", "ratio", "ratio_minus_one"])
    for r in rows:
        w.writerow([r["n"], r["exact_count"], r["predicted_mantissa"], r["predicted_exponent"],
                    mpmath.nstr(r["ratio"], 20), mpmath.nstr(r["ratio_minus_one"], 6)])
    emit(buf.getvalue(), out)
    return 0


def cmd_hom_predict(args, cfg, out):
    from .modforms import predict_hom_count

    sig = parse_signature(args.sig)
    with mpmath.workdps(cfg.precision):
        emit(predict_hom_count(sig, args.q, args.n, cfg.trunc, cfg.precision).as_json(), out)
    return 0


def cmd_dim(args, cfg, out):
    from .dimension import hom_variety_dim, hom_variety_dim_oracle

    sig = parse_signature(args.sig)
    res = hom_variety_dim(sig, args.n)
    if cfg.format == "text" and not args.oracle:
        emit(str(res.dimension), out)
        return 0
    data = res.as_json()
    if args.oracle:
        data["oracle"] = hom_variety_dim_oracle(sig, args.n)
        data["agrees"] = data["oracle"] == res.dimension
    emit(data, out)
    return 0 if data.get("agrees", True) else 1


def cmd_alpha(args, cfg, out):
    from .dimension import alpha_levi

    shape = _periods(args.shape)
    alpha, witness = alpha_levi(shape)
    emit({"shape": list(shape), "alpha": alpha, "witness": [list(p) for p in witness]}, out)
    return 0


def cmd_hurwitz(args, cfg, out):
    from .characters import compute_character_table, load_character_table
    from .groups import general_linear_group, symmetric_group
    from .hurwitz import brute_force_hom_count, total_hom_count

    sig = parse_signature(args.sig)
    G = None
    if args.table:
        table = load_character_table(args.table)
    else:
        if args.group == "gl":
            if args.n is None or args.q is None:
                raise ParseError("--group gl needs --n and --q")
            G = general_linear_group(args.n, args.q)
        else:
            G = symmetric_group(args.m)
        table = compute_character_table(G, cfg.precision)
    data = {"signature": str(sig), "group_order": table.group_order, "classes": table.num_classes,
            "degrees": table.degrees(), "total_hom_count": str(total_hom_count(table, sig))}
    if args.brute_force and G is not None:
        data["brute_force_hom_count"] = str(brute_force_hom_count(G, sig))
        data["agrees"] = data["brute_force_hom_count"] == data["total_hom_count"]
    emit(data, out)
    return 0 if data.get("agrees", True) else 1


def _store(cfg, args):
    from .verifier import CertificateStore

    return CertificateStore(None if args.no_cache else cfg.cache_dir, gate=args.gate)


def cmd_verify(args, cfg, out):
    from . import verifier as V

    store = _store(cfg, args)
    if args.what == "table":
        a_values = list(range(2, args.a_max + 1))
        if args.samples:
            a_values += [a for a in V.TABLE_SAMPLES if a > args.a_max]
        rows = V.verify_table(a_values, store)
        ok = all(r["pass"] for r in rows)
        if cfg.format == "text":
            lines = [f"a={r['a']}\tbound={float(r['certified_bound']):.6f}\trequired={float(r['required'])}"
                     f"\t{'ok' if r['pass'] else 'FAIL'}" for r in rows]
            emit("\n".join(lines), out)
        else:
            emit({"rows": rows, "pass": ok}, out)
        return 0 if ok else 1
    if args.what == "triples":
        eps = Fraction(args.eps).limit_denominator(10**12)
        rep = V.scan_genus0(args.max_a3, eps, args.depth, args.gate, cfg.jobs, store)
        emit(rep.to_json(), out)
        return 0 if rep.matches_expected else 1
    if args.what == "positive-genus":
        rep = V.check_positive_genus(store=store)
        emit(rep, out)
        return 0 if rep["pass"] else 1
    if args.what == "dumb":
        rep = V.check_dumb_bound(args.a_max, store)
        emit({k: v for k, v in rep.items() if k != "rows"}, out)
        return 0 if rep["pass"] else 1
    raise ParseError(f"unknown verify target {args.what!r}")


def cmd_selftest(args, cfg, out):
    from .selftest import run_selftest

    report = run_selftest(args.level, cfg)
    emit(report, out)
    return 0 if report["pass"] else 1


def cmd_cache(args, cfg, out):
    if args.action == "clear":
        emit({"removed": clear(cfg.cache_dir)}, out)
    else:
        emit({"cache_dir": str(cfg.cache_dir), "entries": [p.name for p in list_entries(cfg.cache_dir)]}, out)
    return 0


# ------------------------------------------------------------------ parser


def _add_common(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--config", default=default, help="flat key=value configuration file")
    p.add_argument("--cache-dir", dest="cache_dir", default=default,
                   help="cache directory (default $FGC_CACHE or ~/.cache/fgc)")
    p.add_argument("--precision", type=int, default=default, help="decimal digits for high-precision values (default 50)")
    p.add_argument("--trunc", type=int, default=default, help="series truncation in exponent units (default 200)")
    p.add_argument("--jobs", type=int, default=default, help="worker processes (default 1)")
    p.add_argument("--format", choices=["json", "csv", "text"], default=default, help="output format")
    p.add_argument("--out", default=default, help="write the report here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true", default=default or False)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fgc", description="Counting and dimension tools for Fuchsian group representations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_common(p, None)
    # the same options are accepted after the subcommand name
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)
    _add_parser = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add_parser(*a, parents=[common], **kw)

    s = sub.add_parser("orbits", help="Frobenius orbits of i -> q i mod a")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("count-j", help="torsion counts in GL_n(q)")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, help="determinant residue (omit for the total)")
    s.add_argument("--all", action="store_true", help="JSON report with every determinant residue")
    s.set_defaults(func=cmd_count_j)

    s = sub.add_parser("count-J", help="torsion tuples with determinant product 1")
    s.add_argument("--periods", required=True, help="comma-separated periods")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_count_J)

    for name, func in (("predict", cmd_predict), ("compare", cmd_compare)):
        s = sub.add_parser(name, help="modular-form prediction" if name == "predict" else "exact vs predicted CSV")
        s.add_argument("--a", type=int)
        s.add_argument("--k", type=int, default=0)
        s.add_argument("--periods", help="predict J for these periods instead of j")
        s.add_argument("--q", type=int, required=True)
        if name == "predict":
            s.add_argument("--n", type=int, required=True)
        else:
            s.add_argument("--n-min", dest="n_min", type=int, default=1)
            s.add_argument("--n-max", dest="n_max", type=int, required=True)
            s.add_argument("--step", type=int, default=1)
        s.set_defaults(func=func)

    s = sub.add_parser("hom-predict", help="predicted |Hom(Gamma, GL_n(q))|")
    s.add_argument("--sig", required=True, help="signature 'g;a1,...,ar'")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_hom_predict)

    s = sub.add_parser("dim", help="dimension of the representation variety")
    s.add_argument("--sig", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--oracle", action="store_true", help="also run the exhaustive optimal-tuple route")
    s.set_defaults(func=cmd_dim)

    s = sub.add_parser("alpha", help="alpha(L) for a split Levi shape")
    s.add_argument("--shape", required=True, help="block sizes, e.g. 3,1")
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("hurwitz", help="homomorphism counts via character tables")
    s.add_argument("--sig", required=True)
    s.add_argument("--table", help="character table JSON")
    s.add_argument("--group", choices=["gl", "sym"], default="gl")
    s.add_argument("--n", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--m", type=int, default=3, help="degree of the symmetric group")
    s.add_argument("--brute-force", dest="brute_force", action="store_true")
    s.set_defaults(func=cmd_hurwitz)

    s = sub.add_parser("verify", help="certified inequality checks")
    s.add_argument("what", choices=["table", "triples", "positive-genus", "dumb"])
    s.add_argument("--a-max", dest="a_max", type=int, default=99)
    s.add_argument("--samples", action="store_true", help="table: add the sampled large a")
    s.add_argument("--max-a3", dest="max_a3", type=int, default=500)
    s.add_argument("--eps", default="1e-4")
    s.add_argument("--depth", type=int, default=24)
    s.add_argument("--gate", choices=["proof", "statement"], default="proof")
    s.add_argument("--no-cache", dest="no_cache", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="oracle-equivalence suites")
    s.add_argument("level", nargs="?", choices=["quick", "full"], default="quick")
    s.set_defaults(func=cmd_selftest)

    s = sub.add_parser("cache", help="inspect or clear the cache")
    s.add_argument("action", choices=["list", "clear"])
    s.set_defaults(func=cmd_cache)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = build_config(args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"fgc: {exc}", file=sys.stderr)
        return 2
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        return args.func(args, cfg, out)
    except ParseError as exc:
        print(f"fgc: {exc}", file=sys.stderr)
        return 2
    except (FGCError, ArithmeticError, ValueError) as exc:
        print(f"fgc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    finally:
        if args.out:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
