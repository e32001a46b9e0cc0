"""Command-line front end: each subcommand runs one family of exact checks and writes a
versioned CSV table.  Exit status 0 when every verdict row passes, 1 when one fails,
2 on usage or configuration errors."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import colorings, ec_construction as ec, param_schedule as ps, transforms as tf
from .colorings import derive_seed
from .exact_solvers import solve as solve_graph, threshold_graph
from .metric_core import bowen, load_system, random_system, verify_metric_axioms
from .warmup_system import WarmupConfig, implication_check, warmup_experiment

CSV_VERSION = "v1"
EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

KINDS = ("warmup", "ec-sep", "ec-span", "amplify", "combine", "duplicate", "subshift", "rates",
         "coloring-search", "params-check")


class UsageError(Exception):
    pass


@dataclass
class Table:
    kind: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, *values, ok: bool) -> None:
        self.rows.append([_fmt(v) for v in values] + ["PASS" if ok else "FAIL"])

    @property
    def ok(self) -> bool:
        return all(r[-1] == "PASS" for r in self.rows)

    def render(self) -> str:
        buf = io.StringIO()
        buf.write(f"# bowen-lab csv {CSV_VERSION} kind={self.kind}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns + ["status"])
        w.writerows(self.rows)
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.6f}"
    if isinstance(v, (tuple, list)):
        return " ".join(_fmt(x) for x in v)
    if v is None:
        return ""
    return str(v)


# ------------------------------------------------------------ config parsing

def read_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    try:
        text = open(path).read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def int_list(text: str, what: str) -> list[int]:
    try:
        vals = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"{what}: expected integers, got {text!r}") from None
    if not vals:
        raise UsageError(f"{what}: empty list")
    if any(v < 1 for v in vals):
        raise UsageError(f"{what}: values must be positive")
    return vals


def frac_list(text: str, what: str) -> list[Fraction]:
    try:
        vals = [Fraction(x) for x in text.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what}: expected rationals, got {text!r}") from None
    if not vals:
        raise UsageError(f"{what}: empty list")
    return vals


def pmap(fn: Callable, items: Sequence, parallel: bool) -> list:
    """Ordered map; with parallel=True rows are computed in worker processes."""
    if parallel and len(items) > 1:
        with ProcessPoolExecutor() as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def load_params(path: str | None, default: ps.ParamSchedule) -> ps.ParamSchedule:
    if path is None:
        return default
    try:
        return ps.load_schedule(path)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"bad schedule file {path}: {exc}") from None


DEFAULT_EC = ((3, 3, 3), (2, 2, 1))


def default_ec_schedule() -> ps.ParamSchedule:
    return ps.surrogate_schedule(*DEFAULT_EC)


# ------------------------------------------------------------ subcommands

def cmd_params_check(args) -> Table:
    if args.faithful:
        s = ps.generate_faithful(args.faithful)
    else:
        s = load_params(args.params, default_ec_schedule())
    rep = ps.check_constraints(s)
    t = Table("params-check", ["constraint", "verdict", "detail", "waived"])
    for c in rep.checks:
        waived = rep.waived and c.name.startswith(("PC", "PK"))
        t.add(c.name, c.verdict, c.detail, waived, ok=c.ok or waived)
    t.notes.append(f"profile={s.profile} accepted={rep.accepted}")
    return t


def cmd_warmup(args) -> Table:
    cfg = WarmupConfig(args.t, seed=args.seed)
    horizons = int_list(args.horizons, "--horizons") if args.horizons is not None else list(range(1, cfg.Tplus + 1))
    eps = Fraction(args.eps) if args.eps else (cfg.delta0 + cfg.eps0) / 2
    res = warmup_experiment(cfg, eps, horizons)
    t = Table("warmup", ["T", "horizon", "eps", "sep", "span", "ln_sep_over_horizon", "superadditive", "reduction_ok"])
    for r in res.rows:
        ok = r.reduction_ok
        if r.horizon == cfg.Tplus:
            ok = ok and r.sep == r.span == 3 * cfg.T * 2 ** cfg.T
        t.add(cfg.T, r.horizon, eps, r.sep, r.span, r.ln_sep_over_horizon, r.superadditive, r.reduction_ok, ok=ok)
    t.notes.append(f"max <=2-chromatic subfamily {res.le2_max}; certified sep bound {res.sep_bound_certified}")
    t.notes.append(f"failure implication at T=60: {implication_check(60)}")
    return t


def cmd_coloring(args) -> Table:
    t = Table("coloring-search", ["n", "m", "guaranteed", "tries", "best_size", "found"])
    pairs = [(args.n, args.m)] if args.n else [(n, m) for m, n in _guaranteed_pairs()]
    for n, m in pairs:
        r = colorings.search_good_coloring(n, m, seed=args.seed, max_tries=args.max_tries)
        t.add(n, m, r.guaranteed, r.tries, r.best_size, r.found, ok=r.found or not r.guaranteed)
    return t


def _guaranteed_pairs():
    for m in range(8, 14):
        n = max(k for k in range(1, 200) if colorings.guaranteed_regime(k, m))
        yield m, n


def cmd_ec(args) -> Table:
    s = load_params(args.params, default_ec_schedule())
    depth = s.depth if args.depth is None else args.depth
    spec = ec.ec_spec(s, depth, seed=args.seed)
    try:
        ry = ec.build_ry(s, depth, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.action == "build-ry":
        rep = ec.verify_ry(ry)
        t = Table("ec-sep", ["check", "ok", "detail"])
        for name, ok in rep.properties.items():
            t.add(name, ok, rep.witnesses.get(name, ""), ok=ok)
        t.notes.append(f"family sizes {rep.sizes}")
        return t
    if args.action == "verify-sep":
        t = Table("ec-sep", ["level", "size", "pairs", "horizon", "failures", "witness_agree"])
        for n in range(depth + 1):
            v = ec.verify_Wn_separated(ry, n, spec)
            wt = ec.witness_table(ry, n, spec)
            agree = all(w.agree for w in wt)
            t.add(n, v.size, v.pairs, v.horizon, len(v.failures), agree, ok=v.ok and agree)
        return t
    if args.action == "verify-span":
        t = Table("ec-span", ["level", "size", "ambient", "cases", "violations"])
        for n in range(depth + 1):
            v = ec.verify_span_lower(ry, n, spec)
            cases = " ".join(f"{k}:{c}" for k, c in v.cases.items())
            t.add(n, v.size, v.ambient, cases, len(v.violations), ok=v.ok)
        return t
    # span-constructions
    t = Table("ec-span", ["target", "case", "delta", "horizon", "size", "size_bound", "spans", "exact_span"])
    dspec = ec.ec_spec(s.truncated(0), 0, style=colorings.CC1, seed=args.seed)
    pool = ec.product_slice(dspec, 2, range(dspec.Tplus(0)))
    h = dspec.Tplus(0)
    for dl in (dspec.eps_total + 1, dspec.eps_total, (dspec.eps_total + dspec.delta_total) / 2):
        r = ec.large_delta_construction(dspec, pool, dl, h)
        t.add(r.target, r.case, r.delta, r.horizon, r.size, r.size_bound, r.spans, r.exact_span, ok=r.ok)
    wpool = [ec.product_step(spec, ec.x_phi(spec, w), tau) for m in range(depth + 1)
             for w in ry.level(m) for tau in range(spec.Tplus(depth))]
    r = ec.window_lattice_construction(spec, wpool, spec.delta_total / 2, 2)
    t.add(r.target, r.case, r.delta, r.horizon, r.size, r.size_bound, r.spans, r.exact_span, ok=r.ok)
    r = ec.x_lower_construction(dspec, 2, 1)
    t.add(r.target, r.case, r.delta, r.horizon, r.size, r.size_bound, r.spans, r.exact_span, ok=r.ok)
    return t


# ------------------------------------------------------------ transform

def _amp_row(item):
    seed, size, A, T, dl = item
    base = random_system(size, seed)
    return tf.amplify(base, A, 1, dl, T)


def transform_amplify(cfg: dict, args) -> Table:
    alphabets = int_list(cfg.get("alphabets", "2,3"), "alphabets")
    horizons = int_list(cfg.get("horizons", "1,2"), "horizons")
    deltas = frac_list(cfg.get("deltas", "1/2,1/4"), "deltas")
    bases = int(cfg.get("bases", 5))
    size = int(cfg.get("base_size", 3))
    items = [(derive_seed(args.seed, "amplify", b), size, A, T, dl)
             for b in range(bases) for A in alphabets for T in horizons for dl in deltas]
    t = Table("amplify", ["base", "alphabet", "horizon", "delta", "window", "exponent", "base_sep", "base_span",
                          "product_sep", "product_span", "product_size"])
    for (sd, _, A, T, dl), r in zip(items, pmap(_amp_row, items, args.parallel)):
        t.add(sd, A, T, dl, r.window, r.exponent, r.base_sep, r.base_span, r.product_sep, r.product_span,
              r.product_size, ok=r.ok)
    return t


def transform_combine(cfg: dict, args) -> Table:
    gammas = frac_list(cfg.get("gammas", "1,1/3,1/9"), "gammas")
    sizes = int_list(cfg.get("block_sizes", " ".join(["3"] * len(gammas))), "block_sizes")
    horizons = int_list(cfg.get("horizons", "1,2,3"), "horizons")
    if len(sizes) != len(gammas):
        raise UsageError("block_sizes and gammas differ in length")
    try:
        blocks = [tf.scale(random_system(n, derive_seed(args.seed, "combine", i)), g)
                  for i, (n, g) in enumerate(zip(sizes, gammas))]
        space = tf.combine(blocks, gammas)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    deltas = frac_list(cfg["deltas"], "deltas") if "deltas" in cfg else tf.sample_deltas([bowen(space.system, 1)])
    t = Table("combine", ["horizon", "delta", "level", "sep", "span", "xi_sep", "xi_span", "block_sep", "block_span"])
    ax = verify_metric_axioms(space.system).ok
    t.add("", "", "axioms", "", "", "", "", "", "", ok=ax)
    for r in tf.combine_check(space, deltas, horizons):
        t.add(r.horizon, r.delta, r.level, r.sep, r.span, r.xi_sep, r.xi_span, r.block_sep, r.block_span, ok=r.ok)
    return t


def transform_duplicate(cfg: dict, args) -> Table:
    horizons = int_list(cfg.get("horizons", "1,2,3"), "horizons")
    if "x" in cfg or "y" in cfg:
        try:
            x_sys, y_sys = load_system(cfg["x"]), load_system(cfg["y"])
            f = _read_bijection(cfg["f"], x_sys.size)
            alpha = Fraction(cfg["alpha"])
        except KeyError as exc:
            raise UsageError(f"duplicate config needs {exc.args[0]}") from None
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        instances = [("file", x_sys, y_sys, f, alpha)]
    else:
        instances = default_duplication_instances(args.seed)
    t = Table("duplicate", ["instance", "horizon", "delta", "sep_union", "sep_y", "span_union", "span_x", "alpha"])
    for name, x_sys, y_sys, f, alpha in instances:
        try:
            space = tf.duplicate(x_sys, y_sys, f, alpha)
        except ValueError as exc:
            t.add(name, "", "", "", "", "", "", alpha, ok=False)
            t.notes.append(f"{name}: {exc}")
            continue
        rep = tf.duplication_report(space, horizons)
        t.add(name, "", "axioms+diameter", "", "", "", "", alpha, ok=rep.axioms_ok and rep.diameter_ok)
        for r in rep.rows:
            t.add(name, r.horizon, r.delta, r.sep_union, r.sep_y, r.span_union, r.span_x, alpha, ok=r.ok(alpha))
    return t


def default_duplication_instances(seed: int) -> list:
    out = []
    for i in range(4):
        y = random_system(4 + i, derive_seed(seed, "dup", i))
        perm = list(range(y.size))
        perm = perm[1:] + perm[:1]
        d = tf.diameter(y)
        rows = tf.truncated_copy(y, Fraction(5, 8)).dist if i % 2 == 0 else [[v * Fraction(3, 4) for v in r]
                                                                             for r in y.dist]
        x = tf.pulled_back(y, perm, rows)
        out.append((f"random{i}", x, y, perm, d * Fraction(3, 4)))
    inst, alpha = tf.ec23_instance(seed)
    out.append(("ec23", inst.x_sys, inst.y_sys, inst.f, alpha))
    return out


def _read_bijection(path: str, n: int) -> list[int]:
    f = {}
    for raw in open(path).read().splitlines():
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if line[0] != "f" or len(line) != 3:
            raise ValueError(f"bijection lines read 'f i j', got {raw!r}")
        f[int(line[1])] = int(line[2])
    if sorted(f) != list(range(n)):
        raise ValueError("bijection must list every X point")
    return [f[i] for i in range(n)]


SHIFTS = {"full": tf.FULL_SHIFT, "golden": tf.GOLDEN_MEAN, "fixed": tf.Subshift(2, ((1,),))}


def transform_subshift(cfg: dict, args) -> Table:
    names = cfg.get("shifts", "full,golden,fixed").replace(",", " ").split()
    horizons = int_list(cfg.get("horizons", "1,2,3,4"), "horizons")
    epss = frac_list(cfg.get("eps", "1,1/2,1/4"), "eps")
    k = int(cfg.get("k", 2))
    t = Table("subshift", ["shift", "k", "horizon", "eps", "depth", "cylinders", "cov", "sep", "span"])
    for name in names:
        if name not in SHIFTS:
            raise UsageError(f"unknown shift {name!r}; choose from {sorted(SHIFTS)}")
        for T in horizons:
            for e in epss:
                r = tf.subshift_equality(SHIFTS[name], k, T, e)
                t.add(name, k, T, e, r.depth, r.cylinders, r.cov, r.sep, r.span, ok=r.ok)
    return t


TRANSFORMS = {"amplify": transform_amplify, "combine": transform_combine,
              "duplicate": transform_duplicate, "subshift": transform_subshift}


def cmd_transform(args) -> Table:
    return TRANSFORMS[args.action](read_config(args.params), args)


def cmd_rates(args) -> Table:
    if args.params:
        s = load_params(args.params, None)
    else:
        s = ps.generate_faithful(1, with_eps=False)
    t = Table("rates", ["level", "lower_rate", "upper_rate_hi", "relaxed_upper_hi", "pk5", "step_ok"])
    for r in ps.rate_rows(s):
        t.add(r.level, r.lower_rate_log2, float(r.upper_rate_log2_hi), float(r.upper_via_pk5_hi), r.pk5, r.step_ok,
              ok=r.step_ok)
    upper, lower, strict = ps.final_gap()
    t.add("final", lower, upper, "", "", strict, ok=strict)
    t.notes.append(f"lower rate {float(lower)} ln 2 vs upper rate {float(upper)} ln 2: "
                   f"{'strict' if strict else 'NOT strict'}")
    return t


def cmd_solve(args) -> Table:
    try:
        s = load_system(args.system)
        eps = Fraction(args.eps)
    except (OSError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    if args.horizon < 1 or eps <= 0:
        raise UsageError("need a positive horizon and eps")
    g = threshold_graph(bowen(s, args.horizon), eps)
    value, witness = solve_graph(g, args.which)
    t = Table("solve", ["which", "eps", "horizon", "value", "witness"])
    t.add(args.which, eps, args.horizon, value, witness, ok=True)
    print(value)
    print(_fmt(witness))
    return t


# ------------------------------------------------------------ entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="key=value parameter file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="CSV output path (default: stdout)")
    common.add_argument("--parallel", action="store_true")
    p = argparse.ArgumentParser(prog="bowen-lab", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("params-check", parents=[common])
    q.add_argument("--faithful", type=int, default=0, help="generate a faithful schedule with this many levels")

    q = sub.add_parser("warmup", parents=[common])
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--horizons")
    q.add_argument("--eps")

    q = sub.add_parser("coloring", parents=[common])
    q.add_argument("--n", type=int, default=0)
    q.add_argument("--m", type=int, default=0)
    q.add_argument("--max-tries", type=int, default=100)

    q = sub.add_parser("ec", parents=[common])
    q.add_argument("action", choices=["build-ry", "verify-sep", "verify-span", "span-constructions"])
    q.add_argument("--depth", type=int)

    q = sub.add_parser("transform", parents=[common])
    q.add_argument("action", choices=sorted(TRANSFORMS))

    sub.add_parser("rates", parents=[common])

    q = sub.add_parser("solve", parents=[common])
    q.add_argument("--system", required=True)
    q.add_argument("--which", choices=["sep", "span", "cov"], required=True)
    q.add_argument("--eps", required=True)
    q.add_argument("--horizon", type=int, default=1)
    return p


COMMANDS = {"params-check": cmd_params_check, "warmup": cmd_warmup, "coloring": cmd_coloring, "ec": cmd_ec,
            "transform": cmd_transform, "rates": cmd_rates, "solve": cmd_solve}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        if args.command == "warmup" and args.t < 1:
            raise UsageError("--t must be positive")
        if args.command == "coloring" and bool(args.n) != bool(args.m):
            raise UsageError("--n and --m go together")
        table = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"bowen-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = table.render()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    elif args.command != "solve":
        sys.stdout.write(text)
    for note in table.notes:
        print(f"# {note}", file=sys.stderr)
    failed = sum(1 for r in table.rows if r[-1] != "PASS")
    print(f"# {table.kind}: {len(table.rows) - failed} PASS, {failed} FAIL", file=sys.stderr)
    return EXIT_PASS if table.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
