"""Command-line interface.

Reports go to standard output and diagnostics to standard error. Exit codes:
0 success, 1 usage error, 2 state-invariant violation, 3 infeasible request.

Global flags may also be set through environment variables named
``COLLECTIVE_WITNESS_<FLAG>`` (for example ``COLLECTIVE_WITNESS_SEED``);
a flag on the command line takes precedence.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import reproduce as _reproduce
from .errors import (
    CollectiveWitnessError,
    DegenerateK,
    InfeasibleLevel,
    InvalidParams,
    NegativeZeta,
    ThicknessHypothesisViolated,
)
from .io import load_state, save_state
from .moments import variance
from .observables import h_coll, local_operators
from .quantifiers import OptConfig, f_cr_estimate, f_pure, f_r, f_s_estimate, thickness
from .spectral import evenly_spaced, qubit, spectral_support
from .states import (
    Ensemble,
    PureState,
    depolarized_ghz,
    ghz_like,
    ghz_mix,
    gaussian_grid_state,
    random_density,
    sample,
    sample_k_separable,
    tolerances,
)
from .witnesses import bound_table, certify, k_for_f, k_of_zeta, zeta_for_f, zeta_of_k

ENV_PREFIX = "COLLECTIVE_WITNESS_"
EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_INFEASIBLE = 0, 1, 2, 3

GLOBALS = {
    # flag: (type, default)
    "seed": (int, 0),
    "tol_norm": (float, None),
    "tol_eig": (float, None),
    "restarts": (int, None),
    "threads": (int, 1),
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _global_parent() -> argparse.ArgumentParser:
    # SUPPRESS lets a flag appear before or after the subcommand without the
    # subparser's default clobbering the main parser's value.
    parent = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    g = parent.add_argument_group("global options")
    g.add_argument("--seed", type=int, help="RNG seed for sampling and optimizer restarts (default 0)")
    g.add_argument("--tol-norm", type=float, help="norm/trace tolerance for state files (default 1e-9)")
    g.add_argument("--tol-eig", type=float, help="negative-eigenvalue tolerance (default 1e-10)")
    g.add_argument("--restarts", type=int, help="optimizer restarts for F_S and F_CR")
    g.add_argument("--threads", type=int, help="worker threads for F_CR restarts (default 1)")
    return parent


def _resolve_globals(ns, environ) -> dict:
    out = {}
    for name, (kind, default) in GLOBALS.items():
        if hasattr(ns, name):
            out[name] = getattr(ns, name)
            continue
        raw = environ.get(ENV_PREFIX + name.upper())
        if raw is None or raw == "":
            out[name] = default
            continue
        try:
            out[name] = kind(raw)
        except ValueError:
            raise _UsageError(f"bad value for {ENV_PREFIX + name.upper()}: {raw!r}") from None
    return out


def _opt_config(g) -> OptConfig:
    return OptConfig(restarts=g["restarts"], seed=g["seed"], threads=max(1, g["threads"]))


def _parse_signs(text, n):
    if text is None:
        return None
    signs = [float(v) for v in text.split(",")]
    if len(signs) != n:
        raise InvalidParams(f"--signs needs {n} entries, got {len(signs)}")
    return signs


def _fmt(x) -> str:
    return f"{x:.12g}"


# ----------------------------------------------------------------------------
# describe / certify


def _describe_lines(state, signs, cfg, roof: bool) -> list:
    n = state.n
    lines = [f"n = {n}, spectrum = {list(state.obs.spectrum)}"]
    if isinstance(state, Ensemble):
        members = state.members
        avg = sum(p * f_pure(s, signs) for p, s in members)
        lines.append(f"ensemble of {len(members)} members; sum_i p_i F(psi_i) = {_fmt(avg)} "
                     f"(upper bound on F_CR)")
        rho = state.density()
    else:
        rho = state
    probs = rho.probabilities()
    lines.append(f"norm check: sum of probabilities = {_fmt(probs.sum())}")
    local = [variance(rho, op) for op in local_operators(rho.obs, n)]
    lines.append("per-party variances: " + ", ".join(_fmt(v) for v in local))
    lines.append(f"Var(H_coll) = {_fmt(variance(rho, h_coll(rho.obs, n, signs)))}")
    if isinstance(state, PureState):
        f = f_pure(state, signs)
        lines.append(f"F = {_fmt(f)}")
        f_cert = f
    else:
        r = f_r(rho, signs, zero_tol=cfg.zero_tol)
        s = f_s_estimate(rho, signs, cfg)
        lines.append(f"F_R = {_fmt(r.estimate)} (exact)")
        tag = "exact" if s.certified_exact else "estimate"
        lines.append(f"F_S = {_fmt(s.estimate)} ({tag}; bracket [{_fmt(s.lower)}, {_fmt(s.upper)}])")
        f_cert = max(r.estimate, s.certified_lower)
        if roof:
            c = f_cr_estimate(rho, signs, cfg)
            tag = "converged to lower bound" if c.certified_exact else "upper estimate"
            lines.append(f"F_CR = {_fmt(c.estimate)} ({tag}; bracket [{_fmt(c.lower)}, {_fmt(c.upper)}], "
                         f"{c.details.get('restarts_run', 0)} restarts)")
    if f_cert <= n + 1e-9:
        lines.append(f"F <= n = {n}: no entanglement witnessed")
    th = thickness(rho)
    lines.append(f"zeta_hat = {_fmt(th.zeta_hat)}" if th.defined
                 else "zeta_hat = undefined (Var(P_1) vanishes)")
    lines.append(f"support size = {len(spectral_support(rho))} of {rho.obs.dim ** n} grid points")
    return lines


def _certified_f(state, signs, cfg):
    if isinstance(state, PureState):
        return f_pure(state, signs), "F (pure)"
    rho = state.density() if isinstance(state, Ensemble) else state
    r = f_r(rho, signs, zero_tol=cfg.zero_tol)
    s = f_s_estimate(rho, signs, cfg)
    if s.certified_exact and s.estimate > r.estimate:
        return s.estimate, "F_S (certified)"
    return r.estimate, "F_R"


def cmd_describe(args, g, out) -> int:
    state = load_state(args.state)
    signs = _parse_signs(args.signs, state.n)
    for line in _describe_lines(state, signs, _opt_config(g), args.roof):
        print(line, file=out)
    return EXIT_OK


def cmd_certify(args, g, out) -> int:
    state = load_state(args.state)
    signs = _parse_signs(args.signs, state.n)
    zeta_hat = None
    if args.zeta is not None:
        if not isinstance(state, PureState):
            raise ThicknessHypothesisViolated(
                "the thickness-adjusted bounds are stated for pure states; drop --zeta for mixed input")
        th = thickness(state)
        if not th.defined:
            raise ThicknessHypothesisViolated("zeta_hat is undefined for this state (Var(P_1) = 0)")
        zeta_hat = th.zeta_hat
    f, source = _certified_f(state, signs, _opt_config(g))
    verdict = certify(f, state.n, args.zeta, zeta_hat, source)
    print(verdict.summary(), file=out)
    print(f"source: {source}; n = {state.n}", file=out)
    return EXIT_OK


# ----------------------------------------------------------------------------
# sweep


def parse_grid(text: str) -> list:
    """``start:stop:count`` (inclusive, evenly spaced) or a comma list."""
    if ":" in text:
        try:
            a, b, c = text.split(":")
            count = int(c)
            start, stop = float(a), float(b)
        except ValueError:
            raise InvalidParams(f"bad grid {text!r}; expected start:stop:count") from None
        if count < 1:
            raise InvalidParams("grid count must be positive")
        # round-trip through repr-friendly values (0.1 rather than 0.1000000000000000055)
        return [float(np.round(v, 12)) for v in np.linspace(start, stop, count)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidParams(f"bad grid {text!r}") from None


def _num(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return str(int(x)) if x.is_integer() and abs(x) < 2 ** 53 else repr(x)


SWEEP_COLUMNS = {
    "k_of_zeta": ("n", "zeta", "k", "feasible"),
    "zeta_of_k": ("n", "k", "zeta", "feasible"),
    "zeta_for_f": ("n", "f", "k", "zeta", "feasible"),
    "k_for_f": ("n", "f", "zeta", "k", "feasible"),
    "bound_table": ("k", "floor", "linear"),
}


def sweep_rows(mode: str, n: int, grid: list | None, f: float | None = None,
               zeta: float | None = None) -> tuple:
    """Header and rows for a sweep; infeasible points get an empty value and ``feasible = 0``."""
    if mode not in SWEEP_COLUMNS:
        raise InvalidParams(f"unknown sweep mode {mode!r}")
    if n < 1:
        raise InvalidParams("n must be positive")
    header = SWEEP_COLUMNS[mode]
    if mode == "bound_table":
        table = bound_table(n, zeta)
        if zeta is None:
            return header, [(k, fl, lin) for k, fl, lin, _, _ in table.rows]
        return (header + ("thick_floor", "thick_linear"),
                [tuple(r) for r in table.rows])
    if mode in ("zeta_for_f", "k_for_f") and f is None:
        raise InvalidParams(f"mode {mode} needs --f")
    if grid is None:
        grid = list(range(1, n + 1)) if mode in ("zeta_of_k", "zeta_for_f") else parse_grid("0:1:11")

    def solve(x):
        if mode == "k_of_zeta":
            return k_of_zeta(n, x)
        if mode == "zeta_of_k":
            return zeta_of_k(n, x)
        if mode == "zeta_for_f":
            return zeta_for_f(n, x, f)
        return k_for_f(n, x, f)

    rows = []
    for x in grid:
        try:
            y, ok = solve(x), 1
        except (InfeasibleLevel, DegenerateK, NegativeZeta):
            y, ok = None, 0
        prefix = (n,) if mode in ("k_of_zeta", "zeta_of_k") else (n, f)
        rows.append(prefix + (x, y, ok))
    return header, rows


def render_csv(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else _num(v) for v in row])
    return buf.getvalue()


def cmd_sweep(args, g, out) -> int:
    grid = parse_grid(args.grid) if args.grid else None
    if grid is not None and args.mode in ("zeta_of_k", "zeta_for_f"):
        grid = [int(v) if float(v).is_integer() else v for v in grid]
    header, rows = sweep_rows(args.mode, args.n, grid, args.f, args.zeta)
    text = render_csv(header, rows)
    if args.out in (None, "-"):
        out.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        bad = sum(1 for r in rows if len(r) > 3 and r[-1] == 0)
        print(f"wrote {len(rows)} rows to {args.out}" + (f" ({bad} infeasible)" if bad else ""),
              file=sys.stderr)
    return EXIT_OK


# ----------------------------------------------------------------------------
# reproduce / sample


def cmd_reproduce(args, g, out) -> int:
    fn = _reproduce.TARGETS[args.target]
    rows = fn(_opt_config(g)) if args.target == "appendixD" else (
        fn(g["seed"]) if args.target == "popoviciu" else fn())
    print(_reproduce.format_table(rows), file=out)
    return EXIT_OK


def _spectrum(args):
    if args.spectrum:
        from .spectral import make_local_observable
        return make_local_observable([float(v) for v in args.spectrum.split(",")])
    d = args.d
    if d < 2:
        raise InvalidParams("--d must be at least 2")
    return qubit() if d == 2 else evenly_spaced(d, spacing=2.0 / (d - 1))


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidParams(f"{args.kind} needs {', '.join(missing)}")


def build_sample(args, seed: int):
    """The state requested by ``sample``, plus an optional sidecar document."""
    kind = args.kind
    if kind == "ghz":
        _need(args, "n")
        return ghz_like(_spectrum(args), args.n), None
    if kind == "ksep":
        _need(args, "n", "k")
        state, parts = sample_k_separable(_spectrum(args), args.n, args.k, seed)
        return state, {"n": args.n, "k": args.k, "seed": seed, "blocks": list(parts)}
    if kind in ("haar", "product"):
        _need(args, "n")
        return sample(kind, _spectrum(args), args.n, seed=seed), None
    if kind == "gaussian":
        _need(args, "points", "sum_width", "diff_width")
        obs = evenly_spaced(args.points, spacing=args.spacing)
        return gaussian_grid_state(obs, args.sum_width, args.diff_width), None
    if kind == "depolarized":
        _need(args, "n", "eps")
        return depolarized_ghz(args.n, args.eps), None
    if kind == "ghzmix":
        _need(args, "n", "eps")
        return ghz_mix(args.n, args.eps), None
    if kind == "density":
        _need(args, "n")
        return random_density(_spectrum(args), args.n, args.rank, seed), None
    raise InvalidParams(f"unknown sample kind {kind!r}")


def sidecar_path(path) -> Path:
    path = Path(path)
    name = path.name
    for suffix in (".state.json", ".json"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
            break
    return path.with_name(name + ".partition.json")


def cmd_sample(args, g, out) -> int:
    state, sidecar = build_sample(args, g["seed"])
    save_state(state, args.out)
    print(f"wrote {args.kind} state (n = {state.n}, d = {state.obs.dim}) to {args.out}", file=out)
    if sidecar is not None:
        side = sidecar_path(args.out)
        side.write_text(json.dumps(sidecar) + "\n", encoding="utf-8", newline="\n")
        print(f"partition {sidecar['blocks']} recorded in {side}", file=out)
    return EXIT_OK


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parent = _global_parent()
    parser = _Parser(prog="collective-witness", parents=[parent],
                     description="Collective-variance entanglement quantifier and depth witnesses.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("describe", parents=[parent], help="report F, brackets and thickness of a state file")
    p.add_argument("state")
    p.add_argument("--signs", help="comma-separated coefficients c_i (default all +1)")
    p.add_argument("--roof", action="store_true", help="also run the convex-roof search (mixed input)")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("certify", parents=[parent], help="certified entanglement depth of a state file")
    p.add_argument("state")
    p.add_argument("--zeta", type=float, help="assume thickness >= zeta (pure states only)")
    p.add_argument("--signs")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", parents=[parent], help="k / zeta / f trade-off tables as CSV")
    p.add_argument("mode", choices=sorted(SWEEP_COLUMNS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", help="start:stop:count or comma list (zeta for k_of_zeta/k_for_f, k otherwise)")
    p.add_argument("--f", type=float, help="level for zeta_for_f and k_for_f")
    p.add_argument("--zeta", type=float, help="thickness columns for bound_table")
    p.add_argument("--out", help="CSV path (default standard output)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce", parents=[parent], help="closed-form reproduction tables")
    p.add_argument("target", choices=sorted(_reproduce.TARGETS))
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sample", parents=[parent], help="write a state file")
    p.add_argument("kind", choices=["ghz", "ksep", "haar", "product", "gaussian", "depolarized",
                                    "ghzmix", "density"])
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=2, help="local dimension; spectrum evenly spaced on [-1, 1]")
    p.add_argument("--spectrum", help="explicit comma-separated local eigenvalues (overrides --d)")
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--rank", type=int)
    p.add_argument("--points", type=int)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--sum-width", type=float)
    p.add_argument("--diff-width", type=float)
    p.set_defaults(func=cmd_sample)
    return parser


def _exit_code(exc: CollectiveWitnessError) -> int:
    if isinstance(exc, (InfeasibleLevel, DegenerateK, ThicknessHypothesisViolated)):
        return EXIT_INFEASIBLE
    if isinstance(exc, InvalidParams):
        return EXIT_USAGE
    return EXIT_INVARIANT


def main(argv=None, out=None, environ=None) -> int:
    out = sys.stdout if out is None else out
    environ = os.environ if environ is None else environ
    try:
        args = build_parser().parse_args(argv)
        g = _resolve_globals(args, environ)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        with tolerances(g["tol_norm"], g["tol_eig"]):
            return args.func(args, g, out)
    except CollectiveWitnessError as exc:
        code = _exit_code(exc)
        kind = {EXIT_USAGE: "usage error", EXIT_INVARIANT: "invalid state",
                EXIT_INFEASIBLE: "refused"}[code]
        print(f"{kind}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
