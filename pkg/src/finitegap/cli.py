"""Command-line entry point: `finitegap <command> ...`.

Exit codes: 0 success, 1 invalid input, 2 solver warning, 3 failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Sequence

from . import pic_lattice as pl
from . import plane_geometry as pg
from . import suites
from . import type_arith as ta
from .config import ToleranceConfig
from .dg_solver import SolveReport, solve, solve_x_only
from .elliptic_core import lattice_from_periods, wp, wp_prime

EXIT_OK, EXIT_INPUT, EXIT_WARNING, EXIT_VERIFY = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    periods: tuple[complex, complex] | None = None  # half-periods (omega_a, omega_b)
    e: tuple | None = None
    alpha: tuple[int, ...] | None = None
    mu: tuple[int, ...] | None = None
    d: int = 2
    tolerances: dict = field(default_factory=dict)
    linear_weights: bool = False
    format: str = "json"
    csv_path: str | None = None
    seed: int = 0

    def tolerance(self) -> ToleranceConfig:
        kw = dict(self.tolerances)
        if self.linear_weights:
            kw["linear_weights"] = True
        try:
            return ToleranceConfig().with_overrides(**kw)
        except (TypeError, ValueError) as exc:
            raise InputError(str(exc)) from None


# parsing ------------------------------------------------------------------------------

def _ints(text: str) -> tuple[int, ...]:
    try:
        v = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None
    if len(v) != 4:
        raise InputError(f"expected four entries, got {text!r}")
    return v


def _number(text: str):
    text = text.strip()
    for kind in (int, Fraction):
        try:
            return kind(text)
        except ValueError:
            pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise InputError(f"not a number: {text!r}") from None


def _periods(text: str) -> tuple[complex, complex]:
    try:
        v = [float(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"--periods expects re_a,im_a,re_b,im_b, got {text!r}") from None
    if len(v) != 4:
        raise InputError("--periods expects four numbers re_a,im_a,re_b,im_b")
    return complex(v[0], v[1]), complex(v[2], v[3])


def _e(text: str) -> tuple:
    v = tuple(_number(x) for x in text.split(","))
    if len(v) != 3:
        raise InputError("--e expects three branch values")
    return v


def build_config(args: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config: {exc}") from None
        unknown = set(base) - {f.name for f in fields(RunConfig)}
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig()
    if "periods" in base:
        cfg.periods = _periods(",".join(str(x) for x in base["periods"]))
    if "e" in base:
        cfg.e = _e(",".join(str(x) for x in base["e"]))
    for key in ("alpha", "mu"):
        if key in base:
            setattr(cfg, key, _ints(",".join(str(x) for x in base[key])))
    for key in ("d", "seed"):
        if key in base:
            setattr(cfg, key, int(base[key]))
    for key in ("tolerances", "linear_weights", "format", "csv_path"):
        if key in base:
            setattr(cfg, key, base[key])
    # flags override the file
    if getattr(args, "periods", None):
        cfg.periods = _periods(args.periods)
    if getattr(args, "e", None):
        cfg.e = _e(args.e)
    if getattr(args, "alpha", None):
        cfg.alpha = _ints(args.alpha)
    if getattr(args, "mu", None):
        cfg.mu = _ints(args.mu)
    if getattr(args, "d", None) is not None:
        cfg.d = args.d
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "linear_weights", False):
        cfg.linear_weights = True
    if getattr(args, "format", None):
        cfg.format = args.format
    if getattr(args, "csv", None):
        cfg.csv_path = args.csv
    if cfg.format not in ("json", "csv", "pretty"):
        raise InputError(f"unknown format {cfg.format!r}")
    return cfg


def _one_of(cfg: RunConfig, *, allow_mu: bool = True, allow_alpha: bool = True):
    given = [k for k in ("alpha", "mu") if getattr(cfg, k) is not None]
    allowed = [k for k, ok in (("alpha", allow_alpha), ("mu", allow_mu)) if ok]
    if len(allowed) == 1 and given != allowed:
        raise InputError(f"this command takes --{allowed[0]} only")
    if len(given) != 1:
        raise InputError("give exactly one of --alpha / --mu")
    return given[0]


def _alpha_to_mu(alpha) -> tuple[ta.TypeVector, list]:
    try:
        return ta.c_map_inverse(alpha)
    except (ValueError, RuntimeError) as exc:
        raise InputError(str(exc)) from None


# commands ------------------------------------------------------------------------------

@dataclass
class Outcome:
    report: dict
    rows: list[dict] = field(default_factory=list)
    code: int = EXIT_OK


def _c(v) -> list | None:
    return None if v is None else [complex(v).real, complex(v).imag]


def _spectral_summary(alpha, d: int) -> dict:
    mu, pairs = _alpha_to_mu(alpha)
    out = {"mu": list(mu.v), "jk": [list(p) for p in pairs], "g_alpha": str(ta.g_alpha(alpha)),
           "generic_gap": ta.generic_gap(alpha), "degree_n": ta.degree_of(mu, d)}
    if d == 2:
        strata = ta.spectral_enumeration(alpha)
        out["strata"] = [s.to_json() for s in strata]
        out["expected_count"] = sum(s.count for s in strata)
    return out


def cmd_solve(cfg: RunConfig) -> Outcome:
    _one_of(cfg, allow_mu=False)
    if cfg.d not in (0, 1, 2):
        raise InputError("solve supports d in {0, 1, 2}")
    if cfg.periods is not None and cfg.e is not None:
        raise InputError("give exactly one of --periods / --e")
    if cfg.periods is None and cfg.e is None and cfg.d != 0:
        raise InputError("give exactly one of --periods / --e")
    tol = cfg.tolerance()
    try:
        alpha = ta.as_alpha(cfg.alpha)
        if cfg.periods is None and cfg.e is None:
            # no poles, so nothing depends on the lattice
            rep = SolveReport(alpha, 0, None, (), [], [], "none")
        elif cfg.periods is not None:
            L = lattice_from_periods(*cfg.periods, tol)
            rep: SolveReport = solve(alpha, L, cfg.d, tol, cfg.seed)
        else:
            rep = solve_x_only(alpha, cfg.e, cfg.d, tol, cfg.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = rep.to_json()
    report["notices"] = [w for w in rep.warnings if "without periods" in w]
    report["warnings"] = [w for w in rep.warnings if "without periods" not in w]
    report["degree"] = (ta.sq(alpha) + sum(alpha)) // 2 + 2 * cfg.d
    report["spectral"] = _spectral_summary(alpha, cfg.d)
    rows = []
    for i, s in enumerate(rep.solutions):
        row = {"index": i}
        for name in ("x", "y", "rho1", "rho2"):
            v = getattr(s, name)
            row[f"{name}_re"], row[f"{name}_im"] = (None, None) if v is None else (v.real, v.imag)
        row["max_residual"] = max(s.residuals) if s.residuals else None
        row["multiplicity"] = s.multiplicity
        rows.append(row)
    return Outcome(report, rows, EXIT_WARNING if report["warnings"] else EXIT_OK)


def _mu_from(cfg: RunConfig) -> ta.TypeVector:
    key = _one_of(cfg)
    if key == "mu":
        try:
            return ta.as_t0(cfg.mu)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return _alpha_to_mu(cfg.alpha)[0]


def cmd_count(cfg: RunConfig) -> Outcome:
    mu = _mu_from(cfg)
    try:
        sv = ta.severi_count(mu, cfg.d)
        rc = ta.recursion_count(mu, cfg.d)
    except (ta.UnsupportedDepth, KeyError) as exc:
        raise InputError(str(exc).strip("'\"")) from None
    st = ta.mu_stats(mu)
    report = {"mu": list(mu.v), "d": cfg.d, "I0": st.I0, "I1": st.I1, "degree_n": ta.degree_of(mu, cfg.d),
              "severi_count": sv, "recursion_count": rc, "count": sv}
    if cfg.alpha is not None:
        report["alpha"] = list(ta.as_alpha(cfg.alpha))
        if cfg.d == 2:
            strata = ta.spectral_enumeration(cfg.alpha)
            report["strata"] = [s.to_json() for s in strata]
            report["count"] = sum(s.count for s in strata)
    rows = [{"mu": " ".join(map(str, mu.v)), "d": cfg.d, "severi_count": sv, "recursion_count": rc,
             "count": report["count"]}]
    return Outcome(report, rows)


def cmd_spectral(cfg: RunConfig) -> Outcome:
    _one_of(cfg, allow_mu=False)
    strata = ta.spectral_enumeration(ta.as_alpha(cfg.alpha))
    report = {"alpha": list(cfg.alpha), "total": sum(s.count for s in strata),
              "g_alpha": str(ta.g_alpha(cfg.alpha)), "strata": [s.to_json() for s in strata]}
    rows = [{"nu": " ".join(map(str, s.nu.v)), "n": s.degree_n, "g": s.genus_g, "j": s.theta_label.j,
             "k": s.theta_label.k, "count": s.count} for s in strata]
    return Outcome(report, rows)


def cmd_exceptional(cfg: RunConfig) -> Outcome:
    mu = _mu_from(cfg)
    nbrs = ta.exceptional_neighbors(mu)
    s2 = ta.sq(mu.v)
    rows = []
    for nu in nbrs:
        im = ta.geiser(mu, nu)
        rows.append({"nu": " ".join(map(str, nu.v)), "geiser_image": " ".join(map(str, im.v)),
                     "n_nu": (ta.sq(nu.v) - 1) // 2, "fixed": im == nu})
    dp = pl.delpezzo_report(mu)
    report = {"mu": list(mu.v), "neighbors": len(nbrs), "exceptional_curves": len(nbrs) + 1,
              "sum_rule": s2 + 1, "fixed_points": [list(v.v) for v in ta.geiser_fixed_points(mu)],
              "table": rows, "delpezzo": dp.to_json()}
    return Outcome(report, rows)


def cmd_recursion(cfg: RunConfig) -> Outcome:
    mu = _mu_from(cfg)
    terms = ta.correction_terms(mu, cfg.d)
    rows = []
    base = ta.StandardBase()
    for nu, g, l, w in terms:
        try:
            sv = base[(nu, l)]
        except KeyError:
            sv = None
        rows.append({"nu": " ".join(map(str, nu.v)), "gamma": " ".join(map(str, g)), "l": l,
                     "weight": w, "severi": sv})
    report = {"mu": list(mu.v), "d": cfg.d, "terms": rows}
    try:
        report["recursion_count"] = ta.recursion_count(mu, cfg.d)
    except KeyError as exc:
        raise InputError(str(exc).strip("'\"")) from None
    try:
        report["closed_form"] = ta.severi_count(mu, cfg.d)
    except ta.UnsupportedDepth:
        report["closed_form"] = None
    return Outcome(report, rows)


def cmd_verify(cfg: RunConfig, suite: str) -> Outcome:
    names = list(suites.SUITES) if suite == "all" else [suite]
    results = []
    for name in names:
        fn = suites.SUITES[name]
        results.append(fn(seed=cfg.seed) if "seed" in fn.__code__.co_varnames else fn())
    report = {"passed": all(r.passed for r in results), "suites": [r.to_json() for r in results]}
    rows = [{"suite": r.suite, "check": c.name, "passed": c.passed, "cases": c.cases, "failures": len(c.failures)}
            for r in results for c in r.checks]
    return Outcome(report, rows, EXIT_OK if report["passed"] else EXIT_VERIFY)


def cmd_wp_eval(cfg: RunConfig, points: Sequence[str]) -> Outcome:
    if cfg.periods is None:
        raise InputError("wp-eval needs --periods")
    try:
        L = lattice_from_periods(*cfg.periods, cfg.tolerance())
        zs = [complex(_number(z)) for z in points]
        rows = []
        for z in zs:
            rows.append({"z_re": z.real, "z_im": z.imag,
                         "wp_re": complex(wp(z, L)).real, "wp_im": complex(wp(z, L)).imag,
                         "wp_prime_re": complex(wp_prime(z, L)).real, "wp_prime_im": complex(wp_prime(z, L)).imag})
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = {"lattice": L.to_json(), "values": rows}
    return Outcome(report, rows)


# output ------------------------------------------------------------------------------------

def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _pretty(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_pretty(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}: ({len(v)})")
            for item in v:
                lines.append(pad + "  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def emit(out: Outcome, cfg: RunConfig, stream=None) -> None:
    stream = stream or sys.stdout
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            fh.write(_csv_text(out.rows))
    if cfg.format == "json":
        stream.write(json.dumps(out.report, indent=2, default=str) + "\n")
    elif cfg.format == "csv":
        stream.write(_csv_text(out.rows))
    else:
        stream.write(_pretty(out.report) + "\n")


# argparse ------------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, *, lattice: bool = False, types: bool = False, depth: bool = False):
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--format", choices=("json", "csv", "pretty"))
    p.add_argument("--csv", metavar="PATH", help="also write the flat result table to PATH")
    p.add_argument("--seed", type=int)
    if lattice:
        p.add_argument("--periods", help="half-periods omega_a, omega_b as re_a,im_a,re_b,im_b")
        p.add_argument("--e", help="branch values e1,e2,e3 summing to zero (no lifting)")
        p.add_argument("--linear-weights", action="store_true",
                       help="use weights 2a+1 instead of (2a+1)^2 in the pole equations")
    if types:
        p.add_argument("--alpha", help="coefficients a0,a1,a2,a3")
        p.add_argument("--mu", help="type mu0,mu1,mu2,mu3")
    if depth:
        p.add_argument("--d", type=int, help="number of pole pairs (default 2)")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="finitegap", description="Even elliptic finite-gap potentials and their spectral data.")
    sub = ap.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("solve", help="solve the pole equations"), lattice=True, types=True, depth=True)
    _common(sub.add_parser("count", help="rational curve counts for a type"), types=True, depth=True)
    _common(sub.add_parser("spectral", help="spectral strata for two-pole potentials"), types=True)
    _common(sub.add_parser("exceptional", help="exceptional curves and the Geiser involution"), types=True)
    _common(sub.add_parser("recursion", help="terms of the counting recursion"), types=True, depth=True)
    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("suite", choices=(*suites.SUITES, "all"))
    _common(v)
    w = sub.add_parser("wp-eval", help="evaluate wp and wp' on a lattice")
    w.add_argument("z", nargs="+", help="points, e.g. 0.3+0.1j")
    _common(w, lattice=True)
    return ap


def run(argv: Sequence[str] | None = None, stream=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    err = sys.stderr
    try:
        cfg = build_config(args)
        if args.command == "solve":
            out = cmd_solve(cfg)
        elif args.command == "count":
            out = cmd_count(cfg)
        elif args.command == "spectral":
            out = cmd_spectral(cfg)
        elif args.command == "exceptional":
            out = cmd_exceptional(cfg)
        elif args.command == "recursion":
            out = cmd_recursion(cfg)
        elif args.command == "verify":
            out = cmd_verify(cfg, args.suite)
        else:
            out = cmd_wp_eval(cfg, args.z)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    emit(out, cfg, stream)
    for w in out.report.get("warnings", []) if isinstance(out.report.get("warnings"), list) else []:
        print(f"warning: {w}", file=err)
    return out.code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))
