"""Command-line front end.

    zetalab [global options] <subcommand> [options]

Settings resolve as defaults < config file (key=value lines) <
ZETALAB_OUTPUT_DIR (output_dir only) < flags.  Every run writes its data
payloads (JSON and/or CSV) plus ``manifest.json`` under output_dir.  The
payloads depend only on the inputs; wall time and timestamps go to the
manifest.

Exit codes: 0 ok, 2 configuration error, 3 numeric failure, 4 acceptance
failure.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import hashlib
import io
import json
import math
import os
import platform
import sys
import tempfile
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import ConfigError, ZetaLabError

OUTPUT_ENV = "ZETALAB_OUTPUT_DIR"
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ACCEPTANCE = 0, 2, 3, 4

# key: (type, default)
KEYS = {
    "sigma": (float, 0.75),
    "T": (float, 1e4),
    "a_re": (float, 2.0),
    "a_im": (float, 0.0),
    "sigma1": (float, 0.55),
    "sigma2": (float, 0.95),
    "samples": (int, 10**4),
    "model_samples": (int, 10**5),
    "prime_limit": (int, 1000),
    "seed": (int, 0),
    "backend": (str, "auto"),
    "Y_policy": (str, "logT_pow4"),
    "Y": (float, None),
    "output_dir": (str, "zetalab-out"),
    "format": (str, "both"),
    "emit_plots": (str, "none"),
}
CHOICES = {
    "backend": ("auto", "full-zeta", "dirichlet-RY"),
    "Y_policy": ("logT_pow4", "explicit"),
    "format": ("csv", "json", "both"),
    "emit_plots": ("none", "gnuplot"),
}


def _cerr(msg, op="config"):
    return ConfigError(msg, "cli", op)


def _convert(key, raw):
    typ = KEYS[key][0]
    try:
        if typ is int:
            v = float(raw) if isinstance(raw, str) else raw
            if v != int(v):
                raise ValueError
            return int(v)
        return typ(raw)
    except (TypeError, ValueError):
        raise _cerr(f"{key}: cannot parse {raw!r} as {typ.__name__}") from None


def read_config_file(path) -> dict:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise _cerr(f"cannot read config file {path}: {e.strerror}") from None
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _cerr(f"{path}:{no}: expected key=value")
        k, v = (x.strip() for x in line.split("=", 1))
        if k not in KEYS:
            raise _cerr(f"{path}:{no}: unknown key {k!r}")
        out[k] = _convert(k, v)
    return out


def validate(cfg: dict) -> dict:
    """Range checks for every key; raises ConfigError before any computation."""
    for k in cfg:
        if k not in KEYS:
            raise _cerr(f"unknown key {k!r}")
    s = cfg["sigma"]
    if not 0.5 < s <= 1.0:
        raise _cerr(f"sigma must lie in (1/2, 1], got {s}")
    if not 100 <= cfg["T"] <= 5e6:
        raise _cerr("T must lie in [100, 5e6] (2T <= 1e7)")
    if not 0.5 < cfg["sigma1"] < cfg["sigma2"] < 1.0:
        raise _cerr("need 1/2 < sigma1 < sigma2 < 1")
    if complex(cfg["a_re"], cfg["a_im"]) == 0:
        raise _cerr("a must be nonzero")
    if not 100 <= cfg["samples"] <= 10**8:
        raise _cerr("samples must lie in [100, 1e8]")
    if not 1 <= cfg["model_samples"] <= 10**8:
        raise _cerr("model_samples must lie in [1, 1e8]")
    if not 2 <= cfg["prime_limit"] <= 10**8:
        raise _cerr("prime_limit must lie in [2, 1e8]")
    if not 0 <= cfg["seed"] < 2**64:
        raise _cerr("seed must lie in [0, 2^64)")
    for k, ch in CHOICES.items():
        if cfg[k] not in ch:
            raise _cerr(f"{k} must be one of {ch}")
    if cfg["Y_policy"] == "explicit":
        if cfg["Y"] is None or not cfg["Y"] >= 2:
            raise _cerr("Y_policy=explicit needs Y >= 2")
    elif cfg["Y"] is not None:
        raise _cerr("Y is only allowed with Y_policy=explicit")
    return cfg


def resolve(file_cfg: dict, flags: dict, env=os.environ) -> dict:
    cfg = {k: d for k, (_, d) in KEYS.items()}
    cfg.update(file_cfg)
    if env.get(OUTPUT_ENV):
        cfg["output_dir"] = env[OUTPUT_ENV]
    cfg.update({k: v for k, v in flags.items() if v is not None})
    return validate(cfg)


# ---------------------------------------------------------------- payload helpers

def _num(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


@dataclass
class Payload:
    name: str
    data: dict
    table: tuple | None = None      # (columns, rows)
    plot: tuple | None = None       # (xcol, ycol, title) for gnuplot


def _Y(cfg):
    return cfg["Y"] if cfg["Y_policy"] == "explicit" else None


def _backend(cfg, T):
    if cfg["backend"] != "auto":
        return cfg["backend"]
    from .discrepancy import backend_for

    return backend_for(T)


def cmd_moments(cfg, args) -> list:
    from .moments import ARGUMENT, MODULUS, log_moment

    z = complex(args.z_re, args.z_im)
    zz = z.real if z.imag == 0 else z
    kind = ARGUMENT if args.kind == "argument" else MODULUS
    r = log_moment(cfg["sigma"], zz, kind, 3 if z.imag == 0 else 0)
    err = r.tail_bound + r.quad_err
    d = {"sigma": r.sigma, "z": _num(r.z), "kind": r.kind, "M": _num(r.M), "M_err": err,
         "tail_bound": r.tail_bound, "quad_err": r.quad_err, "tail_mode": r.tail_mode,
         "per_prime_terms_used": r.per_prime_terms_used}
    for i, v in enumerate(r.derivs, 1):
        d[f"M{i}"] = _num(v)
        d[f"M{i}_err"] = err
    return [Payload("moments", d)]


def cmd_tail(cfg, args) -> list:
    from .moments import ARGUMENT, MODULUS
    from .tails import MC_MIN_COUNT, tail_compare

    kind = ARGUMENT if args.kind == "argument" else MODULUS
    n = int(args.mc_samples)
    if n < 0 or n > 10**8:
        raise _cerr("--mc-samples must lie in [0, 1e8]", "tail")
    est = tail_compare(cfg["sigma"], args.tau, n, cfg["seed"], kind,
                       prime_cutoff=cfg["prime_limit"])
    d = {"sigma": est.sigma, "tau": est.tau, "kind": kind, "kappa": est.kappa,
         "p_saddle": est.p_saddle, "p_saddle_correction_scale": _num(est.correction_scale),
         "p_mc": est.p_mc, "p_mc_stderr": est.mc_stderr, "mc_samples": n}
    if est.p_mc is not None:
        gap = abs(est.p_saddle - est.p_mc)
        d["relative_gap"] = gap / est.p_mc if est.p_mc > 0 else None
        d["agree"] = bool(gap <= max(3 * est.mc_stderr, 0.3 * est.p_mc))
        d["verdict"] = "agree" if d["agree"] else "disagree"
    elif n > 0:
        d["verdict"] = f"mc withheld: expected exceedances below {MC_MIN_COUNT}"
    else:
        d["verdict"] = "saddle only"
    return [Payload("tail", d)]


def cmd_charfun(cfg, args) -> list:
    from .empirical import LineWindow, charfun_compare, sample_line

    be = _backend(cfg, cfg["T"])
    win = LineWindow(cfg["sigma"], cfg["T"], cfg["samples"], "stratified", cfg["seed"], be, _Y(cfg))
    c = charfun_compare(sample_line(win), args.u, args.v)
    d = {"sigma": cfg["sigma"], "T": cfg["T"], "u": c.u, "v": c.v, "backend": be,
         "Y": win.Y_eff, "phi_emp": _num(c.phi_emp), "phi_emp_stderr": c.phi_emp_stderr,
         "phi_rand": _num(c.phi_rand), "phi_rand_truncation_bound": c.truncation_bound,
         "gap": c.gap, "budget": c.budget, "agree": bool(c.ok)}
    return [Payload("charfun", d)]


def cmd_discrepancy(cfg, args) -> list:
    from .discrepancy import CSV_COLUMNS, decay_trend, trend_summary
    from .model import ModelConfig

    try:
        T_list = [float(x) for x in args.T_list.split(",")]
    except ValueError:
        raise _cerr("--T-list must be comma-separated numbers", "discrepancy") from None
    if cfg["backend"] == "auto":
        surrogate_from = None
    elif cfg["backend"] == "full-zeta":
        surrogate_from = math.inf
    else:
        surrogate_from = 0.0
    kw = {} if surrogate_from is None else {"surrogate_from": surrogate_from}
    mcfg = ModelConfig(cfg["sigma"], cfg["prime_limit"], cfg["seed"])
    tr = decay_trend(cfg["sigma"], T_list, cfg["samples"], args.grid, cfg["seed"],
                     cfg["model_samples"], mcfg, **kw)
    rows = [[r.T, r.D_hat, r.stat_err, r.grid_resolution, r.emp_count, r.model_count]
            for r in tr.reports]
    return [Payload("discrepancy", trend_summary(tr), (CSV_COLUMNS, rows),
                    ("T", "D_hat", "D_hat against T"))]


def cmd_apoints(cfg, args) -> list:
    from .apoints import CSV_COLUMNS, census, census_summary

    a = complex(args.a) if args.a is not None else complex(cfg["a_re"], cfg["a_im"])
    if a == 0:
        raise _cerr("a must be nonzero", "apoints")
    c = census(a, cfg["sigma1"], cfg["sigma2"], cfg["T"], cfg["model_samples"], args.h,
               cfg["seed"], polish=args.polish)
    d = census_summary(c)
    if c.roots is not None:
        d["roots"] = [[r.s.real, r.s.imag, r.residual] for r in c.roots]
    rows = [[b.t_lo, b.t_hi, b.count, b.refinements] for b in c.blocks]
    return [Payload("apoints", d, (CSV_COLUMNS, rows), ("t_lo", "count", "a-points per block"))]


def cmd_constants(cfg, args) -> list:
    from .moments import asymptotic_constants

    c = asymptotic_constants(cfg["sigma"])
    d = {"sigma": c.sigma, "g0": c.g0, "g0_err": c.g0_err, "g1": c.g1, "g1_err": c.g1_err,
         "g2": c.g2, "g2_residual": c.g2_residual}
    return [Payload("constants", d)]


def cmd_selftest(cfg, args) -> list:
    from .acceptance import run

    sel = [int(x) for x in args.only.split(",")] if args.only else None
    res = run(sel, echo=lambda s: print(s, file=sys.stderr))
    d = {"results": [{"criterion": r.number, "title": r.title, "passed": bool(r.passed),
                      "detail": r.detail} for r in res],
         "all_passed": all(r.passed for r in res)}
    return [Payload("selftest", d)]


COMMANDS = {"moments": cmd_moments, "tail": cmd_tail, "charfun": cmd_charfun,
            "discrepancy": cmd_discrepancy, "apoints": cmd_apoints,
            "constants": cmd_constants, "selftest": cmd_selftest}


# ---------------------------------------------------------------- output

def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write_payload(out: Path, p: Payload, fmt: str, plots: str) -> list:
    files = []
    if fmt in ("json", "both"):
        (out / f"{p.name}.json").write_text(_dump(p.data))
        files.append(f"{p.name}.json")
    if p.table is not None and fmt in ("csv", "both"):
        with open(out / f"{p.name}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(p.table[0])
            w.writerows([[repr(x) if isinstance(x, float) else x for x in r] for r in p.table[1]])
        files.append(f"{p.name}.csv")
    if p.table is not None and p.plot is not None and plots == "gnuplot":
        cols = list(p.table[0])
        xc, yc, title = p.plot
        with open(out / f"{p.name}.dat", "w") as fh:
            fh.write("# " + " ".join(cols) + "\n")
            for r in p.table[1]:
                fh.write(" ".join(repr(x) if isinstance(x, float) else str(x) for x in r) + "\n")
        logx = "set logscale x\n" if xc == "T" else ""
        (out / f"{p.name}.gp").write_text(
            f"set title '{title}'\nset xlabel '{xc}'\nset ylabel '{yc}'\n{logx}"
            f"plot '{p.name}.dat' using {cols.index(xc) + 1}:{cols.index(yc) + 1} "
            f"with linespoints notitle\n")
        files += [f"{p.name}.dat", f"{p.name}.gp"]
    return files


def _versions() -> dict:
    import numba
    import numpy
    import scipy

    from . import __version__

    return {"zetalab": __version__, "python": platform.python_version(),
            "numpy": numpy.__version__, "scipy": scipy.__version__, "numba": numba.__version__}


# ---------------------------------------------------------------- argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help="key=value configuration file")
    g.add_argument("--sigma", type=float)
    g.add_argument("--T", dest="T", type=float)
    g.add_argument("--sigma1", type=float)
    g.add_argument("--sigma2", type=float)
    g.add_argument("--samples", type=int)
    g.add_argument("--model-samples", dest="model_samples", type=int)
    g.add_argument("--prime-limit", dest="prime_limit", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--backend", choices=CHOICES["backend"])
    g.add_argument("--Y-policy", dest="Y_policy", choices=CHOICES["Y_policy"])
    g.add_argument("--Y", dest="Y", type=float)
    g.add_argument("--output-dir", dest="output_dir")
    g.add_argument("--format", choices=CHOICES["format"])
    g.add_argument("--emit-plots", dest="emit_plots", choices=CHOICES["emit_plots"])
    g.add_argument("--threads", type=int, help="cap on worker threads (default: all cores)")

    p = argparse.ArgumentParser(prog="zetalab", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("moments", parents=[common], help="log-moment M(sigma, z)")
    s.add_argument("--z-re", dest="z_re", type=float, default=2.0)
    s.add_argument("--z-im", dest="z_im", type=float, default=0.0)
    s.add_argument("--kind", choices=("modulus", "argument"), default="modulus")
    s = sub.add_parser("tail", parents=[common], help="saddle-point and Monte Carlo tails")
    s.add_argument("--tau", type=float, required=True)
    s.add_argument("--mc-samples", dest="mc_samples", type=int, default=0)
    s.add_argument("--kind", choices=("modulus", "argument"), default="modulus")
    s = sub.add_parser("charfun", parents=[common], help="empirical vs model characteristic function")
    s.add_argument("--u", type=float, default=1.0)
    s.add_argument("--v", type=float, default=1.0)
    s = sub.add_parser("discrepancy", parents=[common], help="discrepancy decay trend")
    s.add_argument("--T-list", dest="T_list", default="1e3,1e4,1e5")
    s.add_argument("--grid", type=int, default=64)
    s = sub.add_parser("apoints", parents=[common], help="a-point census")
    s.add_argument("--a", help="complex a, e.g. 2 or 1+1j (overrides a_re/a_im)")
    s.add_argument("--h", type=float, default=0.01)
    s.add_argument("--polish", action="store_true", help="also locate every root")
    sub.add_parser("constants", parents=[common], help="asymptotic constants g0, g1, g2")
    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", help="comma-separated criterion numbers")
    return p


def _flag_values(ns) -> dict:
    return {k: getattr(ns, k) for k in KEYS if hasattr(ns, k)}


def _set_threads(n):
    if n is None:
        return
    import numba

    if n < 1:
        raise _cerr("--threads must be >= 1")
    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    try:
        file_cfg = read_config_file(ns.config) if ns.config else {}
        cfg = resolve(file_cfg, _flag_values(ns))
        _set_threads(ns.threads)
        out = Path(cfg["output_dir"])
        out.mkdir(parents=True, exist_ok=True)
        started = datetime.now(timezone.utc).isoformat()
        t0 = time.perf_counter()
        payloads = COMMANDS[ns.command](cfg, ns)
        wall = time.perf_counter() - t0
    except ZetaLabError as e:
        print(f"zetalab {ns.command}: error: {e}", file=sys.stderr)
        return e.exit_code
    files = []
    for p in payloads:
        files += _write_payload(out, p, cfg["format"], cfg["emit_plots"])
        sys.stdout.write(_dump(p.data))
    manifest = {"command": ns.command, "inputs": cfg, "argv": list(argv or sys.argv[1:]),
                "seed": cfg["seed"], "versions": _versions(), "started_utc": started,
                "wall_time_s": wall,
                "artifacts": {f: hashlib.sha256((out / f).read_bytes()).hexdigest() for f in files}}
    (out / "manifest.json").write_text(_dump(manifest))
    if ns.command == "selftest" and not payloads[0].data["all_passed"]:
        return EXIT_ACCEPTANCE
    return EXIT_OK


# ---------------------------------------------------------------- determinism

DETERMINISM_RUNS = {
    "moments": ["--sigma", "0.75", "--z-re", "3.5"],
    "tail": ["--sigma", "0.75", "--tau", "1.0", "--mc-samples", "20000"],
    "charfun": ["--sigma", "0.75", "--T", "1000", "--samples", "500", "--u", "1", "--v", "2"],
    "discrepancy": ["--sigma", "0.75", "--T-list", "200,400,800", "--samples", "400",
                    "--model-samples", "2000", "--grid", "16"],
    "apoints": ["--a", "2", "--sigma1", "0.6", "--sigma2", "0.9", "--T", "200",
                "--model-samples", "20000", "--polish"],
    "constants": ["--sigma", "0.75"],
}


def determinism_check(seed: int = 7) -> list:
    """Run every computing subcommand twice with the same seed in fresh
    directories; return the artifacts whose bytes differ."""
    bad = []
    with tempfile.TemporaryDirectory() as tmp:
        for cmd, extra in DETERMINISM_RUNS.items():
            digests = []
            for rep in range(2):
                out = Path(tmp) / f"{cmd}{rep}"
                argv = [cmd, *extra, "--seed", str(seed), "--output-dir", str(out)]
                with contextlib.redirect_stdout(io.StringIO()):
                    code = main(argv)
                if code != EXIT_OK:
                    bad.append(f"{cmd} (exit {code})")
                    break
                digests.append(json.loads((out / "manifest.json").read_text())["artifacts"])
            if len(digests) == 2 and digests[0] != digests[1]:
                bad.append(cmd)
    return bad


if __name__ == "__main__":
    sys.exit(main())
