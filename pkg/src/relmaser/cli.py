"""Command-line front end.

    relmaser occupation --omega 1 --beta 1 --u 0:3:0.1
    relmaser performance --beta-h 0.01 --beta-c 0.01 --u-c 2.5 [--oracle liouvillian]
    relmaser figure fig3 --u 1 --seed 42 --threads 4 --out out/fig3

Figure runs write CSV data plus a ``run.json`` manifest into ``--out``;
passing that manifest back with ``--config`` regenerates identical files.
Precedence of settings: flags > config file > built-in figure defaults.

Exit codes: 0 ok, 2 usage, 3 domain/validation, 4 numerical failure, 1 I/O.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    curzon_ahlborn,
    emp_analytic,
    emp_numeric,
    generalized_carnot_bound,
)
from .dynamics import EngineConfig
from .errors import DomainError, InsufficientPointsError, NumericalError
from .explorer import SampleSpec, eta_power_curve, mode_map, power_grid, sample_cloud, upper_frontier
from .occupation import BathParams, relativistic_occupation
from .thermo import Mode, performance

EXIT_IO = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERIC = 4

FIGURES = ("fig2", "fig3", "fig4", "fig5a", "fig5b", "fig5c", "fig5d")

ENGINE_DEFAULTS = dict(
    omega_h=10.0, omega_c=5.0, xi=1.0, gamma_h=1.0, gamma_c=1.0, beta_h=0.01, beta_c=0.08, u_h=0.0, u_c=0.0
)

FIGURE_DEFAULTS = {
    "fig2": dict(tau=[0.5, 0.25, 0.1], u=[0.5, 1.0, 1.5], omega_h=1.0, model="asymptotic", n_points=400,
                 gamma_h=1.0, xi=100.0, beta_h=None),
    "fig3": dict(samples=100_000, omega_c_range=[0.01, 5.0], omega_h_range=[0.01, 10.0], beta_h=0.4, beta_c=0.8,
                 u_h=0.0, u_c=1.0, seed=0, gamma_h=1.0, gamma_c=1.0, xi=1.0, boundary_fraction=0.0),
    "fig4": dict(u=[0.0, 0.5, 1.0, 1.5], eta_c_min=0.01, eta_c_max=0.95, n_points=95, gamma_h=1.0, omega_h=1.0),
    "fig5a": dict(omega_h=10.0, omega_c=5.0, beta_h=0.01, beta_c=0.08, gamma_h=1.0, gamma_c=1.0, xi=1.0,
                  u_h_range=[0.0, 3.0], u_c_range=[0.0, 3.0], grid_n=201),
    "fig5b": dict(omega_h=10.0, omega_c=5.0, beta_h=0.01, beta_c=0.01, gamma_h=1.0, gamma_c=1.0, xi=1.0,
                  u_h_range=[0.0, 3.0], u_c_range=[0.0, 3.0], grid_n=201),
    "fig5c": dict(beta_h=0.04, beta_c=0.08, u_h=2.0, u_c=0.0, gamma_h=1.0, gamma_c=1.0, xi=1.0,
                  omega_c_range=[0.1, 10.0], omega_h_range=[0.1, 10.0], grid_n=201),
    "fig5d": dict(beta_h=0.04, beta_c=0.08, u_h=0.0, u_c=2.0, gamma_h=1.0, gamma_c=1.0, xi=1.0,
                  omega_c_range=[0.1, 10.0], omega_h_range=[0.1, 10.0], grid_n=201),
}


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ output


def fmt(value) -> str:
    """Shortest round-trip text for numbers; empty field for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return "" if math.isnan(v) else repr(v)
    return str(value)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default, allow_nan=False) + "\n"


def _clean(obj):
    """Replace NaN with None so records stay strict JSON."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and math.isnan(obj):
        return None
    return obj


def write_outputs(out_dir: Path, files: dict[str, str], manifest: dict) -> dict:
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        sums = {}
        for name, text in files.items():
            data = text.encode("utf-8")
            (out_dir / name).write_bytes(data)
            sums[name] = {"sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}
        manifest = dict(manifest, outputs=sums, tool="relmaser", version=__version__)
        (out_dir / "run.json").write_text(json_text(_clean(manifest)), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write outputs under {out_dir}: {exc.strerror or exc}") from exc
    return manifest


# ------------------------------------------------------------ argument parsing


def parse_range(text: str, integer_count=False):
    """``a`` -> [a]; ``a:b:step`` -> inclusive arithmetic sweep; ``a,b,c`` -> list."""
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            lo, hi, step = parts
            if step <= 0 or hi < lo:
                raise ValueError
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return [lo + k * step for k in range(n)]
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid value or range {text!r}") from None


def parse_interval(text: str):
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    return [lo, hi]


def parse_list(text: str):
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_engine_flags(p):
    g = p.add_argument_group("machine parameters")
    for flag in ("omega-h", "omega-c", "xi", "gamma-h", "gamma-c", "beta-h", "beta-c", "u-h", "u-c"):
        g.add_argument(f"--{flag}", type=float, default=None)


def _add_common_flags(p):
    p.add_argument("--config", type=Path, default=None, help="JSON parameter file (or a previous run.json)")
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relmaser", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"relmaser {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("occupation", help="tabulate the motion-modified occupation number")
    p.add_argument("--omega", type=parse_range, default=None)
    p.add_argument("--beta", type=parse_range, default=None)
    p.add_argument("--u", type=parse_range, default=None)
    _add_common_flags(p)

    p = sub.add_parser("performance", help="steady-state fluxes and operation mode of one machine")
    _add_engine_flags(p)
    p.add_argument("--oracle", choices=("closed-form", "linear", "liouvillian"), default=None)
    _add_common_flags(p)

    p = sub.add_parser("figure", help="regenerate the data behind a figure")
    p.add_argument("name", choices=FIGURES)
    _add_engine_flags(p)
    p.add_argument("--u", type=parse_list, default=None, help="rapidity list (fig2, fig4) or cold rapidity (fig3)")
    p.add_argument("--tau", type=parse_list, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--boundary-fraction", type=float, default=None)
    p.add_argument("--model", choices=("asymptotic", "full"), default=None)
    p.add_argument("--n-points", type=int, default=None)
    p.add_argument("--grid-n", type=int, default=None)
    for name in ("omega-c-range", "omega-h-range", "u-h-range", "u-c-range"):
        p.add_argument(f"--{name}", type=parse_interval, default=None)
    _add_common_flags(p)
    return ap


_NON_PARAMS = {"command", "name", "config", "out", "format", "threads", "oracle"}


def load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    # A manifest stores its resolved parameters under "params".
    return dict(data.get("params", data))


def resolve(defaults: dict, config: dict, args: argparse.Namespace) -> dict:
    params = dict(defaults)
    for k, v in config.items():
        if k in params:
            params[k] = v
    for k, v in vars(args).items():
        if k in _NON_PARAMS or v is None:
            continue
        params[k] = v
    return params


# ---------------------------------------------------------------- commands


def cmd_occupation(args) -> int:
    params = resolve(dict(omega=[1.0], beta=[1.0], u=[0.0]), load_config(args.config), args)
    rows = []
    for omega in params["omega"]:
        for beta in params["beta"]:
            for u in params["u"]:
                rows.append((omega, beta, u, relativistic_occupation(omega, BathParams(beta, u))))
    fmt_ = args.format or "csv"
    if fmt_ == "csv":
        text = csv_text(("omega", "beta", "u", "N"), rows)
    else:
        text = json_text([dict(omega=o, beta=b, u=u, N=n) for o, b, u, n in rows])
    if args.out is None:
        sys.stdout.write(text)
    else:
        write_outputs(args.out, {f"occupation.{fmt_}": text}, {"command": "occupation", "params": params})
    return 0


def _engine(params) -> EngineConfig:
    return EngineConfig.from_values(**{k: float(params[k]) for k in ENGINE_DEFAULTS})


def cmd_performance(args) -> int:
    params = resolve(ENGINE_DEFAULTS, load_config(args.config), args)
    cfg = _engine(params)
    method = (args.oracle or "closed-form").replace("-", "_")
    record = performance(cfg, method).as_dict()
    record["config"] = cfg.as_dict()
    record["method"] = method
    text = json_text(_clean(record))
    if args.out is None:
        sys.stdout.write(text)
    else:
        write_outputs(args.out, {"performance.json": text}, {"command": "performance", "params": params,
                                                             "oracle": method})
    return 0


def _fig2(p, threads):
    rows, ends = [], []
    for tau in p["tau"]:
        for u in p["u"]:
            c = eta_power_curve(tau, u, omega_h=p["omega_h"], model=p["model"], n_points=int(p["n_points"]),
                                gamma=p["gamma_h"], xi=p["xi"], beta_h=p["beta_h"])
            rows.extend(zip([tau] * len(c.omega_c), [u] * len(c.omega_c), c.omega_c, c.efficiency, c.power))
            ends.append((tau, u, c.endpoint_efficiency, generalized_carnot_bound(tau, u)))
    files = {
        "fig2.csv": csv_text(("tau", "u", "omega_c", "efficiency", "power"), rows),
        "fig2_endpoints.csv": csv_text(("tau", "u", "endpoint_efficiency", "eta_up"), ends),
    }
    return files, {"curves": len(ends)}


def _fig3(p, threads):
    spec = SampleSpec(
        n_samples=int(p["samples"]), omega_c_range=tuple(p["omega_c_range"]), omega_h_range=tuple(p["omega_h_range"]),
        beta_h=p["beta_h"], beta_c=p["beta_c"], u_h=p["u_h"], u_c=p["u_c"], seed=int(p["seed"]),
        gamma_h=p["gamma_h"], gamma_c=p["gamma_c"], xi=p["xi"], boundary_fraction=p["boundary_fraction"],
    )
    cloud = sample_cloud(spec, threads=threads)
    bound = generalized_carnot_bound(spec.tau, spec.u_c)
    engine = cloud.engine
    violation = engine & (cloud.efficiency > bound + 1e-12)
    names = [Mode.from_code(m).value for m in cloud.mode]
    rows = zip(cloud.index, cloud.omega_c, cloud.omega_h, cloud.power, cloud.q_hot, cloud.q_cold,
               cloud.efficiency, names, violation)
    files = {"fig3.csv": csv_text(("index", "omega_c", "omega_h", "power", "q_hot", "q_cold", "efficiency", "mode",
                                   "violation"), rows)}
    summary = {"eta_up": bound, "engine_points": int(engine.sum()), "violations": int(violation.sum())}
    try:
        fr = upper_frontier(cloud)
    except InsufficientPointsError:
        pass
    else:
        files["fig3_frontier.csv"] = csv_text(("power", "efficiency"), fr.frontier)
        summary.update(frontier_intercept=fr.intercept, frontier_extrapolated=fr.extrapolated)
    return files, summary


def _fig4(p, threads):
    rows = []
    for u in p["u"]:
        for eta_c in np.linspace(p["eta_c_min"], p["eta_c_max"], int(p["n_points"])):
            tau = 1.0 - float(eta_c)
            _, eta_num = emp_numeric(p["gamma_h"], tau, u, p["omega_h"])
            rows.append((u, eta_c, emp_analytic(tau, u), eta_num, curzon_ahlborn(eta_c),
                         generalized_carnot_bound(tau, u)))
    header = ("u", "eta_c", "eta_mp", "eta_mp_numeric", "eta_ca", "eta_up")
    below = all(r[2] < r[5] for r in rows)
    return {"fig4.csv": csv_text(header, rows)}, {"eta_mp_below_eta_up": below}


def _grid_rows(grid):
    return ((c.x, c.y, c.power, c.mode.value) for c in grid.cells())


def _fig5_power(p, threads, name):
    n = int(p["grid_n"])
    uh = np.linspace(*p["u_h_range"], n)
    uc = np.linspace(*p["u_c_range"], n)
    g = power_grid(uh, uc, omega_h=p["omega_h"], omega_c=p["omega_c"], beta_h=p["beta_h"], beta_c=p["beta_c"],
                   gamma_h=p["gamma_h"], gamma_c=p["gamma_c"], xi=p["xi"], threads=threads)
    files = {f"{name}.csv": csv_text(("u_h", "u_c", "power", "mode"), _grid_rows(g))}
    return files, {m.value: int(g.mode_mask(m).sum()) for m in Mode}


def _fig5_modes(p, threads, name):
    n = int(p["grid_n"])
    wc = np.linspace(*p["omega_c_range"], n)
    wh = np.linspace(*p["omega_h_range"], n)
    common = dict(beta_h=p["beta_h"], beta_c=p["beta_c"], gamma_h=p["gamma_h"], gamma_c=p["gamma_c"], xi=p["xi"],
                  threads=threads)
    g = mode_map(wc, wh, u_h=p["u_h"], u_c=p["u_c"], **common)
    header = ("omega_c", "omega_h", "power", "mode")
    files = {f"{name}.csv": csv_text(header, _grid_rows(g))}
    summary = {m.value: int(g.mode_mask(m).sum()) for m in Mode}
    if name == "fig5d":
        # inset: both baths at the cold rapidity
        gi = mode_map(wc, wh, u_h=p["u_c"], u_c=p["u_c"], **common)
        files[f"{name}_inset.csv"] = csv_text(header, _grid_rows(gi))
    return files, summary


def cmd_figure(args) -> int:
    name = args.name
    defaults = FIGURE_DEFAULTS[name]
    config = load_config(args.config)
    if name == "fig3" and args.u is not None:
        if len(args.u) != 1:
            raise UsageError("fig3 takes a single cold rapidity via --u")
        args.u_c = args.u[0]
        args.u = None
    if name == "fig5a" or name == "fig5b":
        args.u_h = args.u_c = None  # rapidities are the scan axes
    params = resolve(defaults, config, args)
    unknown = set(k for k, v in vars(args).items() if v is not None and k not in _NON_PARAMS) - set(defaults)
    if unknown:
        raise UsageError(f"{name} does not accept: {', '.join('--' + k.replace('_', '-') for k in sorted(unknown))}")
    threads = max(1, int(args.threads))
    builder = {
        "fig2": _fig2,
        "fig3": _fig3,
        "fig4": _fig4,
        "fig5a": lambda p, t: _fig5_power(p, t, "fig5a"),
        "fig5b": lambda p, t: _fig5_power(p, t, "fig5b"),
        "fig5c": lambda p, t: _fig5_modes(p, t, "fig5c"),
        "fig5d": lambda p, t: _fig5_modes(p, t, "fig5d"),
    }[name]
    files, summary = builder(params, threads)
    out = args.out or Path(name)
    manifest = {"command": "figure", "name": name, "params": params, "summary": summary}
    if "seed" in params:
        manifest["seed"] = params["seed"]
    write_outputs(out, files, manifest)
    print(f"wrote {', '.join(str(out / f) for f in files)} and {out / 'run.json'}")
    return 0


COMMANDS = {"occupation": cmd_occupation, "performance": cmd_performance, "figure": cmd_figure}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"relmaser: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"relmaser: invalid input: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"relmaser: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"relmaser: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
