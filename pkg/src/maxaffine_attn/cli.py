"""Command-line harness: construction runs, sweeps, verification, reports.

Commands
    approximate     build the self-attention approximator and measure errors
    cross           same for the paired-input cross-attention approximator
    cover           sphere-cover constructor on a loaded or generated cover
    indicator-demo  partition-indicator construction on the step1d target
    sweep           cross product of grid sizes and temperatures
    verify          run the full property suite (exit 2 on failure)
    params-count    print the trainable-parameter count for (d, n, centers)

Reports are CSV (fixed column order, 17 significant digits) or JSON.  A
matplotlib plot script is emitted next to the report for runs that have a
natural picture; the script only reads the report files and is never run.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .construct_cover import SphereCover, build_small_region, count_trainable_params
from .construct_cross import build_universal_cross, evaluate_approximator_cross
from .construct_self import (
    CapExceeded,
    GridSpec,
    build_indicator_attention,
    build_universal_self,
    choose_temperature,
    evaluate_approximator,
    grid_centers,
)
from .attention import apply_sum_linear, self_attention
from .maxaffine import evaluate as ma_evaluate
from .maxaffine import indicator as ma_indicator
from .oracle import (
    UniformPairSampler,
    UniformSampler,
    closed_form_cross,
    closed_form_self,
    lp_error_estimate,
    sup_error_estimate,
    target_values_at_center_pairs,
    target_values_at_centers,
)
from .registry import get_function, step1d_maxaffine
from .verify import verify_all

CSV_COLUMNS = ("command", "function", "d", "n", "D", "P_or_Nx", "G",
               "temperature", "epsilon_target", "p", "samples", "seed",
               "sup_err", "lp_err", "out_of_cover", "runtime_ms")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_CAP_EXCEEDED = 3

PIPELINE_CHECK_MAX_WIDTH = 4096
INDICATOR_MARGIN = 0.2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    function: str = "const:0.0"
    d: int = 1
    n: int = 1
    half_width: float = 1.0
    p_list: tuple = (4,)
    centers: int | None = None
    cover_path: str | None = None
    temperature_list: tuple | None = None
    epsilon: float | None = None
    p_norm: float = 2.0
    samples: int = 1000
    seed: int = 0
    out: str | None = None
    fmt: str = "csv"
    rows: list = field(default_factory=list)


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def rows_to_json(rows) -> str:
    cooked = []
    for row in rows:
        item = {}
        for c in CSV_COLUMNS:
            v = row[c]
            if isinstance(v, (np.integer,)):
                v = int(v)
            elif isinstance(v, (np.floating,)):
                v = float(v)
            item[c] = v
        cooked.append(item)
    return json.dumps(cooked, indent=2) + "\n"


def _write_report(config: RunConfig, extra_files: dict | None = None) -> None:
    text = rows_to_csv(config.rows) if config.fmt == "csv" else rows_to_json(config.rows)
    if config.out:
        Path(config.out).write_text(text)
        for suffix, content in (extra_files or {}).items():
            Path(config.out + suffix).write_text(content)
        emit_plot_script(config.out)
    else:
        sys.stdout.write(text)


def _validate_temp_epsilon(config: RunConfig) -> None:
    if (config.temperature_list is None) == (config.epsilon is None):
        raise UsageError("set exactly one of --temperature and --epsilon")


def _resolve_temperature(config: RunConfig, f, num_centers: int) -> list[float]:
    """Either the explicit temperature list or one derived from epsilon."""
    _validate_temp_epsilon(config)
    if config.temperature_list is not None:
        return [float(t) for t in config.temperature_list]
    lip = f.lipschitz
    if lip is None or not np.isfinite(lip) or lip <= 0:
        raise UsageError(
            f"{f.descriptor} has no usable Lipschitz constant for --epsilon mode")
    delta = config.epsilon / (3.0 * lip)
    temp = choose_temperature(delta, f.bound_b0, num_centers, config.epsilon)
    return [max(temp, 1e-6)]


def smallest_power_of_two_grid(half_width: float, delta: float) -> int:
    """Smallest power-of-two points-per-axis with grid step 2D/P <= delta."""
    if delta <= 0:
        raise UsageError("delta must be positive")
    p = 1
    while 2.0 * half_width / p > delta:
        p *= 2
    return p


def _check_pipeline_matches_oracle(approx, f, rng) -> None:
    """One-sample consistency check of the matrix path vs the closed form."""
    d, n = approx.d, approx.n
    g = approx.centers.shape[0]
    width = 2 * d * g * g if approx.kind == "cross" else 2 * d * g
    if width > PIPELINE_CHECK_MAX_WIDTH:
        return
    if approx.kind == "cross":
        zk = rng.uniform(-1, 1, size=(d, n))
        zq = rng.uniform(-1, 1, size=(d, n))
        pipe = evaluate_approximator_cross(approx, zk, zq)
        orac = closed_form_cross(f, approx.centers, approx.temperature, zk, zq)
    else:
        z = rng.uniform(-1, 1, size=(d, n))
        pipe = evaluate_approximator(approx, z)
        orac = closed_form_self(f, approx.centers, approx.temperature, z)
    scale = max(1.0, float(np.max(np.abs(orac))))
    if float(np.max(np.abs(pipe - orac))) / scale > 1e-8:
        raise RuntimeError("matrix pipeline disagrees with the closed form")


def _error_row(config: RunConfig, command, f, p_or_nx, g, temperature,
               sup_report, lp_report) -> dict:
    return {
        "command": command, "function": f.descriptor, "d": config.d,
        "n": config.n, "D": config.half_width, "P_or_Nx": p_or_nx, "G": g,
        "temperature": temperature,
        "epsilon_target": config.epsilon if config.epsilon is not None else float("nan"),
        "p": config.p_norm, "samples": config.samples, "seed": config.seed,
        "sup_err": sup_report.sup_error,
        "lp_err": lp_report.lp_error if lp_report is not None else float("nan"),
        "out_of_cover": sup_report.out_of_cover,
        "runtime_ms": sup_report.runtime_ms
        + (lp_report.runtime_ms if lp_report is not None else 0.0),
    }


def _run_approximate_row(config: RunConfig, points_per_axis: int,
                         temperature: float | None) -> dict:
    f, _ = get_function(config.function, config.d, config.n, config.seed,
                        config.half_width)
    if f.arity != 1:
        raise UsageError(f"{f.descriptor} is a paired target; use the cross command")
    spec = GridSpec(config.half_width, points_per_axis, config.d, config.n)
    g = spec.num_centers
    temps = [temperature] if temperature is not None else \
        _resolve_temperature(config, f, g)
    temp = temps[0]
    # Error measurement always runs on the closed-form path; the full matrix
    # pipeline is materialized and cross-checked only while its score matrix
    # fits comfortably in memory.
    if 2 * config.d * g <= PIPELINE_CHECK_MAX_WIDTH:
        approx = build_universal_self(f, spec, temp)
        centers = approx.centers
        _check_pipeline_matches_oracle(approx, f,
                                       np.random.default_rng(config.seed + 1))
    else:
        centers = grid_centers(spec)
    values = target_values_at_centers(f, centers, config.d, config.n)

    def evaluator(z):
        return closed_form_self(f, centers, temp, z, values)

    sampler = UniformSampler(config.half_width, config.d, config.n)
    sup_report = sup_error_estimate(f, evaluator, sampler, config.samples, config.seed)
    lp_report = lp_error_estimate(f, evaluator, sampler, config.samples,
                                  config.p_norm, config.seed)
    return _error_row(config, config.command, f, points_per_axis, g, temp,
                      sup_report, lp_report)


def _curve_file(config: RunConfig, f, centers, temperature, values) -> str:
    xs = np.linspace(-config.half_width, config.half_width, 257)
    lines = ["x,target,approximant"]
    for x in xs:
        z = np.array([[x]])
        fx = float(f(z)[0, 0])
        ax = float(closed_form_self(f, centers, temperature, z, values)[0, 0])
        lines.append(f"{_fmt(x)},{_fmt(fx)},{_fmt(ax)}")
    return "\n".join(lines) + "\n"


def run_approximate(config: RunConfig) -> int:
    _validate_temp_epsilon(config)
    if config.temperature_list is not None and len(config.temperature_list) != 1:
        raise UsageError("approximate takes a single temperature; use sweep for lists")
    if len(config.p_list) != 1:
        raise UsageError("approximate takes a single grid size; use sweep for lists")
    row = _run_approximate_row(config, int(config.p_list[0]),
                               float(config.temperature_list[0])
                               if config.temperature_list else None)
    config.rows.append(row)
    extra = {}
    if config.d == 1 and config.n == 1 and config.out:
        f, _ = get_function(config.function, 1, 1, config.seed, config.half_width)
        centers = grid_centers(GridSpec(config.half_width, int(config.p_list[0]), 1, 1))
        values = target_values_at_centers(f, centers, 1, 1)
        extra[".curve.csv"] = _curve_file(config, f, centers,
                                          row["temperature"], values)
    _write_report(config, extra)
    return EXIT_OK


def run_sweep(config: RunConfig) -> int:
    _validate_temp_epsilon(config)
    temps = config.temperature_list if config.temperature_list is not None else [None]
    for points in config.p_list:
        for temp in temps:
            row = _run_approximate_row(config, int(points),
                                       float(temp) if temp is not None else None)
            config.rows.append(row)
    _write_report(config)
    return EXIT_OK


def run_cross(config: RunConfig) -> int:
    f, _ = get_function(config.function, config.d, config.n, config.seed,
                        config.half_width)
    if f.arity != 2:
        raise UsageError(f"{f.descriptor} is single-input; use approximate")
    if len(config.p_list) != 1:
        raise UsageError("cross takes a single grid size")
    spec = GridSpec(config.half_width, int(config.p_list[0]), config.d, config.n)
    g = spec.num_centers
    temp = _resolve_temperature(config, f, g * g)[0]
    approx = build_universal_cross(f, spec, temp)
    values = target_values_at_center_pairs(f, approx.centers, config.d, config.n)
    _check_pipeline_matches_oracle(approx, f, np.random.default_rng(config.seed + 1))

    def evaluator(zk, zq):
        return closed_form_cross(f, approx.centers, temp, zk, zq, values)

    sampler = UniformPairSampler(config.half_width, config.d, config.n)
    sup_report = sup_error_estimate(f, evaluator, sampler, config.samples, config.seed)
    lp_report = lp_error_estimate(f, evaluator, sampler, config.samples,
                                  config.p_norm, config.seed)
    config.rows.append(_error_row(config, "cross", f, int(config.p_list[0]), g,
                                  temp, sup_report, lp_report))
    _write_report(config)
    return EXIT_OK


def parse_cover_file(path: str, dn: int) -> SphereCover:
    """Cover file: first line ``radius <r>``, then one center per line."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("radius"):
        raise UsageError(f"cover file {path} must start with 'radius <r>'")
    radius = float(lines[0].split()[1])
    centers = []
    for ln in lines[1:]:
        coords = [float(tok) for tok in ln.split()]
        if len(coords) != dn:
            raise UsageError(f"cover center {ln!r} has {len(coords)} coords, expected {dn}")
        centers.append(coords)
    if not centers:
        raise UsageError(f"cover file {path} lists no centers")
    return SphereCover(np.array(centers), radius)


def run_cover(config: RunConfig) -> int:
    f, _ = get_function(config.function, config.d, config.n, config.seed,
                        config.half_width)
    if f.arity != 1:
        raise UsageError("cover takes a single-input target")
    dn = config.d * config.n
    rng = np.random.default_rng(config.seed)
    if config.cover_path:
        cover = parse_cover_file(config.cover_path, dn)
    elif config.centers:
        if config.epsilon is not None and f.lipschitz and np.isfinite(f.lipschitz):
            radius = config.epsilon / (3.0 * f.lipschitz)
        else:
            radius = config.half_width * np.sqrt(dn) / max(config.centers, 1) ** (1 / dn)
        pts = rng.uniform(-config.half_width, config.half_width,
                          size=(config.centers, dn))
        cover = SphereCover(pts, radius)
    else:
        raise UsageError("cover needs --cover FILE or --centers INT")
    temp = _resolve_temperature(config, f, cover.num_centers)[0]
    approx = build_small_region(f, cover, config.d, config.n, temp)
    values = target_values_at_centers(f, approx.centers, config.d, config.n)
    _check_pipeline_matches_oracle(approx, f, np.random.default_rng(config.seed + 1))

    def evaluator(z):
        return closed_form_self(f, approx.centers, temp, z, values)

    sampler = UniformSampler(config.half_width, config.d, config.n)
    sup_report = sup_error_estimate(f, evaluator, sampler, config.samples,
                                    config.seed, cover=cover)
    config.rows.append(_error_row(config, "cover", f, cover.num_centers,
                                  cover.num_centers, temp, sup_report, None))
    _write_report(config)
    return EXIT_OK


def run_indicator_demo(config: RunConfig) -> int:
    """Indicator construction on the partition matching the step1d target."""
    epsilon = config.epsilon if config.epsilon is not None else 1e-3
    ma, levels = step1d_maxaffine()
    linear, weights, chosen_r = build_indicator_attention(
        ma, 1, epsilon, INDICATOR_MARGIN)
    rng = np.random.default_rng(config.seed)
    start = time.perf_counter()
    sup = 0.0
    accepted = 0
    rejected = 0
    attempts = 0
    while accepted < config.samples and attempts < 100 * config.samples:
        attempts += 1
        x = rng.uniform(-config.half_width, config.half_width, size=1)
        if ma_evaluate(ma, x).margin < INDICATOR_MARGIN:
            rejected += 1
            continue
        accepted += 1
        lifted = apply_sum_linear(linear, x.reshape(1, 1))
        got = self_attention(weights, lifted)[:, 0]
        sup = max(sup, float(np.max(np.abs(got - ma_indicator(ma, x)))))
    runtime_ms = 1e3 * (time.perf_counter() - start)
    config.rows.append({
        "command": "indicator-demo", "function": "step1d", "d": 1, "n": 1,
        "D": config.half_width, "P_or_Nx": ma.n_components, "G": ma.n_components,
        "temperature": chosen_r, "epsilon_target": epsilon, "p": float("nan"),
        "samples": accepted, "seed": config.seed, "sup_err": sup,
        "lp_err": float("nan"), "out_of_cover": rejected,
        "runtime_ms": runtime_ms})
    extra = {}
    if config.out:
        xs = np.linspace(-config.half_width, config.half_width, 257)
        lines = ["x,envelope,cell,step"]
        for x in xs:
            rep = ma_evaluate(ma, [x])
            lines.append(f"{_fmt(x)},{_fmt(rep.value)},{rep.cell_index},"
                         f"{_fmt(levels[rep.cell_index, 0])}")
        extra[".curve.csv"] = "\n".join(lines) + "\n"
    _write_report(config, extra)
    return EXIT_OK


def run_params_count(config: RunConfig) -> int:
    if not config.centers or config.centers < 1:
        raise UsageError("params-count needs --centers INT >= 1")
    if 2 * config.d * config.centers < config.n:
        raise UsageError(
            f"n={config.n} output tokens do not fit a {config.centers}-center score matrix")
    rng = np.random.default_rng(config.seed)
    centers = rng.uniform(-config.half_width, config.half_width,
                          size=(config.centers, config.d * config.n))
    f, _ = get_function("const:0.0", config.d, config.n, config.seed,
                        config.half_width)
    approx = build_small_region(f, SphereCover(centers, 1.0), config.d,
                                config.n, 1.0)
    print(count_trainable_params(approx))
    return EXIT_OK


def run_verify(config: RunConfig) -> int:
    results = verify_all()
    lines = []
    for name, ok, detail in results:
        lines.append(f"{'PASS' if ok else 'FAIL'} {name} -- {detail}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if config.out:
        Path(config.out).write_text(text)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_VERIFY_FAILED


def emit_plot_script(report_path: str) -> str | None:
    """Write a standalone matplotlib script next to an existing report.

    The script reads only the report files; it is written, never executed.
    Returns the script path, or None if the report kind has no plot.
    """
    path = Path(report_path)
    if not path.exists():
        raise FileNotFoundError(f"report {report_path} does not exist")
    header_cmd = None
    try:
        lines = path.read_text().splitlines()
        if len(lines) >= 2 and lines[0].startswith("command"):
            header_cmd = lines[1].split(",")[0]
    except UnicodeDecodeError:
        return None
    if header_cmd in ("approximate", "sweep"):
        if header_cmd == "sweep" or not Path(str(path) + ".curve.csv").exists():
            body = _PLOT_SWEEP.format(report=path.name)
        else:
            body = _PLOT_OVERLAY.format(curve=path.name + ".curve.csv")
    elif header_cmd == "indicator-demo":
        if not Path(str(path) + ".curve.csv").exists():
            return None
        body = _PLOT_ENVELOPE.format(curve=path.name + ".curve.csv")
    else:
        return None
    script_path = str(path) + ".plot.py"
    Path(script_path).write_text(body)
    return script_path


_PLOT_SWEEP = '''"""Plot sup error against grid size from a sweep report."""
import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = list(csv.DictReader(Path(__file__).with_name("{report}").open()))
p = [float(r["P_or_Nx"]) for r in rows]
err = [float(r["sup_err"]) for r in rows]
plt.figure(figsize=(5, 4))
plt.loglog(p, err, "o-")
plt.xlabel("grid points per axis")
plt.ylabel("sup error")
plt.grid(True, which="both", alpha=0.3)
plt.tight_layout()
plt.savefig(Path(__file__).with_suffix(".png"))
'''

_PLOT_OVERLAY = '''"""Overlay the target and its constructed approximant on [-D, D]."""
import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = list(csv.DictReader(Path(__file__).with_name("{curve}").open()))
x = [float(r["x"]) for r in rows]
plt.figure(figsize=(6, 4))
plt.plot(x, [float(r["target"]) for r in rows], label="target")
plt.plot(x, [float(r["approximant"]) for r in rows], "--", label="approximant")
plt.legend()
plt.xlabel("z")
plt.tight_layout()
plt.savefig(Path(__file__).with_suffix(".png"))
'''

_PLOT_ENVELOPE = '''"""Plot the max-affine envelope, its cells, and the step target."""
import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

rows = list(csv.DictReader(Path(__file__).with_name("{curve}").open()))
x = [float(r["x"]) for r in rows]
cells = [int(r["cell"]) for r in rows]
plt.figure(figsize=(6, 4))
plt.plot(x, [float(r["envelope"]) for r in rows], label="max-affine envelope")
plt.step(x, [float(r["step"]) for r in rows], where="post", label="step target")
for i in range(1, len(x)):
    if cells[i] != cells[i - 1]:
        plt.axvline(x[i], color="gray", linestyle=":", alpha=0.7)
plt.legend()
plt.xlabel("z")
plt.tight_layout()
plt.savefig(Path(__file__).with_suffix(".png"))
'''

_COMMANDS = {
    "approximate": run_approximate,
    "cross": run_cross,
    "cover": run_cover,
    "indicator-demo": run_indicator_demo,
    "sweep": run_sweep,
    "verify": run_verify,
    "params-count": run_params_count,
}


def run(config: RunConfig) -> int:
    """Execute one configured command; returns the process exit code."""
    try:
        return _COMMANDS[config.command](config)
    except CapExceeded as exc:
        print(f"error: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP_EXCEEDED
    except RuntimeError as exc:
        print(f"error: verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except (UsageError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> tuple:
    return tuple(int(tok) for tok in str(text).split(","))


def _float_list(text: str) -> tuple:
    return tuple(float(tok) for tok in str(text).split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="maxaffine-attn", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="JSON file with the same keys as the flags")
    parser.add_argument("--function", help="registry name, optionally name:arg")
    parser.add_argument("--d", type=int, help="token dimension")
    parser.add_argument("--n", type=int, help="sequence length")
    parser.add_argument("--D", type=float, dest="half_width",
                        help="domain half width")
    parser.add_argument("--P", type=_int_list, dest="p",
                        help="grid points per axis, or comma list for sweep")
    parser.add_argument("--centers", type=int, help="cover size N_x")
    parser.add_argument("--cover", help="cover file (radius line + centers)")
    parser.add_argument("--temperature", type=_float_list,
                        help="softmax temperature, or comma list for sweep")
    parser.add_argument("--epsilon", type=float,
                        help="target accuracy; picks the temperature")
    parser.add_argument("--p", type=float, dest="p_norm", help="L_p exponent")
    parser.add_argument("--samples", type=int, help="Monte Carlo sample count")
    parser.add_argument("--seed", type=int, help="RNG seed")
    parser.add_argument("--out", help="report path (stdout if omitted)")
    parser.add_argument("--format", choices=("csv", "json"), dest="fmt")
    return parser


_CONFIG_KEYS = {
    "function": ("function", str),
    "d": ("d", int),
    "n": ("n", int),
    "D": ("half_width", float),
    "P": ("p_list", _int_list),
    "centers": ("centers", int),
    "cover": ("cover_path", str),
    "temperature": ("temperature_list", _float_list),
    "epsilon": ("epsilon", float),
    "p": ("p_norm", float),
    "samples": ("samples", int),
    "seed": ("seed", int),
    "out": ("out", str),
    "format": ("fmt", str),
}


def config_from_args(argv) -> RunConfig:
    """Parse flags, merge an optional JSON config file (flags win)."""
    ns = build_parser().parse_args(argv)
    config = RunConfig(command=ns.command)
    if ns.config:
        try:
            doc = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}")
        for key, value in doc.items():
            if key not in _CONFIG_KEYS:
                raise UsageError(f"unknown config key {key!r}")
            attr, cast = _CONFIG_KEYS[key]
            if value is not None:
                if isinstance(value, list):
                    value = ",".join(str(v) for v in value)
                setattr(config, attr, cast(value))
    overrides = {
        "function": ns.function, "d": ns.d, "n": ns.n,
        "half_width": ns.half_width, "p_list": ns.p, "centers": ns.centers,
        "cover_path": ns.cover, "temperature_list": ns.temperature,
        "epsilon": ns.epsilon, "p_norm": ns.p_norm, "samples": ns.samples,
        "seed": ns.seed, "out": ns.out, "fmt": ns.fmt,
    }
    for attr, value in overrides.items():
        if value is not None:
            setattr(config, attr, value)
    return config


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = config_from_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
