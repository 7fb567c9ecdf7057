"""Command-line front end.

Each experiment command writes into ``--out DIR``:

* ``trajectory.csv`` with header ``t_ns,p1_q0,p1_q1,...,p1_qN,photon_p1,photon_mean``
  (Q0 is the ancilla; floats carry 12 significant digits),
* ``summary.json`` with the fit results,
* ``manifest.json`` (experiment, N, m, seed, config digest, engine, version,
  timestamp),
* ``plot.py``, a matplotlib script that draws the trajectory.

The device config format is described in :mod:`rads.config`; ``--config``
falls back to ``$RADS_CONFIG`` and then to the built-in ``paper-default``.

Exit codes: 0 success, 1 failed ``verify``, 2 bad config or arguments,
3 schedule parse or validation errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import expected_frequency, fit_rabi, fit_scaling
from .config import ENGINES, ConfigError, RunConfig, load, load_default
from .evolve import Trajectory, run
from .schedule import (
    ScheduleError,
    absorb_protocol,
    parse_schedule,
    render,
    singlet_protocol,
    subradiance_protocol,
    superradiance_protocol,
    switch_protocol,
    switch_time,
)

ENV_CONFIG = "RADS_CONFIG"
SUM_RULE_TOL = 1e-9


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def trajectory_csv(traj: Trajectory) -> str:
    nq = traj.p1.shape[1]
    header = ["t_ns"] + [f"p1_q{j}" for j in range(nq)] + ["photon_p1", "photon_mean"]
    lines = [",".join(header)]
    for t, p1, ph1, phm in zip(traj.times, traj.p1, traj.photon_p1, traj.photon_mean):
        lines.append(",".join([_fmt(t), *map(_fmt, p1), _fmt(ph1), _fmt(phm)]))
    return "\n".join(lines) + "\n"


PLOT_TEMPLATE = '''\
"""Plot {experiment}: qubit P1 and resonator population versus time."""
import csv
import matplotlib.pyplot as plt

with open({csv!r}) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t_ns"]) for r in rows]
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4), sharex=True)
for key in rows[0]:
    if key.startswith("p1_q") and key != "p1_q0":
        ax1.plot(t, [float(r[key]) for r in rows], label=key[3:].upper())
ax1.set_xlabel("t (ns)")
ax1.set_ylabel("P1")
ax1.legend(fontsize="small", ncol=2)
ax2.plot(t, [float(r["photon_p1"]) for r in rows], color="k")
ax2.set_xlabel("t (ns)")
ax2.set_ylabel("resonator P(n=1)"){annotate}
fig.suptitle({title!r})
fig.tight_layout()
fig.savefig({png!r}, dpi=150)
'''

SCALING_PLOT = '''\
"""Plot fitted Rabi frequency versus N with the power-law fit."""
import csv
import matplotlib.pyplot as plt
import numpy as np

with open("frequencies.csv") as fh:
    rows = list(csv.DictReader(fh))
n = np.array([float(r["n"]) for r in rows])
f = np.array([float(r["frequency_mhz"]) for r in rows])
nn = np.linspace(1, n.max(), 200)
plt.plot(n, f, "o", label="simulation")
plt.plot(nn, {prefactor!r} * nn ** {exponent!r}, label="fit: {prefactor:.3f} N^{exponent:.4f} MHz")
plt.xlabel("N")
plt.ylabel("Rabi frequency (MHz)")
plt.legend()
plt.savefig("scaling.png", dpi=150)
'''


def _write_outputs(out: Path, experiment: str, traj: Trajectory, summary: dict,
                   manifest: dict, switch_at: float | None = None):
    out.mkdir(parents=True, exist_ok=True)
    (out / "trajectory.csv").write_text(trajectory_csv(traj))
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    annotate = ""
    if switch_at is not None:
        annotate = (
            f"\nfor ax in (ax1, ax2):\n    ax.axvline({switch_at!r}, ls='--', color='gray')"
        )
    (out / "plot.py").write_text(
        PLOT_TEMPLATE.format(
            experiment=experiment, csv="trajectory.csv", png=f"{experiment}.png",
            title=experiment, annotate=annotate,
        )
    )


def _manifest(args, cfg: RunConfig, experiment: str, **extra) -> dict:
    m = {
        "experiment": experiment,
        "n": getattr(args, "n", None),
        "m": getattr(args, "m", None),
        "seed": cfg.seed,
        "disorder_g_pct": cfg.disorder_g_pct,
        "disorder_crosstalk_mhz": cfg.disorder_crosstalk_mhz,
        "config_digest": cfg.digest,
        "engine": cfg.engine,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    m.update(extra)
    return m


def _fit_summary(times, values) -> dict:
    fit = fit_rabi(times, values)
    if not fit.detected:
        return {"oscillation": "no oscillation detected", "peak_amplitude": fit.peak_amplitude}
    return {
        "oscillation": "detected",
        "frequency_mhz": fit.frequency,
        "amplitude": fit.amplitude,
        "peak_to_peak": fit.peak_to_peak,
        "offset": fit.offset,
        "phase_rad": fit.phase,
        "residual_rms": fit.residual_rms,
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _simulate(schedule, cfg: RunConfig) -> Trajectory:
    return run(schedule, cfg.device, engine=cfg.engine)


def _build(builder, *a, **kw):
    try:
        return builder(*a, **kw)
    except ScheduleError as exc:
        raise CliError(str(exc), 2) from None


def cmd_superradiance(args, cfg: RunConfig) -> int:
    sched = _build(superradiance_protocol, args.n, device=cfg.base)
    traj = _simulate(sched, cfg)
    g = cfg.base.g_mean_mhz
    summary = {"n": args.n, "photon_max": float(traj.photon_p1.max()),
               "photon_min": float(traj.photon_p1.min()),
               "expected_frequency_mhz": expected_frequency(args.n, g)}
    summary.update(_fit_summary(traj.times, traj.photon_p1))
    ref = _simulate(_build(superradiance_protocol, 1, device=cfg.base), cfg)
    f1 = fit_rabi(ref.times, ref.photon_p1)
    if f1.detected and summary["oscillation"] == "detected":
        summary["single_qubit_frequency_mhz"] = f1.frequency
        summary["ratio_to_single_qubit"] = summary["frequency_mhz"] / f1.frequency
        summary["sqrt_n"] = math.sqrt(args.n)
    _write_outputs(Path(args.out), "superradiance", traj, summary,
                   _manifest(args, cfg, "superradiance"))
    print(_headline(summary))
    return 0


def cmd_subradiance(args, cfg: RunConfig) -> int:
    sched = _build(subradiance_protocol, args.n, args.m, device=cfg.base)
    traj = _simulate(sched, cfg)
    summary = {
        "n": args.n, "m": args.m,
        "photon_max": float(traj.photon_p1.max()),
        "p1_max_deviation_from_1_over_n": float(np.abs(traj.register_p1 - 1 / args.n).max()),
    }
    summary.update(_fit_summary(traj.times, traj.photon_p1))
    _write_outputs(Path(args.out), "subradiance", traj, summary,
                   _manifest(args, cfg, "subradiance"))
    print(_headline(summary))
    return 0


def _scaling_point(n: int, cfg: RunConfig):
    traj = _simulate(_build(superradiance_protocol, n, device=cfg.base), cfg)
    fit = fit_rabi(traj.times, traj.photon_p1)
    return n, fit


def cmd_scaling(args, cfg: RunConfig) -> int:
    ns = sorted(set(args.ns)) if args.ns else list(range(1, cfg.base.n_qubits))
    if len(ns) < 3:
        raise CliError(f"need >= 3 points for a scaling fit, got {len(ns)}", 2)
    bad = [n for n in ns if not 1 <= n <= cfg.base.n_qubits - 1]
    if bad:
        raise CliError(f"N values {bad} outside 1..{cfg.base.n_qubits - 1}", 2)
    with ThreadPoolExecutor(max_workers=min(len(ns), os.cpu_count() or 1)) as pool:
        results = sorted(pool.map(lambda n: _scaling_point(n, cfg), ns), key=lambda r: r[0])
    missing = [n for n, fit in results if not fit.detected]
    if missing:
        raise CliError(f"no oscillation detected for N = {missing}", 2)
    freqs = [fit.frequency for _, fit in results]
    sfit = fit_scaling(ns, freqs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = ["n,frequency_mhz,amplitude,residual_rms"]
    rows += [f"{n},{_fmt(fit.frequency)},{_fmt(fit.amplitude)},{_fmt(fit.residual_rms)}"
             for n, fit in results]
    (out / "frequencies.csv").write_text("\n".join(rows) + "\n")
    summary = {
        "exponent": sfit.exponent,
        "prefactor_mhz": sfit.prefactor,
        "covariance_diagonal": list(sfit.covariance_diagonal),
        "expected_prefactor_mhz": 2 * cfg.base.g_mean_mhz,
        "frequencies_mhz": {str(n): f for n, f in zip(ns, freqs)},
    }
    (out / "scaling.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    (out / "manifest.json").write_text(
        json.dumps(_manifest(args, cfg, "scaling", ns=ns), indent=2, sort_keys=True) + "\n")
    (out / "plot.py").write_text(SCALING_PLOT.format(prefactor=sfit.prefactor, exponent=sfit.exponent))
    print(f"exponent {sfit.exponent:.6f}  prefactor {sfit.prefactor:.6f} MHz")
    return 0


def cmd_switch(args, cfg: RunConfig) -> int:
    sched = _build(switch_protocol, args.n, args.t_store, device=cfg.base)
    traj = _simulate(sched, cfg)
    t_sw = switch_time(args.n, args.t_store, cfg.base)
    pre = traj.window(-math.inf, t_sw - 1e-6)
    post = traj.window(t_sw, math.inf)
    summary = {
        "n": args.n, "t_store_ns": args.t_store, "switch_time_ns": t_sw,
        "pre_switch_photon_max": float(pre.photon_p1.max()) if len(pre.times) else 0.0,
        "expected_frequency_mhz": expected_frequency(args.n, cfg.base.g_mean_mhz),
    }
    summary.update({f"post_switch_{k}": v for k, v in _fit_summary(post.times, post.photon_p1).items()})
    _write_outputs(Path(args.out), "switch", traj, summary,
                   _manifest(args, cfg, "switch", t_store_ns=args.t_store, switch_time_ns=t_sw),
                   switch_at=t_sw)
    print(f"switch at {t_sw:.6f} ns; " + _headline(summary))
    return 0


def cmd_absorb(args, cfg: RunConfig) -> int:
    sched = _build(absorb_protocol, args.n, device=cfg.base)
    traj = _simulate(sched, cfg)
    summary = {"n": args.n,
               "expected_frequency_mhz": expected_frequency(args.n - 2, cfg.base.g_mean_mhz)}
    summary.update(_fit_summary(traj.times, traj.photon_p1))
    _write_outputs(Path(args.out), "absorb", traj, summary, _manifest(args, cfg, "absorb"))
    print(_headline(summary))
    return 0


def cmd_singlet(args, cfg: RunConfig) -> int:
    sched = _build(singlet_protocol, args.photon, device=cfg.base)
    traj = _simulate(sched, cfg)
    qubit_exc = traj.register_p1.sum(axis=1)
    exchange = float(np.abs(qubit_exc - qubit_exc[0]).max())
    summary = {
        "photon": args.photon,
        "max_excitation_exchange": exchange,
        "exchange_fraction_of_two_quanta": exchange / 2.0,
        "max_observable_variation": float(max(np.ptp(traj.p1, axis=0).max(),
                                              np.ptp(traj.photon_dist, axis=0).max())),
    }
    _write_outputs(Path(args.out), "singlet", traj, summary,
                   _manifest(args, cfg, "singlet", photon=args.photon))
    print(f"max excitation exchange {exchange:.3e} ({100 * exchange / 2:.3f}% of two quanta)")
    return 0


def cmd_run(args, cfg: RunConfig) -> int:
    path = Path(args.schedule)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read schedule {path}: {exc.strerror}", 3) from None
    try:
        sched = parse_schedule(text)
        traj = _simulate(sched, cfg)
    except ScheduleError as exc:
        raise CliError(f"{path}: {exc}", 3) from None
    summary = {"n": sched.n_qubits, "samples": int(len(traj.times))}
    if len(traj.times) >= 8:
        summary.update(_fit_summary(traj.times, traj.photon_p1))
    _write_outputs(Path(args.out), path.stem, traj, summary,
                   _manifest(args, cfg, "run", schedule=str(path)))
    print(f"{len(traj.times)} samples written to {args.out}")
    return 0


def cmd_render(args, cfg: RunConfig) -> int:
    builders = {
        "superradiance": lambda: superradiance_protocol(args.n, device=cfg.base),
        "subradiance": lambda: subradiance_protocol(args.n, args.m, device=cfg.base),
        "switch": lambda: switch_protocol(args.n, args.t_store, device=cfg.base),
        "absorb": lambda: absorb_protocol(args.n, device=cfg.base),
        "singlet": lambda: singlet_protocol(args.photon, device=cfg.base),
    }
    text = render(_build(builders[args.protocol]))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def verify_csv(path) -> list[str]:
    """Rows whose sum_j P1_j + <n> is not an integer to within 1e-9."""
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    p1_cols = [i for i, h in enumerate(header) if h.startswith("p1_q")]
    mean_col = header.index("photon_mean")
    bad = []
    for lineno, row in enumerate(lines[1:], start=2):
        vals = [float(x) for x in row.split(",")]
        total = sum(vals[i] for i in p1_cols) + vals[mean_col]
        if abs(total - round(total)) > SUM_RULE_TOL:
            bad.append(f"line {lineno} (t={vals[0]} ns): excitation sum {total!r}")
    return bad


def cmd_verify(args, cfg: RunConfig) -> int:
    try:
        bad = verify_csv(args.csv)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot verify {args.csv}: {exc}", 2) from None
    if bad:
        print("excitation sum rule violated:\n  " + "\n  ".join(bad[:20]))
        return 1
    print(f"{args.csv}: excitation sum rule holds on every row")
    return 0


def _headline(summary: dict) -> str:
    if summary.get("oscillation") == "no oscillation detected" or \
            summary.get("post_switch_oscillation") == "no oscillation detected":
        return f"no oscillation detected; max photon {summary.get('photon_max', 0.0):.3e}"
    f = summary.get("frequency_mhz", summary.get("post_switch_frequency_mhz"))
    txt = f"Rabi frequency {f:.6f} MHz"
    if "ratio_to_single_qubit" in summary:
        txt += f"; f_N/f_1 = {summary['ratio_to_single_qubit']:.6f} (sqrt N = {summary['sqrt_n']:.6f})"
    return txt


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, out=True):
    p.add_argument("--config", help=f"device config file (default: ${ENV_CONFIG} or paper-default)")
    p.add_argument("--seed", type=int, help="disorder seed")
    p.add_argument("--engine", choices=ENGINES)
    p.add_argument("--disorder", type=float, metavar="PCT", help="coupling disorder, percent")
    p.add_argument("--crosstalk", type=float, metavar="MHZ", help="random pair crosstalk bound")
    if out:
        p.add_argument("--out", default="out", metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rads", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("superradiance", help="bright-state swap dynamics")
    p.add_argument("--n", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_superradiance)

    p = sub.add_parser("subradiance", help="dark-state swap dynamics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_subradiance)

    p = sub.add_parser("scaling", help="Rabi frequency versus N and power-law fit")
    p.add_argument("--ns", type=int, nargs="+", help="register sizes (default 1..device-1)")
    _common(p)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("switch", help="store in the dark state, then switch to bright")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t-store", type=float, default=100.0, metavar="NS")
    _common(p)
    p.set_defaults(func=cmd_switch)

    p = sub.add_parser("absorb", help="dark state absorbing a second photon")
    p.add_argument("--n", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_absorb)

    p = sub.add_parser("singlet", help="four-qubit singlet with 0 or 1 photon")
    p.add_argument("--photon", type=int, choices=(0, 1), default=0)
    _common(p)
    p.set_defaults(func=cmd_singlet)

    p = sub.add_parser("run", help="run a schedule file")
    p.add_argument("schedule")
    _common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("render", help="write a protocol as schedule text")
    p.add_argument("protocol", choices=("superradiance", "subradiance", "switch", "absorb", "singlet"))
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--t-store", type=float, default=100.0)
    p.add_argument("--photon", type=int, choices=(0, 1), default=0)
    p.add_argument("-o", "--output")
    _common(p, out=False)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="check the excitation sum rule in a trajectory CSV")
    p.add_argument("csv")
    p.set_defaults(func=cmd_verify)
    return parser


def _load_config(args) -> RunConfig:
    path = getattr(args, "config", None) or os.environ.get(ENV_CONFIG)
    if path in (None, "", "paper-default"):
        cfg = load_default()
    else:
        cfg = load(path)
    return cfg.override(
        seed=getattr(args, "seed", None),
        engine=getattr(args, "engine", None),
        disorder_g_pct=getattr(args, "disorder", None),
        disorder_crosstalk_mhz=getattr(args, "crosstalk", None),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        if cfg.disorder_g_pct < 0 or cfg.disorder_crosstalk_mhz < 0:
            raise ConfigError("disorder magnitudes must be >= 0")
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"rads: config error: {exc}", file=sys.stderr)
        return 2
    except CliError as exc:
        print(f"rads: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
