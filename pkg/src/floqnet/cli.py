"""Command-line entry point: build, network, montecarlo, report.

Every command reads one flat key-value config (``--config``), applies
any ``--seed``/``--out``/``--shots`` overrides, and writes its reports
under the output directory.  All randomness flows from the single root
seed: the network command passes it straight to the heralding sampler,
and the Monte Carlo sweep gives the point at index i of ``p_checks``
the stream ``seed + 7919 * i``, shared across lattice labels so size
comparisons see common noise strengths.  Outputs carry no timestamps
and land via temp-file-plus-rename, so a fixed seed reproduces every
file byte for byte and an interrupted sweep leaves only whole points.

Exit codes:
    0  success
    2  config error: unreadable file, unknown key, invalid value
    3  verification failure: a built code or schedule failed its checks
    4  runtime failure: unexpected error during execution

``FLOQNET_LOG`` sets stderr log verbosity (``debug``, ``info``,
``warning``; default ``warning``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from floqnet.codes import css_validate
from floqnet.config import ConfigError, ExperimentConfig, load_config
from floqnet.floquet import pairwise_decompose, verify_period
from floqnet.network import herald_time, purify, simulate_heralding
from floqnet.noise_mc import estimate_crossing, run_sweep, write_sweep_csv
from floqnet.resource import estimate_cycle, sweep_point, throughput_report

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_RUNTIME = 4

log = logging.getLogger("floqnet")


# output plumbing -----------------------------------------------------------

def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp~")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _write_via(path: Path, writer) -> None:
    """Atomic wrapper for library writers that take a path."""
    tmp = path.with_name(path.name + ".tmp~")
    writer(tmp)
    os.replace(tmp, path)


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# commands ------------------------------------------------------------------

def cmd_build(cfg: ExperimentConfig) -> int:
    """Construct the configured code and schedule, verify, write both."""
    out = _out_dir(cfg)
    report: dict = {"code_kind": cfg.code}
    failed = False

    if cfg.code == "honeycomb":
        schedule = cfg.build_schedule()
        report["code"] = {"lx": cfg.lx, "ly": cfg.ly, "n": schedule.n,
                          "k": schedule.parent_k}
    else:
        try:
            code = cfg.build_code()
        except (ValueError, OSError) as err:
            report["code"] = {"passed": False, "error": str(err)}
            _write_atomic(out / "build_report.json", _json_text(report))
            print(f"build: {cfg.code} verification FAIL ({err})")
            return EXIT_VERIFY
        validation = css_validate(code)
        report["code"] = {
            "n": code.n,
            "k": code.k,
            "weight_histogram": {str(w): c for w, c in
                                 sorted(validation.weight_histogram.items())},
            "orthogonal": validation.orthogonal,
            "passed": validation.passed,
            "failures": list(validation.failures),
        }
        failed |= not validation.passed
        _write_via(out / "hx.txt", code.hx.save)
        _write_via(out / "hz.txt", code.hz.save)
        schedule = pairwise_decompose(code)

    _write_via(out / "schedule.txt", schedule.save)
    verification = verify_period(schedule, seed=cfg.seed)
    failed |= not verification.passed
    report["schedule"] = {
        "n": schedule.n,
        "period": schedule.period,
        "checks_per_period": schedule.check_count,
        "nonlocal_count": schedule.nonlocal_count,
        "nominal_slots": schedule.nominal_slots,
    }
    report["verification"] = verification.to_dict()
    _write_atomic(out / "build_report.json", _json_text(report))

    status = "FAIL" if failed else "PASS"
    print(f"build: {cfg.code} n={schedule.n} period={schedule.period} "
          f"verification {status}")
    print(f"build: wrote {out / 'build_report.json'}")
    return EXIT_VERIFY if failed else EXIT_OK


HERALD_CSV_COLUMNS = ["eta", "p_succ", "attempts_quantile",
                      "expected_attempts", "t_herald_us", "fidelity"]


def cmd_network(cfg: ExperimentConfig) -> int:
    """Herald timing, sampled attempt counts, and the cycle estimate."""
    out = _out_dir(cfg)
    p = cfg.params

    stats = herald_time(p)
    sample = simulate_heralding(p, pair_count=cfg.shots, seed=cfg.seed)
    _write_via(out / "herald_histogram.csv", sample.write_histogram_csv)

    lines = [",".join(HERALD_CSV_COLUMNS)]
    for eta in cfg.eta_sweep:
        row = herald_time(p.override(eta=eta))
        lines.append(",".join([
            repr(eta), repr(row.p_succ), str(row.attempts_quantile),
            repr(row.expected_attempts), repr(row.t_herald * 1e6),
            repr(row.fidelity),
        ]))
    _write_atomic(out / "herald_sweep.csv", "\n".join(lines) + "\n")

    schedule = cfg.build_schedule()
    part = cfg.build_partition(schedule.n)
    est = estimate_cycle(schedule, part, p, cfg.distill_rounds)
    f_out, p_accept = purify(p.bell_fidelity)
    summary = {
        "herald": {
            "p_succ": stats.p_succ,
            "attempts_quantile": stats.attempts_quantile,
            "expected_attempts": stats.expected_attempts,
            "t_herald_us": stats.t_herald * 1e6,
            "fidelity": stats.fidelity,
        },
        "sampled_pairs": cfg.shots,
        "sampled_success_fraction": sample.success_fraction,
        "purify_once": {"f_out": f_out, "p_accept": p_accept},
        "cycle": est.to_dict(),
        "tau_cycle_us": est.tau_cycle * 1e6,
        "seed": cfg.seed,
    }
    _write_atomic(out / "network_summary.json", _json_text(summary))

    print(f"network: t_herald = {stats.t_herald * 1e6:.4g} us "
          f"(p_succ = {stats.p_succ:.4g}, quantile n = {stats.attempts_quantile})")
    print(f"network: tau_sub = {est.tau_sub * 1e6:.4g} us, "
          f"tau_cycle = {est.tau_cycle * 1e6:.4g} us (c_seq = {est.c_seq})")
    print(f"network: wrote {out / 'network_summary.json'}")
    return EXIT_OK


def cmd_montecarlo(cfg: ExperimentConfig) -> int:
    """Logical-error sweep over p_check and lattice size, with crossing."""
    out = _out_dir(cfg)
    schedules = cfg.lattice_schedules()
    csv_path = out / "sweep.csv"

    def on_row(rows_so_far):
        _write_via(csv_path, lambda p: write_sweep_csv(rows_so_far, p))
        last = rows_so_far[-1]
        log.info("montecarlo: %s p_check=%g rate=%g",
                 last["lattice"], last["p_check"], last["rate"])

    rows = run_sweep(schedules, cfg.p_checks, shots=cfg.shots,
                     cycles=cfg.cycles, seed=cfg.seed, nm_base=cfg.noise,
                     on_row=on_row)

    labels = sorted(schedules, key=lambda lb: schedules[lb].n)
    crossing = None
    if len(labels) >= 2:
        crossing = estimate_crossing(rows, small=labels[0], large=labels[-1])
    summary = {
        "lattices": list(cfg.lattices),
        "p_checks": list(cfg.p_checks),
        "shots": cfg.shots,
        "cycles": cfg.cycles,
        "seed": cfg.seed,
        "crossing_p_check": crossing,
        "rows": rows,
    }
    _write_atomic(out / "mc_summary.json", _json_text(summary))

    for row in rows:
        print(f"montecarlo: {row['lattice']:>6} p_check={row['p_check']:<8g} "
              f"rate={row['rate']:.4g} (+-{row['std_err']:.2g})")
    if crossing is not None:
        print(f"montecarlo: crossing near p_check = {crossing:.4g}")
    else:
        print("montecarlo: no crossing inside the swept range")
    print(f"montecarlo: wrote {csv_path}")
    return EXIT_OK


def cmd_report(cfg: ExperimentConfig) -> int:
    """Throughput table across lattice sizes and distillation choices."""
    out = _out_dir(cfg)
    points = []
    for label, schedule in cfg.lattice_schedules().items():
        part = cfg.build_partition(schedule.n)
        for rounds in range(cfg.distill_rounds + 1):
            name = label if rounds == 0 else f"{label}+distill{rounds}"
            points.append(sweep_point(name, schedule, part, cfg.params, rounds))
    rep = throughput_report(points)
    _write_via(out / "throughput.csv", rep.write_csv)
    _write_atomic(out / "throughput.json", _json_text(rep.to_dict()))
    print(rep.to_table())
    print(f"report: wrote {out / 'throughput.csv'}")
    return EXIT_OK


# argument plumbing ---------------------------------------------------------

def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.out is not None:
        changes["out"] = args.out
    if args.shots is not None:
        changes["shots"] = args.shots
    if not changes:
        return cfg
    try:
        return replace(cfg, **changes)
    except ConfigError:
        raise
    except ValueError as err:
        raise ConfigError(str(err)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floqnet",
        description="Floquet-code simulator and network resource estimator.",
        epilog="Exit codes: 0 success, 2 config error, 3 verification "
               "failure, 4 runtime failure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_text in [
        ("build", cmd_build, "construct and verify the configured code and schedule"),
        ("network", cmd_network, "herald timing, heralding sample, cycle estimate"),
        ("montecarlo", cmd_montecarlo, "logical-error sweep over p_check and size"),
        ("report", cmd_report, "throughput table across sizes and distillation"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.set_defaults(fn=fn)
        cmd.add_argument("--config", required=True, help="flat key-value config file")
        cmd.add_argument("--seed", type=int, default=None,
                         help="override the root seed")
        cmd.add_argument("--out", default=None, help="override the output directory")
        cmd.add_argument("--shots", type=int, default=None,
                         help="override the shot / pair budget")
    return parser


def _setup_logging() -> None:
    level_name = os.environ.get("FLOQNET_LOG", "warning").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(name)s %(levelname)s %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.fn(cfg)
    except ValueError as err:
        print(f"runtime failure: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as err:
        print(f"runtime failure: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
