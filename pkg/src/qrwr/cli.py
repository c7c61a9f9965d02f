"""Command-line interface: JSON single results, CSV/JSON report files, figures.

Exit status: 0 success, 1 domain/infeasibility error, 2 configuration error.
All randomness is controlled by --seed (or the [mc] section); no environment
variables are consulted.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .background import background_counts, background_variance
from .config import (
    ScenarioConfig,
    build_mc_config,
    build_sweep_spec,
    config_hash,
    parse_config,
)
from .detection import (
    Protocol,
    error_probability,
    rm_ratio,
    snr_gs,
    snr_sp,
    snr_target,
)
from .errors import ConfigError, DomainError, InfeasibleError
from .linkbudget import Weather, atmosphere_attenuation, geometric_return
from .montecarlo import simulate_direct_detection, simulate_sp_covariance, validate_erfc
from .sweep import (
    Quantity,
    compose_link,
    contour_rm_unity,
    scenario_line,
    sweep_grid,
)


def _round_floats(obj):
    """Round every float to 12 significant digits for stable JSON text."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _envelope(command: str, cfg: ScenarioConfig, payload: dict) -> dict:
    return {
        "command": command,
        "config_hash": config_hash(cfg),
        "engine_version": __version__,
        "generated_utc": datetime.now(timezone.utc).isoformat(),
        "payload": _round_floats(payload),
    }


def _emit(envelope: dict, out: str | None) -> None:
    text = json.dumps(envelope, indent=2) + "\n"
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def _load_config(path: str | None) -> ScenarioConfig:
    if path is None:
        return parse_config("")
    return parse_config(Path(path).read_text())


def _point_link(cfg: ScenarioConfig):
    geometry = dataclasses.replace(cfg.geometry, range_m=cfg.range_km * 1000.0)
    eta_atm = atmosphere_attenuation(cfg.range_km, cfg.weather, cfg.atmosphere)
    return eta_atm, compose_link(geometry, eta_atm, cfg.eta_det, cfg.eta_idler)


def _cmd_snr(cfg: ScenarioConfig, args: argparse.Namespace) -> dict:
    eta_atm, link = _point_link(cfg)
    var_bg = background_variance(cfg.background)
    var_bg_target = background_variance(cfg.target_background or cfg.background)
    k = args.k
    target = snr_target(k, link.eta_t, cfg.signal, var_bg_target, approximate=cfg.approximate)
    radar_fn = snr_gs if cfg.protocol is Protocol.QI_GAUSSIAN else snr_sp
    radar = radar_fn(k, link.eta_r, link.eta_anc, cfg.signal, var_bg)
    return {
        "protocol": cfg.protocol.value,
        "k": k,
        "range_km": cfg.range_km,
        "weather": cfg.weather.value,
        "eta_atm": eta_atm,
        "eta_x": geometric_return(cfg.geometry.rcs_m2, cfg.range_km * 1000.0),
        "eta_t": link.eta_t,
        "eta_r": link.eta_r,
        "eta_anc": link.eta_anc,
        "ratio": link.ratio,
        "n_s": cfg.signal.total,
        "n_b": background_counts(cfg.background),
        "var_bg": var_bg,
        "snr_target": target,
        "p_err_target": error_probability(target),
        "snr_radar": radar,
        "p_err_radar": error_probability(radar),
    }


def _cmd_perr(args: argparse.Namespace) -> dict:
    return {"snr": args.snr, "p_err": error_probability(args.snr)}


def _cmd_rm(cfg: ScenarioConfig) -> dict:
    eta_atm, link = _point_link(cfg)
    if cfg.protocol is Protocol.TARGET_DIRECT:
        # symmetry diagnostic: both sides count directly with equal efficiency
        eta_r = link.eta_t
    else:
        eta_r = link.eta_r
    result = rm_ratio(
        cfg.protocol,
        cfg.p_err,
        eta_t=link.eta_t,
        eta_r=eta_r,
        eta_anc=link.eta_anc,
        signal=cfg.signal,
        background=cfg.background,
        target_background=cfg.target_background,
        approximate=cfg.approximate,
        undetectable_threshold=cfg.undetectable_threshold,
    )
    return {
        "protocol": cfg.protocol.value,
        "p_err": cfg.p_err,
        "range_km": cfg.range_km,
        "weather": cfg.weather.value,
        "eta_atm": eta_atm,
        "eta_t": link.eta_t,
        "eta_r": eta_r,
        "eta_anc": link.eta_anc,
        "ratio": link.ratio,
        "k_target": result.k_target,
        "k_radar": result.k_radar,
        "rm": result.rm,
        "regime": result.regime.value,
    }


def _write_sweep_outputs(cfg: ScenarioConfig, args: argparse.Namespace) -> dict:
    spec = build_sweep_spec(cfg)
    result = sweep_grid(spec)
    contour = None
    if spec.quantity is Quantity.RM:
        contour = contour_rm_unity(spec)

    out = Path(args.out)
    lines = ["x_name,y_name,value,feasible"]
    for i, xv in enumerate(result.x_grid):
        for j, yv in enumerate(result.y_grid):
            if result.feasible[i, j]:
                value_text = f"{result.values[i, j]:.12g}"
            else:
                value_text = ""
            lines.append(
                f"{xv:.12g},{yv:.12g},{value_text},{str(bool(result.feasible[i, j])).lower()}"
            )
    out.write_text("\n".join(lines) + "\n")

    figure_path = None
    if not args.no_plot:
        from .plots import save_sweep_heatmap

        figure_path = str(out.with_suffix(".png"))
        save_sweep_heatmap(result, figure_path, contour)

    payload = {
        "quantity": spec.quantity.value,
        "x": dataclasses.asdict(spec.x_axis),
        "y": dataclasses.asdict(spec.y_axis),
        "scenario_hash": result.scenario_hash,
        "nodes": int(result.values.size),
        "infeasible_nodes": int((~result.feasible).sum()),
        "csv": out.name,
        "figure": Path(figure_path).name if figure_path else None,
    }
    if contour is not None:
        payload["contour_points"] = [[x, y] for x, y in contour.points]
        payload["contour_missing_lines"] = list(contour.no_crossing)
    sidecar = _envelope("sweep", cfg, payload)
    sidecar_path = out.with_suffix(".json")
    sidecar_path.write_text(json.dumps(sidecar, indent=2) + "\n")
    print(f"wrote {out}")
    print(f"wrote {sidecar_path}")
    if figure_path:
        print(f"wrote {figure_path}")
    return payload


def _write_scenario_outputs(cfg: ScenarioConfig, args: argparse.Namespace) -> dict:
    weathers = {
        "good": [Weather.GOOD],
        "bad": [Weather.BAD],
        "both": [Weather.GOOD, Weather.BAD],
    }[cfg.scenario_weather]
    lines = []
    for weather in weathers:
        lines.append(
            scenario_line(
                cfg.scenario_ranges_km,
                weather,
                cfg.geometry,
                cfg.background,
                cfg.protocol,
                atmosphere=cfg.atmosphere,
                eta_det=cfg.eta_det,
                eta_idler=cfg.eta_idler,
                signal=cfg.signal,
                p_err=cfg.p_err,
                undetectable_threshold=cfg.undetectable_threshold,
            )
        )

    out = Path(args.out)
    rows = ["range_km,weather,eta_atm,eta_x,eta_r,eta_t,ratio,r_m"]
    for line in lines:
        for p in line.points:
            rows.append(
                f"{p.range_km:.12g},{p.weather.value},{p.eta_atm:.12g},{p.eta_x:.12g},"
                f"{p.eta_r:.12g},{p.eta_t:.12g},{p.ratio:.12g},{p.rm:.12g}"
            )
    out.write_text("\n".join(rows) + "\n")

    figure_path = None
    if not args.no_plot:
        from .plots import save_scenario_figure

        figure_path = str(out.with_suffix(".png"))
        save_scenario_figure(lines, figure_path)

    all_rm = [p.rm for line in lines for p in line.points]
    payload = {
        "protocol": cfg.protocol.value,
        "weathers": [w.value for w in weathers],
        "ranges_km": list(cfg.scenario_ranges_km),
        "p_err": cfg.p_err,
        "n_s": cfg.signal.total,
        "n_b": background_counts(cfg.background),
        "rows": len(all_rm),
        "rm_min": min(all_rm) if all_rm else None,
        "rm_max": max(all_rm) if all_rm else None,
        "csv": out.name,
        "figure": Path(figure_path).name if figure_path else None,
    }
    sidecar = _envelope("scenario", cfg, payload)
    sidecar_path = out.with_suffix(".json")
    sidecar_path.write_text(json.dumps(sidecar, indent=2) + "\n")
    print(f"wrote {out}")
    print(f"wrote {sidecar_path}")
    if figure_path:
        print(f"wrote {figure_path}")
    return payload


def _cmd_mc(cfg: ScenarioConfig, args: argparse.Namespace) -> dict:
    mc_cfg = build_mc_config(cfg, seed=args.seed)
    experiment = cfg.mc.experiment
    if experiment == "direct":
        reports = [simulate_direct_detection(mc_cfg)]
    elif experiment == "sp":
        reports = [simulate_sp_covariance(mc_cfg)]
    else:
        reports = validate_erfc(list(cfg.mc.snr_grid), mc_cfg)
    payload = {
        "experiment": experiment,
        "seed": mc_cfg.seed,
        "shots": mc_cfg.shots,
        "trials_per_shot": mc_cfg.trials_per_shot,
        "reports": [dataclasses.asdict(r) for r in reports],
    }
    if experiment == "erfc":
        payload["snr_grid"] = list(cfg.mc.snr_grid)
    return payload


def _cmd_selfcheck(args: argparse.Namespace) -> int:
    from .selfcheck import run_checks

    results = run_checks(fast=args.fast)
    failures = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"[{status}] check {r.ident}: {r.description}")
        print(f"       {r.detail}")
        failures += 0 if r.ok else 1
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrwr",
        description="Quantum-illumination radar vs warning-receiver detection tradeoffs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, out_default: str | None = None) -> None:
        p.add_argument("--config", help="scenario configuration file")
        p.add_argument("--out", default=out_default, help="output path")
        p.add_argument("--seed", type=int, default=None, help="random seed override")

    p_snr = sub.add_parser("snr", help="SNRs of both sides at the configured point")
    add_common(p_snr)
    p_snr.add_argument("--k", type=float, default=1.0, help="number of measurements")

    p_perr = sub.add_parser("perr", help="error probability for a given SNR")
    add_common(p_perr)
    p_perr.add_argument("--snr", type=float, required=True)

    p_rm = sub.add_parser("rm", help="measurement-count ratio at the configured point")
    add_common(p_rm)

    p_sweep = sub.add_parser("sweep", help="grid sweep to CSV + JSON sidecar + figure")
    add_common(p_sweep, out_default="sweep.csv")
    p_sweep.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    p_scen = sub.add_parser("scenario", help="range scenario lines to CSV + JSON + figure")
    add_common(p_scen, out_default="scenario.csv")
    p_scen.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    p_mc = sub.add_parser("mc", help="Monte Carlo experiment report")
    add_common(p_mc)

    p_check = sub.add_parser("selfcheck", help="run the embedded verification checks")
    p_check.add_argument("--fast", action="store_true", help="reduced Monte Carlo shots")

    return parser


def run_command(argv: list[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "selfcheck":
            return _cmd_selfcheck(args)
        cfg = _load_config(args.config)
        if args.command == "snr":
            _emit(_envelope("snr", cfg, _cmd_snr(cfg, args)), args.out)
        elif args.command == "perr":
            _emit(_envelope("perr", cfg, _cmd_perr(args)), args.out)
        elif args.command == "rm":
            _emit(_envelope("rm", cfg, _cmd_rm(cfg)), args.out)
        elif args.command == "sweep":
            _write_sweep_outputs(cfg, args)
        elif args.command == "scenario":
            _write_scenario_outputs(cfg, args)
        elif args.command == "mc":
            _emit(_envelope("mc", cfg, _cmd_mc(cfg, args)), args.out)
        return 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, InfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
