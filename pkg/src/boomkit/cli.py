"""Command-line entry point.

Subcommands: simulate, stability, fit, pes, serve. Every subcommand takes
--config PATH, repeatable --set KEY=VALUE overrides (applied after the file,
before validation), --out PATH and --seed N. Exit codes: 0 success, 1 usage
error, 2 data or validation error, 3 numerical divergence.

Outputs are deterministic: the same invocation with the same seed writes
byte-identical artifacts. Plots are data-only (overlay arrays inside the
report document); rendering belongs to the companion UI.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dataio
from .errors import BoomkitError, DivergenceError, ValidationError
from .inference import FixedContext
from .integrate import HistorySpec, integrate
from .model import ensure_valid
from .pes import McmcSettings, fit_once, new_session, pes_iterate
from .stability import CONDITION_KEYS, check_theorem1, equilibria

__all__ = ["run_cli", "main"]

_CONDITION_LABELS = {
    "cond6": "A = beta+gamma-epsilon > 0",
    "cond7": "B/(alpha*zeta*(beta+gamma)) > tau1/2",
    "cond8": "B > 0",
    "cond9": "resurgence bound > tau2",
    "cond10": "B < 0",
    "cond11": "resurgence bound < tau2",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit 1 instead of 2."""

    def error(self, message: str):
        raise _UsageError(message)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value config file")
    sub.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key (repeatable)",
    )
    sub.add_argument("--out", help="output path (default: stdout or cwd file)")
    sub.add_argument("--seed", type=int, help="override the RNG seed")


def _build_parser() -> _Parser:
    parser = _Parser(prog="boomkit", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)
    for name, desc in (
        ("simulate", "integrate the model and write a trajectory table"),
        ("stability", "print the sufficient-condition table and verdict"),
        ("fit", "run one MCMC round and write a fit report"),
        ("pes", "seed a PES session, run the first round, persist it"),
        ("serve", "start the HTTP service"),
    ):
        sub = subs.add_parser(name, help=desc)
        _add_common(sub)
        if name == "serve":
            sub.add_argument("--host", default="127.0.0.1")
            sub.add_argument("--port", type=int, default=8000)
            sub.add_argument("--store", help="directory for persisted sessions/jobs")
    return parser


def _load_config(args) -> dataio.RunConfig:
    overrides: dict[str, str] = {}
    for item in args.overrides:
        if "=" not in item:
            raise _UsageError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    if args.config:
        return dataio.load_config(args.config, overrides)
    return dataio.build_config(overrides)


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _require_data(cfg: dataio.RunConfig):
    if not cfg.data:
        raise ValidationError("key 'data': a series file is required")
    return dataio.load_series(cfg.data, normalize=cfg.normalize)


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    params = ensure_valid(cfg.params())
    traj = integrate(params, HistorySpec(cfg.initial_state()), cfg.horizon, cfg.step)
    _write_or_print(dataio.trajectory_table(traj), args.out)
    return 0


def _format_stability(params) -> str:
    verdict = check_theorem1(params)
    (eq,) = equilibria(params)
    q = verdict.quantities
    lines = [
        f"equilibrium: y1* = {eq.y1_star!r}, y2* = {eq.y2_star!r}",
        f"A  = {q['A']!r}",
        f"B  = {q['B']!r}",
        f"cond7 bound      = {q['cond7_bound']!r} (vs tau1/2 = {params.tau1 / 2.0!r})",
        f"resurgence bound = {q['resurgence_bound']!r} (vs tau2 = {params.tau2!r})",
        f"consolidated     = {q['consolidated']!r}",
    ]
    for key in CONDITION_KEYS:
        state = verdict.conditions.get(key)
        shown = "n/a" if state is None else str(state)
        lines.append(f"{key:<7} {_CONDITION_LABELS[key]:<42} {shown}")
    lines.append(f"verdict: {verdict.verdict.value}")
    return "\n".join(lines) + "\n"


def _cmd_stability(args) -> int:
    cfg = _load_config(args)
    params = ensure_valid(cfg.params())
    _write_or_print(_format_stability(params), args.out)
    return 0


def _cmd_fit(args) -> int:
    cfg = _load_config(args)
    observed = _require_data(cfg)
    fixed = FixedContext(
        zeta=cfg.zeta,
        tau1=cfg.tau1,
        tau2=cfg.tau2,
        initial_state=cfg.initial_state(),
        sigma_obs=cfg.resolve_sigma(observed),
        step=cfg.step,
    )
    settings = McmcSettings(
        n_iter=cfg.n_iter, burn_in=cfg.burn_in, scales=cfg.scales_vec()
    )
    report = fit_once(observed, cfg.theta(), fixed, settings, cfg.seed)
    out = args.out or "fit_report.json"
    dataio.emit_report(report, out)
    sys.stderr.write(f"wrote {out} (R2 = {report.r2:.4f})\n")
    return 0


def _cmd_pes(args) -> int:
    cfg = _load_config(args)
    observed = _require_data(cfg)
    session = new_session(
        observed,
        cfg.theta(),
        cfg.initial_state(),
        sigma_obs=cfg.sigma_obs,
        step=cfg.step,
        seed=cfg.seed,
    )
    settings = McmcSettings(
        n_iter=cfg.n_iter, burn_in=cfg.burn_in, scales=cfg.scales_vec(), seed=cfg.seed
    )
    pes_iterate(session, settings=settings)
    out = args.out or "pes_session.json"
    Path(out).write_text(
        dataio.dumps_doc(dataio.session_to_doc(session)), encoding="utf-8"
    )
    last = session.iterations[-1].report
    sys.stderr.write(
        f"wrote {out} (round 0: R2 = {last.r2:.4f}, "
        f"stability = {last.stability.verdict.value})\n"
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(store_dir=args.store)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "stability": _cmd_stability,
    "fit": _cmd_fit,
    "pes": _cmd_pes,
    "serve": _cmd_serve,
}


def run_cli(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        parser.print_usage(sys.stderr)
        return 1
    except DivergenceError as exc:
        sys.stderr.write(f"divergence: {exc}\n")
        return 3
    except BoomkitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return 2


def main() -> None:
    raise SystemExit(run_cli())
