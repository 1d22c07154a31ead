import sys
from logging import getLogger
from typing import Dict, List, Optional

import logmuse
import pandas as pd

from .ansatz_family import PARAM_NAMES, ParamSet, classify
from .argparser import (
    ASYMPTOTE_CMD,
    CATALOG_CMD,
    CLASSIFY_CMD,
    INTEGRATE_CMD,
    RICCI_CMD,
    VERIFY_CMD,
    build_argparser,
)
from .catalog import make_form, sample_table, verify_form
from .const import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    ODE_RESIDUAL_TOL,
    PKG_NAME,
    RICCI_RESIDUAL_TOL,
    T_END,
)
from .dynamics import (
    State,
    alc_slope,
    detect_singularity,
    fit_infinity_model,
    fit_singular_model,
    integrate,
)
from .exceptions import InvalidParamsError, RicciodeError, RicciodeValidationError
from .frame_curvature import JetPoint, ricci_from_jet
from .helpers import dump_json, parse_rational, render_frame, write_output
from .run_config import RunConfig

_LOGGER = getLogger(PKG_NAME)

_EPILOG = "Exit codes: 0 success, 2 invalid input, 3 numerical failure or t_end not reached."


def _emit(cfg: RunConfig, payload: Dict, frame: pd.DataFrame) -> None:
    """JSON envelope, or the frame as CSV or a table"""
    fmt = cfg["format"]
    if fmt == "json":
        text = dump_json({"config": cfg.to_dict(), **payload})
    else:
        text = render_frame(frame, fmt)
    write_output(text, cfg.get("output"))


def _init_state(cfg: RunConfig) -> State:
    parts = [p.strip() for p in str(cfg["init"]).split(",")]
    if len(parts) != 2:
        raise InvalidParamsError(f"--init takes A1,A2, got '{cfg['init']}'")
    a1, a2 = (float(parse_rational(p)) for p in parts)
    return State(float(cfg["t0"]), a1, a2)


def _run_classify(cfg: RunConfig) -> int:
    result = classify(cfg["bound"], workers=cfg["workers"])
    rows = [
        {"kind": kind, **dict(zip(PARAM_NAMES, p.to_strings()))}
        for kind, families in [
            ("ricci-flat", result.ricci_flat_families),
            ("einstein", result.einstein_families),
        ]
        for p in families
    ]
    _emit(cfg, result.to_dict(), pd.DataFrame(rows, columns=["kind", *PARAM_NAMES]))
    return EXIT_OK if not result.unexplained else EXIT_NUMERICAL


def _run_verify(cfg: RunConfig) -> int:
    form = make_form(cfg["form"], cfg["param"])
    report = verify_form(form, cfg["points"])
    passed = (
        report.max_ode_residual <= ODE_RESIDUAL_TOL
        and report.max_ricci_residual <= RICCI_RESIDUAL_TOL
    )
    payload = {**report.to_dict(), "passed": passed}
    _emit(cfg, payload, pd.DataFrame([payload]).drop(columns=["params", "window"]))
    if not passed:
        _LOGGER.error(f"{form.name} failed verification")
    return EXIT_OK if passed else EXIT_NUMERICAL


def _run_catalog(cfg: RunConfig) -> int:
    form = make_form(cfg["form"], cfg["param"])
    table = sample_table(form, cfg["points"])
    payload = {
        "form": form.name,
        "param": form.param,
        "coordinate": form.coordinate,
        "params": form.params.to_strings(),
        "table": table.to_dict(orient="list"),
    }
    _emit(cfg, payload, table)
    return EXIT_OK


def _run_ricci(cfg: RunConfig) -> int:
    jet = JetPoint(*(cfg[k] for k in ["a1", "a1p", "a1pp", "a2", "a2p", "a2pp"]))
    ricci = ricci_from_jet(jet).to_dict()
    _emit(cfg, {"ricci": ricci}, pd.DataFrame([ricci]))
    return EXIT_OK


def _run_integrate(cfg: RunConfig) -> int:
    params = ParamSet.parse(cfg["params"])
    traj = integrate(params, _init_state(cfg), cfg["t_end"], tol=cfg["tol"])
    _emit(cfg, traj.to_dict(), traj.to_frame())
    if traj.termination != T_END:
        _LOGGER.error(f"t_end not reached: {traj.termination} at t={traj.final.t!r}")
        return EXIT_NUMERICAL
    return EXIT_OK


def _run_asymptote(cfg: RunConfig) -> int:
    params = ParamSet.parse(cfg["params"])
    traj = integrate(params, _init_state(cfg), cfg["t_end"], tol=cfg["tol"])
    if cfg["mode"] == "singular":
        event = detect_singularity(traj)
        fit = fit_singular_model(
            traj,
            event.t0_estimate,
            window_decades=cfg["window_decades"],
            upper=cfg["window_upper"],
            two_term=not cfg["leading_only"],
        )
        payload = {
            "mode": "singular",
            "termination": traj.termination,
            "event": event.to_dict(),
            **fit.to_dict(),
        }
        frame = pd.DataFrame([fit.a1.to_dict(), fit.a2.to_dict()]).drop(columns=["window"])
    else:
        fit = fit_infinity_model(traj)
        slopes = alc_slope(traj)
        payload = {
            "mode": "infinity",
            "termination": traj.termination,
            "fit": fit.to_dict(),
            "slopes": slopes.to_dict(),
        }
        row = {**fit.to_dict(), **{f"slope_{k}": v for k, v in slopes.to_dict().items()}}
        frame = pd.DataFrame([row]).drop(columns=["window"])
    _emit(cfg, payload, frame)
    return EXIT_OK


COMMANDS = {
    CLASSIFY_CMD: _run_classify,
    VERIFY_CMD: _run_verify,
    CATALOG_CMD: _run_catalog,
    RICCI_CMD: _run_ricci,
    INTEGRATE_CMD: _run_integrate,
    ASYMPTOTE_CMD: _run_asymptote,
}


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse the arguments, run one subcommand and return the exit code:
    0 on success, 2 on invalid input, 3 on numerical failure.
    """
    parser = logmuse.add_logging_options(build_argparser(_EPILOG))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_VALIDATION
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_VALIDATION
    global _LOGGER
    _LOGGER = logmuse.logger_via_cli(args, make_root=True)
    _LOGGER.debug(f"Args namespace:\n{args}")
    try:
        cfg = RunConfig(args.command, vars(args), args.config)
        return COMMANDS[args.command](cfg)
    except RicciodeValidationError as e:
        _LOGGER.error(str(e))
        return EXIT_VALIDATION
    except RicciodeError as e:
        _LOGGER.error(f"{e.__class__.__name__}: {e}")
        return EXIT_NUMERICAL


def main(test_args=None):
    """Primary workflow"""
    sys.exit(run(test_args))
