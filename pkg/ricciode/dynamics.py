"""
Numerical integration of the family with singularity detection, Ricci
curvature along solutions, and asymptotic model fits near the singular time
and at infinity.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import CubicHermiteSpline

from .ansatz_family import ParamSet, jet_from_state, rhs
from .const import (
    BLOW_UP,
    EPS_SING,
    MAX_STEPS,
    SIDE_A1_BLOWUP,
    SIDE_A1_TO_ZERO,
    SIDE_A2_TO_ZERO,
    SIDE_BOTH,
    SINGULAR_EVENT,
    STEP_UNDERFLOW,
    T_END,
    TOL_MAX,
    TOL_MIN,
    TRAJECTORY_COLUMNS,
    UNIT_RATE_TOL,
)
from .exceptions import (
    InsufficientSamplesError,
    IntegrationBudgetError,
    InvalidStateError,
    InvalidToleranceError,
    NotSingularError,
    TailTooShortError,
)
from .frame_curvature import RicciValues, ricci_from_jet

__all__ = [
    "State",
    "Trajectory",
    "SingularEvent",
    "AsymptoticFit",
    "InfinityFit",
    "AsymptoticSlopes",
    "integrate",
    "ricci_along",
    "einstein_constant",
    "detect_singularity",
    "SingularFit",
    "fit_power_law",
    "c_model_subleading",
    "fit_singular_model",
    "model_B_residual",
    "model_B_residual_exact",
    "model_C_residual",
    "model_C_residual_fd",
    "fit_infinity_model",
    "alc_slope",
]

_LOGGER = logging.getLogger(__name__)

# Dormand-Prince 5(4)
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_E = np.array([71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
# local error target relative to the requested tolerance
_LOCAL_TOL_FRACTION = 0.05
_LOCAL_TOL_FLOOR = 4 * np.finfo(float).eps
# two-term singular model C2 = gamma s^(1/3) + 9/5 s
_C_EXPONENT = Fraction(1, 3)
_C_LINEAR = Fraction(9, 5)


@dataclass(frozen=True)
class State:
    t: float
    a1: float
    a2: float

    def __post_init__(self):
        values = (self.t, self.a1, self.a2)
        if not all(math.isfinite(v) for v in values):
            raise InvalidStateError(
                f"State must be finite, got t={self.t}, A1={self.a1}, A2={self.a2}"
            )
        if not (self.a1 > 0 and self.a2 > 0):
            raise InvalidStateError(
                f"State needs A1 > 0 and A2 > 0, got A1={self.a1}, A2={self.a2}"
            )

    def to_dict(self) -> Dict[str, float]:
        return {"t": self.t, "a1": self.a1, "a2": self.a2}


@dataclass(frozen=True)
class SingularEvent:
    t0_estimate: float
    side: str
    bracket: Tuple[float, float]
    exponent_a1: float
    exponent_a2: float
    extrapolated_t0: float
    reason: str

    @property
    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]

    def to_dict(self) -> Dict:
        return {
            "t0_estimate": self.t0_estimate,
            "side": self.side,
            "bracket": list(self.bracket),
            "width": self.width,
            "exponent_a1": self.exponent_a1,
            "exponent_a2": self.exponent_a2,
            "extrapolated_t0": self.extrapolated_t0,
            "reason": self.reason,
        }


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Accepted samples of one solution, stored in increasing t whatever the
    integration direction, with the right-hand side at every sample.
    """

    params: ParamSet
    t: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    da1: np.ndarray
    da2: np.ndarray
    termination: str
    direction: int
    tol: float
    t_end: float
    accepted_steps: int
    rejected_steps: int
    crossing: Optional[Tuple[float, float]] = None
    _spline: List = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.t)

    @property
    def states(self) -> List[State]:
        return [State(float(t), float(a), float(b)) for t, a, b in zip(self.t, self.a1, self.a2)]

    @property
    def final(self) -> State:
        i = -1 if self.direction > 0 else 0
        return State(float(self.t[i]), float(self.a1[i]), float(self.a2[i]))

    @property
    def initial(self) -> State:
        i = 0 if self.direction > 0 else -1
        return State(float(self.t[i]), float(self.a1[i]), float(self.a2[i]))

    def dense(self, t):
        """
        (A1, A2) at arbitrary t inside the sampled range by cubic Hermite
        interpolation of the accepted steps.
        """
        if len(self.t) < 2:
            raise InsufficientSamplesError("Dense output needs at least two samples")
        if not self._spline:
            y = np.column_stack([self.a1, self.a2])
            dy = np.column_stack([self.da1, self.da2])
            self._spline.append(CubicHermiteSpline(self.t, y, dy, extrapolate=False))
        values = self._spline[0](t)
        return values[..., 0], values[..., 1]

    def to_frame(self) -> pd.DataFrame:
        ric = _ricci_arrays(self)
        frame = pd.DataFrame(
            {
                "t": self.t,
                "A1": self.a1,
                "A2": self.a2,
                "x": self.a1 / self.a2,
                "ric00": ric.ric00,
                "ric11": ric.ric11,
                "ric22": ric.ric22,
                "scalar": ric.scalar,
            }
        )
        return frame[TRAJECTORY_COLUMNS]

    def to_dict(self, samples: bool = True) -> Dict:
        """JSON envelope: run settings, termination, event data and (optionally) samples"""
        event = None
        if self.termination in (SINGULAR_EVENT, BLOW_UP):
            event = detect_singularity(self).to_dict()
        out = {
            "params": self.params.to_strings(),
            "tol": self.tol,
            "init": self.initial.to_dict(),
            "t_end": self.t_end,
            "direction": self.direction,
            "termination": self.termination,
            "accepted_steps": self.accepted_steps,
            "rejected_steps": self.rejected_steps,
            "final": self.final.to_dict(),
            "event": event,
        }
        if samples:
            out["samples"] = self.to_frame().to_dict(orient="list")
        return out


def _f(params: ParamSet, y: np.ndarray) -> np.ndarray:
    return np.array(rhs(params, y[0], y[1]))


def _admissible(y: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(y)) and y[0] > 0 and y[1] > 0)


def _crossed(a1, a2, eps: float):
    return (a2 < eps) | (a1 > 1 / eps) | (a1 < eps)


def _norm(v: np.ndarray, scale: np.ndarray) -> float:
    return float(np.sqrt(np.mean((v / scale) ** 2)))


def _initial_step(params, y0, f0, tol, direction) -> float:
    scale = tol * np.abs(y0)
    d0, d1 = _norm(y0, scale), _norm(f0, scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + direction * h0 * f0
    if not _admissible(y1):
        return h0
    d2 = _norm(_f(params, y1) - f0, scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def _dopri_step(params, y, f0, h, direction):
    """One trial step; None when a stage leaves the positive quadrant"""
    k = [f0]
    for i in range(1, 7):
        yi = y + direction * h * sum(a * kj for a, kj in zip(_A[i], k))
        if not _admissible(yi):
            return None
        ki = _f(params, yi)
        if not np.all(np.isfinite(ki)):
            return None
        k.append(ki)
    k = np.array(k)
    y_new = y + direction * h * (_B @ k)
    err = direction * h * (_E @ k)
    return y_new, k[-1], err


def _locate_crossing(ta, ya, fa, tb, yb, fb, eps):
    """Bisect the cubic Hermite interpolant of one step for the threshold crossing"""
    order = [0, 1] if ta < tb else [1, 0]
    ts = np.array([ta, tb])[order]
    spline = CubicHermiteSpline(ts, np.array([ya, yb])[order], np.array([fa, fb])[order])
    safe, crossed = ta, tb
    while abs(crossed - safe) > 1e-13 * (1 + abs(crossed)):
        mid = 0.5 * (safe + crossed)
        if mid in (safe, crossed):
            break
        a1, a2 = spline(mid)
        if _crossed(a1, a2, eps):
            crossed = mid
        else:
            safe = mid
    return safe, crossed, spline(crossed)


def _exponent(f, fp, fpp) -> float:
    """Local power-law exponent p of f ~ C |t - t0|^p from its 2-jet"""
    if fp == 0:
        return math.nan
    denom = 1 - f * fpp / fp**2
    return math.inf if denom == 0 else 1 / denom


def _collapse_side(params, a1, a2, direction, eps) -> Optional[str]:
    jet = jet_from_state(params, a1, a2)
    p1 = _exponent(jet.a1, jet.a1p, jet.a1pp)
    p2 = _exponent(jet.a2, jet.a2p, jet.a2pp)
    a2_zero = a2 < eps or (p2 > 0 and direction * jet.a2p < 0)
    a1_blowup = a1 > 1 / eps or (p1 < 0 and direction * jet.a1p > 0)
    a1_zero = a1 < eps or (p1 > 0 and direction * jet.a1p < 0)
    if a2_zero and a1_blowup:
        return SIDE_BOTH
    if a2_zero:
        return SIDE_A2_TO_ZERO
    if a1_blowup:
        return SIDE_A1_BLOWUP
    if a1_zero:
        return SIDE_A1_TO_ZERO
    return None


def _extrapolate_crossing(params, t, y, direction, eps, side):
    """
    Threshold crossing past the last accepted state, from the local power
    laws f ~ C s^p of the jet with s the distance to the collapse time.
    None when the leading component does not shrink like a power law.
    """
    jet = jet_from_state(params, float(y[0]), float(y[1]))
    comps = [(jet.a1, jet.a1p, jet.a1pp), (jet.a2, jet.a2p, jet.a2pp)]
    lead = 0 if side == SIDE_A1_TO_ZERO else 1
    f, fp, fpp = comps[lead]
    p = _exponent(f, fp, fpp)
    if fp == 0 or not (math.isfinite(p) and p > 0):
        return None
    gap = fpp / fp - fp / f
    if gap == 0:
        return None
    s_now = abs(1 / gap)
    s_hit = s_now * (eps / f) ** (1 / p)
    hit = np.empty(2)
    hit[lead] = eps
    g, gp, gpp = comps[1 - lead]
    q = _exponent(g, gp, gpp)
    hit[1 - lead] = g * (s_hit / s_now) ** q if math.isfinite(q) else g
    if not _admissible(hit):
        return None
    return t + direction * (s_now - s_hit), hit


def integrate(
    params: ParamSet,
    init: State,
    t_end: float,
    tol: float = 1e-10,
    max_steps: int = MAX_STEPS,
    eps_sing: float = EPS_SING,
) -> Trajectory:
    """
    Integrate the family from ``init`` toward ``t_end`` (either direction).

    Dormand-Prince 5(4) with per-step relative error held to tol/20. Stops
    at t_end, at the first crossing of A2 < eps, A1 > 1/eps or A1 < eps
    (located by bisection on the dense output), or when the step size falls
    below the floating-point resolution of t. A collapse of A2 (or A1)
    toward zero that the step size cannot follow down to eps is extrapolated
    to the threshold from the jet and reported as a singular event; other
    collapses end as blow-up or step underflow.

    :param ParamSet params: the family member
    :param State init: initial time and metric coefficients
    :param float t_end: final time, may be less than init.t
    :param float tol: relative tolerance in [1e-14, 1e-3]
    :param int max_steps: budget of attempted steps
    :param float eps_sing: singular threshold
    :return Trajectory: the accepted samples and the termination reason
    :raise InvalidToleranceError: tolerance out of range
    :raise InvalidStateError: initial data already past a singular threshold
    :raise IntegrationBudgetError: max_steps attempted steps without finishing
    """
    if not TOL_MIN <= tol <= TOL_MAX:
        raise InvalidToleranceError(tol, TOL_MIN, TOL_MAX)
    if _crossed(init.a1, init.a2, eps_sing):
        raise InvalidStateError(
            f"Initial data A1={init.a1}, A2={init.a2} already beyond the singular threshold"
        )
    local_tol = max(_LOCAL_TOL_FRACTION * tol, _LOCAL_TOL_FLOOR)
    direction = 1 if t_end >= init.t else -1
    t = init.t
    y = np.array([init.a1, init.a2], dtype=float)
    f0 = _f(params, y)
    ts, ys, fs = [t], [y], [f0]
    accepted = rejected = 0
    crossing = None
    termination = T_END
    h = _initial_step(params, y, f0, local_tol, direction)
    last_rejected = False

    while t != t_end:
        if accepted + rejected >= max_steps:
            raise IntegrationBudgetError(max_steps, t)
        remaining = abs(t_end - t)
        t_new = t_end if h >= remaining else t + direction * h
        # step by exactly the increment that t will record
        h = abs(t_new - t)
        if t_new != t_end and (h == 0 or h < 16 * np.spacing(abs(t))):
            side = _collapse_side(params, y[0], y[1], direction, eps_sing)
            hit = None
            if side in (SIDE_A2_TO_ZERO, SIDE_BOTH, SIDE_A1_TO_ZERO):
                hit = _extrapolate_crossing(params, t, y, direction, eps_sing, side)
            if hit is not None:
                t_hit, y_hit = hit
                crossing = (min(t, t_hit), max(t, t_hit))
                if t_hit != t:
                    ts.append(t_hit)
                    ys.append(y_hit)
                    fs.append(_f(params, y_hit))
                termination = SINGULAR_EVENT
            else:
                termination = BLOW_UP if side else STEP_UNDERFLOW
            _LOGGER.debug(f"Step size {h:.3e} underflowed at t={t!r} ({termination})")
            break
        trial = _dopri_step(params, y, f0, h, direction)
        if trial is None or not _admissible(trial[0]):
            rejected += 1
            last_rejected = True
            h *= _MIN_FACTOR
            continue
        y_new, f_new, err_vec = trial
        scale = local_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = _norm(err_vec, scale)
        if err > 1:
            rejected += 1
            last_rejected = True
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-1 / 5))
            continue
        accepted += 1
        if _crossed(y_new[0], y_new[1], eps_sing):
            safe, hit, y_hit = _locate_crossing(t, y, f0, t_new, y_new, f_new, eps_sing)
            crossing = (min(safe, hit), max(safe, hit))
            ts.append(hit)
            ys.append(y_hit)
            fs.append(_f(params, y_hit))
            termination = SINGULAR_EVENT
            _LOGGER.debug(f"Threshold crossed in [{crossing[0]!r}, {crossing[1]!r}]")
            break
        t, y, f0 = t_new, y_new, f_new
        ts.append(t)
        ys.append(y)
        fs.append(f0)
        factor = _MAX_FACTOR if err == 0 else _SAFETY * err ** (-1 / 5)
        factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        if last_rejected:
            factor = min(1.0, factor)
        last_rejected = False
        h *= factor

    _LOGGER.info(
        f"Integration of {params} stopped at t={float(ts[-1])!r}: {termination} "
        f"({accepted} accepted, {rejected} rejected steps)"
    )
    ts, ys, fs = np.array(ts), np.array(ys), np.array(fs)
    if direction < 0:
        ts, ys, fs = ts[::-1], ys[::-1], fs[::-1]
    return Trajectory(
        params=params,
        t=ts,
        a1=ys[:, 0],
        a2=ys[:, 1],
        da1=fs[:, 0],
        da2=fs[:, 1],
        termination=termination,
        direction=direction,
        tol=tol,
        t_end=t_end,
        accepted_steps=accepted,
        rejected_steps=rejected,
        crossing=crossing,
    )


def _ricci_arrays(traj: Trajectory) -> RicciValues:
    return ricci_from_jet(jet_from_state(traj.params, traj.a1, traj.a2))


def ricci_along(traj: Trajectory) -> List[RicciValues]:
    """Ricci values at every sample from the analytic jet, no finite differences"""
    ric = _ricci_arrays(traj)
    return [
        RicciValues(float(r0), float(r1), float(r2), float(s))
        for r0, r1, r2, s in zip(ric.ric00, ric.ric11, ric.ric22, ric.scalar)
    ]


def einstein_constant(traj: Trajectory) -> Tuple[float, float]:
    """
    Mean Ric00 along the trajectory and the largest relative deviation of
    any diagonal component from it.
    """
    ric = _ricci_arrays(traj)
    lam = float(np.mean(ric.ric00))
    spread = max(float(np.max(np.abs(r - lam))) for r in (ric.ric00, ric.ric11, ric.ric22))
    return lam, spread / abs(lam) if lam else spread


def detect_singularity(traj: Trajectory, eps_sing: float = EPS_SING) -> SingularEvent:
    """
    Singular time, side and local exponents of a trajectory that ended in a
    threshold crossing or a finite-time collapse.

    :raise NotSingularError: the trajectory reached t_end or stalled without
        a collapse signature
    """
    if traj.termination not in (SINGULAR_EVENT, BLOW_UP):
        raise NotSingularError(traj.termination)
    d = traj.direction
    last = traj.final
    jet = jet_from_state(traj.params, last.a1, last.a2)
    p1 = _exponent(jet.a1, jet.a1p, jet.a1pp)
    p2 = _exponent(jet.a2, jet.a2p, jet.a2pp)
    side = _collapse_side(traj.params, last.a1, last.a2, d, eps_sing) or SIDE_A2_TO_ZERO
    # the collapsing component sets the distance to t0
    if side in (SIDE_A1_TO_ZERO, SIDE_A1_BLOWUP):
        f, fp, fpp = jet.a1, jet.a1p, jet.a1pp
    else:
        f, fp, fpp = jet.a2, jet.a2p, jet.a2pp
    gap = fpp / fp - fp / f if fp else 0.0
    distance = d / gap if gap else 0.0
    extrapolated = last.t + d * abs(distance)
    if traj.termination == SINGULAR_EVENT:
        bracket = traj.crossing
        t0 = 0.5 * (bracket[0] + bracket[1])
    else:
        ends = (last.t, last.t + d * 2 * abs(distance))
        bracket = (min(ends), max(ends))
        t0 = extrapolated
    _LOGGER.info(f"Singular time t0 ~ {t0!r} ({side}), exponents A1: {p1:.4f}, A2: {p2:.4f}")
    return SingularEvent(
        t0_estimate=t0,
        side=side,
        bracket=bracket,
        exponent_a1=p1,
        exponent_a2=p2,
        extrapolated_t0=extrapolated,
        reason=traj.termination,
    )


@dataclass(frozen=True)
class AsymptoticFit:
    component: str
    exponent: float
    coefficient: float
    window: Tuple[float, float]
    rms: float
    samples: int

    def to_dict(self) -> Dict:
        return {
            "component": self.component,
            "exponent": self.exponent,
            "coefficient": self.coefficient,
            "window": list(self.window),
            "rms": self.rms,
            "samples": self.samples,
        }


_COMPONENTS = {"A1": "a1", "A2": "a2", "a1": "a1", "a2": "a2"}


def fit_power_law(
    traj: Trajectory,
    component: str,
    t0: float,
    window_decades: float = 4.0,
    upper: float = 1e-2,
    subtract: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> AsymptoticFit:
    """
    Least-squares line through (ln|t - t0|, ln A) for the samples with
    |t - t0| in [upper * 10**(-window_decades), upper].

    :param Trajectory traj: the trajectory, typically ending at t0
    :param str component: "A1" or "A2"
    :param float t0: singular time
    :param float window_decades: width of the window in decades
    :param float upper: top of the window in |t - t0|
    :param callable subtract: known subleading terms as a function of
        |t - t0|, removed from A before the fit
    :return AsymptoticFit: slope as exponent, exp(intercept) as coefficient
    :raise InsufficientSamplesError: fewer than five samples in the window
    """
    if component not in _COMPONENTS:
        raise ValueError(f"Component must be A1 or A2, got {component}")
    values = getattr(traj, _COMPONENTS[component])
    tau = np.abs(traj.t - t0)
    if subtract is not None:
        values = values - subtract(tau)
    lo = upper * 10 ** (-window_decades)
    mask = (tau >= lo) & (tau <= upper) & (values > 0)
    if mask.sum() < 5:
        raise InsufficientSamplesError(
            f"{int(mask.sum())} samples with |t - t0| in [{lo:g}, {upper:g}], at least 5 needed"
        )
    lt, ly = np.log(tau[mask]), np.log(values[mask])
    span = (lt.max() - lt.min()) / math.log(10)
    if span < 0.9 * window_decades:
        _LOGGER.warning(f"Fit window spans {span:.2f} decades, {window_decades:g} requested")
    slope, intercept = np.polyfit(lt, ly, 1)
    rms = float(np.sqrt(np.mean((ly - (slope * lt + intercept)) ** 2)))
    ts = traj.t[mask]
    return AsymptoticFit(
        component=component.upper(),
        exponent=float(slope),
        coefficient=float(math.exp(intercept)),
        window=(float(ts.min()), float(ts.max())),
        rms=rms,
        samples=int(mask.sum()),
    )


def c_model_subleading(component: str, gamma: float = math.nan) -> Callable:
    """
    Terms of the two-term singular model beyond the leading power, as a
    function of s = |t - t0|: 9/5 s for A2, and 2/5 gamma s^(1/3) - 9/25 s
    for A1 = A2 (A2' - 2).
    """
    p, a = float(_C_EXPONENT), float(_C_LINEAR)
    if component.upper() == "A2":
        return lambda s: a * s
    if component.upper() == "A1":
        middle = gamma * float(_C_LINEAR * (1 + _C_EXPONENT) - 2)
        last = float(_C_LINEAR * (_C_LINEAR - 2))
        return lambda s: middle * s**p + last * s
    raise ValueError(f"Component must be A1 or A2, got {component}")


@dataclass(frozen=True)
class SingularFit:
    """Power-law fits of A2 and A1 near t0; gamma is the A2 coefficient"""

    a1: AsymptoticFit
    a2: AsymptoticFit
    two_term: bool

    @property
    def gamma(self) -> float:
        return self.a2.coefficient

    @property
    def predicted_a1_coefficient(self) -> float:
        return self.gamma**2 / 3

    def to_dict(self) -> Dict:
        return {
            "fits": {"A1": self.a1.to_dict(), "A2": self.a2.to_dict()},
            "two_term": self.two_term,
            "gamma": self.gamma,
            "predicted_a1_coefficient": self.predicted_a1_coefficient,
        }


def fit_singular_model(
    traj: Trajectory,
    t0: float,
    window_decades: float = 4.0,
    upper: float = 1e-2,
    two_term: bool = True,
) -> SingularFit:
    """
    Fit A2 ~ gamma s^(1/3) and A1 ~ gamma^2/3 s^(-1/3) near t0.

    With ``two_term`` the subleading terms of the model are removed first
    (:func:`c_model_subleading`), A2 before A1 since the A1 terms need gamma.
    """
    sub2 = c_model_subleading("A2") if two_term else None
    a2 = fit_power_law(traj, "A2", t0, window_decades, upper, subtract=sub2)
    sub1 = c_model_subleading("A1", a2.coefficient) if two_term else None
    a1 = fit_power_law(traj, "A1", t0, window_decades, upper, subtract=sub1)
    _LOGGER.info(
        f"Singular fit: gamma={a2.coefficient:.6g}, A1 coefficient {a1.coefficient:.6g} "
        f"(predicted {a2.coefficient**2 / 3:.6g})"
    )
    return SingularFit(a1=a1, a2=a2, two_term=two_term)


def model_B_residual(alpha: float, beta: float, t: float) -> float:
    """
    B1' + B1^2/B2^2 for B2 = alpha + beta ln t + 2t and B1 = B2 (B2' - 2),
    in closed form (beta^2 - alpha beta - beta^2 ln t)/t^2 + (beta/t)^2.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    return (beta**2 - alpha * beta - beta**2 * math.log(t)) / t**2 + (beta / t) ** 2


def model_B_residual_exact(alpha: float, beta: float, t: float) -> float:
    """The same residual from B1, B1' and B2 evaluated separately"""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    b2 = alpha + beta * math.log(t) + 2 * t
    b1 = 2 * beta + alpha * beta / t + beta**2 * math.log(t) / t
    b1p = -alpha * beta / t**2 + beta**2 * (1 - math.log(t)) / t**2
    return b1p + b1**2 / b2**2


def _c_coefficients(linear: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    """
    The residual of C2 = gamma s^p + a s, C1 = C2 (C2' - 2) written as
    k2 gamma^2 s^(2p - 2) + k1 gamma s^(p - 1) + k0; returns (k2, k1, k0).
    """
    p, a = _C_EXPONENT, Fraction(linear)
    k2 = p * (2 * p - 1) + p * p
    k1 = p * (a * (1 + p) - 2) + 2 * p * (a - 2)
    k0 = a * (a - 2) + (a - 2) ** 2
    return k2, k1, k0


def _model_c(gamma: float, s: float, linear: Fraction = _C_LINEAR) -> Tuple[float, float]:
    """(C1, C2) at s = t - t0"""
    p, a = float(_C_EXPONENT), float(linear)
    c2 = gamma * s**p + a * s
    c2p = gamma * p * s ** (p - 1) + a
    return c2 * (c2p - 2), c2


def model_C_residual(gamma: float, t0: float, t: float, linear: Fraction = _C_LINEAR) -> float:
    """
    C1' + C1^2/C2^2 for C2 = gamma (t - t0)^(1/3) + a (t - t0) and
    C1 = C2 (C2' - 2), from the exact coefficients of its three powers of s.
    For a = 9/5 the s^(-4/3) and s^(-2/3) coefficients vanish and the
    residual is -8/25 for every gamma and t > t0.
    """
    if not t > t0:
        raise ValueError(f"t must exceed t0, got t={t}, t0={t0}")
    s = t - t0
    p = _C_EXPONENT
    k2, k1, k0 = _c_coefficients(linear)
    return (
        float(k0)
        + float(k1) * gamma * s ** float(p - 1)
        + float(k2) * gamma**2 * s ** float(2 * p - 2)
    )


def model_C_residual_fd(
    gamma: float, t0: float, t: float, step: float = 1e-5, linear: Fraction = _C_LINEAR
) -> float:
    """Central-difference evaluation of the same residual"""
    s = t - t0
    if not s > step:
        raise ValueError(f"t - t0 = {s} must exceed the step {step}")
    c1_plus, _ = _model_c(gamma, s + step, linear)
    c1_minus, _ = _model_c(gamma, s - step, linear)
    c1, c2 = _model_c(gamma, s, linear)
    return (c1_plus - c1_minus) / (2 * step) + c1**2 / c2**2


@dataclass(frozen=True)
class InfinityFit:
    alpha: float
    beta: float
    a1_tail: float
    window: Tuple[float, float]
    rms: float

    def to_dict(self) -> Dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "a1_tail": self.a1_tail,
            "two_beta": 2 * self.beta,
            "window": list(self.window),
            "rms": self.rms,
        }


def fit_infinity_model(traj: Trajectory, points: int = 200) -> InfinityFit:
    """
    Fit A2 - 2t = alpha + beta ln t over the last decade of a trajectory
    reaching t >= 1000, resampled log-uniformly from the dense output.

    :raise TailTooShortError: the trajectory stops before t = 1000 or is not
        a forward run that reached t_end
    """
    t_max = float(traj.t[-1])
    if traj.termination != T_END or traj.direction < 0 or t_max < 1e3:
        raise TailTooShortError(
            f"Infinity fit needs a forward run reaching t >= 1000, got t_max={t_max:g} "
            f"({traj.termination})"
        )
    lo = max(t_max / 10, float(traj.t[0]))
    grid = np.geomspace(lo, t_max, points)
    grid[-1] = t_max
    a1, a2 = traj.dense(grid)
    design = np.column_stack([np.ones_like(grid), np.log(grid)])
    (alpha, beta), *_ = np.linalg.lstsq(design, a2 - 2 * grid, rcond=None)
    rms = float(np.sqrt(np.mean((design @ [alpha, beta] - (a2 - 2 * grid)) ** 2)))
    fit = InfinityFit(float(alpha), float(beta), float(np.mean(a1)), (lo, t_max), rms)
    _LOGGER.info(
        f"Infinity fit: alpha={fit.alpha:.6g}, beta={fit.beta:.6g}, A1 tail {fit.a1_tail:.6g}"
    )
    return fit


@dataclass(frozen=True)
class AsymptoticSlopes:
    a1: float
    a2: float
    label: str
    collapsed_circle: bool

    def to_dict(self) -> Dict:
        return {
            "a1": self.a1,
            "a2": self.a2,
            "label": self.label,
            "collapsed_circle": self.collapsed_circle,
        }


def alc_slope(traj: Trajectory) -> AsymptoticSlopes:
    """
    Linear growth rates of A1 and A2 from secants of the dense output across
    the second half of the t range, with the ALE / ALC / cone-degenerate label.
    """
    lo, hi = float(traj.t[0]), float(traj.t[-1])
    if len(traj) < 2 or not hi > lo:
        raise TailTooShortError(f"Tail needs a t range, got {len(traj)} samples on [{lo}, {hi}]")
    mid = 0.5 * (lo + hi)
    a1, a2 = traj.dense(np.array([mid, hi]))
    r1 = float((a1[1] - a1[0]) / (hi - mid))
    r2 = float((a2[1] - a2[0]) / (hi - mid))

    def near(value, target):
        return abs(value - target) <= UNIT_RATE_TOL

    if near(r2, 0):
        label = "cone-degenerate"
    elif near(r1, 1) and near(r2, 1):
        label = "ALE"
    else:
        label = "ALC"
    collapsed = near(r1, 0) and not near(r2, 0)
    _LOGGER.info(f"Tail slopes A1: {r1:.4f}, A2: {r2:.4f} ({label})")
    return AsymptoticSlopes(r1, r2, label, collapsed)
