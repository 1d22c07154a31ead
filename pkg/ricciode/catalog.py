"""
Closed-form members of the family: Taub-NUT, Eguchi-Hanson, Fubini-Study
(spherical and hyperbolic), the incomplete case-3 metric and the flat cone.

Each form is written in its own native coordinate u (r, t or rho) together with
the arclength factor s = dt/du; primes with respect to arclength follow from
d/dt = (1/s) d/du.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import integrate, optimize

from .ansatz_family import ParamSet, rhs
from .const import (
    CASE3,
    CATALOG_COLUMNS,
    EGUCHI_HANSON,
    FLAT_CONE,
    FORM_NAMES,
    FUBINI_STUDY,
    FUBINI_STUDY_HYPERBOLIC,
    TAUB_NUT,
)
from .exceptions import DomainError, InvalidParamsError
from .frame_curvature import JetPoint, ricci_from_jet

__all__ = [
    "NativeJet",
    "ClosedForm",
    "TaubNUT",
    "EguchiHanson",
    "FubiniStudy",
    "FubiniStudyHyperbolic",
    "Case3",
    "FlatCone",
    "VerifyReport",
    "make_form",
    "evaluate",
    "to_arclength_jet",
    "ode_residual",
    "arclength",
    "coord_at_arclength",
    "case3_t_of_rho",
    "case3_rho_of_t",
    "case3_metric_coeffs",
    "sample_coords",
    "sample_table",
    "verify_form",
]

_LOGGER = logging.getLogger(__name__)

_RTOL = 4 * np.finfo(float).eps

CASE1_PARAMS = ParamSet(1, 0, 0, 0, -1, 2)
EGUCHI_HANSON_PARAMS = ParamSet(-1, 0, 2, 0, 1, 0)
FUBINI_STUDY_PARAMS = ParamSet(2, 0, -1, 0, 1, 0)
CASE3_PARAMS = ParamSet(-1, 0, 0, 0, 1, 2)


@dataclass(frozen=True)
class NativeJet:
    """
    A1, A2 and their first two derivatives in the native coordinate, with the
    arclength factor s = dt/du and its derivative.
    """

    coord: float
    a1: float
    a1_u: float
    a1_uu: float
    a2: float
    a2_u: float
    a2_uu: float
    speed: float
    speed_u: float = 0.0

    def to_arclength(self) -> JetPoint:
        s, s_u = self.speed, self.speed_u

        def first(f_u):
            return f_u / s

        def second(f_u, f_uu):
            return (f_uu - f_u * s_u / s) / s**2

        return JetPoint(
            self.a1,
            first(self.a1_u),
            second(self.a1_u, self.a1_uu),
            self.a2,
            first(self.a2_u),
            second(self.a2_u, self.a2_uu),
        )


class ClosedForm(ABC):
    """
    A closed-form solution with one positive scale parameter.

    Subclasses declare their native coordinate domain, the ParamSet they solve,
    their Einstein constant and a sampling window strictly inside the domain.
    """

    name: str = ""
    coordinate: str = "t"
    params: ParamSet = CASE1_PARAMS

    def __init__(self, param: float = 1.0):
        param = float(param)
        if not (param > 0 and math.isfinite(param)):
            raise InvalidParamsError(
                f"{self.name}: parameter must be positive and finite, got {param}"
            )
        self.param = param

    def __repr__(self):
        return f"{self.__class__.__name__}({self.param!r})"

    @property
    @abstractmethod
    def domain(self) -> Tuple[float, float]:
        """Open interval of the native coordinate"""

    @property
    @abstractmethod
    def sample_window(self) -> Tuple[float, float]:
        pass

    @property
    def einstein_constant(self) -> float:
        return 0.0

    def check(self, coord) -> None:
        lo, hi = self.domain
        arr = np.asarray(coord, dtype=float)
        if np.any(~((arr > lo) & (arr < hi))):
            raise DomainError(self.name, coord, self.domain)

    def evaluate(self, coord) -> NativeJet:
        self.check(coord)
        return self._jet(coord)

    @abstractmethod
    def _jet(self, u) -> NativeJet:
        pass

    def arclength(self, coord: float) -> float:
        """Arclength t(u), normalized to 0 at the lower end of the domain"""
        self.check(coord)
        return self._arclength(float(coord))

    def _arclength(self, u: float) -> float:
        return u

    def coord_at_arclength(self, t: float) -> float:
        """Inverse of :meth:`arclength` by bracketing root finding"""
        lo, hi = self.domain
        if not t > 0:
            raise DomainError(self.name, t, (0, math.inf))
        upper = lo + 1.0 if math.isinf(hi) else (lo + hi) / 2
        for _ in range(1100):
            if self._arclength(upper) > t:
                break
            upper = 2 * upper - lo if math.isinf(hi) else (upper + hi) / 2
        else:
            raise DomainError(self.name, t, (0, self._arclength(upper)))
        lower = (lo + upper) / 2
        while self._arclength(lower) >= t:
            lower = (lo + lower) / 2
            if lower == lo:
                raise DomainError(self.name, t, (0, math.inf))
        return optimize.brentq(
            lambda u: self._arclength(u) - t, lower, upper, xtol=1e-15, rtol=_RTOL
        )

    def state(self, coord: float) -> Tuple[float, float, float]:
        """(t, A1, A2) at a native coordinate, for seeding the integrator"""
        jet = self.evaluate(coord)
        return self.arclength(coord), float(jet.a1), float(jet.a2)

    def at_arclength(self, t: float) -> Tuple[float, float]:
        """(A1, A2) at arclength t"""
        jet = self.evaluate(self.coord_at_arclength(t))
        return float(jet.a1), float(jet.a2)


class TaubNUT(ClosedForm):
    name = TAUB_NUT
    coordinate = "r"
    params = CASE1_PARAMS

    @property
    def domain(self):
        return (self.param, math.inf)

    @property
    def sample_window(self):
        return (1.05 * self.param, 20 * self.param)

    def _jet(self, r):
        m = self.param
        a1 = m * np.sqrt((r - m) / (r + m))
        a1_r = m**2 / ((r + m) ** 1.5 * (r - m) ** 0.5)
        a1_rr = -a1_r * (1.5 / (r + m) + 0.5 / (r - m))
        root = np.sqrt(r**2 - m**2)
        s = 0.25 * np.sqrt((r + m) / (r - m))
        return NativeJet(
            coord=r,
            a1=a1,
            a1_u=a1_r,
            a1_uu=a1_rr,
            a2=root / 2,
            a2_u=r / (2 * root),
            a2_uu=-(m**2) / (2 * root**3),
            speed=s,
            speed_u=-s * m / (r**2 - m**2),
        )

    def _arclength(self, r):
        m = self.param
        return 0.25 * (math.sqrt(r**2 - m**2) + m * math.acosh(r / m))


class EguchiHanson(ClosedForm):
    name = EGUCHI_HANSON
    coordinate = "r"
    params = EGUCHI_HANSON_PARAMS

    @property
    def domain(self):
        return (self.param, math.inf)

    @property
    def sample_window(self):
        return (1.05 * self.param, 20 * self.param)

    def _jet(self, r):
        q = self.param**4 / r**4
        h = 1 - q
        return NativeJet(
            coord=r,
            a1=r * np.sqrt(h),
            a1_u=(1 + q) / np.sqrt(h),
            a1_uu=h**-1.5 * (q / r) * (2 * q - 6),
            a2=r,
            a2_u=np.ones_like(r, dtype=float),
            a2_uu=np.zeros_like(r, dtype=float),
            speed=h**-0.5,
            speed_u=-2 * q / (r * h**1.5),
        )

    def _arclength(self, r):
        a = self.param
        # r = a + v^2 removes the inverse square-root singularity at r = a
        def integrand(v):
            rr = a + v * v
            return 2 * rr**2 / math.sqrt((rr + a) * (rr**2 + a**2))

        value, _ = integrate.quad(integrand, 0.0, math.sqrt(r - a), epsabs=1e-14, epsrel=1e-13)
        return value


class FubiniStudy(ClosedForm):
    """
    A1 = sin(2at)/(2a), A2 = sin(at)/a.

    A2 stays positive on (0, pi/a), but A1 changes sign at the bolt
    t = pi/(2a). Jets need A1 > 0, so the native domain is (0, pi/(2a)) and
    the sample window is [0.01, 0.99] of it.
    """

    name = FUBINI_STUDY
    params = FUBINI_STUDY_PARAMS

    @property
    def domain(self):
        return (0.0, math.pi / (2 * self.param))

    @property
    def sample_window(self):
        hi = self.domain[1]
        return (0.01 * hi, 0.99 * hi)

    @property
    def einstein_constant(self):
        return 12 * self.param**2

    def _jet(self, t):
        al = self.param
        return NativeJet(
            coord=t,
            a1=np.sin(2 * al * t) / (2 * al),
            a1_u=np.cos(2 * al * t),
            a1_uu=-2 * al * np.sin(2 * al * t),
            a2=np.sin(al * t) / al,
            a2_u=np.cos(al * t),
            a2_uu=-al * np.sin(al * t),
            speed=np.ones_like(t, dtype=float),
        )

    def coord_at_arclength(self, t):
        self.check(t)
        return t


class FubiniStudyHyperbolic(FubiniStudy):
    """The sinh/cosh variant, negative Einstein constant"""

    name = FUBINI_STUDY_HYPERBOLIC

    @property
    def domain(self):
        return (0.0, math.inf)

    @property
    def sample_window(self):
        return (0.01 / self.param, 3 / self.param)

    @property
    def einstein_constant(self):
        return -12 * self.param**2

    def _jet(self, t):
        al = self.param
        return NativeJet(
            coord=t,
            a1=np.sinh(2 * al * t) / (2 * al),
            a1_u=np.cosh(2 * al * t),
            a1_uu=2 * al * np.sinh(2 * al * t),
            a2=np.sinh(al * t) / al,
            a2_u=np.cosh(al * t),
            a2_uu=al * np.sinh(al * t),
            speed=np.ones_like(t, dtype=float),
        )


class Case3(ClosedForm):
    """A1 = 1/rho, A2 = rho/(c^2 - rho^2), dt/drho = rho^2/(c^2 - rho^2)^2 on (0, c)"""

    name = CASE3
    coordinate = "rho"
    params = CASE3_PARAMS

    @property
    def domain(self):
        return (0.0, self.param)

    @property
    def sample_window(self):
        return (0.3 * self.param, 0.9 * self.param)

    def _jet(self, rho):
        c2 = self.param**2
        d = c2 - rho**2
        return NativeJet(
            coord=rho,
            a1=1 / rho,
            a1_u=-1 / rho**2,
            a1_uu=2 / rho**3,
            a2=rho / d,
            a2_u=(c2 + rho**2) / d**2,
            a2_uu=2 * rho * (3 * c2 + rho**2) / d**3,
            speed=rho**2 / d**2,
            speed_u=2 * rho * (c2 + rho**2) / d**3,
        )

    def _arclength(self, rho):
        return case3_t_of_rho(self.param, rho)

    def coord_at_arclength(self, t):
        return case3_rho_of_t(self.param, t)


class FlatCone(ClosedForm):
    """A1 = A2 = t, the constant-ratio solution x = 1 of case 1"""

    name = FLAT_CONE
    params = CASE1_PARAMS

    def __init__(self, param: Optional[float] = None):
        super(FlatCone, self).__init__(1.0 if param is None else param)

    @property
    def domain(self):
        return (0.0, math.inf)

    @property
    def sample_window(self):
        return (0.1, 10.0)

    def _jet(self, t):
        one = np.ones_like(t, dtype=float)
        return NativeJet(t, t, one, 0 * one, t, one, 0 * one, one)

    def coord_at_arclength(self, t):
        self.check(t)
        return t


FORMS = {
    TAUB_NUT: TaubNUT,
    EGUCHI_HANSON: EguchiHanson,
    FUBINI_STUDY: FubiniStudy,
    FUBINI_STUDY_HYPERBOLIC: FubiniStudyHyperbolic,
    CASE3: Case3,
    FLAT_CONE: FlatCone,
}


def make_form(name: str, param: Optional[float] = None) -> ClosedForm:
    """
    Build a closed form by its command-line name.

    :param str name: one of the FORM_NAMES
    :param float param: m, a, alpha or c; ignored by the flat cone
    :return ClosedForm: the form
    """
    if name not in FORMS:
        raise InvalidParamsError(f"Unknown form '{name}', choose from: {', '.join(FORM_NAMES)}")
    if name == FLAT_CONE:
        return FlatCone()
    return FORMS[name](1.0 if param is None else param)


def evaluate(form: ClosedForm, coord) -> NativeJet:
    return form.evaluate(coord)


def to_arclength_jet(form: ClosedForm, coord) -> JetPoint:
    return form.evaluate(coord).to_arclength()


def ode_residual(form: ClosedForm, params: ParamSet, coord) -> Tuple[float, float]:
    """(A1' - rhs1, A2' - rhs2) from the arclength jet"""
    jet = to_arclength_jet(form, coord)
    r1, r2 = rhs(params, jet.a1, jet.a2)
    return jet.a1p - r1, jet.a2p - r2


def arclength(form: ClosedForm, coord: float) -> float:
    return form.arclength(coord)


def coord_at_arclength(form: ClosedForm, t: float) -> float:
    return form.coord_at_arclength(t)


def case3_t_of_rho(c: float, rho: float) -> float:
    """
    t(rho) = (u/(1-u^2) - artanh(u)) / (2c), u = rho/c, so that t(0+) = 0
    and dt/drho = rho^2/(c^2 - rho^2)^2.

    This is the antiderivative with the logarithm of |(rho+c)/(rho-c)|.
    """
    if not 0 < rho < c:
        raise DomainError(CASE3, rho, (0, c))
    u = rho / c
    if u < 0.1:
        # sum_{k>=1} 2k/(2k+1) u^(2k+1)
        total, term, k = 0.0, u, 1
        while True:
            term *= u * u
            piece = 2 * k / (2 * k + 1) * term
            total += piece
            if piece <= 1e-18 * total:
                break
            k += 1
        return total / (2 * c)
    return (u / (1 - u * u) - math.atanh(u)) / (2 * c)


def case3_rho_of_t(c: float, t: float) -> float:
    """Inverse of :func:`case3_t_of_rho` on t > 0"""
    if not t > 0:
        raise DomainError(CASE3, t, (0, math.inf))
    hi = c / 2
    while case3_t_of_rho(c, hi) < t:
        hi = (hi + c) / 2
        if hi >= c:
            raise DomainError(CASE3, t, (0, math.inf))
    lo = hi / 2
    while case3_t_of_rho(c, lo) > t:
        lo /= 2
        if lo == 0:
            raise DomainError(CASE3, t, (0, math.inf))
    return optimize.brentq(
        lambda r: case3_t_of_rho(c, r) - t, lo, hi, xtol=1e-300, rtol=_RTOL
    )


def case3_metric_coeffs(c: float, rho: float) -> Tuple[float, float, float]:
    """Coefficients of drho^2, (e1)^2 and (e2)^2 + (e3)^2"""
    if not 0 < rho < c:
        raise DomainError(CASE3, rho, (0, c))
    d = c**2 - rho**2
    return rho**4 / d**4, 1 / rho**2, rho**2 / d**2


def sample_coords(form: ClosedForm, points: int = 100) -> np.ndarray:
    """Evenly spaced native coordinates across the form's sample window"""
    if points < 2:
        raise InvalidParamsError(f"At least 2 sample points required, got {points}")
    lo, hi = form.sample_window
    return np.linspace(lo, hi, points)


def sample_table(form: ClosedForm, points: int = 100) -> pd.DataFrame:
    """
    Arclength, metric, Ricci and ODE residuals over the sample window, which
    lies strictly inside the native domain (for Fubini-Study, inside the
    A1 > 0 half before the bolt).

    :param ClosedForm form: the form to sample
    :param int points: number of native coordinates
    :return pandas.DataFrame: one row per coordinate, CATALOG_COLUMNS
    """
    coords = sample_coords(form, points)
    jet = to_arclength_jet(form, coords)
    ric = ricci_from_jet(jet)
    res1, res2 = ode_residual(form, form.params, coords)
    table = pd.DataFrame(
        {
            "coord": coords,
            "t": [form.arclength(u) for u in coords],
            "A1": jet.a1,
            "A2": jet.a2,
            "ric00": ric.ric00,
            "ric11": ric.ric11,
            "ric22": ric.ric22,
            "scalar": ric.scalar,
            "res1": res1,
            "res2": res2,
        }
    )
    return table[CATALOG_COLUMNS]


@dataclass
class VerifyReport:
    form: str
    param: float
    params: ParamSet
    points: int
    window: Tuple[float, float]
    einstein_constant: float
    max_ode_residual: float
    max_ricci_residual: float

    def to_dict(self) -> Dict:
        return {
            "form": self.form,
            "param": self.param,
            "params": self.params.to_strings(),
            "points": self.points,
            "window": list(self.window),
            "einstein_constant": self.einstein_constant,
            "max_ode_residual": self.max_ode_residual,
            "max_ricci_residual": self.max_ricci_residual,
        }


def verify_form(form: ClosedForm, points: int = 100) -> VerifyReport:
    """
    Largest ODE residual against the form's own ParamSet and largest
    |Ric_ii - lambda| over the sample window.
    """
    table = sample_table(form, points)
    lam = form.einstein_constant
    ode = float(np.max(np.abs(table[["res1", "res2"]].to_numpy())))
    ricci = float(np.max(np.abs(table[["ric00", "ric11", "ric22"]].to_numpy() - lam)))
    _LOGGER.info(
        f"{form.name}({form.param:g}): max ODE residual {ode:.3e}, max Ricci residual {ricci:.3e}"
    )
    return VerifyReport(
        form=form.name,
        param=form.param,
        params=form.params,
        points=points,
        window=form.sample_window,
        einstein_constant=lam,
        max_ode_residual=ode,
        max_ricci_residual=ricci,
    )
