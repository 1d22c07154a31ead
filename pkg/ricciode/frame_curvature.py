"""
Connection, curvature and Ricci curvature of

    g = dt^2 + A1^2 (e1)^2 + A2^2 ((e2)^2 + (e3)^2),   de^i = 2 e^j ^ e^k (cyclic)

in the orthonormal coframe eps0 = dt, eps1 = A1 e1, eps2 = A2 e2, eps3 = A2 e3,
evaluated at one jet (A1, A1', A1'', A2, A2', A2''). All functions broadcast
over numpy arrays of jets.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .exceptions import InvalidJetError

__all__ = [
    "JetPoint",
    "ConnectionMatrix",
    "CurvatureCoeffs",
    "RicciValues",
    "CURVATURE_BASIS",
    "connection_matrix",
    "curvature_coeffs",
    "ricci_from_jet",
    "ricci_from_curvature",
    "scalar_curvature",
    "coframe_differential",
    "structure_residual",
]

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class JetPoint:
    a1: float
    a1p: float
    a1pp: float
    a2: float
    a2p: float
    a2pp: float

    def __post_init__(self):
        if np.any(~(np.asarray(self.a1) > 0)) or np.any(~(np.asarray(self.a2) > 0)):
            raise InvalidJetError(self.a1, self.a2)

    def as_tuple(self) -> Tuple:
        return (self.a1, self.a1p, self.a1pp, self.a2, self.a2p, self.a2pp)


@dataclass(frozen=True)
class RicciValues:
    """Frame components of Ric (ric33 equals ric22) and the scalar curvature"""

    ric00: float
    ric11: float
    ric22: float
    scalar: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "ric00": float(self.ric00),
            "ric11": float(self.ric11),
            "ric22": float(self.ric22),
            "scalar": float(self.scalar),
        }


@dataclass(frozen=True)
class ConnectionMatrix:
    """
    The matrix -omega of connection 1-forms.

    ``forms[i, j, k]`` is the coefficient of eps^k in the (i, j) entry; every
    entry has exactly one nonzero component.
    """

    forms: np.ndarray

    def entry(self, i: int, j: int):
        """The coefficient of the single 1-form in entry (i, j)"""
        return self.forms[i, j].sum(axis=0)

    def one_form(self, i: int, j: int) -> np.ndarray:
        return self.forms[i, j]

    def is_antisymmetric(self) -> bool:
        return bool(np.all(self.forms == -np.swapaxes(self.forms, 0, 1)))


# basis 2-forms (p, q) meaning eps^p ^ eps^q, one pair per curvature form
CURVATURE_BASIS = {
    (0, 1): ((0, 1), (2, 3)),
    (0, 2): ((0, 2), (3, 1)),
    (0, 3): ((0, 3), (1, 2)),
    (1, 2): ((0, 3), (1, 2)),
    (1, 3): ((2, 0), (1, 3)),
    (2, 3): ((0, 1), (2, 3)),
}


@dataclass(frozen=True)
class CurvatureCoeffs:
    """
    Coefficients of the curvature 2-forms Omega^i_j (i < j) on the basis pairs
    listed in :data:`CURVATURE_BASIS`. With that choice of basis the 2<->3
    symmetry of the metric reads omega03 == omega02 and omega13 == omega12.
    """

    omega01: Tuple[float, float]
    omega02: Tuple[float, float]
    omega03: Tuple[float, float]
    omega12: Tuple[float, float]
    omega13: Tuple[float, float]
    omega23: Tuple[float, float]

    def form(self, i: int, j: int) -> Dict[Tuple[int, int], float]:
        """Omega^i_j as {(p, q): coefficient of eps^p ^ eps^q}"""
        pair = getattr(self, f"omega{i}{j}")
        return dict(zip(CURVATURE_BASIS[(i, j)], pair))


def connection_matrix(jet: JetPoint) -> ConnectionMatrix:
    a, ap, b, bp = jet.a1, jet.a1p, jet.a2, jet.a2p
    shape = np.shape(a)
    forms = np.zeros((4, 4, 4) + shape)

    def put(i, j, k, value):
        forms[i, j, k] = value
        forms[j, i, k] = -value

    put(0, 1, 1, ap / a)
    put(0, 2, 2, bp / b)
    put(0, 3, 3, bp / b)
    put(1, 2, 3, -a / b**2)
    put(1, 3, 2, a / b**2)
    put(2, 3, 1, (a**2 - 2 * b**2) / (a * b**2))
    return ConnectionMatrix(forms)


def coframe_differential(jet: JetPoint) -> Dict[int, Tuple[float, float]]:
    """
    d(eps^i) for i = 1, 2, 3 as (coefficient on eps^0 ^ eps^i, coefficient on
    the complementary cyclic pair eps^2^eps^3, eps^3^eps^1, eps^1^eps^2).
    """
    a, ap, b, bp = jet.a1, jet.a1p, jet.a2, jet.a2p
    return {
        1: (ap / a, 2 * a / b**2),
        2: (bp / b, 2 / a),
        3: (bp / b, 2 / a),
    }


_COMPLEMENT = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


def structure_residual(jet: JetPoint) -> float:
    """
    Largest deviation between d(eps) computed from the connection,
    d(eps^i) = -omega^i_j ^ eps^j, and :func:`coframe_differential`.
    """
    forms = connection_matrix(jet).forms
    from_connection = forms.transpose(0, 2, 1, *range(3, forms.ndim)) - forms
    # from_connection[i, k, j]: coefficient of eps^k ^ eps^j; only k < j is independent
    expected = np.zeros_like(from_connection)
    for i, (radial, twist) in coframe_differential(jet).items():
        p, q = _COMPLEMENT[i]
        expected[i, 0, i] = radial
        expected[i, i, 0] = -radial
        expected[i, p, q] = twist
        expected[i, q, p] = -twist
    return float(np.max(np.abs(from_connection - expected)))


def curvature_coeffs(jet: JetPoint) -> CurvatureCoeffs:
    a, ap, app, b, bp, bpp = jet.as_tuple()
    mixed = ap / b**2 - a * bp / b**3
    q = a**2 / b**4 - ap * bp / (a * b)
    omega02 = (-bpp / b, mixed)
    omega12 = (mixed, q)
    return CurvatureCoeffs(
        omega01=(-app / a, -2 * mixed),
        omega02=omega02,
        omega03=omega02,
        omega12=omega12,
        omega13=omega12,
        omega23=(-2 * mixed, 4 / b**2 - 3 * a**2 / b**4 - bp**2 / b**2),
    )


def _riemann(coeffs: CurvatureCoeffs, i: int, j: int, p: int, q: int):
    """R^i_{jpq} read off the curvature 2-forms"""
    if i == j:
        return 0.0
    if i > j:
        return -_riemann(coeffs, j, i, p, q)
    form = coeffs.form(i, j)
    if (p, q) in form:
        return form[(p, q)]
    if (q, p) in form:
        return -form[(q, p)]
    return 0.0


def ricci_from_curvature(jet: JetPoint) -> RicciValues:
    """
    Ricci values by contracting :func:`curvature_coeffs`, Ric_jj = sum_i R^i_{jij}.

    The curvature coefficients are read with both orderings of each basis
    2-form, which doubles the trace; this is the normalization of
    :func:`ricci_from_jet`.
    """
    coeffs = curvature_coeffs(jet)
    ric = [2 * sum(_riemann(coeffs, i, j, i, j) for i in range(4) if i != j) for j in range(3)]
    return RicciValues(ric[0], ric[1], ric[2], ric[0] + ric[1] + 2 * ric[2])


def ricci_from_jet(jet: JetPoint) -> RicciValues:
    a, ap, app, b, bp, bpp = jet.as_tuple()
    ric00 = -2 * app / a - 4 * bpp / b
    ric11 = -2 * app / a - 4 * ap * bp / (a * b) + 4 * a**2 / b**4
    ric22 = (
        -2 * bpp / b
        - 2 * ap * bp / (a * b)
        - 4 * a**2 / b**4
        - 2 * bp**2 / b**2
        + 8 / b**2
    )
    return RicciValues(ric00, ric11, ric22, ric00 + ric11 + 2 * ric22)


def scalar_curvature(jet: JetPoint) -> float:
    return ricci_from_jet(jet).scalar
