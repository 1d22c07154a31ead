"""
The quadratic ODE family

    A1' = k1 x^2 + k2 x + k3,    A2' = l1 x^2 + l2 x + l3,    x = A1 / A2

its Ricci curvature as exact Laurent polynomials in x, and the classification
of its Ricci-flat and Einstein members.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import InvalidParamsError, SingularTimeError
from .frame_curvature import JetPoint, RicciValues
from .helpers import parse_rational, rational_to_str
from .symalg import LaurentBatch, LaurentPoly, as_rational, interpolate, rational_roots, render

__all__ = [
    "ParamSet",
    "SymbolicRicci",
    "ExcludedBranch",
    "ClassificationResult",
    "PARAM_NAMES",
    "rhs",
    "x_prime_poly",
    "symbolic_ricci",
    "is_ricci_flat",
    "einstein_difference_polys",
    "einstein_drift_poly",
    "ricci00_factors",
    "jet_from_state",
    "classify",
    "sign_flip",
    "canonical",
    "fixed_points",
]

_LOGGER = logging.getLogger(__name__)

PARAM_NAMES = ("k1", "k2", "k3", "l1", "l2", "l3")


@dataclass(frozen=True, order=True)
class ParamSet:
    k1: Fraction
    k2: Fraction
    k3: Fraction
    l1: Fraction
    l2: Fraction
    l3: Fraction

    def __post_init__(self):
        for name in PARAM_NAMES:
            value = getattr(self, name)
            try:
                object.__setattr__(self, name, as_rational(value))
            except TypeError as e:
                raise InvalidParamsError(f"Parameter {name}: {e}")
        if not any(self.as_tuple()):
            raise InvalidParamsError("At least one of k1, k2, k3, l1, l2, l3 must be nonzero")

    @classmethod
    def of(cls, *values) -> "ParamSet":
        if len(values) != 6:
            raise InvalidParamsError(f"Six coefficients required, got {len(values)}")
        return cls(*values)

    @classmethod
    def parse(cls, text: str) -> "ParamSet":
        """
        Parse "k1,k2,k3,l1,l2,l3" where each entry is an integer, "p/q" or a
        terminating decimal.
        """
        parts = [p for p in text.replace(" ", "").split(",")]
        return cls.of(*(parse_rational(p) for p in parts))

    def as_tuple(self) -> Tuple[Fraction, ...]:
        return (self.k1, self.k2, self.k3, self.l1, self.l2, self.l3)

    def as_floats(self) -> Tuple[float, ...]:
        return tuple(float(c) for c in self.as_tuple())

    def replace(self, **changes) -> "ParamSet":
        return replace(self, **changes)

    def to_strings(self) -> List[str]:
        return [rational_to_str(c) for c in self.as_tuple()]

    @property
    def k_poly(self) -> LaurentPoly:
        return LaurentPoly({2: self.k1, 1: self.k2, 0: self.k3})

    @property
    def l_poly(self) -> LaurentPoly:
        return LaurentPoly({2: self.l1, 1: self.l2, 0: self.l3})

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.as_tuple()) + ")"


@dataclass(frozen=True)
class SymbolicRicci:
    """Along any solution Ric_ii = L_ii(x) / A2^2"""

    l00: LaurentPoly
    l11: LaurentPoly
    l22: LaurentPoly

    def evaluate(self, a1, a2) -> RicciValues:
        x = a1 / a2
        r00, r11, r22 = (p.eval_at(x) / a2**2 for p in (self.l00, self.l11, self.l22))
        return RicciValues(r00, r11, r22, r00 + r11 + 2 * r22)

    def to_dict(self) -> Dict[str, str]:
        return {"L00": render(self.l00), "L11": render(self.l11), "L22": render(self.l22)}


def rhs(params: ParamSet, a1, a2):
    """
    Right-hand side of the system at (A1, A2).

    :raises SingularTimeError: when A2 == 0
    """
    if np.any(np.asarray(a2) == 0):
        raise SingularTimeError(f"A2 = 0 at A1 = {a1}: singular time reached")
    k1, k2, k3, l1, l2, l3 = params.as_floats()
    x = a1 / a2
    return k1 * x**2 + k2 * x + k3, l1 * x**2 + l2 * x + l3


def _residuals(ak, bk, x, xinv):
    """
    P and the Ricci numerators L00, L11, L22 for K = A1'(x), L = A2'(x).

    Works for :class:`LaurentPoly` and :class:`LaurentBatch` alike. Uses
    A1 = x A2, A1'' = K'(x) P(x) / A2, A2'' = L'(x) P(x) / A2.
    """
    p = ak - x * bk
    kp, lp = ak.ddx(), bk.ddx()
    kl_x = ak * bk * xinv
    l00 = -2 * kp * p * xinv - 4 * lp * p
    l11 = -2 * kp * p * xinv - 4 * kl_x + 4 * x * x
    l22 = -2 * lp * p - 2 * kl_x - 4 * x * x - 2 * bk * bk + 8
    return p, l00, l11, l22


_X = LaurentPoly.monomial(1)
_XINV = LaurentPoly.monomial(-1)


def x_prime_poly(params: ParamSet) -> LaurentPoly:
    """P(x) with x' = P(x) / A2 along solutions"""
    return params.k_poly - _X * params.l_poly


@lru_cache(maxsize=4096)
def symbolic_ricci(params: ParamSet) -> SymbolicRicci:
    _, l00, l11, l22 = _residuals(params.k_poly, params.l_poly, _X, _XINV)
    return SymbolicRicci(l00, l11, l22)


def is_ricci_flat(params: ParamSet) -> bool:
    ric = symbolic_ricci(params)
    return ric.l00.is_zero and ric.l11.is_zero and ric.l22.is_zero


def einstein_difference_polys(params: ParamSet) -> Tuple[LaurentPoly, LaurentPoly]:
    ric = symbolic_ricci(params)
    return ric.l00 - ric.l11, ric.l00 - ric.l22


def einstein_drift_poly(params: ParamSet) -> LaurentPoly:
    """
    Numerator of d/dt (L00(x) / A2^2) = (L00'(x) P(x) - 2 L00(x) L(x)) / A2^3.

    Identically zero exactly when Ric00 is constant along every solution.
    """
    l00 = symbolic_ricci(params).l00
    return l00.ddx() * x_prime_poly(params) - 2 * l00 * params.l_poly


def ricci00_factors(params: ParamSet) -> Tuple[LaurentPoly, LaurentPoly]:
    """
    (P, Q) with L00 = -2 P(x) Q(x) / x and Q = 4 l1 x^2 + 2 (k1 + l2) x + k2.

    L00 vanishes identically iff one factor does: P == 0 is the constant-ratio
    branch, Q == 0 is k2 = l1 = 0, k1 = -l2.
    """
    q = LaurentPoly({2: 4 * params.l1, 1: 2 * (params.k1 + params.l2), 0: params.k2})
    return x_prime_poly(params), q


def jet_from_state(params: ParamSet, a1, a2) -> JetPoint:
    """The jet at (A1, A2) on a solution, from the right-hand side and the chain rule"""
    k1, k2, k3, l1, l2, l3 = params.as_floats()
    a1p, a2p = rhs(params, a1, a2)
    x = a1 / a2
    xp = (a1p - x * a2p) / a2
    return JetPoint(a1, a1p, (2 * k1 * x + k2) * xp, a2, a2p, (2 * l1 * x + l2) * xp)


def sign_flip(params: ParamSet) -> ParamSet:
    return ParamSet(*(-c for c in params.as_tuple()))


def canonical(params: ParamSet) -> ParamSet:
    """The sign representative whose first nonzero coefficient is positive"""
    first = next(c for c in params.as_tuple() if c)
    return params if first > 0 else sign_flip(params)


def fixed_points(params: ParamSet) -> List[float]:
    """
    Positive real roots of P, the constant-ratio solutions x = const.

    The identically zero P (every ratio is constant) has no isolated roots and
    yields an empty list.
    """
    p = x_prime_poly(params)
    if p.is_zero:
        _LOGGER.debug(f"P vanishes identically for {params}: every ratio is fixed")
        return []
    exact = [float(r) for r in rational_roots(p) if r > 0]
    coeffs = [float(p.coefficient(n)) for n in range(3, -1, -1)]
    found = list(exact)
    for root in np.roots(coeffs):
        if abs(root.imag) > 1e-12 * max(1.0, abs(root)) or root.real <= 0:
            continue
        if all(abs(root.real - r) > 1e-9 * max(1.0, r) for r in found):
            found.append(float(root.real))
    return sorted(found)


@dataclass(frozen=True)
class ExcludedBranch:
    label: str
    reason: str

    def to_dict(self) -> Dict[str, str]:
        return {"label": self.label, "reason": self.reason}


@dataclass
class ClassificationResult:
    ricci_flat_families: List[ParamSet]
    einstein_families: List[ParamSet]
    excluded_branches: List[ExcludedBranch]
    search_bound: int
    grid_points: int = 0
    sweep_candidates: List[ParamSet] = field(default_factory=list)
    unexplained: List[ParamSet] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "ricci_flat_families": [p.to_strings() for p in self.ricci_flat_families],
            "einstein_families": [p.to_strings() for p in self.einstein_families],
            "excluded_branches": [b.to_dict() for b in self.excluded_branches],
            "search_bound": self.search_bound,
            "grid_points": self.grid_points,
            "sweep_candidates": [p.to_strings() for p in self.sweep_candidates],
            "unexplained": [p.to_strings() for p in self.unexplained],
            "notes": list(self.notes),
        }


Component = Callable[[ParamSet], LaurentPoly]
_NODES = (1, 2, 3, 4)


def _l11(p: ParamSet) -> LaurentPoly:
    return symbolic_ricci(p).l11


def _l22(p: ParamSet) -> LaurentPoly:
    return symbolic_ricci(p).l22


def _d1(p: ParamSet) -> LaurentPoly:
    return einstein_difference_polys(p)[0]


def _d2(p: ParamSet) -> LaurentPoly:
    return einstein_difference_polys(p)[1]


def _slice(
    component: Component, exponent: int, build: Callable[[int], ParamSet], variable: str
) -> LaurentPoly:
    """
    The coefficient of x**exponent in component(build(v)) as an exact polynomial in v.

    Coefficients are at most cubic in any one parameter, so four nodes determine it.
    """
    points = [(v, component(build(v)).coefficient(exponent)) for v in _NODES]
    return interpolate(points, variable=variable)


def _solve(
    components: Sequence[Component],
    build: Callable[[int], ParamSet],
    variable: str,
    exponents: Optional[Iterable[int]] = None,
) -> Tuple[List[Fraction], List[LaurentPoly]]:
    """
    Rational values of the free parameter at which every coefficient of every
    component vanishes, with the nonzero coefficient slices that decided it.
    """
    slices = []
    for component in components:
        seen = set()
        for v in _NODES:
            seen |= set(component(build(v)).terms)
        for n in sorted(seen if exponents is None else set(exponents) & seen):
            s = _slice(component, n, build, variable)
            if not s.is_zero:
                slices.append(s)
    if not slices:
        raise ValueError(f"No coefficient depends on {variable}: the slice is a free family")
    roots = set(rational_roots(slices[0]))
    for s in slices[1:]:
        roots &= {r for r in roots if s.eval_at(r) == 0}
    return sorted(roots), slices


def _witness(slices: List[LaurentPoly]) -> str:
    return "; ".join(f"{render(s)} = 0" for s in slices)


def _no_real_root(poly: LaurentPoly) -> bool:
    if poly.low_degree < 0 or poly.degree != 2:
        return False
    a, b, c = (poly.coefficient(n) for n in (2, 1, 0))
    return b * b - 4 * a * c < 0


def _ricci_flat_tree(excluded: List[ExcludedBranch]) -> List[ParamSet]:
    """Case tree for L00 = L11 = L22 = 0 with x nonconstant"""
    families = []
    excluded.append(
        ExcludedBranch(
            "ricci-flat/b: k3 = l1 = 0, k2 = l3, k1 = l2",
            "factor P of L00 vanishes identically, so x' = 0 and the ratio is constant "
            "(handled by fixed_points)",
        )
    )

    # branch a: Q = 0, i.e. k2 = l1 = 0 and l2 = -k1
    def branch_a(k1, k3, l3):
        return ParamSet(k1, 0, k3, 0, -k1, l3)

    roots, slices = _solve([_l11], lambda v: branch_a(v, 0, 0), "k1", exponents=[2])
    _LOGGER.debug(f"branch a, leading coefficient of L11: {_witness(slices)} -> k1 in {roots}")
    if Fraction(-1) in roots:
        excluded.append(
            ExcludedBranch(
                "ricci-flat/a: k1 = -1", "sign flip of k1 = 1 (normalization l2 = -1)"
            )
        )
    if Fraction(1) not in roots:
        return families
    k3_roots, k3_slices = _solve([_l11], lambda v: branch_a(1, v, 1), "k3", exponents=[-1])
    l3_roots, _ = _solve([_l11], lambda v: branch_a(1, 1, v), "l3", exponents=[-1])
    _LOGGER.debug(f"branch a, x^-1 coefficient of L11: {_witness(k3_slices)} (times l3)")
    if k3_roots != [0] or l3_roots != [0]:
        raise AssertionError("x^-1 coefficient of L11 is expected to be a multiple of k3*l3")

    # k3 = 0
    roots, slices = _solve([_l11, _l22], lambda v: branch_a(1, 0, v), "l3")
    families += [branch_a(1, 0, r) for r in roots]
    excluded.append(
        ExcludedBranch(
            f"ricci-flat/a: k1 = 1, k3 = 0, l3 not in {{{', '.join(map(str, roots))}}}",
            f"nonvanishing coefficient: {_witness(slices)} fails",
        )
    )
    # l3 = 0
    roots, slices = _solve([_l11, _l22], lambda v: branch_a(1, v, 0), "k3")
    families += [branch_a(1, r, 0) for r in roots]
    excluded.append(
        ExcludedBranch(
            f"ricci-flat/a: k1 = 1, l3 = 0, k3 not in {{{', '.join(map(str, roots))}}}",
            f"nonvanishing coefficient: {_witness(slices)} fails",
        )
    )
    return [p for p in families if is_ricci_flat(p)]


def _einstein_tree(excluded: List[ExcludedBranch]) -> List[ParamSet]:
    """Case tree for L00 - L11 = L00 - L22 = 0 and constant Ric00"""
    candidates = []
    roots, slices = _solve([_d1], lambda v: ParamSet(0, 0, 0, v, -1, 0), "l1", exponents=[4])
    excluded.append(
        ExcludedBranch(
            "einstein: l1 != 0", f"leading coefficient of L00 - L11: {render(slices[0])}"
        )
    )
    if roots != [0]:
        return candidates
    roots, slices = _solve([_d1], lambda v: ParamSet(0, 0, 0, 0, v, 0), "l2", exponents=[2])
    _LOGGER.debug(f"einstein, l1 = 0: {_witness(slices)} -> l2 in {roots}, normalize l2 = -1")

    # l3 != 0: the remaining coefficients of L00 - L11 are multiples of l3
    (k1,), _ = _solve([_d1], lambda v: ParamSet(v, 0, 0, 0, -1, 1), "k1", exponents=[1])
    (k2,), _ = _solve([_d1], lambda v: ParamSet(k1, v, 0, 0, -1, 1), "k2", exponents=[0])
    (k3,), _ = _solve([_d1], lambda v: ParamSet(k1, 0, v, 0, -1, 1), "k3", exponents=[-1])
    roots, slices = _solve([_d1, _d2], lambda v: ParamSet(k1, k2, k3, 0, -1, v), "l3")
    for r in roots:
        p = ParamSet(k1, k2, k3, 0, -1, r)
        if is_ricci_flat(p):
            excluded.append(
                ExcludedBranch(f"einstein: l3 = {r}", f"{p} is Ricci-flat (Einstein constant 0)")
            )
        else:
            candidates.append(p)

    # l3 = 0: the x^-1 coefficient of L00 - L22 is a multiple of k2*k3
    def branch(k1, k2, k3):
        return ParamSet(k1, k2, k3, 0, -1, 0)

    # k3 = 0, k2 != 0
    _, slices = _solve([_d2], lambda v: branch(0, v, 0), "k2", exponents=[0])
    constant = slices[0]
    if _no_real_root(constant):
        monic = constant * (1 / constant.coefficient(2))
        excluded.append(
            ExcludedBranch(
                "einstein: l3 = 0, k3 = 0, k2 != 0",
                f"constant coefficient of L00 - L22 is {render(constant)}; {render(monic)} > 0",
            )
        )
    # k2 = 0
    k1_roots, slices = _solve([_d2], lambda v: branch(v, 0, 0), "k1", exponents=[2])
    _LOGGER.debug(f"einstein, l3 = k2 = 0: {_witness(slices)} -> k1 in {k1_roots}")
    for k1 in k1_roots:
        k3_roots, _ = _solve([_d2], lambda v, k1=k1: branch(k1, 0, v), "k3")
        for k3 in k3_roots:
            p = branch(k1, 0, k3)
            if is_ricci_flat(p):
                excluded.append(
                    ExcludedBranch(
                        f"einstein: l3 = 0, k2 = 0, k1 = {k1}", f"{p} is Ricci-flat (constant 0)"
                    )
                )
            else:
                candidates.append(p)

    families = []
    for p in candidates:
        drift = einstein_drift_poly(p)
        if drift.is_zero:
            families.append(p)
        else:
            excluded.append(
                ExcludedBranch(f"einstein: {p}", f"Ric00 not constant: drift {render(drift)}")
            )
    return families


def _sweep_slice(k1: int, k2: int, bound: int) -> List[Tuple[int, ...]]:
    """Grid points with leading coefficients (k1, k2) that are Ricci-flat or Einstein"""
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    rest = np.stack(np.meshgrid(axis, axis, axis, axis, indexing="ij"), -1).reshape(-1, 4)
    n = len(rest)
    k3, l1, l2, l3 = rest.T
    x = LaurentBatch.monomial(1, n)
    xinv = LaurentBatch.monomial(-1, n)
    ak = LaurentBatch(
        {2: np.full(n, k1, dtype=np.int64), 1: np.full(n, k2, dtype=np.int64), 0: k3}, n
    )
    bk = LaurentBatch({2: l1, 1: l2, 0: l3}, n)
    p, l00, l11, l22 = _residuals(ak, bk, x, xinv)
    moving = p.nonzero_mask()
    ricci = l00.nonzero_mask() | l11.nonzero_mask() | l22.nonzero_mask()
    differences = (l00 - l11).nonzero_mask() | (l00 - l22).nonzero_mask()
    drift = (l00.ddx() * p - 2 * l00 * bk).nonzero_mask()
    hits = moving & (~ricci | (~differences & ~drift))
    return [(k1, k2) + tuple(int(v) for v in row) for row in rest[hits]]


def _sweep(bound: int, workers: int) -> List[ParamSet]:
    # one task per (k1, k2) keeps each batch at (2 bound + 1)^4 rows
    leading = list(product(range(-bound, bound + 1), repeat=2))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        chunks = list(pool.map(lambda ks: _sweep_slice(*ks, bound), leading))
    hits = {canonical(ParamSet(*row)) for chunk in chunks for row in chunk}
    return sorted(hits)


def classify(search_bound: int = 3, workers: int = 1) -> ClassificationResult:
    """
    Ricci-flat and Einstein members of the family, by case tree and grid sweep.

    :param int search_bound: half-width N of the integer grid [-N, N]^6 (N >= 3)
    :param int workers: threads sharing the sweep
    :return ClassificationResult: families in canonical sign, excluded branches,
        and the sweep outcome
    """
    if search_bound < 3:
        raise InvalidParamsError(f"search_bound must be at least 3, got {search_bound}")
    excluded: List[ExcludedBranch] = []
    ricci_flat = sorted({canonical(p) for p in _ricci_flat_tree(excluded)})
    einstein = sorted({canonical(p) for p in _einstein_tree(excluded)})
    _LOGGER.info(
        f"Case tree: {len(ricci_flat)} Ricci-flat, {len(einstein)} Einstein families"
    )
    candidates = _sweep(search_bound, workers)
    known = set(ricci_flat) | set(einstein)
    unexplained = [p for p in candidates if p not in known]
    for p in unexplained:
        _LOGGER.warning(f"Sweep candidate {p} is not produced by the case tree")
    _LOGGER.info(
        f"Swept {(2 * search_bound + 1) ** 6} grid points: {len(candidates)} candidates, "
        f"{len(unexplained)} unexplained"
    )
    notes = [
        "L00 = -2*P(x)*Q(x)*x^-1 with P = x' * A2 and Q = 4*l1*x^2 + 2*(k1 + l2)*x + k2; "
        "in the reciprocal variable 1/x the second factor reads k2*x^2 + 2*(k1 + l2)*x + 4*l1",
        "families are listed with their first nonzero coefficient positive; "
        "the global sign flip gives the same metric",
        "constant-ratio solutions (P identically zero) are excluded from the families",
    ]
    return ClassificationResult(
        ricci_flat_families=ricci_flat,
        einstein_families=einstein,
        excluded_branches=excluded,
        search_bound=search_bound,
        grid_points=(2 * search_bound + 1) ** 6,
        sweep_candidates=candidates,
        unexplained=unexplained,
        notes=notes,
    )
