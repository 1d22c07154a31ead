"""
Exact-rational Laurent polynomials in one variable.

Coefficients are :class:`fractions.Fraction` values, so "this polynomial is
identically zero" is a decidable question. Floats are refused as coefficients;
they are only accepted as evaluation points.
"""

import logging
import math
from fractions import Fraction
from math import isqrt
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from .exceptions import ZeroArgumentError

__all__ = [
    "Rational",
    "LaurentPoly",
    "LaurentBatch",
    "add",
    "mul",
    "ddx",
    "eval_at",
    "render",
    "interpolate",
    "rational_roots",
    "as_rational",
]

_LOGGER = logging.getLogger(__name__)

Rational = Fraction
Number = Union[int, Fraction]


def as_rational(value) -> Fraction:
    """
    Coerce an exact number to a Fraction.

    :param int | Fraction value: the number to coerce
    :return Fraction: value as a fraction in lowest terms
    :raises TypeError: for floats and anything else that is not exact
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return Fraction(int(value))
    raise TypeError(f"Exact rational coefficient required, got {type(value).__name__}: {value!r}")


class LaurentPoly:
    """
    Immutable finite sum of c_n * x**n with rational c_n and integer n.

    The term map never stores zero coefficients, the zero polynomial is the
    empty map.
    """

    __slots__ = ("_terms", "_variable")

    def __init__(self, terms: Optional[Mapping[int, Number]] = None, variable: str = "x"):
        clean = {}
        for n, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                clean[int(n)] = c
        self._terms = clean
        self._variable = variable

    @classmethod
    def constant(cls, c: Number, variable: str = "x") -> "LaurentPoly":
        return cls({0: c}, variable=variable)

    @classmethod
    def monomial(cls, n: int, c: Number = 1, variable: str = "x") -> "LaurentPoly":
        return cls({n: c}, variable=variable)

    @property
    def terms(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def variable(self) -> str:
        return self._variable

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> Optional[int]:
        """Highest exponent, None for the zero polynomial"""
        return max(self._terms) if self._terms else None

    @property
    def low_degree(self) -> Optional[int]:
        """Lowest exponent, None for the zero polynomial"""
        return min(self._terms) if self._terms else None

    def coefficient(self, n: int) -> Fraction:
        return self._terms.get(n, Fraction(0))

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.constant(as_rational(other), variable=self._variable)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for n, c in other._terms.items():
            out[n] = out.get(n, 0) + c
        return LaurentPoly(out, variable=self._variable)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({n: -c for n, c in self._terms.items()}, variable=self._variable)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[int, Fraction] = {}
        for n, c in self._terms.items():
            for m, d in other._terms.items():
                out[n + m] = out.get(n + m, 0) + c * d
        return LaurentPoly(out, variable=self._variable)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"LaurentPoly({render(self)!r})"

    def __str__(self):
        return render(self)

    def ddx(self) -> "LaurentPoly":
        """Term-wise derivative, n * x**(n-1) for every exponent including negative ones"""
        return LaurentPoly(
            {n - 1: n * c for n, c in self._terms.items() if n != 0}, variable=self._variable
        )

    def eval_at(self, x0):
        """
        Evaluate at a point.

        Exact (Fraction) when x0 is an int or a Fraction, float otherwise.
        numpy arrays are evaluated elementwise.

        :param int | Fraction | float | numpy.ndarray x0: evaluation point
        :return Fraction | float | numpy.ndarray: the value
        :raises ZeroArgumentError: x0 == 0 while negative exponents are present
        """
        exact = isinstance(x0, (int, Fraction, np.integer)) and not isinstance(x0, bool)
        if self._terms and self.low_degree < 0 and np.any(np.asarray(x0) == 0):
            raise ZeroArgumentError(
                f"Cannot evaluate {render(self)} at {self._variable}=0: negative exponents present"
            )
        if exact:
            x0 = as_rational(x0)
            return sum((c * x0**n for n, c in self._terms.items()), Fraction(0))
        if isinstance(x0, np.ndarray):
            x0 = x0.astype(float)
            out = np.zeros_like(x0)
            for n, c in sorted(self._terms.items()):
                out = out + float(c) * x0**n
            return out
        x0 = float(x0)
        return math.fsum(float(c) * x0**n for n, c in self._terms.items())


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def ddx(p: LaurentPoly) -> LaurentPoly:
    return p.ddx()


def eval_at(p: LaurentPoly, x0):
    return p.eval_at(x0)


def render(p: LaurentPoly, variable: Optional[str] = None) -> str:
    """
    Canonical text form: descending exponents, explicit signs, unit
    coefficients omitted, e.g. "2*x^2 - x^-1".

    :param LaurentPoly p: polynomial to render
    :param str variable: name to print instead of the polynomial's own variable
    :return str: the rendering, "0" for the zero polynomial
    """
    var = variable or p.variable
    if p.is_zero:
        return "0"
    parts = []
    for i, n in enumerate(sorted(p.terms, reverse=True)):
        c = p.terms[n]
        mag = abs(c)
        if n == 0:
            body = str(mag)
        else:
            mono = var if n == 1 else f"{var}^{n}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if i == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f" {'-' if c < 0 else '+'} {body}")
    return "".join(parts)


def interpolate(points: Iterable[Tuple[Number, Number]], variable: str = "x") -> LaurentPoly:
    """
    Exact Lagrange interpolation.

    :param Iterable[tuple] points: (x_i, y_i) pairs with distinct rational x_i
    :param str variable: variable name of the result
    :return LaurentPoly: the unique polynomial of degree < len(points) through them
    """
    pts = [(as_rational(x), as_rational(y)) for x, y in points]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError(f"Interpolation nodes must be distinct: {xs}")
    result = LaurentPoly(variable=variable)
    for i, (xi, yi) in enumerate(pts):
        basis = LaurentPoly.constant(1, variable=variable)
        denom = Fraction(1)
        for j, (xj, _) in enumerate(pts):
            if j != i:
                basis = basis * LaurentPoly({1: 1, 0: -xj}, variable=variable)
                denom *= xi - xj
        result = result + basis * (yi / denom)
    return result


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(p: LaurentPoly) -> List[Fraction]:
    """
    All rational roots of p, in increasing order, without multiplicity.

    Negative exponents are poles, so 0 is reported only when p is a genuine
    polynomial without constant term.

    :param LaurentPoly p: nonzero polynomial
    :return list[Fraction]: sorted roots
    """
    if p.is_zero:
        raise ValueError("The zero polynomial vanishes everywhere")
    low = p.low_degree
    roots = [Fraction(0)] if low > 0 else []
    shifted = {n - low: c for n, c in p.terms.items()}
    scale = math.lcm(*(c.denominator for c in shifted.values()))
    ints = {n: int(c * scale) for n, c in shifted.items()}
    top = max(ints)
    if top == 0:
        return roots
    q = LaurentPoly(ints)
    for num in _divisors(ints[0]):
        for den in _divisors(ints[top]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if q.eval_at(cand) == 0:
                    roots.append(cand)
    return sorted(set(roots))


class LaurentBatch:
    """
    Integer Laurent polynomials evaluated over a batch of parameter points.

    Each coefficient is a numpy int64 array with one entry per batch member,
    so a whole parameter grid shares one sequence of ring operations. Zero
    coefficients are kept; use :meth:`nonzero_mask` to ask which members are
    identically zero.
    """

    def __init__(self, terms: Mapping[int, np.ndarray], size: int):
        self.size = size
        self._terms = {
            int(n): np.broadcast_to(np.asarray(c, dtype=np.int64), (size,)).copy()
            for n, c in terms.items()
        }

    @classmethod
    def monomial(cls, n: int, size: int) -> "LaurentBatch":
        return cls({n: 1}, size)

    @property
    def exponents(self) -> List[int]:
        return sorted(self._terms)

    def coefficient(self, n: int) -> np.ndarray:
        return self._terms.get(n, np.zeros(self.size, dtype=np.int64))

    def nonzero_mask(self) -> np.ndarray:
        """True where the member polynomial has at least one nonzero coefficient"""
        mask = np.zeros(self.size, dtype=bool)
        for c in self._terms.values():
            mask |= c != 0
        return mask

    def member(self, i: int) -> LaurentPoly:
        return LaurentPoly({n: int(c[i]) for n, c in self._terms.items()})

    def _coerce(self, other) -> "LaurentBatch":
        if isinstance(other, LaurentBatch):
            return other
        if isinstance(other, (int, np.integer)):
            return LaurentBatch({0: int(other)}, self.size)
        raise TypeError(f"Cannot combine LaurentBatch with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = {n: c.copy() for n, c in self._terms.items()}
        for n, c in other._terms.items():
            out[n] = out[n] + c if n in out else c.copy()
        return LaurentBatch(out, self.size)

    __radd__ = __add__

    def __neg__(self):
        return LaurentBatch({n: -c for n, c in self._terms.items()}, self.size)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return LaurentBatch({n: c * int(other) for n, c in self._terms.items()}, self.size)
        other = self._coerce(other)
        out: Dict[int, np.ndarray] = {}
        for n, c in self._terms.items():
            for m, d in other._terms.items():
                out[n + m] = out[n + m] + c * d if n + m in out else c * d
        return LaurentBatch(out, self.size)

    __rmul__ = __mul__

    def ddx(self) -> "LaurentBatch":
        return LaurentBatch({n - 1: n * c for n, c in self._terms.items() if n != 0}, self.size)
