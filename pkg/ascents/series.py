"""
Truncated exact power series for the ascent generating functions.

A series is stored densely in z up to a truncation order N. Each z-coefficient
is a polynomial in t (a list of exact integers or Fractions, index = power of
t), so univariate series are simply series with constant t-polynomials.

Generating functions provided here:

- V(z, t): excursions, z marks length + 1 and t marks r-ascents
- F(z, t, 1): meanders
- D(z, t): dispersed excursions
- V(z), V_t(z), V_tt(z) and the t-derivatives of F and D at t = 1

Everything is computed coefficientwise with exact arithmetic, which makes this
module an oracle that is independent of the path DP in ascents.exact.
"""

from collections import deque
from collections.abc import Iterator
from fractions import Fraction
from functools import lru_cache

import structlog
from pydantic import BaseModel, ConfigDict

from ascents.errors import DispersedNeedsNoZeroStep, InvalidInputError
from ascents.stepset import StepSet

logger = structlog.get_logger()

Scalar = int | Fraction
Poly = list[Scalar]
Series = list[Poly]

T_MINUS_ONE: Poly = [-1, 1]


def _normalize(x: Scalar) -> Scalar:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _trim(p: Poly) -> tuple[Scalar, ...]:
    end = len(p)
    while end and p[end - 1] == 0:
        end -= 1
    return tuple(_normalize(x) for x in p[:end])


def _padd(p: Poly, q: Poly) -> Poly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, x in enumerate(q):
        out[i] += x
    return out


def _pscale(p: Poly, c: Scalar) -> Poly:
    return [c * x for x in p]


def _pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return []
    out: Poly = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x == 0:
            continue
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _zero(order: int) -> Series:
    return [[] for _ in range(order + 1)]


def _one(order: int) -> Series:
    out = _zero(order)
    out[0] = [1]
    return out


def _monomial(coeff: Scalar, power: int, order: int) -> Series:
    """coeff * z**power, truncated."""
    out = _zero(order)
    if power <= order:
        out[power] = [coeff]
    return out


def _truncate(a: Series, order: int) -> Series:
    if len(a) > order + 1:
        return a[: order + 1]
    return a + [[] for _ in range(order + 1 - len(a))]


def _add(a: Series, b: Series) -> Series:
    return [_padd(p, q) for p, q in zip(a, b, strict=True)]


def _scale(a: Series, c: Scalar) -> Series:
    return [_pscale(p, c) for p in a]


def _sub(a: Series, b: Series) -> Series:
    return _add(a, _scale(b, -1))


def _times_poly(a: Series, poly: Poly) -> Series:
    """Multiply every z-coefficient by a polynomial in t."""
    return [_pmul(p, poly) for p in a]


def _mul(a: Series, b: Series) -> Series:
    order = len(a) - 1
    out = _zero(order)
    for i, p in enumerate(a):
        if not p:
            continue
        for j in range(order - i + 1):
            if b[j]:
                out[i + j] = _padd(out[i + j], _pmul(p, b[j]))
    return out


def _pow(a: Series, exponent: int) -> Series:
    result = _one(len(a) - 1)
    base = a
    while exponent:
        if exponent & 1:
            result = _mul(result, base)
        exponent >>= 1
        if exponent:
            base = _mul(base, base)
    return result


def _reciprocal(c: Scalar) -> Scalar:
    if c in (1, -1):
        return int(c)
    return 1 / Fraction(c)


def _inv(a: Series) -> Series:
    """
    Multiplicative inverse of a series with an invertible constant term.

    The constant term must be a non-zero constant (t-free); only then is the
    inverse again a series with polynomial coefficients.
    """
    head = _trim(a[0])
    if len(head) != 1:
        raise InvalidInputError("Series division needs a non-zero, t-free constant term.")
    inv0 = _reciprocal(head[0])

    order = len(a) - 1
    out = _zero(order)
    out[0] = [inv0]
    for n in range(1, order + 1):
        acc: Poly = []
        for k in range(1, n + 1):
            if a[k] and out[n - k]:
                acc = _padd(acc, _pmul(a[k], out[n - k]))
        out[n] = _pscale(acc, -inv0)
    return out


def _shift(a: Series, k: int) -> Series:
    """Multiply by z**k, keeping the truncation order."""
    order = len(a) - 1
    return _truncate([[] for _ in range(k)] + a, order)


def _unshift(a: Series, k: int) -> Series:
    """Divide by z**k; the truncation order drops by k."""
    if any(_trim(p) for p in a[:k]):
        raise InvalidInputError(f"Series has terms below z^{k}; cannot divide by z^{k}.")
    return a[k:]


def _sum_powers(powers: list[Series], exponents: tuple[int, ...], weights=None) -> Series:
    out = _zero(len(powers[0]) - 1)
    for i, e in enumerate(exponents):
        term = powers[e] if weights is None else _scale(powers[e], weights[i])
        out = _add(out, term)
    return out


def _power_table(a: Series, top: int) -> list[Series]:
    """[a**0, a**1, ..., a**top]."""
    powers = [_one(len(a) - 1)]
    for _ in range(top):
        powers.append(_mul(powers[-1], a))
    return powers


class UnivariateSeries(BaseModel):
    """Exact series in z truncated at `order`; coeffs[n] is [z^n]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int
    coeffs: tuple[int | Fraction, ...]

    def coefficient(self, n: int) -> Scalar:
        """
        [z^n] of the series.

        Raises:
            InvalidInputError: If n is beyond the truncation order
        """
        if not 0 <= n <= self.order:
            raise InvalidInputError(f"[z^{n}] is outside the truncation order {self.order}")
        return self.coeffs[n]

    @classmethod
    def _from_series(cls, a: Series) -> "UnivariateSeries":
        rows = [_trim(p) for p in a]
        if any(len(row) > 1 for row in rows):
            raise InvalidInputError("Series still depends on t; evaluate or differentiate first.")
        return cls(order=len(a) - 1, coeffs=tuple(row[0] if row else 0 for row in rows))

    def _to_series(self) -> Series:
        return [[c] if c else [] for c in self.coeffs]


class BivariateSeries(BaseModel):
    """
    Exact series sum(c[n][k] z^n t^k) truncated at z-order `order`.

    coeffs[n] holds the t-polynomial of the z^n slice with trailing zeros
    removed, so an all-zero slice is the empty tuple.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int
    coeffs: tuple[tuple[int | Fraction, ...], ...]

    def slice(self, n: int) -> tuple[Scalar, ...]:
        """t-polynomial [z^n] as a tuple of coefficients."""
        if not 0 <= n <= self.order:
            raise InvalidInputError(f"[z^{n}] is outside the truncation order {self.order}")
        return self.coeffs[n]

    def coefficient(self, n: int, k: int) -> Scalar:
        """[z^n t^k]; zero for k past the slice."""
        row = self.slice(n)
        return row[k] if 0 <= k < len(row) else 0

    def at_one(self) -> UnivariateSeries:
        """The series at t = 1."""
        return UnivariateSeries(
            order=self.order, coeffs=tuple(_normalize(sum(row, 0)) for row in self.coeffs)
        )

    def t_derivative(self) -> UnivariateSeries:
        """d/dt at t = 1: sum(k * c[n][k])."""
        return UnivariateSeries(
            order=self.order,
            coeffs=tuple(_normalize(sum(k * c for k, c in enumerate(row))) for row in self.coeffs),
        )

    def second_t_derivative(self) -> UnivariateSeries:
        """d^2/dt^2 at t = 1: sum(k * (k - 1) * c[n][k])."""
        return UnivariateSeries(
            order=self.order,
            coeffs=tuple(
                _normalize(sum(k * (k - 1) * c for k, c in enumerate(row))) for row in self.coeffs
            ),
        )

    @classmethod
    def _from_series(cls, a: Series) -> "BivariateSeries":
        return cls(order=len(a) - 1, coeffs=tuple(_trim(p) for p in a))

    def _to_series(self) -> Series:
        return [list(row) for row in self.coeffs]


def _check_order(order: int) -> None:
    if order < 0:
        raise InvalidInputError(f"Truncation order must be non-negative, got {order}")


def _check_r(r: int) -> None:
    if r < 1:
        raise InvalidInputError(f"Ascent length r must be at least 1, got {r}")


def solve_V_iterates(step_set: StepSet, r: int, order: int) -> Iterator[BivariateSeries]:
    """
    Yield the fixed-point iterates of V = z * L(z, t, V), starting from V = 0.

    Here L(z, t, v) = 1/(1 - z*S+(v)) + (t - 1)*(z*S+(v))**r. Iterate j is
    computed at truncation order min(j, order) and is exact up to z^j; there
    are order + 1 iterates in total.
    """
    _check_order(order)
    _check_r(r)

    v = _zero(0)
    for j in range(1, order + 2):
        m = min(j, order)
        v = _truncate(v, m)
        powers = _power_table(v, step_set.max_up)
        z_s_plus = _shift(_sum_powers(powers, step_set.ups), 1)

        runs = _inv(_sub(_one(m), z_s_plus))
        marked = _times_poly(_pow(z_s_plus, r), T_MINUS_ONE)
        v = _shift(_add(runs, marked), 1)
        yield BivariateSeries._from_series(v)


@lru_cache(maxsize=128)
def solve_V(step_set: StepSet, r: int, order: int) -> BivariateSeries:
    """
    Excursion series V(z, t) truncated at z-order `order`.

    [z^(n+1) t^k] V is the number of excursions of length n with exactly k
    r-ascents.

    Examples:
        >>> from ascents.stepset import make_step_set
        >>> solve_V(make_step_set([-1, 1]), 1, 5).slice(3)
        (0, 1)
    """
    result = deque(solve_V_iterates(step_set, r, order), maxlen=1)[0]
    logger.debug("series_solved", steps=str(step_set), r=r, order=order)
    return result


@lru_cache(maxsize=128)
def V_univariate(step_set: StepSet, order: int) -> UnivariateSeries:
    """
    V(z) = V(z, 1), solved directly from V = z * (1 + sum(V**(b+1))).

    This route never touches t, so it is an independent check on solve_V.
    """
    _check_order(order)

    exponents = tuple(b + 1 for b in step_set.ups)
    v = _zero(0)
    for j in range(1, order + 2):
        m = min(j, order)
        v = _truncate(v, m)
        powers = _power_table(v, exponents[-1])
        v = _shift(_add(_one(m), _sum_powers(powers, exponents)), 1)
    return UnivariateSeries._from_series(v)


def _V_t(step_set: StepSet, r: int, order: int) -> Series:
    v = V_univariate(step_set, order + 1)._to_series()
    w = _unshift(v, 1)
    ratio = _mul(_sub(w, _one(order)), _inv(w))

    v = _truncate(v, order)
    exponents = tuple(b + 1 for b in step_set.ups)
    powers = _power_table(v, exponents[-1])
    denominator = _sub(_one(order), _sum_powers(powers, exponents, weights=step_set.ups))

    return _shift(_mul(_pow(ratio, r), _inv(denominator)), 1)


def V_t_series(step_set: StepSet, r: int, order: int) -> UnivariateSeries:
    """
    V_t(z) = -z (V - z)**r / (V**(r+2) S'(V)) built from V(z) alone.

    Rewritten with W = V/z as z * ((W - 1)/W)**r / (1 - sum(b * V**(b+1))),
    which only divides by series with a unit constant term.
    """
    _check_order(order)
    _check_r(r)
    return UnivariateSeries._from_series(_V_t(step_set, r, order))


def V_tt_series(step_set: StepSet, r: int, order: int) -> UnivariateSeries:
    """Second t-derivative of V at t = 1, read off solve_V."""
    return solve_V(step_set, r, order).second_t_derivative()


def _s_plus_one(step_set: StepSet) -> int:
    return len(step_set.ups)


def meander_series(step_set: StepSet, r: int, order: int) -> BivariateSeries:
    """
    Meander series F(z, t, 1) = (1 - V) L1 / (1 - z L1).

    L1 = L(z, t, 1) = 1/(1 - c z) + (t - 1)(c z)**r with c = S+(1).
    [z^n t^k] is the number of meanders of length n with k r-ascents.
    """
    v = solve_V(step_set, r, order)._to_series()
    c = _s_plus_one(step_set)
    cz = _monomial(c, 1, order)

    l1 = _add(_inv(_sub(_one(order), cz)), _times_poly(_pow(cz, r), T_MINUS_ONE))
    numerator = _mul(_sub(_one(order), v), l1)
    result = _mul(numerator, _inv(_sub(_one(order), _shift(l1, 1))))
    return BivariateSeries._from_series(result)


def _check_dispersed(step_set: StepSet) -> None:
    if step_set.has_zero:
        raise DispersedNeedsNoZeroStep(
            f"Dispersed excursions need a step set without 0, got {step_set}"
        )


def dispersed_series(step_set: StepSet, r: int, order: int) -> BivariateSeries:
    """
    Dispersed excursion series D(z, t) = V / (z (1 - V)).

    Raises:
        DispersedNeedsNoZeroStep: If 0 is a step
    """
    _check_dispersed(step_set)
    _check_order(order)
    v = solve_V(step_set, r, order + 1)._to_series()
    quotient = _mul(v, _inv(_sub(_one(order + 1), v)))
    return BivariateSeries._from_series(_unshift(quotient, 1))


def dispersed_t_series(step_set: StepSet, r: int, order: int) -> UnivariateSeries:
    """
    d/dt D(z, t) at t = 1, equal to V_t / (z (1 - V)**2).

    Raises:
        DispersedNeedsNoZeroStep: If 0 is a step
    """
    _check_dispersed(step_set)
    _check_order(order)
    _check_r(r)
    v = V_univariate(step_set, order + 1)._to_series()
    v_t = _V_t(step_set, r, order + 1)
    gap = _sub(_one(order + 1), v)
    quotient = _mul(v_t, _inv(_mul(gap, gap)))
    return UnivariateSeries._from_series(_unshift(quotient, 1))


def meander_t_series(step_set: StepSet, r: int, order: int) -> UnivariateSeries:
    """
    d/dt F(z, t, 1) at t = 1.

    Equals (cz)**r (cz - 1)**2 (1 - V) / (1 - z S(1))**2 - V_t / (1 - z S(1))
    with c = S+(1).
    """
    _check_order(order)
    _check_r(r)
    v = V_univariate(step_set, order)._to_series()
    v_t = _V_t(step_set, r, order)
    c = _s_plus_one(step_set)
    one = _one(order)

    cz = _monomial(c, 1, order)
    gap = _inv(_sub(one, _monomial(c + 1, 1, order)))
    closing = _sub(one, cz)

    ascent_part = _mul(_mul(_pow(cz, r), _mul(closing, closing)), _sub(one, v))
    result = _sub(_mul(ascent_part, _mul(gap, gap)), _mul(v_t, gap))
    return UnivariateSeries._from_series(result)


def _sqrt(a: Series) -> Series:
    """Square root of a series with constant term 1."""
    if _trim(a[0]) != (1,):
        raise InvalidInputError("Series square root needs constant term 1.")
    order = len(a) - 1
    s: list[Scalar] = [1] + [0] * order
    f = [p[0] if p else 0 for p in a]
    for n in range(1, order + 1):
        cross = sum(s[k] * s[n - k] for k in range(1, n))
        s[n] = Fraction(f[n] - cross, 2)
    return [[x] for x in s]


def _closed_form_V(order: int, linear: int, quadratic: int, tail: Series) -> UnivariateSeries:
    radicand = _add(
        _one(order + 1),
        _add(_monomial(linear, 1, order + 1), _monomial(quadratic, 2, order + 1)),
    )
    numerator = _sub(tail, _sqrt(radicand))
    return UnivariateSeries._from_series(_scale(_unshift(numerator, 1), Fraction(1, 2)))


def explicit_dyck_V(order: int) -> UnivariateSeries:
    """V(z) = (1 - sqrt(1 - 4z^2)) / (2z) for Dyck paths, expanded exactly."""
    _check_order(order)
    return _closed_form_V(order, 0, -4, _one(order + 1))


def explicit_motzkin_V(order: int) -> UnivariateSeries:
    """V(z) = (1 - z - sqrt(1 - 2z - 3z^2)) / (2z) for Motzkin paths, expanded exactly."""
    _check_order(order)
    tail = _sub(_one(order + 1), _monomial(1, 1, order + 1))
    return _closed_form_V(order, -2, -3, tail)
