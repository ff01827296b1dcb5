"""
Asymptotic expansions for counts, means and variances of r-ascents.

All constants are evaluated with mpmath at a configurable number of
significant digits (default: settings().digits). Every public function works
inside its own mp.workdps() context; the global mpmath precision is left
untouched.

The general formulas are driven by the structural constant tau, the unique
positive root of S'(u) = 0. Step sets with tau = 1 ({-1, 1} and {-1, 0, 1})
have separate closed-form expansions for dispersed excursions and meanders,
selected here from the step set.
"""

from collections.abc import Callable, Sequence
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
import structlog
from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict

from ascents import exact
from ascents.errors import (
    DispersedNeedsNoZeroStep,
    EmptyFamily,
    InvalidInputError,
    NoConvergence,
    PeriodMismatch,
    TauIsOne,
)
from ascents.kind import PathKind
from ascents.stepset import StepSet, drift, eval_S, is_dyck, is_motzkin, is_tau_one, period
from config.settings import MAX_DIGITS, MIN_DIGITS, settings

logger = structlog.get_logger()

# Extra working digits on top of the requested precision.
GUARD_DIGITS = 10
BRACKET_WIDTH = mpf("1e-3")
MAX_ITERATIONS = 500


class StructuralConstants(BaseModel):
    """tau, rho = 1/S(tau), c = tau*S(tau) and the derivatives of S at tau."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tau: mpf
    rho: mpf
    c: mpf
    period: int
    drift: Fraction
    s_tau: mpf
    s2_tau: mpf
    s3_tau: mpf
    s4_tau: mpf
    tau_exact_one: bool
    digits: int


class MeanderConstants(BaseModel):
    """
    Constants of the meander expansions for step sets with tau != 1.

    xi = 1/S(1) is the dominant (polar) singularity; v_xi, vz_xi and vt_xi are
    V, V_z and V_t evaluated there.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    xi: mpf
    v_xi: mpf
    vz_xi: mpf
    vt_xi: mpf
    mu: mpf
    c0: mpf
    sigma2: mpf
    digits: int


class ComparisonRow(BaseModel):
    """Exact value, asymptotic value and their difference at one length."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    exact: int | Fraction
    asymptotic: mpf
    residual: mpf


class ComparisonReport(BaseModel):
    """Exact vs asymptotic comparison over several lengths."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    steps: StepSet
    kind: PathKind
    r: int
    quantity: str
    digits: int
    rows: tuple[ComparisonRow, ...]
    decay_exponent: float | None


def _resolve_digits(digits: int | None) -> int:
    digits = settings().digits if digits is None else digits
    if not MIN_DIGITS <= digits <= MAX_DIGITS:
        raise InvalidInputError(
            f"digits must be between {MIN_DIGITS} and {MAX_DIGITS}, got {digits}"
        )
    return digits


def to_mpf(value: int | Fraction) -> mpf:
    """Convert an exact int or Fraction at the current working precision."""
    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    return mpf(value)


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidInputError(f"Asymptotic expansions need n >= 1, got {n}")


def _check_r(r: int) -> None:
    if r < 1:
        raise InvalidInputError(f"Ascent length r must be at least 1, got {r}")


def _check_dispersed(step_set: StepSet) -> None:
    if step_set.has_zero:
        raise DispersedNeedsNoZeroStep(
            f"Dispersed excursions need a step set without 0, got {step_set}"
        )


def _sign(n: int) -> int:
    """(-1)**n."""
    return -1 if n % 2 else 1


def safeguarded_newton(
    func: Callable[[mpf], tuple[mpf, mpf]],
    lo: mpf,
    hi: mpf,
    tol: mpf,
    max_iterations: int = MAX_ITERATIONS,
) -> mpf:
    """
    Root of a monotone function bracketed by [lo, hi].

    Bisects until the bracket is narrower than BRACKET_WIDTH, then takes Newton
    steps, falling back to bisection whenever a step would leave the bracket
    or fails to halve the previous step.

    Args:
        func: Returns (f(x), f'(x))
        lo, hi: Bracket with f(lo) and f(hi) of opposite sign
        tol: Relative tolerance on the root

    Raises:
        NoConvergence: If the iteration budget is exhausted
    """
    f_lo, _ = func(lo)
    f_hi, _ = func(hi)
    if f_lo * f_hi > 0:
        raise NoConvergence(f"Root is not bracketed by [{lo}, {hi}]")
    # orient so that f(lo) < 0 < f(hi)
    if f_lo > 0:
        lo, hi = hi, lo

    for _ in range(max_iterations):
        if abs(hi - lo) < BRACKET_WIDTH:
            break
        mid = (lo + hi) / 2
        f_mid, _ = func(mid)
        if f_mid < 0:
            lo = mid
        else:
            hi = mid

    x = (lo + hi) / 2
    dx_old = abs(hi - lo)
    dx = dx_old
    f, df = func(x)
    for _ in range(max_iterations):
        if ((x - hi) * df - f) * ((x - lo) * df - f) >= 0 or abs(2 * f) > abs(dx_old * df):
            dx_old = dx
            dx = (hi - lo) / 2
            x = lo + dx
        else:
            dx_old = dx
            dx = f / df
            x = x - dx

        if abs(dx) <= tol * abs(x):
            return x

        f, df = func(x)
        if f < 0:
            lo = x
        else:
            hi = x

    raise NoConvergence(f"Root finder did not converge in {max_iterations} iterations")


def solve_tau(step_set: StepSet, digits: int | None = None) -> mpf:
    """
    Structural constant tau: the unique positive root of S'(u) = 0.

    Exactly 1 for {-1, 1} and {-1, 0, 1}. Otherwise the drift S'(1) is
    positive, so the root lies in (0, 1), where S' is strictly increasing.

    Raises:
        NoConvergence: If the root finder fails
    """
    digits = _resolve_digits(digits)
    if is_tau_one(step_set):
        return mpf(1)

    with mp.workdps(digits + GUARD_DIGITS):
        lo = mpf(1) / 2
        while eval_S(step_set, lo, 1) >= 0:
            lo /= 2
        tau = safeguarded_newton(
            lambda u: (eval_S(step_set, u, 1), eval_S(step_set, u, 2)),
            lo,
            mpf(1),
            tol=mpf(10) ** (-(digits + 4)),
        )

    logger.debug("tau_solved", steps=str(step_set), digits=digits, tau=mp.nstr(tau, 15))
    return tau


@lru_cache(maxsize=64)
def _structural_constants(step_set: StepSet, digits: int) -> StructuralConstants:
    tau = solve_tau(step_set, digits)
    with mp.workdps(digits + GUARD_DIGITS):
        s_tau = eval_S(step_set, tau)
        return StructuralConstants(
            tau=tau,
            rho=1 / s_tau,
            c=tau * s_tau,
            period=period(step_set),
            drift=drift(step_set),
            s_tau=s_tau,
            s2_tau=eval_S(step_set, tau, 2),
            s3_tau=eval_S(step_set, tau, 3),
            s4_tau=eval_S(step_set, tau, 4),
            tau_exact_one=is_tau_one(step_set),
            digits=digits,
        )


def structural_constants(step_set: StepSet, digits: int | None = None) -> StructuralConstants:
    """
    Assemble tau, rho, c, the period, the drift and S^(j)(tau) for j = 0, 2, 3, 4.

    Examples:
        >>> from ascents.stepset import make_step_set
        >>> k = structural_constants(make_step_set([-1, 1]))
        >>> (k.tau, k.rho, k.c, k.period)
        (mpf('1.0'), mpf('0.5'), mpf('2.0'), 2)
    """
    return _structural_constants(step_set, _resolve_digits(digits))


def singular_expansion(step_set: StepSet, digits: int | None = None) -> tuple[mpf, mpf, mpf]:
    """
    Coefficients of V(z) = d0 - d1 (1 - z/rho)**(1/2) + d2 (1 - z/rho) + ...

    d0 = tau, d1 = sqrt(2 S/S''), d2 = S S'''/(3 S''**2), all at tau.
    """
    k = structural_constants(step_set, digits)
    with mp.workdps(k.digits + GUARD_DIGITS):
        d1 = mp.sqrt(2 * k.s_tau / k.s2_tau)
        d2 = k.s_tau * k.s3_tau / (3 * k.s2_tau**2)
    return k.tau, d1, d2


def excursion_count_asym(step_set: StepSet, n: int, digits: int | None = None) -> mpf:
    """
    Two-term expansion of the number of excursions of length n.

    Returns 0 when the period does not divide n, since there are no
    excursions of that length.
    """
    _check_n(n)
    k = structural_constants(step_set, digits)
    if n % k.period:
        return mpf(0)

    with mp.workdps(k.digits + GUARD_DIGITS):
        s, s2, s3, s4 = k.s_tau, k.s2_tau, k.s3_tau, k.s4_tau
        p = k.period
        growth = s**n
        main = p * mp.sqrt(s**3 / (2 * mp.pi * s2)) * growth * mpf(n) ** mpf(-1.5)
        correction = (
            mpf(p) / 24
            * mp.sqrt(s**3 / (2 * mp.pi * s2**7))
            * (45 * s2**3 + 5 * s * s3**2 - 3 * s * s2 * s4)
            * growth
            * mpf(n) ** mpf(-2.5)
        )
        return main - correction


def _excursion_mu(c: mpf, r: int) -> mpf:
    return (c - 1) ** r / c ** (r + 2)


def _check_period(k: StructuralConstants, n: int) -> None:
    if n % k.period:
        raise PeriodMismatch(
            f"Excursions need a length divisible by the period {k.period}, got n={n}"
        )


def excursion_expectation_asym(
    step_set: StepSet, r: int, n: int, digits: int | None = None
) -> mpf:
    """
    mu n + c0 for the mean number of r-ascents in excursions of length n.

    mu = (c - 1)**r / c**(r+2) with c = tau S(tau); the constant c0 involves
    S''(tau) and S'''(tau). The error is O(n**(-1/2)).

    Raises:
        PeriodMismatch: If the period does not divide n
    """
    _check_n(n)
    _check_r(r)
    k = structural_constants(step_set, digits)
    _check_period(k, n)

    with mp.workdps(k.digits + GUARD_DIGITS):
        c, tau, s, s2, s3 = k.c, k.tau, k.s_tau, k.s2_tau, k.s3_tau
        bracket = (
            s2**2 * tau**2 * (4 * c**2 - (r + 8) * c + r + 4)
            - s2 * s * (6 * c**2 - 6 * (r + 2) * c + r**2 + 5 * r + 6)
            - s3 * c * (2 * c**2 - (r + 4) * c + r + 2)
        )
        c0 = (c - 1) ** (r - 2) / (2 * tau**2 * c ** (r + 2) * s2**2) * bracket
        return _excursion_mu(c, r) * n + c0


def excursion_variance_asym(step_set: StepSet, r: int, n: int, digits: int | None = None) -> mpf:
    """
    sigma^2 n for the variance of the number of r-ascents in excursions.

    Raises:
        PeriodMismatch: If the period does not divide n
    """
    _check_n(n)
    _check_r(r)
    k = structural_constants(step_set, digits)
    _check_period(k, n)

    with mp.workdps(k.digits + GUARD_DIGITS):
        c, tau, s2 = k.c, k.tau, k.s2_tau
        sigma2 = (
            (c - 1) ** r / c ** (r + 2)
            + (2 * c - 2 * r - 3) * (c - 1) ** (2 * r) / c ** (2 * r + 4)
            - (c - 1) ** (2 * r - 2) * (2 * c - r - 2) ** 2 / (c ** (2 * r + 3) * tau**3 * s2)
        )
        return sigma2 * n


def dyck_excursion_exact_mean(r: int, half_length: int) -> Fraction:
    """
    Exact mean number of r-ascents in Dyck paths of length 2n.

    Equals binomial(2n - r - 1, n - 1) / C_n, where C_n is the n-th Catalan number.
    """
    _check_r(r)
    if half_length < 1:
        raise InvalidInputError(f"half_length must be at least 1, got {half_length}")
    n = half_length
    catalan = comb(2 * n, n) // (n + 1)
    top = 2 * n - r - 1
    if top < n - 1:
        return Fraction(0)
    return Fraction(comb(top, n - 1), catalan)


def dyck_excursion_expectation(r: int, half_length: int, digits: int | None = None) -> mpf:
    """Three-term expansion of the mean for Dyck paths of length 2n (error O(n**-2))."""
    _check_r(r)
    digits = _resolve_digits(digits)
    with mp.workdps(digits + GUARD_DIGITS):
        n = mpf(half_length)
        return (
            n / 2 ** (r + 1)
            - mpf((r + 1) * (r - 4)) / 2 ** (r + 3)
            + mpf((r**2 - 11 * r + 22) * (r + 1) * r) / 2 ** (r + 6) / n
        )


def dyck_excursion_variance(r: int, half_length: int, digits: int | None = None) -> mpf:
    """Two-term expansion of the variance for Dyck paths of length 2n (error O(n**-1/2))."""
    _check_r(r)
    digits = _resolve_digits(digits)
    with mp.workdps(digits + GUARD_DIGITS):
        n = mpf(half_length)
        slope = mpf(1) / 2 ** (r + 1) - mpf(r**2 - 2 * r + 3) / 2 ** (2 * r + 3)
        constant = mpf(r**2 - 3 * r - 4) / 2 ** (r + 3) - mpf(
            3 * r**4 - 20 * r**3 + 29 * r**2 - 10 * r - 14
        ) / 2 ** (2 * r + 5)
        return slope * n - constant


def dispersed_count_asym(step_set: StepSet, n: int, digits: int | None = None) -> mpf:
    """
    Main term of the number of dispersed excursions of length n.

    The residue k = n mod p enters through a closed-form factor. For {-1, 1}
    the two-term central-binomial expansion is returned instead.

    Raises:
        DispersedNeedsNoZeroStep: If 0 is a step
    """
    _check_dispersed(step_set)
    _check_n(n)
    k = structural_constants(step_set, digits)

    with mp.workdps(k.digits + GUARD_DIGITS):
        if is_dyck(step_set):
            return mp.sqrt(2 / mp.pi) * mpf(2) ** n * mpf(n) ** mpf(-0.5) - (
                2 - _sign(n)
            ) / (2 * mp.sqrt(2 * mp.pi)) * mpf(2) ** n * mpf(n) ** mpf(-1.5)

        p, tau, s, s2 = k.period, k.tau, k.s_tau, k.s2_tau
        residue = n % p
        factor = p * tau**residue * (tau**p * (p - residue - 1) + residue + 1) / (1 - tau**p) ** 2
        return (
            factor
            / mp.sqrt(2 * mp.pi)
            * mp.sqrt(s**3 / s2)
            * s**n
            * mpf(n) ** mpf(-1.5)
        )


def dispersed_expectation_asym(
    step_set: StepSet, r: int, n: int, digits: int | None = None
) -> mpf:
    """
    Mean number of r-ascents in dispersed excursions of length n.

    For tau != 1 only the linear term mu n is known (error O(1)); for {-1, 1}
    a four-term expansion with error O(1/n) is used.

    Raises:
        DispersedNeedsNoZeroStep: If 0 is a step
    """
    _check_dispersed(step_set)
    _check_n(n)
    _check_r(r)
    k = structural_constants(step_set, digits)

    with mp.workdps(k.digits + GUARD_DIGITS):
        if is_dyck(step_set):
            x = mpf(n)
            root = mp.sqrt(mp.pi / 2)
            return (
                x / 2 ** (r + 2)
                - root * (r - 2) / 2 ** (r + 2) * mp.sqrt(x)
                + mpf((r - 1) * (r - 4)) / 2 ** (r + 3)
                - root * (r - 2) * (2 - _sign(n)) / 2 ** (r + 4) / mp.sqrt(x)
            )
        return _excursion_mu(k.c, r) * n


@lru_cache(maxsize=64)
def _meander_constants(step_set: StepSet, r: int, digits: int) -> MeanderConstants:
    tau = solve_tau(step_set, digits)
    with mp.workdps(digits + GUARD_DIGITS):
        s1 = mpf(step_set.size)
        xi = 1 / s1

        # S is strictly decreasing on (0, tau) and S(tau) < S(1) < S(0+)
        lo = tau / 2
        while eval_S(step_set, lo) <= s1:
            lo /= 2
        v = safeguarded_newton(
            lambda u: (eval_S(step_set, u) - s1, eval_S(step_set, u, 1)),
            lo,
            tau,
            tol=mpf(10) ** (-(digits + 4)),
        )

        s_prime = eval_S(step_set, v, 1)
        vz = -1 / (xi**2 * s_prime)
        vt = -xi * (v - xi) ** r / (v ** (r + 2) * s_prime)

        c = s1 - 1
        mu = c**r / s1 ** (r + 2)
        c0 = mu * (2 * s1 - 1 - r) + mu * xi * vz / (1 - v) - vt / (1 - v)
        sigma2 = mu + c ** (2 * r) * (2 * s1 - 3 - 2 * r) / s1 ** (2 * r + 4)

    logger.debug("meander_constants_solved", steps=str(step_set), r=r, v_xi=mp.nstr(v, 15))
    return MeanderConstants(
        xi=xi, v_xi=v, vz_xi=vz, vt_xi=vt, mu=mu, c0=c0, sigma2=sigma2, digits=digits
    )


def meander_constants(step_set: StepSet, r: int, digits: int | None = None) -> MeanderConstants:
    """
    Constants of the meander expansions (requires tau != 1).

    V(xi) is the root of S(u) = S(1) in (0, tau). Differentiating
    1 = z S(V(z)) gives V_z(xi) = -1/(xi**2 S'(V(xi))), and V_t(xi) follows
    from the closed form of V_t in terms of V.

    The constant term is the residue expansion of the double pole of
    d/dt F(z, t, 1) at xi divided by the simple pole of F(z, 1, 1):
    c0 = mu (2 S(1) - 1 - r) + mu xi V_z/(1 - V) - V_t/(1 - V).
    This differs from the published closed form of c0 by a factor S(1)**2;
    the published one leaves a constant residual against exact means.

    Raises:
        TauIsOne: For {-1, 1} and {-1, 0, 1}, whose meanders have a different
            singularity structure
    """
    _check_r(r)
    if is_tau_one(step_set):
        raise TauIsOne(
            f"Meander constants need tau != 1; {step_set} has dedicated expansions."
        )
    return _meander_constants(step_set, r, _resolve_digits(digits))


def meander_expectation_asym(step_set: StepSet, r: int, n: int, digits: int | None = None) -> mpf:
    """Mean number of r-ascents in meanders of length n."""
    _check_n(n)
    _check_r(r)
    digits = _resolve_digits(digits)

    with mp.workdps(digits + GUARD_DIGITS):
        x = mpf(n)
        if is_dyck(step_set):
            root = mp.sqrt(2 * mp.pi)
            return (
                x / 2 ** (r + 2)
                + root * (r - 2) / 2 ** (r + 3) * mp.sqrt(x)
                - mpf(r**2 - r - 8) / 2 ** (r + 3)
                + root * (2 - _sign(n)) * (r - 2) / 2 ** (r + 5) / mp.sqrt(x)
            )
        if is_motzkin(step_set):
            root = mp.sqrt(3 * mp.pi)
            two = mpf(2)
            return (
                two**r / 3 ** (r + 2) * x
                + root * (r - 4) * two ** (r - 2) / 3 ** (r + 2) * mp.sqrt(x)
                - (3 * r**2 - r - 96) * two ** (r - 4) / 3 ** (r + 2)
                + root * (r - 4) * two ** (r - 6) / 3**r / mp.sqrt(x)
            )
        k = meander_constants(step_set, r, digits)
        return k.mu * x + k.c0


def _tau_one_meander_terms(step_set: StepSet, r: int) -> tuple[mpf, mpf, mpf]:
    """mu, sigma^2 and the sqrt(n) variance coefficient on {-1, 1} or {-1, 0, 1}."""
    pi = mp.pi
    if is_dyck(step_set):
        mu = mpf(1) / 2 ** (r + 2)
        slope = (2 ** (r + 3) - r**2 * (pi - 2) + 4 * r * (pi - 3) - 4 * pi + 10) / mpf(
            2 ** (2 * r + 5)
        )
        root_term = (
            mp.sqrt(2 * pi)
            * (2 ** (r + 2) * (r - 2) - r**3 + 3 * r**2 - 2 * r + 4)
            / mpf(2 ** (2 * r + 5))
        )
        return mu, slope, root_term
    scale = mpf(3) ** (2 * r + 4)
    four_r = mpf(2) ** (2 * r)
    mu = mpf(2) ** r / mpf(3) ** (r + 2)
    slope = (
        mpf(3) ** (r + 2) * mpf(2) ** (r + 4)
        - four_r * (3 * r**2 * (pi - 2) - 8 * r * (3 * pi - 10) + 48 * pi - 144)
    ) / (16 * scale)
    root_term = (
        mp.sqrt(3 * pi)
        * (72 * (r - 4) * mpf(6) ** r - four_r * (3 * r**3 - 9 * r**2 - 28 * r - 32))
        / (32 * scale)
    )
    return mu, slope, root_term


def meander_leading_terms(step_set: StepSet, r: int, digits: int | None = None) -> tuple[mpf, mpf]:
    """
    Slopes (mu, sigma^2) of the meander mean and variance for any step set.

    Unlike meander_constants this also covers {-1, 1} and {-1, 0, 1}.
    """
    _check_r(r)
    digits = _resolve_digits(digits)
    if not is_tau_one(step_set):
        k = meander_constants(step_set, r, digits)
        return k.mu, k.sigma2
    with mp.workdps(digits + GUARD_DIGITS):
        mu, slope, _ = _tau_one_meander_terms(step_set, r)
        return mu, slope


def meander_variance_asym(step_set: StepSet, r: int, n: int, digits: int | None = None) -> mpf:
    """Variance of the number of r-ascents in meanders of length n (error O(1))."""
    _check_n(n)
    _check_r(r)
    digits = _resolve_digits(digits)

    with mp.workdps(digits + GUARD_DIGITS):
        x = mpf(n)
        if is_tau_one(step_set):
            _, slope, root_term = _tau_one_meander_terms(step_set, r)
            return slope * x + root_term * mp.sqrt(x)
        return meander_constants(step_set, r, digits).sigma2 * x


def motzkin_meander_count_asym(n: int, digits: int | None = None) -> mpf:
    """
    Two-term expansion of the number of Motzkin meanders of length n.

    From F(z, 1, 1) = (sqrt((1 + z)/(1 - 3z)) - 1)/(2z), singularity analysis
    at z = 1/3 gives sqrt(3/pi) 3**n (n**(-1/2) - 9/16 n**(-3/2)).
    """
    _check_n(n)
    digits = _resolve_digits(digits)
    with mp.workdps(digits + GUARD_DIGITS):
        x = mpf(n)
        return mp.sqrt(3 / mp.pi) * mpf(3) ** n * (x ** mpf(-0.5) - mpf(9) / 16 * x ** mpf(-1.5))


def meander_count_asym(step_set: StepSet, n: int, digits: int | None = None) -> mpf:
    """Number of meanders of length n: (1 - V(xi)) S(1)**n, or the tau = 1 expansions."""
    _check_n(n)
    digits = _resolve_digits(digits)
    if is_motzkin(step_set):
        return motzkin_meander_count_asym(n, digits)

    with mp.workdps(digits + GUARD_DIGITS):
        if is_dyck(step_set):
            x = mpf(n)
            sign = _sign(n)
            return (
                mp.sqrt(2 / mp.pi)
                * mpf(2) ** n
                * (
                    x ** mpf(-0.5)
                    - mpf(2 - sign) / 4 * x ** mpf(-1.5)
                    + mpf(13 - 12 * sign) / 32 * x ** mpf(-2.5)
                )
            )
        # v_xi does not depend on r
        k = meander_constants(step_set, 1, digits)
        return (1 - k.v_xi) * mpf(step_set.size) ** n


def fit_decay_exponent(ns: Sequence[int], residuals: Sequence) -> float:
    """
    Slope of log|residual| against log n by least squares.

    Raises:
        InvalidInputError: With fewer than two non-zero residuals
    """
    points = [(n, abs(res)) for n, res in zip(ns, residuals, strict=True) if res != 0]
    if len(points) < 2:
        raise InvalidInputError("Fitting a decay exponent needs at least two non-zero residuals.")
    x = np.log(np.array([float(n) for n, _ in points]))
    y = np.log(np.array([float(res) for _, res in points]))
    slope, _intercept = np.polyfit(x, y, 1)
    return float(slope)


QUANTITIES = ("mean", "variance", "count")


def asymptotic_value(
    step_set: StepSet, kind: PathKind, r: int, quantity: str, n: int, digits: int
) -> mpf:
    """Asymptotic count, mean or variance of one path family at length n."""
    if quantity == "count":
        evaluators = {
            PathKind.EXCURSION: lambda: excursion_count_asym(step_set, n, digits),
            PathKind.DISPERSED: lambda: dispersed_count_asym(step_set, n, digits),
            PathKind.MEANDER: lambda: meander_count_asym(step_set, n, digits),
        }
    elif quantity == "mean":
        evaluators = {
            PathKind.EXCURSION: lambda: excursion_expectation_asym(step_set, r, n, digits),
            PathKind.DISPERSED: lambda: dispersed_expectation_asym(step_set, r, n, digits),
            PathKind.MEANDER: lambda: meander_expectation_asym(step_set, r, n, digits),
        }
    else:
        evaluators = {
            PathKind.EXCURSION: lambda: excursion_variance_asym(step_set, r, n, digits),
            PathKind.MEANDER: lambda: meander_variance_asym(step_set, r, n, digits),
        }
        if kind not in evaluators:
            raise InvalidInputError("No variance expansion is available for dispersed excursions.")
    return evaluators[kind]()


def compare_report(
    step_set: StepSet,
    kind: PathKind,
    r: int,
    n_list: Sequence[int],
    quantity: str = "mean",
    digits: int | None = None,
    threads: int = 1,
) -> ComparisonReport:
    """
    Compare exact values against the asymptotic expansion over n_list.

    All exact values come from one forward DP pass up to max(n_list). The
    decay exponent is fitted to |exact - asymptotic| when at least two
    residuals are non-zero, otherwise it is None.

    Args:
        quantity: "mean", "variance" or "count"

    Raises:
        PeriodMismatch: For excursion lengths not divisible by the period
        EmptyFamily: If some length has no paths
    """
    if quantity not in QUANTITIES:
        raise InvalidInputError(
            f"Unknown quantity {quantity!r}; use one of {', '.join(QUANTITIES)}"
        )
    _check_r(r)
    digits = _resolve_digits(digits)
    ns = sorted(set(n_list))
    for n in ns:
        _check_n(n)
        if kind is PathKind.EXCURSION and n % period(step_set):
            raise PeriodMismatch(
                f"Excursions need lengths divisible by the period {period(step_set)}, got n={n}"
            )

    rows: list[ComparisonRow] = []
    if ns:
        profile = exact.moment_profile(step_set, kind, ns[-1], r, threads)
        with mp.workdps(digits + GUARD_DIGITS):
            for n in ns:
                moments = profile[n]
                if moments is None:
                    raise EmptyFamily(f"There are no {kind.value} paths of length {n}.")
                value = {
                    "mean": moments.mean,
                    "variance": moments.variance,
                    "count": moments.count,
                }[quantity]
                asym = asymptotic_value(step_set, kind, r, quantity, n, digits)
                rows.append(
                    ComparisonRow(n=n, exact=value, asymptotic=asym, residual=to_mpf(value) - asym)
                )

    residuals = [row.residual for row in rows]
    nonzero = sum(1 for res in residuals if res != 0)
    exponent = fit_decay_exponent(ns, residuals) if nonzero >= 2 else None

    logger.info(
        "comparison_completed",
        steps=str(step_set),
        kind=kind.value,
        r=r,
        quantity=quantity,
        points=len(rows),
        decay_exponent=exponent,
    )
    return ComparisonReport(
        steps=step_set,
        kind=kind,
        r=r,
        quantity=quantity,
        digits=digits,
        rows=tuple(rows),
        decay_exponent=exponent,
    )
