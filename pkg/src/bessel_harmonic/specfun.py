"""Special functions with explicit regime control and error estimates.

Every kernel in the library reduces to four classical functions on the
half-line: the modified Bessel function I_nu, the Bessel function J_nu, the
Gauss hypergeometric function 2F1, and the Gamma function.  The evaluators
here record which representation produced each value (ascending power
series, large-argument expansion, or a transformed series) together with a
first-omitted-term error estimate, so downstream quadrature can propagate
accuracy information.

Two representations of I_nu are used:

* the ascending series  I_nu(z) = sum_n (z/2)^(2n+nu) / (n! Gamma(n+nu+1)),
  whose terms are positive (no cancellation), and
* the large-argument expansion
  I_nu(z) = e^z (2 pi z)^(-1/2) sum_k (-1)^k [nu,k] (2z)^(-k),
  with [nu,0] = 1 and
  [nu,k] = (4nu^2-1)(4nu^2-9)...(4nu^2-(2k-1)^2) / (2^(2k) k!).

The expansion is summed adaptively (stop at the smallest term); the error
estimate is the magnitude of the first omitted term.  The two regimes meet
at z* = max(30, 2 nu^2), capped at z = 600 where the raw series would
overflow; both achieve better than 1e-12 relative accuracy there.

All evaluators are exact on numpy arrays; scalar inputs get a scalar
:class:`SpecialValue` back.
"""

import math

import numpy as np
from dataclasses import dataclass, field
from scipy import special as _sp

from .errors import (
    ConditioningError,
    DomainError,
    NonConvergence,
    OverflowSignal,
    PoleError,
)

# Supported order range for I_nu.  Public callers should stay within
# (-1, 40]; the extra headroom accommodates internal order+1 evaluations.
NU_MIN = -1.0
NU_MAX = 41.5

_SERIES_OVERFLOW_CAP = 600.0  # raw ascending series stays < exp(600)
_MAX_SERIES_TERMS = 900
_MAX_ASYM_TERMS = 40
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SpecialValue:
    """A function value together with its evaluation provenance.

    abs_error_est is a (heuristic but conservative) absolute error bound;
    regime records which representation produced the value.
    """

    value: float
    abs_error_est: float
    regime: str

    def __post_init__(self):
        if not math.isfinite(self.abs_error_est) or self.abs_error_est < 0:
            raise DomainError("abs_error_est must be finite and >= 0")
        if self.regime not in ("series", "asymptotic", "transformed"):
            raise DomainError("unknown regime %r" % (self.regime,))


@dataclass(frozen=True)
class AsymCoeffTable:
    """Coefficients [nu,k] of the large-argument expansion of I_nu."""

    order: float
    coeffs: tuple = field(default=())

    def __post_init__(self):
        if len(self.coeffs) == 0 or self.coeffs[0] != 1.0:
            raise DomainError("coefficient table must start with [nu,0] = 1")


def asym_coeffs(nu, n):
    """Table of expansion coefficients [nu,k], k = 0..n.

    Built by the product recursion [nu,k] = [nu,k-1] (4nu^2-(2k-1)^2)/(4k).
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    four_nu2 = 4.0 * nu * nu
    coeffs = [1.0]
    for k in range(1, n + 1):
        coeffs.append(coeffs[-1] * (four_nu2 - (2 * k - 1) ** 2) / (4.0 * k))
    return AsymCoeffTable(order=float(nu), coeffs=tuple(coeffs))


def gamma_fn(x):
    """Gamma function for x > 0 (>= 1e-13 relative accuracy)."""
    if x <= 0.0:
        if float(x) == int(x):
            raise PoleError("Gamma pole at non-positive integer %g" % x)
        raise DomainError("gamma_fn requires x > 0")
    return math.gamma(x)


def crossover(nu):
    """Argument at which I_nu evaluation switches from series to expansion."""
    return min(max(30.0, 2.0 * nu * nu), _SERIES_OVERFLOW_CAP)


def _check_order(nu):
    if not (NU_MIN < nu <= NU_MAX):
        raise DomainError(
            "order nu=%g outside supported range (%g, %g]" % (nu, NU_MIN, NU_MAX)
        )


# ----------------------------------------------------------------------
# vectorized internals (return (value, abs_error) ndarrays)
# ----------------------------------------------------------------------

def _ie_reduced_series(nu, z):
    """e^(-z) z^(-nu) I_nu(z) by the ascending series, vectorized.

    The reduced form is smooth at z = 0 (value 1/(2^nu Gamma(nu+1))) and is
    what the heat kernel actually needs.  Caller keeps z <= crossover(nu).
    """
    z = np.asarray(z, dtype=float)
    q = 0.25 * z * z
    term = np.full(z.shape, 1.0 / (2.0 ** nu * math.gamma(nu + 1.0)))
    total = term.copy()
    active = np.ones(z.shape, dtype=bool)
    n = 0
    while active.any():
        n += 1
        if n > _MAX_SERIES_TERMS:
            raise NonConvergence("I_nu series did not converge (nu=%g)" % nu)
        term = term * q / (n * (n + nu))
        total += np.where(active, term, 0.0)
        active = term > 1e-17 * total
    scale = np.exp(-z)
    value = total * scale
    err = (term + _EPS * n * total) * scale
    return value, err


def _ie_asym(nu, z, coeff_override=None):
    """e^(-z) I_nu(z) by the optimally truncated large-argument expansion.

    The terms (-1)^k [nu,k] (2z)^-k may grow before they decay (large nu);
    each lane is truncated just before its smallest term, whose magnitude
    is the error estimate, plus the e^(-2z)-sized reflection term the
    expansion cannot see.  With coeff_override the expansion is summed
    with a caller-supplied coefficient sequence (used for the stabilized
    difference I_nu - I_{nu+1}).  Caller keeps z >= crossover(nu).
    """
    z = np.asarray(z, dtype=float)
    inv2z = 0.5 / z
    if coeff_override is None:
        coeffs = asym_coeffs(nu, _MAX_ASYM_TERMS).coeffs
    else:
        coeffs = coeff_override
    n_terms = len(coeffs)
    terms = np.empty((n_terms,) + z.shape)
    terms[0] = coeffs[0]
    power = np.ones(z.shape)
    sign = 1.0
    for k in range(1, n_terms):
        sign = -sign
        power = power * inv2z
        terms[k] = sign * coeffs[k] * power
    mags = np.abs(terms)
    # optimal truncation: argmin over k >= 1 of |term_k|; sum terms below it
    k_opt = np.argmin(mags[1:], axis=0) + 1
    ks = np.arange(n_terms).reshape((n_terms,) + (1,) * z.ndim)
    total = np.sum(np.where(ks < k_opt, terms, 0.0), axis=0)
    err = np.take_along_axis(mags, k_opt[None, ...], axis=0)[0]
    amp = 1.0 / np.sqrt(2.0 * math.pi * z)
    refl = np.exp(-np.minimum(2.0 * z, 700.0))
    return amp * total, amp * (err + refl + _EPS * np.abs(total))


def _ie_diff_asym(nu, z):
    """e^(-z) (I_nu(z) - I_{nu+1}(z)) by coefficient-wise differencing.

    The leading terms of the two expansions cancel exactly; differencing
    the coefficient tables avoids the z->infinity cancellation (the
    difference behaves like (nu+1/2)/z times the common amplitude).
    """
    ca = asym_coeffs(nu, _MAX_ASYM_TERMS).coeffs
    cb = asym_coeffs(nu + 1.0, _MAX_ASYM_TERMS).coeffs
    diff = tuple(a - b for a, b in zip(ca, cb))
    # diff[0] = 0; the adaptive sum handles leading zeros transparently.
    val, err = _ie_asym(nu, z, coeff_override=diff)
    return val, err


def _ie_scaled_vec(nu, z):
    """e^(-z) I_nu(z) on an array, switching regimes at crossover(nu)."""
    z = np.asarray(z, dtype=float)
    zstar = crossover(nu)
    value = np.empty(z.shape)
    err = np.empty(z.shape)
    small = z < zstar
    if small.any():
        zs = z[small]
        v, e = _ie_reduced_series(nu, zs)
        with np.errstate(divide="ignore", over="ignore"):
            p = zs ** nu
        value[small] = v * p
        err[small] = e * p
    big = ~small
    if big.any():
        v, e = _ie_asym(nu, z[big])
        value[big] = v
        err[big] = e
    return value, err, small


def _ie_reduced_vec(nu, z):
    """e^(-z) z^(-nu) I_nu(z) on an array (both regimes)."""
    z = np.asarray(z, dtype=float)
    zstar = crossover(nu)
    value = np.empty(z.shape)
    err = np.empty(z.shape)
    small = z < zstar
    if small.any():
        v, e = _ie_reduced_series(nu, z[small])
        value[small] = v
        err[small] = e
    big = ~small
    if big.any():
        zb = z[big]
        v, e = _ie_asym(nu, zb)
        p = zb ** (-nu)
        value[big] = v * p
        err[big] = e * p
    return value, err


def _ie_diff_vec(nu, z):
    """e^(-z)(I_nu - I_{nu+1})(z) on an array, cancellation-safe."""
    z = np.asarray(z, dtype=float)
    if nu == -0.5:
        # cosh - sinh = e^-z exactly, so the difference is closed-form
        value = np.sqrt(2.0 / (math.pi * z)) * np.exp(-np.minimum(2.0 * z, 1400.0))
        return value, _EPS * value
    zstar = min(crossover(nu), crossover(nu + 1.0))
    value = np.empty(z.shape)
    err = np.empty(z.shape)
    small = z < zstar
    if small.any():
        zs = z[small]
        va, ea = _ie_reduced_series(nu, zs)
        vb, eb = _ie_reduced_series(nu + 1.0, zs)
        with np.errstate(divide="ignore", over="ignore"):
            p = zs ** nu
        value[small] = (va - zs * vb) * p
        err[small] = (ea + zs * eb) * p + _EPS * np.abs(va) * p
    big = ~small
    if big.any():
        v, e = _ie_diff_asym(nu, z[big])
        value[big] = v
        err[big] = e
    return value, err


# ----------------------------------------------------------------------
# public scalar operations
# ----------------------------------------------------------------------

def bessel_i_scaled(nu, z, spec=None):
    """Exponentially scaled modified Bessel function e^(-z) I_nu(z).

    Defined by continuity at z = 0: returns 0 for nu > 0, 1 for nu = 0,
    and raises for nu < 0 where I_nu blows up at the origin.
    For large z the value tends to (2 pi z)^(-1/2).
    """
    _check_order(nu)
    if z < 0:
        raise DomainError("z must be >= 0")
    if z == 0.0:
        if nu > 0:
            return SpecialValue(0.0, 0.0, "series")
        if nu == 0:
            return SpecialValue(1.0, 0.0, "series")
        raise DomainError("e^(-z) I_nu(z) diverges at z=0 for nu<0")
    za = np.asarray([float(z)])
    value, err, small = _ie_scaled_vec(nu, za)
    regime = "series" if bool(small[0]) else "asymptotic"
    rel_tol = getattr(spec, "rel_tol", 1e-12) if spec is not None else 1e-12
    v, e = float(value[0]), float(err[0])
    if v != 0.0 and e > abs(v) * max(rel_tol, 1e-15) * 10 and e > 1e-300:
        raise NonConvergence(
            "bessel_i_scaled: achieved %.2e rel err > tolerance" % (e / abs(v))
        )
    return SpecialValue(v, e, regime)


def bessel_i(nu, z, spec=None):
    """Modified Bessel function I_nu(z) for nu > -1, z > 0.

    Series regime below crossover(nu), large-argument expansion above.
    Raises OverflowSignal once e^z leaves the representable range; use
    :func:`bessel_i_scaled` there.
    """
    _check_order(nu)
    if z <= 0:
        raise DomainError("z must be > 0")
    if z > 706.0:
        raise OverflowSignal(
            "I_nu(z) ~ e^z overflows for z=%g; use bessel_i_scaled" % z
        )
    sv = bessel_i_scaled(nu, z, spec)
    scale = math.exp(z)
    return SpecialValue(sv.value * scale, sv.abs_error_est * scale, sv.regime)


_BESSEL_J_XMAX = 1e6


def bessel_j(nu, x, spec=None):
    """Bessel function of the first kind J_nu(x), nu > -1, x >= 0.

    Evaluation is delegated to a vetted library routine; the regime tag
    records the conditioning class of the argument (power-series-dominated
    below x = 12, oscillatory/asymptotic above).  The error model combines
    a base relative error with the phase error ~ x * eps of large
    arguments.  Supported for x <= 1e6.
    """
    _check_order(nu)
    if x < 0:
        raise DomainError("x must be >= 0")
    if x > _BESSEL_J_XMAX:
        raise NonConvergence("bessel_j supported only for x <= %g" % _BESSEL_J_XMAX)
    v = float(_sp.jv(nu, x))
    amp = math.sqrt(2.0 / (math.pi * max(x, 1.0)))
    err = 5e-16 * (abs(v) + amp * (1.0 + 1e-2 * x))
    return SpecialValue(v, err, "series" if x < 12.0 else "asymptotic")


def bessel_j_vec(nu, x):
    """Vectorized J_nu for the spectral-integral quadratures."""
    return _sp.jv(nu, np.asarray(x, dtype=float))


# ----------------------------------------------------------------------
# Gauss 2F1
# ----------------------------------------------------------------------

def _is_nonpos_int(x, tol=1e-12):
    return x <= tol and abs(x - round(x)) < tol


def _hyp_series(a, b, c, z, max_terms=100000):
    """Direct ascending 2F1 series; returns (value, first omitted term)."""
    term = 1.0
    total = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total, abs(term)
    raise NonConvergence("2F1 series did not converge (z=%g)" % z)


def _hyp_poly(a, b, c, z):
    """2F1 when a or b is a non-positive integer (finite sum)."""
    m = int(round(a if _is_nonpos_int(a) else b))
    term = 1.0
    total = 1.0
    for n in range(-m):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        total += term
    return total


def _hyp_near_one_m1(a, b, u, max_terms=4000):
    """2F1(a, b; a+b+1; z) for u = 1-z small, by the logarithmic expansion.

    F = G(a+b+1)/(G(a+1)G(b+1))
        + G(a+b+1)/(G(a)G(b)) * sum_{n>=0} (a+1)_n (b+1)_n / (n!(n+1)!)
          * u^(n+1) * [log u + psi(a+n+1) + psi(b+n+1) - psi(n+1) - psi(n+2)]
    """
    c = a + b + 1.0
    lead = math.gamma(c) / (math.gamma(a + 1.0) * math.gamma(b + 1.0))
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return lead, 0.0  # 1/Gamma at the pole kills the series
    pref = math.gamma(c) / (math.gamma(a) * math.gamma(b))
    log_u = math.log(u)
    coef = 1.0
    total = 0.0
    for n in range(max_terms):
        bracket = (
            log_u
            + _sp.digamma(a + n + 1.0)
            + _sp.digamma(b + n + 1.0)
            - _sp.digamma(n + 1.0)
            - _sp.digamma(n + 2.0)
        )
        term = coef * u ** (n + 1) * bracket
        total += term
        if abs(term) <= 1e-17 * (abs(lead) + abs(pref * total)):
            return lead + pref * total, abs(pref * term)
        coef *= (a + 1.0 + n) * (b + 1.0 + n) / ((n + 1.0) * (n + 2.0))
    raise NonConvergence("near-one 2F1 expansion did not converge")


def _hyp_near_one_noninteger(a, b, c, u):
    """2F1 near z=1 via the 1-z connection formula (c-a-b not an integer)."""
    s = c - a - b
    g = math.gamma
    t1 = g(c) * g(s) / (g(c - a) * g(c - b)) * _hyp_series(a, b, 1.0 - s, u)[0]
    t2 = (
        float(_sp.gamma(-s))
        * g(c)
        / (g(a) * g(b))
        * u ** s
        * _hyp_series(c - a, c - b, 1.0 + s, u)[0]
    )
    return t1 + t2


def gauss_2f1(a, b, c, z, spec=None, one_minus_z=None):
    """Gauss hypergeometric function 2F1(a, b; c; z) for 0 <= z < 1.

    Direct series for z <= 1/2.  For z > 1/2 the Euler relation
    2F1(a,b;c;z) = (1-z)^(c-a-b) 2F1(c-a, c-b; c; z) is applied first when
    it improves the late-term decay, and arguments within 0.1 of 1 are
    routed through a 1-z expansion (logarithmic variant when the relevant
    parameter excess is an integer).  Passing one_minus_z avoids the
    rounding loss of computing 1-z from z near 1.
    """
    if _is_nonpos_int(c):
        raise PoleError("2F1 pole: c is a non-positive integer")
    if not (0.0 <= z < 1.0):
        raise DomainError("gauss_2f1 requires 0 <= z < 1")
    u = one_minus_z if one_minus_z is not None else 1.0 - z
    if u <= 1e-12:
        raise ConditioningError("2F1 argument within 1e-12 of 1")
    if a == 0.0 or b == 0.0:
        return SpecialValue(1.0, 0.0, "series")
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        return SpecialValue(_hyp_poly(a, b, c, z), 1e-16, "series")
    if z == 0.0:
        return SpecialValue(1.0, 0.0, "series")
    if z <= 0.5:
        v, t = _hyp_series(a, b, c, z)
        return SpecialValue(v, t + _EPS * abs(v), "series")

    s = c - a - b
    regime = "series"
    prefactor = 1.0
    aa, bb = a, b
    if s < 0:  # transform so the late terms decay like n^(-s'-1) with s' > 0
        prefactor = u ** s
        aa, bb = c - a, c - b
        s = -s
        regime = "transformed"
        if aa == 0.0 or bb == 0.0:
            return SpecialValue(prefactor, _EPS * abs(prefactor), regime)

    if u >= 0.1:
        v, t = _hyp_series(aa, bb, c, z)
        return SpecialValue(prefactor * v, prefactor * (t + _EPS * abs(v)), regime)

    # near z = 1
    if abs(s - 1.0) < 1e-9:
        v, t = _hyp_near_one_m1(aa, bb, u)
        return SpecialValue(prefactor * v, prefactor * (t + _EPS * abs(v)), "transformed")
    if abs(s - round(s)) > 0.05:
        v = _hyp_near_one_noninteger(aa, bb, c, u)
        return SpecialValue(v * prefactor, 1e-13 * abs(v * prefactor), "transformed")
    # awkward: s close to an integer other than 1; fall back to the direct
    # series, which still converges (slowly) for u not extremely small
    if u < 1e-4:
        raise NonConvergence(
            "2F1 ill-conditioned near z=1 (parameter excess %g)" % s
        )
    v, t = _hyp_series(aa, bb, c, z, max_terms=2000000)
    return SpecialValue(prefactor * v, prefactor * (t + _EPS * abs(v)), regime)


def hyp2f1_m1_family_vec(a, b, z, one_minus_z):
    """Vectorized 2F1(a, b; a+b+1; z) on arrays, 0 <= z < 1.

    This is the parameter family produced by the Euler-transformed Poisson
    kernel; the excess c-a-b = 1 means the series converges at z = 1 and a
    logarithmic 1-z expansion is available arbitrarily close to it.
    """
    z = np.asarray(z, dtype=float)
    u = np.asarray(one_minus_z, dtype=float)
    c = a + b + 1.0
    out = np.empty(z.shape)
    if a == 0.0 or b == 0.0 or _is_nonpos_int(a) or _is_nonpos_int(b):
        out.fill(1.0)
        if _is_nonpos_int(a) or _is_nonpos_int(b):
            flat = out.ravel()
            for i, zz in enumerate(np.ravel(z)):
                flat[i] = _hyp_poly(a, b, c, float(zz))
        return out

    direct = z <= 0.9
    if direct.any():
        zz = z[direct]
        term = np.ones(zz.shape)
        total = np.ones(zz.shape)
        for n in range(2000):
            term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * zz
            total += term
            if np.all(np.abs(term) <= 1e-16 * np.abs(total)):
                break
        out[direct] = total

    near = ~direct
    if near.any():
        uu = u[near]
        lead = math.gamma(c) / (math.gamma(a + 1.0) * math.gamma(b + 1.0))
        pref = math.gamma(c) / (math.gamma(a) * math.gamma(b))
        log_u = np.log(uu)
        coef = 1.0
        total = np.zeros(uu.shape)
        upow = uu.copy()
        for n in range(400):
            bracket = (
                log_u
                + _sp.digamma(a + n + 1.0)
                + _sp.digamma(b + n + 1.0)
                - _sp.digamma(n + 1.0)
                - _sp.digamma(n + 2.0)
            )
            term = coef * upow * bracket
            total += term
            if np.all(np.abs(term) <= 1e-17 * (abs(lead) + np.abs(pref * total))):
                break
            coef *= (a + 1.0 + n) * (b + 1.0 + n) / ((n + 1.0) * (n + 2.0))
            upow = upow * uu
        out[near] = lead + pref * total
    return out
