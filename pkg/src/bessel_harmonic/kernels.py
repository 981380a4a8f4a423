"""Closed-form and integral-form kernels for the half-line Bessel operator.

For order parameter lambda > -1/2 put nu = lambda - 1/2.  The heat kernel is

    W_t(x,y) = (xy)^(-nu) / (2t) * exp(-(x^2+y^2)/4t) * I_nu(xy/2t),

which is evaluated in the overflow-safe regrouping

    W_t(x,y) = (xy)^(-nu) / (2t) * exp(-(x-y)^2/4t) * [e^(-z) I_nu(z)],
    z = xy/2t,

since exp(-(x^2+y^2)/4t) I_nu(z) = exp(-(x-y)^2/4t) e^(-z) I_nu(z).

The x- and t-derivatives are computed from the recurrence
(d/dz)(z^-nu I_nu) = z^-nu I_{nu+1} in regrouped forms that avoid the
large-z cancellation between I_nu and I_{nu+1}:

    dW/dx = pref(t) * exp(-(x-y)^2/4t) * (1/2t) [ (y-x) R_nu(z) - y D(z) ]
    dW/dt = pref(t) * exp(-(x-y)^2/4t) * (1/t)
            [ ((x-y)^2/4t - (nu+1)) R_nu(z) + z D(z) ]

where R_nu(z) = e^-z z^-nu I_nu(z), D(z) = e^-z z^-nu (I_nu - I_{nu+1})(z),
and D is summed with coefficient-differenced large-argument expansions so
that the ~(nu+1/2)/z relative size of the difference costs no precision.

The Poisson kernel has the closed form

    P_t(x,y) = C(lam) t (x^2+y^2+t^2)^(1-lam)
               / ([(x+y)^2+t^2][(x-y)^2+t^2])
               * 2F1(lam/2, (lam-1)/2; lam+1/2; (2xy/(x^2+y^2+t^2))^2),

with C(lam) = 2 Gamma(lam+1) / (sqrt(pi) Gamma(lam+1/2)); the remaining
2F1 has parameter excess 1 and is evaluated by a series that stays
accurate up to argument 1 because 1 - (2xy/S)^2 is computed in the exact
product form [(x+y)^2+t^2][(x-y)^2+t^2]/S^2.  Subordination

    P_t(x,y) = int_0^inf W_{t^2/4u}(x,y) e^-u / sqrt(pi u) du

is kept as the independent second route.

The Riesz kernel is the time integral

    R(x,y) = pi^(-1/2) int_0^inf dW_t/dx (x,y) t^(-1/2) dt,   x != y,

computed on composite Gauss-Legendre panels in log t (split at t = xy so
each piece sees a single I_nu regime), with a hypergeometric closed form
and the lambda = 0 reflection formula as cross-checks.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _si

from . import specfun as _sf
from .errors import (
    ConditioningError,
    DiagonalError,
    DomainError,
    TruncationInsufficient,
)
from .quad import DEFAULT_SPEC, gl_panels

_SQRT_PI = math.sqrt(math.pi)
_EXP_UNDERFLOW = 745.0


@dataclass(frozen=True)
class BesselParam:
    """Order parameter lambda > -1/2 with its derived quantities."""

    lam: float

    def __post_init__(self):
        if not (self.lam > -0.5):
            raise DomainError("lambda must be > -1/2")
        if self.lam > 40.0:
            raise DomainError("lambda above documented range (> 40)")

    @property
    def nu(self):
        return self.lam - 0.5

    @property
    def measure_exponent(self):
        return 2.0 * self.lam


def as_param(lam):
    return lam if isinstance(lam, BesselParam) else BesselParam(float(lam))


@dataclass(frozen=True)
class KernelPoint:
    """Argument triple of a time-indexed kernel; t is None for R(x,y)."""

    x: float
    y: float
    t: float = None

    def __post_init__(self):
        if self.x <= 0 or self.y <= 0 or (self.t is not None and self.t <= 0):
            raise DomainError("kernel coordinates must be strictly positive")


def region_tag(x, y):
    """Local/global region of (x, y): boundaries count as diagonal."""
    if y < 0.5 * x:
        return "lower"
    if y > 2.0 * x:
        return "upper"
    return "diagonal"


def _prep(*arrays):
    arrs = [np.asarray(a, dtype=float) for a in arrays]
    scalar = all(a.ndim == 0 for a in arrs)
    out = np.broadcast_arrays(*arrs)
    return [np.atleast_1d(o) for o in out], scalar


def _ret(value, scalar):
    return float(value[0]) if scalar and value.size == 1 else value


def _branch_masks(nu, z):
    zstar = min(max(30.0, 2.0 * (nu + 1.0) ** 2), 600.0)
    small = z < zstar
    return small, ~small


# ----------------------------------------------------------------------
# heat kernel and derivatives
# ----------------------------------------------------------------------

def heat_kernel(lam, t, x, y):
    """Heat kernel W_t(x, y); strictly positive, symmetric in (x, y).

    Underflows to zero (permitted) when the Gaussian factor is below the
    representable range.
    """
    p = as_param(lam)
    (t, x, y), scalar = _prep(t, x, y)
    if np.any(t <= 0) or np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("t, x, y must be > 0")
    out = _heat_core(p.nu, t, x, y)
    return _ret(out, scalar)


def _heat_core(nu, t, x, y):
    z = x * y / (2.0 * t)
    expo = (x - y) ** 2 / (4.0 * t)
    ok = expo < _EXP_UNDERFLOW
    gauss = np.where(ok, np.exp(-np.where(ok, expo, 0.0)), 0.0)
    out = np.zeros(np.broadcast(z, gauss).shape)
    small, big = _branch_masks(nu, z)
    m = small & ok
    if m.any():
        r, _ = _sf._ie_reduced_series(nu, z[m])
        out[m] = (2.0 * t[m]) ** (-nu - 1.0) * gauss[m] * r
    m = big & ok
    if m.any():
        ie, _ = _sf._ie_asym(nu, z[m])
        out[m] = (x[m] * y[m]) ** (-nu) / (2.0 * t[m]) * gauss[m] * ie
    return out


def heat_kernel_at_zero(lam, t, y):
    """Limit of W_t(x, y) as x -> 0+."""
    p = as_param(lam)
    (t, y), scalar = _prep(t, y)
    expo = y * y / (4.0 * t)
    ok = expo < _EXP_UNDERFLOW
    val = np.where(
        ok,
        np.exp(-np.where(ok, expo, 0.0))
        / (2.0 ** (2.0 * p.lam) * math.gamma(p.lam + 0.5) * t ** (p.lam + 0.5)),
        0.0,
    )
    return _ret(val, scalar)


def gauss_weierstrass(t, x, y):
    """Classical heat kernel (4 pi t)^(-1/2) exp(-(x-y)^2/4t) on the line."""
    (t, x, y), scalar = _prep(t, x, y)
    expo = (x - y) ** 2 / (4.0 * t)
    ok = expo < _EXP_UNDERFLOW
    val = np.where(ok, np.exp(-np.where(ok, expo, 0.0)) / np.sqrt(4.0 * math.pi * t), 0.0)
    return _ret(val, scalar)


def dgauss_dx(t, x, y):
    """x-derivative of the classical heat kernel."""
    (t, x, y), scalar = _prep(t, x, y)
    val = -(x - y) / (2.0 * t) * gauss_weierstrass(t, x, y)
    return _ret(np.atleast_1d(val), scalar)


def dgauss_dt(t, x, y):
    """t-derivative of the classical heat kernel."""
    (t, x, y), scalar = _prep(t, x, y)
    w = gauss_weierstrass(t, x, y)
    val = ((x - y) ** 2 / (4.0 * t * t) - 0.5 / t) * w
    return _ret(np.atleast_1d(val), scalar)


def _deriv_pieces(nu, t, x, y):
    """Common factors of the two derivative kernels.

    Returns (gauss, pref, Rnu, D, z) with pref = (xy)^-nu/(2t) on the
    large-z branch folded in; concretely the outputs satisfy
    base = pref * gauss, value_dx = base*(1/2t)[(y-x) Rnu - y D], etc.
    """
    z = x * y / (2.0 * t)
    expo = (x - y) ** 2 / (4.0 * t)
    ok = expo < _EXP_UNDERFLOW
    gauss = np.where(ok, np.exp(-np.where(ok, expo, 0.0)), 0.0)
    shape = np.broadcast(z, gauss).shape
    base = np.zeros(shape)
    rnu = np.zeros(shape)
    dd = np.zeros(shape)
    small, big = _branch_masks(nu, z)
    m = small & ok
    if m.any():
        zm = z[m]
        r, _ = _sf._ie_reduced_series(nu, zm)
        rnu[m] = r
        if nu == -0.5:
            # reduced difference is exactly sqrt(2/pi) e^(-2z)
            dd[m] = math.sqrt(2.0 / math.pi) * np.exp(-np.minimum(2.0 * zm, 1400.0))
        else:
            rp, _ = _sf._ie_reduced_series(nu + 1.0, zm)
            dd[m] = r - zm * rp
        base[m] = (2.0 * t[m]) ** (-nu - 1.0) * gauss[m]
    m = big & ok
    if m.any():
        zm = z[m]
        ie, _ = _sf._ie_asym(nu, zm)
        de, _ = _sf._ie_diff_vec(nu, zm)
        rnu[m] = ie
        dd[m] = de
        base[m] = (x[m] * y[m]) ** (-nu) / (2.0 * t[m]) * gauss[m]
    return base, rnu, dd, z


def dheat_dx(lam, t, x, y):
    """x-derivative of the heat kernel (two-Bessel formula, regrouped)."""
    p = as_param(lam)
    (t, x, y), scalar = _prep(t, x, y)
    base, rnu, dd, _ = _deriv_pieces(p.nu, t, x, y)
    val = base / (2.0 * t) * ((y - x) * rnu - y * dd)
    return _ret(val, scalar)


def dheat_dt(lam, t, x, y):
    """t-derivative of the heat kernel (three-term formula, regrouped)."""
    p = as_param(lam)
    (t, x, y), scalar = _prep(t, x, y)
    base, rnu, dd, z = _deriv_pieces(p.nu, t, x, y)
    val = base / t * (((x - y) ** 2 / (4.0 * t) - (p.nu + 1.0)) * rnu + z * dd)
    return _ret(val, scalar)


# ----------------------------------------------------------------------
# Poisson kernel
# ----------------------------------------------------------------------

def poisson_constant(lam):
    lam = as_param(lam).lam
    return 2.0 / _SQRT_PI * math.gamma(lam + 1.0) / math.gamma(lam + 0.5)


def _poisson_closed(lam, t, x, y):
    s = x * x + y * y + t * t
    a = (x - y) ** 2 + t * t
    b = (x + y) ** 2 + t * t
    one_minus = a * b / (s * s)
    zeta = np.clip(1.0 - one_minus, 0.0, 1.0)
    f2 = _sf.hyp2f1_m1_family_vec(0.5 * lam, 0.5 * (lam - 1.0), zeta, one_minus)
    return poisson_constant(lam) * t * s ** (1.0 - lam) / (a * b) * f2


def poisson_kernel(lam, t, x, y, method="closed_form", spec=None):
    """Poisson kernel P_t(x, y), by closed form or by subordination.

    The closed form evaluates the hypergeometric factor against the exact
    product representation of 1 - (2xy/S)^2, so it stays accurate for
    x close to y at small t.  The subordination route integrates the heat
    kernel against e^-u / sqrt(pi u) and is the independent cross-check.
    """
    p = as_param(lam)
    (t, x, y), scalar = _prep(t, x, y)
    if np.any(t <= 0) or np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("t, x, y must be > 0")
    if method == "closed_form":
        out = _poisson_closed(p.lam, t, x, y)
        return _ret(out, scalar)
    if method != "subordination":
        raise DomainError("method must be closed_form or subordination")
    spec = spec or DEFAULT_SPEC
    flat = [np.ravel(a) for a in np.broadcast_arrays(t, x, y)]
    out = np.empty(flat[0].shape)
    for i, (ti, xi, yi) in enumerate(zip(*flat)):
        # substitute u = v^2 in int W_{t^2/4u} e^-u du / sqrt(pi u)
        def _f(v):
            if v <= 0.0:
                return 0.0
            w = _heat_core(
                p.nu,
                np.asarray([ti * ti / (4.0 * v * v)]),
                np.asarray([xi]),
                np.asarray([yi]),
            )[0]
            return w * math.exp(-v * v)

        val, _ = _si.quad(_f, 0.0, 13.0, points=[0.25, 0.5, 1.0, 2.0, 4.0],
                          epsabs=1e-300, epsrel=1e-12, limit=300)
        out[i] = 2.0 / _SQRT_PI * val
    out = out.reshape(np.broadcast(t, x, y).shape)
    return _ret(out, scalar)


def conj_poisson_kernel(lam, t, x, y, spec=None):
    """Conjugate Poisson kernel Q_t(x, y), defined for lambda > 0.

    Q_t(x,y) = -(2 lam / pi) int_0^pi (x - y cos a) (sin a)^(2 lam - 1)
               / (x^2+y^2+t^2-2xy cos a)^(lam+1) da,
    integrated with the algebraic endpoint weight a^(2l-1) (pi-a)^(2l-1)
    split off analytically.
    """
    p = as_param(lam)
    if p.lam <= 0:
        raise DomainError("conjugate Poisson kernel requires lambda > 0")
    (t, x, y), scalar = _prep(t, x, y)
    flat = [np.ravel(a) for a in np.broadcast_arrays(t, x, y)]
    out = np.empty(flat[0].shape)
    e = 2.0 * p.lam - 1.0
    for i, (ti, xi, yi) in enumerate(zip(*flat)):
        s2 = xi * xi + yi * yi + ti * ti

        def _smooth(a):
            # smooth positive factor sin(a)/(a(pi-a)), with endpoint limits
            if a <= 0.0 or a >= math.pi:
                h = 1.0 / math.pi
            else:
                h = math.sin(a) / (a * (math.pi - a))
            return (xi - yi * math.cos(a)) * h ** e / (
                s2 - 2.0 * xi * yi * math.cos(a)
            ) ** (p.lam + 1.0)

        val, _ = _si.quad(
            _smooth, 0.0, math.pi, weight="alg", wvar=(e, e),
            epsabs=1e-14, epsrel=1e-12, limit=200,
        )
        out[i] = -2.0 * p.lam / math.pi * val
    out = out.reshape(np.broadcast(t, x, y).shape)
    return _ret(out, scalar)


# ----------------------------------------------------------------------
# Riesz kernel
# ----------------------------------------------------------------------

_RIESZ_PANEL_WIDTH = 0.75
_RIESZ_ORDER = 12


def _riesz_t_integral(p, x, y, rel_pad=42.0, panel_width=None, order=None):
    """pi^(-1/2) int dW/dx dt/sqrt(t) on log-t Gauss-Legendre panels.

    The integration window [s_lo, s_hi] in s = log t is set per point:
    below s_lo the Gaussian factor is below e^-148, above s_hi the
    integrand decays like e^-(lam+1)s and the remaining tail is under
    e^-rel_pad relative to the far-field plateau.  The window is split at
    log(xy) so each sub-window sees one I_nu regime.
    """
    panel_width = panel_width or _RIESZ_PANEL_WIDTH
    order = order or _RIESZ_ORDER
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    x, y = np.broadcast_arrays(x, y)
    xf, yf = x.ravel(), y.ravel()
    if np.any(np.abs(xf - yf) <= 1e-10 * np.maximum(xf, yf)):
        raise DiagonalError("Riesz kernel is singular on the diagonal")
    s_lo = np.log((xf - yf) ** 2 / 4.0) - 5.0
    s_mid = np.log(xf * yf)
    s_hi = np.maximum(s_mid, 2.0 * np.log((xf + yf) / 2.0)) + rel_pad / (p.lam + 1.0)
    s_lo = np.minimum(s_lo, s_mid - 1.0)

    out = np.zeros(xf.shape)
    for lo, hi in ((s_lo, np.minimum(s_mid, s_hi)), (np.minimum(s_mid, s_hi), s_hi)):
        span = hi - lo
        max_span = float(np.max(span))
        n_panels = max(2, int(math.ceil(max_span / panel_width)))
        u, w = gl_panels(0.0, 1.0, n_panels, order)
        s = lo[:, None] + span[:, None] * u[None, :]
        t = np.exp(s)
        vals = _dheat_dx_core(p.nu, t, xf[:, None], yf[:, None])
        out += span * np.einsum("ij,j->i", vals * np.exp(0.5 * s), w)
    out /= _SQRT_PI
    return out.reshape(x.shape)


def riesz_kernel_vec(lam, x, y, coarse=False):
    """Array-valued Riesz kernel via the time integral; coarse mode uses
    wider panels (~1e-8 relative) for the quantitative experiments."""
    p = as_param(lam)
    if coarse:
        return _riesz_t_integral(p, x, y, rel_pad=30.0, panel_width=1.5, order=8)
    return _riesz_t_integral(p, x, y)


def _dheat_dx_core(nu, t, x, y):
    base, rnu, dd, _ = _deriv_pieces(nu, np.asarray(t, dtype=float),
                                     np.broadcast_to(x, np.shape(t)).astype(float),
                                     np.broadcast_to(y, np.shape(t)).astype(float))
    xb = np.broadcast_to(x, np.shape(t))
    yb = np.broadcast_to(y, np.shape(t))
    return base / (2.0 * t) * ((yb - xb) * rnu - yb * dd)


def riesz_kernel(lam, x, y, method="t_integral", spec=None):
    """Principal-value Riesz transform kernel R(x, y), x != y.

    t_integral is the authoritative route.  closed_2f1 evaluates the
    two-term hypergeometric representation (subject to cancellation near
    the diagonal; kept as a cross-check), and lambda0 is the reflected
    Hilbert kernel (1/pi)(1/(y-x) - 1/(y+x)) available at lambda = 0.
    """
    p = as_param(lam)
    if method == "t_integral":
        (x, y), scalar = _prep(x, y)
        out = _riesz_t_integral(p, x, y)
        return _ret(np.atleast_1d(out), scalar)
    if method == "lambda0":
        if p.lam != 0.0:
            raise DomainError("lambda0 method requires lambda = 0")
        (x, y), scalar = _prep(x, y)
        if np.any(np.abs(x - y) <= 1e-10 * np.maximum(x, y)):
            raise DiagonalError("Riesz kernel is singular on the diagonal")
        out = (1.0 / (y - x) - 1.0 / (y + x)) / math.pi
        return _ret(out, scalar)
    if method != "closed_2f1":
        raise DomainError("unknown riesz_kernel method %r" % (method,))
    x = float(x)
    y = float(y)
    if abs(x - y) <= 1e-10 * max(x, y):
        raise DiagonalError("Riesz kernel is singular on the diagonal")
    lam = p.lam
    s0 = x * x + y * y
    phi = x * y / s0
    z = 4.0 * phi * phi
    one_minus = ((x - y) * (x + y) / s0) ** 2
    f1 = _sf.gauss_2f1(
        (lam + 2.0) / 2.0, (lam + 3.0) / 2.0, lam + 1.5, z, one_minus_z=one_minus
    ).value
    f2 = _sf.gauss_2f1(
        (lam + 1.0) / 2.0, (lam + 2.0) / 2.0, lam + 0.5, z, one_minus_z=one_minus
    ).value
    pref = 2.0 / _SQRT_PI * math.gamma(lam + 2.0) / math.gamma(lam + 1.5)
    pref *= (x * y) ** (-lam - 1.0)
    term1 = y * phi ** (lam + 2.0) * f1
    term2 = (lam + 0.5) / (lam + 1.0) * x * phi ** (lam + 1.0) * f2
    return pref * (term1 - term2)


def riesz_farfield_constants(lam):
    """Limit constants of the Riesz kernel in the far off-diagonal regions.

    x^(2 lam + 1) R(x,y) -> -2 Gamma(lam+1) / (sqrt(pi) Gamma(lam+1/2))
    as y/x -> 0, and (y^(2 lam + 2)/x) R(x,y) ->
    Gamma(lam+1) / (sqrt(pi) Gamma(lam+3/2)) as x/y -> 0.  (At lambda = 0
    these reduce to -2/pi and 2/pi, matching the reflected Hilbert
    kernel.)
    """
    lam = as_param(lam).lam
    low = -2.0 * math.gamma(lam + 1.0) / (_SQRT_PI * math.gamma(lam + 0.5))
    high = math.gamma(lam + 1.0) / (_SQRT_PI * math.gamma(lam + 1.5))
    return low, high


def tilde_kernel(base, lam, t=None, x=None, y=None, method=None):
    """Kernels of the conjugated operator: multiply the base by (xy)^lam."""
    p = as_param(lam)
    if x is None or y is None:
        raise DomainError("x and y are required")
    factor = (np.asarray(x, dtype=float) * np.asarray(y, dtype=float)) ** p.lam
    if base == "heat":
        return factor * heat_kernel(p, t, x, y)
    if base == "poisson":
        return factor * poisson_kernel(p, t, x, y, method=method or "closed_form")
    if base == "riesz":
        return factor * riesz_kernel(p, x, y, method=method or "t_integral")
    raise DomainError("unknown base kernel %r" % (base,))


# ----------------------------------------------------------------------
# spectral-integral oracle
# ----------------------------------------------------------------------

def _phi(nu, zx):
    """Eigenfunction factor (zx)^(-nu) J_nu(zx), stable at 0."""
    zx = np.asarray(zx, dtype=float)
    small = zx < 1e-6
    out = np.empty(zx.shape)
    if small.any():
        out[small] = (1.0 - (zx[small] / 2.0) ** 2 / (nu + 1.0)) / (
            2.0 ** nu * math.gamma(nu + 1.0)
        )
    big = ~small
    if big.any():
        out[big] = _sf.bessel_j_vec(nu, zx[big]) * zx[big] ** (-nu)
    return out


_JACOBI_CACHE = {}


def _jacobi_rule(beta, n=24):
    """Gauss-Jacobi rule for int_-1^1 (1+x)^beta f(x) dx."""
    key = (round(float(beta), 12), n)
    if key not in _JACOBI_CACHE:
        from scipy.special import roots_jacobi
        _JACOBI_CACHE[key] = roots_jacobi(n, 0.0, float(beta))
    return _JACOBI_CACHE[key]


def spectral_oracle(kind, lam, t, x, y, spec=None, tail_tol=1e-12, z_cap=2e4):
    """Brute-force eigenfunction-integral evaluation of the kernels.

    heat:      int_0^Z exp(-z^2 t) phi_z(x) phi_z(y) z^(2 lam) dz
    poisson:   same with weight exp(-z t)
    dheat_dx:  d/dx moved under the integral
    dheat_dt:  extra factor -z^2

    Z is chosen so the damping factor is below tail_tol at the truncation
    point; a TruncationInsufficient signal is raised when that requires
    z beyond the supported Bessel range.  This is the independent oracle
    for every closed form above.
    """
    p = as_param(lam)
    nu = p.nu
    t, x, y = float(t), float(x), float(y)
    if kind in ("heat", "dheat_dx", "dheat_dt"):
        zmax = math.sqrt(-math.log(tail_tol) / t) + 4.0 / math.sqrt(t)
    elif kind == "poisson":
        zmax = -math.log(tail_tol) / t + 10.0 / t
    else:
        raise DomainError("unknown spectral kind %r" % (kind,))
    if zmax > z_cap or zmax * max(x, y) > 1e6:
        raise TruncationInsufficient(
            "spectral truncation needs z up to %.3g (unsupported)" % zmax
        )

    def _f(z):
        phx = _phi(nu, z * x)
        phy = _phi(nu, z * y)
        if kind == "heat":
            return np.exp(-z * z * t) * phx * phy
        if kind == "poisson":
            return np.exp(-z * t) * phx * phy
        if kind == "dheat_dt":
            return -z * z * np.exp(-z * z * t) * phx * phy
        dphx = -z * (z * x) * _phi(nu + 1.0, z * x)
        return np.exp(-z * z * t) * dphx * phy

    # Near z = 0 the measure z^(2 lam) dz has an algebraic weight; the
    # rest of the integrand is analytic in z, so a Gauss-Jacobi rule with
    # weight (1+xi)^(2 lam) integrates the first arch spectrally for
    # every lam > -1/2.
    z1 = min(zmax, 0.5 * math.pi / (x + y + 1.0))
    xj, wj = _jacobi_rule(2.0 * p.lam)
    zs = z1 * 0.5 * (1.0 + xj)
    total = z1 ** (2.0 * p.lam + 1.0) * 2.0 ** (-2.0 * p.lam - 1.0) \
        * float(np.dot(wj, _f(zs)))
    # oscillation-resolving panels on [z1, Z]
    n_panels = int(math.ceil((zmax - z1) * (x + y) / math.pi)) + 16
    z, w = gl_panels(z1, zmax, n_panels, 8)
    total += float(np.dot(w, _f(z) * z ** (2.0 * p.lam)))
    return total
