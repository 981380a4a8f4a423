"""Operators acting on test functions: semigroup integrals, maximal
functions, the principal-value Riesz transform and its adjoint, the
compensated square-root potential, square functions, Hardy-type operators
and the local maximal function, plus weighted-norm estimation.

Conventions.  All integrals against the reference measure use
d mu_lambda(y) = y^(2 lambda) dy.  Suprema over t are taken on a
logarithmic grid (200 points spanning twelve decades around the natural
time scale x^2) followed by golden-section refinement around the grid
argmax; grid suprema are lower bounds of the true suprema, and refinement
stability is the practical convergence criterion.

Test functions are :class:`SampledFunction` presets: indicators, smooth
bumps, power cutoffs (with log-stored endpoints so that supports like
(e^-1000, 1) are representable) and interpolated grid samples.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _si
from scipy import interpolate as _interp

from . import kernels as _k
from .errors import (
    DivergenceSignal,
    DomainError,
    UnderResolvedWarning,
)
from .kernels import as_param
from .quad import (
    DEFAULT_SPEC,
    GridSpec,
    QuadratureSpec,
    gl_panels,
    pv_local,
    t_log_nodes,
)

_SQRT_PI = math.sqrt(math.pi)


# ----------------------------------------------------------------------
# test functions
# ----------------------------------------------------------------------

class SampledFunction:
    """A function on (0, infinity): analytic preset or interpolated samples.

    Presets are exactly representable; power cutoffs keep their endpoints
    in log form so that extremely deep supports neither under- nor
    overflow.  grid-sample functions interpolate cubically in log x and
    may carry fitted power-law tails.
    """

    def __init__(self, kind, **params):
        self.kind = kind
        self.params = params
        if kind == "indicator":
            a, b = params["a"], params["b"]
            if not (0 < a < b < math.inf):
                raise DomainError("indicator support must satisfy 0 < a < b < inf")
            self.support = (a, b)
            self.jump_points = (a, b)
        elif kind == "smooth_bump":
            c, w = params["center"], params["width"]
            if not (0 < w < c):
                raise DomainError("bump needs 0 < width < center")
            self.support = (c - w, c + w)
            self.jump_points = ()
        elif kind == "power_cutoff":
            la = params.get("log_a")
            lb = params.get("log_b")
            if la is None:
                la = math.log(params["a"])
            if lb is None:
                lb = math.log(params["b"])
            if not la < lb:
                raise DomainError("power cutoff needs a < b")
            self.params["log_a"], self.params["log_b"] = la, lb
            self.params.setdefault("coeff", 1.0)
            self.support = (max(math.exp(max(la, -690.0)), 1e-300), math.exp(lb))
            self.jump_points = (self.support[0], self.support[1])
        elif kind == "grid_samples":
            x = np.asarray(params["x"], dtype=float)
            v = np.asarray(params["values"], dtype=float)
            if x.ndim != 1 or np.any(np.diff(x) <= 0) or x[0] <= 0:
                raise DomainError("grid must be increasing and positive")
            self._spline = _interp.CubicSpline(np.log(x), v, extrapolate=False)
            self.jump_points = ()
            tails = params.get("tails")
            if tails is not None:
                p_lo, p_hi = tails
                self._tail_lo = (v[0] / x[0] ** p_lo, p_lo)
                self._tail_hi = (v[-1] / x[-1] ** p_hi, p_hi)
                self.support = (x[0] / 1e5, x[-1] * 1e5)
            else:
                self._tail_lo = self._tail_hi = None
                self.support = (float(x[0]), float(x[-1]))
            self._grid_lo, self._grid_hi = float(x[0]), float(x[-1])
        else:
            raise DomainError("unknown SampledFunction kind %r" % (kind,))

    # -- constructors ---------------------------------------------------
    @classmethod
    def indicator(cls, a, b):
        return cls("indicator", a=a, b=b)

    @classmethod
    def smooth_bump(cls, center, width):
        return cls("smooth_bump", center=center, width=width)

    @classmethod
    def power_cutoff(cls, alpha, a=None, b=None, coeff=1.0, log_a=None, log_b=None):
        return cls("power_cutoff", alpha=alpha, a=a, b=b, coeff=coeff,
                   log_a=log_a, log_b=log_b)

    @classmethod
    def grid_samples(cls, x, values, tails=None):
        return cls("grid_samples", x=x, values=values, tails=tails)

    # -- evaluation -----------------------------------------------------
    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        scalar = y.ndim == 0
        y = np.atleast_1d(y)
        out = np.zeros(y.shape)
        a, b = self.support
        if self.kind == "indicator":
            out[(y > a) & (y < b)] = 1.0
        elif self.kind == "smooth_bump":
            c, w = self.params["center"], self.params["width"]
            u = (y - c) / w
            inside = np.abs(u) < 1.0
            ui = u[inside]
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
        elif self.kind == "power_cutoff":
            inside = (y > a) & (y < b)
            with np.errstate(over="ignore"):
                out[inside] = self.params["coeff"] * y[inside] ** self.params["alpha"]
        else:
            inside = (y >= self._grid_lo) & (y <= self._grid_hi)
            out[inside] = self._spline(np.log(y[inside]))
            if self._tail_lo is not None:
                m = (y > 0) & (y < self._grid_lo)
                out[m] = self._tail_lo[0] * y[m] ** self._tail_lo[1]
                m = y > self._grid_hi
                out[m] = self._tail_hi[0] * y[m] ** self._tail_hi[1]
            np.nan_to_num(out, copy=False)
        return float(out[0]) if scalar else out

    @property
    def knots(self):
        """Interpolation knots (quadrature panels should align with them)."""
        if self.kind == "grid_samples":
            return np.asarray(self.params["x"], dtype=float)
        return None

    @property
    def descriptor(self):
        if self.kind == "indicator":
            return "indicator(%g,%g)" % self.support
        if self.kind == "smooth_bump":
            return "bump(center=%g,width=%g)" % (
                self.params["center"], self.params["width"])
        if self.kind == "power_cutoff":
            return "power(alpha=%g,log_supp=(%.6g,%.6g))" % (
                self.params["alpha"], self.params["log_a"], self.params["log_b"])
        return "grid_samples(n=%d)" % len(self.params["x"])

    @property
    def is_indicator(self):
        return self.kind == "indicator"

    # -- exact/cached integrals ------------------------------------------
    def _power_fields(self):
        if self.kind == "indicator":
            return 1.0, 0.0, math.log(self.support[0]), math.log(self.support[1])
        if self.kind == "power_cutoff":
            return (self.params["coeff"], self.params["alpha"],
                    self.params["log_a"], self.params["log_b"])
        return None

    def integral_dmu(self, lam, lo=0.0, hi=math.inf):
        """int f d mu_lambda over (lo, hi), exact for power-type presets."""
        lam = as_param(lam).lam
        pw = self._power_fields()
        if pw is not None:
            c, alpha, la, lb = pw
            sa = max(la, math.log(lo) if lo > 0 else -math.inf)
            sb = min(lb, math.log(hi) if hi < math.inf else math.inf)
            if sb <= sa:
                return 0.0
            return c * _power_log_integral(alpha + 2.0 * lam, sa, sb)
        a, b = max(self.support[0], lo), min(self.support[1], hi)
        if b <= a:
            return 0.0
        val, _ = _si.quad(lambda y: self(y) * y ** (2.0 * lam), a, b,
                          epsabs=1e-13, epsrel=1e-11, limit=200)
        return val

    def lp_norm(self, p, delta):
        """L^p norm with respect to x^delta dx, exact for power presets."""
        if p == math.inf:
            if self._power_fields() is not None:
                c, alpha, la, lb = self._power_fields()
                return abs(c) * math.exp(alpha * (la if alpha < 0 else lb))
            return 1.0  # bump presets peak at 1
        pw = self._power_fields()
        if pw is not None:
            c, alpha, la, lb = pw
            return (abs(c) ** p * _power_log_integral(alpha * p + delta, la, lb)) ** (1.0 / p)
        a, b = self.support
        val, _ = _si.quad(lambda y: abs(self(y)) ** p * y ** delta, a, b,
                          epsabs=1e-13, epsrel=1e-11, limit=200)
        return val ** (1.0 / p)

    def cumulative(self, y):
        """int_0^y |f(s)| ds (plain Lebesgue), used by the local maximal fn."""
        pw = self._power_fields()
        if pw is not None:
            c, alpha, la, lb = pw
            y = np.asarray(y, dtype=float)
            s = np.log(np.clip(y, 1e-300, None))
            s = np.clip(s, la, lb)
            vec = np.vectorize(lambda sb: abs(c) * _power_log_integral(alpha, la, sb))
            return vec(s)
        if not hasattr(self, "_cum"):
            a, b = self.support
            xs = np.linspace(a, b, 4001)
            vals = np.abs(self(xs))
            cum = _si.cumulative_trapezoid(vals, xs, initial=0.0)
            self._cum = _interp.interp1d(xs, cum, bounds_error=False,
                                         fill_value=(0.0, cum[-1]))
        y = np.clip(y, self.support[0], self.support[1])
        return self._cum(y)


def _power_log_integral(exponent, s_lo, s_hi):
    """int_{e^s_lo}^{e^s_hi} y^exponent dy, computed from log endpoints."""
    e1 = exponent + 1.0
    if abs(e1) < 1e-14:
        return s_hi - s_lo
    with np.errstate(over="ignore"):
        hi = math.exp(e1 * s_hi) if e1 * s_hi < 700 else math.inf
        lo = math.exp(e1 * s_lo) if e1 * s_lo < 700 else math.inf
    return (hi - lo) / e1


@dataclass(frozen=True)
class WeightedSpace:
    """The space L^p((0,inf), x^delta dx)."""

    p: float
    delta: float

    def __post_init__(self):
        if self.p < 1:
            raise DomainError("p must be >= 1")


@dataclass
class OperatorReport:
    """Operator output sampled on a grid, with norm estimates attached."""

    input_descriptor: str
    grid: GridSpec
    samples: np.ndarray
    quad_error: float = 0.0
    input_kind: str = ""
    norms: dict = field(default_factory=dict)


# ----------------------------------------------------------------------
# semigroup applications (vectorized sweeps)
# ----------------------------------------------------------------------

def _kernel_row(kind, p, t, x, y, c=None):
    if kind == "heat":
        xb = np.broadcast_to(np.asarray(x, dtype=float), t.shape)
        yb = np.broadcast_to(np.asarray(y, dtype=float), t.shape)
        return _k._heat_core(p.nu, t, xb, yb)
    if kind == "poisson":
        return _k._poisson_closed(p.lam, t, x, y)
    if kind == "dheat_dt":
        return _k.dheat_dt(p, t, x, y)
    if kind == "tail_gauss":
        u = y * y / t
        return np.where(u < 700.0, u ** (p.lam + 0.5) * np.exp(-np.minimum(u * c, 700.0)), 0.0)
    raise DomainError("unknown sweep kernel %r" % (kind,))


def _segments(a, b, lo, hi, n_outer=14, n_inner=30):
    """Per-row quadrature nodes on [a,b] refined inside [lo,hi].

    Outer pieces use log-spaced Gauss-Legendre; the window piece is linear.
    Returns (nodes, weights) of shape (rows, n_outer*2 + n_inner).
    """
    lo = np.clip(lo, a, b)
    hi = np.clip(hi, a, b)
    u_o, w_o = gl_panels(0.0, 1.0, 2, n_outer // 2)
    u_i, w_i = gl_panels(0.0, 1.0, 3, n_inner // 3)
    la, llo = math.log(a), np.log(np.maximum(lo, 1e-300))
    lhi, lb = np.log(np.maximum(hi, 1e-300)), math.log(b)
    # left outer (log), window (linear), right outer (log)
    sL = la + (llo - la)[:, None] * u_o[None, :]
    nL = np.exp(sL)
    wL = (llo - la)[:, None] * w_o[None, :] * nL
    nW = lo[:, None] + (hi - lo)[:, None] * u_i[None, :]
    wW = (hi - lo)[:, None] * w_i[None, :]
    sR = lhi[:, None] + (lb - lhi)[:, None] * u_o[None, :]
    nR = np.exp(sR)
    wR = (lb - lhi)[:, None] * w_o[None, :] * nR
    nodes = np.concatenate([nL, nW, nR], axis=1)
    weights = np.concatenate([wL, wW, wR], axis=1)
    weights[~np.isfinite(nodes)] = 0.0
    nodes[~np.isfinite(nodes)] = a
    return nodes, weights


def _shifted_log_nodes(a, b, x, u_min_rel=1e-9, order=8):
    """Nodes on [a,b] geometrically clustered toward x in |y - x|.

    Resolves kernels whose y-profile has structure at every scale of
    |y - x| (the Poisson kernel's Cauchy core and algebraic tails), with a
    node set independent of t.  Half-octave panels, further split at a
    uniform subdivision of [a, b], keep smooth bump inputs resolved.
    """
    u0 = u_min_rel * x
    support_edges = np.abs(np.linspace(a, b, 9) - x)
    nodes = [np.empty(0)]
    weights = [np.empty(0)]

    def _side(lo_u, hi_u, sign):
        if hi_u <= lo_u:
            return
        n_pan = max(2, int(math.ceil(2.0 * math.log2(hi_u / lo_u))))
        edges = lo_u * 2.0 ** (0.5 * np.arange(n_pan + 1))
        edges[-1] = hi_u
        edges = np.minimum(edges, hi_u)
        ins = support_edges[(support_edges > lo_u) & (support_edges < hi_u)]
        edges = np.unique(np.concatenate([edges, ins]))
        for e0, e1 in zip(edges[:-1], edges[1:]):
            if e1 <= e0:
                continue
            n, w = gl_panels(e0, e1, 1, order)
            nodes.append(x + sign * n)
            weights.append(w)

    # right of x
    _side(max(u0, a - x) if a > x else u0, b - x, +1.0)
    # left of x
    _side(max(u0, x - b) if b < x else u0, x - a, -1.0)
    # linear core straddling x
    c0, c1 = max(a, x - u0), min(b, x + u0)
    if c1 > c0:
        n, w = gl_panels(c0, c1, 1, 4)
        nodes.append(n)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def _sweep(kind, p, f, x, t_arr, region=None, c=None):
    """I(t) = int_region K_t(x, y) f(y) dmu(y) for each t in t_arr."""
    a, b = f.support
    if region == "lower":
        b = min(b, 0.5 * x)
    elif region == "diagonal":
        a, b = max(a, 0.5 * x), min(b, 2.0 * x)
    elif region == "upper":
        a = max(a, 2.0 * x)
    if b <= a:
        return np.zeros(len(t_arr))
    if f.kind == "power_cutoff" and kind == "heat":
        log_lo = f.params["log_a"] if a <= f.support[0] * (1 + 1e-12) \
            else math.log(a)
        return _sweep_power_heat(p, f, x, t_arr, log_lo, math.log(min(b, f.support[1])))
    if kind == "poisson":
        # Cauchy-profile kernel: resolve every |y-x| scale at once
        y, wy = _shifted_log_nodes(a, b, x)
        t_mat = np.broadcast_to(t_arr[:, None], (len(t_arr), len(y)))
        kern = _k._poisson_closed(p.lam, t_mat, x, y[None, :])
        vals = kern * (f(y) * y ** (2.0 * p.lam))[None, :]
        return vals @ wy
    width = 8.0 * np.sqrt(t_arr)
    nodes, weights = _segments(a, b, x - width, x + width)
    t_mat = np.broadcast_to(t_arr[:, None], nodes.shape)
    kern = _kernel_row(kind, p, t_mat, x, nodes, c=c)
    vals = kern * f(nodes) * nodes ** (2.0 * p.lam)
    return np.einsum("ij,ij->i", vals, weights)


def _sweep_power_heat(p, f, x, t_arr, la, lb):
    """Heat sweep for power cutoffs, in s = log y (handles deep supports).

    The integrand is coeff e^((alpha+2lam+1)s) W_t(x, e^s).  Below s_flat
    the kernel equals its y->0 limit to ~1e-7 relative, so that strip is
    integrated analytically; the resolved window [s_flat, log b] gets
    Gauss-Legendre nodes.
    """
    alpha = f.params["alpha"]
    coeff = f.params["coeff"]
    expo = alpha + 2.0 * p.lam + 1.0
    out = np.empty(len(t_arr))
    u, w = gl_panels(0.0, 1.0, 24, 8)
    for i, t in enumerate(t_arr):
        s_flat = min(0.5 * math.log(t), math.log(t / x)) - 8.0
        s_cut = max(la, min(s_flat, lb))
        total = 0.0
        if s_cut > la:
            w0 = _k.heat_kernel_at_zero(p.lam, t, x)  # symmetric kernel limit
            total += coeff * w0 * _power_log_integral(expo - 1.0, la, s_cut)
        if lb > s_cut:
            s = s_cut + (lb - s_cut) * u
            y = np.exp(s)
            kern = _k._heat_core(p.nu, np.full(y.shape, t),
                                 np.full(y.shape, float(x)), y)
            total += (lb - s_cut) * float(np.dot(w, kern * coeff * np.exp(expo * s)))
        out[i] = total
    return out


def heat_apply(lam, t, f, x, spec=None):
    """Heat semigroup applied to f at the point x."""
    p = as_param(lam)
    return float(_sweep("heat", p, f, float(x), np.asarray([float(t)]))[0])


def poisson_apply(lam, t, f, x, spec=None):
    """Poisson semigroup applied to f at the point x."""
    p = as_param(lam)
    return float(_sweep("poisson", p, f, float(x), np.asarray([float(t)]))[0])


def _golden_refine(fn, s_lo, s_hi, iters=40):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = s_lo, s_hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return max(fc, fd)


def maximal_apply(semigroup, lam, f, x, spec=None, region=None, n_t=200):
    """sup over t of |semigroup integral| at x (heat or poisson).

    The sup is taken over a 200-point logarithmic t-grid on
    [1e-6 x^2, 1e6 x^2], refined by golden section around the grid argmax;
    it is reported as a lower bound.  When the argmax sits on the grid
    boundary a warning is emitted and the grid is extended (up to twelve
    extra decades each way) until the argmax is interior.
    """
    p = as_param(lam)
    x = float(x)
    if semigroup not in ("heat", "poisson"):
        raise DomainError("semigroup must be heat or poisson")
    t_lo, t_hi = 1e-6 * x * x, 1e6 * x * x
    t_arr = np.geomspace(t_lo, t_hi, n_t)
    vals = np.abs(_sweep(semigroup, p, f, x, t_arr, region=region))
    per_decade = n_t / 12.0
    for _ in range(6):
        i = int(np.argmax(vals))
        if i != 0 and i != len(t_arr) - 1:
            break
        warnings.warn("maximal argmax on t-grid boundary; extending",
                      UnderResolvedWarning)
        if i == 0:
            ext = np.geomspace(t_arr[0] * 1e-2, t_arr[0] * 0.999,
                               max(4, int(2 * per_decade)))
            ev = np.abs(_sweep(semigroup, p, f, x, ext, region=region))
            t_arr = np.concatenate([ext, t_arr])
            vals = np.concatenate([ev, vals])
        else:
            ext = np.geomspace(t_arr[-1] * 1.001, t_arr[-1] * 1e2,
                               max(4, int(2 * per_decade)))
            ev = np.abs(_sweep(semigroup, p, f, x, ext, region=region))
            t_arr = np.concatenate([t_arr, ext])
            vals = np.concatenate([vals, ev])
    i = int(np.argmax(vals))
    lo, hi = max(0, i - 1), min(len(t_arr) - 1, i + 1)

    def _h(s):
        return abs(float(_sweep(semigroup, p, f, x,
                                np.asarray([math.exp(s)]), region=region)[0]))

    refined = _golden_refine(_h, math.log(t_arr[lo]), math.log(t_arr[hi]))
    return max(float(vals[i]), refined)


# ----------------------------------------------------------------------
# Riesz transform and adjoint
# ----------------------------------------------------------------------

class _Weighted:
    """Callable f(y) * y^(2 lam) * (xy)^(-lam) / pi with jump forwarding."""

    def __init__(self, f, lam, x):
        self.f = f
        self.lam = lam
        self.x = x
        self.jump_points = getattr(f, "jump_points", ())

    def __call__(self, y):
        return self.f(y) * np.asarray(y, dtype=float) ** self.lam \
            * self.x ** (-self.lam) / math.pi


def _dyadic_shells(x, lo, hi, j_max=30, order=6, extra_edges=None):
    """Nodes on [lo, hi] clustering dyadically toward y = x.

    Works whether x lies inside [lo, hi] (shells on both sides, leaving a
    2^-j_max sliver around the singularity) or outside (shells toward the
    nearest edge, which is where the integrand peaks).  extra_edges (e.g.
    spline knots of the integrand) force additional panel boundaries.
    """
    nodes = []
    weights = []

    def _panels(edges):
        edges = np.asarray(edges, dtype=float)
        if extra_edges is not None:
            ins = extra_edges[(extra_edges > edges[0]) & (extra_edges < edges[-1])]
            edges = np.unique(np.concatenate([edges, ins]))
        for e0, e1 in zip(edges[:-1], edges[1:]):
            if e1 <= e0:
                continue
            n, w = gl_panels(e0, e1, 1, order)
            nodes.append(n)
            weights.append(w)

    # left of x: [lo, min(hi, x(1-2^-jmax))], edges approach x dyadically
    cap = min(hi, x * (1.0 - 2.0 ** (-j_max)))
    if cap > lo:
        edges = [lo] + [x * (1.0 - 2.0 ** (-j)) for j in range(1, j_max + 1)
                        if lo < x * (1.0 - 2.0 ** (-j)) < cap] + [cap]
        _panels(edges)
    # right of x: [max(lo, x(1+2^-jmax)), hi]
    cap = max(lo, x * (1.0 + 2.0 ** (-j_max)))
    if hi > cap:
        edges = [cap] + [x * (1.0 + 2.0 ** (-j)) for j in range(j_max, 0, -1)
                         if cap < x * (1.0 + 2.0 ** (-j)) < hi] + [hi]
        _panels(edges)
    if not nodes:
        return np.empty(0), np.empty(0)
    return np.concatenate(nodes), np.concatenate(weights)


def _riesz_kern(p, x_arr, y_arr, transpose, coarse):
    if transpose:
        return _k.riesz_kernel_vec(p, y_arr, x_arr, coarse=coarse)
    return _k.riesz_kernel_vec(p, x_arr, y_arr, coarse=coarse)


def _riesz_global_piece(p, f, x, lo, hi, transpose, coarse=False):
    """int_lo^hi R(x,y) f(y) dmu(y) (or with transposed kernel args).

    For interpolated inputs the quadrature panels align with the spline
    knots (the interpolant is only piecewise smooth there)."""
    a, b = f.support
    lo, hi = max(lo, a), min(hi, b)
    if hi <= lo:
        return 0.0
    knots = getattr(f, "knots", None)
    total = 0.0
    if knots is not None and knots[0] < hi and knots[-1] > lo:
        k0, k1 = max(lo, knots[0]), min(hi, knots[-1])
        inner = knots[(knots > k0) & (knots < k1)]
        edges = np.unique(np.concatenate([[k0], inner, [k1]]))
        xg, wg = np.polynomial.legendre.leggauss(5)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        y = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
        w = (half[:, None] * wg[None, :]).ravel()
        kern = _riesz_kern(p, np.full(y.shape, x), y, transpose, coarse)
        total += float(np.dot(w, kern * f(y) * y ** (2.0 * p.lam)))
        zones = [(lo, k0), (k1, hi)]  # fitted power-tail regions
    else:
        zones = [(lo, hi)]
    for z0, z1 in zones:
        if z1 <= z0 * (1.0 + 1e-14):
            continue
        n_panels = max(2, int(math.ceil(8.0 * math.log(z1 / z0))) if z1 / z0 > 1.5 else 2)
        s, w = gl_panels(math.log(z0), math.log(z1), min(n_panels, 60), 10)
        y = np.exp(s)
        kern = _riesz_kern(p, np.full(y.shape, x), y, transpose, coarse)
        total += float(np.dot(w, kern * f(y) * y ** (2.0 * p.lam + 1.0)))
    return total


def _riesz_local_piece(p, f, x, spec, transpose, coarse=False):
    """Local cone piece: PV singular part + integrable remainder."""
    a, b = f.support
    lo, hi = max(0.5 * x, a), min(2.0 * x, b)
    if hi <= lo:
        return 0.0
    h = _Weighted(f, p.lam, x)
    sgn = -1.0 if transpose else 1.0
    # singular part over the full cone (x/2, 2x) restricted to supp f:
    # pv of h(y)/(y-x); pv_local integrates over the whole cone, and h
    # vanishes outside [lo, hi] for the presets.
    pv = sgn * pv_local(h, x, spec=spec) if lo < x < hi else None
    extra = np.linspace(lo, hi, 9)
    knots = getattr(f, "knots", None)
    if knots is not None:
        extra = np.concatenate([extra, knots])
    n, w = _dyadic_shells(x, lo, hi, j_max=24 if coarse else 30,
                          order=5 if coarse else 6, extra_edges=extra)
    if n.size == 0:
        return 0.0 if pv is None else pv
    kern = _riesz_kern(p, np.full(n.shape, x), n, transpose, coarse)
    if pv is None:
        # x outside supp f: no genuine PV, plain integral of the kernel
        vals = kern * f(n) * n ** (2.0 * p.lam)
        return float(np.dot(w, vals))
    sing = sgn * (x * n) ** (-p.lam) / (math.pi * (n - x))
    vals = (kern - sing) * f(n) * n ** (2.0 * p.lam)
    return pv + float(np.dot(w, vals))


def riesz_apply(lam, f, x, spec=None):
    """Principal-value Riesz transform of f at x.

    Split into the three region pieces: the global pieces integrate the
    kernel directly on log-GL nodes, the local cone separates the
    (xy)^-lam/(pi(y-x)) singular part (odd-part-subtraction PV) from the
    logarithmically singular remainder (dyadic shells toward y = x).
    """
    p = as_param(lam)
    spec = spec or DEFAULT_SPEC
    coarse = spec.rel_tol > 1e-10
    x = float(x)
    return (_riesz_global_piece(p, f, x, 0.0, 0.5 * x, False, coarse)
            + _riesz_local_piece(p, f, x, spec, False, coarse)
            + _riesz_global_piece(p, f, x, 2.0 * x, math.inf, False, coarse))


def riesz_adjoint_apply(lam, f, x, spec=None):
    """Adjoint Riesz transform: same split with kernel arguments swapped."""
    p = as_param(lam)
    spec = spec or DEFAULT_SPEC
    coarse = spec.rel_tol > 1e-10
    x = float(x)
    return (_riesz_global_piece(p, f, x, 0.0, 0.5 * x, True, coarse)
            + _riesz_local_piece(p, f, x, spec, True, coarse)
            + _riesz_global_piece(p, f, x, 2.0 * x, math.inf, True, coarse))


# ----------------------------------------------------------------------
# compensated potential
# ----------------------------------------------------------------------

def _heat_apply_at_zero(p, f, t):
    a, b = f.support
    s, w = gl_panels(math.log(a), math.log(b), 24, 8)
    y = np.exp(s)
    kern = _k.heat_kernel_at_zero(p.lam, t, y)
    return float(np.dot(w, kern * f(y) * y ** (2.0 * p.lam + 1.0)))


def potential_apply(lam, f, x, spec=None, compensated=None, t_max=1e12):
    """Square-root inverse of the operator, applied to f at x.

    pi^(-1/2) int_0^inf (W_t f(x) - [lam <= 0] W_t f(0)) dt/sqrt(t),
    split at t = 1; the small-t piece is integrated in the variable
    sqrt(t).  For lam <= 0 the compensator is required for convergence;
    with compensated=False a divergence detector watches the large-t
    grid and raises DivergenceSignal.
    """
    p = as_param(lam)
    x = float(x)
    if compensated is None:
        compensated = p.lam <= 0

    def _w(t):
        val = _sweep("heat", p, f, x, np.asarray([t]))[0]
        if compensated:
            val -= _heat_apply_at_zero(p, f, t)
        return float(val)

    # t in (0, 1]: substitute t = v^2, dt/sqrt(t) = 2 dv
    v, wv = gl_panels(0.0, 1.0, 24, 8)
    small = 2.0 * float(np.dot(wv, [_w(vi * vi) for vi in v]))
    # t in [1, t_max]: log nodes, with divergence detection on the window
    # where the integrand is far above the quadrature noise floor
    s, ws = gl_panels(0.0, math.log(t_max), 40, 8)
    t = np.exp(s)
    g = np.array([_w(ti) for ti in t]) / np.sqrt(t)
    ga = np.abs(g)
    probe = (t > 1e2) & (t < 1e5) & (ga > 1e-11 * (ga.max() + 1e-300))
    if np.count_nonzero(probe) >= 5:
        slope = np.polyfit(np.log(t[probe]), np.log(ga[probe]), 1)[0]
        if slope > -1.02:
            raise DivergenceSignal(
                "t-integrand decays like t^%.3f; integral diverges" % slope)
    big = float(np.dot(ws, g * t))
    tail = 0.0
    if not compensated and p.lam > 0:
        # beyond t_max: W_t f ~ t^(-lam-1/2) M / (4^lam Gamma(lam+1/2))
        mass = f.integral_dmu(p.lam)
        tail = mass * t_max ** (-p.lam) / (
            p.lam * 4.0 ** p.lam * math.gamma(p.lam + 0.5))
    return (small + big + tail) / _SQRT_PI


def conj_poisson_apply(lam, t, f, x, spec=None):
    """Conjugate Poisson integral of f at (t, x); defined for lambda > 0."""
    p = as_param(lam)
    if p.lam <= 0:
        raise DomainError("conjugate Poisson integral needs lambda > 0")
    a, b = f.support
    s, w = gl_panels(math.log(a), math.log(b), 20, 8)
    y = np.exp(s)
    kern = _k.conj_poisson_kernel(p, t, float(x), y)
    return float(np.dot(w, kern * f(y) * y ** (2.0 * p.lam + 1.0)))


# ----------------------------------------------------------------------
# square functions
# ----------------------------------------------------------------------

def _g_t_nodes(p, f, x, spec):
    spec = spec or DEFAULT_SPEC
    a, b = f.support
    scale_lo = min(x, a) ** 2
    scale_hi = max(x, b) ** 2
    grid = spec.t_grid
    tg = type(grid)(grid.t_min * scale_lo, grid.t_max * scale_hi,
                    grid.points_per_decade)
    return t_log_nodes(tg)


def g_heat(lam, f, x, spec=None):
    """Vertical square function of the heat semigroup at x:
    (int t |d/dt W_t f(x)|^2 dt)^(1/2)."""
    p = as_param(lam)
    x = float(x)
    t, w = _g_t_nodes(p, f, x, spec)
    dI = _sweep("dheat_dt", p, f, x, t)
    g2 = float(np.dot(w, t * dI * dI))
    # truncated tail decays like t^(-2 lam - 2) (kernel bound exponent
    # lam + 3/2); fold the bound into the value as a one-sided correction
    tail = abs(t[-1] * dI[-1] ** 2) * t[-1] / (2.0 * p.lam + 1.0)
    return math.sqrt(max(g2 + 0.5 * tail, 0.0))


def g_poisson(lam, f, x, spec=None):
    """Square function of the Poisson semigroup, differentiated through the
    subordination average of the heat semigroup."""
    p = as_param(lam)
    x = float(x)
    t, wt = _g_t_nodes(p, f, x, spec)
    v, wv = gl_panels(1e-6, 12.0, 24, 8)
    # d/dt P_t f = int (dW/ds)|_{s=t^2/4v^2} * (t/2v^2) e^{-v^2} 2 dv/sqrt(pi)
    s_mat = t[:, None] ** 2 / (4.0 * v[None, :] ** 2)
    dI = np.empty(s_mat.shape)
    for j in range(s_mat.shape[1]):
        dI[:, j] = _sweep("dheat_dt", p, f, x, s_mat[:, j])
    integ = dI * (t[:, None] / (2.0 * v[None, :] ** 2)) * np.exp(-v[None, :] ** 2)
    dP = 2.0 / _SQRT_PI * integ @ wv
    g2 = float(np.dot(wt, t * dP * dP))
    return math.sqrt(max(g2, 0.0))


def g_loc(lam, f, x, spec=None):
    """Local square function: the classical t-derivative kernel dW/dt of
    the line, weighted by (xy)^-lam, integrated over the cone (x/2, 2x)."""
    p = as_param(lam)
    x = float(x)
    a, b = f.support
    lo, hi = max(0.5 * x, a), min(2.0 * x, b)
    if hi <= lo:
        return 0.0
    t, wt = _g_t_nodes(p, f, x, spec)
    width = 8.0 * np.sqrt(t)
    nodes, wy = _segments(lo, hi, x - width, x + width)
    t_mat = np.broadcast_to(t[:, None], nodes.shape)
    kern = _k.dgauss_dt(t_mat, x, nodes) * (x * nodes) ** (-p.lam)
    vals = kern * f(nodes) * nodes ** (2.0 * p.lam)
    dI = np.einsum("ij,ij->i", vals, wy)
    g2 = float(np.dot(wt, t * dI * dI))
    return math.sqrt(max(g2, 0.0))


# ----------------------------------------------------------------------
# Hardy-type and auxiliary operators
# ----------------------------------------------------------------------

def hardy_apply(kind, eta, f, x):
    """Hardy averaging operators with power weights.

    origin:   x^(-eta-1) int_0^x f(y) y^eta dy
    infinity: x^eta int_x^inf f(y) y^(-eta-1) dy
    """
    if eta <= -1:
        raise DomainError("eta must be > -1")
    x = float(x)
    a, b = f.support
    if kind == "origin":
        hi = min(x, b)
        if hi <= a:
            return 0.0
        s, w = gl_panels(math.log(a), math.log(hi), 16, 8)
        y = np.exp(s)
        return x ** (-eta - 1.0) * float(np.dot(w, f(y) * y ** (eta + 1.0)))
    if kind == "infinity":
        lo = max(x, a)
        if b <= lo:
            return 0.0
        s, w = gl_panels(math.log(lo), math.log(b), 16, 8)
        y = np.exp(s)
        return x ** eta * float(np.dot(w, f(y) * y ** (-eta)))
    raise DomainError("kind must be origin or infinity")


def local_max(k, f, x):
    """Local maximal function: sup of averages over windows (u, v) with
    0 < u < x < v < k u, computed by a scanned grid with one refinement."""
    if k <= 1:
        raise DomainError("k must be > 1")
    x = float(x)

    def _avg(u, v):
        return (f.cumulative(v) - f.cumulative(u)) / (v - u)

    def _scan(u_lo, u_hi, v_cap, n):
        us = np.linspace(u_lo, u_hi, n)
        best, arg = 0.0, (us[0], x * (1 + 1e-9))
        for u in us:
            v_hi = min(k * u, v_cap)
            if v_hi <= x:
                continue
            vs = np.linspace(x + 1e-9 * x, v_hi, n)
            vals = _avg(u, vs)
            j = int(np.argmax(vals))
            if vals[j] > best:
                best, arg = float(vals[j]), (u, float(vs[j]))
        return best, arg

    v_cap = k * x
    best, (u0, v0) = _scan(x / k + 1e-12 * x, x * (1 - 1e-9), v_cap, 48)
    # refine around the argmax
    du = x * 0.05
    b2, _ = _scan(max(x / k, u0 - du), min(x * (1 - 1e-12), u0 + du), v_cap, 48)
    return max(best, b2)


def aux_T(lam, f, x, c=0.0625, spec=None, n_t=200):
    """Gaussian-tail maximal operator:
    sup_t |int_x^inf (y^2/t)^(lam+1/2) e^(-c y^2/t) f(y) dy/y|."""
    p = as_param(lam)
    x = float(x)
    a, b = f.support
    lo = max(x, a)
    if b <= lo:
        return 0.0
    t_arr = np.geomspace(1e-6 * lo * lo, 1e6 * b * b, n_t)
    s, w = gl_panels(math.log(lo), math.log(b), 24, 8)
    y = np.exp(s)
    u = y[None, :] ** 2 / t_arr[:, None]
    kern = np.where(u * c < 700.0,
                    u ** (p.lam + 0.5) * np.exp(-np.minimum(u * c, 700.0)), 0.0)
    vals = kern * f(y)[None, :]
    sums = np.abs(vals @ w)
    return float(np.max(sums))


def aux_N(f, x):
    """Local log-kernel average:
    int_{x/2}^{2x} (1 + log(xy/(x-y)^2)) f(y) dy/y."""
    x = float(x)
    a, b = f.support
    lo, hi = max(0.5 * x, a), min(2.0 * x, b)
    if hi <= lo:
        return 0.0
    pts = sorted(set([x] + [p for p in getattr(f, "jump_points", ())
                            if lo < p < hi]))

    def _fn(y):
        return (1.0 + math.log(x * y / (x - y) ** 2)) * f(y) / y

    val, _ = _si.quad(_fn, lo, hi, points=[p for p in pts if lo < p < hi],
                      epsabs=1e-12, epsrel=1e-10, limit=300)
    return val


def aux_calN(f, x):
    """Local harmonic average int_{x/2}^{2x} f(y) dy/y."""
    x = float(x)
    a, b = f.support
    lo, hi = max(0.5 * x, a), min(2.0 * x, b)
    if hi <= lo:
        return 0.0
    s, w = gl_panels(math.log(lo), math.log(hi), 12, 8)
    return float(np.dot(w, f(np.exp(s))))


# ----------------------------------------------------------------------
# reports and norms
# ----------------------------------------------------------------------

def apply_on_grid(op, grid, input_fn=None, quad_error=0.0):
    """Evaluate a pointwise operator on a GridSpec and wrap the samples."""
    xs = grid.nodes()
    samples = np.array([op(x) for x in xs], dtype=float)
    return OperatorReport(
        input_descriptor=getattr(input_fn, "descriptor", "callable"),
        grid=grid,
        samples=samples,
        quad_error=quad_error,
        input_kind=getattr(input_fn, "kind", ""),
    )


def _cell_measures(xs, delta):
    """Measure x^delta dx of the cells around each grid node."""
    edges = np.empty(len(xs) + 1)
    edges[1:-1] = np.sqrt(xs[:-1] * xs[1:])
    edges[0] = xs[0] * math.sqrt(xs[0] / xs[1])
    edges[-1] = xs[-1] * math.sqrt(xs[-1] / xs[-2])
    e = delta + 1.0
    if abs(e) < 1e-14:
        return np.diff(np.log(edges))
    return np.diff(edges ** e) / e


def norm_estimate(report, space, mode):
    """Norm of the sampled operator output in L^p(x^delta dx).

    strong: quadrature of |samples|^p against x^delta dx on the grid.
    weak:   sup over a 64-level gamma grid of gamma mu({|Tf| > gamma})^(1/p).
    restricted_weak: weak, but only accepted for indicator inputs.
    """
    xs = report.grid.nodes()
    v = np.abs(report.samples)
    if mode == "restricted_weak" and report.input_kind != "indicator":
        raise DomainError("restricted weak norms are defined for indicator inputs")
    if mode == "strong":
        if space.p == math.inf:
            out = float(np.max(v))
        else:
            cells = _cell_measures(xs, space.delta)
            out = float(np.dot(cells, v ** space.p) ** (1.0 / space.p))
    elif mode in ("weak", "restricted_weak"):
        pos = v[v > 0]
        if pos.size == 0:
            return 0.0
        gammas = np.geomspace(pos.min() * 0.999, pos.max() * 0.999, 64)
        cells = _cell_measures(xs, space.delta)
        best, arg = 0.0, 0
        for i, g in enumerate(gammas):
            mu = float(np.dot(cells, v > g))
            val = g * mu ** (1.0 / space.p)
            if val > best:
                best, arg = val, i
        if arg in (0, 63):
            warnings.warn("weak-norm gamma grid may be under-resolved",
                          UnderResolvedWarning)
        out = best
    else:
        raise DomainError("mode must be strong, weak or restricted_weak")
    report.norms[(space.p, space.delta, mode)] = out
    return out
