"""Numerical layer: closed-form transforms of box indicators, grid sampling,
FFT transforms, L^p quadrature with certified tail bounds, and the spectral
pairing integral that characterizes contractivity.

Convention throughout: F(f)(t) = integral f(x) exp(-2 pi i <x,t>) dx.

Quadrature results carry two uncertainty components: an analytic tail bound
(from per-function decay certificates |f(x)| <= C / |x|^beta beyond the
sampled window) and a discretization estimate (Richardson comparison of the
full and half grids).  Tails are certified; discretization is an estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .boxgeom import BoxUnion, bounding_box, normalize


class GridMismatch(ValueError):
    """Operands sampled on different grids."""


class MissingDecayBound(ValueError):
    """A certified tail was requested but no usable decay bound is present."""


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric grid: M samples x_j = -T + j h, h = 2T/M.

    M is a power of two so half-grid comparisons and FFTs are exact
    subsamples.  The node at index M/2 is exactly 0; the rightmost node is
    T - h.
    """

    half_width: float
    samples: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.samples < 2 or self.samples & (self.samples - 1):
            raise ValueError("samples must be a power of two >= 2")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.samples

    @property
    def tail_start(self) -> float:
        """Outermost sampled abscissa; decay certificates must hold beyond it."""
        return self.half_width - self.spacing

    def nodes(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.samples)

    def dual(self) -> "Grid":
        """Frequency grid of the discrete transform: spacing 1/(2T)."""
        return Grid(self.samples / (4.0 * self.half_width), self.samples)


DEFAULT_GRID = Grid(64.0, 2**17)


@dataclass
class SampledFunction:
    """Complex samples on a grid plus an optional decay certificate.

    decay_constant C (with decay_power beta, default 1) certifies
    |f(x)| <= C / |x|^beta for |x| >= grid.tail_start.
    """

    grid: Grid
    values: np.ndarray
    decay_constant: float | None = None
    decay_power: float = 1.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.samples,):
            raise ValueError("values length must equal the grid sample count")
        if self.decay_constant is not None and self.decay_constant < 0:
            raise ValueError("decay_constant must be nonnegative")

    def scaled_add(self, eps: float, other: "SampledFunction") -> "SampledFunction":
        """Samples of f + eps*g with a conservatively combined decay bound."""
        if self.grid != other.grid:
            raise GridMismatch("operands live on different grids")
        vals = self.values + eps * other.values
        if self.decay_constant is None or other.decay_constant is None:
            return SampledFunction(self.grid, vals)
        x0 = self.grid.tail_start
        beta = min(self.decay_power, other.decay_power)
        c = (
            self.decay_constant * x0 ** (self.decay_power - beta)
            + abs(eps) * other.decay_constant * x0 ** (other.decay_power - beta)
        )
        return SampledFunction(self.grid, vals, decay_constant=c, decay_power=beta)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    tail_bound: float
    discretization_estimate: float

    @property
    def uncertainty(self) -> float:
        return self.tail_bound + self.discretization_estimate


# ---------------------------------------------------------------------------
# closed-form transforms


def ft_indicator(S: BoxUnion, x) -> np.ndarray | complex:
    """F(chi_S) evaluated exactly from the closed form.

    Per box and axis the factor is w*sinc(w*x)*exp(-i pi (a+b) x) with
    w = b - a, which has no singularity (the x = 0 value is the box width).
    For d = 1, x may be a scalar or any array; for d >= 2 the trailing axis
    of x must have length d.  Overlapping unions are normalized first so the
    result is the transform of the set indicator, not of a multiplicity sum.
    """
    A = normalize(S)
    xs = np.asarray(x, dtype=float)
    if S.dim == 1:
        pts = xs.reshape(-1, 1)
        out_shape = xs.shape
    else:
        if xs.shape[-1] != S.dim:
            raise ValueError(f"points must have trailing axis of length {S.dim}")
        pts = xs.reshape(-1, S.dim)
        out_shape = xs.shape[:-1]
    total = np.zeros(pts.shape[0], dtype=complex)
    for bx in A.boxes:
        term = np.ones(pts.shape[0], dtype=complex)
        for i in range(S.dim):
            a, b = float(bx.lo[i]), float(bx.hi[i])
            w, c = b - a, a + b
            xi = pts[:, i]
            term = term * (w * np.sinc(w * xi)) * np.exp(-1j * np.pi * c * xi)
        total += term
    if out_shape == ():
        return complex(total[0])
    return total.reshape(out_shape)


def sample_ft_indicator(S: BoxUnion, grid: Grid = DEFAULT_GRID) -> SampledFunction:
    """Sample F(chi_S) on a grid (d = 1), with the certified bound
    |F(chi_S)(x)| <= n_boxes / (pi |x|) for all x != 0."""
    if S.dim != 1:
        raise ValueError("sampling is 1-d")
    A = normalize(S)
    vals = ft_indicator(A, grid.nodes())
    return SampledFunction(grid, vals, decay_constant=len(A.boxes) / math.pi, decay_power=1.0)


def sample_indicator(S: BoxUnion, grid: Grid) -> SampledFunction:
    """Samples of the set indicator itself (d = 1); identically zero beyond
    the set, so the decay certificate is C = 0 when the grid covers it."""
    if S.dim != 1:
        raise ValueError("sampling is 1-d")
    x = grid.nodes()
    vals = np.zeros(grid.samples)
    for bx in S.boxes:
        vals[(x >= float(bx.lo[0])) & (x <= float(bx.hi[0]))] = 1.0
    bb = bounding_box(S)
    decay = None
    if bb is None:
        decay = 0.0
    elif -grid.tail_start < float(bb.lo[0]) and float(bb.hi[0]) < grid.tail_start:
        decay = 0.0
    return SampledFunction(grid, vals, decay_constant=decay, decay_power=1.0)


# ---------------------------------------------------------------------------
# quadrature


def _trapezoid_pair(values: np.ndarray, h: float) -> tuple[complex, complex]:
    full = np.trapezoid(values, dx=h)
    half = np.trapezoid(values[::2], dx=2 * h)
    return full, half


def _two_sided_tail(coef: float, gamma: float, grid: Grid) -> float:
    """Certified integral of coef/|x|^gamma over both tails, gamma > 1."""
    xl = grid.half_width
    xr = grid.tail_start
    return coef / (gamma - 1.0) * (xl ** (1.0 - gamma) + xr ** (1.0 - gamma))


def _norm_scale(i_value: float, tail_p: float, disc_p: float, p: float) -> QuadratureResult:
    """Map power-scale integral uncertainty to the norm scale.

    Certified: ((I - d)_+)^(1/p) <= ||f|| <= (I + d)^(1/p) with d = tail+disc;
    the reported components split that norm-scale width proportionally.
    """
    value = i_value ** (1.0 / p)
    total_p = tail_p + disc_p
    if total_p == 0.0:
        return QuadratureResult(value, 0.0, 0.0)
    if math.isinf(total_p):
        return QuadratureResult(value, math.inf, disc_p)
    upper = (i_value + total_p) ** (1.0 / p)
    lower = max(i_value - total_p, 0.0) ** (1.0 / p)
    unc = max(upper - value, value - lower)
    tail_n = unc * (tail_p / total_p)
    return QuadratureResult(value, tail_n, unc - tail_n)


def lp_norm(
    f: SampledFunction,
    p: float,
    *,
    allow_unbounded_tail: bool = False,
    derivative_bound: float | None = None,
) -> QuadratureResult:
    """Composite-trapezoid L^p norm over the sampled window plus tail bounds.

    For finite p the tail integral of (C/|x|^beta)^p must converge
    (beta*p > 1) or MissingDecayBound is raised; pass allow_unbounded_tail to
    get a result flagged with an infinite tail bound instead.  For p = inf
    the value is the grid maximum; derivative_bound (sup |f'|) turns the
    between-nodes correction h/2 * sup|f'| into a certified bound instead of
    a finite-difference estimate.

    Uncertainty components are reported on the norm scale.
    """
    if p != math.inf and p < 1:
        raise ValueError("p must be >= 1 or inf")
    mags = np.abs(f.values)
    if p == math.inf:
        value = float(mags.max())
        if derivative_bound is not None:
            disc = 0.5 * f.grid.spacing * derivative_bound
        else:
            disc = float(np.abs(np.diff(mags)).max()) if len(mags) > 1 else 0.0
        if f.decay_constant is None:
            if not allow_unbounded_tail:
                raise MissingDecayBound("sup-norm tail needs a decay bound")
            return QuadratureResult(value, math.inf, disc)
        tail_sup = f.decay_constant / f.grid.tail_start ** f.decay_power
        return QuadratureResult(value, max(0.0, tail_sup - value), disc)

    w = mags**p
    i_full, i_half = _trapezoid_pair(w, f.grid.spacing)
    i_full, i_half = float(i_full.real), float(i_half.real)
    disc = abs(i_full - i_half) + 1e-14 * i_full
    if f.decay_constant is None:
        tail = math.inf
    else:
        gamma = f.decay_power * p
        if gamma <= 1.0:
            tail = math.inf if f.decay_constant > 0 else 0.0
        else:
            tail = _two_sided_tail(f.decay_constant**p, gamma, f.grid)
    if math.isinf(tail) and not allow_unbounded_tail:
        raise MissingDecayBound(
            "cannot certify the L^p tail: need a decay bound with decay_power * p > 1"
        )
    return _norm_scale(i_full, tail, disc, p)


def shapiro_pairing(f: SampledFunction, g: SampledFunction, p: float) -> QuadratureResult:
    """Quadrature of |f|^(p-2) f conj(g), the pairing whose vanishing for all
    g with spectrum in S2 characterizes ||f|| <= ||f + g||.

    |f|^(p-2) f is taken as 0 at zeros of f (for p < 2 the power is negative
    but the product extends by |f|^(p-1)).  The tail uses
    |integrand| <= C_f^(p-1) C_g / |x|^(beta_f (p-1) + beta_g), which must be
    summable.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if f.grid != g.grid:
        raise GridMismatch("pairing operands must share a grid")
    if f.decay_constant is None or g.decay_constant is None:
        raise MissingDecayBound("pairing tail needs decay bounds for both factors")
    mags = np.abs(f.values)
    if p >= 2:
        weight = mags ** (p - 2.0)
    else:
        weight = np.zeros_like(mags)
        nz = mags > 0
        weight[nz] = mags[nz] ** (p - 2.0)
    integrand = weight * f.values * np.conj(g.values)
    i_full, i_half = _trapezoid_pair(integrand, f.grid.spacing)
    disc = abs(i_full - i_half) + 1e-14 * float(
        np.trapezoid(np.abs(integrand), dx=f.grid.spacing)
    )
    gamma = f.decay_power * (p - 1.0) + g.decay_power
    if gamma <= 1.0:
        raise MissingDecayBound(
            f"pairing tail exponent {gamma} is not summable; need decay_power*(p-1)+decay_power_g > 1"
        )
    coef = f.decay_constant ** (p - 1.0) * g.decay_constant
    tail = _two_sided_tail(coef, gamma, f.grid)
    return QuadratureResult(complex(i_full), tail, disc)


# ---------------------------------------------------------------------------
# FFT transforms


def _fft_sign(grid: Grid) -> np.ndarray:
    m = np.arange(grid.samples)
    sign = (-1.0) ** m
    if (grid.samples // 2) % 2:
        sign = -sign
    return sign


def grid_fourier_transform(f: SampledFunction) -> SampledFunction:
    """Discrete approximation of F(f) on the dual grid (spacing 1/(2T)).

    Riemann-sum transform: F(f)(xi_m) ~ h * sum_j f(x_j) e^{-2 pi i x_j xi_m},
    evaluated by one FFT with the node offsets folded into sign flips.
    """
    grid = f.grid
    alt = _fft_sign(grid)
    spec = grid.spacing * alt * np.fft.fft(f.values * ((-1.0) ** np.arange(grid.samples)))
    return SampledFunction(grid.dual(), spec)


def phi_on_grid(S1: BoxUnion, k: int, freq_grid: Grid = DEFAULT_GRID) -> SampledFunction:
    """The density whose integral over S2 equals the pairing for f = F(chi_S1)
    at p = 2k: the k-fold autoconvolution of chi_S1 convolved with the
    (k-1)-fold autoconvolution of its reflection.

    Computed by FFT on the given grid; real and nonnegative up to roundoff,
    supported in k*S1 + (k-1)*(-S1).  The grid must be wide enough to contain
    that support, otherwise the circular convolution wraps.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if S1.dim != 1:
        raise ValueError("grid evaluation is 1-d")
    ind = sample_indicator(S1, freq_grid)
    c0 = np.fft.ifftshift(ind.values.real)
    spec = np.fft.fft(c0)
    power = spec**k * np.conj(spec) ** (k - 1)
    phi = np.fft.fftshift(np.fft.ifft(power)) * freq_grid.spacing ** (2 * k - 2)
    decay = None
    bb = bounding_box(S1)
    if bb is None:
        decay = 0.0
    else:
        lo = k * float(bb.lo[0]) - (k - 1) * float(bb.hi[0])
        hi = k * float(bb.hi[0]) - (k - 1) * float(bb.lo[0])
        if -freq_grid.tail_start < lo and hi < freq_grid.tail_start:
            decay = 0.0
    return SampledFunction(freq_grid, phi, decay_constant=decay, decay_power=1.0)


def support_scan(
    F: SampledFunction, threshold: float, region: Sequence[float]
) -> list[tuple[float, float]]:
    """Maximal node intervals inside `region` where |F| exceeds `threshold`."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    a, b = float(region[0]), float(region[1])
    x = F.grid.nodes()
    sel = (x >= a) & (x <= b)
    mask = np.abs(F.values) > threshold
    active = sel & mask
    out: list[tuple[float, float]] = []
    idx = np.flatnonzero(active)
    if idx.size == 0:
        return out
    start = prev = idx[0]
    for i in idx[1:]:
        if i == prev + 1:
            prev = i
            continue
        out.append((float(x[start]), float(x[prev])))
        start = prev = i
    out.append((float(x[start]), float(x[prev])))
    return out
