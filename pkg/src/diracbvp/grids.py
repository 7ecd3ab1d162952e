"""Discrete 1D domains, spinor-valued fields and the norm family.

A Grid1D is either an interval [0, L] sampled at N points including both
endpoints (trapezoidal quadrature) or a circle of circumference L sampled
at N equispaced points (uniform quadrature).  A SpinorField holds complex
samples of shape (N, r) for fiber rank r.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (GridError, IncompatibleFieldsError, InvalidFieldError,
                     ParameterError)

INTERVAL = "interval"
CIRCLE = "circle"


@dataclass(frozen=True)
class Grid1D:
    length: float
    n_points: int
    topology: str = INTERVAL

    def __post_init__(self):
        if self.topology not in (INTERVAL, CIRCLE):
            raise GridError("unknown topology %r" % (self.topology,))
        if self.length <= 0:
            raise GridError("length must be positive, got %r" % (self.length,))
        if self.n_points < 8:
            raise GridError("need n_points >= 8, got %d" % self.n_points)

    @property
    def spacing(self):
        if self.topology == CIRCLE:
            return self.length / self.n_points
        return self.length / (self.n_points - 1)

    def points(self):
        if self.topology == CIRCLE:
            return self.spacing * np.arange(self.n_points)
        return np.linspace(0.0, self.length, self.n_points)

    def weights(self):
        """Quadrature weights: uniform on circles, trapezoidal on intervals."""
        h = self.spacing
        w = np.full(self.n_points, h)
        if self.topology == INTERVAL:
            w[0] = w[-1] = h / 2.0
        return w


@dataclass
class SpinorField:
    grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] != self.grid.n_points:
            raise InvalidFieldError(
                "values shape %s incompatible with grid of %d points"
                % (v.shape, self.grid.n_points))
        if not np.all(np.isfinite(v)):
            raise InvalidFieldError("field contains non-finite entries")
        self.values = v

    @property
    def rank(self):
        return self.values.shape[1]

    @classmethod
    def zero(cls, grid, rank=1):
        return cls(grid, np.zeros((grid.n_points, rank), dtype=complex))

    @classmethod
    def from_function(cls, grid, func, rank=1):
        """Sample func(x) -> scalar or length-r vector on the grid."""
        x = grid.points()
        vals = np.array([np.atleast_1d(func(xi)) for xi in x], dtype=complex)
        if vals.shape[1] != rank:
            raise InvalidFieldError(
                "function returned rank %d, expected %d" % (vals.shape[1], rank))
        return cls(grid, vals)

    def copy(self):
        return SpinorField(self.grid, self.values.copy())

    def modulus(self):
        """Pointwise fiberwise Euclidean modulus, shape (N,)."""
        return np.sqrt(np.sum(np.abs(self.values) ** 2, axis=1))

    def __add__(self, other):
        check_compatible(self, other)
        return SpinorField(self.grid, self.values + other.values)

    def __sub__(self, other):
        check_compatible(self, other)
        return SpinorField(self.grid, self.values - other.values)

    def __mul__(self, c):
        return SpinorField(self.grid, self.values * c)

    __rmul__ = __mul__

    def __neg__(self):
        return SpinorField(self.grid, -self.values)


def check_compatible(f, g):
    if f.grid != g.grid:
        raise IncompatibleFieldsError("fields live on different grids")
    if f.rank != g.rank:
        raise IncompatibleFieldsError(
            "fields have ranks %d and %d" % (f.rank, g.rank))


@dataclass(frozen=True)
class NormSpec:
    """Named norm with its parameter: Lp(p), W1q(q) or SlobodeckijHs(s)."""
    kind: str
    parameter: float

    _RANGES = {"Lp": (1.0, np.inf), "W1q": (1.0, np.inf),
               "SlobodeckijHs": (0.0, 1.0)}

    def __post_init__(self):
        if self.kind not in self._RANGES:
            raise ParameterError("unknown norm kind %r" % (self.kind,))
        lo, hi = self._RANGES[self.kind]
        if not lo < self.parameter < hi:
            raise ParameterError(
                "%s parameter %r outside (%g, %g)"
                % (self.kind, self.parameter, lo, hi))

    def evaluate(self, f):
        if self.kind == "Lp":
            return lp_norm(f, self.parameter)
        if self.kind == "W1q":
            return w1q_norm(f, self.parameter)
        return slobodeckij_norm(f, self.parameter)


def _check_p(p, lo=1.0):
    if not np.isfinite(p) or p <= lo:
        raise ParameterError("exponent must exceed %g, got %r" % (lo, p))


def lp_norm(f, p):
    """(sum_x w_x |f(x)|^p)^(1/p) with the fiberwise Euclidean modulus."""
    _check_p(p)
    w = f.grid.weights()
    return float(np.sum(w * f.modulus() ** p) ** (1.0 / p))


def derivative(f):
    """Discrete d/dx: spectral on circles, 2nd-order differences on intervals."""
    v = f.values
    if f.grid.topology == CIRCLE:
        xi = 2j * np.pi * np.fft.fftfreq(f.grid.n_points, d=f.grid.spacing)
        dv = np.fft.ifft(xi[:, None] * np.fft.fft(v, axis=0), axis=0)
    else:
        h = f.grid.spacing
        dv = np.empty_like(v)
        dv[1:-1] = (v[2:] - v[:-2]) / (2 * h)
        # one-sided 2nd-order closures
        dv[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
        dv[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    return SpinorField(f.grid, dv)


def w1q_norm(f, q):
    """(||f||_Lq^q + ||df/dx||_Lq^q)^(1/q)."""
    _check_p(q)
    return float((lp_norm(f, q) ** q + lp_norm(derivative(f), q) ** q)
                 ** (1.0 / q))


_slobodeckij_cache = {}


def slobodeckij_form(grid, s):
    """Dense quadratic form Q with  seminorm^2 = sum_c f_c^H Q f_c.

    Q_xy encodes the double integral of |f(x)-f(y)|^2 / d(x,y)^(1+2s)
    with the diagonal excluded and arc distance on circles.
    """
    key = (grid, s)
    if key in _slobodeckij_cache:
        return _slobodeckij_cache[key]
    x = grid.points()
    w = grid.weights()
    d = np.abs(x[:, None] - x[None, :])
    if grid.topology == CIRCLE:
        d = np.minimum(d, grid.length - d)
    np.fill_diagonal(d, 1.0)  # dummy, diagonal is zeroed below
    kern = (w[:, None] * w[None, :]) / d ** (1.0 + 2.0 * s)
    np.fill_diagonal(kern, 0.0)
    # |f(x)-f(y)|^2 expands to a quadratic form 2*(diag(rowsum) - kern)
    q = -kern
    np.fill_diagonal(q, np.sum(kern, axis=1))
    q *= 2.0
    _slobodeckij_cache[key] = q
    return q


def slobodeckij_norm(f, s):
    """Fractional Sobolev norm (||f||_L2^2 + double-integral seminorm^2)^(1/2)."""
    if not 0.0 < s < 1.0:
        raise ParameterError("s must lie in (0,1), got %r" % (s,))
    q = slobodeckij_form(f.grid, s)
    semi2 = float(np.real(np.einsum("xc,xy,yc->", f.values.conj(), q, f.values)))
    return float(np.sqrt(lp_norm(f, 2) ** 2 + max(semi2, 0.0)))


def nonlinearity(f, p):
    """Pointwise |f|^(p-2) f, with |0|^(p-2)*0 := 0 for p > 2."""
    if p < 2:
        raise ParameterError("nonlinearity needs p >= 2, got %r" % (p,))
    if p == 2:
        return f.copy()
    m = f.modulus()
    fac = np.zeros_like(m)
    nz = m > 0
    fac[nz] = m[nz] ** (p - 2.0)
    return SpinorField(f.grid, fac[:, None] * f.values)


def save_field_csv(f, path):
    """Write `x,re_0,im_0,...` rows, one per grid point."""
    x = f.grid.points()
    header = ["x"]
    for c in range(f.rank):
        header += ["re_%d" % c, "im_%d" % c]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for j in range(f.grid.n_points):
            row = [repr(float(x[j]))]
            for c in range(f.rank):
                row += [repr(float(f.values[j, c].real)),
                        repr(float(f.values[j, c].imag))]
            writer.writerow(row)


def load_field_csv(grid, path):
    """Read a field written by save_field_csv; grid must match row count."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if len(body) != grid.n_points:
        raise InvalidFieldError(
            "%s has %d rows, grid expects %d" % (path, len(body), grid.n_points))
    rank = (len(header) - 1) // 2
    vals = np.zeros((grid.n_points, rank), dtype=complex)
    for j, row in enumerate(body):
        nums = [float(t) for t in row[1:]]
        vals[j] = [nums[2 * c] + 1j * nums[2 * c + 1] for c in range(rank)]
    return SpinorField(grid, vals)
