"""Contains multiplier functions and the function spaces measuring them.

A multiplier f on (0, inf) is studied through its exponential pullback
f_e(s) = f(e^s) sampled on a uniform grid in the log variable s. Fourier
transforms follow the convention fhat(xi) = int f(s) exp(-i s xi) ds with
inverse (1/2pi) int fhat(xi) exp(i s xi) dxi.
"""

import dataclasses as dc
import math
import re

import numpy as np
import scipy.fft
import scipy.integrate
import scipy.optimize
import scipy.special

from numpy.polynomial import Polynomial

from ..config import config
from ..logger import logger
from ..utils import utils

from .case import SECTOR_EXP, WAVE_REGULARIZED, IMAGINARY_POWER
from .case import BOCHNER_RIESZ, RATIONAL, WINDOWED_SMOOTH, CUSTOM, KINDS
from .case import EQUIDISTANT, DYADIC
from .errors import ParameterError, DomainError, TailTruncation
from .errors import GridCoverage, PartitionConstruction, SmoothnessError
from .errors import PreconditionError


def grid_defaults():
    """Get origin, spacing and count of the default s-grid."""
    grid = config['GRID']
    spacing = float(grid.get('spacing'))
    lower, upper = float(grid.get('lower')), float(grid.get('upper'))
    count = int(round((upper-lower)/spacing)) + 1
    return lower, spacing, count


@dc.dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex function sampled at s_k = origin + k*spacing."""

    origin: float
    spacing: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex, ndmin=1)
        if samples.ndim != 1 or samples.size == 0:
            raise ParameterError('samples must be a nonempty sequence')
        if not self.spacing > 0:
            raise ParameterError(f'spacing must be positive, '
                                 f'not {self.spacing}')
        samples.setflags(write=False)
        object.__setattr__(self, 'origin', float(self.origin))
        object.__setattr__(self, 'spacing', float(self.spacing))
        object.__setattr__(self, 'samples', samples)

    def __str__(self):
        return (f'[grid:{self.origin:g}+{len(self)}x{self.spacing:g}]')

    __repr__ = __str__

    def __len__(self):
        return self.samples.size

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check_combinable(other)
            other = other.samples
        return self._replace(self.samples + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._check_combinable(other)
            other = other.samples
        return self._replace(self.samples - other)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._check_combinable(other)
            other = other.samples
        return self._replace(self.samples * other)

    __rmul__ = __mul__

    @property
    def points(self):
        """Get the s-coordinates of the samples."""
        return self.origin + self.spacing*np.arange(len(self))

    @property
    def end(self):
        """Get the right endpoint of the grid."""
        return self.origin + self.spacing*(len(self)-1)

    @property
    def peak(self):
        """Get the largest modulus of the samples."""
        return float(np.max(np.abs(self.samples)))

    def combinable(self, other):
        """Check if both functions live on the same grid."""
        return (len(self) == len(other)
                and math.isclose(self.origin, other.origin,
                                 rel_tol=1e-12, abs_tol=1e-12)
                and math.isclose(self.spacing, other.spacing, rel_tol=1e-12))

    def crop(self, lower, upper):
        """Get the restriction to the grid points inside [lower, upper]."""
        points = self.points
        tol = 1e-9*self.spacing
        index = np.flatnonzero((points >= lower-tol) & (points <= upper+tol))
        if index.size == 0:
            raise GridCoverage(f'{self} has no points in [{lower}, {upper}]')
        return GridFunction(points[index[0]], self.spacing,
                            self.samples[index[0]:index[-1]+1])

    def dump(self, path):
        """Write the function to CSV with an origin/spacing header."""
        table = np.column_stack([self.points, self.samples.real,
                                 self.samples.imag])
        header = f'origin={self.origin!r} spacing={self.spacing!r}'
        np.savetxt(path, table, fmt='%.17g', delimiter=',',
                   header=header, comments='# ')

    @classmethod
    def load(cls, path):
        """Read the function from CSV written by dump."""
        with open(path, 'r') as file:
            header = file.readline()
        match = re.match(r'^#\s*origin=(\S+)\s+spacing=(\S+)', header)
        if match is None:
            raise ParameterError(f'{path} has no origin/spacing header')
        origin, spacing = float(match.group(1)), float(match.group(2))
        table = np.loadtxt(path, delimiter=',', comments='#', ndmin=2)
        return cls(origin, spacing, table[:, 1] + 1j*table[:, 2])

    def _replace(self, samples):
        return GridFunction(self.origin, self.spacing, samples)

    def _check_combinable(self, other):
        if not self.combinable(other):
            message = f'{self} and {other} are not combinable'
            raise ParameterError(message)


@dc.dataclass(frozen=True, eq=False)
class MultiplierFunction:
    """Closed-form multiplier f on (0, inf), optionally dilated.

    Parameters
    ----------
    kind : str
        One of the kinds in ``smlab.main.case.KINDS``.
    params : dict
        Kind parameters, e.g. ``{'theta': 0.5}`` for SectorExp.
    holomorphy_angle : float or None
        Largest sector of bounded holomorphy.
    decay_at_zero, decay_at_infinity : bool
        Whether f decays polynomially at 0 and at infinity.
    scale : float
        Dilation, the function evaluated is λ -> f(scale*λ).
    function : callable or None
        Implementation of the Custom kind.
    """

    kind: str
    params: dict = dc.field(default_factory=dict)
    holomorphy_angle: float = None
    decay_at_zero: bool = False
    decay_at_infinity: bool = False
    scale: float = 1.0
    function: object = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f'unknown multiplier kind {self.kind}')
        if self.kind == CUSTOM and not callable(self.function):
            raise ParameterError('Custom multiplier needs a callable')
        if not self.scale > 0:
            raise ParameterError(f'scale must be positive, not {self.scale}')

    def __str__(self):
        params = ','.join(f'{k}={v}' for k, v in self.params.items()
                          if k != 'coefficients')
        scale = f'@{self.scale:g}' if self.scale != 1 else ''
        return f'[{self.kind}({params}){scale}]'

    __repr__ = __str__

    def __call__(self, lam):
        """Evaluate at real λ > 0 or, for holomorphic kinds, complex λ."""
        lam = np.asarray(lam)
        if np.iscomplexobj(lam):
            if self.holomorphy_angle is None and self.kind != CUSTOM:
                message = f'{self} has no holomorphic extension'
                raise PreconditionError(message)
        elif np.any(~(lam > 0)):
            raise DomainError(f'{self} is defined for λ > 0 only')
        values = self._evaluate(self.scale*lam)
        return np.asarray(values, dtype=complex)

    @property
    def support(self):
        """Get the support interval in λ when it is known to be bounded."""
        if self.kind == BOCHNER_RIESZ:
            return (0.0, self.params['u']/self.scale)
        elif self.kind == WINDOWED_SMOOTH:
            center, radius = self.params['center'], self.params['radius']
            return (math.exp(center-radius)/self.scale,
                    math.exp(center+radius)/self.scale)
        return None

    @property
    def log_support(self):
        """Get the support interval of f_e in s when it is bounded."""
        if self.kind == WINDOWED_SMOOTH:
            center, radius = self.params['center'], self.params['radius']
            shift = math.log(self.scale)
            return (center-radius-shift, center+radius-shift)
        return None

    @property
    def has_derivatives(self):
        """Check if λ-derivatives are known in closed form."""
        return self.kind in (SECTOR_EXP, WAVE_REGULARIZED, IMAGINARY_POWER,
                             BOCHNER_RIESZ, RATIONAL)

    def pullback(self, s):
        """Evaluate f_e(s) = f(e^s).

        Windowed kinds are evaluated in s directly, which keeps windows of
        tiny radius resolved where exp and log would round them away.
        """
        s = np.asarray(s, dtype=float)
        if self.kind != WINDOWED_SMOOTH:
            return self(np.exp(s))
        params = self.params
        x = (s + math.log(self.scale) - params['center'])/params['radius']
        values = params.get('amplitude', 1.0)*bump(x)*_trigonometric(x, params)
        return np.asarray(values, dtype=complex)

    def dilate(self, factor):
        """Get the multiplier λ -> f(factor*λ)."""
        return dc.replace(self, scale=self.scale*factor)

    def scaled(self, factor):
        """Get the multiplier factor*f."""
        params = dict(self.params)
        params['amplitude'] = params.get('amplitude', 1.0)*factor
        return dc.replace(self, params=params)

    def derivatives(self, at, order):
        """Get f(at), f'(at), ..., f^(order)(at) in closed form.

        Parameters
        ----------
        at : float
            Positive evaluation point.
        order : int
            Highest derivative.

        Returns
        -------
        values : numpy.ndarray or None
            Complex array of length ``order+1``, None when the kind has no
            closed-form derivatives.
        """
        if not self.has_derivatives:
            return None
        x = self.scale*at
        values = _kind_derivatives(self.kind, self.params, x, order)
        values = values * self.scale**np.arange(order+1)
        return values*self.params.get('amplitude', 1.0)

    def log_taylor(self, order):
        """Get Taylor coefficients of s -> f(e^s) at s = 0.

        Closed-form λ-derivatives are converted by Stirling numbers of the
        second kind, windowed kinds are expanded in s directly, other kinds
        use central finite differences.
        """
        if self.kind == WINDOWED_SMOOTH:
            return _windowed_taylor(self.params, math.log(self.scale), order)
        values = self.derivatives(1.0, order)
        if values is not None:
            return stirling_transform(values)
        return _finite_taylor(lambda s: self(np.exp(s)), order, str(self))

    def to_json(self):
        """Get the JSON descriptor {kind, params}."""
        if self.kind == CUSTOM:
            raise ParameterError('Custom multipliers are not serializable')
        params = utils.to_json(self.params)
        if self.scale != 1:
            params['scale'] = self.scale
        return {'kind': self.kind, 'params': params}

    @classmethod
    def from_json(cls, descriptor):
        """Build multiplier from the JSON descriptor {kind, params}."""
        params = dict(descriptor.get('params', {}))
        scale = float(params.pop('scale', 1.0))
        amplitude = params.pop('amplitude', None)
        kind = descriptor['kind']
        if kind == WINDOWED_SMOOTH:
            function = windowed_smooth(**params)
        else:
            function = standard_family(kind, params)
        if amplitude is not None:
            function = function.scaled(_to_complex(amplitude))
        return function.dilate(scale)

    def _evaluate(self, lam):
        params = self.params
        amplitude = params.get('amplitude', 1.0)
        if self.kind == SECTOR_EXP:
            values = np.exp(-np.exp(1j*params['theta'])*lam)
        elif self.kind == WAVE_REGULARIZED:
            s, alpha = params['s'], params['alpha']
            values = (1+abs(s)*lam)**(-alpha) * np.exp(1j*s*lam)
        elif self.kind == IMAGINARY_POWER:
            values = np.exp(1j*params['t']*np.log(lam))
        elif self.kind == BOCHNER_RIESZ:
            x = 1 - lam/params['u']
            inside = x > 0
            base = np.where(inside, x, 1.0)
            values = np.where(inside, base**params['exponent'], 0.0)
        elif self.kind == RATIONAL:
            num = np.array(params['num'], dtype=complex)
            den = np.array(params['den'], dtype=complex)
            values = (np.polynomial.polynomial.polyval(lam, num)
                      / np.polynomial.polynomial.polyval(lam, den))
        elif self.kind == WINDOWED_SMOOTH:
            x = (np.log(lam)-params['center'])/params['radius']
            values = bump(x)*_trigonometric(x, params)
        else:
            values = self.function(lam)
        return amplitude*values


def bump(x):
    """Standard smooth bump exp(1 - 1/(1 - x^2)) supported in (-1, 1)."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1
    safe = np.where(inside, x, 0.0)
    return np.where(inside, np.exp(1-1/(1-safe**2)), 0.0)


def stirling_transform(derivatives):
    """Convert f^(i)(1) into Taylor coefficients of f(e^s) at s = 0.

    Works along the last axis, so stacks of derivative vectors convert at
    once.
    """
    derivatives = np.asarray(derivatives, dtype=complex)
    order = derivatives.shape[-1]
    k = np.arange(order)
    rows, columns = np.meshgrid(k, k, indexing='ij')
    stirling = scipy.special.stirling2(rows, columns, exact=False)
    factorial = scipy.special.factorial(k)
    matrix = np.asarray(stirling, dtype=float)/factorial[:, None]
    return derivatives @ matrix.T


def falling(x, order):
    """Get falling factorials x(x-1)...(x-j+1) for j = 0..order."""
    values = np.ones(order+1, dtype=complex)
    for j in range(1, order+1):
        values[j] = values[j-1]*(x-j+1)
    return values


def exp_pullback(f, origin, spacing, count):
    """Sample f_e(s) = f(e^s) on s_k = origin + k*spacing.

    Parameters
    ----------
    f : MultiplierFunction
        Multiplier to sample.
    origin : float
        Left endpoint of the s-grid.
    spacing : float
        Grid step.
    count : int
        Number of samples, at least 2.

    Returns
    -------
    g : GridFunction
        The pullback on the requested grid.
    """
    if count < 2:
        raise ParameterError(f'count must be at least 2, not {count}')
    if not spacing > 0:
        raise ParameterError(f'spacing must be positive, not {spacing}')
    points = origin + spacing*np.arange(count)
    with np.errstate(over='ignore', invalid='ignore'):
        samples = f.pullback(points)
    if not np.all(np.isfinite(samples)):
        raise DomainError(f'{f} is not finite on the grid from {origin}')
    return GridFunction(origin, spacing, samples)


def sobolev_norm(g, alpha, p, strict=True, diagnostics=None):
    """Compute the discrete W^alpha_p norm ||((1+|t|)^alpha ghat)^||_p.

    Parameters
    ----------
    g : GridFunction
        Function decaying at both grid ends.
    alpha : float
        Smoothness, nonnegative.
    p : float
        Integrability in [1, inf).
    strict : bool, optional
        Raise TailTruncation on non-decaying tails, otherwise log a warning
        and append a note to ``diagnostics``.
    diagnostics : list, optional
        Collects truncation notes in non-strict mode.

    Returns
    -------
    norm : float
        Trapezoid approximation of the weighted L^p norm.
    """
    if not alpha >= 0:
        raise ParameterError(f'alpha must be nonnegative, not {alpha}')
    if not 1 <= p < math.inf:
        raise ParameterError(f'p must be in [1, inf), not {p}')
    if g.peak == 0:
        return 0.0
    _check_tails(g, strict, diagnostics)
    weighted = _apply_symbol(g, (1+np.abs(_frequencies(g)))**alpha)
    integral = scipy.integrate.trapezoid(np.abs(weighted)**p, dx=g.spacing)
    return float(integral**(1/p))


def fractional_derivative(g, alpha, padding=None, strict=True,
                          diagnostics=None):
    """Compute the inverse transform of (-i xi)^alpha ghat(xi).

    The grid is extended to the left by zeros, ``padding`` times its length,
    so that the slowly decaying left tail of the result is represented and
    the periodic images stay far away. The result lives on the extended
    grid.

    On grids of even length the Nyquist bin has no conjugate partner and
    (-i xi)^alpha would turn it into a ripple of alternating sign over the
    whole grid, so that bin is dropped.
    """
    if not alpha > 0:
        raise ParameterError(f'alpha must be positive, not {alpha}')
    if padding is None:
        padding = config['CALCULUS'].get('fourier_padding')
    _check_tails(g, strict, diagnostics)
    size = scipy.fft.next_fast_len(int(math.ceil(max(padding, 1)*len(g))))
    extra = size - len(g)
    samples = np.concatenate([np.zeros(extra, dtype=complex), g.samples])
    extended = GridFunction(g.origin-extra*g.spacing, g.spacing, samples)
    xi = _frequencies(extended)
    symbol = np.zeros_like(xi, dtype=complex)
    nonzero = xi != 0
    symbol[nonzero] = (-1j*xi[nonzero])**alpha
    if size % 2 == 0:
        symbol[size//2] = 0
    return GridFunction(extended.origin, g.spacing,
                        _apply_symbol(extended, symbol))


def reproduction_defect(g, alpha, padding=None):
    """Measure the fractional reproduction identity on the grid.

    With f^(alpha) = (-1)^m * fractional_derivative(g, alpha), m the integer
    part of alpha, the identity reads
    g(s) = ((-1)^m/Gamma(alpha)) int_s^inf (t-s)^(alpha-1) f^(alpha)(t) dt.
    Returns the largest defect relative to the peak of g.
    """
    if not alpha > 1:
        raise ParameterError(f'alpha must be above 1, not {alpha}')
    m = math.floor(alpha)
    derivative = fractional_derivative(g, alpha, padding)
    derivative = derivative.samples[-len(g):]*(-1)**m
    s = g.points
    distance = s[None, :] - s[:, None]
    kernel = np.where(distance > 0, np.abs(distance)**(alpha-1), 0.0)
    integral = scipy.integrate.trapezoid(kernel*derivative[None, :],
                                         dx=g.spacing, axis=1)
    rebuilt = (-1)**m*integral/scipy.special.gamma(alpha)
    return float(np.max(np.abs(rebuilt-g.samples))/g.peak)


def algebra_constant(f, g, alpha, p):
    """Get sobolev_norm(fg)/(sobolev_norm(f)*sobolev_norm(g))."""
    product = sobolev_norm(f*g, alpha, p)
    return product/(sobolev_norm(f, alpha, p)*sobolev_norm(g, alpha, p))


@dc.dataclass(frozen=True, eq=False)
class Partition:
    """Smooth partition of unity built from one mother window.

    Equidistant pieces are psi(s - n) in the log variable, dyadic pieces
    are phi(2^-n λ) = psi(log2 λ - n).
    """

    kind: str
    window: GridFunction
    index_range: tuple
    radius: float = 1.0

    def __str__(self):
        lower, upper = self.index_range
        return f'[{self.kind}:{lower}..{upper}]'

    __repr__ = __str__

    def mother(self, x):
        """Evaluate the normalized window psi."""
        x = np.asarray(x, dtype=float)
        return _raw_bump(x, self.radius)/_periodized(x, self.radius)

    def piece(self, n, x):
        """Evaluate the n-th piece at s (Equidistant) or λ (Dyadic)."""
        x = np.asarray(x, dtype=float)
        if self.kind == DYADIC:
            x = np.log2(x)
        return self.mother(x-n)

    def covers(self, lower, upper):
        """Check if the pieces cover [lower, upper] of the s-axis."""
        first, last = self.index_range
        return first <= lower and upper <= last

    def defect(self, x):
        """Get the largest deviation of the sum of pieces from one."""
        first, last = self.index_range
        total = sum(self.piece(n, x) for n in range(first, last+1))
        return float(np.max(np.abs(total-1)))


def make_partition(kind, window_params=None):
    """Build an Equidistant or Dyadic partition of unity.

    Parameters
    ----------
    kind : str
        ``Equidistant`` or ``Dyadic``.
    window_params : dict, optional
        ``radius`` of the raw bump (in units of the period, in (1/2, 1]),
        ``index_range`` as a pair of integers.

    Returns
    -------
    part : Partition
        Partition whose summation defect is below tol_part.
    """
    if kind not in (EQUIDISTANT, DYADIC):
        raise ParameterError(f'unknown partition kind {kind}')
    window_params = dict(window_params or {})
    radius = float(window_params.get('radius', 1.0))
    grid = config['GRID']
    default_range = (int(math.floor(grid.get('lower'))),
                     int(math.ceil(grid.get('upper'))))
    first, last = window_params.get('index_range', default_range)
    if radius > 1:
        message = (f'window radius {radius} exceeds the period, support '
                   f'would leave [-1, 1]')
        raise PartitionConstruction(message)
    if not last - first >= 2:
        raise PartitionConstruction(f'index range {first}..{last} is empty')
    spacing = grid.get('spacing')
    count = int(round(2/spacing)) + 1
    x = -1 + spacing*np.arange(count)
    with np.errstate(divide='ignore', invalid='ignore'):
        samples = _raw_bump(x, radius)/_periodized(x, radius)
    window = GridFunction(-1.0, spacing, samples)
    part = Partition(kind, window, (int(first), int(last)), radius)
    check = np.linspace(first+1, last-1, 4097)
    if kind == DYADIC:
        check = 2.0**check
    with np.errstate(divide='ignore', invalid='ignore'):
        defect = part.defect(check)
    tolerance = grid.get('tol_part')
    if not defect <= tolerance:
        message = f'{part} sums to one only within {defect}'
        raise PartitionConstruction(message)
    logger.debug(f'{part} built with defect {defect:.3e}')
    return part


def hoermander_norm(f, alpha, p, part, s_range=None, spacing=None,
                    record=None):
    """Compute the windowed Hörmander norm sup_n ||psi_n f_e||_{W^alpha_p}.

    Windows are taken at every integer shift n covering ``s_range``; the
    best one is then refined over continuous shifts, which approximates the
    supremum over all dilations.

    Parameters
    ----------
    f : MultiplierFunction
        Multiplier to measure.
    alpha, p : float
        Sobolev smoothness and integrability.
    part : Partition
        Equidistant partition providing the window.
    s_range : tuple, optional
        Range of window centres, by default the GRID range.
    spacing : float, optional
        Local grid step, by default the GRID spacing.
    record : dict, optional
        Receives ``index``, ``shift`` and ``norms`` of the windows.

    Returns
    -------
    norm : float
        The Hörmander norm.
    """
    if part.kind != EQUIDISTANT:
        raise ParameterError('hoermander_norm needs an Equidistant partition')
    grid = config['GRID']
    lower, upper = s_range or (grid.get('lower'), grid.get('upper'))
    if not part.covers(lower, upper):
        raise GridCoverage(f'{part} does not cover s in [{lower}, {upper}]')
    spacing = spacing or grid.get('spacing')
    padding = grid.get('padding')
    count = int(round(padding/spacing))
    x = np.arange(-count, count+1)
    support = f.log_support
    local = support is not None and support[1]-support[0] < 2
    if local:
        # narrow windows get a grid of the same shape scaled to their radius
        spacing *= (support[1]-support[0])/2
        middle = (support[0]+support[1])/2
    x = spacing*x

    def profile(shift):
        points = (middle if local else shift) + x
        values = part.mother(points-shift)*f.pullback(points)
        return sobolev_norm(GridFunction(points[0], spacing, values),
                            alpha, p)

    indices = list(range(int(math.ceil(lower)), int(math.floor(upper))+1))
    norms = utils.parallel(profile, indices, name='Window')
    best = int(np.argmax(norms))
    value, shift = _refine_supremum(profile, indices[best], norms[best])
    logger.debug(f'{f} H^{alpha}_{p} norm {value:.6g} at shift {shift:.6f}')
    if record is not None:
        record.update(index=indices[best], shift=shift, norms=norms)
    return value


def classical_hoermander_norm(f, alpha, p, part, n_range=None, spacing=None,
                              record=None):
    """Compute sup_n ||phi f(2^n .)||_{W^alpha_p} in the λ variable."""
    if part.kind != DYADIC:
        message = 'classical_hoermander_norm needs a Dyadic partition'
        raise ParameterError(message)
    lower, upper = n_range or part.index_range
    spacing = spacing or config['GRID'].get('spacing')
    lam = 0.25 + spacing*np.arange(int(round(4/spacing))+1)
    window = part.piece(0, lam)

    def profile(level):
        values = f(2.0**level*lam)
        return sobolev_norm(GridFunction(0.25, spacing, window*values),
                            alpha, p)

    indices = list(range(int(lower), int(upper)+1))
    norms = utils.parallel(profile, indices, name='Window')
    best = int(np.argmax(norms))
    value, level = _refine_supremum(profile, indices[best], norms[best])
    if record is not None:
        record.update(index=indices[best], shift=level, norms=norms)
    return value


def standard_family(kind, params):
    """Build a multiplier of the standard families with its metadata.

    Parameters
    ----------
    kind : str
        SectorExp (theta), WaveRegularized (s, alpha), ImaginaryPower (t),
        BochnerRiesz (u, exponent) or Rational (num, den).
    params : dict
        Parameters of the kind.

    Returns
    -------
    f : MultiplierFunction
        Multiplier with holomorphy angle and decay flags set.
    """
    params = dict(params)
    if kind == SECTOR_EXP:
        theta = float(params['theta'])
        if not abs(theta) < math.pi:
            raise ParameterError(f'theta must satisfy |theta| < pi, '
                                 f'not {theta}')
        angle = math.pi/2 - abs(theta)
        return MultiplierFunction(kind, {'theta': theta},
                                  angle if angle > 0 else None,
                                  False, abs(theta) < math.pi/2)
    elif kind == WAVE_REGULARIZED:
        s, alpha = float(params['s']), float(params['alpha'])
        if not alpha >= 0:
            raise ParameterError(f'alpha must be nonnegative, not {alpha}')
        angle = math.pi if s == 0 else None
        return MultiplierFunction(kind, {'s': s, 'alpha': alpha}, angle,
                                  False, s != 0 and alpha > 0)
    elif kind == IMAGINARY_POWER:
        t = float(params['t'])
        return MultiplierFunction(kind, {'t': t}, math.pi, False, False)
    elif kind == BOCHNER_RIESZ:
        u, exponent = float(params['u']), float(params['exponent'])
        if not u > 0:
            raise ParameterError(f'u must be positive, not {u}')
        if not exponent >= 0:
            raise ParameterError(f'exponent must be nonnegative, '
                                 f'not {exponent}')
        return MultiplierFunction(kind, {'u': u, 'exponent': exponent},
                                  None, False, True)
    elif kind == RATIONAL:
        num = np.trim_zeros(_to_complex_array(params['num']), 'b')
        den = np.trim_zeros(_to_complex_array(params['den']), 'b')
        if den.size == 0:
            raise ParameterError('denominator must not vanish')
        num = num if num.size else np.zeros(1, dtype=complex)
        poles = np.polynomial.polynomial.polyroots(den) if den.size > 1 else []
        angles = [abs(np.angle(pole)) for pole in poles]
        angle = min(angles, default=math.pi)
        return MultiplierFunction(kind, {'num': list(num), 'den': list(den)},
                                  angle if angle > 0 else None,
                                  bool(num[0] == 0) and bool(den[0] != 0),
                                  num.size < den.size)
    raise ParameterError(f'{kind} is not a standard family')


def windowed_smooth(center, radius, coefficients, frequency=1.0):
    """Build a real trigonometric polynomial under the smooth bump.

    f(λ) = bump(x) * sum_k a_k cos(k pi w x) + b_k sin(k pi w x) with
    x = (log λ - center)/radius, so supp f = [e^(center-radius),
    e^(center+radius)].
    """
    if not radius > 0:
        raise ParameterError(f'radius must be positive, not {radius}')
    coefficients = [[float(a), float(b)] for a, b in coefficients]
    if not coefficients:
        raise ParameterError('at least one coefficient pair is needed')
    params = {'center': float(center), 'radius': float(radius),
              'coefficients': coefficients, 'frequency': float(frequency)}
    return MultiplierFunction(WINDOWED_SMOOTH, params, None, True, True)


def random_multiplier(rng, center=0.0, radius=1.0, degree=4, frequency=1.0):
    """Draw a windowed smooth multiplier with normal coefficients."""
    coefficients = rng.standard_normal((degree, 2))
    coefficients[0, 1] = 0.0
    return windowed_smooth(center, radius, coefficients.tolist(), frequency)


def _trigonometric(x, params):
    omega = math.pi*params['frequency']
    values = np.zeros_like(x, dtype=float)
    for k, (a, b) in enumerate(params['coefficients']):
        values = values + a*np.cos(k*omega*x) + b*np.sin(k*omega*x)
    return values


def _kind_derivatives(kind, params, x, order):
    if kind == SECTOR_EXP:
        c = np.exp(1j*params['theta'])
        return (-c)**np.arange(order+1)*np.exp(-c*x)
    elif kind == WAVE_REGULARIZED:
        s, alpha = params['s'], params['alpha']
        a = abs(s)
        power = falling(-alpha, order)*a**np.arange(order+1)
        power = power*(1+a*x)**(-alpha-np.arange(order+1))
        wave = (1j*s)**np.arange(order+1)*np.exp(1j*s*x)
        values = np.zeros(order+1, dtype=complex)
        for i in range(order+1):
            for j in range(i+1):
                values[i] += math.comb(i, j)*power[j]*wave[i-j]
        return values
    elif kind == IMAGINARY_POWER:
        t = params['t']
        powers = np.exp((1j*t-np.arange(order+1))*math.log(x))
        return falling(1j*t, order)*powers
    elif kind == BOCHNER_RIESZ:
        u, nu = params['u'], params['exponent']
        rest = 1 - x/u
        exponents = nu - np.arange(order+1)
        factors = falling(nu, order)*(-1/u)**np.arange(order+1)
        if rest > 0:
            return factors*rest**exponents
        elif rest < 0:
            return np.zeros(order+1, dtype=complex)
        if np.any(exponents <= 0):
            message = (f'(1-λ/{u})_+^{nu} is not {order} times '
                       f'differentiable at λ = {x}')
            raise SmoothnessError(message)
        return np.zeros(order+1, dtype=complex)
    elif kind == RATIONAL:
        shift = Polynomial([x, 1])
        num = Polynomial(np.array(params['num'], dtype=complex))(shift)
        den = Polynomial(np.array(params['den'], dtype=complex))(shift)
        p = np.zeros(order+1, dtype=complex)
        q = np.zeros(order+1, dtype=complex)
        p[:min(order+1, num.coef.size)] = num.coef[:order+1]
        q[:min(order+1, den.coef.size)] = den.coef[:order+1]
        if q[0] == 0:
            raise SmoothnessError(f'rational multiplier has a pole at {x}')
        taylor = np.zeros(order+1, dtype=complex)
        for k in range(order+1):
            taylor[k] = (p[k] - np.dot(q[1:k+1], taylor[k-1::-1][:k]))/q[0]
        return taylor*scipy.special.factorial(np.arange(order+1))
    return None


def _windowed_taylor(params, shift, order):
    radius = params['radius']
    x0 = (shift - params['center'])/radius
    if not abs(x0) < 1:
        return np.zeros(order+1, dtype=complex)
    # 1/(1-x^2) around x0 from q = (1-x0^2) - 2 x0 h - h^2
    q = np.zeros(order+1)
    q[0] = 1 - x0**2
    q[1:3] = [-2*x0, -1][:max(order, 0)]
    inverse = np.zeros(order+1)
    inverse[0] = 1/q[0]
    for k in range(1, order+1):
        inverse[k] = -np.dot(q[1:k+1], inverse[k-1::-1][:k])/q[0]
    exponent = -inverse
    exponent[0] += 1
    window = np.zeros(order+1)
    window[0] = math.exp(exponent[0])
    for k in range(1, order+1):
        i = np.arange(1, k+1)
        window[k] = np.dot(i*exponent[i], window[k-i])/k
    omega = math.pi*params['frequency']
    j = np.arange(order+1)
    factorials = scipy.special.factorial(j)
    polynomial = np.zeros(order+1)
    for k, (a, b) in enumerate(params['coefficients']):
        phase = k*omega*x0 + j*math.pi/2
        polynomial += (k*omega)**j*(a*np.cos(phase) + b*np.sin(phase))
    taylor = np.convolve(window, polynomial/factorials)[:order+1]
    taylor = taylor/radius**j
    return np.asarray(params.get('amplitude', 1.0)*taylor, dtype=complex)


def _finite_taylor(function, order, name):
    grid = config['GRID']
    step, width = grid.get('fd_step'), int(grid.get('fd_width'))
    width = max(width, order)
    offsets = np.arange(-width, width+1)
    vander = np.vander(offsets, increasing=True).T
    coefficients = np.zeros(order+1, dtype=complex)
    for h in (step, 2*step):
        values = function(h*offsets)
        taylor = np.zeros(order+1, dtype=complex)
        for k in range(order+1):
            rhs = np.zeros(offsets.size)
            rhs[k] = 1.0
            weights = np.linalg.solve(vander, rhs)
            taylor[k] = np.dot(weights, values)/h**k
        if h == step:
            coefficients = taylor
            scale = np.max(np.abs(values))
        else:
            deviation = np.abs(coefficients-taylor)
            bound = 1e-4*(np.abs(coefficients)+scale+1e-300)
            if np.any(deviation > bound):
                message = (f'{name} is not {order} times differentiable '
                           f'at s = 0')
                raise SmoothnessError(message)
    return coefficients


def _refine_supremum(profile, index, value):
    best_value, best_shift = value, float(index)
    fine = index + np.arange(-8, 9)/8
    for shift in fine:
        current = profile(shift)
        if current > best_value:
            best_value, best_shift = current, float(shift)
    result = scipy.optimize.minimize_scalar(
        lambda shift: -profile(shift),
        bounds=(best_shift-1/8, best_shift+1/8), method='bounded',
        options={'xatol': 1e-7})
    if -result.fun > best_value:
        best_value, best_shift = float(-result.fun), float(result.x)
    return best_value, best_shift


def _raw_bump(x, radius):
    return bump(x/radius)


def _periodized(x, radius):
    y = x - np.floor(x)
    return sum(_raw_bump(y-j, radius) for j in (-1, 0, 1, 2))


def _frequencies(g):
    return 2*np.pi*np.fft.fftfreq(len(g), d=g.spacing)


def _apply_symbol(g, symbol):
    return np.fft.ifft(np.fft.fft(g.samples)*symbol)


def _check_tails(g, strict, diagnostics):
    tolerance = config['GRID'].get('tol_tail')*g.peak
    tails = max(abs(g.samples[0]), abs(g.samples[-1]))
    if tails <= tolerance:
        return
    message = f'{g} tails {tails:.3e} exceed {tolerance:.3e}'
    if strict:
        raise TailTruncation(message)
    logger.warning(message)
    if diagnostics is not None:
        diagnostics.append(message)


def _to_complex(value):
    if isinstance(value, (list, tuple)):
        return complex(*value)
    return complex(value)


def _to_complex_array(values):
    return np.array([_to_complex(value) for value in values], dtype=complex)
