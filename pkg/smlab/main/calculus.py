"""Contains the engines evaluating f(A) for operator models.

Every quadrature engine writes f(A) as a weighted sum of elementary kernels
k_j(A): resolvents for the Cauchy integral, wave operators e^(itA) for the
Fourier inversion, imaginary powers A^(it) for the Mellin inversion and
Bochner-Riesz means for the fractional reconstruction. Kernels are
evaluated on the spectral data of structured models and by dense matrix
functions for General models.
"""

import dataclasses as dc
import math

import numpy as np
import scipy.linalg
import scipy.special

from ..config import config
from ..logger import logger
from ..utils import utils

from .case import DIAGONAL, JORDAN, CIRCULANT, GENERAL, CUSTOM
from .case import SPECTRAL, CAUCHY, WAVE, MELLIN, BR, ENGINES
from .errors import ParameterError, PreconditionError, QuadratureError
from .errors import SmoothnessError, UnsupportedStructure
from .operators import OperatorModel
from .spaces import GridFunction, MultiplierFunction
from .spaces import exp_pullback, fractional_derivative, grid_defaults
from .spaces import stirling_transform, falling

chunk_size = 2**14
max_padding = 2**12
max_halvings = 4


@dc.dataclass(frozen=True, eq=False)
class CalculusResult:
    """Matrix f(A) with the report of the quadrature behind it."""

    value: np.ndarray
    engine: str
    quadrature_report: dict = dc.field(default_factory=dict)
    refinement_delta: float = None

    def __str__(self):
        return f'[{self.engine}:{self.value.shape[0]}]'

    def deviation(self, other):
        """Get the relative Frobenius distance to another result."""
        other = other.value if isinstance(other, CalculusResult) else other
        scale = np.linalg.norm(other)
        difference = np.linalg.norm(self.value-other)
        return float(difference/scale) if scale > 0 else float(difference)

    def to_json(self):
        entries = [[value.real, value.imag] for value in self.value.ravel()]
        return {'engine': self.engine, 'n': self.value.shape[0],
                'entries': entries,
                'quadrature_report': utils.to_json(self.quadrature_report),
                'refinement_delta': self.refinement_delta}


def spectral_apply(A, f):
    """Evaluate f(A) exactly from the spectral data of the model.

    Parameters
    ----------
    A : OperatorModel
        Diagonal, Circulant or JordanExp model.
    f : MultiplierFunction
        Multiplier; on JordanExp(m) f(e^s) must be m times differentiable
        at 0.

    Returns
    -------
    result : CalculusResult
        The oracle value.
    """
    if A.structure == GENERAL:
        raise UnsupportedStructure(f'{A} has no spectral oracle')
    value = A.evaluate(f)
    return CalculusResult(value, SPECTRAL,
                          {'points': 0, 'truncation': None, 'tail_error': 0.0})


def cauchy_apply(A, f, sigma=math.pi/4, step=None, span=None):
    """Evaluate f(A) by the Cauchy integral over the sector boundary.

    Both rays r*exp(-i*sigma) and r*exp(i*sigma) are traversed
    counterclockwise around (0, inf) with the trapezoid rule in log r.

    Parameters
    ----------
    A : OperatorModel
        Model of any structure.
    f : MultiplierFunction
        Holomorphic on a sector larger than sigma, decaying at 0 and inf.
    sigma : float, optional
        Half-angle of the contour in (0, pi).
    step : float, optional
        Step in log r, CALCULUS contour_step by default.
    span : float, optional
        Extension in log r beyond the spectrum, CALCULUS contour_span by
        default.

    Returns
    -------
    result : CalculusResult
        Contour value with points, truncation range and tail estimate.
    """
    if not 0 < sigma < math.pi:
        raise ParameterError(f'sigma must lie in (0, pi), not {sigma}')
    angle = f.holomorphy_angle
    if angle is None or not angle > sigma:
        message = f'{f} is not holomorphic beyond the sector {sigma:.4f}'
        raise PreconditionError(message)
    if not (f.decay_at_zero and f.decay_at_infinity):
        raise PreconditionError(f'{f} does not decay at 0 and infinity')
    if A.certificate is None:
        A = A.certify(angles=(sigma,))
    options = config['CALCULUS']
    step = step or options.get('contour_step')
    span = span or options.get('contour_span')
    low = math.log(A.spectrum.min()) - span
    high = math.log(A.spectrum.max()) + span
    count = int(math.ceil((high-low)/step)) + 1
    x = np.linspace(low, high, count)
    dx = x[1] - x[0]
    trapezoid = np.full(count, dx)
    trapezoid[[0, -1]] = dx/2
    lower = np.exp(x)*np.exp(-1j*sigma)
    upper = np.exp(x)*np.exp(1j*sigma)
    nodes = np.concatenate([lower, upper])
    weights = np.concatenate([f(lower)*lower*trapezoid,
                              -f(upper)*upper*trapezoid])/(2j*np.pi)
    value = _superpose(A, nodes, weights, _resolvent_kernel,
                       _resolvent_derivatives, _resolvent_general(A))
    ends = np.array([0, count-1, count, 2*count-1])
    tail = _superpose(A, nodes[ends], weights[ends]/trapezoid[0],
                      _resolvent_kernel, _resolvent_derivatives,
                      _resolvent_general(A))
    report = {'points': 2*count, 'truncation': [low, high],
              'tail_error': float(np.linalg.norm(tail))}
    return _checked(CalculusResult(value, CAUCHY, report), A, f)


def wave_apply(A, f, points=None):
    """Evaluate f(A) = (1/2pi) int fhat(t) exp(itA) dt.

    f is sampled in λ on [0, P) with P >= 4*max spectrum and twice the
    right end of supp f, its transform is taken by FFT and the
    superposition of wave operators uses the same nodes.
    """
    support = f.support
    if support is None or not support[0] > 0:
        message = f'{f} has no compact support away from 0'
        raise PreconditionError(message)
    grid = config['GRID']
    lowest, highest = math.exp(grid.get('lower')), math.exp(grid.get('upper'))
    if support[0] < lowest or support[1] > highest:
        raise PreconditionError(f'{f} support {support} exceeds the grid')
    points = int(points or config['CALCULUS'].get('wave_points'))
    period = max(4*A.spectrum.max(), 2*support[1])
    spacing = period/points
    if not spacing <= math.pi/(2*A.spectrum.max()):
        raise PreconditionError(f'{points} wave points do not resolve {A}')
    lam = spacing*np.arange(points)
    inside = (lam > support[0]) & (lam < support[1])
    samples = np.zeros(points, dtype=complex)
    samples[inside] = f(lam[inside])
    transform = spacing*np.fft.fft(samples)
    nodes = 2*np.pi*np.fft.fftfreq(points, spacing)
    weights = transform/period
    growth = (1+np.abs(nodes))**_growth_order(A)
    value = _superpose(A, nodes, weights, _wave_kernel, _wave_derivatives,
                       lambda nodes, weights: _group_general(
                           scipy.linalg.expm(1j*(nodes[1]-nodes[0])*A.matrix),
                           points, weights))
    report = {'points': points, 'truncation': [float(nodes.min()),
                                               float(nodes.max())],
              'tail_error': _tail_error(weights, growth)}
    return _checked(CalculusResult(value, WAVE, report), A, f)


def mellin_apply(A, f, spacing=None):
    """Evaluate f(A) = (1/2pi) int (f_e)^(t) A^(it) dt.

    The transform of f_e is taken by FFT on the default s-grid; tails of
    f_e must be negligible at both grid ends. On models whose imaginary
    powers grow polynomially the step is halved, at most max_halvings
    times, until the growth-weighted frequency tail meets the tolerance.
    """
    spacing = spacing or config['CALCULUS'].get('mellin_spacing')
    tolerance = config['CALCULUS'].get('tolerance')
    result = _mellin_sum(A, f, spacing)
    for _ in range(max_halvings if _growth_order(A) else 0):
        tail = result.quadrature_report['tail_error']
        if tail <= tolerance*max(np.linalg.norm(result.value), 1.0):
            break
        spacing /= 2
        logger.debug(f'{A} Mellin tail {tail:.3e}, step down to {spacing:g}')
        result = _mellin_sum(A, f, spacing)
    return _checked(result, A, f)


def mellin_spacing(points):
    """Get the s-step of a Mellin evaluation with the given point count."""
    origin, default_spacing, count = grid_defaults()
    return (count-1)*default_spacing/(points-1)


def _mellin_sum(A, f, spacing):
    origin, default_spacing, count = grid_defaults()
    count = int(round((count-1)*default_spacing/spacing)) + 1
    pullback = exp_pullback(f, origin, spacing, count)
    tolerance = config['GRID'].get('tol_tail')*pullback.peak
    tails = max(abs(pullback.samples[0]), abs(pullback.samples[-1]))
    if pullback.peak == 0 or tails > tolerance:
        message = f'{f} does not decay at the ends of the log grid'
        raise PreconditionError(message)
    nodes = 2*np.pi*np.fft.fftfreq(count, spacing)
    transform = spacing*np.exp(-1j*nodes*origin)*np.fft.fft(pullback.samples)
    weights = transform/(count*spacing)
    growth = (1+np.abs(nodes))**_growth_order(A)

    def general(nodes, weights):
        logarithm = scipy.linalg.logm(A.matrix)
        generator = scipy.linalg.expm(1j*(nodes[1]-nodes[0])*logarithm)
        return _group_general(generator, count, weights)

    value = _superpose(A, nodes, weights, _power_kernel, _power_derivatives,
                       general)
    report = {'points': count, 'truncation': [float(nodes.min()),
                                              float(nodes.max())],
              'tail_error': _tail_error(weights, growth)}
    return CalculusResult(value, MELLIN, report)


def bochner_riesz_apply(A, f, alpha=2.5, points=None):
    """Reconstruct f(A) from Bochner-Riesz means.

    Evaluates (1/Gamma(alpha)) int D^alpha f(u) u^(alpha-1) R_u^(alpha-1)(A)
    du where D^alpha f is the fractional derivative of f in the λ variable
    and R_u^(alpha-1)(A) = (1-A/u)_+^(alpha-1).

    Parameters
    ----------
    A : OperatorModel
        Diagonal, Circulant or JordanExp model.
    f : MultiplierFunction
        Multiplier supported in [1/2, 2].
    alpha : float, optional
        Order of the reconstruction, above 1.
    points : int, optional
        Points of the linear u-grid, CALCULUS br_points by default.

    Returns
    -------
    result : CalculusResult
        Reconstructed value.
    """
    if not alpha > 1:
        raise ParameterError(f'alpha must be above 1, not {alpha}')
    if A.structure == GENERAL:
        raise UnsupportedStructure(f'{A} has no Bochner-Riesz means')
    support = f.support
    if (support is None or support[0] < 0.5*(1-1e-12)
            or support[1] > 2*(1+1e-12)):
        raise PreconditionError(f'{f} is not supported in [1/2, 2]')
    points = int(points or config['CALCULUS'].get('br_points'))
    low = min(A.spectrum.min(), 0.5)/2
    high = 2 + 1/32
    u = np.linspace(low, high, points)
    spacing = u[1] - u[0]
    inside = (u > support[0]) & (u < support[1])
    samples = np.zeros(points, dtype=complex)
    samples[inside] = f(u[inside])
    # Left tail of D^alpha f decays like d^(-alpha-1), its periodic image
    # must fall below the tolerance before it wraps onto [low, high].
    tolerance = config['CALCULUS'].get('tolerance')
    reach = (100/tolerance)**(1/(alpha+1))
    padding = max(config['CALCULUS'].get('fourier_padding'),
                  min(reach/(high-low), max_padding))
    extended = fractional_derivative(GridFunction(low, spacing, samples),
                                     alpha, padding)
    derivative = extended.samples[-points:]
    trapezoid = np.full(points, spacing)
    trapezoid[[0, -1]] = spacing/2
    measure = u**(alpha-1)*trapezoid/scipy.special.gamma(alpha)
    weights = derivative*measure
    exponent = alpha - 1

    def kernel(u, lam):
        return _bochner_riesz_kernel(u, lam, exponent)

    def derivatives(u, order):
        return _bochner_riesz_derivatives(u, order, exponent)

    value = _superpose(A, u, weights, kernel, derivatives)
    # D^alpha f vanishes right of supp f, the nodes there carry leakage only.
    outside = u > support[1]
    leakage = 0.0
    if np.any(outside):
        leakage = np.linalg.norm(_superpose(A, u[outside], weights[outside],
                                            kernel, derivatives))
    # Left tail is int f(t) (t-u)^(-alpha-1) dt/Gamma(-alpha), its periodic
    # image lies at least one extension length away from supp f.
    distance = len(extended)*spacing - (high-low)
    image = (np.sum(np.abs(samples))*spacing*distance**(-alpha-1)
             * abs(scipy.special.rgamma(-alpha))*np.sum(measure))
    report = {'points': points, 'truncation': [float(low), float(high)],
              'tail_error': float(leakage + image)}
    return _checked(CalculusResult(value, BR, report), A, f)


def strip_apply(B, g, engine=SPECTRAL, space_p=2.0, **options):
    """Evaluate g(B) as (g o log)(A) for the model A = e^B.

    Parameters
    ----------
    B : array_like
        Matrix with real spectrum.
    g : callable or MultiplierFunction
        Function in the strip variable; callables may carry the metadata
        keywords of MultiplierFunction in ``options``.
    engine : str, optional
        Engine evaluating the composite multiplier.
    space_p : float, optional
        Ambient ℓᵖ exponent of A.
    **options
        Engine options and MultiplierFunction metadata
        (holomorphy_angle, decay_at_zero, decay_at_infinity).

    Returns
    -------
    result : CalculusResult
        Value of the engine.
    """
    A = OperatorModel.from_logarithm(B, space_p)
    metadata = {key: options.pop(key) for key in ('holomorphy_angle',
                                                  'decay_at_zero',
                                                  'decay_at_infinity')
                if key in options}
    f = MultiplierFunction(CUSTOM, {}, function=lambda lam: g(np.log(lam)),
                           **metadata)
    return apply(engine, A, f, **options)


def semigroup_bochner_riesz(A, u, nu, step=None):
    """Reconstruct (1-A/u)_+^nu from the semigroup.

    Uses R_u^nu(A) = u^-nu Gamma(nu+1)/(2 pi i) int_{Re z = 1/u}
    exp(-zA) z^(-nu-1) exp(uz) dz with the trapezoid rule on the vertical
    line, truncated where the algebraic tail falls below the tolerance.
    """
    if not u > 0:
        raise ParameterError(f'u must be positive, not {u}')
    if not nu >= 1:
        raise ParameterError(f'nu must be at least 1, not {nu}')
    if A.structure == GENERAL:
        raise UnsupportedStructure(f'{A} has no spectral semigroup')
    tolerance = config['CALCULUS'].get('tolerance')
    shift = 1/u
    step = step or shift/8
    factor = scipy.special.gamma(nu+1)*math.e/(2*math.pi*nu)
    height = (factor/tolerance)**(1/nu)
    count = min(int(math.ceil(height/step)), 2**21)
    height = count*step
    y = step*np.arange(-count, count+1)
    z = shift + 1j*y
    weights = (z**(-nu-1)*np.exp(u*z)*step/(2*np.pi)
               * u**(-nu)*scipy.special.gamma(nu+1))
    value = _superpose(A, z, weights, _semigroup_kernel,
                       _semigroup_derivatives)
    tail = factor*u**(-nu)*height**(-nu)
    report = {'points': y.size, 'truncation': [-height, height],
              'tail_error': float(tail)}
    if tail > 1e3*tolerance:
        logger.warning(f'{A} semigroup reconstruction tail {tail:.3e}')
    return CalculusResult(value, 'semigroup', report)


def apply(engine, A, f, **options):
    """Dispatch to the engine with the given name."""
    if engine not in ENGINES:
        raise ParameterError(f'unknown engine {engine}')
    function = {SPECTRAL: spectral_apply, CAUCHY: cauchy_apply,
                WAVE: wave_apply, MELLIN: mellin_apply,
                BR: bochner_riesz_apply}[engine]
    return function(A, f, **options)


def refine(engine, A, f, **options):
    """Evaluate an engine at its configured and at half of its step.

    Returns
    -------
    coarse, fine : CalculusResult
        Results at both resolutions, fine carrying refinement_delta.
    """
    coarse = apply(engine, A, f, **options)
    fine_options = dict(options)
    calculus = config['CALCULUS']
    if engine == CAUCHY:
        fine_options['step'] = options.get('step',
                                           calculus.get('contour_step'))/2
    elif engine == WAVE:
        fine_options['points'] = 2*options.get('points',
                                               calculus.get('wave_points'))
    elif engine == MELLIN:
        points = coarse.quadrature_report['points']
        fine_options['spacing'] = mellin_spacing(points)/2
    elif engine == BR:
        fine_options['points'] = 2*options.get('points',
                                               calculus.get('br_points'))
    else:
        return coarse, dc.replace(coarse, refinement_delta=0.0)
    fine = apply(engine, A, f, **fine_options)
    delta = fine.deviation(coarse)
    return coarse, dc.replace(fine, refinement_delta=delta)


def _superpose(A, nodes, weights, kernel, derivatives, general=None):
    nodes = np.asarray(nodes)
    weights = np.asarray(weights, dtype=complex)
    if A.structure in (DIAGONAL, CIRCULANT):
        values = np.zeros(A.spectrum.size, dtype=complex)
        for start in range(0, nodes.size, chunk_size):
            chunk = slice(start, start+chunk_size)
            values += weights[chunk] @ kernel(nodes[chunk, None],
                                              A.spectrum[None, :])
        return A.assemble(values=values)
    elif A.structure == JORDAN:
        order = A.order
        values = np.zeros(order+1, dtype=complex)
        for start in range(0, nodes.size, chunk_size):
            chunk = slice(start, start+chunk_size)
            values += weights[chunk] @ derivatives(nodes[chunk], order)
        return A.assemble(taylor=stirling_transform(values))
    elif general is not None:
        return general(nodes, weights)
    raise UnsupportedStructure(f'{A} is not supported by this engine')


def _resolvent_kernel(z, lam):
    return 1/(z-lam)


def _resolvent_derivatives(z, order):
    i = np.arange(order+1)
    return scipy.special.factorial(i)/(z[:, None]-1)**(i+1)


def _resolvent_general(A):

    def general(nodes, weights):
        identity = np.eye(A.n)
        total = np.zeros((A.n, A.n), dtype=complex)
        for start in range(0, nodes.size, chunk_size):
            chunk = slice(start, start+chunk_size)
            shifted = nodes[chunk, None, None]*identity - A.matrix
            inverses = np.linalg.solve(
                shifted, np.broadcast_to(identity, shifted.shape))
            total += np.tensordot(weights[chunk], inverses, axes=1)
        return total

    return general


def _wave_kernel(t, lam):
    return np.exp(1j*t*lam)


def _wave_derivatives(t, order):
    i = np.arange(order+1)
    return (1j*t[:, None])**i*np.exp(1j*t[:, None])


def _power_kernel(t, lam):
    return np.exp(1j*t*np.log(lam))


def _power_derivatives(t, order):
    values = np.ones((t.size, order+1), dtype=complex)
    for j in range(1, order+1):
        values[:, j] = values[:, j-1]*(1j*t-j+1)
    return values


def _semigroup_kernel(z, lam):
    return np.exp(-z*lam)


def _semigroup_derivatives(z, order):
    i = np.arange(order+1)
    return (-z[:, None])**i*np.exp(-z[:, None])


def _bochner_riesz_kernel(u, lam, exponent):
    rest = 1 - lam/u
    inside = rest > 0
    return np.where(inside, np.where(inside, rest, 1.0)**exponent, 0.0)


def _bochner_riesz_derivatives(u, order, exponent):
    i = np.arange(order+1)
    rest = (1 - 1/u)[:, None]
    exponents = exponent - i[None, :]
    if np.any((rest == 0) & (exponents <= 0)):
        message = (f'(1-λ/u)_+^{exponent} is not {order} times '
                   f'differentiable at a quadrature node')
        raise SmoothnessError(message)
    factors = falling(exponent, order)[None, :]*(-1/u[:, None])**i
    inside = rest > 0
    powers = np.where(inside, np.where(inside, rest, 1.0)**exponents, 0.0)
    return factors*powers


def _group_general(generator, count, weights):
    """Sum weights_j G^k_j over FFT-ordered integer exponents k_j."""
    exponents = np.rint(np.fft.fftfreq(count)*count).astype(int)
    position = {int(k): j for j, k in enumerate(exponents)}
    n = generator.shape[0]
    total = np.zeros((n, n), dtype=complex)
    for matrix, sign in ((generator, 1), (np.linalg.inv(generator), -1)):
        power = np.eye(n, dtype=complex)
        for k in range(count//2+1):
            if k > 0:
                power = power @ matrix
            j = position.get(sign*k)
            if j is not None and not (k == 0 and sign < 0):
                total += weights[j]*power
    return total


def _growth_order(A):
    if A.structure == JORDAN:
        return A.order
    elif A.structure == GENERAL:
        return A.n - 1
    return 0


def _tail_error(weights, growth):
    count = weights.size
    outer = np.abs(np.fft.fftfreq(count)) >= 3/8
    return float(np.sum(np.abs(weights[outer])*growth[outer]))


def _checked(result, A, f):
    tolerance = config['CALCULUS'].get('tolerance')
    tail = result.quadrature_report['tail_error']
    if not math.isfinite(tail) or tail < 0:
        raise QuadratureError(f'{result} has an invalid tail estimate')
    scale = max(np.linalg.norm(result.value), 1.0)
    if tail > tolerance*scale:
        message = (f'{result} of {f} on {A} has tail error {tail:.3e} '
                   f'above {tolerance:.1e}')
        raise QuadratureError(message)
    logger.debug(f'{A} {result} of {f} tail {tail:.3e}')
    return result
