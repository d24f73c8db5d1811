"""Contains finite-dimensional sectorial operator models and families."""

import dataclasses as dc
import math

import numpy as np
import scipy.linalg
import scipy.optimize
import scipy.special

from ..logger import logger
from ..utils import utils

from .case import DIAGONAL, JORDAN, CIRCULANT, GENERAL, STRUCTURES
from .case import SEMIGROUP, WAVE_FAMILY, IMAGINARY_POWERS
from .case import BOCHNER_RIESZ_FAMILY, RESOLVENT, GROUP, FAMILIES
from .case import SECTOR_EXP, WAVE_REGULARIZED, IMAGINARY_POWER
from .case import BOCHNER_RIESZ, RATIONAL
from .errors import ParameterError, SpectrumError, CertificateError
from .errors import UnsupportedStructure
from .spaces import standard_family


@dc.dataclass(frozen=True)
class NormBracket:
    """Operator norm on ℓᵖ enclosed between two values."""

    lower: float
    upper: float
    exact: bool

    def __str__(self):
        if self.exact:
            return f'{self.lower:.6g}'
        return f'[{self.lower:.6g}, {self.upper:.6g}]'


@dc.dataclass(frozen=True)
class SectorialityCertificate:
    """Observed resolvent bounds on the boundaries of sectors."""

    angles: tuple
    bounds: tuple
    hinf_bound: float = None

    def bound(self, angle):
        """Get the bound recorded for the given angle."""
        for current, bound in zip(self.angles, self.bounds):
            if math.isclose(current, angle):
                return bound
        raise KeyError(angle)

    def to_json(self):
        return {'angles': list(self.angles), 'bounds': list(self.bounds),
                'hinf_bound': self.hinf_bound}


@dc.dataclass(frozen=True, eq=False)
class OperatorModel:
    """Dense complex matrix acting on ℓᵖ_n with a structure tag.

    Parameters
    ----------
    matrix : numpy.ndarray
        Complex n x n matrix.
    space_p : float
        Exponent of the ambient ℓᵖ_n norm.
    structure : str
        Diagonal, JordanExp, Circulant or General.
    spectrum : numpy.ndarray
        Eigenvalues for Diagonal, the nonzero Fourier mode values k = 1..n-1
        for Circulant, the single eigenvalue 1 for JordanExp.
    symbol : tuple, optional
        Circulant symbol 4sin²(πk/N), k = 1..N-1.
    certificate : SectorialityCertificate, optional
        Cached result of certify_sectoriality.
    """

    matrix: np.ndarray
    space_p: float = 2.0
    structure: str = GENERAL
    spectrum: np.ndarray = None
    symbol: tuple = None
    certificate: SectorialityCertificate = None

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex, ndmin=2)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ParameterError(f'matrix must be square, not {matrix.shape}')
        if not 1 <= self.space_p < math.inf:
            message = f'space_p must be in [1, inf), not {self.space_p}'
            raise ParameterError(message)
        if self.structure not in STRUCTURES:
            raise ParameterError(f'unknown structure {self.structure}')
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'space_p', float(self.space_p))
        spectrum = self.spectrum
        if spectrum is None:
            spectrum = scipy.linalg.eigvals(matrix)
        spectrum = np.asarray(spectrum, dtype=complex)
        scale = max(np.max(np.abs(spectrum)), 1.0)
        if (np.any(np.abs(spectrum.imag) > 1e-8*scale)
                or np.any(spectrum.real <= 0)):
            message = f'spectrum of {self} leaves (0, inf)'
            raise SpectrumError(message)
        object.__setattr__(self, 'spectrum', spectrum.real.copy())

    def __str__(self):
        return f'[{self.structure}:{self.n}@l{self.space_p:g}]'

    __repr__ = __str__

    @property
    def n(self):
        """Get the dimension."""
        return self.matrix.shape[0]

    @property
    def order(self):
        """Get m of a JordanExp(m) model."""
        if self.structure == JORDAN:
            return self.n - 1
        return None

    @property
    def type_p(self):
        """Get the Rademacher type of ℓᵖ_n."""
        return min(self.space_p, 2.0)

    @property
    def cotype(self):
        """Get the Rademacher cotype of ℓᵖ_n."""
        return max(self.space_p, 2.0)

    def norm(self, matrix=None):
        """Get the ℓᵖ_n operator norm bracket of a matrix or of the model."""
        return lp_norm(self.matrix if matrix is None else matrix,
                       self.space_p)

    def assemble(self, values=None, taylor=None):
        """Build a matrix function from its spectral data.

        Parameters
        ----------
        values : array_like, optional
            Function values at ``spectrum`` for Diagonal and Circulant.
        taylor : array_like, optional
            Taylor coefficients of f(e^s) at s = 0 for JordanExp.

        Returns
        -------
        matrix : numpy.ndarray
            The matrix f(A).
        """
        if self.structure == DIAGONAL:
            return np.diag(np.asarray(values, dtype=complex))
        elif self.structure == CIRCULANT:
            modes = np.concatenate([[0], np.asarray(values, dtype=complex)])
            return scipy.linalg.circulant(np.fft.ifft(modes))
        elif self.structure == JORDAN:
            taylor = np.asarray(taylor, dtype=complex)[:self.n]
            column = np.zeros(self.n, dtype=complex)
            column[0] = taylor[0]
            return scipy.linalg.toeplitz(column, taylor)
        raise UnsupportedStructure(f'{self} has no spectral decomposition')

    def evaluate(self, f):
        """Get f(A) exactly from the spectral data of the model."""
        if self.structure in (DIAGONAL, CIRCULANT):
            return self.assemble(values=f(self.spectrum))
        elif self.structure == JORDAN:
            return self.assemble(taylor=f.log_taylor(self.order))
        raise UnsupportedStructure(f'{self} supports no spectral evaluation')

    def certify(self, angles=None, boundary_samples=64, sigma=None):
        """Get a copy of the model carrying its sectoriality certificate."""
        certificate = certify_sectoriality(self, angles, boundary_samples,
                                           sigma)
        return dc.replace(self, certificate=certificate)

    def to_json(self):
        """Get the JSON descriptor {n, space_p, structure, entries}."""
        entries = [[value.real, value.imag] for value in self.matrix.ravel()]
        return {'n': self.n, 'space_p': self.space_p,
                'structure': self.structure, 'entries': entries}

    @classmethod
    def from_json(cls, descriptor):
        """Build model from the JSON descriptor."""
        n, matrix = _read_matrix(descriptor)
        space_p = float(descriptor.get('space_p', 2))
        structure = descriptor.get('structure', GENERAL)
        if structure == DIAGONAL:
            if np.any(matrix != np.diag(np.diag(matrix))):
                raise ParameterError('Diagonal model has off-diagonal entries')
            return diagonal_model(np.diag(matrix).real, space_p)
        elif structure == JORDAN:
            model = jordan_model(n-1, space_p)
            if not np.allclose(model.matrix, matrix, rtol=0, atol=1e-12):
                raise ParameterError('JordanExp entries differ from e^B')
            return model
        elif structure == CIRCULANT:
            column = matrix[:, 0]
            if not np.allclose(scipy.linalg.circulant(column), matrix):
                raise ParameterError('Circulant model is not circulant')
            modes = np.fft.fft(column)
            if abs(modes[0]) > 1e-12*max(np.max(np.abs(modes)), 1.0):
                raise ParameterError('Circulant model must annihilate '
                                     'constants')
            return OperatorModel(matrix, space_p, CIRCULANT, modes[1:])
        return general_model(matrix, space_p)

    @classmethod
    def from_logarithm(cls, logarithm, space_p=2.0):
        """Build the model e^B from its logarithm B."""
        logarithm = np.array(logarithm, dtype=complex, ndmin=2)
        n = logarithm.shape[0]
        if np.all(logarithm == np.diag(np.diag(logarithm))):
            diagonal = np.diag(logarithm)
            if np.any(np.abs(diagonal.imag) > 0):
                raise SpectrumError('logarithm must have a real spectrum')
            return diagonal_model(np.exp(diagonal.real), space_p)
        if n > 1 and np.array_equal(logarithm, np.eye(n, k=1)):
            return jordan_model(n-1, space_p)
        return general_model(scipy.linalg.expm(logarithm), space_p)


@dc.dataclass(frozen=True, eq=False)
class OperatorFamily:
    """Labelled list of (parameter, matrix) pairs on one ℓᵖ_n."""

    label: str
    members: tuple
    space_p: float = 2.0

    def __post_init__(self):
        members = tuple((param, np.array(matrix, dtype=complex, ndmin=2))
                        for param, matrix in self.members)
        if not members:
            raise ParameterError('family must have at least one member')
        shape = members[0][1].shape
        if any(matrix.shape != shape for _, matrix in members):
            raise ParameterError(f'members of {self.label} differ in shape')
        object.__setattr__(self, 'members', members)

    def __str__(self):
        return f'[{self.label}:{len(self)}@l{self.space_p:g}]'

    __repr__ = __str__

    def __len__(self):
        return len(self.members)

    @property
    def params(self):
        return [param for param, _ in self.members]

    @property
    def matrices(self):
        return [matrix for _, matrix in self.members]

    @property
    def n(self):
        return self.members[0][1].shape[0]

    def norms(self):
        """Get the ℓᵖ norm brackets of all members."""
        return [lp_norm(matrix, self.space_p) for matrix in self.matrices]

    def scaled(self, factor):
        """Get the family {factor*T_j}."""
        members = [(param, factor*matrix) for param, matrix in self.members]
        return OperatorFamily(self.label, members, self.space_p)

    def union(self, other):
        """Get the family holding the members of both families."""
        if other.space_p != self.space_p or other.n != self.n:
            raise ParameterError(f'{self} and {other} do not share a space')
        label = f'{self.label}+{other.label}'
        return OperatorFamily(label, self.members+other.members, self.space_p)

    def scalar_identities(self):
        """Get a_j when every member is a real multiple a_j*I, else None."""
        identity = np.eye(self.n)
        scalars = []
        for matrix in self.matrices:
            value = matrix[0, 0]
            if (abs(value.imag) > 0
                    or not np.array_equal(matrix, value*identity)):
                return None
            scalars.append(value.real)
        return scalars

    def to_json(self):
        """Get the JSON array of {param, operator}."""
        return [{'param': utils.to_json(param),
                 'operator': {'n': self.n, 'space_p': self.space_p,
                              'structure': GENERAL,
                              'entries': utils.to_json(matrix.ravel())}}
                for param, matrix in self.members]

    @classmethod
    def from_json(cls, descriptor, label='family'):
        """Build family from the JSON array of {param, operator}."""
        if not isinstance(descriptor, list) or not descriptor:
            raise ParameterError('family must be a nonempty JSON array')
        members, spaces = [], set()
        for item in descriptor:
            operator = item.get('operator') if isinstance(item, dict) else None
            _, matrix = _read_matrix(operator)
            spaces.add(float(operator.get('space_p', 2)))
            param = item.get('param')
            if isinstance(param, list):
                param = tuple(param)
            members.append((param, matrix))
        if len(spaces) != 1:
            raise ParameterError('family members live on different spaces')
        return cls(label, members, spaces.pop())


def lp_norm(matrix, p, iterations=50):
    """Compute the ℓᵖ operator norm of a matrix.

    Parameters
    ----------
    matrix : numpy.ndarray
        Complex square or rectangular matrix.
    p : float
        Exponent in [1, inf].
    iterations : int, optional
        Budget of the dual power iteration.

    Returns
    -------
    bracket : NormBracket
        Exact value for p in {1, 2, inf}; otherwise a lower bound attained
        by an explicit vector and the Riesz-Thorin upper bound.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if p == 1:
        value = float(np.max(np.sum(np.abs(matrix), axis=0)))
        return NormBracket(value, value, True)
    elif p == math.inf:
        value = float(np.max(np.sum(np.abs(matrix), axis=1)))
        return NormBracket(value, value, True)
    elif p == 2:
        value = float(np.linalg.norm(matrix, 2))
        return NormBracket(value, value, True)
    elif not p > 1:
        raise ParameterError(f'p must be in [1, inf], not {p}')
    one, two, infinity = (lp_norm(matrix, q).lower for q in (1, 2, math.inf))
    upper = one**(1/p)*infinity**(1-1/p)
    if p < 2:
        upper = min(upper, one**(2/p-1)*two**(2-2/p))
    else:
        upper = min(upper, two**(2/p)*infinity**(1-2/p))
    lower, _ = _dual_power_iteration(matrix, p, iterations)
    if lower > upper*(1+1e-12):
        logger.warning(f'l{p} norm bracket [{lower}, {upper}] does not close')
    return NormBracket(lower, max(upper, lower), False)


def dual_vector(y, p):
    """Get the unit ℓ^q vector z with <z, y> = ||y||_p, 1/p + 1/q = 1."""
    norm = np.linalg.norm(y, p)
    if norm == 0:
        return np.zeros_like(y)
    return np.abs(y/norm)**(p-1)*np.exp(1j*np.angle(y))


def norm_vector(matrix, p):
    """Get a unit vector x with ||Tx||_p equal to the lower norm bound."""
    matrix = np.asarray(matrix, dtype=complex)
    n = matrix.shape[1]
    if p == 1:
        column = int(np.argmax(np.sum(np.abs(matrix), axis=0)))
        return np.eye(n, dtype=complex)[column]
    elif p == math.inf:
        row = int(np.argmax(np.sum(np.abs(matrix), axis=1)))
        return np.exp(-1j*np.angle(matrix[row]))
    elif p == 2:
        _, _, vh = np.linalg.svd(matrix)
        return vh[0].conj()
    _, vector = _dual_power_iteration(matrix, p, 50)
    return vector


def diagonal_model(spectrum, space_p=2.0):
    """Build the Diagonal model with the given positive eigenvalues."""
    spectrum = np.asarray(spectrum, dtype=float).ravel()
    if spectrum.size == 0:
        raise ParameterError('spectrum must not be empty')
    if np.any(~(spectrum > 0)):
        raise SpectrumError(f'spectrum {spectrum.tolist()} is not positive')
    return OperatorModel(np.diag(spectrum), space_p, DIAGONAL, spectrum)


def jordan_model(m, space_p=2.0):
    """Build A = e^B for B the (m+1)x(m+1) nilpotent Jordan block."""
    if not isinstance(m, int) or m < 1:
        raise ParameterError(f'm must be a positive integer, not {m}')
    taylor = 1/scipy.special.factorial(np.arange(m+1))
    matrix = scipy.linalg.toeplitz(np.eye(m+1)[0], taylor)
    return OperatorModel(matrix, space_p, JORDAN, np.ones(1))


def circulant_laplacian(N, space_p=2.0):
    """Build the discrete Laplacian on ℓᵖ(Z_N) without its zero mode.

    The matrix is the N x N second-difference circulant with the stencil
    (2, -1, 0, ..., 0, -1). Its spectrum lists the nonzero symbol values
    4sin²(πk/N), k = 1..N-1, in Fourier order, and functions of the model
    vanish on constants: f(A) = F^-1 diag(0, f(σ_1), ..., f(σ_N-1)) F.
    """
    if not isinstance(N, int) or N < 3:
        raise ParameterError(f'N must be an integer >= 3, not {N}')
    column = np.zeros(N)
    column[0], column[1], column[-1] = 2.0, -1.0, -1.0
    symbol = 4*np.sin(np.pi*np.arange(1, N)/N)**2
    return OperatorModel(scipy.linalg.circulant(column), space_p, CIRCULANT,
                         symbol, tuple(symbol.tolist()))


def general_model(matrix, space_p=2.0):
    """Build a General model from a matrix with positive spectrum."""
    return OperatorModel(matrix, space_p, GENERAL)


def certify_sectoriality(A, angles=None, boundary_samples=64, sigma=None):
    """Sample ||λ(λ-A)^-1|| along the boundaries of sectors.

    Parameters
    ----------
    A : OperatorModel
        Model to certify.
    angles : list, optional
        Sector half-angles in (0, pi), by default pi/4, pi/2, 3pi/4.
    boundary_samples : int, optional
        Log-spaced radii per ray, at least 64.
    sigma : float, optional
        When given, ||f(A)|| is also sampled over unit functions
        λ^(it)·e^(-|t|sigma) of H∞ on the sector of angle sigma.

    Returns
    -------
    certificate : SectorialityCertificate
        Largest sampled value per angle, refined around the best sample.
    """
    angles = tuple(float(a) for a in (angles or (np.pi/4, np.pi/2,
                                                 3*np.pi/4)))
    if any(not 0 < angle < np.pi for angle in angles):
        raise ParameterError(f'angles must lie in (0, pi), not {angles}')
    if boundary_samples < 64:
        message = f'boundary_samples must be >= 64, not {boundary_samples}'
        raise ParameterError(message)
    spectrum = np.abs(A.spectrum)
    low = math.log(spectrum.min()/1e3)
    high = math.log(spectrum.max()*1e3)
    radii = np.linspace(low, high, boundary_samples)
    identity = np.eye(A.n)

    def resolvent(log_radius, angle):
        values = []
        for sign in (1, -1):
            lam = math.exp(log_radius)*np.exp(sign*1j*angle)
            if A.structure == CIRCULANT:
                scaled = A.assemble(values=lam/(lam-A.spectrum))
                values.append(A.norm(scaled).upper)
                continue
            try:
                inverse = np.linalg.solve(lam*identity-A.matrix, identity)
            except np.linalg.LinAlgError as error:
                message = f'{A} resolvent is singular at {lam}'
                raise CertificateError(message) from error
            if not np.all(np.isfinite(inverse)):
                raise CertificateError(f'{A} resolvent overflows at {lam}')
            values.append(A.norm(lam*inverse).upper)
        return max(values)

    bounds = []
    for angle in angles:
        samples = [resolvent(radius, angle) for radius in radii]
        best = int(np.argmax(samples))
        step = radii[1] - radii[0]
        result = scipy.optimize.minimize_scalar(
            lambda radius: -resolvent(radius, angle),
            bounds=(radii[best]-step, radii[best]+step), method='bounded')
        bound = max(samples[best], -result.fun)
        logger.debug(f'{A} sector {angle:.4f} resolvent bound {bound:.6g}')
        bounds.append(float(bound))
    hinf_bound = None
    if sigma is not None:
        norms = []
        for t in (1.0, 2.0, 4.0, 8.0):
            power = standard_family(IMAGINARY_POWER, {'t': t})
            power = power.scaled(math.exp(-abs(t)*sigma))
            norms.append(A.norm(A.evaluate(power)).upper)
        hinf_bound = float(max(norms))
    return SectorialityCertificate(angles, tuple(bounds), hinf_bound)


def elementary_family(A, kind, parameter_grid, alpha=0.0, epsilon=1.0):
    """Evaluate an elementary operator family on a parameter grid.

    Parameters
    ----------
    A : OperatorModel
        Model supporting spectral evaluation.
    kind : str
        Semigroup with (theta, t) pairs, Wave with s, ImaginaryPowers with
        t, BochnerRiesz with u, Resolvent with Re z on the line
        Im z = epsilon, Group with t.
    parameter_grid : list
        Finite parameter grid.
    alpha : float, optional
        Exponent of the scalar prefactor, the Bochner-Riesz exponent for
        BochnerRiesz.
    epsilon : float, optional
        Height of the Resolvent line.

    Returns
    -------
    family : OperatorFamily
        Members ordered by parameter.
    """
    if kind not in FAMILIES:
        raise ParameterError(f'unknown family kind {kind}')
    grid = sorted(tuple(item) if isinstance(item, (list, tuple)) else item
                  for item in parameter_grid)
    if not grid:
        raise ParameterError('parameter grid must not be empty')
    if A.certificate is None:
        A = A.certify()

    def member(param):
        f = elementary_multiplier(kind, param, alpha, epsilon)
        return (param, A.evaluate(f))

    members = utils.parallel(member, grid, name='Member')
    label = f'{kind}({alpha:g})'
    logger.debug(f'{A} family {label} with {len(members)} members')
    return OperatorFamily(label, members, A.space_p)


def elementary_multiplier(kind, param, alpha=0.0, epsilon=1.0):
    """Get the multiplier generating one member of an elementary family."""
    if kind == SEMIGROUP:
        theta, t = param
        f = standard_family(SECTOR_EXP, {'theta': theta}).dilate(t)
        return f.scaled((np.pi/2-abs(theta))**alpha)
    elif kind == WAVE_FAMILY:
        return standard_family(WAVE_REGULARIZED, {'s': param, 'alpha': alpha})
    elif kind == IMAGINARY_POWERS:
        f = standard_family(IMAGINARY_POWER, {'t': param})
        return f.scaled((1+param**2)**(-alpha/2))
    elif kind == BOCHNER_RIESZ_FAMILY:
        return standard_family(BOCHNER_RIESZ, {'u': param, 'exponent': alpha})
    elif kind == RESOLVENT:
        z = complex(param, epsilon)
        f = standard_family(RATIONAL, {'num': [z], 'den': [z, -1]})
        return f.scaled((abs(epsilon)/abs(z))**alpha)
    elif kind == GROUP:
        f = standard_family(IMAGINARY_POWER, {'t': param})
        return f.scaled((1+abs(param))**(-alpha))
    raise ParameterError(f'unknown family kind {kind}')


def _read_matrix(descriptor):
    try:
        n = int(descriptor['n'])
        return n, utils.to_matrix(descriptor['entries'], n)
    except (KeyError, TypeError, ValueError) as error:
        message = f'operator descriptor is not valid: {error}'
        raise ParameterError(message) from error


def _dual_power_iteration(matrix, p, iterations):
    q = p/(p-1)
    starts = [np.ones(matrix.shape[1], dtype=complex)]
    columns = np.linalg.norm(matrix, p, axis=0)
    starts.append(np.eye(matrix.shape[1])[int(np.argmax(columns))])
    _, _, vh = np.linalg.svd(matrix)
    starts.append(vh[0].conj())
    best, vector = 0.0, starts[0]/np.linalg.norm(starts[0], p)
    for x in starts:
        x = x/np.linalg.norm(x, p)
        for _ in range(iterations):
            y = matrix @ x
            value = np.linalg.norm(y, p)
            if value > best:
                best, vector = float(value), x
            if value == 0:
                break
            z = matrix.conj().T @ dual_vector(y, p)
            if np.linalg.norm(z, q) <= np.real(np.vdot(z, x))*(1+1e-13):
                break
            x = dual_vector(z, q)
            x = x/np.linalg.norm(x, p)
    return best, vector
