"""Contains R-bound estimation of operator families by Rademacher sums."""

import dataclasses as dc
import itertools as it
import math

import numpy as np

from ..config import config
from ..logger import logger
from ..utils import utils

from .case import EXHAUSTIVE, MONTE_CARLO, HILBERT_EXACT, SINGLETON_EXACT
from .case import EQUIDISTANT
from .errors import ParameterError
from .operators import OperatorFamily, lp_norm, norm_vector
from .spaces import exp_pullback, grid_defaults, hoermander_norm
from .spaces import make_partition, random_multiplier, sobolev_norm

batch_size = 2**14


@dc.dataclass(frozen=True)
class SearchConfig:
    """Budget and seed of the witness search.

    Tuples longer than ``exhaustive_limit`` are evaluated over ``samples``
    seeded sign patterns instead of all 2^K of them.
    """

    tuples: tuple = (1, 2, 4, 8)
    restarts: int = 4
    iterations: int = 40
    samples: int = 100000
    exhaustive_limit: int = 20
    seed: int = 0
    max_tuple: int = 64

    def __post_init__(self):
        if not self.tuples:
            raise ParameterError('at least one tuple length is needed')
        for K in self.tuples:
            if not 1 <= K <= self.max_tuple:
                raise ParameterError(f'tuple length must be in '
                                     f'[1, {self.max_tuple}], not {K}')
        if self.restarts < 1:
            raise ParameterError(f'restarts must be positive, '
                                 f'not {self.restarts}')
        if self.iterations < 0:
            raise ParameterError(f'iterations must be nonnegative, '
                                 f'not {self.iterations}')
        if self.samples < 2:
            raise ParameterError(f'samples must be at least 2, '
                                 f'not {self.samples}')
        if not 1 <= self.exhaustive_limit <= 22:
            raise ParameterError(f'exhaustive_limit must be in [1, 22], '
                                 f'not {self.exhaustive_limit}')

    @classmethod
    def from_config(cls, configuration=None):
        """Build from the SEARCH section overlaid by the given options."""
        options = dict(config['SEARCH'])
        if configuration:
            options.update({key: value for key, value in configuration.items()
                            if key in options and value is not None})
        tuples = options['tuples']
        tuples = tuple(tuples) if isinstance(tuples, list) else (tuples,)
        return cls(tuple(int(K) for K in tuples), int(options['restarts']),
                   int(options['iterations']), int(options['samples']),
                   int(options['exhaustive_limit']), int(options['seed']),
                   int(options['max_tuple']))


@dc.dataclass(frozen=True, eq=False)
class Witness:
    """Selection (T_{j_k}, x_k) or, with scalars, (a_k T_{j_k}, x)."""

    indices: tuple
    vectors: np.ndarray
    scalars: np.ndarray = None

    def to_json(self):
        return utils.to_json({'indices': list(self.indices),
                              'vectors': self.vectors,
                              'scalars': self.scalars})


@dc.dataclass(frozen=True, eq=False)
class RBoundEstimate:
    """Certified lower bound of an R-bound with its witness."""

    lower: float
    method: str
    witness: Witness = None
    upper: float = None
    stderr: float = None
    samples: int = None
    seed: int = None

    def __str__(self):
        upper = f'..{self.upper:.6g}' if self.upper is not None else ''
        return f'[{self.method}:{self.lower:.6g}{upper}]'

    def reevaluate(self, family, search=None):
        """Recompute the quotient of the witness on the family.

        Monte-Carlo estimates are reproduced exactly under the search they
        were found with.
        """
        search = search or SearchConfig.from_config()
        return _witness_quotient(family, self.witness, search)

    def to_json(self):
        return {'lower': self.lower, 'upper': self.upper,
                'method': self.method, 'stderr': self.stderr,
                'samples': self.samples, 'seed': self.seed,
                'witness': self.witness.to_json() if self.witness else None}


def rademacher_mean(vectors, space_p, samples=None, seed=0, stream=0,
                    record=None):
    """Compute E||sum_k eps_k x_k||_p over Rademacher signs.

    Parameters
    ----------
    vectors : array_like
        K vectors of length n.
    space_p : float
        Exponent of the ℓᵖ norm.
    samples : int, optional
        Monte-Carlo sample count, SEARCH samples by default.
    seed, stream : int, optional
        Generator key of the Monte-Carlo estimate.
    record : dict, optional
        Receives ``method``, ``stderr`` and ``samples``.

    Returns
    -------
    mean : float
        Exact mean for K up to the exhaustive limit, else the sample mean.
    """
    vectors = np.array(vectors, dtype=complex, ndmin=2)
    if vectors.shape[0] == 0:
        raise ParameterError('at least one vector is needed')
    count = vectors.shape[0]
    limit = config['SEARCH'].get('exhaustive_limit')
    if count <= limit:
        mean = _exhaustive_mean(vectors, space_p)
        if record is not None:
            record.update(method=EXHAUSTIVE, stderr=None, samples=2**count)
        return mean
    samples = int(samples or config['SEARCH'].get('samples'))
    batches = [(index, min(batch_size, samples-start))
               for index, start in enumerate(range(0, samples, batch_size))]

    def draw(batch):
        index, size = batch
        sequence = np.random.SeedSequence([seed, stream, index])
        generator = np.random.Generator(np.random.Philox(sequence))
        signs = 2.0*generator.integers(0, 2, (size, count)) - 1
        return np.linalg.norm(signs @ vectors, space_p, axis=1)

    norms = np.concatenate(utils.parallel(draw, batches, name='Batch'))
    mean = float(np.mean(norms))
    stderr = float(np.std(norms, ddof=1)/math.sqrt(samples))
    if record is not None:
        record.update(method=MONTE_CARLO, stderr=stderr, samples=samples)
    return mean


def rbound_lower(family, search=None, candidates=None):
    """Search a tuple (T_{j_k}, x_k) maximizing the Rademacher quotient.

    Parameters
    ----------
    family : OperatorFamily
        Family to estimate.
    search : SearchConfig, optional
        Budget, by default the SEARCH configuration.
    candidates : list, optional
        Witnesses evaluated before the search, e.g. of a subfamily.

    Returns
    -------
    estimate : RBoundEstimate
        Best quotient found with its witness.
    """
    search = search or SearchConfig.from_config()
    p = family.space_p
    exact = _exact_estimate(family)
    if exact is not None:
        return exact
    matrices = family.matrices
    semi = semi_rbound_lower(family, search)
    witnesses = [_singleton_witness(matrices, p)]
    semi_witness = semi.witness
    vectors = semi_witness.scalars[:, None]*semi_witness.vectors[0][None, :]
    witnesses.append(Witness(semi_witness.indices, vectors))
    witnesses.extend(candidates or [])
    tasks = [(K, restart) for K in search.tuples
             for restart in range(search.restarts)]

    def climb(task):
        K, restart = task
        return _ascent(matrices, p, K, restart, search)

    witnesses.extend(utils.parallel(climb, tasks, name='Restart'))
    estimate = _best_estimate(family, witnesses, search)
    best = estimate.witness
    logger.debug(f'{family} R-bound {estimate} with K={len(best.indices)}')
    return estimate


def semi_rbound_lower(family, search=None):
    """Search scalars a_k and one x maximizing the semi-R quotient.

    The quotient is E||sum_k eps_k a_k T_{j_k} x|| / (|a|_2 ||x||).
    """
    search = search or SearchConfig.from_config()
    p = family.space_p
    exact = _exact_estimate(family, semi=True)
    if exact is not None:
        return exact
    matrices = family.matrices
    singleton = _singleton_witness(matrices, p)
    witnesses = [Witness(singleton.indices, singleton.vectors, np.ones(1))]
    tasks = [(K, restart) for K in search.tuples
             for restart in range(search.restarts)]

    def climb(task):
        K, restart = task
        return _semi_ascent(matrices, p, K, restart, search)

    witnesses.extend(utils.parallel(climb, tasks, name='Restart'))
    return _best_estimate(family, witnesses, search)


def hoermander_ball_family(A, alpha, p, corpus_size, seed, degree=4,
                           depth=0):
    """Sample {f_j(A)} over random multipliers of unit H^alpha_p norm.

    Each f_j is a trigonometric polynomial of the given degree under a
    smooth bump in log λ. Bumps of radius 1 are dilated by a random dyadic
    factor reaching the spectrum of A. With ``depth`` > 0 the radii narrow
    as 2^-k, k spread evenly over 0..depth, and the narrow bumps sit on a
    random eigenvalue, so the family tests smoothness down to the scale
    2^-depth in log λ.
    """
    if corpus_size < 1:
        raise ParameterError(f'corpus_size must be positive, '
                             f'not {corpus_size}')
    if depth < 0:
        raise ParameterError(f'depth must be nonnegative, not {depth}')
    part = make_partition(EQUIDISTANT)
    sequence = np.random.SeedSequence([seed])
    generator = np.random.Generator(np.random.Philox(sequence))
    low = math.floor(math.log2(A.spectrum.min())) - 1
    high = math.ceil(math.log2(A.spectrum.max())) + 1
    steps = max(corpus_size-1, 1)
    corpus = []
    for j in range(corpus_size):
        k = round(j*depth/steps)
        if k == 0:
            f = random_multiplier(generator, degree=degree)
            level = int(generator.integers(low, high+1))
        else:
            radius = 2.0**-k
            eigenvalue = float(generator.choice(A.spectrum))
            center = math.log(eigenvalue) + radius*generator.uniform(-.5, .5)
            f = random_multiplier(generator, center, radius, degree)
            level = 0
        corpus.append((f, level))

    def member(item):
        f, level = item
        norm = hoermander_norm(f, alpha, p, part)
        f = f.scaled(1/norm).dilate(2.0**-level)
        return A.evaluate(f)

    matrices = utils.parallel(member, corpus, name='Member')
    members = [(index, matrix) for index, matrix in enumerate(matrices)]
    label = f'Ball(H^{alpha:g}_{p:g})'
    return OperatorFamily(label, members, A.space_p)


def localized_family(A, alpha, p, corpus_size, seed, levels=None, degree=4):
    """Build {f_j(2^n A)} for f_j supported in [1/2, 2] with unit W^alpha_p.

    Parameters
    ----------
    A : OperatorModel
        Model supporting spectral evaluation.
    alpha, p : float
        Sobolev smoothness and integrability of the normalization.
    corpus_size : int
        Number of functions f_j.
    seed : int
        Generator seed.
    levels : list, optional
        Dyadic levels n, by default all levels meeting the spectrum.
    degree : int, optional
        Degree of the trigonometric polynomials.

    Returns
    -------
    family : OperatorFamily
        Members labelled by (j, n).
    """
    if corpus_size < 1:
        raise ParameterError(f'corpus_size must be positive, '
                             f'not {corpus_size}')
    if levels is None:
        low = math.floor(-math.log2(A.spectrum.max())) - 1
        high = math.ceil(-math.log2(A.spectrum.min())) + 1
        levels = range(low, high+1)
    sequence = np.random.SeedSequence([seed])
    generator = np.random.Generator(np.random.Philox(sequence))
    origin, spacing, count = grid_defaults()
    corpus = []
    for _ in range(corpus_size):
        f = random_multiplier(generator, radius=math.log(2), degree=degree)
        norm = sobolev_norm(exp_pullback(f, origin, spacing, count), alpha, p)
        corpus.append(f.scaled(1/norm))
    tasks = [(j, n) for j in range(corpus_size) for n in levels]

    def member(task):
        j, n = task
        return (task, A.evaluate(corpus[j].dilate(2.0**n)))

    members = utils.parallel(member, tasks, name='Member')
    label = f'Local(W^{alpha:g}_{p:g})'
    return OperatorFamily(label, members, A.space_p)


def _exhaustive_mean(vectors, p):
    patterns = _patterns(vectors.shape[0])
    total = 0.0
    for start in range(0, patterns.shape[0], batch_size):
        chunk = patterns[start:start+batch_size]
        total += np.sum(np.linalg.norm(chunk @ vectors, p, axis=1))
    return float(total/patterns.shape[0])


_pattern_cache = {}


def _patterns(count):
    """Get all sign patterns with the first sign fixed to +1."""
    if count not in _pattern_cache:
        rest = np.array(list(it.product((1.0, -1.0), repeat=count-1)))
        rest = rest.reshape(2**(count-1), count-1)
        ones = np.ones((rest.shape[0], 1))
        _pattern_cache[count] = np.hstack([ones, rest])
    return _pattern_cache[count]


def _quotient(matrices, indices, vectors, p, search, record=None):
    images = np.stack([matrices[j] @ x for j, x in zip(indices, vectors)])
    vectors = np.asarray(vectors)
    if len(indices) <= search.exhaustive_limit:
        denominator = _exhaustive_mean(vectors, p)
        if denominator == 0:
            return 0.0
        return _exhaustive_mean(images, p)/denominator
    numerators = _sign_norms(images, p, search)
    denominators = _sign_norms(vectors, p, search)
    denominator = np.mean(denominators)
    if denominator == 0:
        return 0.0
    quotient = float(np.mean(numerators)/denominator)
    if record is not None:
        # ratio estimator over common signs
        spread = np.std(numerators - quotient*denominators, ddof=1)
        record['stderr'] = float(spread/(math.sqrt(numerators.size)
                                         * denominator))
    return quotient


def _semi_quotient(matrices, indices, scalars, x, p, search, record=None):
    images = np.stack([a*(matrices[j] @ x) for j, a in zip(indices, scalars)])
    denominator = np.linalg.norm(scalars)*np.linalg.norm(x, p)
    if denominator == 0:
        return 0.0
    if len(indices) <= search.exhaustive_limit:
        return _exhaustive_mean(images, p)/denominator
    numerators = _sign_norms(images, p, search)
    if record is not None:
        spread = np.std(numerators, ddof=1)
        record['stderr'] = float(spread/(math.sqrt(numerators.size)
                                         * denominator))
    return float(np.mean(numerators)/denominator)


def _sign_norms(vectors, p, search):
    signs = _signs(vectors.shape[0], search)
    return np.concatenate([
        np.linalg.norm(signs[start:start+batch_size] @ vectors, p, axis=1)
        for start in range(0, signs.shape[0], batch_size)])



def _witness_quotient(family, witness, search, record=None):
    if witness.scalars is not None:
        return _semi_quotient(family.matrices, witness.indices,
                              witness.scalars, witness.vectors[0],
                              family.space_p, search, record)
    return _quotient(family.matrices, witness.indices, witness.vectors,
                     family.space_p, search, record)


def _best_estimate(family, witnesses, search):
    best, lower = None, -1.0
    for witness in witnesses:
        quotient = _witness_quotient(family, witness, search)
        if quotient > lower:
            best, lower = witness, quotient
    upper = _contraction_upper(family)
    if upper is not None:
        upper = max(upper, lower)
    count = len(best.indices)
    if count <= search.exhaustive_limit:
        return RBoundEstimate(lower, EXHAUSTIVE, best, upper,
                              samples=2**count, seed=search.seed)
    record = {}
    _witness_quotient(family, best, search, record)
    return RBoundEstimate(lower, MONTE_CARLO, best, upper, record['stderr'],
                          search.samples, search.seed)


_sign_cache = {}


def _signs(count, search):
    """Get seeded sign patterns shared by every quotient of one search."""
    key = (count, search.samples, search.seed)
    if key not in _sign_cache:
        generator = _generator(search, count, 2)
        signs = 2.0*generator.integers(0, 2, (search.samples, count)) - 1
        signs[:, 0] = 1.0
        _sign_cache[key] = signs
    return _sign_cache[key]


def _singleton_witness(matrices, p):
    norms = [lp_norm(matrix, p).lower for matrix in matrices]
    index = int(np.argmax(norms))
    vector = norm_vector(matrices[index], p)
    return Witness((index,), vector[None, :])


def _exact_estimate(family, semi=False):
    matrices = family.matrices
    p = family.space_p
    if len(family) == 1:
        bracket = lp_norm(matrices[0], p)
        witness = _singleton_witness(matrices, p)
        if semi:
            witness = Witness(witness.indices, witness.vectors, np.ones(1))
        return RBoundEstimate(bracket.lower, SINGLETON_EXACT, witness,
                              bracket.upper)
    elif p == 2:
        witness = _singleton_witness(matrices, p)
        if semi:
            witness = Witness(witness.indices, witness.vectors, np.ones(1))
        value = lp_norm(matrices[witness.indices[0]], p).lower
        return RBoundEstimate(value, HILBERT_EXACT, witness, value)
    return None


def _contraction_upper(family):
    scalars = family.scalar_identities()
    if scalars is None:
        return None
    return float(max(abs(a) for a in scalars))


def _generator(search, *key):
    sequence = np.random.SeedSequence([search.seed, *key])
    return np.random.Generator(np.random.Philox(sequence))


def _start(matrices, p, K, restart, generator):
    norms = np.array([lp_norm(matrix, p).lower for matrix in matrices])
    if restart == 0:
        order = np.argsort(-norms, kind='stable')
        indices = [int(order[k % len(order)]) for k in range(K)]
    else:
        indices = [int(j) for j in generator.integers(0, len(matrices), K)]
    vectors = np.stack([norm_vector(matrices[j], p) for j in indices])
    if restart > 0:
        vectors = vectors + 0.5*_complex_normal(generator, vectors.shape)
    return indices, vectors


def _ascent(matrices, p, K, restart, search):
    generator = _generator(search, K, restart)
    indices, vectors = _start(matrices, p, K, restart, generator)
    best = _quotient(matrices, indices, vectors, p, search)
    step = 0.5
    for _ in range(search.iterations):
        improved = False
        for k in range(K):
            trial = vectors.copy()
            trial[k] = trial[k] + step*np.linalg.norm(trial[k], p)*(
                _complex_normal(generator, trial[k].shape))
            value = _quotient(matrices, indices, trial, p, search)
            if value > best:
                vectors, best, improved = trial, value, True
            swap = list(indices)
            swap[k] = int(generator.integers(0, len(matrices)))
            value = _quotient(matrices, swap, vectors, p, search)
            if value > best:
                indices, best, improved = swap, value, True
        vectors = vectors/np.linalg.norm(vectors, p, axis=1).max()
        if not improved:
            step /= 2
    return Witness(tuple(indices), vectors)


def _semi_ascent(matrices, p, K, restart, search):
    generator = _generator(search, K, restart, 1)
    indices, vectors = _start(matrices, p, K, restart, generator)
    x = vectors[0]
    scalars = np.ones(K, dtype=complex)
    if restart > 0:
        scalars = scalars + 0.5*_complex_normal(generator, K)
    best = _semi_quotient(matrices, indices, scalars, x, p, search)
    step = 0.5
    for _ in range(search.iterations):
        improved = False
        for k in range(K):
            trial = scalars.copy()
            trial[k] += step*np.linalg.norm(scalars)*_complex_normal(
                generator, 1)[0]
            value = _semi_quotient(matrices, indices, trial, x, p, search)
            if value > best:
                scalars, best, improved = trial, value, True
            swap = list(indices)
            swap[k] = int(generator.integers(0, len(matrices)))
            value = _semi_quotient(matrices, swap, scalars, x, p,
                                   search)
            if value > best:
                indices, best, improved = swap, value, True
        trial = x + step*np.linalg.norm(x, p)*_complex_normal(generator,
                                                              x.shape)
        value = _semi_quotient(matrices, indices, scalars, trial, p,
                               search)
        if value > best:
            x, best, improved = trial, value, True
        scalars = scalars/np.linalg.norm(scalars)
        x = x/np.linalg.norm(x, p)
        if not improved:
            step /= 2
    return Witness(tuple(indices), x[None, :], scalars)


def _complex_normal(generator, shape):
    return (generator.standard_normal(shape)
            + 1j*generator.standard_normal(shape))/math.sqrt(2)
