"""Contains SMLAB experiment runner and its reports."""

import csv
import dataclasses as dc
import datetime as dt
import json
import math
import os
import re
import sys
import traceback as tb

import numpy as np

from ..config import config
from ..logger import logger
from ..utils import utils

from .case import PASS, FAIL, ERROR, INFO, EXPERIMENTS
from .case import JORDAN, EQUIDISTANT
from .case import SECTOR_EXP, WAVE_REGULARIZED, IMAGINARY_POWER
from .case import BOCHNER_RIESZ, RATIONAL, CUSTOM
from .case import CAUCHY, WAVE, MELLIN, BR
from .case import SEMIGROUP, BOCHNER_RIESZ_FAMILY, RESOLVENT, GROUP
from .calculus import apply, refine, spectral_apply, cauchy_apply
from .calculus import mellin_apply, semigroup_bochner_riesz
from .errors import ConfigurationError, PreconditionError, QuadratureError
from .errors import SmoothnessError, UnsupportedStructure
from .fields import COLUMNS, EXPERIMENT, CHECK, INVARIANT, PARAMETERS
from .fields import MEASURED, EXPECTED, TOLERANCE, STATUS
from .operators import OperatorFamily, diagonal_model, jordan_model
from .operators import circulant_laplacian, elementary_family
from .rbound import SearchConfig, rbound_lower
from .rbound import hoermander_ball_family, localized_family
from .spaces import MultiplierFunction, hoermander_norm, make_partition
from .spaces import random_multiplier, standard_family, windowed_smooth


class Report():
    """Represents the rows of one experiment run.

    Parameters
    ----------
    experiment : str
        Experiment id, E1..E7.
    seed : int
        Seed of the run.
    options : dict, optional
        Experiment configuration written to the header.

    Attributes
    ----------
    rows : list
        Dictionaries keyed by the report field names.
    timestamp : str or None
        Start of the run, the only part of the file that changes between
        identical runs.
    """

    def __init__(self, experiment, seed, options=None):
        self.experiment = experiment
        self.seed = seed
        self.options = dict(options or {})
        self.rows = []
        self.timestamp = None

    def __str__(self):
        return f'[Report:{self.experiment}:{len(self.rows)}]'

    __repr__ = __str__

    def __len__(self):
        return len(self.rows)

    @property
    def header(self):
        """Get the header with the environment stamp."""
        search = SearchConfig.from_config(self.options)
        environment = {'grid': dict(config['GRID']),
                       'calculus': dict(config['CALCULUS']),
                       'search': dc.asdict(search),
                       'seed': self.seed,
                       'timestamp': self.timestamp}
        return utils.to_json({'experiment': self.experiment,
                              'options': self.options,
                              'environment': environment})

    @property
    def passed(self):
        """Check that no row failed and no error occurred."""
        return all(row[STATUS.field_name] in (PASS, INFO)
                   for row in self.rows)

    @property
    def statuses(self):
        """Get the number of rows per status."""
        counts = {}
        for row in self.rows:
            status = row[STATUS.field_name]
            counts[status] = counts.get(status, 0) + 1
        return counts

    def add(self, check, invariant, measured=None, expected=None,
            tolerance=None, status=INFO, **parameters):
        """Append one row."""
        row = {EXPERIMENT.field_name: self.experiment,
               CHECK.field_name: check,
               INVARIANT.field_name: invariant,
               PARAMETERS.field_name: parameters,
               MEASURED.field_name: measured,
               EXPECTED.field_name: expected,
               TOLERANCE.field_name: tolerance,
               STATUS.field_name: status}
        self.rows.append(row)
        logger.debug(f'{self} {status} {check} {parameters} '
                     f'measured={measured} expected={expected}')
        return row

    def note(self, check, invariant, measured, **parameters):
        """Append an informative row that does not pass or fail."""
        return self.add(check, invariant, measured, **parameters)

    def verify(self, check, invariant, measured, expected, tolerance,
               **parameters):
        """Append a row passing when |measured - expected| <= tolerance."""
        passed = abs(measured-expected) <= tolerance
        status = PASS if passed else FAIL
        return self.add(check, invariant, measured, expected, tolerance,
                        status, **parameters)

    def bound(self, check, invariant, measured, lower=None, upper=None,
              **parameters):
        """Append a row passing when lower <= measured < upper."""
        passed = not math.isnan(measured)
        if lower is not None:
            passed = passed and measured >= lower
        if upper is not None:
            passed = passed and measured < upper
        expected = upper if upper is not None else lower
        status = PASS if passed else FAIL
        return self.add(check, invariant, measured, expected, None, status,
                        **parameters)

    def fail(self, check, error):
        """Append the diagnostic row of an aborted experiment."""
        return self.add(check, 'experiment completes without errors',
                        status=ERROR, error=error)

    def write(self, path):
        """Write the report as CSV with a '#' JSON header line."""
        folder = os.path.dirname(os.path.abspath(path))
        os.makedirs(folder, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as file:
            file.write(f'# {json.dumps(self.header, sort_keys=True)}\n')
            writer = csv.writer(file, lineterminator='\n')
            writer.writerow([field.column_name for field in COLUMNS])
            for row in self.rows:
                writer.writerow([field.format(row[field.field_name])
                                 for field in COLUMNS])
        logger.info(f'{self} written to {path}')

    @classmethod
    def read(cls, path):
        """Read a report written by write."""
        with open(path, encoding='utf-8', newline='') as file:
            header = json.loads(file.readline()[1:])
            reader = csv.reader(file)
            columns = next(reader)
            fields = {field.column_name: field for field in COLUMNS}
            rows = []
            for cells in reader:
                rows.append({fields[name].field_name: fields[name].parse(cell)
                             for name, cell in zip(columns, cells)})
        environment = header['environment']
        report = cls(header['experiment'], environment['seed'],
                     header['options'])
        report.timestamp = environment['timestamp']
        report.rows = rows
        return report


class Experiment():
    """Represents one configured run of the experiments E1..E7.

    Parameters
    ----------
    configuration : smlab.config.Configuration
        Options with the mandatory ``experiment`` and ``seed`` keys, as
        returned by ``reader.read_experiment_config``.
    path : str, optional
        Output CSV, the ``out`` option by default. Without a path the
        report is kept in memory only.

    Attributes
    ----------
    status : str or None
        I, S, P, F, D while going through the lifecycle, E on error.
    report : Report
        Rows collected so far.
    """

    def __init__(self, configuration, path=None):
        self.configuration = configuration
        self.name = str(configuration.get('experiment')).upper()
        self.seed = configuration.get('seed')
        self.path = path or configuration.get('out')
        self.search = None
        self.runner = None
        self.report = Report(self.name, self.seed, configuration)

        self.status = None
        self.start_date = None
        self.end_date = None

        self._with_error = False
        self._all_errors = []

    def __str__(self):
        return f'[{self.name}:{self.seed}]'

    __repr__ = __str__

    @property
    def passed(self):
        """Check that the run completed and every checked row passed."""
        return not self._with_error and self.report.passed

    @property
    def text_error(self):
        """Get textual error representation of current experiment run."""
        errors = self._all_errors.copy()
        texts = [''.join(tb.format_exception(*error)) for error in errors]
        text = f'{str():->40}\n'.join(texts)
        return text

    def run(self):
        """Run experiment and get its report."""
        logger.debug(f'{self} Running experiment...')
        if self._initiate():
            self._resume()
        return self.report

    def _resume(self):
        if self._start():
            if self._progress():
                if self._finish():
                    self._done()

    def _initiate(self):
        logger.info(f'{self} Initiating experiment...')
        try:
            self.status = 'I'
            if self.name not in EXPERIMENTS:
                message = f'unknown experiment id {self.name}'
                raise ConfigurationError(message)
            if not isinstance(self.seed, int) or self.seed < 0:
                raise ConfigurationError(f'seed must be nonnegative int, '
                                         f'not {self.seed!r}')
            self.search = SearchConfig.from_config(self.configuration)
            self.runner = getattr(self, f'_run_{self.name.lower()}')
        except Exception:
            logger.error()
            return self._escape()
        else:
            logger.info(f'{self} Experiment initiated')
            return self._continue()

    def _start(self):
        logger.info(f'{self} Starting experiment...')
        try:
            self.status = 'S'
            self.start_date = dt.datetime.now()
            self.report.timestamp = self.start_date.isoformat()
        except Exception:
            logger.error()
            return self._escape()
        else:
            logger.info(f'{self} Experiment started at {self.start_date}')
            return self._continue()

    def _progress(self):
        try:
            self.status = 'P'
            self.runner()
        except Exception:
            logger.error()
            return self._escape()
        else:
            return self._continue()

    def _finish(self):
        logger.info(f'{self} Finishing experiment...')
        try:
            self.status = 'F'
            if self.path:
                self.report.write(self.path)
        except Exception:
            logger.error()
            return self._escape()
        else:
            logger.info(f'{self} Experiment finished with '
                        f'{self.report.statuses}')
            return self._continue()

    def _done(self):
        try:
            self.status = 'D'
            self.end_date = dt.datetime.now()
        except Exception:
            logger.error()
            return self._escape()
        else:
            logger.info(f'{self} ended at {self.end_date}')
            return self._continue()

    def _error(self):
        try:
            self.status = 'E'
            self.end_date = dt.datetime.now()
            error = self._all_errors[-1][1]
            self.report.fail('experiment',
                             f'{error.__class__.__name__}: {error}')
            if self.path:
                self.report.write(self.path)
        except Exception:
            logger.error()
        else:
            logger.info(f'{self} ended with error at {self.end_date}')

    def _continue(self):
        return True

    def _escape(self):
        self._with_error = True
        self._all_errors.append(sys.exc_info())
        return self._error()

    def _option(self, key, default):
        value = self.configuration.get(key)
        return default if value is None else value

    def _options(self, key, default):
        value = self._option(key, default)
        if isinstance(value, (list, tuple)):
            return list(value)
        return [value]

    def _models(self, default, space_p=2.0):
        space_p = float(self._option('space_p', space_p))
        tokens = self._options('models', default)
        return [self._model(token, space_p) for token in tokens]

    def _model(self, token, space_p):
        token = str(token).lower()
        if token == 'diagonal':
            spectrum = self._options('spectrum', [1.0, 2.0, 4.0])
            return diagonal_model(spectrum, space_p)
        match = re.fullmatch(r'(jordan|laplacian)(\d+)', token)
        if match is None:
            raise ConfigurationError(f'unknown model {token}')
        name, size = match.group(1), int(match.group(2))
        if name == 'jordan':
            return jordan_model(size, space_p)
        return circulant_laplacian(size, space_p)

    def _curve(self, family, sizes):
        values, candidates = [], []
        for size in sizes:
            subfamily = OperatorFamily(family.label, family.members[:size],
                                       family.space_p)
            estimate = rbound_lower(subfamily, self.search, candidates)
            if estimate.witness is not None:
                candidates = [estimate.witness]
            values.append(estimate.lower)
        return values

    def _run_e1(self):
        alpha = float(self._option('alpha', 2.0))
        p = float(self._option('p', 2.0))
        spacing = float(self._option('spacing', 2**-8))
        part = make_partition(EQUIDISTANT)

        invariant = 'sector semigroup norms grow like (pi/2-|theta|)^-alpha'
        deltas = [float(delta) for delta in
                  self._options('deltas', [0.2, 0.1, 0.05, 0.025])]

        def sector(delta):
            f = standard_family(SECTOR_EXP, {'theta': math.pi/2-delta})
            return hoermander_norm(f, alpha, p, part, spacing=spacing)

        norms = utils.parallel(sector, deltas, name='Sector')
        for delta, norm in zip(deltas, norms):
            self.report.note('sector_norm', invariant, norm, delta=delta,
                             alpha=alpha, p=p)
        slope = utils.fit_slope([1/delta for delta in deltas], norms)
        self.report.verify('sector_rate', invariant, slope, alpha-0.05, 0.15,
                           alpha=alpha, p=p)

        invariant = 'regularized wave norms are bounded in s'
        exponent = float(self._option('wave_exponent', alpha))
        lower = config['GRID'].get('lower')
        values = [float(s) for s in self._options('wave_s', [1, 10, 100])]

        def wave(s):
            f = standard_family(WAVE_REGULARIZED, {'s': s, 'alpha': exponent})
            s_range = (lower, 4-math.log(abs(s)))
            return hoermander_norm(f, alpha, p, part, s_range, spacing)

        norms = utils.parallel(wave, values, name='Wave')
        for s, norm in zip(values, norms):
            self.report.note('wave_norm', invariant, norm, s=s,
                             exponent=exponent)
        self.report.bound('wave_bounded', invariant, max(norms)/min(norms),
                          upper=10.0, exponent=exponent)

        invariant = 'imaginary power norms grow like <t>^alpha'
        times = [float(t) for t in self._options('times', [16, 64, 256])]

        def power(t):
            f = standard_family(IMAGINARY_POWER, {'t': t})
            return hoermander_norm(f, alpha, p, part, (-1.0, 1.0), spacing)

        norms = utils.parallel(power, times, name='Power')
        for t, norm in zip(times, norms):
            self.report.note('power_norm', invariant, norm, t=t)
        slope = utils.fit_slope([math.hypot(1, t) for t in times], norms)
        self.report.verify('power_rate', invariant, slope, alpha, 0.1,
                           alpha=alpha, p=p)

        invariant = 'Bochner-Riesz norms do not depend on u'
        beta = float(self._option('br_beta', 1.2))
        br_exponent = float(self._option('br_exponent', 1.5))
        radii = [float(u) for u in self._options('radii', [0.25, 1, 4])]
        br_spacing = float(self._option('br_spacing', 2**-9))

        def riesz(u):
            f = standard_family(BOCHNER_RIESZ, {'u': u,
                                                'exponent': br_exponent})
            return hoermander_norm(f, beta, 1.0, part, spacing=br_spacing)

        norms = utils.parallel(riesz, radii, name='Riesz')
        for u, norm in zip(radii, norms):
            self.report.note('riesz_norm', invariant, norm, u=u, beta=beta,
                             exponent=br_exponent)
        deviation = max(abs(norm-norms[0]) for norm in norms)/norms[0]
        self.report.verify('riesz_dilation', invariant, deviation, 0.0,
                           float(self._option('riesz_tolerance', 1e-3)),
                           beta=beta, exponent=br_exponent)

        invariant = 'Hörmander norms are invariant under dilation'
        tolerance = config['GRID'].get('tol_dil')
        f = windowed_smooth(0.0, 1.0, [[1.0, 0.0], [0.5, 0.3], [0.2, -0.1]])
        levels = [int(k) for k in self._options('dilations', [-2, 0, 2])]

        def dilation(k):
            return hoermander_norm(f.dilate(2.0**k), alpha, p, part,
                                   spacing=spacing)

        norms = utils.parallel(dilation, levels, name='Dilation')
        deviation = max(abs(norm-norms[0]) for norm in norms)/norms[0]
        self.report.verify('dilation_invariance', invariant, deviation, 0.0,
                           tolerance, alpha=alpha, p=p, levels=levels)

    def _run_e2(self):
        space_p = float(self._option('space_p', 2.0))
        orders = [int(m) for m in self._options('orders', [1, 2, 3])]
        corpus_size = int(self._option('corpus_size', 16))
        degree = int(self._option('degree', 8))
        factor = float(self._option('divergence_factor', 10.0))
        depth = int(self._option('depth', 40))
        times = np.logspace(1, 4, 13)
        scales = 2.0**np.arange(0, 21)
        for m in orders:
            A = jordan_model(m, space_p)

            invariant = 'imaginary powers of JordanExp(m) grow like t^m'

            def power(t):
                f = standard_family(IMAGINARY_POWER, {'t': t})
                return A.norm(A.evaluate(f)).upper

            norms = utils.parallel(power, times, name='Power')
            slope = utils.fit_slope(times, norms)
            self.report.verify('power_growth', invariant, slope, float(m),
                               0.05, m=m)

            invariant = 'wave operators of JordanExp(m) need exponent m'
            for exponent, check in ((m, 'wave_regularized'),
                                    (m-0.5, 'wave_underregularized')):

                def wave(s):
                    f = standard_family(WAVE_REGULARIZED,
                                        {'s': s, 'alpha': exponent})
                    return A.norm(A.evaluate(f)).upper

                norms = utils.parallel(wave, scales, name='Wave')
                ratio = max(norms)/min(norms)
                if exponent == m:
                    self.report.bound(check, invariant, ratio, upper=10.0,
                                      m=m, exponent=exponent)
                else:
                    self.report.bound(check, invariant, ratio, lower=10.0,
                                      m=m, exponent=exponent)

            invariant = 'Hörmander calculus fails below order m + 1/2'
            lowers = []
            for beta in (m+0.6, m+0.4):
                family = hoermander_ball_family(A, beta, 2.0, corpus_size,
                                                self.seed, degree, depth)
                lower = rbound_lower(family, self.search).lower
                self.report.note('ball_lower', invariant, lower, m=m,
                                 beta=beta, corpus_size=corpus_size,
                                 depth=depth)
                lowers.append(lower)
            self.report.bound('ball_divergence', invariant,
                              lowers[1]/lowers[0], lower=factor, m=m)

    def _run_e3(self):
        sizes = [int(N) for N in self._options('sizes', [16, 64, 256])]
        exponents = [float(p) for p in
                     self._options('exponents', [1.5, 2.0, 4.0])]
        beta = float(self._option('beta', 2.0))
        corpus_size = int(self._option('corpus_size', 16))
        degree = int(self._option('degree', 4))
        invariant = 'Laplacian multiplier norms are stable in N'
        for p in exponents:
            values = []
            for N in sizes:
                A = circulant_laplacian(N, p)
                family = hoermander_ball_family(A, beta, 2.0, corpus_size,
                                                self.seed, degree)
                value = max(bracket.lower for bracket in family.norms())
                self.report.note('multiplier_norm', invariant, value, N=N,
                                 p=p, beta=beta)
                values.append(value)
            self.report.bound('multiplier_stable', invariant,
                              max(values)/min(values), upper=10.0, p=p,
                              beta=beta)

    def _run_e4(self):
        models = self._models(['diagonal', 'jordan1', 'laplacian16'])
        corpus_size = int(self._option('corpus_size', 50))
        tolerance = float(self._option('tolerance', 1e-5))
        sigmas = [float(sigma) for sigma in
                  self._options('sigmas', [math.pi/4, math.pi/3])]
        engines = (CAUCHY, WAVE, MELLIN, BR)
        for A in models:
            A = A.certify(angles=sigmas)
            corpus = self._corpus(A, corpus_size)
            options = self._engine_options(A)

            invariant = 'engines agree with the spectral oracle'

            def compare(f):
                oracle = spectral_apply(A, f)
                deviations = {}
                for engine in engines:
                    try:
                        result = apply(engine, A, f, **options[engine])
                    except (PreconditionError, UnsupportedStructure,
                            SmoothnessError):
                        continue
                    except QuadratureError:
                        logger.warning(f'{A} {engine} quadrature failed '
                                       f'for {f}')
                        deviations[engine] = math.inf
                    else:
                        deviations[engine] = result.deviation(oracle)
                return deviations

            table = utils.parallel(compare, corpus, name='Engine')
            for engine in engines:
                values = [row[engine] for row in table if engine in row]
                if not values:
                    self.report.note('agreement', invariant, None,
                                     model=str(A), engine=engine, members=0)
                    continue
                self.report.verify('agreement', invariant, max(values), 0.0,
                                   tolerance, model=str(A), engine=engine,
                                   members=len(values))

            invariant = 'engines converge under refinement'
            for engine in engines:
                for index, row in enumerate(table):
                    if engine in row and math.isfinite(row[engine]):
                        coarse, fine = refine(engine, A, corpus[index],
                                              **options[engine])
                        self.report.note(
                            'refinement', invariant, fine.refinement_delta,
                            model=str(A), engine=engine, member=index,
                            points=[coarse.quadrature_report['points'],
                                    fine.quadrature_report['points']],
                            oracle_deviation=fine.deviation(
                                spectral_apply(A, corpus[index])))
                        break

            # Rational partners never vanish, so the product keeps the
            # support of the first member.
            partners = ([g for g in corpus[1:] if g.kind == RATIONAL]
                        or corpus[1:])
            if partners:
                invariant = 'calculus is multiplicative'
                f, g = corpus[0], partners[0]
                product = MultiplierFunction(
                    CUSTOM, function=lambda lam: f(lam)*g(lam))
                left = mellin_apply(A, product)
                right = mellin_apply(A, f).value @ mellin_apply(A, g).value
                self.report.verify('homomorphism', invariant,
                                   left.deviation(right), 0.0, tolerance,
                                   model=str(A), engine=MELLIN)

            holomorphic = [f for f in corpus if f.kind == RATIONAL]
            if holomorphic:
                invariant = 'Cauchy integral does not depend on the contour'
                f = holomorphic[0]
                values = [cauchy_apply(A, f, sigma) for sigma in sigmas]
                deviation = max(value.deviation(values[0])
                                for value in values)
                self.report.verify('contour_independence', invariant,
                                   deviation, 0.0, tolerance, model=str(A),
                                   sigmas=sigmas)

    def _corpus(self, A, size):
        sequence = np.random.SeedSequence([self.seed])
        generator = np.random.Generator(np.random.Philox(sequence))
        low = math.log(A.spectrum.min())
        high = math.log(A.spectrum.max())
        degree = int(self._option('degree', 4))
        corpus = []
        for j in range(size):
            if j % 3 == 0:
                f = random_multiplier(generator, radius=math.log(2),
                                      degree=degree)
            elif j % 3 == 1:
                center = generator.uniform(low-0.5, high+0.5)
                f = random_multiplier(generator, center=center, degree=degree)
            else:
                a, b = np.exp(generator.uniform(low-1, high+1, 2))
                linear = np.array([a*b, a+b, 1.0])
                quadratic = np.polynomial.polynomial.polymul(linear, linear)
                f = standard_family(RATIONAL, {'num': [0, 0, a*b],
                                               'den': list(quadratic)})
            corpus.append(f)
        return corpus

    def _engine_options(self, A):
        alpha = 2.5
        if A.structure == JORDAN:
            alpha = A.order + 2.5
        return {CAUCHY: {}, WAVE: {}, MELLIN: {}, BR: {'alpha': alpha}}

    def _run_e5(self):
        models = self._models(['laplacian64'], 1.5)
        alpha = float(self._option('alpha', 3.0))
        beta = float(self._option('beta', 2.0))
        sizes = [int(size) for size in self._options('corpus', [2, 4, 8, 16])]
        degree = int(self._option('degree', 4))
        deltas = [float(delta) for delta in
                  self._options('deltas', [0.4, 0.2, 0.1, 0.05])]
        margin = float(self._option('nu_margin', 0.5))
        for A in models:
            A = A.certify()
            low = math.ceil(math.log2(A.spectrum.min())) + 1
            high = math.ceil(math.log2(A.spectrum.max())) + 1
            radii = [2.0**k for k in range(low, high+1)]

            invariant = 'Bochner-Riesz means are R-bounded'
            family = elementary_family(A, BOCHNER_RIESZ_FAMILY, radii,
                                       alpha=alpha-1)
            riesz = self._curve(family, range(1, len(radii)+1))
            for u, value in zip(radii, riesz):
                self.report.note('riesz_lower', invariant, value,
                                 model=str(A), u=u, exponent=alpha-1)
            self.report.bound('riesz_bounded', invariant,
                              max(riesz)/riesz[0], upper=10.0, model=str(A),
                              exponent=alpha-1)

            invariant = 'H^beta_1 calculus is R-bounded for beta < alpha'
            family = hoermander_ball_family(A, beta, 1.0, max(sizes),
                                            self.seed, degree)
            ball = self._curve(family, sizes)
            for size, value in zip(sizes, ball):
                self.report.note('ball_lower', invariant, value,
                                 model=str(A), beta=beta, corpus_size=size)
            self.report.bound('ball_bounded', invariant, max(ball)/ball[0],
                              upper=10.0, model=str(A), beta=beta)
            self.report.note('riesz_to_ball', invariant, riesz[-1]/ball[-1],
                             model=str(A), alpha=alpha, beta=beta)

            invariant = 'semigroup growth bounds Bochner-Riesz exponents'
            times = [1/u for u in radii]
            lowers = []
            for delta in deltas:
                theta = math.pi/2 - delta
                grid = [(theta, t) for t in times]
                family = elementary_family(A, SEMIGROUP, grid)
                lowers.append(rbound_lower(family, self.search).lower)
                self.report.note('semigroup_lower', invariant, lowers[-1],
                                 model=str(A), delta=delta)
            growth = utils.fit_slope([1/delta for delta in deltas], lowers)
            self.report.note('semigroup_growth', invariant, growth,
                             model=str(A))
            nu = max(growth, 0.0) + margin
            family = elementary_family(A, BOCHNER_RIESZ_FAMILY, radii,
                                       alpha=nu)
            riesz = self._curve(family, range(1, len(radii)+1))
            self.report.bound('riesz_above_growth', invariant,
                              max(riesz)/riesz[0], upper=10.0, model=str(A),
                              nu=nu)

            invariant = 'semigroup reconstructs Bochner-Riesz means'
            u, nu = 1.0, max(alpha-1, 1.0)
            result = semigroup_bochner_riesz(A, u, nu)
            oracle = A.evaluate(standard_family(BOCHNER_RIESZ,
                                                {'u': u, 'exponent': nu}))
            self.report.verify('semigroup_reconstruction', invariant,
                               result.deviation(oracle), 0.0, 1e-5,
                               model=str(A), u=u, nu=nu)

    def _run_e6(self):
        models = self._models(['diagonal', 'laplacian16', 'laplacian64'])
        alpha = float(self._option('alpha', 1.0))
        p = float(self._option('p', 2.0))
        corpus_size = int(self._option('corpus_size', 8))
        degree = int(self._option('degree', 4))
        invariant = 'localized and Hörmander families are equivalent'
        for A in models:
            family = localized_family(A, alpha, p, corpus_size, self.seed,
                                      degree=degree)
            local = rbound_lower(family, self.search).lower
            family = hoermander_ball_family(A, alpha, p, corpus_size,
                                            self.seed, degree)
            ball = rbound_lower(family, self.search).lower
            self.report.note('local_lower', invariant, local, model=str(A))
            self.report.note('ball_lower', invariant, ball, model=str(A))
            ratio = max(local/ball, ball/local)
            self.report.bound('localization', invariant, ratio, upper=4.0,
                              model=str(A), alpha=alpha, p=p)

    def _run_e7(self):
        models = self._models(['jordan1', 'jordan2'], 1.5)
        epsilons = sorted((float(epsilon) for epsilon in
                           self._options('epsilons', [1, 0.1, 0.01])),
                          reverse=True)
        slack = float(self._option('slack', 0.1))
        heights = [float(y) for y in self._options(
            'heights', [-100, -10, -1, -0.1, 0, 0.1, 1, 10, 100])]
        abscissae = [float(x) for x in self._options(
            'abscissae', [-4, -1, 0, 0.5, 1, 2, 4])]
        windows = int(self._option('windows', 8))
        for A in models:
            A = A.certify()
            m = A.order if A.structure == JORDAN else 0
            delta = 1/A.type_p - 1/A.cotype + slack

            invariant = 'analytic semigroup is R-bounded on Re z = epsilon'
            lowers, reference = [], None
            for epsilon in epsilons:
                family = self._analytic_family(A, epsilon, heights, m+delta)
                reference = reference or _largest_norm(family)
                lowers.append(rbound_lower(family, self.search).lower)
                self.report.note('analytic_lower', invariant, lowers[-1],
                                 model=str(A), epsilon=epsilon,
                                 exponent=m+delta)
            self.report.bound('analytic_bounded', invariant,
                              max(lowers)/reference, upper=10.0,
                              model=str(A), exponent=m+delta)

            invariant = 'resolvents are R-bounded on Im z = epsilon'
            lowers, reference = [], None
            for epsilon in epsilons:
                family = elementary_family(A, RESOLVENT, abscissae,
                                           alpha=m+1+delta, epsilon=epsilon)
                reference = reference or _largest_norm(family)
                lowers.append(rbound_lower(family, self.search).lower)
                self.report.note('resolvent_lower', invariant, lowers[-1],
                                 model=str(A), epsilon=epsilon,
                                 exponent=m+1+delta)
            self.report.bound('resolvent_bounded', invariant,
                              max(lowers)/reference, upper=10.0,
                              model=str(A), exponent=m+1+delta)

            invariant = 'regularized imaginary powers are R-bounded'
            lowers, reference = [], None
            for k in range(windows):
                times = [2.0**k*(1+j/4) for j in range(4)]
                family = elementary_family(A, GROUP, times, alpha=m+delta)
                reference = reference or _largest_norm(family)
                lowers.append(rbound_lower(family, self.search).lower)
                self.report.note('group_lower', invariant, lowers[-1],
                                 model=str(A), window=k, exponent=m+delta)
            self.report.bound('group_bounded', invariant,
                              max(lowers)/reference, upper=10.0,
                              model=str(A), exponent=m+delta)

    def _analytic_family(self, A, epsilon, heights, exponent):
        def member(y):
            z = complex(epsilon, y)
            f = standard_family(SECTOR_EXP, {'theta': math.atan2(y, epsilon)})
            f = f.dilate(abs(z)).scaled((epsilon/abs(z))**exponent)
            return (y, A.evaluate(f))

        members = utils.parallel(member, heights, name='Member')
        label = f'Analytic({epsilon:g})'
        return OperatorFamily(label, members, A.space_p)


def _largest_norm(family):
    """Get the largest lower norm bracket over the members of a family."""
    return max(bracket.lower for bracket in family.norms())
