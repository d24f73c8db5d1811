import math

import numpy as np
import pytest

from smlab.main.case import SECTOR_EXP, WAVE_REGULARIZED, IMAGINARY_POWER
from smlab.main.case import BOCHNER_RIESZ, RATIONAL, CUSTOM
from smlab.main.case import EQUIDISTANT, DYADIC
from smlab.main.errors import ParameterError, DomainError, TailTruncation
from smlab.main.errors import PartitionConstruction, PreconditionError
from smlab.main.errors import GridCoverage
from smlab.main.spaces import GridFunction, MultiplierFunction
from smlab.main.spaces import exp_pullback, sobolev_norm
from smlab.main.spaces import fractional_derivative, reproduction_defect
from smlab.main.spaces import algebra_constant, make_partition
from smlab.main.spaces import hoermander_norm, classical_hoermander_norm
from smlab.main.spaces import standard_family, windowed_smooth, bump

from conftest import bump_function


def identity():
    return MultiplierFunction(CUSTOM, function=lambda lam: lam)


def ones():
    return MultiplierFunction(CUSTOM, function=np.ones_like)


def test_pullback_of_identity():
    g = exp_pullback(identity(), 0.0, 1.0, 2)
    assert g.samples == pytest.approx([1.0, math.e])
    assert g.points == pytest.approx([0.0, 1.0])


def test_pullback_of_imaginary_power():
    f = standard_family(IMAGINARY_POWER, {'t': 3})
    g = exp_pullback(f, -1.0, 0.5, 5)
    assert g.samples == pytest.approx(np.exp(3j*g.points), rel=1e-12)


def test_pullback_of_bochner_riesz_vanishes_from_u():
    f = standard_family(BOCHNER_RIESZ, {'u': 1, 'exponent': 1})
    g = exp_pullback(f, 0.0, 1.0, 2)
    assert np.all(g.samples == 0)


def test_pullback_needs_two_points():
    with pytest.raises(ParameterError):
        exp_pullback(identity(), 0.0, 1.0, 1)


def test_sobolev_norm_of_zero():
    g = GridFunction(-16.0, 2**-7, np.zeros(4097))
    assert sobolev_norm(g, 1.0, 2.0) == 0.0


def test_sobolev_norm_of_gaussian():
    s = -16 + 2**-7*np.arange(4097)
    g = GridFunction(-16.0, 2**-7, np.exp(-s**2))
    assert sobolev_norm(g, 0.0, 2.0) == pytest.approx((math.pi/2)**0.25,
                                                      rel=1e-10)


def test_sobolev_norm_is_monotone_in_alpha():
    g = bump_function(radius=2.0, spacing=2**-7)
    norms = [sobolev_norm(g, alpha, 1.5) for alpha in (0, 0.5, 1, 2, 3)]
    assert norms == sorted(norms)


@pytest.mark.parametrize('alpha, p', [(-0.5, 2.0), (1.0, 0.5),
                                      (1.0, math.inf)])
def test_sobolev_norm_rejects_parameters(alpha, p):
    with pytest.raises(ParameterError):
        sobolev_norm(bump_function(), alpha, p)


def test_sobolev_norm_detects_truncated_tails():
    g = GridFunction(-1.0, 0.25, np.ones(9))
    with pytest.raises(TailTruncation):
        sobolev_norm(g, 1.0, 2.0)
    diagnostics = []
    value = sobolev_norm(g, 1.0, 2.0, strict=False, diagnostics=diagnostics)
    assert math.isfinite(value)
    assert len(diagnostics) == 1


def test_fractional_derivative_of_integer_order():
    g = bump_function(radius=3.0, spacing=2**-7)
    derivative = fractional_derivative(g, 2.0).samples[-len(g):]
    x = g.points/3
    inside = np.abs(x) < 1
    y = np.where(inside, x, 0.0)
    slope = -2*y/(1-y**2)**2
    curvature = -(2+6*y**2)/(1-y**2)**3
    second = np.where(inside, bump(x)*(slope**2+curvature)/9, 0.0)
    assert np.max(np.abs(derivative-second)) < 1e-6*np.max(np.abs(second))
    assert np.max(np.abs(derivative.imag)) < 1e-8


def test_fractional_derivative_composes():
    g = bump_function(radius=3.0)
    once = fractional_derivative(g, 1.5)
    twice = fractional_derivative(once, 1.5, padding=1, strict=False)
    direct = fractional_derivative(g, 3.0)
    assert twice.origin == pytest.approx(direct.origin)
    assert len(twice) == len(direct)
    error = np.max(np.abs(twice.samples-direct.samples))
    assert error < 1e-6*np.max(np.abs(direct.samples))


def test_fractional_derivative_keeps_right_support():
    g = bump_function(radius=3.0, center=-2.0, spacing=2**-7)
    derivative = fractional_derivative(g, 2.5)
    right = derivative.samples[derivative.points > 1 + g.spacing]
    assert np.max(np.abs(right)) < 1e-8*g.peak


def test_fractional_derivative_drops_nyquist_bin():
    g = GridFunction(0.0, 1.0, [1.0, -1.0]*8)
    derivative = fractional_derivative(g, 2.5, padding=1, strict=False)
    assert len(derivative) == 16
    assert np.max(np.abs(derivative.samples)) < 1e-12


def test_fractional_derivative_rejects_order():
    with pytest.raises(ParameterError):
        fractional_derivative(bump_function(), 0.0)


@pytest.mark.parametrize('alpha', [2.5, 3.5])
def test_reproduction_defect_is_small(alpha):
    g = bump_function(radius=3.0, lower=-8.0, upper=8.0)
    assert reproduction_defect(g, alpha) < 1e-3


def test_algebra_constant_is_stable_under_refinement(rng):
    f = windowed_smooth(0.0, 1.5, rng.standard_normal((4, 2)).tolist())
    g = windowed_smooth(0.5, 1.0, rng.standard_normal((4, 2)).tolist())
    constants = []
    for spacing in (2**-7, 2**-8):
        count = int(round(32/spacing)) + 1
        constants.append(algebra_constant(
            exp_pullback(f, -16.0, spacing, count),
            exp_pullback(g, -16.0, spacing, count), 1.0, 2.0))
    assert math.isfinite(constants[0])
    assert constants[1] == pytest.approx(constants[0], rel=0.05)


def test_grid_functions_combine_on_one_grid():
    f = GridFunction(0.0, 0.5, [1, 2, 3])
    g = GridFunction(0.0, 0.5, [1, 1, 1])
    assert (f + g).samples == pytest.approx([2, 3, 4])
    assert (2*f*g).samples == pytest.approx([2, 4, 6])
    with pytest.raises(ParameterError):
        f + GridFunction(0.25, 0.5, [1, 1, 1])


def test_grid_function_file(tmp_path):
    g = GridFunction(-1.5, 0.25, [1+2j, -0.5, 3j, 0.125])
    path = tmp_path/'g.csv'
    g.dump(path)
    loaded = GridFunction.load(path)
    assert loaded.origin == g.origin
    assert loaded.spacing == g.spacing
    assert np.array_equal(loaded.samples, g.samples)


def test_equidistant_partition_sums_to_one():
    part = make_partition(EQUIDISTANT, {'index_range': (-5, 5)})
    s = np.linspace(-3, 3, 1001)
    total = sum(part.piece(n, s) for n in range(-5, 6))
    assert np.max(np.abs(total-1)) <= 1e-10


def test_dyadic_partition_sums_to_one():
    part = make_partition(DYADIC, {'index_range': (-5, 5)})
    lam = np.linspace(0.25, 4, 1001)
    total = sum(part.piece(n, lam) for n in range(-5, 6))
    assert np.max(np.abs(total-1)) <= 1e-10


def test_partition_pieces_are_supported_in_one_period():
    part = make_partition(EQUIDISTANT, {'radius': 0.75})
    s = np.array([-1.0, -0.8, 0.8, 1.0])
    assert np.all(part.piece(0, s) == 0)
    assert part.piece(0, 0.0) == pytest.approx(1.0)


def test_partition_rejects_wide_window():
    with pytest.raises(PartitionConstruction):
        make_partition(EQUIDISTANT, {'radius': 1.5})


def test_hoermander_norm_of_constant_is_window_norm(part):
    h = 2**-7
    x = h*np.arange(-1024, 1025)
    window = GridFunction(-8.0, h, part.mother(x))
    expected = sobolev_norm(window, 1.0, 2.0)
    assert hoermander_norm(ones(), 1.0, 2.0, part) == pytest.approx(
        expected, rel=1e-12)


def test_hoermander_norm_records_best_window(part):
    f = windowed_smooth(2.0, 1.0, [[1.0, 0.0]])
    record = {}
    hoermander_norm(f, 1.0, 2.0, part, (-4, 4), record=record)
    assert record['index'] == 2
    assert abs(record['shift']-2.0) <= 1.0
    assert len(record['norms']) == 9


def test_hoermander_norm_needs_covered_range():
    part = make_partition(EQUIDISTANT, {'index_range': (-3, 3)})
    with pytest.raises(GridCoverage):
        hoermander_norm(ones(), 1.0, 2.0, part, (-5.0, 5.0))


def test_imaginary_power_norm_grows_like_t_to_alpha(part):
    norms = [hoermander_norm(standard_family(IMAGINARY_POWER, {'t': t}),
                             1.0, 2.0, part, (-1.0, 1.0))
             for t in (10, 100)]
    assert norms[1]/norms[0] == pytest.approx(10.0, rel=0.2)


def test_imaginary_power_norm_is_monotone_in_alpha(part):
    f = standard_family(IMAGINARY_POWER, {'t': 20})
    norms = [hoermander_norm(f, alpha, 2.0, part, (-1.0, 1.0))
             for alpha in (0.5, 1.0, 2.0)]
    assert norms == sorted(norms)


def test_hoermander_norm_is_dilation_invariant(part):
    f = windowed_smooth(0.3, 1.0, [[1.0, 0.0], [0.5, 0.2], [0.1, -0.3]])
    reference = hoermander_norm(f, 1.0, 2.0, part, (-4, 4))
    dilated = hoermander_norm(f.dilate(2.0), 1.0, 2.0, part, (-4, 4))
    assert dilated == pytest.approx(reference, rel=1e-6)


def test_narrow_window_norm_scales_with_radius(part):
    coefficients = [[1.0, 0.0], [0.5, 0.2]]
    norms = [hoermander_norm(windowed_smooth(0.0, radius, coefficients),
                             1.0, 2.0, part, (-2, 2))
             for radius in (2**-10, 2**-12)]
    assert norms[1]/norms[0] == pytest.approx(2.0, rel=1e-2)


def test_bochner_riesz_norm_does_not_depend_on_u(part):
    norms = []
    for u in (0.25, 1.0, 4.0):
        f = standard_family(BOCHNER_RIESZ, {'u': u, 'exponent': 1.5})
        norms.append(hoermander_norm(f, 1.2, 1.0, part, spacing=2**-9))
    assert max(norms)/min(norms) - 1 <= 1e-3


def test_classical_norm_grows_with_oscillation():
    part = make_partition(DYADIC, {'index_range': (-4, 4)})
    norms = [classical_hoermander_norm(
        standard_family(IMAGINARY_POWER, {'t': t}), 1.0, 2.0, part, (-1, 1))
        for t in (5, 40)]
    assert norms[0] < norms[1]


def test_classical_norm_needs_dyadic_partition(part):
    with pytest.raises(ParameterError):
        classical_hoermander_norm(ones(), 1.0, 2.0, part)


@pytest.mark.parametrize('kind, params, value', [
    (SECTOR_EXP, {'theta': 0.0}, math.exp(-2.0)),
    (WAVE_REGULARIZED, {'s': 0.0, 'alpha': 2.0}, 1.0),
    (IMAGINARY_POWER, {'t': 0.0}, 1.0),
    (BOCHNER_RIESZ, {'u': 4.0, 'exponent': 2.0}, 0.25),
    (RATIONAL, {'num': [0, 1], 'den': [1, 2, 1]}, 2/9),
])
def test_standard_family_values(kind, params, value):
    f = standard_family(kind, params)
    assert complex(f(2.0)) == pytest.approx(value)


def test_standard_family_metadata():
    sector = standard_family(SECTOR_EXP, {'theta': 0.3})
    assert sector.holomorphy_angle == pytest.approx(math.pi/2-0.3)
    assert sector.decay_at_infinity
    riesz = standard_family(BOCHNER_RIESZ, {'u': 2, 'exponent': 1})
    assert riesz.holomorphy_angle is None
    assert riesz.support == (0.0, 2.0)
    power = standard_family(IMAGINARY_POWER, {'t': 1})
    assert power.holomorphy_angle == pytest.approx(math.pi)
    assert not power.decay_at_zero and not power.decay_at_infinity
    rational = standard_family(RATIONAL, {'num': [0, 1], 'den': [1, 2, 1]})
    assert rational.holomorphy_angle == pytest.approx(math.pi)
    assert rational.decay_at_zero and rational.decay_at_infinity


@pytest.mark.parametrize('kind, params', [
    (SECTOR_EXP, {'theta': math.pi}),
    (BOCHNER_RIESZ, {'u': 0.0, 'exponent': 1.0}),
    (BOCHNER_RIESZ, {'u': 1.0, 'exponent': -1.0}),
    (WAVE_REGULARIZED, {'s': 1.0, 'alpha': -1.0}),
    (RATIONAL, {'num': [1], 'den': [0]}),
    (CUSTOM, {}),
])
def test_standard_family_rejects_parameters(kind, params):
    with pytest.raises(ParameterError):
        standard_family(kind, params)


def test_multiplier_domain():
    f = standard_family(SECTOR_EXP, {'theta': 0.0})
    with pytest.raises(DomainError):
        f(-1.0)
    riesz = standard_family(BOCHNER_RIESZ, {'u': 1, 'exponent': 1})
    with pytest.raises(PreconditionError):
        riesz(1j)
    assert complex(f(1j)) == pytest.approx(np.exp(-1j))


def test_log_taylor_of_imaginary_power():
    t = 3.0
    f = standard_family(IMAGINARY_POWER, {'t': t})
    expected = [(1j*t)**k/math.factorial(k) for k in range(4)]
    assert f.log_taylor(3) == pytest.approx(expected, rel=1e-10)


def test_log_taylor_by_finite_differences():
    closed = standard_family(RATIONAL, {'num': [0, 1], 'den': [1, 2, 1]})
    custom = MultiplierFunction(CUSTOM, function=lambda lam: lam/(1+lam)**2)
    assert custom.log_taylor(3) == pytest.approx(closed.log_taylor(3),
                                                 rel=1e-4, abs=1e-5)


def test_multiplier_descriptor_keeps_dilation_and_amplitude():
    f = windowed_smooth(0.0, 1.0, [[1.0, 0.0]]).dilate(2.0).scaled(3.0)
    g = MultiplierFunction.from_json(f.to_json())
    assert complex(g(0.5)) == pytest.approx(3.0)
    assert g.support == pytest.approx(f.support)


def test_bump_is_normalized():
    assert bump(0.0) == pytest.approx(1.0)
    assert np.all(bump(np.array([-1.0, 1.0, 2.0])) == 0)


def test_windowed_log_taylor_matches_finite_differences():
    f = windowed_smooth(0.2, 1.0, [[1.0, 0.0], [0.4, -0.3]])
    f = f.dilate(1.5).scaled(2.0)
    custom = MultiplierFunction(CUSTOM, function=f)
    np.testing.assert_allclose(f.log_taylor(3), custom.log_taylor(3),
                               rtol=1e-4, atol=1e-5)


def test_windowed_log_taylor_scales_with_radius():
    coefficients = [[1.0, 0.0], [0.5, 0.2]]
    wide = windowed_smooth(0.0, 1.0, coefficients)
    radius = 2.0**-20
    narrow = windowed_smooth(0.0, radius, coefficients)
    taylor = narrow.log_taylor(3)
    assert taylor[0] == pytest.approx(1.5)
    np.testing.assert_allclose(taylor*radius**np.arange(4),
                               wide.log_taylor(3), rtol=1e-12, atol=1e-14)


def test_windowed_log_taylor_outside_support():
    f = windowed_smooth(2.0, 0.5, [[1.0, 0.0]])
    assert np.all(f.log_taylor(3) == 0)


def test_pullback_resolves_narrow_windows():
    radius = 2.0**-40
    f = windowed_smooth(0.0, radius, [[1.0, 0.0]])
    assert complex(f.pullback(0.0)) == pytest.approx(1.0)
    assert complex(f.pullback(radius/2)) == pytest.approx(float(bump(0.5)))
    assert complex(f.pullback(2*radius)) == 0
    assert f.log_support == (-radius, radius)
