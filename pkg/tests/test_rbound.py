import math

import numpy as np
import pytest

from smlab.config import config
from smlab.main.case import EXHAUSTIVE, MONTE_CARLO
from smlab.main.case import HILBERT_EXACT, SINGLETON_EXACT
from smlab.main.errors import ParameterError
from smlab.main.operators import OperatorFamily, lp_norm
from smlab.main.operators import diagonal_model, jordan_model
from smlab.main.rbound import SearchConfig, RBoundEstimate, Witness
from smlab.main.rbound import rademacher_mean, rbound_lower, semi_rbound_lower
from smlab.main.rbound import hoermander_ball_family, localized_family

from conftest import random_matrices


def random_family(rng, count=3, n=3, p=1.5, label='T'):
    matrices = random_matrices(rng, count, n)
    return OperatorFamily(label, list(enumerate(matrices)), p)


def test_mean_of_one_vector():
    assert rademacher_mean([[3.0, 4.0]], 2.0) == pytest.approx(5.0)


@pytest.mark.parametrize('p, value', [(2.0, math.sqrt(2)), (1.0, 2.0)])
def test_mean_of_unit_vectors(p, value):
    assert rademacher_mean(np.eye(2), p) == pytest.approx(value)


def test_mean_records_method():
    record = {}
    rademacher_mean(np.eye(3), 1.5, record=record)
    assert record == {'method': EXHAUSTIVE, 'stderr': None, 'samples': 8}


def test_monte_carlo_mean_agrees_with_exhaustive(rng, monkeypatch):
    vectors = rng.standard_normal((8, 3)) + 1j*rng.standard_normal((8, 3))
    exact = rademacher_mean(vectors, 1.5)
    monkeypatch.setitem(config['SEARCH'], 'exhaustive_limit', 4)
    misses = 0
    for seed in range(20):
        record = {}
        mean = rademacher_mean(vectors, 1.5, 20000, seed, record=record)
        assert record['method'] == MONTE_CARLO
        assert record['samples'] == 20000
        if abs(mean-exact) > 3*record['stderr']:
            misses += 1
    assert misses <= 1


def test_monte_carlo_mean_is_reproducible(rng, monkeypatch):
    vectors = rng.standard_normal((6, 2))
    monkeypatch.setitem(config['SEARCH'], 'exhaustive_limit', 2)
    first = rademacher_mean(vectors, 1.5, 5000, seed=7)
    assert rademacher_mean(vectors, 1.5, 5000, seed=7) == first
    assert rademacher_mean(vectors, 1.5, 5000, seed=8) != first


def test_mean_needs_vectors():
    with pytest.raises(ParameterError):
        rademacher_mean(np.zeros((0, 2)), 2.0)


def test_singleton_is_exact(rng, search):
    family = random_family(rng, count=1)
    estimate = rbound_lower(family, search)
    assert estimate.method == SINGLETON_EXACT
    bracket = lp_norm(family.matrices[0], 1.5)
    assert estimate.lower == pytest.approx(bracket.lower)
    assert estimate.upper == pytest.approx(bracket.upper)


def test_hilbert_space_is_exact(rng, search):
    family = random_family(rng, count=4, p=2.0)
    estimate = rbound_lower(family, search)
    assert estimate.method == HILBERT_EXACT
    norms = [bracket.lower for bracket in family.norms()]
    assert estimate.lower == pytest.approx(max(norms), rel=1e-6)


def test_scalar_multiples_of_identity(search):
    family = OperatorFamily('aI', [(a, a*np.eye(2)) for a in (1.0, 2.0)], 1.5)
    estimate = rbound_lower(family, search)
    assert estimate.lower == pytest.approx(2.0)
    assert estimate.upper == pytest.approx(2.0)


def test_coordinate_projections_on_l1(search):
    family = OperatorFamily('P', [(0, np.diag([1.0, 0.0])),
                                  (1, np.diag([0.0, 1.0]))], 1.0)
    estimate = rbound_lower(family, search)
    assert estimate.lower == pytest.approx(1.0, rel=1e-9)


def test_semi_bound_is_below_bound(rng, search):
    family = random_family(rng, count=4)
    semi = semi_rbound_lower(family, search)
    full = rbound_lower(family, search)
    assert semi.lower <= full.lower*(1+1e-12)
    assert semi.witness.scalars is not None


def test_bound_is_at_least_largest_norm(rng, search):
    family = random_family(rng, count=4)
    estimate = rbound_lower(family, search)
    norms = [bracket.lower for bracket in family.norms()]
    assert estimate.lower >= max(norms)*(1-1e-12)


def test_witness_is_reproducible(rng, search):
    family = random_family(rng, count=4)
    estimate = rbound_lower(family, search)
    assert estimate.reevaluate(family, search) == pytest.approx(
        estimate.lower, rel=1e-10)
    assert estimate.seed == search.seed
    again = rbound_lower(family, search)
    assert again.lower == estimate.lower
    assert again.witness.indices == estimate.witness.indices


def test_scalar_contraction(rng, search):
    family = random_family(rng, count=4)
    estimate = rbound_lower(family, search)
    doubled = rbound_lower(family.scaled(2.0), search)
    assert doubled.lower == pytest.approx(2*estimate.lower, rel=1e-9)


def test_monotone_under_union(rng, search):
    family = random_family(rng, count=3)
    other = random_family(rng, count=2, label='S')
    estimate = rbound_lower(family, search)
    union = rbound_lower(family.union(other), search, [estimate.witness])
    assert union.lower >= estimate.lower


def test_search_config_overlay():
    search = SearchConfig.from_config({'tuples': [1, 2], 'seed': 5,
                                       'unknown': 1, 'restarts': None})
    assert search.tuples == (1, 2)
    assert search.seed == 5
    assert search.restarts == config['SEARCH']['restarts']
    assert SearchConfig.from_config({'tuples': 3}).tuples == (3,)


def spreading_family(n):
    """Get T_j x = x_1 e_j on ℓ¹, whose R-bound grows like sqrt(K)."""
    members = []
    for j in range(n):
        matrix = np.zeros((n, n))
        matrix[j, 0] = 1.0
        members.append((j, matrix))
    return OperatorFamily('E', members, 1.0)


def test_long_tuples_are_sampled_with_seeded_signs():
    family = spreading_family(24)
    search = SearchConfig(tuples=(24,), restarts=1, iterations=1,
                          samples=4000, seed=2)
    estimate = rbound_lower(family, search)
    assert len(estimate.witness.indices) == 24
    assert estimate.method == MONTE_CARLO
    assert estimate.samples == 4000
    assert estimate.lower > 4.0
    assert 0 < estimate.stderr < 0.1*estimate.lower
    assert estimate.reevaluate(family, search) == estimate.lower


def test_sampled_quotient_shares_signs():
    family = OperatorFamily('I', [(0, np.eye(3)), (1, 2*np.eye(3))], 1.5)
    rng = np.random.default_rng(5)
    vectors = rng.standard_normal((24, 3))
    search = SearchConfig(tuples=(24,), samples=500, seed=1)
    witness = Witness(tuple([0]*24), vectors)
    estimate = RBoundEstimate(0.0, MONTE_CARLO, witness)
    assert estimate.reevaluate(family, search) == pytest.approx(1.0,
                                                                rel=1e-12)


@pytest.mark.parametrize('options', [
    {'tuples': ()}, {'tuples': (0,)}, {'tuples': (65,)},
    {'restarts': 0}, {'samples': 1}, {'exhaustive_limit': 30},
])
def test_search_config_rejects_budget(options):
    with pytest.raises(ParameterError):
        SearchConfig(**options)
    if 'tuples' in options and options['tuples']:
        with pytest.raises(ParameterError):
            SearchConfig.from_config({'tuples': list(options['tuples'])})


def test_estimate_descriptor(rng, search):
    estimate = rbound_lower(random_family(rng, count=2), search)
    descriptor = estimate.to_json()
    assert descriptor['lower'] == estimate.lower
    assert descriptor['method'] == EXHAUSTIVE
    assert len(descriptor['witness']['indices']) == len(
        descriptor['witness']['vectors'])
    assert isinstance(estimate, RBoundEstimate)


def test_ball_family_of_one_member(search):
    A = diagonal_model([1.0, 2.0], 1.5)
    family = hoermander_ball_family(A, 1.0, 2.0, 1, seed=4)
    assert len(family) == 1
    estimate = rbound_lower(family, search)
    assert estimate.lower == pytest.approx(family.norms()[0].lower)


def test_ball_family_is_seeded():
    A = diagonal_model([1.0, 2.0])
    first = hoermander_ball_family(A, 1.0, 2.0, 3, seed=4)
    second = hoermander_ball_family(A, 1.0, 2.0, 3, seed=4)
    for left, right in zip(first.matrices, second.matrices):
        assert np.array_equal(left, right)


def test_ball_family_needs_members():
    with pytest.raises(ParameterError):
        hoermander_ball_family(diagonal_model([1.0]), 1.0, 2.0, 0, seed=0)


def test_localized_family_levels():
    A = diagonal_model([1.0])
    family = localized_family(A, 1.0, 2.0, 2, seed=1)
    assert len(family) == 2*3
    assert family.params[0] == (0, -1)
    family = localized_family(A, 1.0, 2.0, 2, seed=1, levels=[0])
    assert len(family) == 2


def test_ball_family_diverges_below_critical_order(search):
    A = jordan_model(1)
    lowers = {}
    for depth in (0, 30):
        for beta in (1.6, 1.4):
            family = hoermander_ball_family(A, beta, 2.0, 8, seed=2,
                                            depth=depth)
            lowers[depth, beta] = rbound_lower(family, search).lower
    assert lowers[0, 1.4]/lowers[0, 1.6] < 3.0
    assert lowers[30, 1.4]/lowers[30, 1.6] > 4.0


def test_ball_family_needs_nonnegative_depth():
    with pytest.raises(ParameterError):
        hoermander_ball_family(diagonal_model([1.0]), 1.0, 2.0, 2, seed=0,
                               depth=-1)
