from unittest.mock import Mock

import numpy as np
import pytest

from bockstein_quad import properties
from bockstein_quad.bockstein import is_bockstein_closed
from bockstein_quad.properties import (
    PropertyResult, closed_corpus, derived_closed_map, random_morphism, run_all,
)


@pytest.mark.parametrize('battery', [
    properties.bockstein_battery,
    properties.solve_battery,
    properties.parse_battery,
    properties.polar_battery,
    properties.morphism_battery,
])
def test_cheap_batteries(battery):
    result = battery(seed=1, instances=50)
    assert result.passed, result.witness
    assert result.instances == 50


def test_p_matches_closedness():
    result = properties.p_vs_l_battery(seed=2, instances=10)
    assert result.passed, result.witness
    assert result.instances > 70


def test_closed_corpus():
    corpus = closed_corpus(seed=3, count=6)
    assert len(corpus) <= 6
    assert all(is_bockstein_closed(q) for q in corpus)


@pytest.mark.parametrize('battery', [
    properties.delta_squared_battery,
    properties.extension_battery,
    properties.brute_force_battery,
])
def test_structured_batteries(battery):
    result = battery(seed=4, instances=8)
    assert result.passed, result.witness
    assert result.instances == 8


def test_realize_battery():
    result = properties.realize_battery(seed=5, instances=8)
    assert result.passed, result.witness
    assert result.instances == 8


def test_property_result():
    result = PropertyResult('x', 2)
    assert result.passed
    result.fail([1, 2])
    result.fail([3])
    assert result.to_dict() == {'passed': False, 'instances': 2, 'failures': 2,
                                'witness': '[1, 2]'}


def test_run_all_uses_config_caps():
    config = Mock(polar_check_cap=6, p_check_cap=4, brute_force_cap=12)
    results = run_all(seed=0, instances=8, config=config)
    assert len(results) == 10
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_derived_maps_stay_closed():
    rng = np.random.RandomState(6)
    corpus = closed_corpus(seed=6, count=8)
    for _ in range(20):
        q = corpus[rng.randint(len(corpus))]
        derived = derived_closed_map(rng, q)
        assert derived.n == q.n
        assert is_bockstein_closed(derived)


def test_random_morphisms_are_morphisms():
    rng = np.random.RandomState(7)
    for _ in range(50):
        phi = random_morphism(rng, max_order=8)
        assert phi.verify()
        assert phi.source.m + phi.source.n <= 8
        assert phi.target.m + phi.target.n <= 8
