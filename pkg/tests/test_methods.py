"""Verify the method registry and that every plugin yields distortionless weights."""
import os
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

import dataclasses

import numpy as np
import pytest

from src.errors import ConfigurationError
from src.methods.interface import (
    BeamformerMethod,
    get_method,
    list_registered_ids,
    load_methods_from_config,
    register_method,
)
from src.runner import simulate_trial
from src.scenario import ScenarioConfig

ALL_IDS = ["optimal", "smi", "linear", "urglq", "urglq_uncorrected"]


def test_load_by_id():
    methods = load_methods_from_config(ALL_IDS)
    assert [m.method_id for m in methods] == ALL_IDS
    assert all(isinstance(m, BeamformerMethod) for m in methods)
    assert get_method("urglq") is methods[3]
    assert set(ALL_IDS) <= set(list_registered_ids())


def test_unknown_method_is_an_error():
    with pytest.raises(ConfigurationError):
        load_methods_from_config(["urglq", "no_such_method"])
    with pytest.raises(TypeError):
        register_method(object())


def test_every_method_is_distortionless():
    ctx = simulate_trial(ScenarioConfig(trials=1), 20.0, 30, 0)
    for method in load_methods_from_config(ALL_IDS):
        w = method.weights(ctx)
        assert w.label == method.method_id
        assert np.all(np.isfinite(w.weights))
        assert w.distortionless_error <= 1e-10


def test_uncorrected_keeps_presumed_steering():
    ctx = simulate_trial(ScenarioConfig(trials=1), 20.0, 30, 0)
    w = get_method("urglq_uncorrected").weights(ctx)
    assert np.allclose(w.steering, ctx.presumed_steering)


def test_optimal_needs_truth():
    ctx = simulate_trial(ScenarioConfig(trials=1), 20.0, 30, 0)
    recorded = dataclasses.replace(ctx, realization=None, true_ipncm=None)
    assert not recorded.has_truth
    with pytest.raises(ConfigurationError):
        get_method("optimal").weights(recorded)


if __name__ == "__main__":
    test_load_by_id()
    test_unknown_method_is_an_error()
    print("Registry OK")
    test_every_method_is_distortionless()
    test_uncorrected_keeps_presumed_steering()
    test_optimal_needs_truth()
    print("Methods OK")
