"""Signal corpus: determinism, manifest, family constructors."""
import json
import math

import numpy as np
import pytest

from lcdunkl.corpus import (FAMILIES, bump_profile, corpus_default, corpus_manifest, make_gaussian,
                            make_indicator, make_poly_gaussian, make_random_trig_bump,
                            make_signal, make_smooth_bump)
from lcdunkl.errors import ParameterOutOfRange


def test_default_corpus_covers_every_family():
    entries = corpus_default()
    assert len(entries) == 20
    assert {e.family for e in entries} == set(FAMILIES)
    assert len({e.signal.label for e in entries}) == 20


def test_corpus_is_deterministic():
    x = np.linspace(-4, 4, 101)
    a, b = corpus_default(7), corpus_default(7)
    for ea, eb in zip(a, b):
        np.testing.assert_array_equal(ea.signal(x), eb.signal(x))
    assert corpus_manifest(a) == corpus_manifest(b)


def test_seed_changes_only_random_entries():
    x = np.linspace(-3, 3, 61)
    a, b = corpus_default(0), corpus_default(1)
    for ea, eb in zip(a, b):
        same = np.array_equal(ea.signal(x), eb.signal(x))
        assert same == (ea.family != "random_trig_bump")


def test_manifest_round_trips_to_signals():
    entries = corpus_default(3)
    x = np.linspace(-3, 3, 41)
    for item, e in zip(json.loads(corpus_manifest(entries)), entries):
        rebuilt = make_signal(item["family"], item["params"], item["seed"])
        assert rebuilt.label == item["label"]
        np.testing.assert_array_equal(rebuilt(x), e.signal(x))


def test_family_values():
    x = np.array([-1.0, 0.0, 0.5])
    np.testing.assert_allclose(make_gaussian(2.0, 1.0)(x), np.exp(-(2 + 1j) * x ** 2))
    np.testing.assert_allclose(make_poly_gaussian(3, 0.5)(x), x ** 3 * np.exp(-0.5 * x ** 2))
    np.testing.assert_array_equal(make_indicator(1.0)(np.array([-1.0, -0.99, 0.99, 1.0])),
                                  [0, 1, 1, 0])


def test_bump_profile():
    r = 2.0
    assert bump_profile(0.0, r) == 1.0
    x = np.linspace(-3, 3, 601)
    v = bump_profile(x, r)
    assert np.all(v[np.abs(x) >= r] == 0) and np.all(v[np.abs(x) < 0.9 * r] > 0)
    np.testing.assert_array_equal(v, bump_profile(-x, r))
    # flat to all orders at the edge
    assert bump_profile(r * (1 - 1e-3), r) < 1e-100
    np.testing.assert_array_equal(make_smooth_bump(r)(x), v + 0j)


def test_random_trig_bump_seeded():
    x = np.linspace(-2, 2, 17)
    a = make_random_trig_bump(2.0, 4, 3.0, 11)(x)
    np.testing.assert_array_equal(a, make_random_trig_bump(2.0, 4, 3.0, 11)(x))
    assert not np.array_equal(a, make_random_trig_bump(2.0, 4, 3.0, 12)(x))
    assert np.all(make_random_trig_bump(2.0, 4, 3.0, 11)(np.array([2.0, -2.5])) == 0)


def test_decay_radius_makes_tails_negligible():
    for f in (make_gaussian(0.5), make_poly_gaussian(4, 2.0), make_poly_gaussian(1, 1.0)):
        R = f.decay_radius
        assert abs(f(np.array([R]))[0]) < 1e-15 and math.isfinite(R)


@pytest.mark.parametrize("call", [lambda: make_gaussian(0.0), lambda: make_poly_gaussian(7, 1.0),
                                  lambda: make_poly_gaussian(2, -1.0), lambda: make_indicator(0.0),
                                  lambda: make_smooth_bump(-1.0),
                                  lambda: make_random_trig_bump(1.0, 0, 1.0, 0),
                                  lambda: make_signal("nope", {})])
def test_invalid_parameters(call):
    with pytest.raises(ParameterOutOfRange):
        call()
