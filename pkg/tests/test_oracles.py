"""The frozen reference tables agree with a fresh mpmath evaluation."""
import sys
from pathlib import Path

import pytest

pytest.importorskip("mpmath")
sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from test_measure import MOMENT_07, POLY2_NORMS  # noqa: E402
from test_special import J_VALUES, KERNEL_VALUES  # noqa: E402
from test_transform import INDICATOR_DUNKL, POLY1_DUNKL  # noqa: E402

REL = 1e-18


def close(a, b):
    return abs(float(a) - b) <= REL * max(abs(b), 1e-300) + 1e-30


def test_bessel_and_kernel_tables():
    for k, x, v in J_VALUES:
        assert close(oracles.j(str(k), str(x)), v)
    for k, lam, x, re, im in KERNEL_VALUES:
        e = oracles.kernel(str(k), str(lam), str(x))
        assert close(e.real, re) and close(e.imag, im)


def test_transform_tables():
    for k, r, mu, v in INDICATOR_DUNKL:
        assert close(oracles.indicator_dunkl(str(k), str(r), str(mu)), v)
    for k, d, mu, im in POLY1_DUNKL:
        assert close(oracles.poly1_dunkl_imag(str(k), str(d), str(mu)), im)


def test_norm_tables():
    for k, p, v in POLY2_NORMS:
        assert close(oracles.poly2_norm(str(k), str(p)), v)
    assert close(oracles.moment_norm("0.7", "0"), MOMENT_07)
