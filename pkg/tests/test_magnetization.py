import math

import numpy as np
import pytest

from denselogz import exact
from denselogz.magnetization import estimate_magnetization, exact_slopes, phase_instance, phase_sensitivity_demo
from denselogz.model import IsingInstance, gen_curie_weiss, gen_random_dense


def test_zero_instance_symmetric():
    est = estimate_magnetization(IsingInstance(np.zeros((6, 6))), 0.0, eps=0.5)
    assert abs(est.value) <= est.slope_tolerance
    assert est.bracket[0] <= 0.0 <= est.bracket[1]
    assert est.delta_used == pytest.approx(math.sqrt(0.5))


def test_ferromagnet_bracket_contains_exact():
    inst = gen_curie_weiss(10, 1.5)
    est = estimate_magnetization(inst, 0.3, eps=0.5)
    d = est.delta_used
    lo, hi = exact.exact_magnetization(inst, 0.3 - d), exact.exact_magnetization(inst, 0.3 + d)
    assert est.bracket[0] <= hi and lo <= est.bracket[1]
    assert est.density_ok


def test_exact_slopes_bracket_derivative():
    inst = gen_random_dense(8, 1.0, 2)
    for h0 in (-0.5, 0.0, 0.4):
        left, right = exact_slopes(inst, h0, 0.3)
        m = exact.exact_magnetization(inst, h0)
        assert left - 1e-9 <= m <= right + 1e-9


def test_log_z_convex_in_shift():
    inst = gen_random_dense(9, 0.5, 7)
    hs = np.linspace(-1, 1, 11)
    vals = np.array([exact.exact_log_z(inst.shifted(h)).log_value for h in hs])
    assert np.all(vals[2:] - 2 * vals[1:-1] + vals[:-2] >= -1e-9)


def test_derivative_identity():
    inst = gen_random_dense(7, 1.0, 1)
    t = 1e-5
    fd = (exact.exact_log_z(inst.shifted(0.2 + t)).log_value
          - exact.exact_log_z(inst.shifted(0.2 - t)).log_value) / (2 * t)
    assert fd == pytest.approx(exact.exact_magnetization(inst, 0.2), abs=1e-5)


def test_phase_demo_swing():
    rep = phase_sensitivity_demo(2, C=5.0, seed=0)
    mags = rep.magnetization
    assert mags[0] == pytest.approx(0.0, abs=1e-9)
    # a strongly coupled block follows the planted field almost as one spin: swing ~ block * tanh(X)
    assert mags[1] == pytest.approx(rep.block_size * math.tanh(1.0), rel=1e-3)
    assert mags[-1] == pytest.approx(-mags[1])
    with pytest.raises(ValueError):
        phase_sensitivity_demo(7)


def test_phase_instance_layout():
    inst = phase_instance(2, 1.0, 0, 0.5)
    assert inst.n == 8
    assert inst.h.tolist() == [0.5, 0, 0, 0, 1, 1, -1, -1]
    assert inst.J[:4, :4].min() == 1.0 and not inst.J[4:].any()
