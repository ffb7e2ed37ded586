import math
from dataclasses import asdict

import numpy as np
import pytest

from denselogz import exact
from denselogz.errors import ResourceError
from denselogz.estimator import (
    Budget,
    EstimatorConfig,
    GridSpec,
    cell_value,
    compute_gamma,
    entropy_round_check,
    estimate_log_z,
    estimate_log_z_mrf,
    granulation_bound,
    large_n_condition,
    overlap_bound,
    small_n_bound,
)
from denselogz.entropy import binary_entropy
from denselogz.model import IsingInstance, MrfInstance, gen_curie_weiss, gen_random_dense, gen_tightness_pair
from denselogz.refinement import refine
from denselogz.regularity import CutDecomposition, cut_matrix, fk_decompose


def test_gamma_examples():
    assert compute_gamma(0.5, 1.0, 0) == 1.0
    assert compute_gamma(0.5, 1.0, 1) == pytest.approx(0.5 / (4 * math.sqrt(27)))
    assert compute_gamma(0.5, 1.0, 4) == pytest.approx(0.006014, abs=1e-6)
    assert compute_gamma(0.5, 0.25, 2) == pytest.approx(0.5 * 0.5 / (8 * math.sqrt(27)))


def test_grid_spec():
    g = GridSpec(0.25, s=1, k=2)
    assert g.top == 4 and g.size == 5
    assert np.allclose(g.points, [0, 0.25, 0.5, 0.75, 1.0])
    assert g.literal_cells == 25
    assert g.cell_index([0.0, 0.3, 0.5, 1.0]).tolist() == [0, 1, 2, 4]


def test_entropy_round_check_small_sweep():
    for n in range(1, 20):
        for z in np.arange(0.0, n + 1e-9, 0.01):
            z = min(float(z), n)
            y = entropy_round_check(n, z)
            assert 0 <= y <= n and abs(y - z) < 1
            assert n * binary_entropy(y / n) >= n * binary_entropy(z / n) - math.log(5)
    with pytest.raises(ValueError):
        entropy_round_check(3, 3.5)


def _full_cut_partition(n, d):
    dec = CutDecomposition(n=n, order=2, cuts=(cut_matrix(range(n), range(n), d),), eps=0.5,
                           threshold=0.0, target_l2=0.0, residual=np.zeros((n, n)))
    return refine(n, dec)


def test_cell_value_no_cuts():
    assert cell_value(refine(5, None), [], 0.1, 1e-3) == pytest.approx(5 * math.log(2))


def test_cell_value_single_cut():
    n, d, gamma = 8, 0.1, 0.125
    part = _full_cut_partition(n, d)
    rbar = 0.25
    val = cell_value(part, [[rbar, rbar]], gamma, 1e-6)
    expected = d * (2 * n * rbar - n) ** 2 + n * binary_entropy(rbar + gamma)
    assert val == pytest.approx(expected, abs=1e-4)


def test_cell_value_infeasible_pair():
    part = _full_cut_partition(6, 0.1)
    assert cell_value(part, [[0.0, 0.5]], 0.1, 1e-3) is None


def test_granulation_covers_cell_energy():
    n, d, gamma = 10, 0.3, 0.1
    part = _full_cut_partition(n, d)
    G = granulation_bound(part, gamma)
    assert G == pytest.approx(d * 2 * (2 * n * gamma) * n)
    for k in range(int(1 / gamma)):
        corner = d * (2 * n * k * gamma - n) ** 2
        for y in range(n + 1):
            if k * gamma <= y / n <= (k + 1) * gamma:
                assert abs(d * (2 * y - n) ** 2 - corner) <= G + 1e-9


def test_overlap_bound_is_smaller_than_small_n():
    dec = fk_decompose(gen_random_dense(10, 1.0, 0), 0.3)
    part = refine(10, dec)
    assert 0 <= overlap_bound(part) <= small_n_bound(part)


def test_large_n_condition():
    assert large_n_condition(10, 0, 0.5, 1.0)
    assert not large_n_condition(100, 3, 0.5, 1.0)
    assert large_n_condition(10**9, 2, 0.5, 1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        EstimatorConfig(eps=0.0)
    with pytest.raises(ValueError):
        EstimatorConfig(sweep="random")
    cfg = EstimatorConfig(eps=0.4, fail_prob=0.125)
    assert cfg.lam_used == 0.2
    assert cfg.repetitions == math.ceil(8 * math.log(8))


def test_zero_instance_exact():
    rep = estimate_log_z(IsingInstance(np.zeros((7, 7))), 0.5)
    assert rep.log_z_hat == 7 * math.log(2)
    assert rep.width == 0


def test_curie_weiss_within_budget():
    inst = gen_curie_weiss(14, 0.8)
    rep = estimate_log_z(inst, 0.6, seed=0)
    truth = exact.exact_log_z(inst).log_value
    assert abs(rep.log_z_hat - truth) <= rep.budget.total
    assert set(rep.as_dict()) >= {"log_z_hat", "budget", "width", "atoms", "gamma", "lambda", "runs"}


def test_tightness_pair_within_budget():
    for inst in gen_tightness_pair(12, 3.0, 0.2, 0.25, seed=0):
        rep = estimate_log_z(inst, 0.6, seed=1)
        assert abs(rep.log_z_hat - exact.exact_log_z(inst).log_value) <= rep.budget.total


def test_field_instance_within_budget():
    base = gen_random_dense(8, 1.0, 5)
    inst = base.with_field(np.random.default_rng(0).normal(size=8))
    rep = estimate_log_z(inst, 0.6)
    assert abs(rep.log_z_hat - exact.exact_log_z(inst).log_value) <= rep.budget.total


def test_resource_error_when_caps_small():
    inst = gen_random_dense(10, 1.0, 0)
    with pytest.raises(ResourceError) as exc:
        estimate_log_z(inst, 0.5, cap_profiles=1, cap_cells=1)
    assert exc.value.cap == 1


def test_grid_sweep_agrees_with_profile_sweep_on_one_cut():
    inst = gen_curie_weiss(10, 1.0)
    a = estimate_log_z(inst, 0.8, sweep="profiles")
    b = estimate_log_z(inst, 0.8, sweep="grid")
    truth = exact.exact_log_z(inst).log_value
    assert abs(b.log_z_hat - truth) <= b.budget.total
    assert abs(a.log_z_hat - b.log_z_hat) <= a.budget.granulation + a.budget.solver + 2 * a.budget.stirling


def test_median_and_worst_budget_over_runs():
    inst = gen_random_dense(10, 1.0, 4)
    rep = estimate_log_z(inst, 0.8, fail_prob=0.5, mode="sampled", seed=2)
    assert len(rep.runs) == rep.repetitions == math.ceil(8 * math.log(2))
    assert rep.log_z_hat == float(np.median(rep.runs))
    assert rep.budget.total == max(d.budget.total for d in rep.run_details)


def test_exact_cut_mode_runs_once():
    rep = estimate_log_z(gen_random_dense(8, 1.0, 4), 0.8, mode="exact")
    assert len(rep.runs) == 1 and rep.reference["deterministic_runs"]


def test_deterministic_across_threads():
    inst = gen_random_dense(12, 1.0, 4)
    a = estimate_log_z(inst, 0.8, fail_prob=0.5, mode="sampled", seed=5, threads=1).as_dict()
    b = estimate_log_z(inst, 0.8, fail_prob=0.5, mode="sampled", seed=5, threads=4).as_dict()
    assert a == b


def test_budget_monotone_in_eps_curie_weiss():
    inst = gen_curie_weiss(12, 1.5)
    totals = [estimate_log_z(inst, e).budget.total for e in (0.4, 0.6, 0.8)]
    assert totals == sorted(totals)


@pytest.mark.xfail(strict=True, reason="width shrinks as eps grows, so the budget is not monotone here")
def test_budget_monotone_in_eps_random():
    inst = gen_random_dense(12, 1.0, 1)
    totals = [estimate_log_z(inst, e).budget.total for e in (0.4, 0.6, 0.8)]
    assert totals == sorted(totals)


def test_budget_dict():
    b = Budget(1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    assert b.total == 21.0 and b.as_dict()["total"] == 21.0
    assert Budget.worst([b, Budget(0, 0, 0, 0, 0, 30.0)]).small_n == 30.0


def test_mrf_within_budget_small():
    inst = MrfInstance(6, 3, {(0, 1, 2): 0.5, (3, 4, 5): -0.4, (0, 3, 5): 0.3})
    rep = estimate_log_z_mrf(inst, 0.8, seed=0)
    assert abs(rep.log_z_hat - exact.exact_log_z_mrf(inst).log_value) <= rep.budget.total


def test_type_checks():
    with pytest.raises(TypeError):
        estimate_log_z(MrfInstance(3, 3), 0.5)
    with pytest.raises(TypeError):
        estimate_log_z_mrf(IsingInstance(np.zeros((2, 2))), 0.5)


def test_overrides_compose_with_config():
    cfg = EstimatorConfig(eps=0.4, seed=3)
    rep = estimate_log_z(gen_curie_weiss(8, 1.0), config=cfg, lam=0.1)
    assert rep.lam == 0.1 and rep.eps == 0.4 and rep.seed == 3
    assert asdict(cfg)["lam"] is None
