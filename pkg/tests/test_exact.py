import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_log_z
from denselogz import exact
from denselogz.errors import ResourceError
from denselogz.model import IsingInstance, MrfInstance, gen_curie_weiss, gen_random_dense, gen_random_mrf
from denselogz.refinement import refine
from denselogz.regularity import CutDecomposition, fk_decompose


def test_log_z_zero_instance():
    assert exact.exact_log_z(IsingInstance(np.zeros((3, 3)))).log_value == pytest.approx(3 * math.log(2))


def test_log_z_two_spins():
    J = np.array([[0.0, 0.5], [0.5, 0.0]])
    res = exact.exact_log_z(IsingInstance(J))
    assert res.log_value == pytest.approx(math.log(2 * math.e + 2 / math.e))
    assert res.states_enumerated == 4


def test_log_z_triangle_against_loop():
    J = np.full((3, 3), 0.2)
    np.fill_diagonal(J, 0.0)
    total = 0.0
    for x in itertools.product([-1, 1], repeat=3):
        total += math.exp(sum(J[i, j] * x[i] * x[j] for i in range(3) for j in range(3)))
    assert exact.exact_log_z(IsingInstance(J)).log_value == pytest.approx(math.log(total), abs=1e-12)


@given(seed=st.integers(0, 1000), n=st.integers(1, 8))
@settings(max_examples=25, deadline=None)
def test_log_z_matches_reference_with_field(seed, n):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n))
    J = (A + A.T) / 2
    h = rng.normal(size=n)
    got = exact.exact_log_z(IsingInstance(J, h)).log_value
    assert got == pytest.approx(brute_log_z(J, h), abs=1e-9)


def test_log_z_is_stable_for_huge_couplings():
    res = exact.exact_log_z(gen_curie_weiss(10, 5000.0))
    assert math.isfinite(res.log_value)


def test_caps_raise_resource_error():
    with pytest.raises(ResourceError):
        exact.exact_log_z(IsingInstance(np.zeros((5, 5))), cap_n=4)
    with pytest.raises(ResourceError):
        exact.exact_inf_to_one_norm(np.zeros((5, 5)), cap_n=4)
    with pytest.raises(ResourceError):
        exact.exact_magnetization(IsingInstance(np.zeros((5, 5))), cap_n=4)
    with pytest.raises(ResourceError):
        exact.exact_log_z_mrf(MrfInstance(5, 3), cap_n=4)


def test_chunking_does_not_change_results():
    inst = gen_random_dense(12, 0.7, 3)
    a = exact.exact_log_z(inst).log_value
    old = exact._CHUNK
    try:
        exact._CHUNK = 37
        chunks = list(exact.spin_chunks(12, 37))
        assert sum(c.shape[0] for c in chunks) == 4096
        acc = exact._LogSumExp()
        for X in chunks:
            acc.add(exact._ising_energies(X, inst.J, inst.h))
    finally:
        exact._CHUNK = old
    assert acc.value == pytest.approx(a, abs=1e-9)


def test_log_z_prime_empty_decomposition():
    inst = IsingInstance(np.zeros((5, 5)))
    dec = fk_decompose(inst, 0.5)
    assert dec.width == 0
    assert exact.exact_log_z_prime(inst, dec).log_value == pytest.approx(5 * math.log(2))


def test_log_z_prime_exact_reproduction():
    J = np.full((6, 6), 0.3)
    inst = IsingInstance(J)
    dec = fk_decompose(inst, 0.5)
    assert dec.width == 1 and np.abs(dec.residual).max() < 1e-12
    assert exact.exact_log_z_prime(inst, dec).log_value == pytest.approx(exact.exact_log_z(inst).log_value)


@pytest.mark.parametrize("seed", range(5))
def test_replacement_bound(seed):
    inst = gen_random_dense(8, 1.0, seed)
    dec = fk_decompose(inst, 0.5)
    gap = abs(exact.exact_log_z(inst).log_value - exact.exact_log_z_prime(inst, dec).log_value)
    assert gap <= exact.exact_inf_to_one_norm(dec.residual) + 1e-9


def test_replacement_bound_with_split_diagonal():
    inst = gen_random_dense(9, 1.0, 7)
    dec = fk_decompose(inst, 0.2, split_diagonal=True)
    assert dec.constant == pytest.approx(np.trace(inst.J))
    gap = abs(exact.exact_log_z(inst).log_value - exact.exact_log_z_prime(inst, dec).log_value)
    assert gap <= exact.exact_inf_to_one_norm(dec.residual) + 1e-9


def _no_cut_partition(sizes):
    n = sum(sizes)
    # one order-1 cut per leading atom carves the vertex set; coefficient 0 keeps energy zero
    from denselogz.regularity import CutTensor

    cuts, start = [], 0
    for s in sizes[:-1]:
        cuts.append(CutTensor((tuple(range(start, start + s)),), 0.0))
        start += s
    dec = CutDecomposition(n=n, order=1, cuts=tuple(cuts), eps=1.0, threshold=0.0, target_l2=0.0,
                           residual=np.zeros(n))
    return refine(n, dec), dec


def test_doubleprime_single_atom():
    part = refine(4, None)
    expected = math.log(sum(math.exp(4 * exact.atom_entropy([4], np.array([[y]]))[0] / 4) for y in range(5)))
    assert exact.exact_log_z_doubleprime(part).log_value == pytest.approx(expected)
    h = lambda p: 0.0 if p in (0, 1) else -p * math.log(p) - (1 - p) * math.log(1 - p)
    assert expected == pytest.approx(math.log(sum(math.exp(4 * h(y / 4)) for y in range(5))))


def test_doubleprime_zero_coefficients_stirling_lower_bound():
    part, dec = _no_cut_partition([3, 4, 2])
    assert part.r == 3
    val = exact.exact_log_z_doubleprime(part).log_value
    assert val >= 9 * math.log(2) - 3 * math.log(10)


def test_binomial_sum_no_cuts():
    part = refine(7, None)
    assert exact.binomial_profile_sum(part).log_value == pytest.approx(7 * math.log(2))
    part, _ = _no_cut_partition([2, 2])
    assert part.r == 2
    assert exact.binomial_profile_sum(part).log_value == pytest.approx(math.log(16))


@given(seed=st.integers(0, 10_000), n=st.integers(4, 10), eps=st.sampled_from([0.3, 0.5, 0.8]))
@settings(max_examples=30, deadline=None)
def test_binomial_identity(seed, n, eps):
    inst = gen_random_dense(n, 1.0, seed)
    dec = fk_decompose(inst, eps, split_diagonal=seed % 2 == 0)
    part = refine(n, dec)
    a = exact.exact_log_z_prime(None, dec).log_value
    b = exact.binomial_profile_sum(part).log_value
    assert abs(a - b) <= 1e-9


@given(seed=st.integers(0, 10_000), n=st.integers(4, 10))
@settings(max_examples=30, deadline=None)
def test_sandwich_and_stirling(seed, n):
    inst = gen_random_dense(n, 0.5, seed)
    dec = fk_decompose(inst, 0.6)
    part = refine(n, dec)
    slack = exact.stirling_slack(part)
    zpp = exact.exact_log_z_doubleprime(part).log_value
    zp = exact.binomial_profile_sum(part).log_value
    top, arg = exact.max_profile_summand(part)
    assert -1e-9 <= zpp - top <= slack + 1e-9
    assert abs(zp - zpp) <= slack + 1e-9
    assert np.all(arg >= 0) and np.all(arg <= part.sizes)


def test_profile_cap():
    part = refine(6, None)
    with pytest.raises(ResourceError):
        exact.exact_log_z_doubleprime(part, cap=3)


def test_inf_to_one_examples():
    assert exact.exact_inf_to_one_norm(np.zeros((4, 4))) == 0.0
    assert exact.exact_inf_to_one_norm(np.ones((5, 5))) == 25.0


@pytest.mark.parametrize("seed", range(4))
def test_inf_to_one_against_bilinear_enumeration(seed):
    W = np.random.default_rng(seed).normal(size=(6, 6))
    signs = np.array(list(itertools.product([-1.0, 1.0], repeat=6)))
    best = (signs @ W @ signs.T).max()  # max over x, y of y^T W x
    assert exact.exact_inf_to_one_norm(W) == pytest.approx(best)


def test_magnetization_examples():
    free = IsingInstance(np.zeros((4, 4)))
    assert exact.exact_magnetization(free) == pytest.approx(0.0, abs=1e-12)
    assert exact.exact_magnetization(free, 50.0) == pytest.approx(4.0, abs=1e-6)
    J = np.array([[0.0, 0.4], [0.4, 0.0]])
    weights = {x: math.exp(0.8 * x[0] * x[1] + 0.3 * (x[0] + x[1])) for x in itertools.product([-1, 1], repeat=2)}
    expected = sum(w * (x[0] + x[1]) for x, w in weights.items()) / sum(weights.values())
    assert exact.exact_magnetization(IsingInstance(J), 0.3) == pytest.approx(expected)


def test_mrf_examples():
    assert exact.exact_log_z_mrf(MrfInstance(5, 3)).log_value == pytest.approx(5 * math.log(2))
    c = 0.7
    inst = MrfInstance(3, 3, {(0, 1, 2): c})
    assert exact.exact_log_z_mrf(inst).log_value == pytest.approx(math.log(4 * math.exp(c) + 4 * math.exp(-c)))


def test_mrf_dense_resummation():
    inst = gen_random_mrf(8, 3, 0.5, 2)
    T = inst.dense()
    vals = []
    for x in itertools.product([-1.0, 1.0], repeat=8):
        x = np.array(x)
        vals.append(np.einsum("ijk,i,j,k->", T, x, x, x))
    vals = np.array(vals)
    ref = vals.max() + math.log(np.exp(vals - vals.max()).sum())
    assert exact.exact_log_z_mrf(inst).log_value == pytest.approx(ref, abs=1e-9)


def test_max_tensor_form():
    inst = gen_random_mrf(5, 3, 0.5, 1)
    T = inst.dense()
    best = max(abs(np.einsum("ijk,i,j,k->", T, x, x, x)) for x in map(np.array, itertools.product([-1.0, 1.0], repeat=5)))
    assert exact.exact_max_tensor_form(T) == pytest.approx(best)


def test_ground_split_consistent():
    inst = gen_random_dense(9, 0.5, 4)
    split = exact.exact_log_z_split(inst)
    assert split.log_value == pytest.approx(exact.exact_log_z(inst).log_value, abs=1e-9)
    assert split.ground_count >= 2  # x and -x tie without a field
