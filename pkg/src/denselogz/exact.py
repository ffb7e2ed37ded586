"""Brute-force oracles for small instances.

Everything here enumerates the hypercube (or the profile space) in fixed-size
chunks and folds the chunk results with a max-shifted log-sum-exp, so results
stay finite and are independent of chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from denselogz.errors import ResourceError
from denselogz.model import IsingInstance, MrfInstance

LOG_Z_CAP = 30
INF_TO_ONE_CAP = 24
MAGNETIZATION_CAP = 24
MRF_CAP = 22
PROFILE_CAP = 10_000_000
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ExactResult:
    log_value: float
    states_enumerated: int

    def __float__(self):
        return self.log_value


class _LogSumExp:
    """Streaming ``log sum exp`` accumulator (chunk maxima shifted out)."""

    def __init__(self):
        self.m = -math.inf
        self.s = 0.0

    def add(self, vals):
        vals = np.asarray(vals, dtype=np.float64)
        if vals.size == 0:
            return
        cm = float(vals.max())
        if cm == -math.inf:
            return
        if cm > self.m:
            self.s = self.s * math.exp(self.m - cm) if self.m > -math.inf else 0.0
            self.m = cm
        self.s += float(np.exp(vals - self.m).sum())

    @property
    def value(self) -> float:
        return self.m + math.log(self.s) if self.s > 0 else -math.inf


def _check_cap(n, cap, what):
    if n > cap:
        raise ResourceError(f"{what} enumerates 2^{n} states; cap is n <= {cap}", required=n, cap=cap)


def spin_chunks(n: int, chunk: int = _CHUNK):
    """Yield ``(B, n)`` arrays of +-1 states; state ``t`` has ``x_i = +1`` iff bit i of t is set."""
    total = 1 << n
    bits = np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield (((idx[:, None] >> bits) & 1) * 2 - 1).astype(np.float64)


def _ising_energies(X, J, h):
    return np.einsum("bi,bi->b", X @ J, X) + X @ h


def exact_log_z(instance: IsingInstance, cap_n: int = LOG_Z_CAP) -> ExactResult:
    """``log sum_x exp(x J x + h x)`` by direct enumeration."""
    n = instance.n
    _check_cap(n, cap_n, "exact_log_z")
    acc = _LogSumExp()
    for X in spin_chunks(n):
        acc.add(_ising_energies(X, instance.J, instance.h))
    return ExactResult(acc.value, 1 << n)


@dataclass(frozen=True)
class GroundSplit:
    """``log Z = max_energy + log(ground_count) + log1p(tail / ground_count)``.

    ``tail`` sums ``exp(E - max_energy)`` over the non-maximizing states
    separately, so corrections far below machine epsilon relative to
    ``log Z`` stay representable.
    """

    max_energy: float
    ground_count: int
    tail: float

    @property
    def log_value(self) -> float:
        return self.max_energy + math.log(self.ground_count) + math.log1p(self.tail / self.ground_count)


def exact_log_z_split(instance: IsingInstance, cap_n: int = LOG_Z_CAP, ties: float = 0.0) -> GroundSplit:
    """Two-pass enumeration returning the ground/tail split of ``log Z``.

    States within ``ties`` of the maximum energy count as ground states.
    """
    n = instance.n
    _check_cap(n, cap_n, "exact_log_z_split")
    e_max = -math.inf
    for X in spin_chunks(n):
        e_max = max(e_max, float(_ising_energies(X, instance.J, instance.h).max()))
    count, tail = 0, 0.0
    for X in spin_chunks(n):
        gap = _ising_energies(X, instance.J, instance.h) - e_max
        ground = gap >= -ties
        count += int(ground.sum())
        tail += float(np.exp(gap[~ground]).sum())
    return GroundSplit(e_max, count, tail)


def _cut_energies(X, cuts):
    out = np.zeros(X.shape[0])
    for c in cuts:
        prod = np.ones(X.shape[0])
        for s in c.sets:
            prod *= X[:, list(s)].sum(axis=1)
        out += c.coeff * prod
    return out


def exact_log_z_prime(instance, decomposition, cap_n: int = LOG_Z_CAP) -> ExactResult:
    """Exact log partition function with the cut sum replacing the couplings.

    ``decomposition`` is one decomposition or a sequence (e.g. couplings plus
    a field decomposition). The energy is the sum of all cut energies and
    ``constant`` offsets; the instance field is added as-is unless an order-1
    decomposition is among those given. ``instance`` may be ``None``.
    """
    from denselogz.regularity import CutDecomposition, collect_cuts

    decs = [decomposition] if isinstance(decomposition, CutDecomposition) else list(decomposition)
    n, cuts, constant = collect_cuts(decs)
    _check_cap(n, cap_n, "exact_log_z_prime")
    h = None
    if isinstance(instance, IsingInstance) and not any(d.order == 1 for d in decs):
        h = instance.h
    acc = _LogSumExp()
    for X in spin_chunks(n):
        e = _cut_energies(X, cuts) + constant
        if h is not None:
            e = e + X @ h
        acc.add(e)
    return ExactResult(acc.value, 1 << n)


def profile_count(partition) -> int:
    return int(np.prod([int(s) + 1 for s in partition.sizes], dtype=object))


def profile_chunks(sizes, chunk: int = _CHUNK):
    """Yield ``(B, r)`` integer profiles over ``prod_a {0..sizes[a]}`` in
    mixed-radix order (first atom fastest)."""
    sizes = np.asarray(sizes, dtype=np.int64)
    radix = sizes + 1
    total = int(np.prod(radix, dtype=object))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        out = np.empty((idx.size, sizes.size), dtype=np.int64)
        rem = idx
        for a, b in enumerate(radix):
            out[:, a] = rem % b
            rem = rem // b
        yield out


def log_binomial(m, y):
    m = np.asarray(m, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return gammaln(m + 1) - gammaln(y + 1) - gammaln(m - y + 1)


def atom_entropy(sizes, Y):
    """``sum_a |V_a| H(y_a / |V_a|)`` for each row of ``Y``."""
    from denselogz.entropy import binary_entropy

    sizes = np.asarray(sizes, dtype=np.float64)
    return (sizes * binary_entropy(Y / sizes)).sum(axis=1)


def _profile_sum(partition, decomposition, weight, cap):
    count = profile_count(partition)
    if count > cap:
        raise ResourceError(f"profile space has {count} points; cap is {cap}", required=count, cap=cap)
    acc = _LogSumExp()
    best = -math.inf
    for Y in profile_chunks(partition.sizes):
        vals = partition.profile_energy(Y, decomposition) + weight(Y)
        acc.add(vals)
        best = max(best, float(vals.max()))
    return acc.value, best, count


def binomial_profile_sum(partition, decomposition=None, cap: int = PROFILE_CAP) -> ExactResult:
    """``log sum_y exp(E(y)) prod_a C(|V_a|, y_a)``; equal to the state sum of the cut energy."""
    sizes = partition.sizes
    val, _, count = _profile_sum(partition, decomposition,
                                 lambda Y: log_binomial(sizes, Y).sum(axis=1), cap)
    return ExactResult(val, count)


def exact_log_z_doubleprime(partition, decomposition=None, cap: int = PROFILE_CAP) -> ExactResult:
    """``log sum_y exp(E(y) + sum_a |V_a| H(y_a/|V_a|))`` with ``y_a`` in ``0..|V_a|``."""
    sizes = partition.sizes
    val, _, count = _profile_sum(partition, decomposition, lambda Y: atom_entropy(sizes, Y), cap)
    return ExactResult(val, count)


def max_profile_summand(partition, decomposition=None, cap: int = PROFILE_CAP):
    """Largest log-summand of the entropy profile sum and a profile attaining it."""
    count = profile_count(partition)
    if count > cap:
        raise ResourceError(f"profile space has {count} points; cap is {cap}", required=count, cap=cap)
    best, arg = -math.inf, None
    for Y in profile_chunks(partition.sizes):
        vals = partition.profile_energy(Y, decomposition) + atom_entropy(partition.sizes, Y)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, arg = float(vals[i]), Y[i].copy()
    return best, arg


def stirling_slack(partition) -> float:
    return float(np.sum(np.log(np.asarray(partition.sizes, dtype=np.float64) + 1.0)))


def exact_inf_to_one_norm(W, cap_n: int = INF_TO_ONE_CAP) -> float:
    """``max_{x in {+-1}^n} |W x|_1``; ``x`` and ``-x`` agree, so ``x_0 = +1`` is fixed."""
    W = np.asarray(W, dtype=np.float64)
    n = W.shape[1]
    _check_cap(n, cap_n, "exact_inf_to_one_norm")
    if n == 0:
        return 0.0
    best = 0.0
    for X in spin_chunks(n - 1):
        X = np.hstack([np.ones((X.shape[0], 1)), X])
        best = max(best, float(np.abs(X @ W.T).sum(axis=1).max()))
    return best


def exact_max_tensor_form(W, cap_n: int = MRF_CAP) -> float:
    """``max_x |W(x, ..., x)|`` over the hypercube for an order-k tensor."""
    W = np.asarray(W, dtype=np.float64)
    n, k = W.shape[0], W.ndim
    _check_cap(n, cap_n, "exact_max_tensor_form")
    best = 0.0
    for X in spin_chunks(n):
        best = max(best, float(np.abs(_tensor_form(W, X)).max()))
    return best


def _tensor_form(W, X):
    out = W.reshape(W.shape[0], -1)
    # contract the first axis repeatedly: state-batched multilinear form
    v = X @ out  # (B, n^(k-1))
    for _ in range(W.ndim - 1):
        rest = v.shape[1] // W.shape[0]
        v = np.einsum("bi,bir->br", X, v.reshape(X.shape[0], W.shape[0], rest))
    return v[:, 0]


def exact_magnetization(instance: IsingInstance, h_shift: float = 0.0,
                        cap_n: int = MAGNETIZATION_CAP) -> float:
    """``E[sum_i x_i]`` under fields ``h + h_shift``."""
    n = instance.n
    _check_cap(n, cap_n, "exact_magnetization")
    h = instance.h + h_shift
    acc = _LogSumExp()
    pos = _LogSumExp()
    neg = _LogSumExp()
    for X in spin_chunks(n):
        e = _ising_energies(X, instance.J, h)
        mag = X.sum(axis=1)
        acc.add(e)
        with np.errstate(divide="ignore"):
            pos.add(np.where(mag > 0, e + np.log(np.where(mag > 0, mag, 1.0)), -np.inf))
            neg.add(np.where(mag < 0, e + np.log(np.where(mag < 0, -mag, 1.0)), -np.inf))
    z = acc.value
    return math.exp(pos.value - z) - math.exp(neg.value - z)


def exact_log_z_mrf(instance: MrfInstance, cap_n: int = MRF_CAP) -> ExactResult:
    """Exact log partition function of an order-k tensor model."""
    n = instance.n
    _check_cap(n, cap_n, "exact_log_z_mrf")
    idx = np.array(list(instance.entries.keys()), dtype=np.int64).reshape(-1, instance.k)
    vals = np.fromiter(instance.entries.values(), dtype=np.float64, count=idx.shape[0])
    acc = _LogSumExp()
    for X in spin_chunks(n):
        if idx.shape[0]:
            prod = np.ones((X.shape[0], idx.shape[0]))
            for j in range(instance.k):
                prod *= X[:, idx[:, j]]
            acc.add(prod @ vals)
        else:
            acc.add(np.zeros(X.shape[0]))
    return ExactResult(acc.value, 1 << n)
