"""Ising and k-uniform MRF instances, entrywise norms, density, generators.

Energies are in natural-log units: an Ising state ``x`` has weight
``exp(x @ J @ x + h @ x)`` and an order-k MRF state has weight
``exp(sum J[i1..ik] x[i1]...x[ik])``. Vertex indices are 0-based in the
library; the text format (see :mod:`denselogz.instance_io`) is 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class IsingInstance:
    """Symmetric interaction matrix ``J`` and external field ``h``."""

    J: np.ndarray
    h: np.ndarray = None
    name: str = ""

    def __post_init__(self):
        J = np.asarray(self.J, dtype=np.float64)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] < 1:
            raise ValueError(f"J must be a non-empty square matrix, got shape {J.shape}")
        if not np.all(np.isfinite(J)):
            raise ValueError("J has non-finite entries")
        scale = max(1.0, float(np.abs(J).max()))
        if not np.allclose(J, J.T, rtol=0.0, atol=1e-12 * scale):
            raise ValueError("J must be symmetric")
        n = J.shape[0]
        h = np.zeros(n) if self.h is None else np.asarray(self.h, dtype=np.float64)
        if h.shape != (n,):
            raise ValueError(f"h must have shape ({n},), got {h.shape}")
        if not np.all(np.isfinite(h)):
            raise ValueError("h has non-finite entries")
        object.__setattr__(self, "J", _frozen((J + J.T) / 2))
        object.__setattr__(self, "h", _frozen(h))

    @property
    def n(self) -> int:
        return self.J.shape[0]

    @property
    def order(self) -> int:
        return 2

    def has_field(self) -> bool:
        return bool(np.any(self.h != 0))

    def with_field(self, h) -> "IsingInstance":
        return IsingInstance(self.J, h, self.name)

    def shifted(self, shift: float) -> "IsingInstance":
        """Same couplings, every field entry increased by ``shift``."""
        return IsingInstance(self.J, self.h + shift, self.name)

    def energy(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(x @ self.J @ x + self.h @ x)


@dataclass(frozen=True, eq=False)
class MrfInstance:
    """Binary k-uniform Markov random field.

    ``entries`` maps 0-based index tuples of length ``k`` to coefficients. The
    tuple is used as given: no symmetrization over index permutations.
    """

    n: int
    k: int
    entries: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k < 3:
            raise ValueError("MRF order k must be >= 3 (use IsingInstance for k=2)")
        clean = {}
        for idx, val in self.entries.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != self.k:
                raise ValueError(f"entry {idx} does not have {self.k} indices")
            if any(i < 0 or i >= self.n for i in idx):
                raise ValueError(f"entry {idx} out of range for n={self.n}")
            val = float(val)
            if not math.isfinite(val):
                raise ValueError(f"entry {idx} is not finite")
            if val != 0.0:
                clean[idx] = clean.get(idx, 0.0) + val
        object.__setattr__(self, "entries", clean)

    @property
    def order(self) -> int:
        return self.k

    def dense(self) -> np.ndarray:
        T = np.zeros((self.n,) * self.k)
        for idx, val in self.entries.items():
            T[idx] += val
        return T

    def energy(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(sum(v * np.prod(x[list(idx)]) for idx, v in self.entries.items()))


@dataclass(frozen=True)
class DensityReport:
    l1: float
    l2: float
    linf: float
    delta_max: float


def _entries(instance) -> np.ndarray:
    if isinstance(instance, IsingInstance):
        return instance.J.ravel()
    if isinstance(instance, MrfInstance):
        return np.fromiter(instance.entries.values(), dtype=np.float64, count=len(instance.entries))
    return np.asarray(instance, dtype=np.float64).ravel()


def norms(instance) -> DensityReport:
    """Entrywise L1, L2, L-infinity norms and the largest density parameter.

    ``delta_max = l1 / (n**k * linf)``; +inf for the zero instance.
    """
    v = _entries(instance)
    l1 = float(np.abs(v).sum())
    l2 = float(np.sqrt(np.square(v).sum()))
    linf = float(np.abs(v).max()) if v.size else 0.0
    cells = float(instance.n) ** instance.order
    delta_max = math.inf if linf == 0.0 else l1 / (cells * linf)
    return DensityReport(l1=l1, l2=l2, linf=linf, delta_max=delta_max)


def is_delta_dense(instance, delta: float) -> bool:
    """True iff ``delta * linf <= l1 / n**k``."""
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    rep = norms(instance)
    cells = float(instance.n) ** instance.order
    # relative slack absorbs rounding in sums of equal entries
    return delta * rep.linf <= rep.l1 / cells * (1.0 + 1e-12)


def field_is_delta_dense(h, delta: float) -> bool:
    """Field density ``delta * |h|_inf <= |h|_1 / n``; the zero field counts as dense."""
    h = np.asarray(h, dtype=np.float64)
    linf = float(np.abs(h).max()) if h.size else 0.0
    return delta * linf <= float(np.abs(h).sum()) / h.size * (1.0 + 1e-12)


def gen_random_dense(n: int, delta: float, seed: int) -> IsingInstance:
    """Random-sign symmetric couplings with magnitudes bounded below so the
    instance is ``delta``-dense. The diagonal is zero unless density ``delta``
    is unreachable without it.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    floor = delta * n / (n - 1)
    with_diag = floor > 1.0
    lo = delta if with_diag else floor
    mags = rng.uniform(lo, 1.0, size=(n, n))
    signs = rng.choice([-1.0, 1.0], size=(n, n))
    A = np.triu(mags * signs, 0 if with_diag else 1)
    J = A + np.triu(A, 1).T
    return IsingInstance(J, name=f"random-dense n={n} delta={delta} seed={seed}")


def gen_curie_weiss(n: int, beta: float) -> IsingInstance:
    """Complete graph, ``J[i, j] = beta / (2n)`` off the diagonal."""
    if n < 2:
        raise ValueError("n must be >= 2")
    J = np.full((n, n), beta / (2.0 * n))
    np.fill_diagonal(J, 0.0)
    return IsingInstance(J, name=f"curie-weiss n={n} beta={beta}")


def tightness_heavy_count(n: int, eps: float, delta: float) -> int:
    return int(math.floor(eps * delta * math.comb(n, 2) + 0.5))


def tightness_density_threshold(eps: float, delta: float) -> int:
    """Smallest n from which every heavy/uniform pair is ``delta``-dense.

    Density of the heavy instance holds iff ``n <= 2 h (1/delta - 1)`` with
    ``h`` the heavy-edge count; using ``h >= eps*delta*C(n,2) - 1/2`` this is
    implied by ``eps(1-delta) n(n-1) - n - (1/delta - 1) >= 0``.
    """
    n = 4
    a = eps * (1.0 - delta)
    while a * n * (n - 1) - n - (1.0 / delta - 1.0) < 0:
        n += 1
    return n


def gen_tightness_pair(n: int, M: float, eps: float, delta: float, seed: int):
    """Return ``(J_M, J'_M)`` on the complete graph.

    ``J'_M`` has every off-diagonal entry equal to ``M``; ``J_M`` raises a
    seeded random set of ``round(eps*delta*C(n,2))`` edges to ``M/delta``.
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    if not (0.0 < eps <= 0.25 and 0.0 < delta <= 0.25):
        raise ValueError("eps and delta must lie in (0, 1/4]")
    if eps * delta * math.comb(n, 2) < 1.0:
        raise ValueError("eps*delta*C(n,2) < 1: no heavy edge representable")
    heavy = tightness_heavy_count(n, eps, delta)
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    chosen = rng.choice(iu.size, size=heavy, replace=False)
    base = np.full((n, n), float(M))
    np.fill_diagonal(base, 0.0)
    Jh = base.copy()
    Jh[iu[chosen], ju[chosen]] = M / delta
    Jh[ju[chosen], iu[chosen]] = M / delta
    tag = f"n={n} M={M} eps={eps} delta={delta} seed={seed}"
    return IsingInstance(Jh, name=f"tightness-heavy {tag}"), IsingInstance(base, name=f"tightness-uniform {tag}")


def gen_random_mrf(n: int, k: int, delta: float, seed: int) -> MrfInstance:
    """Dense random order-k tensor: every index tuple gets a random-sign
    coefficient with magnitude in ``[delta, 1]``."""
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    shape = (n,) * k
    vals = rng.uniform(delta, 1.0, size=shape) * rng.choice([-1.0, 1.0], size=shape)
    entries = {idx: float(vals[idx]) for idx in np.ndindex(*shape)}
    return MrfInstance(n, k, entries, name=f"random-mrf n={n} k={k} delta={delta} seed={seed}")
