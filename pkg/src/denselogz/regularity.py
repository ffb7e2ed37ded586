"""Cut decompositions by iterative peeling.

A cut tensor of order k is ``d`` on ``S_1 x ... x S_k`` and zero elsewhere;
its energy on a spin state is ``d * prod_j sum_{i in S_j} x_i``. Order 2 is
the cut matrix, order 1 a constant field on a vertex set.

Peeling: starting from ``W = J``, find sets maximizing ``|W(S_1..S_k)|``;
stop once that value is at most ``eps * sqrt(N) * |J|_2`` (``N = n**k``),
otherwise subtract the block average on the found sets. Each removal lowers
``|W|_2^2`` by exactly ``W(S)^2 / prod |S_j|``, which bounds the width by
``1 / eps**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import reduce

import numpy as np

from denselogz.errors import NumericalError, ResourceError
from denselogz.model import IsingInstance, MrfInstance

EXACT_CUT_CAP = 24
_CHUNK = 1 << 15


@dataclass(frozen=True)
class CutTensor:
    """``coeff`` on the product of ``sets``; sets are sorted 0-based vertex tuples."""

    sets: tuple
    coeff: float

    def __post_init__(self):
        sets = tuple(tuple(sorted(int(i) for i in s)) for s in self.sets)
        if not sets or any(len(s) == 0 for s in sets):
            raise ValueError("cut sets must be nonempty")
        if not math.isfinite(self.coeff):
            raise ValueError("cut coefficient must be finite")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "coeff", float(self.coeff))

    @property
    def order(self) -> int:
        return len(self.sets)

    @property
    def rows(self):
        return self.sets[0]

    @property
    def cols(self):
        return self.sets[1]

    def dense(self, n: int) -> np.ndarray:
        out = np.zeros((n,) * self.order)
        out[np.ix_(*self.sets)] = self.coeff
        return out

    def energy(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return self.coeff * float(np.prod([x[list(s)].sum() for s in self.sets]))


def cut_matrix(rows, cols, coeff) -> CutTensor:
    return CutTensor((tuple(rows), tuple(cols)), coeff)


@dataclass(frozen=True, eq=False)
class CutDecomposition:
    """``target = constant-part + sum(cuts) + residual``.

    ``constant`` is an energy offset carried alongside the cuts (the trace of
    ``J`` when the diagonal was split off before peeling). ``potentials`` are
    ``|W_t|_2^2`` before each peel and after the last one.
    """

    n: int
    order: int
    cuts: tuple
    eps: float
    threshold: float
    target_l2: float
    residual: np.ndarray
    potentials: tuple = ()
    constant: float = 0.0
    mode: str = "exact"
    last_value: float = 0.0
    certified_error: float | None = None
    stats: dict = field(default_factory=dict)

    @property
    def width(self) -> int:
        return len(self.cuts)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c.coeff for c in self.cuts])

    @property
    def coefficient_length(self) -> float:
        return float(np.sqrt(np.sum(self.coefficients**2)))

    @property
    def claimed_error(self) -> float:
        """``eps * 2**k * sqrt(N) * |J|_2``; for k=2 this is ``4 eps n |J|_2``."""
        return self.eps * 2.0**self.order * math.sqrt(float(self.n) ** self.order) * self.target_l2

    def cut_sum(self) -> np.ndarray:
        out = np.zeros((self.n,) * self.order)
        for c in self.cuts:
            out[np.ix_(*c.sets)] += c.coeff
        return out

    def certify(self, cap_n: int = EXACT_CUT_CAP) -> "CutDecomposition":
        """Attach the exact residual error (Ising/field: ``|W|_{inf->1}``;
        higher order: ``max_x |W(x,...,x)|``)."""
        from denselogz import exact

        if self.order == 1:
            err = float(np.abs(self.residual).sum())
        elif self.order == 2:
            err = exact.exact_inf_to_one_norm(self.residual, cap_n=cap_n)
        else:
            err = exact.exact_max_tensor_form(self.residual, cap_n=cap_n)
        return replace(self, certified_error=err)


def width_cap(eps: float) -> int:
    return int(math.ceil(27.0 / eps**2))


def tensor_width_cap(eps: float, k: int, regime: str = "constant") -> int:
    """Width allowance: ``ceil(27**(k-1) / eps**(2k-2))`` for the constant-time
    regime, ``ceil(4 / eps**2)`` for the linear-time regime."""
    if regime == "linear":
        return int(math.ceil(4.0 / eps**2))
    return int(math.ceil(27.0 ** (k - 1) / eps ** (2 * k - 2)))


def _subset_masks(m: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    return ((idx[:, None] >> np.arange(m)) & 1).astype(np.float64)


def _greedy_best(sums):
    """Per row of ``sums``: best positive and best negative column selection.

    Zero-sum columns are left out, so ties resolve to the smaller set.
    """
    pos = np.where(sums >= 0, sums, 0.0).sum(axis=1)
    neg = -np.where(sums < 0, sums, 0.0).sum(axis=1)
    return pos, neg


def _cut_value(W, sets):
    return float(W[np.ix_(*sets)].sum())


def cut_norm_maximize(W, mode: str = "exact", seed=None, *, reps: int = 1, sample_size: int = 10,
                      cap_n: int = EXACT_CUT_CAP):
    """Find ``(S, T, value)`` with ``value = |sum_{S x T} W|`` large.

    ``exact`` enumerates every row subset and takes the best column set for it
    (columns with nonnegative sum for the positive search, negative sum for the
    negative search), which returns the true cut norm. ``sampled`` enumerates
    subsets of a random row sample, infers columns then rows greedily, and
    keeps the best of ``reps`` repetitions.
    """
    W = np.asarray(W, dtype=np.float64)
    m, n = W.shape
    if mode == "exact":
        if m > cap_n:
            raise ResourceError(f"exact cut norm needs 2^{m} row subsets; cap is n <= {cap_n}",
                                required=m, cap=cap_n)
        best = (-1.0, None, None)
        for start in range(0, 1 << m, _CHUNK):
            masks = _subset_masks(m, start, min(1 << m, start + _CHUNK))
            sums = masks @ W
            pos, neg = _greedy_best(sums)
            ip, ineg = int(np.argmax(pos)), int(np.argmax(neg))
            if pos[ip] > best[0]:
                best = (float(pos[ip]), masks[ip] > 0, sums[ip] > 0)
            if neg[ineg] > best[0]:
                best = (float(neg[ineg]), masks[ineg] > 0, sums[ineg] < 0)
        _, S, T = best
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        best = (-1.0, None, None)
        q = min(m, sample_size)
        for _ in range(max(1, reps)):
            rows = np.sort(rng.choice(m, size=q, replace=False))
            masks = _subset_masks(q, 0, 1 << q)
            sums = masks @ W[rows]
            for sign in (1.0, -1.0):
                Tc = (sign * sums) >= 0 if sign > 0 else (sign * sums) > 0
                rs = Tc.astype(np.float64) @ W.T
                Sc = (sign * rs) >= 0 if sign > 0 else (sign * rs) > 0
                # one more column pass given the full row sets
                cs = Sc.astype(np.float64) @ W
                Tc = (sign * cs) >= 0 if sign > 0 else (sign * cs) > 0
                vals = sign * ((Sc.astype(np.float64) @ W) * Tc).sum(axis=1)
                b = int(np.argmax(vals))
                if vals[b] > best[0]:
                    best = (float(vals[b]), Sc[b].copy(), Tc[b].copy())
        _, S, T = best
    else:
        raise ValueError(f"unknown cut-norm mode {mode!r}")
    S = tuple(np.flatnonzero(S).tolist())
    T = tuple(np.flatnonzero(T).tolist())
    if not S or not T:
        return (), (), 0.0
    return S, T, abs(_cut_value(W, (S, T)))


def _contract_all_but_last(W, masks_per_axis):
    """``W`` contracted with one 0/1 vector per leading axis -> vector over the last axis."""
    out = W
    for m in masks_per_axis:
        out = np.tensordot(m, out, axes=([0], [0]))
    return out


def tensor_cut_norm_maximize(W, mode: str = "exact", seed=None, *, reps: int = 1, cap_n: int = 10,
                             sweeps: int = 6):
    """Order-k analogue of :func:`cut_norm_maximize`.

    ``exact`` enumerates subsets on the first k-1 axes and chooses the last
    axis greedily (true cut norm; ``2**(n(k-1))`` candidates). ``sampled`` runs
    alternating greedy maximization from random starts.
    """
    W = np.asarray(W, dtype=np.float64)
    k, n = W.ndim, W.shape[0]
    best = (-1.0, None)
    if mode == "exact":
        if n * (k - 1) > 2 * cap_n:
            raise ResourceError(f"exact tensor cut norm needs 2^{n * (k - 1)} subsets",
                                required=n * (k - 1), cap=2 * cap_n)
        lead = W.reshape(n ** (k - 1), n)
        total = 1 << (n * (k - 1))
        for start in range(0, total, _CHUNK):
            idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            # indicator of the product set S_1 x ... x S_{k-1} on flattened leading axes
            ind = np.ones((idx.size, 1))
            for ax in range(k - 1):
                bits = ((idx[:, None] >> (ax * n + np.arange(n))) & 1).astype(np.float64)
                ind = (ind[:, :, None] * bits[:, None, :]).reshape(idx.size, -1)
            sums = ind @ lead
            pos, neg = _greedy_best(sums)
            for vals, sel in ((pos, sums > 0), (neg, sums < 0)):
                b = int(np.argmax(vals))
                if vals[b] > best[0]:
                    code = int(idx[b])
                    sets = [tuple(i for i in range(n) if (code >> (ax * n + i)) & 1) for ax in range(k - 1)]
                    sets.append(tuple(np.flatnonzero(sel[b]).tolist()))
                    best = (float(vals[b]), sets)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        for _ in range(max(1, reps) * 4):
            masks = [rng.random(n) < 0.5 for _ in range(k)]
            for sign in (1.0, -1.0):
                cur = [m.copy() for m in masks]
                for _ in range(sweeps):
                    for ax in range(k):
                        others = [cur[a].astype(np.float64) for a in range(k) if a != ax]
                        moved = np.moveaxis(W, ax, -1)
                        v = _contract_all_but_last(moved, others)
                        cur[ax] = sign * v >= 0 if sign > 0 else sign * v > 0
                if all(c.any() for c in cur):
                    sets = [tuple(np.flatnonzero(c).tolist()) for c in cur]
                    val = abs(_cut_value(W, sets))
                    if val > best[0]:
                        best = (val, sets)
    else:
        raise ValueError(f"unknown cut-norm mode {mode!r}")
    sets = best[1]
    if sets is None or any(len(s) == 0 for s in sets):
        return (), 0.0
    return tuple(tuple(s) for s in sets), abs(_cut_value(W, sets))


def field_cut_maximize(w):
    """Order-1 cut norm of a vector: the larger of its positive and negative mass."""
    w = np.asarray(w, dtype=np.float64)
    pos, neg = w[w >= 0].sum(), -w[w < 0].sum()
    S = np.flatnonzero(w >= 0) if pos >= neg else np.flatnonzero(w < 0)
    return (tuple(S.tolist()), float(max(pos, neg))) if S.size else ((), 0.0)


def _peel(target, eps, finder, cap, mode, constant=0.0):
    target = np.array(target, dtype=np.float64)
    n, k = target.shape[0], target.ndim
    l2 = float(np.sqrt(np.square(target).sum()))
    threshold = eps * math.sqrt(float(n) ** k) * l2
    W = target.copy()
    cuts = []
    pot = [float(np.square(W).sum())]
    scale = max(pot[0], 1e-300)
    value = 0.0
    while True:
        sets, value = finder(W, len(cuts))
        if not sets or value <= threshold:
            break
        if len(cuts) >= cap:
            raise NumericalError(
                f"peeling did not stop within width cap {cap} (last cut value {value:.6g}, "
                f"threshold {threshold:.6g})")
        size = reduce(lambda a, s: a * len(s), sets, 1)
        block = np.ix_(*sets)
        signed = float(W[block].sum())
        d = signed / size
        W[block] -= d
        cuts.append(CutTensor(sets, d))
        after = float(np.square(W).sum())
        expected = pot[-1] - signed**2 / size
        if after > expected + 1e-9 * scale:
            raise NumericalError("peeling potential failed to decrease as required")
        pot.append(after)
    residual = W
    residual.setflags(write=False)
    return CutDecomposition(
        n=n, order=k, cuts=tuple(cuts), eps=eps, threshold=threshold, target_l2=l2,
        residual=residual, potentials=tuple(pot), constant=constant, mode=mode,
        last_value=float(value),
    )


def _seed_seq(seed):
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def _child_seed(base: np.random.SeedSequence, t: int) -> np.random.SeedSequence:
    """Child ``t`` of ``base``, as ``base.spawn`` would produce it, without spawning the others."""
    return np.random.SeedSequence(base.entropy, spawn_key=tuple(base.spawn_key) + (t,),
                                  pool_size=base.pool_size)


def _reps_for(fail_prob: float) -> int:
    return max(1, int(math.ceil(math.log(1.0 / fail_prob) / math.log(2.0))))


def fk_decompose(instance, eps: float, fail_prob: float = 0.125, mode: str = "exact", seed=None, *,
                 split_diagonal: bool = False, sample_size: int = 10, cap_n: int = EXACT_CUT_CAP):
    """Peel an Ising matrix into cut matrices until the best cut found is at
    most ``eps * n * |J|_2``.

    With ``split_diagonal`` the diagonal is moved into ``constant`` (its exact
    energy contribution) and only the off-diagonal part is peeled.
    """
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    if not 0.0 < fail_prob < 1.0:
        raise ValueError("fail_prob must lie in (0, 1)")
    J = instance.J if isinstance(instance, IsingInstance) else np.asarray(instance, dtype=np.float64)
    constant = 0.0
    if split_diagonal:
        constant = float(np.trace(J))
        J = J - np.diag(np.diag(J))
    reps = _reps_for(fail_prob)
    base = _seed_seq(seed) if mode == "sampled" else None

    def finder(W, t):
        S, T, v = cut_norm_maximize(W, mode, None if base is None else _child_seed(base, t), reps=reps,
                                    sample_size=sample_size, cap_n=cap_n)
        return ((S, T) if S else ()), v

    return _peel(J, eps, finder, width_cap(eps), mode, constant)


def tensor_decompose(instance, eps: float, fail_prob: float = 0.125, mode: str = "exact", seed=None, *,
                     regime: str = "constant", cap_n: int = 10):
    """Order-k peeling; the residual satisfies ``|W|_{inf->1} <= eps 2^k sqrt(N) |J|_2``
    in exact mode."""
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    T = instance.dense() if isinstance(instance, MrfInstance) else np.asarray(instance, dtype=np.float64)
    k = T.ndim
    if k < 3:
        raise ValueError("tensor_decompose needs order k >= 3")
    reps = _reps_for(fail_prob)
    cap = min(tensor_width_cap(eps, k, regime), int(math.ceil(1.0 / eps**2)) + 1)
    base = _seed_seq(seed) if mode == "sampled" else None

    def finder(W, t):
        return tensor_cut_norm_maximize(W, mode, None if base is None else _child_seed(base, t), reps=reps,
                                        cap_n=cap_n)

    return _peel(T, eps, finder, cap, mode)


def field_decompose(h, eps: float) -> CutDecomposition:
    """Order-1 peeling of a field vector (deterministic; the order-1 cut norm is closed form)."""
    h = np.asarray(h, dtype=np.float64)
    cap = int(math.ceil(1.0 / eps**2)) + 1

    def finder(W, t):
        S, v = field_cut_maximize(W)
        return ((S,) if S else ()), v

    return _peel(h, eps, finder, cap, "exact")


class CutStructure:
    """Distinct axis sets of a list of cuts and per-order term tables.

    ``masks`` is ``(m, n)`` over vertices, one row per distinct set. Terms of
    order k are stored as ``(axes (c, k) int, coeffs (c,))``. Energy of any
    batch is evaluated from net spins ``nets (B, m)`` on the distinct sets.
    """

    def __init__(self, n, cuts):
        self.n = n
        self.cuts = tuple(cuts)
        index = {}
        order_axes = {}
        for c in self.cuts:
            ids = tuple(index.setdefault(s, len(index)) for s in c.sets)
            order_axes.setdefault(c.order, ([], []))
            order_axes[c.order][0].append(ids)
            order_axes[c.order][1].append(c.coeff)
        self.sets = tuple(index)
        self.masks = np.zeros((len(self.sets), n), dtype=bool)
        for r, s in enumerate(self.sets):
            self.masks[r, list(s)] = True
        self.set_sizes = self.masks.sum(axis=1).astype(np.float64)
        self.terms = {k: (np.array(a, dtype=np.int64).reshape(-1, k), np.array(d, dtype=np.float64))
                      for k, (a, d) in order_axes.items()}
        self.cut_axes = tuple(tuple(index[s] for s in c.sets) for c in self.cuts)

    @property
    def m(self) -> int:
        return len(self.sets)

    def energy_from_nets(self, nets) -> np.ndarray:
        nets = np.atleast_2d(np.asarray(nets, dtype=np.float64))
        out = np.zeros(nets.shape[0])
        for k, (axes, d) in self.terms.items():
            prod = np.ones((nets.shape[0], axes.shape[0]))
            for j in range(k):
                prod *= nets[:, axes[:, j]]
            out += prod @ d
        return out

    def state_energy(self, X) -> np.ndarray:
        """Cut energy of spin states ``X (B, n)`` in +-1."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return self.energy_from_nets(X @ self.masks.T.astype(np.float64))


def collect_cuts(decompositions):
    """Flatten one decomposition or a sequence of them into ``(n, cuts, constant)``."""
    if isinstance(decompositions, CutDecomposition):
        decompositions = [decompositions]
    decompositions = list(decompositions)
    if not decompositions:
        raise ValueError("need at least one decomposition")
    n = decompositions[0].n
    cuts, constant = [], 0.0
    for dec in decompositions:
        if dec.n != n:
            raise ValueError("decompositions disagree on n")
        cuts.extend(dec.cuts)
        constant += dec.constant
    return n, cuts, constant
