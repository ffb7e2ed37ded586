"""End-to-end log-partition estimate with an itemized error budget.

One run: peel the couplings into cuts, refine into atoms, sweep the grid of
granulated net-spin fractions solving an entropy program per cell, and take
``log M = max over feasible cells of (corner energy + n * entropy value)``.
Runs are repeated with independent seeds and the median is reported.

Budget (each term is a proven bound for the run it belongs to):

* ``regularity``  ``|log Z - log Z'|``: exact ``|W|_{inf->1}`` when small
  enough to enumerate, otherwise the decomposition's claimed bound;
  plus ``|w|_1`` for a peeled field.
* ``stirling``    ``2 sum_a log(|V_a| + 1)`` (binomials vs entropies, sum vs max).
* ``granulation`` corner energy vs energy anywhere in the cell:
  ``sum_i |d_i| sum_j 2 n gamma prod_{l != j} |S_il|``.
* ``solver``      ``lam * n``.
* ``rounding``    ``r log 5`` (fractional to integer profiles).
* ``small_n``     energy change from that rounding,
  ``sum_i |d_i| sum_j 2 (#atoms in S_ij) prod_{l != j} |S_il|``, or the
  smaller product-measure bound from :func:`overlap_bound`.

Why the overlap bound works: for a fractional profile ``z`` let ``q`` be the
product measure with ``P(x_v = 1) = z_a n / |V_a|`` on atom ``a``. Then
``log Z' >= E_q[energy] + H(q)`` with ``H(q) = n f(z)``, and ``E_q[energy]``
differs from the multilinear net-spin energy only on index tuples that repeat
a vertex.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from denselogz import exact
from denselogz.entropy import EntropyProgram, box_entropy_bound, solve, tighten_boxes
from denselogz.errors import NumericalError, ResourceError
from denselogz.model import IsingInstance, MrfInstance, field_is_delta_dense, norms
from denselogz.refinement import AtomPartition, refine
from denselogz.regularity import (
    field_decompose,
    fk_decompose,
    tensor_decompose,
)

SQRT27 = math.sqrt(27.0)
_LOG2 = math.log(2.0)
_LOG5 = math.log(5.0)
_TIGHTEN_CHUNK = 512


@dataclass(frozen=True)
class GridSpec:
    """Grid ``{0, gamma, ..., floor(1/gamma) gamma}`` shared by every axis slot."""

    gamma: float
    s: int
    k: int = 2

    @property
    def top(self) -> int:
        return int(math.floor(1.0 / self.gamma + 1e-12))

    @property
    def size(self) -> int:
        return self.top + 1

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.size) * self.gamma

    @property
    def literal_cells(self) -> int:
        """``|S|^(k s)``: cells of the undeduplicated sweep."""
        return self.size ** (self.k * self.s)

    def cell_index(self, rho) -> np.ndarray:
        """Index ``floor(rho / gamma)`` of a cell whose window contains ``rho``."""
        return np.clip(np.floor(np.asarray(rho) / self.gamma + 1e-12), 0, self.top).astype(np.int64)


def compute_gamma(eps: float, delta_density: float, s: int) -> float:
    """``eps sqrt(delta) / (4 sqrt(27) s)``; 1 when there are no cuts."""
    if s == 0:
        return 1.0
    if eps <= 0 or delta_density <= 0 or s < 0:
        raise ValueError("eps, delta and s must be positive")
    return eps * math.sqrt(delta_density) / (4.0 * SQRT27 * s)


@dataclass(frozen=True)
class EstimatorConfig:
    """Knobs of :func:`estimate_log_z`.

    ``mode`` picks the cut-norm search (``exact`` / ``sampled`` / ``auto``:
    exact up to ``exact_cut_cap`` vertices). ``sweep`` picks the cell set:
    ``grid`` enumerates every granulated cell; ``profiles`` visits the cells
    that contain an integer profile; ``auto`` takes ``profiles`` when the
    profile space fits ``cap_profiles`` and ``grid`` when the cells fit
    ``cap_cells``.
    """

    eps: float = 0.5
    fail_prob: float = 0.125
    seed: int | None = 0
    mode: str = "auto"
    lam: float | None = None
    reg_share: float = 0.25
    density: float | None = None
    sweep: str = "auto"
    cap_profiles: int = 1_000_000
    cap_cells: int = 200_000
    certify_cap: int = 20
    exact_cut_cap: int = 16
    sample_size: int = 10
    threads: int = 1
    batch: int = 64
    regime: str = "constant"

    def __post_init__(self):
        if not 0.0 < self.eps <= 1.0:
            raise ValueError("eps must lie in (0, 1]")
        if not 0.0 < self.fail_prob < 1.0:
            raise ValueError("fail_prob must lie in (0, 1)")
        if self.mode not in ("auto", "exact", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.sweep not in ("auto", "grid", "profiles"):
            raise ValueError(f"unknown sweep {self.sweep!r}")
        if self.lam is not None and self.lam <= 0:
            raise ValueError("lam must be positive")

    @property
    def lam_used(self) -> float:
        return self.eps / 2.0 if self.lam is None else self.lam

    @property
    def repetitions(self) -> int:
        return max(1, int(math.ceil(8.0 * math.log(1.0 / self.fail_prob))))


@dataclass(frozen=True)
class Budget:
    regularity: float
    stirling: float
    granulation: float
    solver: float
    rounding: float
    small_n: float

    @property
    def total(self) -> float:
        return (self.regularity + self.stirling + self.granulation + self.solver
                + self.rounding + self.small_n)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["total"] = self.total
        return d

    @staticmethod
    def worst(budgets) -> "Budget":
        budgets = list(budgets)
        return max(budgets, key=lambda b: b.total)


@dataclass(frozen=True)
class RunResult:
    log_m: float
    budget: Budget
    width: int
    atoms: int
    gamma: float
    strategy: str
    cells: int
    solves: int
    literal_cells: int
    regularity_certified: bool
    regularity_claimed: float


@dataclass(frozen=True)
class EstimateReport:
    log_z_hat: float
    budget: Budget
    runs: tuple
    width: int
    atoms: int
    gamma: float
    lam: float
    seed: int | None
    repetitions: int
    eps: float
    eps_regularity: float
    density: float
    large_n_condition_met: bool
    run_details: tuple = field(default_factory=tuple)
    reference: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "log_z_hat": self.log_z_hat,
            "budget": self.budget.as_dict(),
            "width": self.width,
            "atoms": self.atoms,
            "gamma": self.gamma,
            "lambda": self.lam,
            "runs": list(self.runs),
            "seed": self.seed,
            "repetitions": self.repetitions,
            "eps": self.eps,
            "eps_regularity": self.eps_regularity,
            "density": self.density,
            "large_n_condition_met": self.large_n_condition_met,
            "sweep": [d.strategy for d in self.run_details],
            "cells": [d.cells for d in self.run_details],
            "solves": [d.solves for d in self.run_details],
            "reference": self.reference,
        }


def large_n_condition(n: int, s: int, eps: float, delta: float, k: int = 2) -> bool:
    """Whether ``n >= 4 sqrt(27) s 2^(k s) / (sqrt(delta) eps)`` (compared in log space)."""
    if s == 0:
        return True
    rhs = math.log(4.0 * SQRT27 * s / (math.sqrt(delta) * eps)) + k * s * _LOG2
    return math.log(n) >= rhs


def entropy_round_check(n_atom: int, z: float) -> int:
    """Round an up-spin count toward the middle: ``ceil`` below ``n/2``, ``floor`` above."""
    if not 0.0 <= z <= n_atom:
        raise ValueError("z must lie in [0, n_atom]")
    return int(math.ceil(z)) if z <= n_atom / 2.0 else int(math.floor(z))


def _set_products(partition: AtomPartition):
    """Per cut: coefficient, axis set sizes and atom counts."""
    st = partition.structure
    sizes = partition.set_sizes()
    counts = partition.incidence.sum(axis=1).astype(np.float64)
    out = []
    for cut, axes in zip(st.cuts, st.cut_axes):
        out.append((abs(cut.coeff), sizes[list(axes)], counts[list(axes)]))
    return out


def _perturbation(per_cut, step_fn):
    total = 0.0
    for d, sz, cnt in per_cut:
        for j in range(sz.size):
            total += d * step_fn(sz[j], cnt[j]) * float(np.prod(np.delete(sz, j)))
    return total


def granulation_bound(partition: AtomPartition, gamma: float) -> float:
    n = partition.n
    return _perturbation(_set_products(partition), lambda sz, cnt: 2.0 * n * gamma)


def small_n_bound(partition: AtomPartition) -> float:
    return _perturbation(_set_products(partition), lambda sz, cnt: 2.0 * cnt)


def overlap_bound(partition: AtomPartition) -> float:
    """``sum_i |d_i| c_k sum_{j<l} |S_ij & S_il| prod_{o != j,l} |S_io|``.

    ``c_2 = 1`` (the gap is a sum of variances), ``c_k = 2`` otherwise.
    """
    st = partition.structure
    if st.m == 0:
        return 0.0
    M = st.masks.astype(np.float64)
    inter = M @ M.T
    sizes = st.set_sizes
    total = 0.0
    for cut, axes in zip(st.cuts, st.cut_axes):
        k = len(axes)
        if k < 2:
            continue
        c = 1.0 if k == 2 else 2.0
        for j in range(k):
            for l in range(j + 1, k):
                rest = [sizes[axes[o]] for o in range(k) if o not in (j, l)]
                total += abs(cut.coeff) * c * inter[axes[j], axes[l]] * float(np.prod(rest))
    return total


def cell_value(partition: AtomPartition, axis_fractions, gamma: float, lam: float):
    """``log M`` of one literal grid cell, or ``None`` when it is infeasible.

    ``axis_fractions[i][j]`` is the grid value for axis ``j`` of cut ``i``
    (``(rbar_i, cbar_i)`` for matrix cuts). The energy uses the corner net
    spins ``2 n rbar - |R|``; slots sharing a set intersect their windows.
    """
    st = partition.structure
    n = partition.n
    if len(st.cuts) == 0:
        return n * _LOG2 + partition.constant
    set_sizes = partition.set_sizes()
    lo = np.zeros(st.m)
    hi = np.full(st.m, math.inf)
    energy = partition.constant
    for cut, axes, fr in zip(st.cuts, st.cut_axes, axis_fractions):
        fr = np.asarray(fr, dtype=np.float64).reshape(-1)
        prod = cut.coeff
        for p, f in zip(axes, fr):
            lo[p] = max(lo[p], f)
            hi[p] = min(hi[p], f + gamma)
            prod *= 2.0 * n * f - set_sizes[p]
        energy += prod
    if np.any(lo > hi):
        return None
    sol = solve(EntropyProgram(partition.fractions, partition.incidence, lo, hi, gamma), lam)
    if not sol.feasible:
        return None
    return energy + n * sol.value


class _Sweep:
    def __init__(self, partition: AtomPartition, grid: GridSpec, lam: float, cfg: EstimatorConfig, pool):
        self.p = partition
        self.grid = grid
        self.lam = lam
        self.cfg = cfg
        self.pool = pool
        self.v = partition.fractions
        self.A = partition.incidence
        self.set_sizes = partition.set_sizes()
        self.n = partition.n

    def corner_energy(self, idx):
        nets = 2.0 * self.n * idx * self.grid.gamma - self.set_sizes
        return self.p.structure.energy_from_nets(nets) + self.p.constant

    def boxes(self, idx):
        lo = idx * self.grid.gamma
        hi = lo + self.grid.gamma
        zlo, zhi, bad = [], [], []
        for start in range(0, idx.shape[0], _TIGHTEN_CHUNK):
            a, b, c = tighten_boxes(self.v, self.A, lo[start:start + _TIGHTEN_CHUNK],
                                    hi[start:start + _TIGHTEN_CHUNK])
            zlo.append(a)
            zhi.append(b)
            bad.append(c)
        return np.vstack(zlo), np.vstack(zhi), np.concatenate(bad)

    def _solve_cell(self, i):
        lo = self.idx[i] * self.grid.gamma
        prog = EntropyProgram(self.v, self.A, lo, lo + self.grid.gamma, self.grid.gamma)
        sol = solve(prog, self.lam)
        return sol.value if sol.feasible else None

    def run(self, idx, lower_entropy):
        """Best cell value over cells ``idx (C, m)``; ``lower_entropy`` holds a
        known feasible entropy value per cell (``-inf`` if none)."""
        self.idx = idx
        n, lam = self.n, self.lam
        energy = self.corner_energy(idx)
        zlo, zhi, bad = self.boxes(idx)
        ub_ent = box_entropy_bound(self.v, zlo, zhi)
        ub = np.where(bad & ~np.isfinite(lower_entropy), -np.inf, energy + n * ub_ent)
        value = np.where(np.isfinite(lower_entropy), energy + n * lower_entropy, -np.inf)
        settled = np.isfinite(lower_entropy) & (ub_ent - lower_entropy <= lam)
        best = float(value.max()) if value.size else -np.inf
        # every cell ends within lam * n of its optimum: solved or settled ones by accuracy lam,
        # pruned ones because their upper bound is within lam * n of the running best;
        # best-first over upper bounds, ties broken by cell index for determinism
        keys = [idx[:, j] for j in range(idx.shape[1] - 1, -1, -1)] + [-ub]
        order = np.lexsort(keys) if idx.shape[1] else np.argsort(-ub, kind="stable")
        pending = [int(i) for i in order if not settled[i] and np.isfinite(ub[i])]
        solves = 0
        for start in range(0, len(pending), self.cfg.batch):
            chunk = pending[start:start + self.cfg.batch]
            active = [i for i in chunk if ub[i] > best + lam * n]
            if not active:
                break
            results = list(self.pool.map(self._solve_cell, active)) if self.pool else [
                self._solve_cell(i) for i in active]
            solves += len(active)
            for i, h in zip(active, results):
                if h is not None:
                    value[i] = max(value[i], energy[i] + n * h)
            best = max(best, float(value[active].max()))
        if not np.isfinite(best):
            raise NumericalError("no feasible grid cell found")
        top = np.flatnonzero(value == best)
        if idx.shape[1]:
            top = top[np.lexsort([idx[top, j] for j in range(idx.shape[1] - 1, -1, -1)])]
        return best, int(top[0]), solves


def _profile_cells(partition: AtomPartition, grid: GridSpec):
    """Distinct cells holding an integer profile, with the best profile entropy in each."""
    n, sizes = partition.n, partition.sizes
    A = partition.incidence.astype(np.float64)
    seen = {}
    for Y in exact.profile_chunks(sizes):
        rho = (Y / n) @ A.T
        idx = grid.cell_index(rho)
        ent = exact.atom_entropy(sizes, Y) / n
        uniq, inv = np.unique(idx, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        best = np.full(uniq.shape[0], -np.inf)
        np.maximum.at(best, inv, ent)
        for row, e in zip(uniq, best):
            key = row.tobytes()
            if e > seen.get(key, (-np.inf,))[0]:
                seen[key] = (e, row)
    keys = sorted(seen)
    idx = np.array([seen[k][1] for k in keys], dtype=np.int64).reshape(len(keys), A.shape[0])
    ent = np.array([seen[k][0] for k in keys])
    return idx, ent


def _grid_cells(grid: GridSpec, m: int, cap: int):
    count = grid.size ** m
    if count > cap:
        raise ResourceError(f"grid sweep needs {count} cells over {m} distinct sets; cap is {cap}",
                            required=count, cap=cap)
    mesh = np.indices((grid.size,) * m).reshape(m, -1).T
    return mesh.astype(np.int64), np.full(mesh.shape[0], -np.inf)


def sweep(partition: AtomPartition, grid: GridSpec, lam: float, cfg: EstimatorConfig, pool=None):
    """Best cell value ``log M``; returns ``(log_m, strategy, cells, solves)``."""
    st = partition.structure
    if len(st.cuts) == 0:
        return partition.n * _LOG2 + partition.constant, "trivial", 1, 0
    m = st.m
    strategy = cfg.sweep
    if strategy == "auto":
        if exact.profile_count(partition) <= cfg.cap_profiles:
            strategy = "profiles"
        elif grid.size ** m <= cfg.cap_cells:
            strategy = "grid"
        else:
            raise ResourceError(
                f"neither sweep fits: {exact.profile_count(partition)} profiles (cap {cfg.cap_profiles}), "
                f"{grid.size}^{m} deduplicated cells (cap {cfg.cap_cells}); literal grid "
                f"|S|^(ks) = {grid.size}^{grid.k * grid.s}",
                required=grid.literal_cells, cap=cfg.cap_cells)
    if strategy == "profiles":
        count = exact.profile_count(partition)
        if count > cfg.cap_profiles:
            raise ResourceError(f"profile sweep needs {count} profiles; cap is {cfg.cap_profiles}",
                                required=count, cap=cfg.cap_profiles)
        idx, ent = _profile_cells(partition, grid)
    else:
        idx, ent = _grid_cells(grid, m, cfg.cap_cells)
    best, _, solves = _Sweep(partition, grid, lam, cfg, pool).run(idx, ent)
    return best, strategy, idx.shape[0], solves


def _density(instance, cfg: EstimatorConfig) -> float:
    if cfg.density is not None:
        return cfg.density
    d = norms(instance).delta_max
    return 1.0 if not math.isfinite(d) else min(1.0, d)


def _cut_mode(cfg: EstimatorConfig, bits: int) -> str:
    if cfg.mode != "auto":
        return cfg.mode
    return "exact" if bits <= cfg.exact_cut_cap else "sampled"


def _finish_run(partition, decs, grid, lam, cfg, pool, reg, reg_certified, reg_claimed):
    log_m, strategy, cells, solves = sweep(partition, grid, lam, cfg, pool)
    n = partition.n
    budget = Budget(
        regularity=reg,
        stirling=2.0 * exact.stirling_slack(partition),
        granulation=granulation_bound(partition, grid.gamma),
        solver=lam * n,
        rounding=partition.r * _LOG5,
        small_n=min(small_n_bound(partition), overlap_bound(partition)),
    )
    width = sum(d.width for d in decs)
    return RunResult(log_m, budget, width, partition.r, grid.gamma, strategy, cells, solves,
                     grid.literal_cells, reg_certified, reg_claimed)


def ising_run(instance: IsingInstance, cfg: EstimatorConfig, seed, pool=None) -> RunResult:
    """A single (unboosted) run of the estimator."""
    n = instance.n
    delta = _density(instance, cfg)
    eps_reg = cfg.reg_share * cfg.eps * math.sqrt(delta) / 4.0
    mode = _cut_mode(cfg, n)
    dec = fk_decompose(instance, eps_reg, cfg.fail_prob, mode, seed, split_diagonal=True,
                       sample_size=cfg.sample_size, cap_n=max(cfg.exact_cut_cap, n) if mode == "exact" else 24)
    decs = [dec]
    claimed = dec.claimed_error
    if n <= cfg.certify_cap:
        reg = exact.exact_inf_to_one_norm(dec.residual, cap_n=cfg.certify_cap)
        certified = True
    elif mode == "exact":
        # the last search was exhaustive, so it found the cut norm; inf->1 <= 4 cut norm
        reg = 4.0 * dec.last_value
        certified = True
    else:
        reg = claimed
        certified = False
    if instance.has_field():
        fdec = field_decompose(instance.h, eps_reg)
        decs.append(fdec)
        reg += float(np.abs(fdec.residual).sum())
    partition = refine(n, decs)
    width = sum(d.width for d in decs)
    grid = GridSpec(compute_gamma(cfg.eps, delta, width), width, 2)
    return _finish_run(partition, decs, grid, cfg.lam_used, cfg, pool, reg, certified, claimed)


def mrf_run(instance: MrfInstance, cfg: EstimatorConfig, seed, pool=None) -> RunResult:
    n, k = instance.n, instance.k
    delta = _density(instance, cfg)
    eps_reg = cfg.reg_share * cfg.eps * math.sqrt(delta) / 2.0**k
    bits = n * (k - 1)
    mode = "exact" if cfg.mode == "exact" else ("sampled" if cfg.mode == "sampled" else
                                                 ("exact" if bits <= 12 else "sampled"))
    dec = tensor_decompose(instance, eps_reg, cfg.fail_prob, mode, seed, regime=cfg.regime,
                           cap_n=max(10, (bits + 1) // 2))
    claimed = dec.claimed_error
    if n <= cfg.certify_cap:
        reg = exact.exact_max_tensor_form(dec.residual, cap_n=cfg.certify_cap)
        certified = True
    elif mode == "exact":
        reg = 2.0**k * dec.last_value
        certified = True
    else:
        reg = claimed
        certified = False
    partition = refine(n, [dec])
    grid = GridSpec(compute_gamma(cfg.eps, delta, dec.width), dec.width, k)
    return _finish_run(partition, [dec], grid, cfg.lam_used, cfg, pool, reg, certified, claimed)


def _boost(run_fn, instance, cfg: EstimatorConfig):
    R = cfg.repetitions
    seeds = np.random.SeedSequence(cfg.seed).spawn(R)
    n = instance.n
    bits = n if isinstance(instance, IsingInstance) else n * (instance.k - 1)
    deterministic = _cut_mode(cfg, bits) == "exact" if isinstance(instance, IsingInstance) else (
        cfg.mode == "exact" or (cfg.mode == "auto" and bits <= 12))
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) if cfg.threads > 1 else _NullPool() as pool:
        if deterministic:
            # without sampling every repetition is the same computation
            results = [run_fn(instance, cfg, seeds[0], pool if cfg.threads > 1 else None)]
        elif cfg.threads > 1:
            results = list(pool.map(lambda sd: run_fn(instance, cfg, sd, None), seeds))
        else:
            results = [run_fn(instance, cfg, sd, None) for sd in seeds]
    runs = tuple(r.log_m for r in results)
    delta = _density(instance, cfg)
    k = instance.order
    first = results[0]
    l1 = norms(instance).l1
    reference = {
        "target_eps_n_plus_l1": cfg.eps * (n + l1),
        "granulation_reference": cfg.eps * l1 / 2.0,
        "regularity_claimed": max(r.regularity_claimed for r in results),
        "regularity_certified": all(r.regularity_certified for r in results),
        "deterministic_runs": deterministic,
    }
    eps_reg = cfg.reg_share * cfg.eps * math.sqrt(delta) / 2.0**k
    return EstimateReport(
        log_z_hat=float(np.median(runs)),
        budget=Budget.worst(r.budget for r in results),
        runs=runs,
        width=max(r.width for r in results),
        atoms=max(r.atoms for r in results),
        gamma=min(r.gamma for r in results),
        lam=cfg.lam_used,
        seed=cfg.seed,
        repetitions=R,
        eps=cfg.eps,
        eps_regularity=eps_reg,
        density=delta,
        large_n_condition_met=large_n_condition(n, first.width, cfg.eps, delta, k),
        run_details=tuple(results),
        reference=reference,
    )


class _NullPool:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False


def _config(eps, fail_prob, seed, config, overrides):
    if config is None:
        config = EstimatorConfig()
    updates = {k: v for k, v in (("eps", eps), ("fail_prob", fail_prob), ("seed", seed)) if v is not None}
    updates.update(overrides)
    if updates:
        config = EstimatorConfig(**{**asdict(config), **updates})
    return config


def estimate_log_z(instance: IsingInstance, eps: float | None = None, fail_prob: float | None = None,
                   seed: int | None = None, config: EstimatorConfig | None = None, **overrides) -> EstimateReport:
    """Estimate ``log Z`` of an Ising instance; see the module docstring for the budget."""
    if not isinstance(instance, IsingInstance):
        raise TypeError("estimate_log_z expects an IsingInstance")
    return _boost(ising_run, instance, _config(eps, fail_prob, seed, config, overrides))


def estimate_log_z_mrf(instance: MrfInstance, eps: float | None = None, fail_prob: float | None = None,
                       seed: int | None = None, mode: str = "constant",
                       config: EstimatorConfig | None = None, **overrides) -> EstimateReport:
    """Order-k analogue of :func:`estimate_log_z`. ``mode`` is the width regime
    (``constant`` peels to the usual width cap, ``linear`` to ``4 / eps^2``)."""
    if not isinstance(instance, MrfInstance):
        raise TypeError("estimate_log_z_mrf expects an MrfInstance")
    overrides = {"regime": mode, **overrides}
    return _boost(mrf_run, instance, _config(eps, fail_prob, seed, config, overrides))


def field_density_ok(instance: IsingInstance, delta: float) -> bool:
    return field_is_delta_dense(instance.h, delta)
