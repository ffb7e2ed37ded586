"""Magnetization from finite differences of estimated ``log Z``.

``log Z(h0 + t)`` is convex in a uniform field shift ``t`` and its derivative
is the expected total magnetization, so

    (log Z(h0) - log Z(h0 - d)) / d  <=  m(h0)  <=  (log Z(h0 + d) - log Z(h0)) / d

and each one-sided slope equals ``m`` at some point of its interval.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from denselogz import exact
from denselogz.estimator import EstimatorConfig, _config, estimate_log_z
from denselogz.model import IsingInstance, field_is_delta_dense, norms


@dataclass(frozen=True)
class MagnetizationEstimate:
    value: float
    delta_used: float
    bracket: tuple
    h0: float
    log_z: tuple
    budgets: tuple
    density_ok: bool

    @property
    def slope_tolerance(self) -> float:
        """How far each estimated slope can sit from the true one: ``2 max budget / delta``."""
        return 2.0 * max(self.budgets) / self.delta_used

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "delta": self.delta_used,
            "bracket": list(self.bracket),
            "h0": self.h0,
            "log_z": list(self.log_z),
            "budgets": list(self.budgets),
            "slope_tolerance": self.slope_tolerance,
            "density_ok": self.density_ok,
        }


def estimate_magnetization(instance: IsingInstance, h0: float = 0.0, eps: float | None = None,
                           fail_prob: float | None = None, seed: int | None = None,
                           config: EstimatorConfig | None = None, **overrides) -> MagnetizationEstimate:
    """Symmetric-difference magnetization at field shift ``h0`` with step ``sqrt(eps)``.

    The three ``log Z`` estimates use the same seed and accuracy ``eps``.
    """
    cfg = _config(eps, fail_prob, seed, config, overrides)
    d = math.sqrt(cfg.eps)
    shifts = (h0 - d, h0, h0 + d)
    insts = [instance.shifted(t) for t in shifts]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=min(3, cfg.threads)) as pool:
            reports = list(pool.map(lambda inst: estimate_log_z(inst, config=cfg), insts))
    else:
        reports = [estimate_log_z(inst, config=cfg) for inst in insts]
    lm, l0, lp = (r.log_z_hat for r in reports)
    # density in both senses, judged at the base shift
    delta = min(r.density for r in reports)
    dense = field_is_delta_dense(insts[1].h, delta) and norms(instance).delta_max >= delta
    return MagnetizationEstimate(
        value=(lp - lm) / (2.0 * d),
        delta_used=d,
        bracket=((l0 - lm) / d, (lp - l0) / d),
        h0=h0,
        log_z=(lm, l0, lp),
        budgets=tuple(r.budget.total for r in reports),
        density_ok=bool(dense),
    )


def exact_slopes(instance: IsingInstance, h0: float, d: float):
    """Exact one-sided slopes of ``log Z`` around ``h0``."""
    lm, l0, lp = (exact.exact_log_z(instance.shifted(t)).log_value for t in (h0 - d, h0, h0 + d))
    return (l0 - lm) / d, (lp - l0) / d


@dataclass(frozen=True)
class PhaseDemoReport:
    n: int
    coupling: float
    planted_vertex: int
    magnetization: dict
    block_size: int

    def as_dict(self) -> dict:
        return {"n": self.n, "coupling": self.coupling, "planted_vertex": self.planted_vertex,
                "magnetization": {str(k): v for k, v in self.magnetization.items()},
                "block_size": self.block_size,
                "swing_per_block_vertex": (self.magnetization[1] - self.magnetization[-1]) / (2 * self.block_size)}


def phase_instance(n: int, C: float, planted: int, X: float) -> IsingInstance:
    """``4n`` vertices: coupling ``C`` inside the first ``2n``, fields +1 on the
    third quarter and -1 on the last, field ``X`` on vertex ``planted``."""
    N = 4 * n
    J = np.zeros((N, N))
    J[: 2 * n, : 2 * n] = C
    h = np.zeros(N)
    h[2 * n: 3 * n] = 1.0
    h[3 * n:] = -1.0
    h[planted] = X
    return IsingInstance(J, h, name=f"phase-demo n={n} C={C} X={X}")


def phase_sensitivity_demo(n: int, C: float = 5.0, seed: int = 0) -> PhaseDemoReport:
    """Exact magnetization of the planted-field construction for ``X in {-1, 0, 1}``.

    A single vertex's field swings the total magnetization by order ``n``.
    """
    if 4 * n > exact.MAGNETIZATION_CAP:
        raise ValueError(f"4n = {4 * n} exceeds the exact enumeration cap")
    rng = np.random.default_rng(seed)
    planted = int(rng.integers(0, 2 * n))
    mags = {X: exact.exact_magnetization(phase_instance(n, C, planted, float(X))) for X in (-1, 0, 1)}
    return PhaseDemoReport(n=n, coupling=C, planted_vertex=planted, magnetization=mags, block_size=2 * n)
