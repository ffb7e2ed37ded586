"""Experiment drivers shared by the CLI and ``scripts/``."""

from __future__ import annotations

import math

from denselogz import exact
from denselogz.estimator import EstimatorConfig, estimate_log_z
from denselogz.model import gen_tightness_pair, norms, tightness_heavy_count


def tightness_table(n: int, eps: float, delta: float, Ms, seed: int = 0, cap_n: int = exact.LOG_Z_CAP):
    """Exact ``log Z`` of the heavy/uniform pair for each ``M``.

    Columns per row:

    * ``gap`` = ``log Z_M - log Z'_M``; ``gap_per_M`` its slope.
    * ``ground_gap_per_M``: ground-state energy difference over ``M``,
      ``2 h (1/delta - 1)`` (matrix entries, both triangles), the ``M -> inf``
      limit of ``gap_per_M``.
    * ``excess_per_M`` = ``gap_per_M - ground_gap_per_M``, computed from the
      ground/tail split so it is resolved even when it is ~1e-30.
    * ``thermal_correction`` = ``gap_per_M / ground_gap_per_M``.
    * ``rounding_correction`` = ``h / (eps delta C(n,2))`` for ``h`` heavy edges.
    * ``reference`` = ``(eps/2) M C(n,2)``, the separation of the lower bound.
    """
    pairs = math.comb(n, 2)
    heavy = tightness_heavy_count(n, eps, delta)
    ground = 2.0 * heavy * (1.0 / delta - 1.0)
    rows = []
    for M in Ms:
        Jh, Ju = gen_tightness_pair(n, M, eps, delta, seed)
        sh = exact.exact_log_z_split(Jh, cap_n=cap_n)
        su = exact.exact_log_z_split(Ju, cap_n=cap_n)
        lh, lu = sh.log_value, su.log_value
        gap = lh - lu
        excess = ((sh.max_energy - su.max_energy - M * ground)
                  + math.log(sh.ground_count / su.ground_count)
                  + math.log1p(sh.tail / sh.ground_count) - math.log1p(su.tail / su.ground_count)) / M
        rows.append({
            "M": M,
            "log_z_heavy": lh,
            "log_z_uniform": lu,
            "gap": gap,
            "gap_per_M": gap / M,
            "ground_gap_per_M": ground,
            "excess_per_M": excess,
            "thermal_correction": 1.0 + excess / ground if ground else math.nan,
            "rounding_correction": heavy / (eps * delta * pairs),
            "reference": eps / 2.0 * M * pairs,
            "l1_uniform": norms(Ju).l1,
            "heavy_edges": heavy,
        })
    return rows


def budget_sweep(instance, eps_values, seed: int = 0, fail_prob: float = 0.125,
                 config: EstimatorConfig | None = None, cap_n: int = 24):
    """Estimate across ``eps_values`` with itemized budgets and, when small, the exact error."""
    truth = exact.exact_log_z(instance, cap_n=cap_n).log_value if instance.n <= cap_n else None
    rows = []
    for eps in eps_values:
        rep = estimate_log_z(instance, eps, fail_prob, seed, config=config)
        row = {"eps": eps, "log_z_hat": rep.log_z_hat, "width": rep.width, "atoms": rep.atoms,
               "gamma": rep.gamma, **{f"budget_{k}": v for k, v in rep.budget.as_dict().items()}}
        if truth is not None:
            row["exact"] = truth
            row["abs_error"] = abs(rep.log_z_hat - truth)
            row["within_budget"] = row["abs_error"] <= rep.budget.total
        rows.append(row)
    return rows
