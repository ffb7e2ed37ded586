"""Entropy maximization over a box-and-window polytope.

Program: maximize ``f(z) = sum_a v_a H(z_a / v_a)`` subject to
``0 <= z <= v`` and ``lower_p <= sum_{a in set p} z_a <= upper_p``.

The solver returns a feasible value ``L = f(z)`` and an upper bound ``U`` on
the optimum with ``U - L <= lam``. The bound comes from Lagrangian duality:
for multipliers ``mu_plus, mu_minus >= 0`` and ``t = A^T (mu_plus - mu_minus)``,

    g(mu) = sum_a v_a softplus(-t_a) + mu_plus . upper - mu_minus . lower

is at least the optimum, because ``max_p H(p) - t p = softplus(-t)``.
If minimizing ``g`` does not close the gap, Frank-Wolfe steps with an LP
oracle raise ``L`` and supply their own gap bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize, minimize_scalar
from scipy.special import expit

from denselogz.errors import NumericalError

FEAS_TOL = 1e-9
GRAD_MARGIN = 1e-9
_LOG2 = math.log(2.0)


def binary_entropy(p):
    """Natural-log binary entropy, ``H(0) = H(1) = 0``.

    Raises ``ValueError`` for arguments outside ``[0, 1]``.
    """
    arr = np.asarray(p, dtype=np.float64)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("binary entropy is defined on [0, 1]")
    return _entropy(arr) if arr.ndim else float(_entropy(arr))


def _entropy(p):
    p = np.clip(p, 0.0, 1.0)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(p > 0, -p * np.log(np.where(p > 0, p, 1.0)), 0.0)
        b = np.where(q > 0, -q * np.log(np.where(q > 0, q, 1.0)), 0.0)
    return a + b


def _softplus_neg(t):
    return np.logaddexp(0.0, -t)


@dataclass(frozen=True, eq=False)
class EntropyProgram:
    """``v`` atom fractions (r,), ``A`` set/atom incidence (m, r), windows (m,)."""

    v: np.ndarray
    A: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    gamma: float | None = None

    def __post_init__(self):
        v = np.asarray(self.v, dtype=np.float64)
        A = np.asarray(self.A, dtype=np.float64).reshape(-1, v.size)
        lo = np.asarray(self.lower, dtype=np.float64).reshape(-1)
        hi = np.asarray(self.upper, dtype=np.float64).reshape(-1)
        if np.any(v < 0):
            raise ValueError("atom fractions must be nonnegative")
        if lo.shape != (A.shape[0],) or hi.shape != (A.shape[0],):
            raise ValueError("window arrays must have one entry per constraint row")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def r(self) -> int:
        return self.v.size

    @property
    def m(self) -> int:
        return self.A.shape[0]

    def objective(self, z) -> float:
        z = np.asarray(z, dtype=np.float64)
        pos = self.v > 0
        return float((self.v[pos] * _entropy(z[pos] / self.v[pos])).sum())

    def violation(self, z) -> float:
        """Largest constraint violation of ``z`` (0 when feasible)."""
        z = np.asarray(z, dtype=np.float64)
        s = self.A @ z
        parts = [np.maximum(0.0, -z), np.maximum(0.0, z - self.v),
                 np.maximum(0.0, self.lower - s), np.maximum(0.0, s - self.upper)]
        return float(max((p.max() if p.size else 0.0) for p in parts))

    def gradient(self, z) -> np.ndarray:
        """Gradient at ``z`` clipped into ``[eta v, (1-eta) v]``; also returns the clipped point."""
        zc = np.clip(z, GRAD_MARGIN * self.v, (1.0 - GRAD_MARGIN) * self.v)
        g = np.zeros_like(zc)
        pos = self.v > 0
        g[pos] = np.log((self.v[pos] - zc[pos]) / zc[pos])
        return g, zc

    def dual_value(self, mu) -> float:
        m = self.m
        mp, mm = mu[:m], mu[m:]
        t = self.A.T @ (mp - mm)
        return float((self.v * _softplus_neg(t)).sum() + mp @ self.upper - mm @ self.lower)


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: np.ndarray | None
    ambiguous: bool = False


@dataclass(frozen=True)
class EntropySolution:
    status: str
    z: np.ndarray | None
    value: float | None
    upper: float | None
    lam: float
    iterations: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    @property
    def gap(self) -> float:
        return math.inf if self.value is None else self.upper - self.value


def _lp_project(prog: EntropyProgram, target, widen: float = 0.0):
    """L1-nearest feasible point to ``target`` (``target=None``: any feasible point)."""
    r, m = prog.r, prog.m
    lo, hi = prog.lower - widen, prog.upper + widen
    A = prog.A
    if target is None:
        c = np.zeros(r)
        A_ub = np.vstack([A, -A]) if m else None
        b_ub = np.concatenate([hi, -lo]) if m else None
        bounds = [(0.0, float(v)) for v in prog.v]
    else:
        eye = np.eye(r)
        c = np.concatenate([np.zeros(r), np.ones(r)])
        rows = [np.hstack([eye, -eye]), np.hstack([-eye, -eye])]
        rhs = [target, -target]
        if m:
            zero = np.zeros((m, r))
            rows += [np.hstack([A, zero]), np.hstack([-A, zero])]
            rhs += [hi, -lo]
        A_ub, b_ub = np.vstack(rows), np.concatenate(rhs)
        bounds = [(0.0, float(v)) for v in prog.v] + [(0.0, None)] * r
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    if res.status == 2:
        return None
    if res.status != 0:
        raise NumericalError(f"LP solver failed: {res.message}")
    return np.clip(res.x[:r], 0.0, prog.v)


def check_feasible(prog: EntropyProgram) -> FeasibilityResult:
    """LP phase one. Programs infeasible only by at most ``FEAS_TOL`` count as feasible."""
    z = _lp_project(prog, None)
    if z is not None:
        return FeasibilityResult(True, z)
    z = _lp_project(prog, None, widen=FEAS_TOL)
    if z is not None:
        return FeasibilityResult(True, z, ambiguous=True)
    return FeasibilityResult(False, None)


_LOOSE = {"maxiter": 200, "ftol": 1e-8, "gtol": 1e-6}
_TIGHT = {"maxiter": 2000, "ftol": 1e-13, "gtol": 1e-11}


def _dual_minimize(prog: EntropyProgram, mu0=None, options=None):
    m = prog.m
    A, v, lo, hi = prog.A, prog.v, prog.lower, prog.upper

    def fun(mu):
        mp, mm = mu[:m], mu[m:]
        t = A.T @ (mp - mm)
        val = (v * _softplus_neg(t)).sum() + mp @ hi - mm @ lo
        z = v * expit(-t)
        s = A @ z
        return val, np.concatenate([hi - s, s - lo])

    x0 = np.zeros(2 * m) if mu0 is None else np.maximum(mu0, 0.0)
    res = minimize(fun, x0, jac=True, method="L-BFGS-B", bounds=[(0.0, None)] * (2 * m),
                   options=options or _TIGHT)
    mu = res.x
    t = A.T @ (mu[:m] - mu[m:])
    return mu, prog.dual_value(mu), v * expit(-t)


def _frank_wolfe(prog: EntropyProgram, z, L, U, lam, max_iter):
    A_ub = np.vstack([prog.A, -prog.A]) if prog.m else None
    b_ub = np.concatenate([prog.upper, -prog.lower]) if prog.m else None
    bounds = [(0.0, float(v)) for v in prog.v]
    it = 0
    for it in range(1, max_iter + 1):
        g, zc = prog.gradient(z)
        res = linprog(-g, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.status != 0:
            raise NumericalError(f"LP oracle failed: {res.message}")
        s = np.clip(res.x, 0.0, prog.v)
        # concavity: f(y) <= f(zc) + g.(y - zc) for every y in the box
        U = min(U, prog.objective(zc) + float(g @ (s - zc)))
        if U - L <= lam:
            break
        d = s - z
        step = minimize_scalar(lambda a: -prog.objective(z + a * d), bounds=(0.0, 1.0),
                               method="bounded", options={"xatol": 1e-12})
        cand = np.clip(z + step.x * d, 0.0, prog.v)
        fc = prog.objective(cand)
        if fc > L and prog.violation(cand) <= FEAS_TOL:
            z, L = cand, fc
        if U - L <= lam:
            break
    return z, L, U, it


def solve(prog: EntropyProgram, lam: float, warm_start=None, max_iter: int = 500) -> EntropySolution:
    """``lam``-accurate maximum of ``prog`` with a certificate ``upper - value <= lam``.

    Raises :class:`NumericalError` if the gap does not close within ``max_iter``
    Frank-Wolfe steps.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if prog.m == 0:
        z = prog.v / 2.0
        val = prog.objective(z)
        return EntropySolution("feasible", z, val, float(prog.v.sum() * _LOG2), lam)
    # any mu >= 0 gives a valid upper bound, so a loose minimization is tried first
    for opts in (_LOOSE, _TIGHT):
        mu, U, zd = _dual_minimize(prog, warm_start, opts)
        z = zd if prog.violation(zd) <= FEAS_TOL else _lp_project(prog, zd)
        if z is None:
            z = _lp_project(prog, zd, widen=FEAS_TOL)
            if z is None:
                return EntropySolution("infeasible", None, None, None, lam)
        L = prog.objective(z)
        U = max(U, L)
        if U - L <= lam:
            break
        warm_start = mu
    it = 0
    if U - L > lam:
        z, L, U, it = _frank_wolfe(prog, z, L, U, lam, max_iter)
        if U - L > lam:
            raise NumericalError(f"entropy solver gap {U - L:.3g} exceeds lam={lam:.3g}")
    return EntropySolution("feasible", z, L, U, lam, it)


def tighten_boxes(v, A, lower, upper, rounds: int = 8):
    """Interval bound propagation for a batch of windows.

    ``lower, upper`` are ``(B, m)``. Returns per-atom ranges ``(zlo, zhi)`` of
    shape ``(B, r)`` that contain every feasible point, and a mask of programs
    proven infeasible (some range became empty).
    """
    v = np.asarray(v, dtype=np.float64)
    A = np.asarray(A, dtype=bool)
    lower = np.atleast_2d(lower)
    upper = np.atleast_2d(upper)
    B, r = lower.shape[0], v.size
    zlo = np.zeros((B, r))
    zhi = np.broadcast_to(v, (B, r)).copy()
    if A.shape[0] == 0:
        return zlo, zhi, np.zeros(B, dtype=bool)
    Af = A.astype(np.float64)
    big = np.inf
    for _ in range(rounds):
        slo = zlo @ Af.T
        shi = zhi @ Af.T
        # per (cell, set, atom): bound from the window minus the other atoms' extreme mass
        cap_hi = upper[:, :, None] - (slo[:, :, None] - zlo[:, None, :])
        cap_lo = lower[:, :, None] - (shi[:, :, None] - zhi[:, None, :])
        cap_hi = np.where(A[None], cap_hi, big).min(axis=1)
        cap_lo = np.where(A[None], cap_lo, -big).max(axis=1)
        new_hi = np.minimum(zhi, cap_hi)
        new_lo = np.maximum(zlo, cap_lo)
        done = np.allclose(new_hi, zhi) and np.allclose(new_lo, zlo)
        zlo, zhi = new_lo, new_hi
        if done:
            break
    infeasible = np.any(zlo > zhi + FEAS_TOL, axis=1)
    return zlo, np.maximum(zhi, zlo), infeasible


def box_entropy_bound(v, zlo, zhi) -> np.ndarray:
    """``sum_a max_{z_a in [zlo_a, zhi_a]} v_a H(z_a / v_a)`` per batch row."""
    v = np.asarray(v, dtype=np.float64)
    half = v / 2.0
    z = np.clip(half, zlo, zhi)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(v > 0, z / np.where(v > 0, v, 1.0), 0.0)
    return (v * _entropy(p)).sum(axis=-1)
