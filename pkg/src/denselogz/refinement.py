"""Common refinement of the cut sets into atoms, and spin profiles.

Vertices with the same membership signature across every distinct cut set
form an atom. Any two states with the same number of up-spins per atom have
the same cut energy, so the partition sum can be reorganized by profile.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from denselogz.regularity import CutStructure, collect_cuts


@dataclass(frozen=True, eq=False)
class AtomPartition:
    """Atoms in signature-lexicographic order.

    ``incidence[p, a]`` is True iff atom ``a`` lies in distinct set ``p`` of
    ``structure``. ``constant`` is the energy offset carried by the
    decompositions (the split-off diagonal).
    """

    n: int
    atoms: tuple
    sizes: np.ndarray
    signatures: np.ndarray
    vertex_atom: np.ndarray
    incidence: np.ndarray
    structure: CutStructure
    constant: float = 0.0
    sampled_fractions: np.ndarray | None = None

    @property
    def r(self) -> int:
        return len(self.atoms)

    @property
    def fractions(self) -> np.ndarray:
        if self.sampled_fractions is not None:
            return self.sampled_fractions
        return self.sizes / float(self.n)

    def cut_incidence(self, i: int):
        """Atom indices contained in each axis set of cut ``i``."""
        return tuple(tuple(np.flatnonzero(self.incidence[p]).tolist()) for p in self.structure.cut_axes[i])

    def set_sizes(self) -> np.ndarray:
        return self.incidence.astype(np.float64) @ self.sizes

    def net_spins(self, Y) -> np.ndarray:
        """Net spin ``sum_{a in set} (2 y_a - |V_a|)`` on every distinct set, per profile row."""
        Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
        return (2.0 * Y - self.sizes) @ self.incidence.T.astype(np.float64)

    def profile_energy(self, Y, decomposition=None) -> np.ndarray:
        """Cut energy plus ``constant`` for each profile row of ``Y``.

        ``decomposition`` is accepted for a different cut list over the same
        atoms; by default the partition's own cuts are used.
        """
        if decomposition is None:
            return self.structure.energy_from_nets(self.net_spins(Y)) + self.constant
        n, cuts, constant = collect_cuts(decomposition)
        other = CutStructure(n, cuts)
        inc = _incidence(other.masks, self.vertex_atom, self.r)
        Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
        nets = (2.0 * Y - self.sizes) @ inc.T.astype(np.float64)
        return other.energy_from_nets(nets) + constant

    def profile_of(self, x) -> np.ndarray:
        """Up-spin counts per atom of the +-1 state ``x`` (batched over rows)."""
        X = np.atleast_2d(np.asarray(x))
        up = (X > 0).astype(np.int64)
        out = np.zeros((X.shape[0], self.r), dtype=np.int64)
        for a, atom in enumerate(self.atoms):
            out[:, a] = up[:, list(atom)].sum(axis=1)
        return out

    def state_of(self, y) -> np.ndarray:
        """A +-1 state with profile ``y`` (first ``y_a`` vertices of each atom up)."""
        y = np.asarray(y, dtype=np.int64)
        x = -np.ones(self.n)
        for a, atom in enumerate(self.atoms):
            if not 0 <= y[a] <= len(atom):
                raise ValueError(f"profile entry {y[a]} outside [0, {len(atom)}] for atom {a}")
            x[list(atom[: y[a]])] = 1.0
        return x


@dataclass(frozen=True)
class SpinProfile:
    """Up-spin count per atom."""

    y: tuple

    @classmethod
    def checked(cls, partition: AtomPartition, y) -> "SpinProfile":
        y = tuple(int(v) for v in y)
        if len(y) != partition.r:
            raise ValueError(f"profile has {len(y)} entries, partition has {partition.r} atoms")
        for a, (v, m) in enumerate(zip(y, partition.sizes)):
            if not 0 <= v <= m:
                raise ValueError(f"profile entry {v} outside [0, {int(m)}] for atom {a}")
        return cls(y)

    def array(self) -> np.ndarray:
        return np.array(self.y, dtype=np.int64)


def _as_profile(profile):
    return profile.array() if isinstance(profile, SpinProfile) else np.asarray(profile)


def _incidence(masks, vertex_atom, r):
    inc = np.zeros((masks.shape[0], r), dtype=bool)
    for p in range(masks.shape[0]):
        inc[p, np.unique(vertex_atom[masks[p]])] = True
    return inc


def refine(n: int, decomposition, sample_probes: int | None = None, seed=None) -> AtomPartition:
    """Atoms of the common refinement of every cut set in ``decomposition``
    (one decomposition or a sequence).

    With ``sample_probes`` the atom fractions are estimated from that many
    uniformly random vertex probes instead of exact counts; sizes stay exact.
    """
    if decomposition is None:
        cuts, constant = [], 0.0
    else:
        m, cuts, constant = collect_cuts(decomposition)
        if m != n:
            raise ValueError(f"decomposition is over {m} vertices, expected {n}")
    structure = CutStructure(n, cuts)
    sig = structure.masks.T  # (n, m) membership bits per vertex
    if sig.shape[1] == 0:
        sig = np.zeros((n, 0), dtype=bool)
    # lexicographic order of signatures so atom order is deterministic; leading set most significant
    uniq, vertex_atom = np.unique(sig.astype(np.uint8), axis=0, return_inverse=True)
    vertex_atom = vertex_atom.reshape(-1)
    r = uniq.shape[0]
    atoms = tuple(tuple(np.flatnonzero(vertex_atom == a).tolist()) for a in range(r))
    sizes = np.array([len(a) for a in atoms], dtype=np.float64)
    incidence = uniq.T.astype(bool) if uniq.shape[1] else np.zeros((0, r), dtype=bool)
    fractions = None
    if sample_probes is not None:
        rng = np.random.default_rng(seed)
        probes = rng.integers(0, n, size=int(sample_probes))
        fractions = np.bincount(vertex_atom[probes], minlength=r) / float(sample_probes)
    return AtomPartition(n=n, atoms=atoms, sizes=sizes, signatures=uniq.astype(bool),
                         vertex_atom=vertex_atom, incidence=incidence, structure=structure,
                         constant=constant, sampled_fractions=fractions)


def net_spins(partition: AtomPartition, profile):
    """Per-cut row and column net spins ``(r', c')`` of a profile (order-2 cuts)."""
    nets = partition.net_spins(_as_profile(profile))[0]
    axes = partition.structure.cut_axes
    r_vec = np.array([nets[a[0]] for a in axes])
    c_vec = np.array([nets[a[-1]] for a in axes])
    return r_vec, c_vec


def profile_energy(partition: AtomPartition, decomposition, profile) -> float:
    return float(partition.profile_energy(_as_profile(profile), decomposition)[0])
