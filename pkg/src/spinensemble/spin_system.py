"""The N-spin molecule, its energy levels, and the thermal ensemble.

Units: k_B = 1 and hbar = 1, so level energies and temperature share one
unit and only their ratio matters.  The ensemble makes no attempt to keep
level counts integral; molecule_count and the per-level counts are reals,
which keeps the two readout pathways identical to rounding error instead
of to +-1 molecule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qlinalg import (
    DIM_CAP,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ValidationError,
    embed_single_spin,
)

_PAULI_BY_AXIS = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}

# Relative slack on sum(populations) == molecule_count.
POPULATION_SUM_TOL = 1e-9


@dataclass(frozen=True)
class SpinSystem:
    """A molecule of n_spins spin-1/2 nuclei with one energy per level."""

    n_spins: int
    level_energies: tuple[float, ...]

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValidationError("n_spins must be >= 1")
        k = 2**self.n_spins
        if k > DIM_CAP:
            raise ValidationError(f"2**{self.n_spins} levels exceed the dense cap {DIM_CAP}")
        energies = tuple(float(e) for e in self.level_energies)
        object.__setattr__(self, "level_energies", energies)
        if len(energies) != k:
            raise ValidationError(f"expected {k} level energies, got {len(energies)}")
        if not all(np.isfinite(energies)):
            raise ValidationError("level energies must be finite")

    @property
    def dim(self) -> int:
        return 2**self.n_spins

    @property
    def spectral_width(self) -> float:
        """Full spread of the level energies, max - min."""
        return max(self.level_energies) - min(self.level_energies)

    @classmethod
    def zeeman(cls, larmor) -> "SpinSystem":
        """System with the default Zeeman level energies for given frequencies."""
        larmor = tuple(float(w) for w in larmor)
        return cls(len(larmor), tuple(default_energies(len(larmor), larmor)))


def default_energies(n_spins: int, larmor) -> list[float]:
    """Zeeman level energies E_k = sum_j s_j(k) * w_j / 2.

    s_j(k) is +1 when bit j of level index k is set (big-endian, spin 1 is
    the most significant bit) and -1 otherwise, so |0...0> is the ground
    level for positive frequencies.
    """
    if n_spins < 1:
        raise ValidationError("n_spins must be >= 1")
    larmor = [float(w) for w in larmor]
    if len(larmor) != n_spins:
        raise ValidationError(f"expected {n_spins} larmor frequencies, got {len(larmor)}")
    if not all(np.isfinite(larmor)):
        raise ValidationError("larmor frequencies must be finite")
    energies = []
    for k in range(2**n_spins):
        e = 0.0
        for j in range(n_spins):
            bit = (k >> (n_spins - 1 - j)) & 1
            e += (larmor[j] / 2.0) if bit else (-larmor[j] / 2.0)
        energies.append(e)
    return energies


def boltzmann_populations(energies, temperature: float, molecule_count: float) -> np.ndarray:
    """Level counts C_k = M exp(-E_k/T) / Z.

    Energies are shifted by their minimum before exponentiation so large
    E/T ratios cannot overflow; the shift cancels in the normalization.
    """
    if temperature <= 0:
        raise ValidationError(f"temperature must be positive, got {temperature}")
    if molecule_count <= 0:
        raise ValidationError(f"molecule_count must be positive, got {molecule_count}")
    e = np.asarray(energies, dtype=float)
    weights = np.exp(-(e - e.min()) / temperature)
    return molecule_count * weights / weights.sum()


@dataclass(frozen=True, eq=False)
class ThermalEnsemble:
    """M molecules distributed over the levels of one spin system.

    populations[k] is the (real-valued) number of molecules whose initial
    state is level k; they sum to molecule_count.  Use ``boltzmann`` for
    the equilibrium distribution, or pass explicit populations for
    engineered ones (e.g. a zero-temperature [M, 0, ..., 0]).
    """

    system: SpinSystem
    temperature: float
    molecule_count: float
    populations: np.ndarray

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValidationError(f"temperature must be positive, got {self.temperature}")
        if self.molecule_count <= 0:
            raise ValidationError(f"molecule_count must be positive, got {self.molecule_count}")
        pops = np.array(self.populations, dtype=float)
        object.__setattr__(self, "populations", pops)
        if pops.shape != (self.system.dim,):
            raise ValidationError(
                f"expected {self.system.dim} populations, got shape {pops.shape}"
            )
        if np.any(pops < 0) or not np.all(np.isfinite(pops)):
            raise ValidationError("populations must be finite and nonnegative")
        dev = abs(float(pops.sum()) - self.molecule_count)
        if dev > POPULATION_SUM_TOL * self.molecule_count:
            raise ValidationError(
                f"populations sum to {pops.sum()!r}, expected molecule_count {self.molecule_count!r}"
            )
        self.populations.setflags(write=False)

    @classmethod
    def boltzmann(
        cls, system: SpinSystem, temperature: float, molecule_count: float
    ) -> "ThermalEnsemble":
        pops = boltzmann_populations(system.level_energies, temperature, molecule_count)
        return cls(system, temperature, molecule_count, pops)

    @property
    def probabilities(self) -> np.ndarray:
        """Occupation probabilities P_k = C_k / M."""
        return self.populations / self.molecule_count


@dataclass(frozen=True)
class EpsilonReport:
    """How close the ensemble sits to the equal-population regime."""

    delta_e: float
    epsilon: float
    max_population_spread: float


def equilibrium_density_matrix(ensemble: ThermalEnsemble) -> np.ndarray:
    """The ensemble-averaged statistical operator, diagonal in the eigenbasis."""
    return np.diag(ensemble.probabilities.astype(complex))


def epsilon_report(ensemble: ThermalEnsemble) -> EpsilonReport:
    """Spectral width, the small parameter width/T, and the population spread."""
    delta_e = ensemble.system.spectral_width
    probs = ensemble.probabilities
    return EpsilonReport(
        delta_e=delta_e,
        epsilon=delta_e / ensemble.temperature,
        max_population_spread=float(probs.max() - probs.min()),
    )


def collective_observable(n_spins: int, axis: str) -> np.ndarray:
    """Total spin component along an axis: sum_j sigma_axis(spin j) / 2."""
    pauli = _require_axis(axis)
    if n_spins < 1:
        raise ValidationError("n_spins must be >= 1")
    k = 2**n_spins
    total = np.zeros((k, k), dtype=complex)
    for spin in range(1, n_spins + 1):
        total += embed_single_spin(pauli / 2.0, spin, n_spins)
    return total


def single_spin_observable(n_spins: int, axis: str, spin: int) -> np.ndarray:
    """Spin component of one spin only: sigma_axis(spin) / 2 embedded in N spins."""
    pauli = _require_axis(axis)
    return embed_single_spin(pauli / 2.0, spin, n_spins)


def _require_axis(axis: str) -> np.ndarray:
    try:
        return _PAULI_BY_AXIS[axis]
    except KeyError:
        raise ValidationError(f"axis must be one of 'x', 'y', 'z', got {axis!r}") from None
