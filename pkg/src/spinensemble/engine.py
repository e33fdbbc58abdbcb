"""Two independent readout pathways for a thermal ensemble.

Pathway A ("sum") mirrors the physical picture of C_k molecules starting
in eigenstate k: evolve each computational eigenstate separately under
the propagator, take its expectation value of the observable, and form
the population-weighted sum over initial states.  Pathway B ("trace")
builds the equilibrium density matrix once, conjugates it by the
propagator, and reads M * tr(rho' * obs).  The two share no evolution
code; their agreement is the package's central consistency check, so a
result where they disagree hands both numbers back instead of hiding one.

Per-state expectation values depend only on the initial eigenstate index,
never on which physical molecule carries it; no molecule index exists
anywhere in this module.  Expectations of Hermitian observables are real
up to rounding; both pathways check their imaginary residuals against a
1e-10 budget and refuse to return silently contaminated numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, compose_propagator
from .qlinalg import ValidationError, hermitian, unitary
from .spin_system import ThermalEnsemble, equilibrium_density_matrix

IMAG_TOL = 1e-10
PATHWAY_TOL = 1e-10  # |sum - trace| <= PATHWAY_TOL * molecule_count


@dataclass(frozen=True, eq=False)
class PathwayResult:
    """Both ensemble readouts for one circuit, observable, and ensemble.

    per_state_values[k] is the single-molecule expectation value for
    initial eigenstate k (unweighted); expectation_sum is their
    population-weighted total and expectation_trace the density-matrix
    value of the same quantity.
    """

    expectation_sum: float
    expectation_trace: float
    abs_difference: float
    per_state_values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "expectation_sum", float(self.expectation_sum))
        object.__setattr__(self, "expectation_trace", float(self.expectation_trace))
        object.__setattr__(self, "abs_difference", float(self.abs_difference))
        arr = np.asarray(self.per_state_values, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "per_state_values", arr)


def evolve_eigenstate(propagator: np.ndarray, k: int) -> np.ndarray:
    """State U|k>: column k of the propagator, as a fresh vector."""
    u = np.asarray(propagator, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValidationError(f"propagator must be square, got shape {u.shape}")
    if not 0 <= k < u.shape[0]:
        raise ValidationError(f"eigenstate index {k} out of range for dim {u.shape[0]}")
    return u[:, k].copy()


def per_state_expectations(propagator: np.ndarray, observable: np.ndarray) -> np.ndarray:
    """<k|U' obs U|k> for every computational eigenstate k, as real floats.

    Computed column by column: the evolved state of eigenstate k is the
    k-th column of the propagator, so each value is a vector quadratic
    form, never a density matrix.
    """
    u = unitary(propagator)
    obs = hermitian(observable)
    if obs.shape != u.shape:
        raise ValidationError(
            f"observable shape {obs.shape} does not match propagator shape {u.shape}"
        )
    w = obs @ u
    values = np.empty(u.shape[0], dtype=float)
    for k in range(u.shape[0]):
        raw = np.vdot(u[:, k], w[:, k])
        if abs(raw.imag) > IMAG_TOL:
            raise ValidationError(
                f"expectation for eigenstate {k} has imaginary residual {raw.imag:.3e}"
            )
        values[k] = raw.real
    return values


def expectation_per_initial_state(propagator: np.ndarray, k: int, observable: np.ndarray) -> float:
    """Single-molecule expectation for one initial eigenstate."""
    u = unitary(propagator)
    obs = hermitian(observable)
    if obs.shape != u.shape:
        raise ValidationError(
            f"observable shape {obs.shape} does not match propagator shape {u.shape}"
        )
    evolved = evolve_eigenstate(u, k)
    raw = np.vdot(evolved, obs @ evolved)
    if abs(raw.imag) > IMAG_TOL:
        raise ValidationError(
            f"expectation for eigenstate {k} has imaginary residual {raw.imag:.3e}"
        )
    return float(raw.real)


def ensemble_expectation_sum(
    propagator: np.ndarray, ensemble: ThermalEnsemble, observable: np.ndarray
) -> float:
    """Pathway A: population-weighted sum of per-eigenstate expectations.

    The accumulation runs in fixed ascending k order so the result is
    bit-reproducible no matter how the per-state values were produced.
    """
    per_state = per_state_expectations(propagator, observable)
    return _weighted_sum(ensemble, per_state)


def _weighted_sum(ensemble: ThermalEnsemble, per_state: np.ndarray) -> float:
    if per_state.shape[0] != ensemble.system.dim:
        raise ValidationError(
            f"propagator dim {per_state.shape[0]} does not match system dim {ensemble.system.dim}"
        )
    total = 0.0
    for k in range(per_state.shape[0]):
        total += float(ensemble.populations[k]) * float(per_state[k])
    return total


def ensemble_expectation_trace(
    propagator: np.ndarray, ensemble: ThermalEnsemble, observable: np.ndarray
) -> float:
    """Pathway B: M * tr(U rho U' * obs) with rho the equilibrium mixture."""
    u = unitary(propagator)
    obs = hermitian(observable)
    rho = equilibrium_density_matrix(ensemble)
    if obs.shape != rho.shape or u.shape != rho.shape:
        raise ValidationError("propagator, observable, and density matrix dims disagree")
    evolved = u @ rho @ u.conj().T
    raw = np.trace(evolved @ obs)
    if abs(raw.imag) > IMAG_TOL:
        raise ValidationError(f"trace expectation has imaginary residual {raw.imag:.3e}")
    return float(ensemble.molecule_count * raw.real)


def compare_pathways(
    circuit: Circuit, ensemble: ThermalEnsemble, observable: np.ndarray
) -> PathwayResult:
    """Compose the circuit's propagator, run both pathways, report both.

    The propagator is the only shared intermediate; everything after it is
    computed twice by design.
    """
    propagator = compose_propagator(circuit)
    per_state = per_state_expectations(propagator, observable)
    total = _weighted_sum(ensemble, per_state)
    trace_value = ensemble_expectation_trace(propagator, ensemble, observable)
    return PathwayResult(
        expectation_sum=total,
        expectation_trace=trace_value,
        abs_difference=abs(total - trace_value),
        per_state_values=per_state,
    )
