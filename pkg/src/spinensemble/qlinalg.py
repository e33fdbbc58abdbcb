"""Dense complex linear algebra over small spin spaces.

Everything in this package works on plain ``numpy`` arrays of dtype
complex128.  The functions here validate the roles a matrix or vector is
supposed to play (Hermitian, unitary, normalized state, density operator)
and provide the handful of primitives the rest of the package is built on:
tensor products, Hermitian spectra, partial trace, partial transpose and
Frobenius distances.

Conventions, fixed once for the whole package:

* Spins are numbered 1..N and spin 1 is the MOST significant bit of a
  basis index (big-endian).  Basis index 2 of a two-spin space is |10>.
* Dimensions are capped at 4096 (= 2**12): this is a dense, desk-scale
  library, not a tensor-network one.
* All operations are pure functions; nothing mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Centralized tolerances.  Validation thresholds are deliberately loose
# relative to double precision at desk scale (K <= 4096, entries O(1)).
HERMITIAN_TOL = 1e-12   # max-abs deviation allowed in A - A^dagger
UNITARY_TOL = 1e-10     # max-abs deviation allowed in U^dagger U - I
NORM_TOL = 1e-10        # |sum |a_k|^2 - 1| allowed for state vectors
PSD_TOL = 1e-10         # eigenvalue floor for density operators
EQ_TOL = 1e-12          # entrywise equality assertions
SPECTRAL_TOL = 1e-9     # residuals of spectral identities
DIM_CAP = 4096          # 2**12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
for _m in (PAULI_X, PAULI_Y, PAULI_Z, IDENTITY_2):
    _m.setflags(write=False)


class ValidationError(ValueError):
    """A numeric contract was violated (non-Hermitian, non-unitary, ...)."""


def as_matrix(entries) -> np.ndarray:
    """Coerce to a square complex128 matrix within the dimension cap."""
    a = np.array(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValidationError("matrix dimension must be >= 1")
    if a.shape[0] > DIM_CAP:
        raise ValidationError(f"dimension {a.shape[0]} exceeds the dense cap {DIM_CAP}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValidationError("matrix entries must be finite")
    return a


def hermitian(entries) -> np.ndarray:
    """Validate and return a Hermitian matrix (max-abs tolerance HERMITIAN_TOL)."""
    a = as_matrix(entries)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > HERMITIAN_TOL:
        raise ValidationError(f"matrix is not Hermitian: max |A - A^dagger| = {dev:.3e}")
    return a


def unitary(entries) -> np.ndarray:
    """Validate and return a unitary matrix (max-abs tolerance UNITARY_TOL)."""
    u = as_matrix(entries)
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > UNITARY_TOL:
        raise ValidationError(f"matrix is not unitary: max |U^dagger U - I| = {dev:.3e}")
    return u


def state_vector(amplitudes) -> np.ndarray:
    """Validate and return a normalized complex amplitude vector."""
    psi = np.array(amplitudes, dtype=complex)
    if psi.ndim != 1 or psi.shape[0] < 1:
        raise ValidationError(f"expected a 1-D amplitude vector, got shape {psi.shape}")
    if psi.shape[0] > DIM_CAP:
        raise ValidationError(f"dimension {psi.shape[0]} exceeds the dense cap {DIM_CAP}")
    if not (np.all(np.isfinite(psi.real)) and np.all(np.isfinite(psi.imag))):
        raise ValidationError("amplitudes must be finite")
    dev = abs(float(np.vdot(psi, psi).real) - 1.0)
    if dev > NORM_TOL:
        raise ValidationError(f"state vector is not normalized: |norm^2 - 1| = {dev:.3e}")
    return psi


def density_matrix(entries) -> np.ndarray:
    """Validate a density operator: Hermitian, unit trace, positive semidefinite."""
    rho = hermitian(entries)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > NORM_TOL:
        raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < -PSD_TOL:
        raise ValidationError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def maximally_mixed(dim: int) -> np.ndarray:
    """The maximally mixed state I/dim."""
    if dim < 1:
        raise ValidationError("matrix dimension must be >= 1")
    if dim > DIM_CAP:
        raise ValidationError(f"dimension {dim} exceeds the dense cap {DIM_CAP}")
    return np.eye(dim, dtype=complex) / dim


@dataclass(frozen=True)
class BipartitionSpec:
    """A cut of spins {1..N} into two non-empty sides.

    Sides are stored in ascending spin order; the reduced or reshaped
    subsystems produced from a cut keep that ascending order.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left = tuple(sorted(self.left))
        right = tuple(sorted(self.right))
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        if not left or not right:
            raise ValidationError("both sides of a bipartition must be non-empty")
        n = len(left) + len(right)
        if set(left) | set(right) != set(range(1, n + 1)) or set(left) & set(right):
            raise ValidationError(
                f"bipartition sides {left}|{right} must be disjoint and cover 1..{n}"
            )

    @property
    def n_spins(self) -> int:
        return len(self.left) + len(self.right)

    @classmethod
    def parse(cls, text: str, n_spins: int) -> "BipartitionSpec":
        """Parse a cut string such as ``1|2`` or ``1,3|2`` against n_spins.

        Each side is a comma- or space-separated list of spin indices; a
        side with neither commas nor spaces is read one digit per spin
        (only valid while all indices are single digits).
        """
        halves = text.split("|")
        if len(halves) != 2:
            raise ValidationError(f"bipartition {text!r} must contain exactly one '|'")
        sides = []
        for half in halves:
            half = half.strip()
            if "," in half or " " in half:
                tokens = [t for t in half.replace(",", " ").split() if t]
            else:
                tokens = list(half)
            try:
                indices = tuple(int(t) for t in tokens)
            except ValueError:
                raise ValidationError(f"bipartition side {half!r} is not a spin list") from None
            sides.append(indices)
        spec = cls(sides[0], sides[1])
        if spec.n_spins != n_spins:
            raise ValidationError(
                f"bipartition {text!r} covers {spec.n_spins} spins, expected {n_spins}"
            )
        return spec

    def __str__(self) -> str:
        if self.n_spins <= 9:
            return "".join(map(str, self.left)) + "|" + "".join(map(str, self.right))
        return ",".join(map(str, self.left)) + "|" + ",".join(map(str, self.right))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; entry ((i*dimB+k),(j*dimB+l)) = A[i,j] * B[k,l]."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] * b.shape[0] > DIM_CAP:
        raise ValidationError(
            f"tensor product dimension {a.shape[0] * b.shape[0]} exceeds cap {DIM_CAP}"
        )
    return np.kron(a, b)


def embed_single_spin(op2, spin: int, n_spins: int) -> np.ndarray:
    """Embed a 2x2 operator on one spin of an N-spin space (big-endian)."""
    op2 = as_matrix(op2)
    if op2.shape[0] != 2:
        raise ValidationError("embed_single_spin expects a 2x2 operator")
    if not 1 <= spin <= n_spins:
        raise ValidationError(f"spin index {spin} out of range for {n_spins} spins")
    left = np.eye(2 ** (spin - 1), dtype=complex)
    right = np.eye(2 ** (n_spins - spin), dtype=complex)
    return np.kron(np.kron(left, op2), right)


def hermitian_eigenvalues(a) -> np.ndarray:
    """Real spectrum of a Hermitian matrix, ascending."""
    a = hermitian(a)
    return np.linalg.eigvalsh(a)


def _axes(part: BipartitionSpec, dim: int) -> tuple[list[int], list[int]]:
    """0-based tensor axes for the two sides of a cut over a 2**N space."""
    n = part.n_spins
    if dim != 2**n:
        raise ValidationError(f"bipartition over {n} spins does not match dimension {dim}")
    return [s - 1 for s in part.left], [s - 1 for s in part.right]


def partial_trace(rho, part: BipartitionSpec, keep: str) -> np.ndarray:
    """Trace out one side of a bipartition of a 2**N-dimensional operator.

    ``keep`` selects the side that survives ("left" or "right"); the result
    is indexed by the kept spins in ascending spin order.
    """
    rho = as_matrix(rho)
    left_axes, right_axes = _axes(part, rho.shape[0])
    if keep == "left":
        kept, traced = left_axes, right_axes
    elif keep == "right":
        kept, traced = right_axes, left_axes
    else:
        raise ValidationError(f"keep must be 'left' or 'right', got {keep!r}")
    n = part.n_spins
    t = rho.reshape([2] * (2 * n))
    # einsum subscripts: row axis i and column axis N+i share a letter for
    # traced spins (summed), keep distinct letters for kept spins.
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    row = [letters[i] for i in range(n)]
    col = [letters[n + i] for i in range(n)]
    for ax in traced:
        col[ax] = row[ax]
    out = "".join(row[ax] for ax in kept) + "".join(letters[n + ax] for ax in kept)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    d = 2 ** len(kept)
    return reduced.reshape(d, d)


def partial_transpose(rho, part: BipartitionSpec) -> np.ndarray:
    """Transpose the right-side spin indices of a 2**N-dimensional operator."""
    rho = as_matrix(rho)
    _, right_axes = _axes(part, rho.shape[0])
    n = part.n_spins
    t = rho.reshape([2] * (2 * n))
    perm = list(range(2 * n))
    for ax in right_axes:
        perm[ax], perm[n + ax] = perm[n + ax], perm[ax]
    return t.transpose(perm).reshape(rho.shape)


def frobenius_distance(a, b) -> float:
    """sqrt(sum |A_ij - B_ij|^2)."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(np.linalg.norm(a - b))
