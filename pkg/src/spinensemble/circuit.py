"""Gate-sequence text format, parsing, and propagator composition.

File grammar (line oriented, '#' starts a comment, blank lines ignored):

    gate_line := NAME ws INT (ws INT)? (ws FLOAT)?
    NAME      in {H, X, Y, Z, S, T, RX, RY, RZ, CNOT, CZ, SWAP}   (case-sensitive)

H/X/Y/Z/S/T take one spin index; RX/RY/RZ take one spin index and one
angle in radians; CNOT/CZ/SWAP take two distinct spin indices (for CNOT
the first is the control).  Spin indices are 1-based.

Temporal order convention: textual order IS application order.  The first
line acts on states first, so the composed propagator of gates g1..gL is
the matrix product U(gL) ... U(g2) U(g1).  Every matrix uses the package's
big-endian basis convention (spin 1 = most significant bit).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .qlinalg import (
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ValidationError,
    embed_single_spin,
    unitary,
)

SINGLE_SPIN_KINDS = ("H", "X", "Y", "Z", "S", "T")
ROTATION_KINDS = ("RX", "RY", "RZ")
TWO_SPIN_KINDS = ("CNOT", "CZ", "SWAP")
GATE_KINDS = SINGLE_SPIN_KINDS + ROTATION_KINDS + TWO_SPIN_KINDS

_SQRT2_INV = 1.0 / math.sqrt(2.0)
_FIXED_1Q = {
    "H": np.array([[_SQRT2_INV, _SQRT2_INV], [_SQRT2_INV, -_SQRT2_INV]], dtype=complex),
    "X": PAULI_X,
    "Y": PAULI_Y,
    "Z": PAULI_Z,
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
}
_FIXED_2Q = {
    # Basis order |control target>: flip the target where the control is set.
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}

_INT_RE = re.compile(r"^\d+$")


class CircuitParseError(ValueError):
    """Raised on malformed circuit text; the message cites the line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class Gate:
    """One gate: kind, 1-based target spins, and an angle for rotations."""

    kind: str
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        arity = 2 if self.kind in TWO_SPIN_KINDS else 1
        if len(targets) != arity:
            raise ValidationError(f"{self.kind} takes {arity} target(s), got {len(targets)}")
        if any(t < 1 for t in targets):
            raise ValidationError("spin indices are 1-based")
        if arity == 2 and targets[0] == targets[1]:
            raise ValidationError(f"{self.kind} targets must be distinct")
        if self.kind in ROTATION_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValidationError(f"{self.kind} requires a finite angle")
        elif self.angle is not None:
            raise ValidationError(f"{self.kind} takes no angle")


@dataclass(frozen=True)
class Circuit:
    """An ordered gate sequence over n_spins spins."""

    n_spins: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n_spins < 1 or self.n_spins > 12:
            raise ValidationError(f"n_spins must be in 1..12, got {self.n_spins}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.targets) > self.n_spins:
                raise ValidationError(
                    f"gate {g.kind} targets {g.targets} exceed n_spins={self.n_spins}"
                )

    @property
    def dim(self) -> int:
        return 2**self.n_spins


def parse_circuit(text: str, n_spins: int) -> Circuit:
    """Parse circuit text; raises CircuitParseError citing the offending line."""
    gates = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        name = tokens[0]
        if name not in GATE_KINDS:
            raise CircuitParseError(line_number, f"unknown gate name {name!r}")
        args = tokens[1:]
        if name in ROTATION_KINDS:
            if len(args) != 2:
                raise CircuitParseError(line_number, f"{name} takes one spin and one angle")
            target = _parse_spin(line_number, args[0], n_spins)
            angle = _parse_angle(line_number, args[1])
            gates.append(Gate(name, (target,), angle))
        elif name in TWO_SPIN_KINDS:
            if len(args) != 2:
                raise CircuitParseError(line_number, f"{name} takes two spin indices")
            a = _parse_spin(line_number, args[0], n_spins)
            b = _parse_spin(line_number, args[1], n_spins)
            if a == b:
                raise CircuitParseError(line_number, f"{name} targets must be distinct")
            gates.append(Gate(name, (a, b)))
        else:
            if len(args) != 1:
                raise CircuitParseError(line_number, f"{name} takes one spin index")
            gates.append(Gate(name, (_parse_spin(line_number, args[0], n_spins),)))
    return Circuit(n_spins, tuple(gates))


def _parse_spin(line_number: int, token: str, n_spins: int) -> int:
    if not _INT_RE.match(token):
        raise CircuitParseError(line_number, f"malformed spin index {token!r}")
    spin = int(token)
    if not 1 <= spin <= n_spins:
        raise CircuitParseError(
            line_number, f"spin index {spin} out of range for {n_spins} spins"
        )
    return spin


def _parse_angle(line_number: int, token: str) -> float:
    try:
        angle = float(token)
    except ValueError:
        raise CircuitParseError(line_number, f"malformed angle {token!r}") from None
    if not math.isfinite(angle):
        raise CircuitParseError(line_number, f"angle must be finite, got {token!r}")
    return angle


def format_circuit(circuit: Circuit) -> str:
    """Render a circuit back to its text form (parse/format round-trips)."""
    lines = []
    for g in circuit.gates:
        parts = [g.kind, *map(str, g.targets)]
        if g.angle is not None:
            parts.append(repr(g.angle))
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def _rotation_matrix(kind: str, angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex)


def gate_unitary(gate: Gate, n_spins: int) -> np.ndarray:
    """The full 2**N unitary of one gate, identity on untouched spins."""
    if max(gate.targets) > n_spins:
        raise ValidationError(f"gate targets {gate.targets} exceed n_spins={n_spins}")
    if gate.kind in TWO_SPIN_KINDS:
        return _embed_two_spin(_FIXED_2Q[gate.kind], gate.targets, n_spins)
    m = _rotation_matrix(gate.kind, gate.angle) if gate.kind in ROTATION_KINDS else _FIXED_1Q[gate.kind]
    return embed_single_spin(m, gate.targets[0], n_spins)


def _embed_two_spin(m4: np.ndarray, targets: tuple[int, int], n_spins: int) -> np.ndarray:
    """Place a 4x4 gate on an arbitrary ordered pair of spins."""
    k = 2**n_spins
    pos_a = n_spins - targets[0]  # bit position of first target, from LSB
    pos_b = n_spins - targets[1]
    out = np.zeros((k, k), dtype=complex)
    for i in range(k):
        u = (i >> pos_a) & 1
        v = (i >> pos_b) & 1
        base = i & ~(1 << pos_a) & ~(1 << pos_b)
        for u2 in (0, 1):
            for v2 in (0, 1):
                amp = m4[2 * u2 + v2, 2 * u + v]
                if amp != 0:
                    j = base | (u2 << pos_a) | (v2 << pos_b)
                    out[j, i] += amp
    return out


def compose_propagator(circuit: Circuit) -> np.ndarray:
    """Product of the gate unitaries, first listed gate applied first.

    Returns the identity for an empty circuit; the result is validated to
    be unitary before being handed back.
    """
    u = np.eye(circuit.dim, dtype=complex)
    for gate in circuit.gates:
        u = gate_unitary(gate, circuit.n_spins) @ u
    return unitary(u)


def random_circuit(n_spins: int, rng: np.random.Generator, min_depth: int = 1, max_depth: int = 20) -> Circuit:
    """Seeded random circuit: uniform gate kinds, uniform depth in [min, max].

    For a single spin the two-spin kinds are excluded.  Angles are uniform
    in [0, 2*pi).
    """
    kinds = GATE_KINDS if n_spins >= 2 else SINGLE_SPIN_KINDS + ROTATION_KINDS
    depth = int(rng.integers(min_depth, max_depth + 1))
    gates = []
    for _ in range(depth):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind in TWO_SPIN_KINDS:
            pair = rng.choice(n_spins, size=2, replace=False)
            gates.append(Gate(kind, (int(pair[0]) + 1, int(pair[1]) + 1)))
        elif kind in ROTATION_KINDS:
            target = int(rng.integers(1, n_spins + 1))
            gates.append(Gate(kind, (target,), float(rng.uniform(0.0, 2.0 * math.pi))))
        else:
            gates.append(Gate(kind, (int(rng.integers(1, n_spins + 1)),)))
    return Circuit(n_spins, tuple(gates))
