"""Exact state-vector linear algebra for small composite systems.

Layout is big-endian: the first subsystem varies slowest in the amplitude
vector. A photon that can be lost carries a third level ``|v>`` (index 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

BUILD_TOL = 1e-9
NORM_TOL = 1e-10
NEGLIGIBLE = 1e-12

Dims = tuple[int, ...]


def _check_dims(dims: Sequence[int]) -> Dims:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {dims}")
    return dims


@dataclass(frozen=True)
class Ket:
    dims: Dims
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != math.prod(dims):
            raise ValueError(f"{amps.size} amplitudes do not fit dims {dims}")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > BUILD_TOL:
            raise ValueError(f"ket is not normalized (|psi|^2 = {norm:.3e})")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, dims: Sequence[int] | None = None) -> "Ket":
        """Build a ket from unnormalized amplitudes."""
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm < NEGLIGIBLE:
            raise ValueError("cannot normalize the zero vector")
        return cls(tuple(dims) if dims is not None else (amps.size,), amps / norm)

    @classmethod
    def basis(cls, index: int | Sequence[int], dims: Sequence[int]) -> "Ket":
        """Computational basis state; ``index`` is flat or one level per subsystem."""
        dims = _check_dims(dims)
        if not isinstance(index, (int, np.integer)):
            index = int(np.ravel_multi_index(tuple(index), dims))
        amps = np.zeros(math.prod(dims), dtype=complex)
        amps[index] = 1.0
        return cls(dims, amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def inner(self, other: "Ket") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class Operator:
    dims: Dims
    matrix: np.ndarray = field(repr=False)
    unitary: bool = False
    hermitian: bool = False

    def __post_init__(self):
        dims = _check_dims(self.dims)
        m = np.asarray(self.matrix, dtype=complex)
        n = math.prod(dims)
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
        if self.unitary:
            err = np.max(np.abs(m.conj().T @ m - np.eye(n)))
            if err > BUILD_TOL:
                raise ValueError(f"operator flagged unitary but |U^dag U - I| = {err:.3e}")
        if self.hermitian:
            err = np.max(np.abs(m - m.conj().T))
            if err > BUILD_TOL:
                raise ValueError(f"operator flagged hermitian but |H - H^dag| = {err:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "Operator":
        dims = _check_dims(dims)
        return cls(dims, np.eye(math.prod(dims)), unitary=True, hermitian=True)

    def apply(self, ket: Ket) -> Ket:
        if ket.dims != self.dims:
            raise ValueError(f"operator dims {self.dims} != ket dims {ket.dims}")
        out = self.matrix @ ket.amplitudes
        if self.unitary:
            return Ket(self.dims, out)
        return Ket.from_amplitudes(out, self.dims)

    def __matmul__(self, other: "Operator") -> "Operator":
        if other.dims != self.dims:
            raise ValueError(f"operator dims differ: {self.dims} vs {other.dims}")
        return Operator(
            self.dims,
            self.matrix @ other.matrix,
            unitary=self.unitary and other.unitary,
        )


@dataclass(frozen=True)
class Outcome:
    label: str
    probability: float
    post_state: Ket | None


@dataclass(frozen=True)
class OutcomeDistribution:
    outcomes: tuple[Outcome, ...]

    def __post_init__(self):
        probs = np.array([o.probability for o in self.outcomes])
        if np.any(probs < 0):
            raise ValueError("negative outcome probability")
        if abs(probs.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"outcome probabilities sum to {probs.sum():.12f}")

    def probabilities(self) -> dict[str, float]:
        return {o.label: o.probability for o in self.outcomes}

    def __iter__(self):
        return iter(self.outcomes)


# Common single-qubit gates.
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

BELL_LABELS = ("psi+", "psi-", "phi+", "phi-")


def gate(matrix, dims: Sequence[int] | None = None) -> Operator:
    """Wrap a unitary matrix; single-qubit by default."""
    m = np.asarray(matrix, dtype=complex)
    return Operator(tuple(dims) if dims is not None else (m.shape[0],), m, unitary=True)


def tensor(parts: Sequence[Ket]) -> Ket:
    if not parts:
        raise ValueError("tensor() needs at least one ket")
    amps = parts[0].amplitudes
    dims = parts[0].dims
    for k in parts[1:]:
        amps = np.kron(amps, k.amplitudes)
        dims = dims + k.dims
    return Ket(dims, amps)


def tensor_ops(parts: Sequence[Operator]) -> Operator:
    if not parts:
        raise ValueError("tensor_ops() needs at least one operator")
    m = parts[0].matrix
    dims = parts[0].dims
    for op in parts[1:]:
        m = np.kron(m, op.matrix)
        dims = dims + op.dims
    return Operator(
        dims,
        m,
        unitary=all(p.unitary for p in parts),
        hermitian=all(p.hermitian for p in parts),
    )


def embed(op: Operator, targets: Sequence[int], dims: Sequence[int]) -> Operator:
    """Lift ``op`` onto ``targets`` of a system with ``dims``, identity elsewhere."""
    dims = _check_dims(dims)
    targets = tuple(int(t) for t in targets)
    n = len(dims)
    if len(set(targets)) != len(targets):
        raise ValueError(f"repeated target index in {targets}")
    if any(t < 0 or t >= n for t in targets):
        raise ValueError(f"target out of range for {n} subsystems: {targets}")
    if tuple(dims[t] for t in targets) != op.dims:
        raise ValueError(
            f"operator dims {op.dims} do not match target dims "
            f"{tuple(dims[t] for t in targets)}"
        )
    rest = [i for i in range(n) if i not in targets]
    order = list(targets) + rest
    rest_dim = math.prod(dims[i] for i in rest) if rest else 1
    big = np.kron(op.matrix, np.eye(rest_dim))
    shape = [dims[i] for i in order]
    inv = list(np.argsort(order))
    t = big.reshape(shape + shape).transpose(inv + [n + i for i in inv])
    total = math.prod(dims)
    return Operator(
        dims, t.reshape(total, total), unitary=op.unitary, hermitian=op.hermitian
    )


def apply(op: Operator, targets: Sequence[int], ket: Ket) -> Ket:
    return embed(op, targets, ket.dims).apply(ket)


def _validate_basis(basis: Sequence[Ket], dims: Dims) -> np.ndarray:
    for b in basis:
        if b.dims != dims:
            raise ValueError(f"basis ket dims {b.dims} != target dims {dims}")
    d = math.prod(dims)
    if len(basis) != d:
        raise ValueError(f"incomplete basis: {len(basis)} kets for dimension {d}")
    mat = np.column_stack([b.amplitudes for b in basis])
    err = np.max(np.abs(mat.conj().T @ mat - np.eye(d)))
    if err > BUILD_TOL:
        raise ValueError(f"basis is not orthonormal (deviation {err:.3e})")
    return mat


def measure(
    ket: Ket,
    targets: Sequence[int],
    basis: Sequence[Ket],
    labels: Sequence[str] | None = None,
) -> OutcomeDistribution:
    """Projective measurement of ``targets`` in ``basis`` (Born rule).

    Outcomes come back in basis order. Outcomes with probability below
    1e-12 carry no post-measurement state.
    """
    targets = tuple(targets)
    tdims = tuple(ket.dims[t] for t in targets)
    _validate_basis(basis, tdims)
    if labels is None:
        labels = [str(i) for i in range(len(basis))]
    if len(labels) != len(basis):
        raise ValueError("one label per basis ket required")
    outcomes = []
    for label, b in zip(labels, basis):
        proj = Operator(tdims, np.outer(b.amplitudes, b.amplitudes.conj()))
        v = embed(proj, targets, ket.dims).matrix @ ket.amplitudes
        p = float(np.vdot(v, v).real)
        post = Ket(ket.dims, v / math.sqrt(p)) if p >= NEGLIGIBLE else None
        outcomes.append(Outcome(str(label), p, post))
    return OutcomeDistribution(tuple(outcomes))


def computational_basis(dims: Sequence[int]) -> list[Ket]:
    dims = _check_dims(dims)
    return [Ket.basis(i, dims) for i in range(math.prod(dims))]


def bell_basis() -> list[Ket]:
    """psi+, psi-, phi+, phi- on two qubits, in that order."""
    s = 1 / math.sqrt(2)
    return [
        Ket((2, 2), [0, s, s, 0]),
        Ket((2, 2), [0, s, -s, 0]),
        Ket((2, 2), [s, 0, 0, s]),
        Ket((2, 2), [s, 0, 0, -s]),
    ]
