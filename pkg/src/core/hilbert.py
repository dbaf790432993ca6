"""
Hilbert - State vectors and operators over composite (tensor-product) spaces
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

logger = logging.getLogger(__name__)

TOLERANCE = 1e-10
EXACT_TOLERANCE = 1e-12
ZERO_PROBABILITY = 1e-12


def _frozen(array: NDArray) -> NDArray[np.complex128]:
    out = np.array(array, dtype=np.complex128, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SpaceShape:
    """Ordered subsystem dimensions of a composite space (row-major)"""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        for i, d in enumerate(dims):
            if d < 1:
                raise ValueError(f"Subsystem {i} has dimension {d}; dimensions must be >= 1")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.dims else 1

    def __len__(self) -> int:
        return len(self.dims)

    def flat_index(self, indices: Sequence[int]) -> int:
        """Row-major flat index of a multi-index"""
        indices = tuple(int(i) for i in indices)
        if len(indices) != len(self.dims):
            raise ValueError(f"Expected {len(self.dims)} indices, got {len(indices)}")
        for subsystem, (i, d) in enumerate(zip(indices, self.dims)):
            if not 0 <= i < d:
                raise ValueError(f"Index {i} out of range for subsystem {subsystem} (dim {d})")
        if not self.dims:
            return 0
        return int(np.ravel_multi_index(indices, self.dims))

    def multi_index(self, flat: int) -> tuple[int, ...]:
        if not 0 <= flat < self.total:
            raise ValueError(f"Flat index {flat} out of range for total dimension {self.total}")
        if not self.dims:
            return ()
        return tuple(int(i) for i in np.unravel_index(flat, self.dims))

    def concat(self, other: "SpaceShape") -> "SpaceShape":
        return SpaceShape(self.dims + other.dims)

    def drop(self, subsystem: int) -> "SpaceShape":
        """Shape with one subsystem removed"""
        self._check_subsystem(subsystem)
        return SpaceShape(self.dims[:subsystem] + self.dims[subsystem + 1:])

    def _check_subsystem(self, subsystem: int):
        if not 0 <= subsystem < len(self.dims):
            raise ValueError(f"Subsystem {subsystem} does not exist in shape {list(self.dims)}")


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over a composite space"""

    shape: SpaceShape
    amps: NDArray[np.complex128] = field(compare=False)

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amps))
        if amps.shape[0] != self.shape.total:
            raise ValueError(
                f"State has {amps.shape[0]} amplitudes but shape {list(self.shape.dims)} "
                f"needs {self.shape.total}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("State amplitudes must be finite")
        object.__setattr__(self, "amps", amps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.amps, other.amps)

    @classmethod
    def from_amplitudes(cls, values: Iterable[complex], shape: Optional[SpaceShape] = None) -> "StateVector":
        amps = np.asarray(list(values), dtype=np.complex128)
        return cls(shape or SpaceShape((amps.shape[0],)), amps)

    @staticmethod
    def tensor(*states: "StateVector") -> "StateVector":
        """Tensor product in the given order"""
        if not states:
            raise ValueError("Tensor product of an empty list of states")
        shape = reduce(SpaceShape.concat, (s.shape for s in states))
        amps = reduce(np.kron, (s.amps for s in states))
        return StateVector(shape, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = TOLERANCE) -> bool:
        return abs(float(np.vdot(self.amps, self.amps).real) - 1.0) <= tol

    def normalize(self) -> "StateVector":
        """Return a unit-norm copy; never applied implicitly"""
        n = self.norm()
        if n <= 0.0:
            raise ValueError("Cannot normalize the zero vector")
        return StateVector(self.shape, self.amps / n)

    def amplitude(self, indices: Sequence[int]) -> complex:
        return complex(self.amps[self.shape.flat_index(indices)])

    def support(self, tol: float = EXACT_TOLERANCE) -> dict[tuple[int, ...], complex]:
        """Non-zero amplitudes keyed by multi-index"""
        return {
            self.shape.multi_index(i): complex(a)
            for i, a in enumerate(self.amps)
            if abs(a) > tol
        }


@dataclass(frozen=True)
class OperatorMatrix:
    """Square complex matrix acting on a composite space"""

    shape: SpaceShape
    matrix: NDArray[np.complex128] = field(compare=False)

    def __post_init__(self):
        matrix = _frozen(self.matrix)
        n = self.shape.total
        if matrix.shape != (n, n):
            raise ValueError(
                f"Operator of size {matrix.shape} does not match shape {list(self.shape.dims)} "
                f"(expected {n}x{n})"
            )
        if not np.all(np.isfinite(matrix)):
            raise ValueError("Operator entries must be finite")
        object.__setattr__(self, "matrix", matrix)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.matrix, other.matrix)

    @classmethod
    def identity(cls, shape: SpaceShape) -> "OperatorMatrix":
        return cls(shape, np.eye(shape.total, dtype=np.complex128))

    @classmethod
    def from_array(cls, array) -> "OperatorMatrix":
        array = np.asarray(array, dtype=np.complex128)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError(f"Operator must be a square matrix, got shape {array.shape}")
        return cls(SpaceShape((array.shape[0],)), array)

    @property
    def dim(self) -> int:
        return self.shape.total

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.shape, self.matrix.conj().T)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        if other.shape.total != self.shape.total:
            raise ValueError(
                f"Cannot compose operators on {list(self.shape.dims)} and {list(other.shape.dims)}"
            )
        return OperatorMatrix(self.shape, self.matrix @ other.matrix)

    def unitarity_error(self) -> float:
        """max |U U† - I| entry"""
        gram = (self @ self.dagger()).matrix
        return float(np.max(np.abs(gram - np.eye(self.dim)))) if self.dim else 0.0

    def is_unitary(self, tol: float = TOLERANCE) -> bool:
        return self.unitarity_error() <= tol


@dataclass(frozen=True)
class ProjectionResult:
    """Outcome of projecting one subsystem onto a basis vector"""

    probability: float
    unnormalized: StateVector
    residual: Optional[StateVector]  # None when the outcome is impossible

    @property
    def is_empty(self) -> bool:
        return self.residual is None


def basis_state(shape: SpaceShape, indices: Sequence[int]) -> StateVector:
    amps = np.zeros(shape.total, dtype=np.complex128)
    amps[shape.flat_index(indices)] = 1.0
    return StateVector(shape, amps)


def kron(ops: Sequence[OperatorMatrix]) -> OperatorMatrix:
    """Kronecker product in the given order"""
    ops = list(ops)
    if not ops:
        raise ValueError("kron needs at least one operator")
    shape = reduce(SpaceShape.concat, (op.shape for op in ops))
    matrix = reduce(np.kron, (op.matrix for op in ops))
    return OperatorMatrix(shape, matrix)


def embed(op: OperatorMatrix, shape: SpaceShape, targets: Sequence[int]) -> OperatorMatrix:
    """
    Lift an operator on an ordered subset of subsystems to the full space.

    Args:
        op: Operator whose subsystem order is `targets`
        shape: Full composite shape
        targets: Subsystem indices of `shape` that `op` acts on, in op's own order

    Returns:
        Operator on `shape` acting as `op` on targets and identity elsewhere
    """
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ValueError(f"Duplicate target subsystems: {targets}")
    for t in targets:
        shape._check_subsystem(t)
    expected = tuple(shape.dims[t] for t in targets)
    if op.shape.total != int(np.prod(expected, dtype=np.int64)):
        raise ValueError(f"Operator of dimension {op.dim} cannot act on subsystems {targets} with dims {list(expected)}")

    rest = [i for i in range(len(shape)) if i not in targets]
    order = targets + rest
    rest_dim = int(np.prod([shape.dims[i] for i in rest], dtype=np.int64)) if rest else 1
    full = np.kron(op.matrix, np.eye(rest_dim, dtype=np.complex128))

    # Axes of `full` follow `order`; move them back to natural order
    n = len(shape)
    tensor = full.reshape([shape.dims[i] for i in order] * 2)
    inverse = list(np.argsort(order))
    tensor = tensor.transpose(inverse + [n + i for i in inverse])
    return OperatorMatrix(shape, tensor.reshape(shape.total, shape.total))


def apply(op: OperatorMatrix, s: StateVector) -> StateVector:
    if op.shape.total != s.shape.total:
        raise ValueError(
            f"Operator on {list(op.shape.dims)} cannot act on state of shape {list(s.shape.dims)}"
        )
    return StateVector(s.shape, op.matrix @ s.amps)


def _check_same_shape(x: StateVector, y: StateVector):
    if x.shape != y.shape:
        raise ValueError(f"Shape mismatch: {list(x.shape.dims)} vs {list(y.shape.dims)}")


def inner(x: StateVector, y: StateVector) -> complex:
    """<x|y>, conjugate-linear in x"""
    _check_same_shape(x, y)
    return complex(np.vdot(x.amps, y.amps))


def project_subsystem(s: StateVector, subsystem: int, basis_vector: StateVector) -> ProjectionResult:
    """
    Project one subsystem of `s` onto `basis_vector`.

    The probability is the squared norm of the partial inner product <b|s>; the
    residual is that partial inner product renormalized, or None when the
    probability is at or below ZERO_PROBABILITY.
    """
    s.shape._check_subsystem(subsystem)
    dim = s.shape.dims[subsystem]
    if basis_vector.shape.total != dim:
        raise ValueError(
            f"Basis vector of dimension {basis_vector.shape.total} does not match subsystem {subsystem} (dim {dim})"
        )
    if not basis_vector.is_normalized():
        raise ValueError(f"Basis vector must be normalized (norm {basis_vector.norm():.12g})")

    tensor = s.amps.reshape(s.shape.dims)
    partial = np.tensordot(basis_vector.amps.conj(), tensor, axes=([0], [subsystem]))
    remaining = s.shape.drop(subsystem)
    unnormalized = StateVector(remaining, np.ravel(partial))
    probability = float(np.vdot(unnormalized.amps, unnormalized.amps).real)

    if probability <= ZERO_PROBABILITY:
        return ProjectionResult(probability, unnormalized, None)
    return ProjectionResult(probability, unnormalized, StateVector(remaining, unnormalized.amps / np.sqrt(probability)))


def fidelity(x: StateVector, y: StateVector) -> float:
    """|<x|y>|^2 for normalized states of the same shape"""
    _check_same_shape(x, y)
    for name, state in (("first", x), ("second", y)):
        if not state.is_normalized():
            raise ValueError(f"Fidelity needs normalized states; {name} argument has norm {state.norm():.12g}")
    return float(abs(inner(x, y)) ** 2)
