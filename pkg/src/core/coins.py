"""
Coins - Coin operators and coin-space measurement bases
"""

from dataclasses import dataclass

import numpy as np

from src.core.hilbert import OperatorMatrix, SpaceShape, StateVector


@dataclass(frozen=True)
class CoinKind:
    """A coin family with its dimension"""

    name: str
    dim: int

    KINDS = ("identity", "fourier", "hadamard", "grover")

    def __post_init__(self):
        if self.name not in self.KINDS:
            raise ValueError(f"Unknown coin kind '{self.name}'. Supported: {list(self.KINDS)}")
        if not isinstance(self.dim, (int, np.integer)) or isinstance(self.dim, bool):
            raise ValueError(f"Coin dimension must be an integer, got {self.dim!r}")
        if self.dim < 1:
            raise ValueError(f"{self.name} coin requires dimension >= 1 (got {self.dim})")
        if self.name == "hadamard" and self.dim != 2:
            raise ValueError(f"Hadamard coin is fixed at dimension 2 (got {self.dim})")

    @classmethod
    def identity(cls, d: int) -> "CoinKind":
        return cls("identity", d)

    @classmethod
    def fourier(cls, d: int) -> "CoinKind":
        return cls("fourier", d)

    @classmethod
    def hadamard(cls) -> "CoinKind":
        return cls("hadamard", 2)

    @classmethod
    def grover(cls, d: int) -> "CoinKind":
        return cls("grover", d)

    @classmethod
    def parse(cls, name: str, dim: int) -> "CoinKind":
        return cls(str(name).strip().lower(), int(dim))

    def __str__(self) -> str:
        return f"{self.name}({self.dim})"


def make_coin(kind: CoinKind) -> OperatorMatrix:
    """
    Closed-form coin matrix.

    Fourier entry (j, k) is exp(+2πi·jk/d)/√d; Grover is 2/d - δ_jk.
    """
    d = kind.dim
    if kind.name == "identity":
        matrix = np.eye(d, dtype=np.complex128)
    elif kind.name == "fourier":
        jk = np.outer(np.arange(d), np.arange(d))
        matrix = np.exp(2j * np.pi * jk / d) / np.sqrt(d)
    elif kind.name == "hadamard":
        matrix = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)
    else:
        matrix = (2.0 / d) * np.ones((d, d), dtype=np.complex128) - np.eye(d, dtype=np.complex128)
    return OperatorMatrix(SpaceShape((d,)), matrix)


def fourier_basis(d: int) -> list[StateVector]:
    """|f_j> = (1/√d) Σ_k exp(2πi·jk/d)|k>, the columns of the Fourier coin"""
    coin = make_coin(CoinKind.fourier(d))
    shape = SpaceShape((d,))
    return [StateVector(shape, coin.matrix[:, j]) for j in range(d)]


def computational_basis(d: int) -> list[StateVector]:
    if d < 1:
        raise ValueError(f"Basis dimension must be >= 1 (got {d})")
    shape = SpaceShape((d,))
    return [StateVector(shape, np.eye(d, dtype=np.complex128)[:, k]) for k in range(d)]


MEASUREMENT_BASES = {
    "computational": computational_basis,
    "fourier": fourier_basis,
}


def measurement_basis(name: str, d: int) -> list[StateVector]:
    """Resolve a basis by its config name"""
    try:
        factory = MEASUREMENT_BASES[name]
    except KeyError:
        raise ValueError(f"Unknown measurement basis '{name}'. Supported: {sorted(MEASUREMENT_BASES)}") from None
    return factory(d)


def gram_matrix(states: list[StateVector]) -> np.ndarray:
    """Pairwise inner products <s_i|s_j>"""
    stacked = np.stack([s.amps for s in states], axis=1)
    return stacked.conj().T @ stacked
