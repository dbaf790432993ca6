"""
Formatting helpers - complex numbers, phases, kets
"""

import math
from typing import Iterable, Sequence

import numpy as np


def normalize_phase(theta: float) -> float:
    """Map an angle into (-π, π]"""
    theta = math.remainder(float(theta), 2.0 * math.pi)
    if theta <= -math.pi:
        theta += 2.0 * math.pi
    return theta


def complex_to_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def pair_to_complex(pair: Sequence[float]) -> complex:
    if len(pair) != 2:
        raise ValueError(f"Complex value must be a [re, im] pair, got {pair!r}")
    re, im = pair
    return complex(float(re), float(im))


def vector_to_pairs(values: Iterable[complex]) -> list[list[float]]:
    return [complex_to_pair(z) for z in values]


def matrix_to_pairs(matrix: np.ndarray) -> list[list[list[float]]]:
    return [vector_to_pairs(row) for row in np.asarray(matrix)]


def pairs_to_matrix(rows: Sequence[Sequence[Sequence[float]]]) -> np.ndarray:
    return np.array([[pair_to_complex(p) for p in row] for row in rows], dtype=np.complex128)


def format_complex(z: complex, tol: float = 1e-12) -> str:
    """Polar form r∠θ, θ normalized to (-π, π], 6 decimals"""
    z = complex(z)
    r = abs(z)
    if r <= tol:
        return "0"
    theta = normalize_phase(math.atan2(z.imag, z.real))
    if abs(theta) < 5e-7:
        return f"{r:.6f}"
    return f"{r:.6f}∠{theta:+.6f}"


def format_ket(indices: Sequence[int]) -> str:
    """|pqr> in the compact ket notation (comma-separated past single digits)"""
    if all(0 <= i < 10 for i in indices):
        return "|" + "".join(str(i) for i in indices) + ">"
    return "|" + ",".join(str(i) for i in indices) + ">"


def format_vector(values: Iterable[complex]) -> str:
    return "[" + ", ".join(format_complex(z) for z in values) + "]"


def format_probability(p: float) -> str:
    return f"{p:.6f}"
