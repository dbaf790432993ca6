import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.core.coins import CoinKind, computational_basis, fourier_basis, gram_matrix, make_coin, measurement_basis


@pytest.mark.parametrize("name", ["identity", "fourier", "grover"])
@pytest.mark.parametrize("d", range(1, 9))
def test_coins_are_unitary(name, d):
    coin = make_coin(CoinKind(name, d))
    assert coin.unitarity_error() <= 1e-12


def test_hadamard_is_unitary_and_fixed_at_two():
    assert make_coin(CoinKind.hadamard()).unitarity_error() <= 1e-12
    with pytest.raises(ValueError, match="dimension 2"):
        CoinKind("hadamard", 3)


def test_fourier_entry():
    f3 = make_coin(CoinKind.fourier(3)).matrix
    assert f3[1, 1] == pytest.approx(np.exp(2j * np.pi / 3) / np.sqrt(3), abs=1e-12)
    assert_allclose(f3[:, 0], np.ones(3) / np.sqrt(3), atol=1e-12)


def test_grover_d3():
    g = make_coin(CoinKind.grover(3)).matrix
    assert g[0, 0] == pytest.approx(-1 / 3)
    assert g[0, 1] == pytest.approx(2 / 3)


@pytest.mark.parametrize(
    "name, dim, message",
    [
        ("pauli", 2, "Unknown coin kind"),
        ("fourier", 0, "dimension >= 1"),
        ("grover", 2.5, "integer"),
    ],
)
def test_invalid_coin_kinds(name, dim, message):
    with pytest.raises(ValueError, match=message):
        CoinKind(name, dim)


def test_parse_is_case_insensitive():
    assert CoinKind.parse(" Fourier ", "3") == CoinKind.fourier(3)


def test_fourier_basis_is_orthonormal():
    basis = fourier_basis(3)
    assert_allclose(gram_matrix(basis), np.eye(3), atol=1e-12)


def test_fourier_basis_vectors():
    f1 = fourier_basis(3)[1].amps
    omega = np.exp(2j * np.pi / 3)
    assert_allclose(f1, np.array([1, omega, omega ** 2]) / np.sqrt(3), atol=1e-12)


def test_measurement_basis_by_name():
    assert_allclose(
        np.stack([b.amps for b in measurement_basis("computational", 3)]),
        np.eye(3),
    )
    assert len(measurement_basis("fourier", 4)) == 4
    with pytest.raises(ValueError, match="Unknown measurement basis"):
        measurement_basis("bell", 3)
    with pytest.raises(ValueError):
        computational_basis(0)


def test_fourier_two_is_hadamard():
    assert_allclose(make_coin(CoinKind.fourier(2)).matrix, make_coin(CoinKind.hadamard()).matrix, atol=1e-12)


def test_fourier_one_is_trivial():
    assert_allclose(make_coin(CoinKind.fourier(1)).matrix, [[1]], atol=1e-12)
