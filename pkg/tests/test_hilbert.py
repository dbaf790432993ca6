import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from src.core.coins import CoinKind, fourier_basis, make_coin
from src.core.hilbert import (
    OperatorMatrix,
    SpaceShape,
    StateVector,
    apply,
    basis_state,
    embed,
    fidelity,
    inner,
    kron,
    project_subsystem,
)

WALK_SHAPE = SpaceShape((10, 3, 3))

complex_entries = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)

dims = st.lists(st.integers(1, 4), min_size=1, max_size=4)


def vectors(n: int):
    return arrays(np.complex128, n, elements=complex_entries)


def unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


# -- shapes -------------------------------------------------------------------

def test_shape_rejects_zero_dimension():
    with pytest.raises(ValueError, match="Subsystem 1"):
        SpaceShape((3, 0))


def test_flat_index_is_row_major():
    assert WALK_SHAPE.total == 90
    assert WALK_SHAPE.flat_index((8, 2, 0)) == 8 * 9 + 2 * 3
    assert WALK_SHAPE.multi_index(79) == (8, 2, 1)


@given(dims, st.data())
def test_flat_index_round_trip(d, data):
    shape = SpaceShape(tuple(d))
    m = tuple(data.draw(st.integers(0, k - 1)) for k in d)
    assert shape.multi_index(shape.flat_index(m)) == m


def test_drop_and_concat():
    assert WALK_SHAPE.drop(0) == SpaceShape((3, 3))
    assert SpaceShape((10,)).concat(SpaceShape((3, 3))) == WALK_SHAPE
    with pytest.raises(ValueError):
        WALK_SHAPE.drop(3)


# -- states -------------------------------------------------------------------

def test_basis_state_ket_shorthand():
    s = basis_state(WALK_SHAPE, (8, 2, 0))
    assert s.amplitude((8, 2, 0)) == 1
    assert s.support() == {(8, 2, 0): 1}


def test_basis_state_index_out_of_range():
    with pytest.raises(ValueError, match="subsystem 0"):
        basis_state(SpaceShape((3,)), (3,))


def test_state_length_must_match_shape():
    with pytest.raises(ValueError, match="needs 9"):
        StateVector(SpaceShape((3, 3)), np.zeros(8))


def test_state_rejects_non_finite():
    with pytest.raises(ValueError, match="finite"):
        StateVector.from_amplitudes([1.0, np.nan])


def test_states_are_read_only():
    s = basis_state(SpaceShape((3,)), (0,))
    with pytest.raises(ValueError):
        s.amps[0] = 2.0


def test_normalize_is_explicit():
    s = StateVector.from_amplitudes([3.0, 4.0])
    assert not s.is_normalized()
    assert s.normalize().is_normalized()
    with pytest.raises(ValueError, match="zero vector"):
        StateVector.from_amplitudes([0.0, 0.0]).normalize()


def test_tensor_of_states():
    s = StateVector.tensor(
        basis_state(SpaceShape((10,)), (1,)),
        basis_state(SpaceShape((3,)), (2,)),
        basis_state(SpaceShape((3,)), (0,)),
    )
    assert s.shape == WALK_SHAPE
    assert s == basis_state(WALK_SHAPE, (1, 2, 0))


# -- operators ----------------------------------------------------------------

def test_kron_identities():
    i2 = OperatorMatrix.identity(SpaceShape((2,)))
    i3 = OperatorMatrix.identity(SpaceShape((3,)))
    assert_allclose(kron([i2, i3]).matrix, np.eye(6))
    assert kron([i2, i3]).shape == SpaceShape((2, 3))


def test_kron_fourier_on_first_factor():
    op = kron([make_coin(CoinKind.fourier(3)), OperatorMatrix.identity(SpaceShape((3,)))])
    out = apply(op, basis_state(SpaceShape((3, 3)), (0, 1)))
    expected = np.zeros(9, dtype=complex)
    expected[[1, 4, 7]] = 1 / np.sqrt(3)
    assert_allclose(out.amps, expected, atol=1e-12)


def test_kron_raising_operator():
    raise01 = OperatorMatrix.from_array([[0, 0], [1, 0]])
    op = kron([raise01, OperatorMatrix.identity(SpaceShape((2,)))])
    shape = SpaceShape((2, 2))
    expected = np.zeros((4, 4))
    expected[shape.flat_index((1, 0)), shape.flat_index((0, 0))] = 1
    expected[shape.flat_index((1, 1)), shape.flat_index((0, 1))] = 1
    assert_allclose(op.matrix, expected)


def test_kron_empty_list():
    with pytest.raises(ValueError):
        kron([])


def test_kron_is_associative(rng):
    a, b, c = (OperatorMatrix.from_array(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) for n in (2, 3, 2))
    assert np.array_equal(kron([kron([a, b]), c]).matrix, kron([a, b, c]).matrix)


def test_embed_matches_kron_for_leading_targets(rng):
    shape = SpaceShape((2, 3, 2))
    op = OperatorMatrix.from_array(rng.normal(size=(6, 6)))
    lifted = embed(op, shape, (0, 1))
    assert_allclose(lifted.matrix, kron([op, OperatorMatrix.identity(SpaceShape((2,)))]).matrix)


def test_embed_skips_middle_subsystem():
    # |1><0| on subsystem 2 of a [2, 2, 2] space
    shape = SpaceShape((2, 2, 2))
    flip = OperatorMatrix.from_array([[0, 0], [1, 0]])
    lifted = embed(flip, shape, (2,))
    out = apply(lifted, basis_state(shape, (1, 1, 0)))
    assert out == basis_state(shape, (1, 1, 1))


def test_embed_respects_target_order():
    shape = SpaceShape((2, 3))
    swap_order = embed(OperatorMatrix.from_array(np.eye(6)), shape, (1, 0))
    assert_allclose(swap_order.matrix, np.eye(6))
    with pytest.raises(ValueError, match="Duplicate"):
        embed(OperatorMatrix.identity(SpaceShape((4,))), SpaceShape((2, 2)), (0, 0))


def test_apply_shape_mismatch():
    with pytest.raises(ValueError):
        apply(OperatorMatrix.identity(SpaceShape((2,))), basis_state(SpaceShape((3,)), (0,)))


def test_apply_fourier_to_zero():
    out = apply(make_coin(CoinKind.fourier(3)), basis_state(SpaceShape((3,)), (0,)))
    assert_allclose(out.amps, np.ones(3) / np.sqrt(3), atol=1e-12)


@given(vectors(6))
def test_unitary_apply_preserves_norm(v):
    assume(np.linalg.norm(v) > 1e-3)
    s = StateVector(SpaceShape((2, 3)), unit(v))
    u = kron([make_coin(CoinKind.hadamard()), make_coin(CoinKind.fourier(3))])
    assert u.is_unitary()
    assert apply(u, s).norm() == pytest.approx(1.0, abs=1e-10)


# -- inner products and measurement ----------------------------------------------

def test_inner_examples():
    f = fourier_basis(3)
    zero = basis_state(SpaceShape((3,)), (0,))
    assert inner(zero, zero) == 1
    assert abs(inner(f[0], f[1])) < 1e-12
    with pytest.raises(ValueError, match="Shape mismatch"):
        inner(zero, basis_state(SpaceShape((2,)), (0,)))


@given(vectors(4), vectors(4))
def test_inner_is_conjugate_symmetric(x, y):
    sx = StateVector.from_amplitudes(x)
    sy = StateVector.from_amplitudes(y)
    assert inner(sx, sy) == pytest.approx(np.conj(inner(sy, sx)), abs=1e-6)


def test_projection_onto_absent_outcome():
    s = basis_state(SpaceShape((3, 3)), (0, 1))
    result = project_subsystem(s, 0, basis_state(SpaceShape((3,)), (2,)))
    assert result.probability == 0.0
    assert result.is_empty


def test_projection_requires_normalized_basis_vector():
    s = basis_state(SpaceShape((3, 3)), (0, 1))
    with pytest.raises(ValueError, match="normalized"):
        project_subsystem(s, 0, StateVector.from_amplitudes([1.0, 1.0, 0.0]))


@given(vectors(18), st.integers(0, 2))
def test_projection_probabilities_are_complete(v, subsystem):
    assume(np.linalg.norm(v) > 1e-3)
    shape = SpaceShape((2, 3, 3))
    s = StateVector(shape, v)
    d = shape.dims[subsystem]
    basis = fourier_basis(d)
    total = sum(project_subsystem(s, subsystem, b).probability for b in basis)
    assert total == pytest.approx(float(np.vdot(v, v).real), rel=1e-10)


def test_fidelity_examples():
    zero = basis_state(SpaceShape((3,)), (0,))
    assert fidelity(zero, zero) == pytest.approx(1.0)
    assert fidelity(zero, fourier_basis(3)[0]) == pytest.approx(1 / 3)
    with pytest.raises(ValueError, match="normalized"):
        fidelity(zero, StateVector.from_amplitudes([1.0, 1.0, 0.0]))


@given(vectors(3), st.floats(-np.pi, np.pi))
def test_fidelity_ignores_global_phase(v, theta):
    assume(np.linalg.norm(v) > 1e-3)
    s = StateVector.from_amplitudes(unit(v))
    rotated = StateVector.from_amplitudes(np.exp(1j * theta) * s.amps)
    assert fidelity(s, rotated) == pytest.approx(1.0, abs=1e-10)


def test_dagger_is_conjugate_transpose():
    op = OperatorMatrix.from_array([[1, 2j], [3, 4 - 1j]])
    assert_allclose(op.dagger().matrix, [[1, 3], [-2j, 4 + 1j]])
    assert op.dagger().dagger() == op
    assert not op.is_unitary()
