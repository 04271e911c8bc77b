import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkdgame import qsim
from qkdgame.qsim import Ket, Operator

from oracles import haar_unitary, random_state


class TestKet:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            Ket((2,), [1, 1])

    def test_from_amplitudes_normalizes(self):
        k = Ket.from_amplitudes([1, 1])
        assert k.norm() == pytest.approx(1.0)
        assert k.dims == (2,)

    def test_basis_multi_index_is_big_endian(self):
        k = Ket.basis((1, 0, 2), (2, 2, 3))
        assert np.argmax(abs(k.amplitudes)) == 1 * 6 + 0 * 3 + 2

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            Ket((2, 2), [1, 0, 0])


class TestOperator:
    def test_unitary_flag_is_checked(self):
        with pytest.raises(ValueError):
            Operator((2,), [[1, 1], [0, 1]], unitary=True)

    def test_hermitian_flag_is_checked(self):
        with pytest.raises(ValueError):
            Operator((2,), [[0, 1], [0, 0]], hermitian=True)

    def test_dims_must_match_ket(self):
        with pytest.raises(ValueError):
            qsim.gate(qsim.X).apply(Ket.basis(0, (3,)))

    def test_composition(self):
        hz = qsim.gate(qsim.H) @ qsim.gate(qsim.Z)
        np.testing.assert_allclose(hz.matrix, qsim.H @ qsim.Z)
        assert hz.unitary


class TestTensorAndEmbed:
    def test_tensor_matches_kron(self):
        a, b = Ket.from_amplitudes([1, 2]), Ket.from_amplitudes([3, 0, 1j])
        t = qsim.tensor([a, b])
        assert t.dims == (2, 3)
        np.testing.assert_allclose(t.amplitudes, np.kron(a.amplitudes, b.amplitudes))

    def test_embed_on_first_factor_is_kron(self):
        op = qsim.gate(qsim.X)
        big = qsim.embed(op, [0], (2, 3))
        np.testing.assert_allclose(big.matrix, np.kron(qsim.X, np.eye(3)))

    def test_embed_reversed_cnot(self):
        # CNOT with control 1, target 0 flips qubit 0 when qubit 1 is set.
        big = qsim.embed(qsim.gate(qsim.CNOT, (2, 2)), [1, 0], (2, 2))
        out = big.apply(Ket.basis((0, 1), (2, 2)))
        np.testing.assert_allclose(out.amplitudes, Ket.basis((1, 1), (2, 2)).amplitudes)

    def test_embed_non_adjacent(self):
        big = qsim.embed(qsim.gate(qsim.CNOT, (2, 2)), [0, 2], (2, 3, 2))
        out = big.apply(Ket.basis((1, 2, 0), (2, 3, 2)))
        assert np.argmax(abs(out.amplitudes)) == np.argmax(abs(Ket.basis((1, 2, 1), (2, 3, 2)).amplitudes))

    @pytest.mark.parametrize("targets", [[0, 0], [3], [1]])
    def test_embed_rejects_bad_targets(self, targets):
        with pytest.raises(ValueError):
            qsim.embed(qsim.gate(qsim.CNOT, (2, 2)) if len(targets) == 2 else qsim.gate(qsim.X),
                       targets, (2, 3, 2))


class TestMeasure:
    def test_bell_measurement_of_bell_state(self):
        psi_m = qsim.bell_basis()[1]
        dist = qsim.measure(psi_m, [0, 1], qsim.bell_basis(), qsim.BELL_LABELS)
        assert dist.probabilities()["psi-"] == pytest.approx(1.0)
        assert [o.post_state for o in dist if o.label != "psi-"] == [None] * 3

    def test_partial_measurement_collapses(self):
        plus = Ket.from_amplitudes([1, 1])
        state = qsim.tensor([plus, Ket.basis(0, (2,))])
        state = qsim.apply(qsim.gate(qsim.CNOT, (2, 2)), [0, 1], state)
        dist = qsim.measure(state, [1], qsim.computational_basis((2,)))
        assert dist.probabilities() == pytest.approx({"0": 0.5, "1": 0.5})
        post1 = dist.outcomes[1].post_state
        np.testing.assert_allclose(abs(post1.amplitudes), [0, 0, 0, 1], atol=1e-12)

    def test_rejects_incomplete_basis(self):
        with pytest.raises(ValueError):
            qsim.measure(Ket.basis(0, (2,)), [0], [Ket.basis(0, (2,))])

    def test_rejects_non_orthonormal_basis(self):
        with pytest.raises(ValueError):
            qsim.measure(Ket.basis(0, (2,)), [0], [Ket.basis(0, (2,)), Ket.from_amplitudes([1, 1])])

    def test_vacuum_level_is_its_own_outcome(self):
        k = Ket.from_amplitudes([1, 0, 1])
        dist = qsim.measure(k, [0], qsim.computational_basis((3,)))
        assert dist.probabilities()["2"] == pytest.approx(0.5)

    def test_bell_basis_is_orthonormal(self):
        m = np.column_stack([b.amplitudes for b in qsim.bell_basis()])
        np.testing.assert_allclose(m.conj().T @ m, np.eye(4), atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dims=st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_random_measurement_normalized(seed, dims):
    rng = np.random.default_rng(seed)
    n = math.prod(dims)
    ket = Ket(tuple(dims), random_state(rng, n))
    target = [int(rng.integers(len(dims)))]
    d = dims[target[0]]
    u = haar_unitary(rng, d)
    basis = [Ket((d,), u[:, i]) for i in range(d)]
    dist = qsim.measure(ket, target, basis)
    assert sum(dist.probabilities().values()) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_embedded_unitary_preserves_norm(seed):
    rng = np.random.default_rng(seed)
    dims = (2, 3, 2)
    ket = Ket(dims, random_state(rng, 12))
    u = qsim.gate(haar_unitary(rng, 4), (2, 2))
    out = qsim.apply(u, [2, 0], ket)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
