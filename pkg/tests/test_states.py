"""State containers, constructors, serialization, qubit permutations."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entvec.errors import (
    BadDimension,
    BadStateFile,
    BadSubsystem,
    DomainError,
    NotHermitian,
    NotNormalized,
    NotPSD,
)
from entvec.states import (
    DensityMatrix,
    PureState,
    apply_local_unitaries,
    load_state,
    make_biseparable,
    make_ghz,
    make_product,
    make_w,
    permute_qubits,
    random_local_unitary,
    random_mixed,
    random_pure,
    save_state,
    state_from_dict,
    state_to_dict,
    to_density,
    validate,
)


class TestPureState:
    def test_basic(self):
        psi = PureState(1, [1.0, 0.0])
        assert psi.n_qubits == 1
        assert psi.dim == 2
        assert psi.amplitudes.dtype == complex

    def test_norm_tolerance_boundary(self):
        PureState(1, [1.0 + 0.5e-10, 0.0])
        with pytest.raises(NotNormalized):
            PureState(1, [1.0 + 2e-10, 0.0])

    def test_normalize_flag(self):
        psi = PureState(1, [3.0, 4.0], normalize=True)
        assert abs(abs(psi.amplitudes[0]) - 0.6) < 1e-15
        assert abs(abs(psi.amplitudes[1]) - 0.8) < 1e-15

    def test_normalize_zero_vector_rejected(self):
        with pytest.raises(NotNormalized):
            PureState(1, [0.0, 0.0], normalize=True)

    def test_wrong_length(self):
        with pytest.raises(BadDimension):
            PureState(2, [1.0, 0.0])

    def test_non_finite_rejected(self):
        with pytest.raises(BadDimension):
            PureState(1, [np.nan, 0.0])

    def test_qubit_count_limits(self):
        with pytest.raises(BadDimension):
            PureState(0, [1.0])
        with pytest.raises(BadDimension):
            PureState(7, [0.0] * 128)

    def test_amplitudes_read_only(self):
        psi = PureState(1, [1.0, 0.0])
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0.0

    def test_to_density(self):
        psi = PureState(1, [0.6, 0.8])
        rho = psi.to_density()
        assert isinstance(rho, DensityMatrix)
        assert abs(rho.matrix[0, 1] - 0.48) < 1e-15


class TestDensityMatrix:
    def test_pure_projector(self):
        rho = DensityMatrix(1, np.diag([0.3, 0.7]))
        assert rho.n_qubits == 1

    def test_trace_boundary(self):
        DensityMatrix(1, np.diag([0.5, 0.5 + 0.5e-10]))
        with pytest.raises(NotNormalized):
            DensityMatrix(1, np.diag([0.5, 0.5 + 2e-10]))

    def test_normalize_flag(self):
        rho = DensityMatrix(1, np.diag([1.0, 3.0]), normalize=True)
        assert abs(rho.matrix[1, 1] - 0.75) < 1e-15

    def test_not_hermitian(self):
        m = np.diag([0.5, 0.5]).astype(complex)
        m[0, 1] = 0.1
        with pytest.raises(NotHermitian):
            DensityMatrix(1, m)

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            DensityMatrix(1, np.diag([1.5, -0.5]))

    def test_validate_false_skips_checks(self):
        m = np.diag([1.5, -0.5]).astype(complex)
        rho = DensityMatrix(1, m, validate=False)
        assert rho.matrix[1, 1] == -0.5

    def test_partial_trace_method(self):
        rho = to_density(make_ghz(3, 1 / np.sqrt(2), 1 / np.sqrt(2)))
        red = rho.partial_trace([2])
        assert np.max(np.abs(red.matrix - np.eye(2) / 2)) < 1e-14
        assert red.n_qubits == 1


class TestConstructors:
    def test_ghz_amplitude_placement(self):
        psi = make_ghz(3, 0.6, 0.8j)
        assert psi.amplitudes[0] == 0.6
        assert psi.amplitudes[7] == 0.8j
        assert np.count_nonzero(psi.amplitudes) == 2

    def test_ghz_needs_two_qubits(self):
        with pytest.raises(BadDimension):
            make_ghz(1, 1.0, 0.0)

    def test_ghz_unnormalized_rejected(self):
        with pytest.raises(NotNormalized):
            make_ghz(2, 1.0, 1.0)

    def test_w_amplitude_placement(self):
        a, b, c = 0.6, 0.48, 0.64
        psi = make_w([a, b, c])
        # |001>, |010>, |100> in most-significant-first indexing
        assert psi.amplitudes[1] == a
        assert psi.amplitudes[2] == b
        assert psi.amplitudes[4] == c
        assert np.count_nonzero(psi.amplitudes) == 3

    def test_anti_w_placement(self):
        a, b, c = 0.6, 0.48, 0.64
        psi = make_w([a, b, c], anti=True)
        # single-hole kets |011>, |101>, |110>
        assert psi.amplitudes[3] == a
        assert psi.amplitudes[5] == b
        assert psi.amplitudes[6] == c

    def test_product_ordering(self):
        psi = make_product([[1.0, 0.0], [0.0, 1.0]])
        # qubit 1 in |0>, qubit 2 in |1>
        assert psi.amplitudes[1] == 1.0

    def test_product_three_qubits(self):
        psi = make_product([[0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
        assert psi.amplitudes[0b101] == 1.0

    def test_biseparable_placements(self):
        block = [0.0, 1.0, 0.0, 0.0]  # |01> on the block qubits
        up = [1.0, 0.0]
        # separable qubit 3: block lives on (1,2)
        psi = make_biseparable(block, up, separable_qubit=3)
        assert psi.amplitudes[0b010] == 1.0
        # separable qubit 1: block lives on (2,3)
        psi = make_biseparable(block, [0.0, 1.0], separable_qubit=1)
        assert psi.amplitudes[0b101] == 1.0
        # separable qubit 2: block lives on (1,3)
        psi = make_biseparable(block, up, separable_qubit=2)
        assert psi.amplitudes[0b001] == 1.0

    def test_biseparable_general_amplitudes(self):
        rng = np.random.default_rng(11)
        y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        y /= np.linalg.norm(y)
        f = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        f /= np.linalg.norm(f)
        psi = make_biseparable(y, f, separable_qubit=3)
        direct = np.kron(y, f)
        assert np.max(np.abs(psi.amplitudes - direct)) < 1e-14

    def test_random_pure_normalized_and_deterministic(self):
        a = random_pure(3, seed=5)
        b = random_pure(3, seed=5)
        assert np.array_equal(a.amplitudes, b.amplitudes)
        assert abs(np.linalg.norm(a.amplitudes) - 1.0) < 1e-12
        c = random_pure(3, seed=6)
        assert not np.array_equal(a.amplitudes, c.amplitudes)

    def test_random_pure_first_moment(self):
        # mean |amplitude|^2 of any fixed component is 1/dim for the
        # rotation-invariant ensemble
        vals = [abs(random_pure(2, seed=s).amplitudes[0]) ** 2 for s in range(4000)]
        assert abs(np.mean(vals) - 0.25) < 0.01

    def test_random_mixed_properties(self):
        rho = random_mixed(2, rank=2, seed=3)
        assert abs(np.trace(rho.matrix) - 1.0) < 1e-12
        w = np.linalg.eigvalsh(rho.matrix)
        assert np.sum(w > 1e-12) == 2
        assert np.array_equal(rho.matrix, random_mixed(2, rank=2, seed=3).matrix)

    def test_random_mixed_bad_rank(self):
        with pytest.raises(BadDimension):
            random_mixed(2, rank=0, seed=0)
        with pytest.raises(BadDimension):
            random_mixed(2, rank=5, seed=0)


class TestValidationReport:
    def test_good_state(self):
        rep = validate(random_mixed(2, rank=4, seed=1))
        assert rep.passed
        assert rep.failures == ()
        assert rep.min_eigenvalue > 0

    def test_report_on_raw_pure(self):
        rep = validate(random_pure(2, seed=2))
        assert rep.passed
        assert rep.trace_defect < 1e-12


class TestPermutation:
    def test_swap_two_qubits(self):
        psi = PureState(2, [0.0, 1.0, 0.0, 0.0])  # |01>
        out = permute_qubits(psi, (2, 1))
        assert out.amplitudes[2] == 1.0  # |10>

    def test_three_qubit_cycle(self):
        psi = PureState(3, np.eye(8)[1])  # |001>
        # qubit 1 -> position 2, qubit 2 -> position 3, qubit 3 -> position 1
        out = permute_qubits(psi, (2, 3, 1))
        assert out.amplitudes[4] == 1.0  # |100>

    def test_identity_perm(self):
        psi = random_pure(3, seed=8)
        out = permute_qubits(psi, (1, 2, 3))
        assert np.array_equal(out.amplitudes, psi.amplitudes)

    def test_density_version_matches_pure(self):
        psi = random_pure(3, seed=9)
        rho = to_density(psi)
        out_rho = permute_qubits(rho, (3, 1, 2))
        out_psi = permute_qubits(psi, (3, 1, 2))
        assert np.max(np.abs(out_rho.matrix - to_density(out_psi).matrix)) < 1e-14

    def test_bad_perm(self):
        psi = random_pure(2, seed=1)
        with pytest.raises(BadSubsystem):
            permute_qubits(psi, (1, 1))
        with pytest.raises(BadSubsystem):
            permute_qubits(psi, (1,))

    @given(st.permutations([1, 2, 3]), st.integers(min_value=0, max_value=50))
    @settings(max_examples=30, deadline=None)
    def test_probability_multiset_invariant(self, perm, seed):
        psi = random_pure(3, seed=seed)
        out = permute_qubits(psi, tuple(perm))
        before = np.sort(np.abs(psi.amplitudes))
        after = np.sort(np.abs(out.amplitudes))
        assert np.max(np.abs(before - after)) < 1e-14


class TestLocalUnitaries:
    def test_random_local_unitary_is_unitary(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            u = random_local_unitary(rng)
            assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-12

    def test_apply_preserves_norm(self):
        rng = np.random.default_rng(1)
        psi = random_pure(3, seed=4)
        us = [random_local_unitary(rng) for _ in range(3)]
        out = apply_local_unitaries(psi, us)
        assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-12

    def test_apply_matches_kron(self):
        rng = np.random.default_rng(2)
        psi = random_pure(2, seed=7)
        us = [random_local_unitary(rng) for _ in range(2)]
        out = apply_local_unitaries(psi, us)
        direct = np.kron(us[0], us[1]) @ psi.amplitudes
        assert np.max(np.abs(out.amplitudes - direct)) < 1e-13

    def test_apply_on_density(self):
        rng = np.random.default_rng(3)
        rho = random_mixed(2, rank=2, seed=2)
        us = [random_local_unitary(rng) for _ in range(2)]
        out = apply_local_unitaries(rho, us)
        big = np.kron(us[0], us[1])
        direct = big @ rho.matrix @ big.conj().T
        assert np.max(np.abs(out.matrix - direct)) < 1e-13

    def test_non_unitary_rejected(self):
        psi = random_pure(2, seed=1)
        bad = np.array([[1.0, 0.0], [0.0, 2.0]])
        with pytest.raises(DomainError):
            apply_local_unitaries(psi, [bad, np.eye(2)])

    def test_wrong_count_rejected(self):
        psi = random_pure(2, seed=1)
        with pytest.raises(BadSubsystem):
            apply_local_unitaries(psi, [np.eye(2)])


class TestSerialization:
    def test_pure_round_trip_bit_exact(self, tmp_path):
        psi = random_pure(3, seed=13)
        path = tmp_path / "s.json"
        save_state(psi, path)
        back = load_state(path)
        assert isinstance(back, PureState)
        assert np.array_equal(back.amplitudes, psi.amplitudes)

    def test_mixed_round_trip_bit_exact(self, tmp_path):
        rho = random_mixed(2, rank=3, seed=13)
        path = tmp_path / "m.json"
        save_state(rho, path)
        back = load_state(path)
        assert isinstance(back, DensityMatrix)
        assert np.array_equal(back.matrix, rho.matrix)

    def test_dict_shape(self):
        d = state_to_dict(PureState(1, [1.0, 0.0]))
        assert d == {"n_qubits": 1, "kind": "pure", "amplitudes": [[1.0, 0.0], [0.0, 0.0]]}

    def test_bad_payloads(self):
        with pytest.raises(BadStateFile):
            state_from_dict({"kind": "pure"})
        with pytest.raises(BadStateFile):
            state_from_dict({"n_qubits": 1, "kind": "nope", "amplitudes": [[1, 0], [0, 0]]})
        with pytest.raises(BadStateFile):
            state_from_dict({"n_qubits": 1, "kind": "pure", "amplitudes": [[1, 0], [0]]})

    def test_loaded_state_is_validated(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {"n_qubits": 1, "kind": "pure", "amplitudes": [[2.0, 0.0], [0.0, 0.0]]}
            )
        )
        with pytest.raises(NotNormalized):
            load_state(path)

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_round_trip_any_seed(self, seed):
        # through actual JSON text, not just the dict
        psi = random_pure(2, seed=seed)
        text = json.dumps(state_to_dict(psi))
        back = state_from_dict(json.loads(text))
        assert np.array_equal(back.amplitudes, psi.amplitudes)
