import numpy as np
import pytest

from vqcopt.errors import ConfigError, NumericError
from vqcopt.statevec import (
    EntanglerSpec,
    PauliString,
    PauliSum,
    Projector,
    StateVector,
    apply_entangler,
    apply_single_qubit,
    estimate_expectation,
    exact_expectation,
    init_zero_state,
)

from oracles import dense_observable

RX_PI = np.array([[0, -1j], [-1j, 0]])  # cos(pi/2) I - i sin(pi/2) X


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return StateVector(n, amps / np.linalg.norm(amps))


def random_unitary(rng):
    q, r = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestInitZeroState:
    def test_one_qubit(self):
        assert np.array_equal(init_zero_state(1).amplitudes, [1, 0])

    def test_three_qubits(self):
        state = init_zero_state(3)
        assert len(state.amplitudes) == 8
        assert state.amplitudes[0] == 1.0
        assert np.count_nonzero(state.amplitudes) == 1

    @pytest.mark.parametrize("n", [0, -1, 21])
    def test_out_of_range(self, n):
        with pytest.raises(ConfigError):
            init_zero_state(n)


class TestApplySingleQubit:
    def test_rz_zero_is_identity(self):
        state = random_state(3, 11)
        out = apply_single_qubit(state, 1, np.eye(2))
        assert np.allclose(out.amplitudes, state.amplitudes)

    def test_rx_pi_on_zero(self):
        out = apply_single_qubit(init_zero_state(1), 0, RX_PI)
        assert np.allclose(out.amplitudes, [0, -1j])

    def test_random_unitaries_preserve_norm(self):
        rng = np.random.default_rng(3)
        state = random_state(5, 5)
        for _ in range(40):
            state = apply_single_qubit(state, int(rng.integers(0, 5)), random_unitary(rng))
        assert abs(state.norm() - 1.0) < 1e-12

    def test_qubit_ordering_msb(self):
        # qubit 0 is the most significant bit: X on qubit 0 of |000> gives |100>
        out = apply_single_qubit(init_zero_state(3), 0, np.array([[0, 1], [1, 0]]))
        assert out.amplitudes[0b100] == 1.0

    def test_non_unitary_rejected(self):
        with pytest.raises(NumericError):
            apply_single_qubit(init_zero_state(2), 0, np.array([[1, 0], [0, 2]]))

    def test_bad_index_rejected(self):
        with pytest.raises(ConfigError):
            apply_single_qubit(init_zero_state(2), 2, np.eye(2))


class TestApplyEntangler:
    def test_cz_fixes_00(self):
        spec = EntanglerSpec("cz", (((0, 1),),))
        out = apply_entangler(init_zero_state(2), spec)
        assert np.allclose(out.amplitudes, [1, 0, 0, 0])

    def test_cz_flips_11(self):
        spec = EntanglerSpec("cz", (((0, 1),),))
        state = StateVector(2, np.array([0, 0, 0, 1], dtype=complex))
        out = apply_entangler(state, spec)
        assert np.allclose(out.amplitudes, [0, 0, 0, -1])

    def test_cnot(self):
        spec = EntanglerSpec("cnot", (((0, 1),),))
        state = StateVector(2, np.array([0, 0, 1, 0], dtype=complex))  # |10>
        out = apply_entangler(state, spec)
        assert np.allclose(out.amplitudes, [0, 0, 0, 1])  # |11>

    def test_overlapping_pair_rejected(self):
        with pytest.raises(ConfigError):
            EntanglerSpec("cz", (((0, 1), (1, 2)),))

    def test_index_out_of_range(self):
        spec = EntanglerSpec("cz", (((0, 3),),))
        with pytest.raises(ConfigError):
            apply_entangler(init_zero_state(2), spec)


class TestExactExpectation:
    @pytest.mark.parametrize("qubit", [0, 1, 2])
    def test_z_on_zero_state(self, qubit):
        obs = PauliSum([PauliString(1.0, {qubit: "Z"})])
        assert exact_expectation(init_zero_state(3), obs) == pytest.approx(1.0)

    def test_projector_perfect_overlap(self):
        state = random_state(2, 7)
        obs = Projector(state.amplitudes)
        assert exact_expectation(state, obs) == pytest.approx(-1.0, abs=1e-12)

    def test_random_pauli_sums_match_dense_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            n = int(rng.integers(1, 5))
            terms = []
            for _ in range(int(rng.integers(1, 6))):
                qubits = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
                factors = {int(q): "XYZ"[rng.integers(0, 3)] for q in qubits}
                terms.append(PauliString(float(rng.uniform(-2, 2)), factors))
            obs = PauliSum(terms)
            state = random_state(n, int(rng.integers(0, 10**6)))
            dense = dense_observable(obs, n)
            expected = np.vdot(state.amplitudes, dense @ state.amplitudes)
            assert abs(expected.imag) < 1e-12
            assert exact_expectation(state, obs) == pytest.approx(expected.real, abs=1e-10)

    def test_linearity(self):
        rng = np.random.default_rng(9)
        state = random_state(3, 14)
        a = PauliSum([PauliString(0.7, {0: "X", 1: "Y"}), PauliString(-1.1, {2: "Z"})])
        b = PauliSum([PauliString(0.3, {1: "Z"}), PauliString(0.9, {0: "X", 1: "Y"})])
        combined = PauliSum(list(a.terms) + list(b.terms))
        assert exact_expectation(state, combined) == pytest.approx(
            exact_expectation(state, a) + exact_expectation(state, b), abs=1e-12
        )

    def test_index_beyond_register(self):
        obs = PauliSum([PauliString(1.0, {5: "Z"})])
        with pytest.raises(ConfigError):
            exact_expectation(init_zero_state(2), obs)


class TestEstimateExpectation:
    def test_eigenvalue_plus_one_has_zero_variance(self):
        obs = PauliSum([PauliString(1.0, {0: "Z"})])
        rng = np.random.default_rng(0)
        for shots in (1, 7, 4096):
            assert estimate_expectation(init_zero_state(2), obs, shots, rng) == 1.0

    def test_eigenvalue_minus_one(self):
        state = StateVector(1, np.array([0, 1], dtype=complex))
        obs = PauliSum([PauliString(1.0, {0: "Z"})])
        rng = np.random.default_rng(0)
        assert estimate_expectation(state, obs, 128, rng) == -1.0

    def test_bad_shots(self):
        obs = PauliSum([PauliString(1.0, {0: "Z"})])
        with pytest.raises(ConfigError):
            estimate_expectation(init_zero_state(1), obs, 0, np.random.default_rng(0))

    def test_converges_to_exact(self):
        # single term with <P> = 0: |+> measured in Z
        plus = StateVector(1, np.array([1, 1], dtype=complex) / np.sqrt(2))
        obs = PauliSum([PauliString(1.0, {0: "Z"})])
        rng = np.random.default_rng(42)
        shots = 1 << 20
        close = sum(
            abs(estimate_expectation(plus, obs, shots, rng)) < 5e-3 for _ in range(100)
        )
        assert close >= 99

    def test_projector_sampling(self):
        state = random_state(2, 3)
        obs = Projector(state.amplitudes)
        rng = np.random.default_rng(1)
        assert estimate_expectation(state, obs, 512, rng) == -1.0


class TestPauliTypes:
    def test_duplicates_merge_and_zeros_drop(self):
        obs = PauliSum(
            [
                PauliString(1.5, {0: "X"}),
                PauliString(-0.5, {0: "X"}),
                PauliString(2.0, {1: "Z"}),
                PauliString(-2.0, {1: "Z"}),
            ]
        )
        assert len(obs) == 1
        assert obs.terms[0].coeff == pytest.approx(1.0)

    def test_complex_coefficient_rejected(self):
        with pytest.raises(ConfigError):
            PauliString(1.0 + 0.5j, {0: "X"})

    def test_bad_axis_rejected(self):
        with pytest.raises(ConfigError):
            PauliString(1.0, {0: "W"})

    def test_projector_requires_unit_norm(self):
        with pytest.raises(NumericError):
            Projector(np.array([1.0, 1.0]))
