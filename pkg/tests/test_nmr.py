import math

import numpy as np
import pytest

from qdilemma.game import (
    DEFECT,
    QUANTUM,
    PayoffTable,
    disentangling_gate,
    entangling_gate,
    play,
    strategy_unitary,
    sweep_gammas,
)
from qdilemma.linalg import KET_CC, fidelity_up_to_phase
from qdilemma.nmr import (
    DEFAULT_SYSTEM,
    NOISELESS,
    NoiseModel,
    PulsePrimitive,
    PulseSequence,
    SpinSystem,
    compile_disentangler,
    compile_entangler,
    compile_strategies,
    delay,
    experiment_duration,
    pulse,
    run_experiment,
    sequence_from_text,
    sequence_unitary,
)

J_DEFAULT = 7.17


class TestTimings:
    def test_entangler_period(self):
        seq = compile_entangler(math.pi / 2)
        # (pi/2) / (pi * 7.17) = 1 / 14.34
        assert seq.free_evolution_time() == pytest.approx(1 / 14.34, abs=1e-15)

    def test_disentangler_period(self):
        seq = compile_disentangler(math.pi / 2)
        # (2 pi - pi/2) / (pi * 7.17) = 3 / 14.34
        assert seq.free_evolution_time() == pytest.approx(3 / 14.34, abs=1e-15)

    def test_zero_gamma_disentangler_still_costs_a_full_cycle(self):
        seq = compile_disentangler(0.0)
        assert seq.free_evolution_time() == pytest.approx(2 / J_DEFAULT, abs=1e-15)
        u = sequence_unitary(seq)
        assert fidelity_up_to_phase(u, np.eye(4)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("gamma", sweep_gammas())
    def test_complementary_periods_sum_exactly(self, gamma):
        total = (
            compile_entangler(gamma).free_evolution_time()
            + compile_disentangler(gamma).free_evolution_time()
        )
        assert total == 2 / J_DEFAULT


class TestCompiledGateFidelity:
    @pytest.mark.parametrize("gamma", [0.0, 0.3, 0.9, math.pi / 2])
    def test_entangler(self, gamma):
        u = sequence_unitary(compile_entangler(gamma))
        assert fidelity_up_to_phase(u, entangling_gate(gamma)) >= 1 - 1e-9

    @pytest.mark.parametrize("gamma", [0.0, 0.3, 0.9, math.pi / 2])
    def test_disentangler(self, gamma):
        u = sequence_unitary(compile_disentangler(gamma))
        assert fidelity_up_to_phase(u, disentangling_gate(gamma)) >= 1 - 1e-9

    def test_entangler_then_disentangler_is_identity_up_to_phase(self):
        g = 0.8
        u = sequence_unitary(compile_disentangler(g)) @ sequence_unitary(compile_entangler(g))
        assert fidelity_up_to_phase(u, np.eye(4)) >= 1 - 1e-9

    def test_zero_gamma_entangler_is_identity(self):
        u = sequence_unitary(compile_entangler(0.0))
        assert fidelity_up_to_phase(u, np.eye(4)) >= 1 - 1e-9


class TestStrategyCompilation:
    def test_classical_recipe_is_mutual_defection(self):
        seq = compile_strategies(0.0)
        assert [p.kind for p in seq.primitives] == ["rotation"]
        ideal = np.kron(strategy_unitary(DEFECT), strategy_unitary(DEFECT))
        assert fidelity_up_to_phase(sequence_unitary(seq), ideal) >= 1 - 1e-9

    def test_intermediate_recipe_defaults_to_alice_defecting(self):
        g = 7 * math.pi / 36
        seq = compile_strategies(g)
        ideal = np.kron(strategy_unitary(DEFECT), strategy_unitary(QUANTUM))
        assert fidelity_up_to_phase(sequence_unitary(seq), ideal) >= 1 - 1e-9

    def test_intermediate_recipe_flipped(self):
        g = 7 * math.pi / 36
        seq = compile_strategies(g, flip_intermediate=True)
        ideal = np.kron(strategy_unitary(QUANTUM), strategy_unitary(DEFECT))
        assert fidelity_up_to_phase(sequence_unitary(seq), ideal) >= 1 - 1e-9

    def test_quantum_recipe_is_mutual_quantum(self):
        seq = compile_strategies(math.pi / 2)
        ideal = np.kron(strategy_unitary(QUANTUM), strategy_unitary(QUANTUM))
        assert fidelity_up_to_phase(sequence_unitary(seq), ideal) >= 1 - 1e-9

    def test_intermediate_needs_selective_addressing(self):
        broadcast_only = SpinSystem(selective_addressing=False)
        with pytest.raises(ValueError):
            compile_strategies(0.55, system=broadcast_only)
        # non-selective recipes still compile
        compile_strategies(0.0, system=broadcast_only)
        compile_strategies(math.pi / 2, system=broadcast_only)

    def test_regime_selection_respects_the_table(self):
        table = PayoffTable(3, 1, 5, 2)
        assert "DD" in compile_strategies(0.5, table).label
        assert "DQ" in compile_strategies(0.6, table).label


class TestSequenceUnitary:
    def test_nonselective_180y_maps_cc_to_dd(self):
        seq = PulseSequence(primitives=(pulse("both", 180, "y"),))
        out = sequence_unitary(seq) @ KET_CC
        assert abs(out[3]) == pytest.approx(1.0, abs=1e-12)

    def test_free_evolution_eighth_cycle(self):
        t = 1 / (2 * J_DEFAULT)
        seq = PulseSequence(primitives=(delay(t),))
        expected = np.diag(np.exp(-1j * math.pi / 4 * np.array([1, -1, -1, 1])))
        np.testing.assert_allclose(sequence_unitary(seq), expected, atol=1e-12)

    def test_zero_duration_delay_is_identity(self):
        seq = PulseSequence(primitives=(delay(0.0),))
        np.testing.assert_allclose(sequence_unitary(seq), np.eye(4), atol=1e-15)

    def test_rejects_negative_duration(self):
        bad = PulseSequence(primitives=(PulsePrimitive(kind="free_evolution", duration_s=-0.1),))
        with pytest.raises(ValueError):
            sequence_unitary(bad)

    def test_selective_pulses_act_on_one_spin(self):
        seq = PulseSequence(primitives=(pulse("alice", 180, "y"),))
        out = sequence_unitary(seq) @ KET_CC
        assert abs(out[2]) == pytest.approx(1.0, abs=1e-12)  # DC
        seq = PulseSequence(primitives=(pulse("bob", 180, "y"),))
        out = sequence_unitary(seq) @ KET_CC
        assert abs(out[1]) == pytest.approx(1.0, abs=1e-12)  # CD


class TestPrimitiveValidation:
    def test_rotation_fields(self):
        with pytest.raises(ValueError):
            PulsePrimitive(kind="rotation", target="alice", angle_deg=90, phase_axis="z")
        with pytest.raises(ValueError):
            PulsePrimitive(kind="rotation", target="carol", angle_deg=90, phase_axis="x")
        with pytest.raises(ValueError):
            PulsePrimitive(kind="rotation", target="alice", angle_deg=90,
                           phase_axis="x", duration_s=1.0)

    def test_free_evolution_fields(self):
        with pytest.raises(ValueError):
            PulsePrimitive(kind="free_evolution", duration_s=math.inf)
        with pytest.raises(ValueError):
            PulsePrimitive(kind="free_evolution", duration_s=1.0, angle_deg=90)

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValueError):
            PulseSequence(primitives=())


class TestSerialization:
    def test_entangler_golden_listing(self):
        text = compile_entangler(math.pi / 2).to_text()
        lines = text.splitlines()
        assert lines[0] == "PULSE both 90deg x"
        assert lines[1].startswith("DELAY 0.069735006")
        assert lines[2] == "PULSE both 90deg -x"
        # at least 9 significant digits on the delay
        digits = lines[1].split()[1].replace(".", "").lstrip("0")
        assert len(digits) >= 9

    def test_round_trip(self):
        for seq in (
            compile_entangler(0.37),
            compile_disentangler(0.37),
            compile_strategies(0.55),
        ):
            again = sequence_from_text(seq.to_text(), label=seq.label)
            assert again.primitives == seq.primitives

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            sequence_from_text("WAIT 1.0\n")


class TestNoise:
    def test_zero_noise_is_exact(self):
        g = 0.9
        u1 = sequence_unitary(compile_entangler(g))
        u2 = sequence_unitary(compile_entangler(g), noise=NOISELESS)
        np.testing.assert_allclose(u1, u2, atol=0)

    def test_seeded_noise_is_reproducible(self):
        noise = NoiseModel(rotation_angle_error=0.05, field_inhomogeneity=0.02, seed=42)
        seq = compile_entangler(0.9)
        u1 = sequence_unitary(seq, noise=noise)
        u2 = sequence_unitary(seq, noise=noise)
        np.testing.assert_allclose(u1, u2, atol=0)

    def test_different_seeds_differ(self):
        seq = compile_entangler(0.9)
        u1 = sequence_unitary(seq, noise=NoiseModel(rotation_angle_error=0.05, seed=1))
        u2 = sequence_unitary(seq, noise=NoiseModel(rotation_angle_error=0.05, seed=2))
        assert np.max(np.abs(u1 - u2)) > 1e-6

    def test_noisy_payoff_deviation_is_finite_and_reported(self):
        ideal = play(0.9, QUANTUM, QUANTUM).payoff_a
        noise = NoiseModel(rotation_angle_error=0.05, seed=7)
        rho = run_experiment(0.9, noise=noise)
        noisy = float(np.real(3 * rho[0, 0] + 5 * rho[2, 2] + rho[3, 3]))
        assert math.isfinite(noisy)
        assert abs(noisy - ideal) < 1.0  # bounded, not asserted monotone

    def test_fraction_bounds(self):
        with pytest.raises(ValueError):
            NoiseModel(rotation_angle_error=0.25)
        with pytest.raises(ValueError):
            NoiseModel(field_inhomogeneity=-0.01)


class TestRunExperiment:
    def test_classical_limit(self):
        rho = run_experiment(0.0)
        np.testing.assert_allclose(np.diag(rho).real, [0, 0, 0, 1], atol=1e-9)

    def test_maximal_entanglement(self):
        rho = run_experiment(math.pi / 2)
        np.testing.assert_allclose(np.diag(rho).real, [1, 0, 0, 0], atol=1e-9)

    @pytest.mark.parametrize("n", range(19))
    def test_matches_ideal_pipeline(self, n):
        gamma = n * math.pi / 36
        seq = compile_strategies(gamma)
        label = seq.label
        sa, sb = {
            "DD": (DEFECT, DEFECT),
            "DQ": (DEFECT, QUANTUM),
            "QQ": (QUANTUM, QUANTUM),
        }[label.split()[1]]
        rho = run_experiment(gamma, seq)
        np.testing.assert_allclose(
            np.diag(rho).real, play(gamma, sa, sb).probabilities, atol=1e-9
        )

    def test_t2_damping_reduces_and_preserves_physicality(self):
        short_t2 = SpinSystem(t2=0.05)
        rho = run_experiment(math.pi / 2, system=short_t2, apply_t2=True)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(rho).min() >= -1e-10
        # coherences decayed mid-circuit, so the ideal outcome degrades
        assert rho[0, 0].real < 1.0 - 1e-3
        relaxed = run_experiment(math.pi / 2, system=SpinSystem(t2=1e6), apply_t2=True)
        assert relaxed[0, 0].real == pytest.approx(1.0, abs=1e-6)


class TestDuration:
    @pytest.mark.parametrize("gamma", sweep_gammas())
    def test_under_the_300ms_budget(self, gamma):
        assert experiment_duration(gamma) < 0.300

    def test_widths_enter_the_budget(self):
        base = experiment_duration(math.pi / 2, pulse_width=0.0)
        assert base == pytest.approx(2 / J_DEFAULT, abs=1e-15)
        padded = experiment_duration(math.pi / 2, pulse_width=0.005)
        assert padded == pytest.approx(base + 7 * 0.005, abs=1e-15)
