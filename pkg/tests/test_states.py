import math

import numpy as np
import pytest

from sgqgan import (
    KET_H,
    KET_V,
    DimensionMismatch,
    NotUnitary,
    ZeroVector,
    apply_unitary,
    bloch_coords,
    hwp,
    normalize,
    overlap,
    parse_state,
    qwp,
    root_fidelity,
)
from sgqgan.states import JonesUnitary, named_qubit_states

from helpers import haar_unitary, overlap_oracle, random_state, rotate_global_phase


class TestNormalize:
    def test_scaling(self):
        s = normalize([2, 0])
        assert np.allclose(s.amps, [1, 0])

    def test_gauge_fix_makes_first_nonzero_amp_real(self):
        s = normalize([0, 3j])
        assert np.allclose(s.amps, [0, 1])

    def test_symmetric_split(self):
        s = normalize([1, 1])
        assert np.allclose(s.amps, [1 / math.sqrt(2), 1 / math.sqrt(2)])

    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroVector):
            normalize([0, 0])
        with pytest.raises(ZeroVector):
            normalize([1e-13, 1e-13j])

    def test_gauge_invariant_under_global_phase(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            s = random_state(rng, dim=3)
            rotated = normalize(rotate_global_phase(s, rng.uniform(-np.pi, np.pi)))
            assert np.allclose(rotated.amps, s.amps, atol=1e-12)

    def test_first_significant_amp_real_nonnegative(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            s = random_state(rng, dim=4)
            idx = np.argmax(np.abs(s.amps) > 1e-12)
            pivot = s.amps[idx]
            assert abs(pivot.imag) < 1e-14
            assert pivot.real >= 0

    def test_unit_norm(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            s = random_state(rng, dim=5)
            assert abs(np.sum(np.abs(s.amps) ** 2) - 1.0) < 1e-12


class TestOverlap:
    def test_orthogonal(self):
        assert overlap(KET_H, KET_V) == 0.0

    def test_identity(self):
        rng = np.random.default_rng(7)
        s = random_state(rng)
        assert overlap(s, s) == pytest.approx(1.0, abs=1e-12)

    def test_psi_t2_against_h(self):
        # oracle: renormalized quoted amplitudes (0.90, 0.44) against (1, 0)
        expected = overlap_oracle([0.90, 0.44], [1, 0])
        assert expected == pytest.approx(0.81 / 1.0036, abs=1e-15)
        s = normalize([0.90, 0.44])
        assert overlap(s, KET_H) == pytest.approx(expected, abs=1e-12)

    def test_symmetric(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            a, b = random_state(rng, 3), random_state(rng, 3)
            assert overlap(a, b) == pytest.approx(overlap(b, a), abs=1e-15)

    def test_gauge_invariant_pre_canonicalization(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            a, b = random_state(rng), random_state(rng)
            theta = rng.uniform(-np.pi, np.pi)
            scaled = normalize(rotate_global_phase(a, theta))
            assert overlap(scaled, b) == pytest.approx(overlap(a, b), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            overlap(KET_H, random_state(np.random.default_rng(0), dim=3))


class TestRootFidelity:
    def test_extremes(self):
        assert root_fidelity(KET_H, KET_H) == 1.0
        assert root_fidelity(KET_H, KET_V) == 0.0

    def test_psi_t2(self):
        expected = math.sqrt(overlap_oracle([0.90, 0.44], [1, 0]))
        assert expected == pytest.approx(0.90 / math.sqrt(1.0036), abs=1e-15)
        assert root_fidelity(normalize([0.90, 0.44]), KET_H) == pytest.approx(
            expected, abs=1e-12
        )

    def test_square_equals_overlap(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            a, b = random_state(rng, 4), random_state(rng, 4)
            assert root_fidelity(a, b) ** 2 == pytest.approx(
                overlap(a, b), abs=1e-12
            )


class TestBloch:
    def test_pole_convention(self):
        assert bloch_coords(KET_H) == pytest.approx((0, 0, 1), abs=1e-15)

    def test_equator(self):
        assert bloch_coords(normalize([1, 1])) == pytest.approx((1, 0, 0), abs=1e-15)
        assert bloch_coords(normalize([1, 1j])) == pytest.approx((0, 1, 0), abs=1e-15)

    def test_unit_length(self):
        rng = np.random.default_rng(14)
        for _ in range(300):
            x, y, z = bloch_coords(random_state(rng))
            assert abs(x * x + y * y + z * z - 1.0) < 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            bloch_coords(random_state(np.random.default_rng(1), dim=3))

    def test_injective_on_distinct_states(self):
        rng = np.random.default_rng(15)
        for _ in range(300):
            a, b = random_state(rng), random_state(rng)
            if overlap(a, b) >= 1 - 1e-6:
                continue
            ra, rb = np.array(bloch_coords(a)), np.array(bloch_coords(b))
            assert np.linalg.norm(ra - rb) > 1e-4


class TestWavePlates:
    @pytest.mark.parametrize("plate", [hwp, qwp])
    def test_unitary_invariant(self, plate):
        rng = np.random.default_rng(16)
        for theta in rng.uniform(-np.pi, np.pi, size=50):
            u = plate(theta).matrix
            assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
            assert abs(abs(np.linalg.det(u)) - 1) < 1e-12

    def test_hwp_fast_axis_aligned(self):
        assert apply_unitary(hwp(0.0), KET_H) == KET_H

    def test_hwp_pi8_makes_diagonal(self):
        # oracle: [[c,s],[s,-c]] at 2*theta = pi/4 applied to (1,0)
        out = apply_unitary(hwp(math.pi / 8), KET_H)
        expected = normalize([math.cos(math.pi / 4), math.sin(math.pi / 4)])
        assert overlap(out, expected) == pytest.approx(1.0, abs=1e-12)

    def test_hwp_pi4_swaps_h_and_v(self):
        out = apply_unitary(hwp(math.pi / 4), KET_H)
        assert overlap(out, KET_V) == pytest.approx(1.0, abs=1e-12)

    def test_qwp_pi4_makes_circular(self):
        out = apply_unitary(qwp(math.pi / 4), KET_H)
        _, y, _ = bloch_coords(out)
        assert abs(y) == pytest.approx(1.0, abs=1e-12)

    def test_identity_apply(self):
        s = random_state(np.random.default_rng(17))
        out = apply_unitary(JonesUnitary(np.eye(2)), s)
        assert overlap(out, s) == pytest.approx(1.0, abs=1e-15)

    def test_unitary_then_inverse_restores(self):
        rng = np.random.default_rng(18)
        for _ in range(50):
            u = haar_unitary(rng)
            s = random_state(rng)
            back = apply_unitary(u.dag, apply_unitary(u, s))
            assert overlap(back, s) == pytest.approx(1.0, abs=1e-12)

    def test_norm_preserved(self):
        rng = np.random.default_rng(19)
        for _ in range(1000):
            out = apply_unitary(haar_unitary(rng), random_state(rng))
            assert abs(np.linalg.norm(out.amps) - 1.0) < 1e-10

    def test_not_unitary_rejected(self):
        with pytest.raises(NotUnitary):
            JonesUnitary(np.array([[1, 0], [0, 2.0]]))


class TestParseState:
    def test_literal_with_complex_amp(self):
        s = parse_state("0.75, 0.07+0.65i")
        assert s == normalize([0.75, 0.07 + 0.65j])

    def test_renormalized_on_load(self):
        s = parse_state("3, 0")
        assert s == KET_H

    def test_bare_imaginary_unit(self):
        assert parse_state("1, i") == normalize([1, 1j])
        assert parse_state("1, -i") == normalize([1, -1j])

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_state("1")
        with pytest.raises(ValueError):
            parse_state("1, spam")

    def test_named_states(self):
        names = named_qubit_states()
        assert names["H"] == KET_H
        assert names["V"] == KET_V
        assert overlap(names["R"], normalize([1, 1j])) == pytest.approx(1.0)
