import cmath
import math

import numpy as np
import pytest

from conftest import random_complex_profile, random_real_profile, safe_energy
from wavetime.errors import NoOpenChannelError, ValidationError
from wavetime.potentials import PotentialProfile, Segment, make_rectangular_barrier
from wavetime.scatter import (
    partial_waves,
    solve,
    solve_spinor,
    solve_with_propagation_override,
    wavefunction_at,
    wavevector,
)


class TestWavevector:
    def test_free_propagation(self):
        assert wavevector(4.0, Segment(1.0, 0.0)) == pytest.approx(2.0)

    def test_evanescent_is_positive_imaginary(self):
        k = wavevector(1.0, Segment(1.0, 2.0))
        assert k == pytest.approx(1j)

    def test_absorption_branch(self):
        # v_imag > 0 is absorption: the evanescent wavevector acquires a
        # positive real part, k = i + 0.005 for E=1, V=2, V_I=0.01, so that
        # exp(ikx) decays in both amplitude senses and |t|^2+|r|^2 < 1.
        k = wavevector(1.0, Segment(1.0, 2.0, v_imag=0.01))
        assert k.real == pytest.approx(0.005, rel=1e-4)
        assert k.imag == pytest.approx(1.0, rel=1e-4)

    def test_propagating_absorption(self):
        k = wavevector(4.0, Segment(1.0, 0.0, v_imag=0.1))
        assert k.imag > 0
        assert k * k == pytest.approx(4.0 + 0.1j)

    def test_branch_continuous_through_zero_absorption(self):
        k0 = wavevector(1.0, Segment(1.0, 2.0))
        k_eps = wavevector(1.0, Segment(1.0, 2.0, v_imag=1e-12))
        assert abs(k0 - k_eps) < 1e-10

    def test_zeeman_channels(self):
        seg = Segment(1.0, 2.0, omega_larmor=0.4)
        up = wavevector(1.0, seg, channel=+1)
        down = wavevector(1.0, seg, channel=-1)
        assert up * up == pytest.approx(1.0 - 2.0 + 0.2)
        assert down * down == pytest.approx(1.0 - 2.0 - 0.2)


class TestSolveBasics:
    def test_empty_profile_is_transparent(self):
        sol = solve(PotentialProfile(segments=()), 2.0)
        assert sol.t == pytest.approx(1.0)
        assert sol.r == pytest.approx(0.0)

    def test_free_segment_transmits_with_crossing_phase(self):
        sol = solve(PotentialProfile(segments=(Segment(2.0, 0.0),)), 4.0)
        assert sol.t == pytest.approx(1.0)
        assert sol.t_local == pytest.approx(cmath.exp(1j * 2.0 * 2.0))

    def test_textbook_rectangular_barrier(self):
        # E = V0/2 with kappa*L = 1: |t|^2 = [1 + sinh^2(1) *
        # V0^2/(4E(V0-E))]^(-1} = [1+sinh^2(1)]^{-1}, derived independently
        # from the standard closed form.
        v0 = 2.0
        e = 1.0
        kappa = math.sqrt(v0 - e)
        prof = make_rectangular_barrier(v0, 1.0 / kappa)
        sol = solve(prof, e)
        expected = 1.0 / (1.0 + math.sinh(1.0) ** 2)
        assert abs(sol.t) ** 2 == pytest.approx(expected, rel=1e-12)

    def test_closed_channel_raises(self):
        prof = PotentialProfile(segments=(Segment(1.0, 0.0),), v_left=3.0)
        with pytest.raises(NoOpenChannelError):
            solve(prof, 2.0)

    def test_reciprocity_equal_leads(self, rng):
        for _ in range(20):
            prof = random_complex_profile(rng)
            e = safe_energy(rng, prof)
            sol = solve(prof, e)
            assert sol.t == pytest.approx(sol.t_rev, rel=1e-10)


class TestFluxConservation:
    def test_unitarity_random_real_profiles(self, rng):
        worst = 0.0
        for _ in range(100):
            prof = random_real_profile(rng)
            e = safe_energy(rng, prof)
            sol = solve(prof, e)
            worst = max(worst, abs(abs(sol.t) ** 2 + abs(sol.r) ** 2 - 1.0))
        assert worst < 1e-10

    def test_absorption_subunitarity(self, rng):
        for _ in range(50):
            prof = random_complex_profile(rng)
            e = safe_energy(rng, prof)
            sol = solve(prof, e)
            assert abs(sol.t) ** 2 + abs(sol.r) ** 2 < 1.0

    def test_step_potential_flux_weights(self):
        # Unequal leads: |t|^2 k_R/k_L + |r|^2 = 1.
        prof = PotentialProfile(segments=(Segment(1.0, 1.0),), v_right=1.0)
        sol = solve(prof, 3.0)
        flux = abs(sol.t) ** 2 * sol.k_right.real / sol.k_left.real + abs(sol.r) ** 2
        assert flux == pytest.approx(1.0, abs=1e-12)


class TestOpaqueStability:
    def test_deep_tunneling_no_overflow(self):
        # kappa*L up to 400; |t| ~ exp(-kappa L) must come out finite and the
        # log-slope must equal -kappa exactly in the opaque limit.
        kappa = math.sqrt(8.0)
        vals = []
        for L in (50.0, 100.0):
            sol = solve(make_rectangular_barrier(9.0, L), 1.0)
            assert math.isfinite(abs(sol.t))
            vals.append(math.log(abs(sol.t)))
        slope = (vals[1] - vals[0]) / 50.0
        assert slope == pytest.approx(-kappa, rel=1e-12)

    def test_barrier_top_is_continuous(self):
        # E exactly at V0 takes the linear-solution branch; it must join the
        # generic branch smoothly.
        prof = make_rectangular_barrier(4.0, 1.0)
        t_at = solve(prof, 4.0).t
        t_near = solve(prof, 4.0 + 1e-9).t
        assert abs(t_at - t_near) < 1e-7


class TestWavefunction:
    def test_matches_boundary_amplitudes(self, rng):
        for _ in range(20):
            prof = random_real_profile(rng)
            e = safe_energy(rng, prof)
            sol = solve(prof, e)
            assert wavefunction_at(sol, 0.0) == pytest.approx(1.0 + sol.r, rel=1e-9)
            assert wavefunction_at(sol, prof.extent()) == pytest.approx(
                sol.t_local, rel=1e-9
            )

    def test_continuity_at_interfaces(self, rng):
        for _ in range(20):
            prof = random_real_profile(rng, max_segments=4)
            e = safe_energy(rng, prof)
            sol = solve(prof, e)
            for x in prof.edges():
                lo = wavefunction_at(sol, x - 1e-9)
                hi = wavefunction_at(sol, x + 1e-9)
                assert abs(lo - hi) < 1e-6

    def test_zero_potential_is_plane_wave_everywhere(self):
        sol = solve(PotentialProfile(segments=(Segment(3.0, 0.0),)), 1.0)
        for x in (-2.0, 0.3, 1.7, 5.0):
            assert wavefunction_at(sol, x) == pytest.approx(cmath.exp(1j * x), rel=1e-12)

    def test_rejects_non_finite_position(self):
        sol = solve(make_rectangular_barrier(1.0, 1.0), 2.0)
        with pytest.raises(ValidationError):
            wavefunction_at(sol, math.inf)


class TestSpinor:
    def test_zero_field_channels_coincide(self):
        prof = make_rectangular_barrier(2.0, 1.0)
        amps = solve_spinor(prof, 1.0)
        assert amps.t_plus == amps.t_minus
        assert amps.r_plus == amps.r_minus

    def test_field_splits_channels(self):
        prof = PotentialProfile(
            segments=(Segment(1.0, 2.0, omega_larmor=0.3),), clock_region=(0, 0)
        )
        amps = solve_spinor(prof, 1.0)
        # Spin-up sees the lower barrier, so it tunnels more easily.
        assert abs(amps.t_plus) > abs(amps.t_minus)


class TestPartialWaves:
    def test_entry_reflection_is_fresnel_for_bare_barrier(self):
        prof = make_rectangular_barrier(4.0, 1.0)
        e = 2.0
        pw = partial_waves(prof, e)
        k = cmath.sqrt(complex(e))
        kp = 1j * math.sqrt(4.0 - e)
        assert pw.r12 == pytest.approx((k - kp) / (k + kp), rel=1e-12)
        assert pw.t12 == pytest.approx(2 * k / (k + kp), rel=1e-12)

    def test_geometric_resummation_reconstructs_transmission(self, rng):
        for _ in range(20):
            prof = random_real_profile(rng, clock_region=True)
            lo = prof.clock_region[0]
            prof = PotentialProfile(segments=prof.segments, clock_region=(lo, lo))
            e = safe_energy(rng, prof)
            pw = partial_waves(prof, e)
            loop = pw.r21 * pw.r23 * cmath.exp(2j * pw.k_inner * pw.region_length)
            t_sum = (
                pw.t12
                * pw.t23
                * cmath.exp(1j * pw.k_inner * pw.region_length)
                / (1.0 - loop)
            )
            sol = solve(prof, e)
            assert t_sum == pytest.approx(sol.t_local, rel=1e-9)

    def test_requires_clock_region(self):
        prof = PotentialProfile(segments=(Segment(1.0, 1.0),))
        with pytest.raises(ValidationError):
            partial_waves(prof, 2.0)

    def test_mirror_symmetric_stacks_match(self):
        segs = (Segment(0.5, 1.0), Segment(1.0, 3.0), Segment(0.5, 1.0))
        prof = PotentialProfile(segments=segs, clock_region=(1, 1))
        pw = partial_waves(prof, 2.0)
        assert pw.r21 == pytest.approx(pw.r23, rel=1e-12)


class TestPropagationOverride:
    def test_zero_override_is_identity(self, rng):
        for _ in range(10):
            prof = random_real_profile(rng, clock_region=True)
            e = safe_energy(rng, prof)
            base = solve(prof, e)
            lo = prof.clock_region[0]
            k_lo = wavevector(e, prof.segments[lo])
            dressed = solve_with_propagation_override(prof, e, {lo: k_lo})
            assert dressed.t == pytest.approx(base.t, rel=1e-12)
            assert dressed.r == pytest.approx(base.r, rel=1e-12)

    def test_pure_decay_override_only_attenuates(self):
        prof = make_rectangular_barrier(0.0, 1.0)
        e = 4.0
        eta = 0.05
        dressed = solve_with_propagation_override(prof, e, {0: 2.0 + 1j * eta})
        # No interface mismatch at bare k, so |t| = exp(-eta L) exactly.
        assert abs(dressed.t) == pytest.approx(math.exp(-eta), rel=1e-12)
