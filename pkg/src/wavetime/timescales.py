"""All traversal/dwell/sojourn timescales for piecewise-constant 1D scattering.

Implemented clocks and delays (natural units, hbar = 1, 2m = 1):

* Wigner delay: energy derivative of the exit-referenced scattering phase.
* Smith dwell time: integrated density over a region divided by incident flux.
* Buttiker-Landauer time: segment-wise d/(2 kappa) below the barrier and the
  classical crossing d/(2 k) above it (the super-barrier form is an
  interpretation; the WKB expression is sub-barrier only).
* Larmor clock: spin precession (tau_y) and spin rotation (tau_z) from the two
  Zeeman channels, extrapolated to zero field.
* Imaginary-potential clock: logarithmic sensitivity of |T|^2 (or |R|^2) to a
  small absorptive potential in the clock region.
* Sojourn times: the paired-variable correction.  Interface scattering is
  pinned at zero clock strength while the internal propagation carries
  xi = V_I * L; the xi -> 0 derivative of the dressed amplitude (amplitude for
  propagating, phase for evanescent regions) gives a positive definite
  traversal time.  Prompt reflection r12 is subtracted before timing the
  reflected wave.

Every zero-strength limit is a central-difference ladder with Richardson
extrapolation; reported times carry step sizes and an extrapolation error
estimate in their diagnostics.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad

from . import scatter
from .errors import (
    DivergentIntegrandError,
    LogSingularityError,
    RegimeAmbiguityError,
    ValidationError,
    WavetimeError,
)
from .numdiff import DerivativeResult, central_differences, richardson, unwrapped_phases
from .potentials import PotentialProfile

__all__ = [
    "DerivativeSpec",
    "TimescaleReport",
    "wigner_delay",
    "dwell_time",
    "bl_time",
    "larmor_times",
    "imag_clock_time",
    "dressed_transmission",
    "prompt_reflection",
    "sojourn_transmission",
    "sojourn_reflection",
    "sojourn_via_larmor_pairing",
    "full_report",
]

_AMPLITUDE_FLOOR = 1e-8  # below this the log-derivative is declared singular
# Phases of exponentially small amplitudes stay accurate (the scattering chain
# is multiplicatively stable), so phase derivatives only guard against true
# zeros/underflow.
_PHASE_FLOOR = 1e-150


@dataclass(frozen=True)
class DerivativeSpec:
    """Probe ladder realising the zero-strength limits.

    steps are relative probe strengths (scaled by the local energy scale
    max(E, |V0 - E|) at the point of use), strictly positive and strictly
    decreasing, at least two of them.
    """

    steps: tuple[float, ...] = (1e-2, 5e-3, 2.5e-3)
    order: int = 2
    richardson_levels: int = 2

    def __post_init__(self) -> None:
        if len(self.steps) < 2:
            raise ValidationError("DerivativeSpec needs at least two probe steps")
        if any(s <= 0 for s in self.steps):
            raise ValidationError("probe steps must be strictly positive")
        if any(a <= b for a, b in zip(self.steps, self.steps[1:])):
            raise ValidationError("probe steps must be strictly decreasing")


DEFAULT_SPEC = DerivativeSpec()


@dataclass(frozen=True)
class TimescaleReport:
    """All computed times at one energy, with per-entry diagnostics.

    entries maps method labels (wigner, dwell, bl, larmor_y, larmor_z,
    larmor_pythagorean, imag_clock, sojourn) to times; methods whose
    preconditions fail appear in reasons instead, never as NaN entries.
    """

    energy: float
    channel: str
    entries: dict[str, float] = field(default_factory=dict)
    reasons: dict[str, str] = field(default_factory=dict)
    diagnostics: dict[str, dict] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# helpers


def _clock_region(profile: PotentialProfile) -> tuple[int, int]:
    if profile.clock_region is None:
        raise ValidationError("profile has no clock region")
    return profile.clock_region


def _normalize_regions(
    profile: PotentialProfile, regions
) -> list[tuple[int, int]]:
    """Accept None (profile clock region), one (lo, hi) pair, or a sequence of
    disjoint pairs; returns validated, sorted pairs."""
    if regions is None:
        regions = [_clock_region(profile)]
    elif isinstance(regions, tuple) and len(regions) == 2 and all(
        isinstance(v, int) for v in regions
    ):
        regions = [regions]
    else:
        regions = list(regions)
    n = len(profile.segments)
    out = []
    for lo, hi in sorted(regions):
        if not (0 <= lo <= hi < n):
            raise ValidationError(f"region ({lo}, {hi}) out of range for {n} segments")
        out.append((int(lo), int(hi)))
    for (_, h1), (l2, _) in zip(out, out[1:]):
        if l2 <= h1:
            raise ValidationError("clock regions overlap")
    return out


def _region_segments(regions: list[tuple[int, int]]) -> list[int]:
    idx: list[int] = []
    for lo, hi in regions:
        idx.extend(range(lo, hi + 1))
    return idx


def _energy_scale(profile: PotentialProfile, E: float, segs: list[int] | None = None) -> float:
    vs = [profile.segments[j].v_real for j in (segs if segs is not None else range(len(profile.segments)))]
    gap = max((abs(v - E) for v in vs), default=E)
    return max(E, gap, 1e-12)


def _regime(profile: PotentialProfile, E: float, j: int) -> str:
    v = profile.segments[j].v_real
    if E > v:
        return "propagating"
    if E < v:
        return "evanescent"
    raise RegimeAmbiguityError(
        f"E = {E} sits exactly at the barrier top of segment {j}; offset E to pick a regime"
    )


def _dressed_wavevector(profile: PotentialProfile, E: float, j: int, xi: float) -> complex:
    """Paired-variable propagation wavevector for one clocked segment.

    Propagating: k' = k_r + i xi/(2 k_r L) (amplitude decays for xi > 0);
    evanescent:  k' = i kappa + xi/(2 kappa L) (pure phase shift).
    """
    seg = profile.segments[j]
    L = seg.length
    if _regime(profile, E, j) == "propagating":
        kr = math.sqrt(E - seg.v_real)
        return complex(kr, xi / (2.0 * kr * L))
    kap = math.sqrt(seg.v_real - E)
    return complex(xi / (2.0 * kap * L), kap)


def _dressed_solution(
    profile: PotentialProfile, E: float, xi_by_segment: dict[int, float]
) -> scatter.ScatteringSolution:
    override = {
        j: _dressed_wavevector(profile, E, j, xi) for j, xi in xi_by_segment.items()
    }
    return scatter.solve_with_propagation_override(profile, E, override)


def _probe_grid(steps: tuple[float, ...], scale: float) -> list[float]:
    hs = [s * scale for s in steps]
    return sorted([-h for h in hs]) + [0.0] + sorted(hs)


def _with_imag_clock(profile: PotentialProfile, v_imag: float) -> PotentialProfile:
    segs = list(profile.segments)
    for j in profile.clock_indices():
        segs[j] = replace(segs[j], v_imag=v_imag)
    return replace(profile, segments=tuple(segs))


def _with_larmor(profile: PotentialProfile, omega: float) -> PotentialProfile:
    segs = list(profile.segments)
    for j in profile.clock_indices():
        segs[j] = replace(segs[j], omega_larmor=omega)
    return replace(profile, segments=tuple(segs))


def _diag(result: DerivativeResult, **extra) -> dict:
    d = {
        "steps": list(result.steps),
        "richardson_error": result.error_estimate,
        "table_diagonal": list(result.table_diagonal),
    }
    d.update(extra)
    return d


# ---------------------------------------------------------------------------
# group-delay and flux-based times


def _wigner_detailed(
    profile: PotentialProfile, E: float, channel: str, spec: DerivativeSpec
) -> DerivativeResult:
    scale = _energy_scale(profile, E)
    grid = _probe_grid(spec.steps, scale)
    energies = [E + dE for dE in grid]
    if energies[0] <= max(profile.v_left, profile.v_right):
        raise ValidationError(
            "probe energies dip below an asymptotic potential; reduce the steps"
        )
    amps = []
    for Ep in energies:
        sol = scatter.solve(profile, Ep)
        amps.append(sol.t_local if channel == "transmission" else sol.r)
    if min(abs(a) for a in amps) < _PHASE_FLOOR:
        raise LogSingularityError(f"{channel} amplitude vanishes near E = {E}")
    phases = unwrapped_phases(amps)
    m = len(spec.steps)
    # grid layout: [-h1..-hm, 0, hm..h1]
    f_minus = list(phases[:m])  # at -h1, -h2, ..., -hm
    f_plus = list(phases[m + 1 :][::-1])  # at h1, h2, ..., hm
    hs = [s * scale for s in spec.steps]
    return richardson(central_differences(f_plus, f_minus, hs), hs, spec.richardson_levels)


def wigner_delay(
    profile: PotentialProfile,
    E: float,
    channel: str = "transmission",
    spec: DerivativeSpec = DEFAULT_SPEC,
) -> float:
    """Wigner group delay d(phase)/dE of t (exit-referenced) or r.

    With hbar = 1 the frequency is the energy, so this is literally
    d(Arg amplitude)/dE with continuous phase tracking across the probes.
    """
    return _wigner_detailed(profile, E, channel, spec).value


def dwell_time(profile: PotentialProfile, E: float, region: tuple[int, int] | None = None) -> float:
    """Smith dwell time: integral of |psi|^2 over the region / incident flux.

    The region must carry a real potential (Hermitian problem); defaults to
    the clock region, or the whole profile when none is marked.
    """
    if region is None:
        region = profile.clock_region if profile.clock_region is not None else (
            (0, len(profile.segments) - 1) if profile.segments else None
        )
    if region is None:
        return 0.0
    lo, hi = region
    for j in range(lo, hi + 1):
        if profile.segments[j].v_imag != 0.0:
            raise ValidationError(
                f"dwell time requires a real potential in the region; segment {j} is absorptive"
            )
    sol = scatter.solve(profile, E)
    J = sol.incident_flux
    if J == 0.0:
        raise ValidationError("incident flux vanishes")
    edges = profile.edges()
    total = 0.0
    for j in range(lo, hi + 1):
        val, _ = quad(
            lambda x: abs(scatter.wavefunction_at(sol, x)) ** 2,
            edges[j],
            edges[j + 1],
            limit=200,
            epsabs=1e-12,
            epsrel=1e-12,
        )
        total += val
    return total / J


def bl_time(profile: PotentialProfile, E: float, region: tuple[int, int] | None = None) -> float:
    """Buttiker-Landauer traversal time over the region (segment-wise additive).

    Sub-barrier segments contribute d/(2 kappa); super-barrier segments the
    classical crossing d/(2 k_r).

    Raises:
        DivergentIntegrandError: if E equals a segment potential exactly.
    """
    if region is None:
        region = _clock_region(profile)
    lo, hi = region
    total = 0.0
    for j in range(lo, hi + 1):
        seg = profile.segments[j]
        gap = abs(seg.v_real - E)
        if gap == 0.0:
            raise DivergentIntegrandError(
                f"E equals the potential of segment {j}; 1/kappa diverges"
            )
        total += seg.length / (2.0 * math.sqrt(gap))
    return total


# ---------------------------------------------------------------------------
# quantum clocks


def _spin_expectations(amps: scatter.SpinorAmplitudes, channel: str) -> tuple[float, float]:
    if channel == "reflection":
        a, b = amps.r_plus, amps.r_minus
    else:
        a, b = amps.t_plus, amps.t_minus
    norm = abs(a) ** 2 + abs(b) ** 2
    if norm < _AMPLITUDE_FLOOR**2:
        raise LogSingularityError(f"{channel} spinor amplitude vanishes")
    s_y = (a.conjugate() * b).imag / norm
    s_z = 0.5 * (abs(a) ** 2 - abs(b) ** 2) / norm
    return s_y, s_z


def _larmor_detailed(
    profile: PotentialProfile, E: float, spec: DerivativeSpec, channel: str
) -> tuple[DerivativeResult, DerivativeResult, float]:
    _clock_region(profile)
    scale = _energy_scale(profile, E, list(profile.clock_indices()))
    hs = [s * scale for s in spec.steps]
    sy_p, sy_m, sz_p, sz_m = [], [], [], []
    for h in hs:
        for omega, sy_acc, sz_acc in ((h, sy_p, sz_p), (-h, sy_m, sz_m)):
            amps = scatter.solve_spinor(_with_larmor(profile, omega), E)
            s_y, s_z = _spin_expectations(amps, channel)
            sy_acc.append(s_y)
            sz_acc.append(s_z)
    d_sy = richardson(central_differences(sy_p, sy_m, hs), hs, spec.richardson_levels)
    d_sz = richardson(central_differences(sz_p, sz_m, hs), hs, spec.richardson_levels)
    sign_y = math.copysign(1.0, d_sy.value) if d_sy.value != 0.0 else 0.0
    return d_sy, d_sz, sign_y


def larmor_times(
    profile: PotentialProfile,
    E: float,
    spec: DerivativeSpec = DEFAULT_SPEC,
    channel: str = "transmission",
) -> tuple[float, float]:
    """Spin precession and spin rotation times (tau_y, tau_z).

    tau_y = 2 |d<S_y>/d omega_L| and tau_z = 2 d<S_z>/d omega_L at zero field
    (hbar = 1; the derivative is taken in omega_L, so the gyromagnetic factors
    cancel).  tau_y is reported as a magnitude; the raw derivative sign is
    available through full_report diagnostics.
    """
    d_sy, d_sz, _ = _larmor_detailed(profile, E, spec, channel)
    return abs(2.0 * d_sy.value), 2.0 * d_sz.value


def _imag_clock_detailed(
    profile: PotentialProfile, E: float, spec: DerivativeSpec, channel: str
) -> DerivativeResult:
    _clock_region(profile)
    scale = _energy_scale(profile, E, list(profile.clock_indices()))
    hs = [s * scale for s in spec.steps]
    f_p, f_m = [], []
    for h in hs:
        for v_i, acc in ((h, f_p), (-h, f_m)):
            sol = scatter.solve(_with_imag_clock(profile, v_i), E)
            amp = sol.t if channel == "transmission" else sol.r
            if abs(amp) < _AMPLITUDE_FLOOR:
                raise LogSingularityError(
                    f"{channel} amplitude ~ 0 at probe V_I = {v_i}; log-derivative singular"
                )
            acc.append(math.log(abs(amp) ** 2))
    return richardson(central_differences(f_p, f_m, hs), hs, spec.richardson_levels)


def imag_clock_time(
    profile: PotentialProfile,
    E: float,
    spec: DerivativeSpec = DEFAULT_SPEC,
    channel: str = "transmission",
) -> float:
    """Imaginary-potential clock time from d ln|T|^2 / d V_I at V_I -> 0.

    Positive V_I is absorption (flux decays), so the time is minus half the
    logarithmic derivative; free propagation then clocks the literal crossing
    time L/(2k).
    """
    return -0.5 * _imag_clock_detailed(profile, E, spec, channel).value


# ---------------------------------------------------------------------------
# sojourn times (paired-variable correction)


def prompt_reflection(profile: PotentialProfile, E: float) -> complex:
    """r12: the partial wave reflected at the clock region's entry that never
    samples the region (subtracted before timing the reflected wave)."""
    return scatter.partial_waves(profile, E).r12


def dressed_transmission(
    profile: PotentialProfile, E: float, xi: float, regions=None
) -> complex:
    """Transmission amplitude with interfaces pinned at zero clock strength and
    the clock-region propagation carrying the paired variable xi = V_I * L.

    xi is distributed over multi-segment regions proportionally to length.
    At xi = 0 this equals solve()'s amplitude exactly.
    """
    regions = _normalize_regions(profile, regions)
    segs = _region_segments(regions)
    L_tot = sum(profile.segments[j].length for j in segs)
    xis = {j: xi * profile.segments[j].length / L_tot for j in segs}
    return _dressed_solution(profile, E, xis).t


def _sojourn_detailed(
    profile: PotentialProfile,
    E: float,
    spec: DerivativeSpec,
    regions,
    channel: str,
) -> tuple[float, DerivativeResult, bool]:
    """Shared xi-derivative machinery for both scattering channels.

    Returns (time, derivative result of the innermost call, mixed_regime).
    """
    region_list = _normalize_regions(profile, regions)
    segs = _region_segments(region_list)
    regimes = {j: _regime(profile, E, j) for j in segs}

    r12 = 0j
    if channel == "reflection":
        if len(region_list) > 1:
            raise ValidationError(
                "reflection sojourn time is defined for a single contiguous region"
            )
        r12 = scatter.partial_waves(replace(profile, clock_region=region_list[0]), E).r12

    def amplitude(xis: dict[int, float]) -> complex:
        sol = _dressed_solution(profile, E, xis)
        if channel == "transmission":
            return sol.t_local
        return sol.r - r12

    def branch_time(active: list[int], regime: str) -> DerivativeResult:
        L_act = sum(profile.segments[j].length for j in active)
        scale = _energy_scale(profile, E, active) * L_act
        grid = _probe_grid(spec.steps, scale)
        amps = []
        for xi in grid:
            xis = {j: xi * profile.segments[j].length / L_act for j in active}
            amps.append(amplitude(xis))
        floor = _AMPLITUDE_FLOOR if regime == "propagating" else _PHASE_FLOOR
        if min(abs(a) for a in amps) < floor:
            raise LogSingularityError(
                f"dressed {channel} amplitude ~ 0 within the probe ladder; "
                "log-derivative singular"
            )
        m = len(spec.steps)
        hs = [s * scale for s in spec.steps]
        if regime == "propagating":
            vals = [math.log(abs(a) ** 2) for a in amps]
            f_minus, f_plus = vals[:m], vals[m + 1 :][::-1]
            res = richardson(
                central_differences(f_plus, f_minus, hs), hs, spec.richardson_levels
            )
            return replace(res, value=-(L_act / 2.0) * res.value)
        phases = unwrapped_phases(amps)
        f_minus, f_plus = list(phases[:m]), list(phases[m + 1 :][::-1])
        res = richardson(
            central_differences(f_plus, f_minus, hs), hs, spec.richardson_levels
        )
        return replace(res, value=L_act * res.value)

    unique_regimes = set(regimes.values())
    if len(unique_regimes) == 1:
        res = branch_time(segs, unique_regimes.pop())
        return res.value, res, False
    # Mixed sub/super-barrier regions: per-segment contributions, each with
    # its own branch; additive by the chain rule, reported as extrapolated.
    total = 0.0
    last = None
    for j in segs:
        last = branch_time([j], regimes[j])
        total += last.value
    return total, last, True


def sojourn_transmission(
    profile: PotentialProfile,
    E: float,
    spec: DerivativeSpec = DEFAULT_SPEC,
    regions=None,
) -> float:
    """Positive definite sojourn time for transmission via the xi -> 0 limit.

    Propagating regions differentiate ln|T(xi)|^2, evanescent regions the
    phase of T(xi) (where the clock acts); regions may be a (lo, hi) pair or a
    sequence of disjoint pairs (times add over disjoint regions).
    """
    value, _, _ = _sojourn_detailed(profile, E, spec, regions, "transmission")
    return value


def sojourn_reflection(
    profile: PotentialProfile,
    E: float,
    spec: DerivativeSpec = DEFAULT_SPEC,
    region: tuple[int, int] | None = None,
) -> float:
    """Sojourn time for reflection, timed on R' = R - r12 (prompt reflection
    removed).  Satisfies tau_s(R) = tau_s(T) + tau_BL for rectangular regions.

    Raises:
        LogSingularityError: if |R'| vanishes (nothing but prompt reflection).
    """
    value, _, _ = _sojourn_detailed(profile, E, spec, region, "reflection")
    return value


def sojourn_via_larmor_pairing(
    profile: PotentialProfile,
    E: float,
    spec: DerivativeSpec = DEFAULT_SPEC,
    regions=None,
) -> float:
    """Sojourn time from the Larmor clock with the paired variable xi = omega_L L.

    Interfaces are pinned at zero field while the Zeeman-split internal
    propagation carries xi; the spin precession (propagating) or spin rotation
    (evanescent) derivative reproduces the imaginary-potential sojourn times.
    """
    region_list = _normalize_regions(profile, regions)
    segs = _region_segments(region_list)
    regimes = {j: _regime(profile, E, j) for j in segs}
    if len(set(regimes.values())) != 1:
        raise RegimeAmbiguityError(
            "Larmor pairing implemented for single-regime clock regions only"
        )
    regime = regimes[segs[0]]
    L_tot = sum(profile.segments[j].length for j in segs)
    scale = _energy_scale(profile, E, segs) * L_tot
    hs = [s * scale for s in spec.steps]

    def channel_override(xi: float, sign: int) -> dict[int, complex]:
        # Zeeman shift of the internal propagation only: k'_+- from
        # kappa_+- ~ kappa -/+ xi_j/(4 kappa L_j) (and the propagating analogue).
        out = {}
        for j in segs:
            seg = profile.segments[j]
            xi_j = xi * seg.length / L_tot
            if regime == "propagating":
                kr = math.sqrt(E - seg.v_real)
                out[j] = complex(kr + sign * xi_j / (4.0 * kr * seg.length), 0.0)
            else:
                kap = math.sqrt(seg.v_real - E)
                out[j] = complex(0.0, kap - sign * xi_j / (4.0 * kap * seg.length))
        return out

    def spin_expectation(xi: float) -> float:
        a = scatter.solve_with_propagation_override(profile, E, channel_override(xi, +1)).t
        b = scatter.solve_with_propagation_override(profile, E, channel_override(xi, -1)).t
        norm = abs(a) ** 2 + abs(b) ** 2
        if norm < _AMPLITUDE_FLOOR**2:
            raise LogSingularityError("dressed spinor amplitude vanishes")
        if regime == "propagating":
            return (a.conjugate() * b).imag / norm
        return 0.5 * (abs(a) ** 2 - abs(b) ** 2) / norm

    f_p = [spin_expectation(h) for h in hs]
    f_m = [spin_expectation(-h) for h in hs]
    res = richardson(central_differences(f_p, f_m, hs), hs, spec.richardson_levels)
    return abs(2.0 * L_tot * res.value)


# ---------------------------------------------------------------------------
# aggregation


def full_report(
    profile: PotentialProfile,
    E: float,
    spec: DerivativeSpec = DEFAULT_SPEC,
    channel: str = "transmission",
) -> TimescaleReport:
    """Compute every timescale at one energy; failed preconditions become
    reason-coded absences rather than errors."""
    entries: dict[str, float] = {}
    reasons: dict[str, str] = {}
    diagnostics: dict[str, dict] = {}

    clock_segs = list(profile.clock_indices())
    flags = {
        "evanescent_regime": bool(clock_segs)
        and all(E < profile.segments[j].v_real for j in clock_segs),
        "extrapolated_beyond_paper": len(clock_segs) > 1,
    }

    def attempt(label: str, fn) -> None:
        try:
            fn()
        except WavetimeError as exc:
            reasons[label] = f"{type(exc).__name__}: {exc}"

    def _wigner() -> None:
        res = _wigner_detailed(profile, E, channel, spec)
        entries["wigner"] = res.value
        diagnostics["wigner"] = _diag(res)

    def _dwell() -> None:
        entries["dwell"] = dwell_time(profile, E)

    def _bl() -> None:
        entries["bl"] = bl_time(profile, E)

    def _larmor() -> None:
        d_sy, d_sz, sign_y = _larmor_detailed(profile, E, spec, channel)
        entries["larmor_y"] = abs(2.0 * d_sy.value)
        entries["larmor_z"] = 2.0 * d_sz.value
        diagnostics["larmor_y"] = _diag(d_sy, raw_derivative_sign=sign_y)
        diagnostics["larmor_z"] = _diag(d_sz)
        # Optional derived quantity; no fundamental basis, reported for
        # comparison only.
        entries["larmor_pythagorean"] = math.hypot(
            entries["larmor_y"], entries["larmor_z"]
        )

    def _imag() -> None:
        res = _imag_clock_detailed(profile, E, spec, channel)
        entries["imag_clock"] = -0.5 * res.value
        diagnostics["imag_clock"] = _diag(res)

    def _sojourn() -> None:
        if channel == "reflection":
            value, res, mixed = _sojourn_detailed(profile, E, spec, None, "reflection")
        else:
            value, res, mixed = _sojourn_detailed(profile, E, spec, None, "transmission")
        entries["sojourn"] = value
        diagnostics["sojourn"] = _diag(res)
        if mixed:
            flags["extrapolated_beyond_paper"] = True

    attempt("wigner", _wigner)
    attempt("dwell", _dwell)
    attempt("bl", _bl)
    attempt("larmor", _larmor)
    attempt("imag_clock", _imag)
    attempt("sojourn", _sojourn)
    return TimescaleReport(
        energy=E,
        channel=channel,
        entries=entries,
        reasons=reasons,
        diagnostics=diagnostics,
        flags=flags,
    )
