import numpy as np
import pytest

from wavetime.potentials import PotentialProfile, Segment


def random_real_profile(rng, max_segments=5, v_range=(-3.0, 6.0), clock_region=False):
    """Random piecewise-constant real profile (deterministic given the rng)."""
    n = int(rng.integers(1, max_segments + 1))
    segments = tuple(
        Segment(
            length=float(rng.uniform(0.1, 2.0)),
            v_real=float(rng.uniform(*v_range)),
        )
        for _ in range(n)
    )
    region = None
    if clock_region:
        lo = int(rng.integers(0, n))
        hi = int(rng.integers(lo, n))
        region = (lo, hi)
    return PotentialProfile(segments=segments, clock_region=region)


def random_complex_profile(rng, max_segments=5):
    """Random profile including absorptive segments."""
    n = int(rng.integers(1, max_segments + 1))
    segments = tuple(
        Segment(
            length=float(rng.uniform(0.1, 2.0)),
            v_real=float(rng.uniform(-3.0, 6.0)),
            v_imag=float(rng.uniform(0.0, 1.0)),
        )
        for _ in range(n)
    )
    return PotentialProfile(segments=segments)


def safe_energy(rng, profile, margin=1e-2):
    """Random energy above both leads and away from every segment top."""
    floor = max(profile.v_left, profile.v_right)
    for _ in range(1000):
        e = float(rng.uniform(floor + 0.05, floor + 8.0))
        if all(abs(e - s.v_real) > margin for s in profile.segments):
            return e
    raise RuntimeError("could not find a non-degenerate energy")


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)
