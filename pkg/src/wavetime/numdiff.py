"""Central-difference derivatives at zero with Richardson extrapolation.

Every clock timescale in this package is a limit of the form
lim_{s -> 0} dF/ds; these are realised numerically by symmetric central
differences over a descending ladder of probe strengths, extrapolated in h^2,
with the extrapolation tail doubling as an error estimate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DerivativeError, StepSizeError

__all__ = ["DerivativeResult", "central_differences", "richardson", "derivative_at_zero",
           "unwrapped_phases"]


@dataclass(frozen=True)
class DerivativeResult:
    value: float
    error_estimate: float
    steps: tuple[float, ...]
    table_diagonal: tuple[float, ...]


def central_differences(
    f_plus: Sequence[float], f_minus: Sequence[float], steps: Sequence[float]
) -> list[float]:
    """D(h_i) = (f(+h_i) - f(-h_i)) / (2 h_i)."""
    return [(fp - fm) / (2.0 * h) for fp, fm, h in zip(f_plus, f_minus, steps)]


def richardson(
    estimates: Sequence[float], steps: Sequence[float], levels: int
) -> DerivativeResult:
    """Extrapolate central-difference estimates to h -> 0.

    Neville's scheme in the variable h^2 (central differences have even error
    expansions); works for arbitrary descending step ladders.  The error
    estimate is the last correction applied, floored at machine noise.
    """
    if len(estimates) < 2:
        raise DerivativeError("need at least two probe steps for extrapolation")
    x = [h * h for h in steps]
    table = [list(estimates)]
    levels = min(levels, len(estimates) - 1)
    for j in range(1, levels + 1):
        prev = table[-1]
        row = []
        for i in range(len(prev) - 1):
            denom = x[i + j] - x[i]
            row.append((x[i + j] * prev[i] - x[i] * prev[i + 1]) / denom)
        table.append(row)
    diag = [table[j][0] for j in range(len(table))]
    value = diag[-1]
    err = abs(diag[-1] - diag[-2]) if len(diag) >= 2 else float("inf")
    floor = 1e-14 * max(1.0, abs(value))
    if not np.isfinite(value):
        raise DerivativeError("derivative extrapolation produced a non-finite value")
    return DerivativeResult(
        value=float(value),
        error_estimate=float(max(err, floor)),
        steps=tuple(steps),
        table_diagonal=tuple(diag),
    )


def derivative_at_zero(
    f: Callable[[float], float], steps: Sequence[float], levels: int = 2
) -> DerivativeResult:
    """Richardson-extrapolated derivative of f at 0 via symmetric probes."""
    f_plus = [f(h) for h in steps]
    f_minus = [f(-h) for h in steps]
    return richardson(central_differences(f_plus, f_minus, steps), steps, levels)


def unwrapped_phases(
    amplitudes: Sequence[complex], max_jump: float = np.pi / 2
) -> np.ndarray:
    """Continuous phases along an ordered probe sequence.

    Raises:
        StepSizeError: if consecutive (unwrapped) phases still jump by more
            than max_jump, i.e. the probe spacing undersamples the phase.
    """
    phases = np.unwrap(np.angle(np.asarray(amplitudes, dtype=complex)))
    if len(phases) > 1 and np.max(np.abs(np.diff(phases))) > max_jump:
        raise StepSizeError(
            "phase varies by more than the unwrapping tolerance between probes; "
            "reduce the probe steps"
        )
    return phases
