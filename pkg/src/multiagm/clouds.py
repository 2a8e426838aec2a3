"""Sign-schedule sweeps producing multivalue point clouds.

One cloud fixes the recursion parameters and sweeps the free bits of the
sign masks in descending mask order, evaluating the requested function for
every schedule.  Points are labelled with the generation of their schedule
and near-coincident values are cross-referenced instead of dropped.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .engine import (
    QuartetParams,
    QuartetTrace,
    SignSchedule,
    complete_E,
    complete_K,
    incomplete_F,
    jacobi_Z,
    run_quartet,
)

__all__ = [
    "CLOUD_KINDS",
    "MultivaluePoint",
    "CloudRequest",
    "restricted_zeta_schedule",
    "enumerate_cloud",
    "duplicate_pairs",
    "DUPLICATE_RTOL",
]

CLOUD_KINDS = ("K", "F", "E", "N", "Z", "Z_restricted")

# Two points closer than this times the cloud scale count as one value.
DUPLICATE_RTOL = 1e-9


@dataclass(frozen=True)
class MultivaluePoint:
    """One computed multivalue with its provenance.

    ``duplicate_of`` points at the earliest unflagged point of the same
    cloud carrying the same value, if any.  ``ill_conditioned`` is set
    when the trace was flagged or failed to converge.
    """

    value: complex
    schedule: SignSchedule
    signb: int
    generation: int
    ill_conditioned: bool
    duplicate_of: int | None = None


@dataclass(frozen=True)
class CloudRequest:
    """A sweep request: which function, which parameters, how many free bits."""

    kind: str
    params: QuartetParams
    sigma_bits: int = 0
    delta_bits: int = 0
    gamma_bits: int = 0

    def __post_init__(self) -> None:
        if self.kind not in CLOUD_KINDS:
            raise ValueError(f"unknown cloud kind {self.kind!r}")
        for name in ("sigma_bits", "delta_bits", "gamma_bits"):
            bits = getattr(self, name)
            if bits < 0:
                raise ValueError(f"{name} must be nonnegative")
            if bits > self.params.max_iter:
                raise ValueError(f"{name} exceeds max_iter")


def restricted_zeta_schedule(delta_mask: int) -> SignSchedule:
    """Schedule with the zeta sign tied to the previous forward sign.

    The gamma mask is the delta mask shifted up one bit, so the root sign
    inside the Zeta term at iteration n repeats the forward-root choice of
    iteration n-1; the geometric-mean signs stay all-positive.
    """
    if delta_mask < 0:
        raise ValueError("delta_mask must be nonnegative")
    return SignSchedule(sigma_mask=0, delta_mask=delta_mask, gamma_mask=delta_mask << 1)


def _schedules(req: CloudRequest) -> list[SignSchedule]:
    if req.kind == "Z_restricted":
        return [restricted_zeta_schedule(d) for d in range(2**req.delta_bits - 1, -1, -1)]
    out = []
    for s in range(2**req.sigma_bits - 1, -1, -1):
        for d in range(2**req.delta_bits - 1, -1, -1):
            for g in range(2**req.gamma_bits - 1, -1, -1):
                out.append(SignSchedule(sigma_mask=s, delta_mask=d, gamma_mask=g))
    return out


def _extract(kind: str, trace: QuartetTrace) -> complex:
    if kind == "K":
        return complete_K(trace)
    if kind == "E":
        return complete_E(trace)
    if kind == "N":
        k_val = complete_K(trace)
        if k_val == 0 or not cmath.isfinite(k_val):
            return complex(math.nan, math.nan)
        return complete_E(trace) / k_val
    if kind == "F":
        if trace.u_inf == 0:
            return complex(math.nan, math.nan)
        return incomplete_F(trace, 0)
    # Z and Z_restricted
    if not trace.zeta_defined:
        return complex(math.nan, math.nan)
    return jacobi_Z(trace)


def _mark_duplicates(points: list[MultivaluePoint]) -> list[MultivaluePoint]:
    scale = max((abs(p.value) for p in points if not p.ill_conditioned and cmath.isfinite(p.value)), default=0.0)
    if scale == 0.0:
        scale = 1.0
    threshold = DUPLICATE_RTOL * scale
    out: list[MultivaluePoint] = []
    for i, point in enumerate(points):
        dup = None
        if not point.ill_conditioned and cmath.isfinite(point.value):
            for j in range(i):
                other = out[j]
                if other.ill_conditioned or not cmath.isfinite(other.value):
                    continue
                if abs(point.value - other.value) < threshold:
                    dup = j if other.duplicate_of is None else other.duplicate_of
                    break
        out.append(replace(point, duplicate_of=dup))
    return out


def enumerate_cloud(req: CloudRequest) -> list[MultivaluePoint]:
    """Evaluate the requested function over the full mask sweep.

    Masks run in descending order (sigma outermost); the all-plus schedule
    is therefore the last point.  Ill-conditioned or unconverged traces
    yield flagged points, never omissions.
    """
    points: list[MultivaluePoint] = []
    for schedule in _schedules(req):
        trace = run_quartet(req.params, schedule)
        value = _extract(req.kind, trace)
        flagged = trace.ill_conditioned or not trace.converged
        points.append(
            MultivaluePoint(
                value=value,
                schedule=schedule,
                signb=req.params.signb,
                generation=schedule.generation(),
                ill_conditioned=flagged,
            )
        )
    return _mark_duplicates(points)


def duplicate_pairs(points: list[MultivaluePoint]) -> list[tuple[int, int]]:
    """(duplicate, original) index pairs recorded in a cloud."""
    return [(i, p.duplicate_of) for i, p in enumerate(points) if p.duplicate_of is not None]
