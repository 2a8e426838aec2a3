"""Predicted loci for the multivalue clouds and residual measurement.

The cloud of a complete first-kind sweep sits on a rectangular lattice
spanned by quarter-period combinations; the incomplete first-kind cloud
adds a second coset per cell; the second-kind cloud is the same lattice
under anisotropic scaling; the ratio cloud collapses onto a circle; the
restricted Zeta cloud is one-dimensional.  `fit_cloud` measures how far a
computed cloud strays from the predicted locus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .oracle import ReferenceSet, quad_E_inc, quad_F

__all__ = [
    "LatticeSpec",
    "CircleSpec",
    "PointFit",
    "FitReport",
    "predict_locus",
    "fit_cloud",
    "DEFAULT_FIT_TOL",
]

# Clouds from 20-iteration traces cannot be sharper than this in general.
DEFAULT_FIT_TOL = 1e-6


@dataclass(frozen=True)
class LatticeSpec:
    """Origin plus one or two generating vectors and optional coset offsets."""

    origin: complex
    gen1: complex
    gen2: complex = 0j
    cosets: tuple[complex, ...] = (0j,)

    def __post_init__(self) -> None:
        if self.gen1 == 0:
            raise ValueError("gen1 must be nonzero")
        if self.gen2 != 0 and (self.gen2 / self.gen1).imag == 0:
            raise ValueError("gen2 must not be parallel to gen1")
        if not self.cosets:
            raise ValueError("cosets must be nonempty")


@dataclass(frozen=True)
class CircleSpec:
    """Circle centred on the real axis through the crossings ``x1`` and ``x2``."""

    x1: float
    x2: float

    def __post_init__(self) -> None:
        if self.x1 == self.x2:
            raise ValueError("crossings must be distinct")

    @property
    def center(self) -> complex:
        return complex((self.x1 + self.x2) / 2.0, 0.0)

    @property
    def radius(self) -> float:
        return abs(self.x2 - self.x1) / 2.0


@dataclass(frozen=True)
class PointFit:
    """Best lattice/circle assignment of one cloud point."""

    index: int
    m: int
    n: int
    coset: int
    residual: float
    excluded: bool


@dataclass(frozen=True)
class FitReport:
    points: tuple[PointFit, ...]
    max_residual: float
    worst_point: int | None
    flagged_excluded: int
    tol: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "tol": self.tol,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "worst_point": self.worst_point,
            "flagged_excluded": self.flagged_excluded,
            "points": [
                {
                    "index": p.index,
                    "m": p.m,
                    "n": p.n,
                    "coset": p.coset,
                    "residual": p.residual,
                    "excluded": p.excluded,
                }
                for p in self.points
            ],
        }


def predict_locus(kind: str, refs: ReferenceSet, phi: float | None = None) -> LatticeSpec | CircleSpec:
    """Predicted locus for a cloud of the given kind from reference values.

    ``kind`` is one of ``K`` (fixed initial sign), ``K_both`` (both initial
    signs combined), ``F``, ``E``, ``N`` or ``Z_restricted``.  ``F`` and
    ``Z_restricted`` need the real amplitude ``phi``.
    """
    if kind == "K":
        return LatticeSpec(origin=refs.K_k, gen1=4 * refs.K_k, gen2=4j * refs.K_b)
    if kind == "K_both":
        return LatticeSpec(origin=refs.K_k, gen1=4 * refs.K_k, gen2=2j * refs.K_b)
    if kind == "E":
        return LatticeSpec(origin=refs.E_k, gen1=4 * refs.E_k, gen2=4j * (refs.K_b - refs.E_b))
    if kind == "N":
        return CircleSpec(x1=(1 - refs.N_k2).real, x2=refs.N_b2.real)
    if kind == "F":
        if phi is None:
            raise ValueError("F locus needs the amplitude phi")
        origin = complex(quad_F(phi, refs.k.real))
        return LatticeSpec(
            origin=origin,
            gen1=4 * refs.K_k,
            gen2=4j * refs.K_b,
            cosets=(0j, 2 * refs.K_k - 2 * origin),
        )
    if kind == "Z_restricted":
        if phi is None:
            raise ValueError("Z locus needs the amplitude phi")
        origin = complex(quad_E_inc(phi, refs.k.real) - quad_F(phi, refs.k.real) * refs.N_b2.real)
        return LatticeSpec(origin=origin, gen1=refs.qZ, gen2=0j)
    raise ValueError(f"no predicted locus for kind {kind!r}")


def _point_value(point) -> complex:
    return complex(getattr(point, "value", point))


def _point_flag(point) -> bool:
    return bool(getattr(point, "ill_conditioned", False))


def _fit_lattice(value: complex, spec: LatticeSpec) -> tuple[int, int, int, float]:
    best: tuple[int, int, int, float] | None = None
    for ci, coset in enumerate(spec.cosets):
        d = value - spec.origin - coset
        if spec.gen2 == 0:
            m = round((d / spec.gen1).real)
            n = 0
        else:
            det = spec.gen1.real * spec.gen2.imag - spec.gen2.real * spec.gen1.imag
            m = round((d.real * spec.gen2.imag - spec.gen2.real * d.imag) / det)
            n = round((spec.gen1.real * d.imag - d.real * spec.gen1.imag) / det)
        residual = abs(d - m * spec.gen1 - n * spec.gen2)
        if best is None or residual < best[3]:
            best = (m, n, ci, residual)
    assert best is not None
    return best


def fit_cloud(cloud: Sequence, spec: LatticeSpec | CircleSpec, tol: float = DEFAULT_FIT_TOL) -> FitReport:
    """Assign every cloud point to the locus and report residuals.

    Accepts `MultivaluePoint` instances or bare complex values.  Flagged
    (ill-conditioned) points are listed but excluded from the maximum and
    from the pass verdict; non-finite residuals count as infinite.
    """
    fits: list[PointFit] = []
    max_residual = 0.0
    worst: int | None = None
    excluded_count = 0
    for i, point in enumerate(cloud):
        value = _point_value(point)
        excluded = _point_flag(point)
        if isinstance(spec, CircleSpec):
            m = n = ci = 0
            residual = abs(abs(value - spec.center) - spec.radius)
        else:
            m, n, ci, residual = _fit_lattice(value, spec)
        if not math.isfinite(residual):
            residual = math.inf
        fits.append(PointFit(index=i, m=m, n=n, coset=ci, residual=residual, excluded=excluded))
        if excluded:
            excluded_count += 1
        elif worst is None or residual > max_residual:
            max_residual = residual
            worst = i
    return FitReport(
        points=tuple(fits),
        max_residual=max_residual,
        worst_point=worst,
        flagged_excluded=excluded_count,
        tol=tol,
        passed=max_residual < tol,
    )
