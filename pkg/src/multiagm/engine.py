"""Signed quartet recursion for complete and incomplete elliptic integrals.

A classical AGM pair ``(a, g)`` runs alongside a second pair ``(u, v)``
seeded from the amplitude, with a free ``+-1`` branch choice for every
square root.  One converged trace yields K, F (any arcsine branch),
E and the Jacobi Zeta value for the chosen sign schedule.

Internally the iteration carries the pair sums and differences, updating
the member that would be computed by a cancelling subtraction through the
exact identity ``sum' * diff' = diff**2 / 4``.  Sign flips applied after
the pair has nearly converged are therefore evaluated to full relative
precision, where the textbook recurrences would lose the value entirely.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .roots import principal_sqrt, signed_root, near_root, forward_s_root

__all__ = [
    "SignSchedule",
    "QuartetParams",
    "QuartetTrace",
    "quartet_step",
    "run_quartet",
    "complete_K",
    "incomplete_F",
    "complete_E",
    "jacobi_Z",
    "DEFAULT_MAX_ITER",
    "DEFAULT_CONV_TOL",
    "ILL_CONDITION_RATIO",
]

DEFAULT_MAX_ITER = 20
DEFAULT_CONV_TOL = 1e-12

# |a_inf| below this fraction of |a_0| marks a trace as untrustworthy.
ILL_CONDITION_RATIO = 1e-6

Quartet = tuple[complex, complex, complex, complex]


@dataclass(frozen=True)
class SignSchedule:
    """Per-iteration branch choices; bit ``n`` set means ``-1`` at iteration ``n``.

    ``sigma`` drives the geometric-mean root, ``delta`` the forward root of
    the amplitude pair, ``gamma`` the root inside the Zeta accumulation.
    Bits beyond an iteration count simply never apply; all-zero masks
    reproduce the plain convergent iteration.
    """

    sigma_mask: int = 0
    delta_mask: int = 0
    gamma_mask: int = 0

    def sigma(self, n: int) -> int:
        return -1 if (self.sigma_mask >> n) & 1 else 1

    def delta(self, n: int) -> int:
        return -1 if (self.delta_mask >> n) & 1 else 1

    def gamma(self, n: int) -> int:
        return -1 if (self.gamma_mask >> n) & 1 else 1

    def generation(self) -> int:
        """1 + index of the last iteration carrying a nontrivial sign (0 if none)."""
        return max(
            self.sigma_mask.bit_length(),
            self.delta_mask.bit_length(),
            self.gamma_mask.bit_length(),
        )


@dataclass(frozen=True)
class QuartetParams:
    """Inputs of the recursion.

    ``k`` is the modulus and ``sinphi`` the sine of the amplitude, both
    complex-capable.  ``signb`` multiplies the two initial square roots.
    ``complement`` optionally supplies an exact value of ``sqrt(1-k**2)``
    so that callers parameterising by the complementary modulus do not
    round-trip it through ``k``.
    """

    k: complex
    sinphi: complex
    signb: int = 1
    max_iter: int = DEFAULT_MAX_ITER
    conv_tol: float = DEFAULT_CONV_TOL
    complement: complex | None = None

    def __post_init__(self) -> None:
        if self.sinphi == 0:
            raise ValueError("sinphi must be nonzero")
        if self.signb not in (1, -1):
            raise ValueError("signb must be +1 or -1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.conv_tol > 0:
            raise ValueError("conv_tol must be positive")

    def complement_value(self) -> complex:
        if self.complement is not None:
            return complex(self.complement)
        return principal_sqrt(1 - complex(self.k) * complex(self.k))

    def k_squared(self) -> complex:
        if self.complement is not None:
            c = complex(self.complement)
            return (1 - c) * (1 + c)
        return complex(self.k) * complex(self.k)


@dataclass(frozen=True)
class QuartetTrace:
    """One full run of the recursion.

    ``rows`` holds the quartets ``(a_n, g_n, u_n, v_n)`` including the
    initial row.  ``s_sum`` is the weighted sum of ``a**2 - g**2`` terms,
    ``z_sum`` the accumulated Zeta series.  ``ill_conditioned`` is set on
    root collapse, a degenerate forward root, a non-finite intermediate,
    a Zeta term at ``u == 0``, or a limit tiny compared to the start.
    """

    rows: tuple[Quartet, ...]
    s_sum: complex
    z_sum: complex
    a_inf: complex
    u_inf: complex
    converged: bool
    ill_conditioned: bool
    zeta_defined: bool = True


def quartet_step(row: Quartet, sigma: int = 1, delta: int = 1) -> Quartet:
    """Advance one quartet row with explicit root signs.

    Plain single-step form of the recursion; `run_quartet` performs the
    same map with conditioning-preserving bookkeeping.
    """
    a, g, u, v = row
    return (
        (a + g) / 2,
        sigma * near_root(a, g),
        (u + v) / 2,
        delta * forward_s_root(u, v, a, g),
    )


def _safe_div(num: complex, den: complex) -> complex:
    if den == 0:
        return complex(0.0) if num == 0 else complex(math.nan, math.nan)
    return num / den


def run_quartet(params: QuartetParams, schedule: SignSchedule | None = None) -> QuartetTrace:
    """Run the signed recursion for ``params.max_iter`` iterations.

    Series terms for row ``n`` are accumulated before the row advances:
    weight ``2**(n-1)`` for the square-difference sum and ``2**n`` for the
    Zeta term.  Non-finite intermediates flag the trace instead of raising.
    """
    if schedule is None:
        schedule = SignSchedule()
    sp = complex(params.sinphi)
    ksq = params.k_squared()
    a = complex(1.0)
    g = params.signb * params.complement_value()
    u = 1 / sp
    if sp == 1:
        # full amplitude: the second pair is an exact copy of the first
        v = g
    else:
        v = params.signb * principal_sqrt(1 - ksq * sp * sp) / sp

    s_ag, d_ag, p_ag = a + g, a - g, a * g
    s_uv, d_uv = u + v, u - v

    rows: list[Quartet] = [(a, g, u, v)]
    s_sum = complex(0.0)
    z_sum = complex(0.0)
    collapsed = False
    degenerate = False
    zeta_defined = True
    finite = all(cmath.isfinite(x) for x in (a, g, u, v))

    for n in range(params.max_iter):
        s_sum += 2.0 ** (n - 1) * (s_ag * d_ag)
        if zeta_defined:
            if u == 0:
                zeta_defined = False
                z_sum = complex(math.nan, math.nan)
            else:
                zr = signed_root(u * u - a * a, u)
                z_sum += 2.0**n * schedule.gamma(n) * d_uv * zr / u

        if p_ag == 0:
            collapsed = True
        near = signed_root(p_ag, s_ag, tie_positive_imag=True)
        if s_uv == 0:
            degenerate = True
        if s_uv == s_ag and d_uv == d_ag:
            # coinciding pairs: (u+v)**2 - (a-g)**2 == 4ag, so reuse the
            # mean-pair root and keep the copy exact bit for bit
            w = near
        else:
            w = signed_root((s_uv - d_ag) * (s_uv + d_ag), s_uv) / 2

        q = d_ag * d_ag / 4
        a = s_ag / 2
        g = near if schedule.sigma(n) > 0 else -near
        p_ag = a * g
        if schedule.sigma(n) > 0:
            s_ag = a + near
            d_ag = _safe_div(q, s_ag)
        else:
            d_ag = a + near
            s_ag = _safe_div(q, d_ag)

        u = s_uv / 2
        v = w if schedule.delta(n) > 0 else -w
        if schedule.delta(n) > 0:
            s_uv = u + w
            d_uv = _safe_div(q, s_uv)
        else:
            d_uv = u + w
            s_uv = _safe_div(q, d_uv)

        rows.append((a, g, u, v))
        if finite:
            finite = all(cmath.isfinite(x) for x in (a, g, u, v))

    scale = abs(a)
    converged = bool(
        finite and scale > 0.0 and abs(d_ag) <= params.conv_tol * scale and abs(d_uv) <= params.conv_tol * scale
    )
    ill = (
        not finite
        or collapsed
        or degenerate
        or not zeta_defined
        or scale < ILL_CONDITION_RATIO * abs(rows[0][0])
    )
    return QuartetTrace(
        rows=tuple(rows),
        s_sum=s_sum,
        z_sum=z_sum,
        a_inf=a,
        u_inf=u,
        converged=converged,
        ill_conditioned=ill,
        zeta_defined=zeta_defined,
    )


def complete_K(trace: QuartetTrace) -> complex:
    """Quarter period ``pi / (2 a_inf)`` of the trace."""
    if trace.a_inf == 0:
        return complex(math.nan, math.nan)
    return math.pi / 2 / trace.a_inf


def incomplete_F(trace: QuartetTrace, branch: int = 0) -> complex:
    """First-kind incomplete integral from the trace, on a chosen arcsine branch.

    Branch 0 uses the principal arcsine.  An even branch ``n`` adds ``n*pi``
    to the principal value; an odd branch ``m`` negates it and adds ``m*pi``.
    """
    if trace.u_inf == 0:
        raise ValueError("amplitude limit degenerate")
    base = cmath.asin(trace.a_inf / trace.u_inf)
    if branch % 2:
        base = -base
    return (base + branch * math.pi) / trace.a_inf


def complete_E(trace: QuartetTrace) -> complex:
    """Second-kind complete integral ``K * (1 - s_sum)``."""
    return complete_K(trace) * (1 - trace.s_sum)


def jacobi_Z(trace: QuartetTrace) -> complex:
    """Accumulated Jacobi Zeta value of the trace."""
    if not trace.zeta_defined:
        raise ValueError("zeta accumulation undefined: hit u=0 along the trace")
    return trace.z_sum
