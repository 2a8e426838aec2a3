"""Complex square roots with explicit branch selection.

Every square root taken anywhere in this package goes through one of the
selectors below, so the sign conventions live in a single audited place.
All functions are pure and operate on IEEE double complex scalars.
"""

from __future__ import annotations

import cmath

__all__ = [
    "principal_sqrt",
    "signed_root",
    "near_root",
    "forward_s_root",
    "zeta_root",
]


def principal_sqrt(z: complex) -> complex:
    """Square root with Re >= 0; if Re == 0 the imaginary part is >= 0.

    Differs from ``cmath.sqrt`` only in ignoring the sign of a negative
    zero, so that e.g. ``-4-0j`` and ``-4+0j`` both map to ``2j``.
    """
    w = cmath.sqrt(z)
    if w.real < 0.0 or (w.real == 0.0 and w.imag < 0.0):
        w = -w
    return w


def _ratio_real(w: complex, ref: complex) -> float:
    # Sign of Re(w/ref) decides near vs far; ref == 0 counts as a tie.
    if ref == 0:
        return 0.0
    return (w / ref).real


def signed_root(square: complex, reference: complex, *, tie_positive_imag: bool = False) -> complex:
    """Root ``w`` of ``square`` lying within 90 degrees of ``reference``.

    Of the two roots ``+-w`` the one with ``Re(w/reference) >= 0`` is
    returned.  Exact ties (including ``reference == 0``) resolve to the
    root with positive imaginary part when ``tie_positive_imag`` is set
    and to the principal root otherwise.
    """
    w = principal_sqrt(square)
    t = _ratio_real(w, reference)
    if t > 0.0:
        return w
    if t < 0.0:
        return -w
    if tie_positive_imag:
        if w.imag > 0.0:
            return w
        if w.imag < 0.0:
            return -w
    return w


def near_root(a: complex, g: complex) -> complex:
    """The root of ``a*g`` nearer to the arithmetic mean ``(a+g)/2``.

    Equidistant roots resolve to the one with positive imaginary part.
    ``a*g == 0`` returns 0 (mean iteration collapse; callers flag it).
    """
    return signed_root(a * g, a + g, tie_positive_imag=True)


def forward_s_root(u: complex, v: complex, a: complex, g: complex) -> complex:
    """Half root of ``(u+v)**2 - (a-g)**2`` pointing along ``u+v``.

    The branch keeps ``Re(s/(u+v)) >= 0``; ties, including ``u+v == 0``,
    keep the principal branch (the caller records that degenerate case).
    """
    s = u + v
    d = a - g
    return signed_root((s - d) * (s + d), s) / 2


def zeta_root(u: complex, a: complex) -> complex:
    """Root of ``u**2 - a**2`` nearer to ``u``, i.e. with ``Re(w/u) >= 0``."""
    if u == 0:
        raise ValueError("zeta root undefined at u=0")
    return signed_root(u * u - a * a, u)
