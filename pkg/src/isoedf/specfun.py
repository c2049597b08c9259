"""Special functions: Bessel J0 and the Marchenko-Pastur density.

These are the closed forms everything else leans on: J0 builds the
noise covariance kernel, the MP density is the white-noise limit law
used as the oracle for the general convolution machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Rational approximations for the Hankel asymptotic form of J0 on x > 8
# (Cephes bessj0 coefficients, public domain).  The form is
#   J0(x) = sqrt(2/(pi x)) * (P(q) cos(x - pi/4) - (5/x) Q(q) sin(x - pi/4))
# with q = 25/x^2.
_PP = (
    7.96936729297347051624e-4,
    8.28352392107440799803e-2,
    1.23953371646414299388e0,
    5.44725003058768775090e0,
    8.74716500199817011941e0,
    5.30324038235394892183e0,
    9.99999999999999997821e-1,
)
_PQ = (
    9.24408810558863637013e-4,
    8.56288474354474431428e-2,
    1.25352743901058953537e0,
    5.47097740330417105182e0,
    8.76190883237069594232e0,
    5.30605288235394617618e0,
    1.00000000000000000218e0,
)
_QP = (
    -1.13663838898469149931e-2,
    -1.28252718670509318512e0,
    -1.95539544257735972385e1,
    -9.32060152123768231369e1,
    -1.77681167980488050595e2,
    -1.47077505154951170175e2,
    -5.14105326766599330220e1,
    -6.05014350600728481186e0,
)
_QQ = (
    6.43178256118178023184e1,
    8.56430025976980587198e2,
    3.88240183605401609683e3,
    7.24046774195652478189e3,
    5.93072701187316984827e3,
    2.06209331660327847417e3,
    2.42005740240291393179e2,
)
_SQ2OPI = 7.9788456080286535587989e-1  # sqrt(2/pi)
_PIO4 = 7.85398163397448309616e-1


def _polevl(x: float, coef) -> float:
    ans = coef[0]
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def _p1evl(x: float, coef) -> float:
    # leading coefficient 1 is implicit
    ans = x + coef[0]
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind, order zero.

    Power series up to |x| = 8 (cancellation is still mild there),
    Hankel asymptotic form with rational corrections beyond.  Absolute
    error stays below 1e-13 out to |x| = 200.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"bessel_j0 requires finite input, got {x!r}")
    x = abs(x)
    if x <= 8.0:
        q = 0.25 * x * x
        total = 1.0
        term = 1.0
        k = 0
        while abs(term) > 1e-18 and k < 60:
            k += 1
            term *= -q / (k * k)
            total += term
        return total
    w = 5.0 / x
    q = 25.0 / (x * x)
    p = _polevl(q, _PP) / _polevl(q, _PQ)
    s = _polevl(q, _QP) / _p1evl(q, _QQ)
    xn = x - _PIO4
    return _SQ2OPI * (p * math.cos(xn) - w * s * math.sin(xn)) / math.sqrt(x)


@dataclass(frozen=True)
class MpParams:
    """Marchenko-Pastur parameters: aspect ratio c = N/L and background scale."""

    c: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.c > 0):
            raise ValueError(f"aspect ratio c must be > 0, got {self.c}")
        if not (self.scale > 0):
            raise ValueError(f"scale must be > 0, got {self.scale}")

    @property
    def support(self) -> tuple[float, float]:
        rc = math.sqrt(self.c)
        return self.scale * (1 - rc) ** 2, self.scale * (1 + rc) ** 2


def mp_density(x: float, p: MpParams) -> float:
    """Continuous part of the MP density at x.

    Zero outside (and exactly at) the support edges.  For c > 1 the
    continuous part integrates to 1/c; the remaining mass sits in the
    zero atom reported by `zero_atom_mass`.  At the c = 1 hard edge the
    density diverges like x^(-1/2); x = 0 returns an infinity sentinel
    that grid builders must reject rather than silently propagate NaN.
    """
    x = float(x)
    a, b = p.support
    if x == 0.0 and a == 0.0:
        return math.inf
    if x <= a or x >= b:
        return 0.0
    return math.sqrt((b - x) * (x - a)) / (2 * math.pi * p.c * x * p.scale)


def zero_atom_mass(c: float) -> float:
    """Mass of the point mass at zero in the limiting law: max(0, 1 - 1/c)."""
    if not (c > 0):
        raise ValueError(f"aspect ratio c must be > 0, got {c}")
    return max(0.0, 1.0 - 1.0 / c)
