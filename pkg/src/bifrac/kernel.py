"""Bifractional Brownian motion covariance kernel.

The process indexed by ``(H, K)`` is a centered Gaussian process on t >= 0
with covariance

    R(t, s) = 2**(-K) * ((t**(2H) + s**(2H))**K - |t - s|**(2HK)).

It exists (the kernel is positive semi-definite) on the parameter domain

    D = {0 < H <= 1,  0 < K <= 2,  H*K <= 1},

and K = 1 reduces it to fractional Brownian motion with Hurst index H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    NegativeTimeError,
    NonFiniteError,
    OutOfDomainError,
)

__all__ = [
    "BifParams",
    "TimeGrid",
    "validate_params",
    "cov",
    "signed_identity_lhs",
    "sgn",
]


@dataclass(frozen=True)
class BifParams:
    """The (H, K) pair indexing a bifractional Brownian motion.

    Direct construction only enforces the structural constraints H > 0,
    K > 0 (the covariance formula needs positive exponents).  Use
    :func:`validate_params` to additionally enforce the existence domain
    ``D``; direct construction is the deliberate bypass used to evaluate
    the kernel outside ``D``, e.g. to exhibit non-PSD matrices.
    """

    H: float
    K: float

    def __post_init__(self):
        if not (math.isfinite(self.H) and math.isfinite(self.K)):
            raise NonFiniteError(f"H, K must be finite, got ({self.H}, {self.K})")
        if not self.H > 0:
            raise OutOfDomainError("H > 0")
        if not self.K > 0:
            raise OutOfDomainError("K > 0")

    @property
    def in_domain(self) -> bool:
        return self.H <= 1.0 and self.K <= 2.0 and self.H * self.K <= 1.0


def validate_params(H: float, K: float) -> BifParams:
    """Return BifParams iff (H, K) lies in the existence domain D.

    Raises
    ------
    NonFiniteError
        For NaN or infinite inputs.
    OutOfDomainError
        Naming the first violated bound among H > 0, H <= 1, K > 0,
        K <= 2, H*K <= 1.
    """
    H = float(H)
    K = float(K)
    if not (math.isfinite(H) and math.isfinite(K)):
        raise NonFiniteError(f"H, K must be finite, got ({H}, {K})")
    if not H > 0:
        raise OutOfDomainError("H > 0")
    if not H <= 1:
        raise OutOfDomainError("H <= 1")
    if not K > 0:
        raise OutOfDomainError("K > 0")
    if not K <= 2:
        raise OutOfDomainError("K <= 2")
    if not H * K <= 1:
        raise OutOfDomainError("H*K <= 1")
    return BifParams(H, K)


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing grid of nonnegative times."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(t) for t in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("grid must be nonempty")
        for t in pts:
            if not math.isfinite(t):
                raise NonFiniteError(f"grid point {t} is not finite")
        if pts[0] < 0:
            raise NegativeTimeError(f"grid points must be >= 0, got {pts[0]}")
        for a, b in zip(pts, pts[1:]):
            if not b > a:
                raise ValueError(f"grid must be strictly increasing, got {a} then {b}")

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> float:
        return self.points[i]

    @classmethod
    def regular(cls, start: float, step: float, count: int) -> "TimeGrid":
        """Grid start + i*step for i = 0..count-1 (index multiplication,
        never repeated addition)."""
        if count < 1:
            raise ValueError("count must be >= 1")
        return cls(tuple(start + i * step for i in range(count)))


def cov(p: BifParams, t: float, s: float) -> float:
    """Covariance R(t, s) of the process indexed by ``p`` at times t, s >= 0.

    The arguments are ordered (t >= s) before evaluation so symmetry holds
    bit-exactly, and the zero branches are explicit: cov(t, 0) = 0 and the
    |t-s| term vanishes exactly on the diagonal.
    """
    if not (math.isfinite(t) and math.isfinite(s)):
        raise NonFiniteError(f"times must be finite, got ({t}, {s})")
    if t < 0 or s < 0:
        raise NegativeTimeError(f"times must be >= 0, got ({t}, {s})")
    if s > t:
        t, s = s, t
    if s == 0.0:
        # (t**(2H))**K and t**(2HK) cancel exactly in the reals; return the
        # exact zero rather than their floating difference.
        return 0.0
    H = p.H
    K = p.K
    two_h = 2.0 * H
    sum_term = (t ** two_h + s ** two_h) ** K
    diff = t - s
    gap_term = 0.0 if diff == 0.0 else diff ** (two_h * K)
    return 2.0 ** (-K) * (sum_term - gap_term)


def sgn(x: float) -> float:
    """Sign of x with sgn(0) = 0."""
    if x > 0:
        return 1.0
    if x < 0:
        return -1.0
    return 0.0


def signed_identity_lhs(u: float, v: float, alpha: float) -> float:
    """|u+v|**alpha - |u-v|**alpha for real u, v and 0 < alpha <= 2.

    For all real u, v this equals 2**alpha * cov((1/2, alpha), |u|, |v|)
    * sgn(u) * sgn(v), which is the bridge between the moment gap and the
    kernel with H = 1/2, K = alpha.
    """
    if not (math.isfinite(u) and math.isfinite(v)):
        raise NonFiniteError(f"u, v must be finite, got ({u}, {v})")
    if not 0 < alpha <= 2:
        raise OutOfDomainError("0 < alpha <= 2")
    return abs(u + v) ** alpha - abs(u - v) ** alpha
