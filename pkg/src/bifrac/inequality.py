"""The moment gap E|X+Y|**alpha - E|X-Y|**alpha for i.i.d. X, Y, by four
independent routes.

* exact     -- product double sum over a finite discrete law (any alpha > 0)
* tail      -- alpha = 1 only: 2 * integral of [P(X>r) - P(X<-r)]**2 dr,
               evaluated exactly by breakpoint partition
* variance  -- alpha in (0, 2]: the gap equals 2**alpha times the variance
               of the Gaussian functional built from the (1/2, alpha)
               kernel, so it is a sum of kernel evaluations
* mc        -- paired Monte Carlo estimate for arbitrary samplers

For alpha in (0, 2] the gap is nonnegative; the exact and variance routes
assert this up to a floating tolerance and raise InequalityViolationError
if it fails, since that indicates a defect rather than mathematics.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._rng import substream
from .dists import DiscreteDist, Sampler, expect_pair, neumaier_sum, tail_functional
from .errors import (
    InequalityViolationError,
    InsufficientSamplesError,
    NonFiniteError,
    OutOfDomainError,
)
from .kernel import cov, sgn, validate_params

__all__ = [
    "GapReport",
    "SupnormBound",
    "gap_exact",
    "gap_tail_integral",
    "gap_via_variance",
    "gap_mc",
    "supnorm_bound",
]

MC_CHUNK = 1 << 16

_NONNEG_TOL = 1e-12


@dataclass(frozen=True)
class GapReport:
    """The pair (E|X+Y|**alpha, E|X-Y|**alpha) and their gap.

    ``gap`` is always recomputed as ``e_plus - e_minus`` at construction,
    so that identity holds bit-exactly for every route.  ``alpha`` is None
    for reports produced by the Bernstein-function generalization.  ``n``
    and ``stderr`` are set only by the Monte Carlo route.
    """

    alpha: float | None
    e_plus: float
    e_minus: float
    route: str
    n: int | None = None
    stderr: float | None = None
    gap: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "gap", self.e_plus - self.e_minus)

    def as_json_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "e_plus": self.e_plus,
            "e_minus": self.e_minus,
            "gap": self.gap,
            "route": self.route,
        }
        if self.route == "mc":
            out["n"] = self.n
            out["stderr"] = self.stderr
        return out


class SupnormBound(NamedTuple):
    m_lo: float
    m_hi: float
    lhs: float
    rhs: float


def _check_nonneg(value: float, scale: float, what: str) -> None:
    if value < -_NONNEG_TOL * scale:
        raise InequalityViolationError(
            f"{what} = {value!r} below -{_NONNEG_TOL:g} * scale (scale = {scale!r})"
        )


def gap_exact(d: DiscreteDist, alpha: float) -> GapReport:
    """Exact gap by the double sum over atom pairs.

    alpha may exceed 2 (the violation search reuses this engine); the
    nonnegativity assertion applies only for alpha in (0, 2].
    """
    if not alpha > 0:
        raise OutOfDomainError("alpha > 0")
    sp = cp = sm = cm = 0.0
    atoms = d.atoms
    for xi, pi in atoms:
        for xj, pj in atoms:
            w = pi * pj
            ap = abs(xi + xj) ** alpha
            am = abs(xi - xj) ** alpha
            if math.isinf(ap) or math.isinf(am):
                raise NonFiniteError(f"|x|**alpha overflowed at ({xi}, {xj}), alpha={alpha}")
            v = w * ap
            t = sp + v
            if abs(sp) >= abs(v):
                cp += (sp - t) + v
            else:
                cp += (v - t) + sp
            sp = t
            v = w * am
            t = sm + v
            if abs(sm) >= abs(v):
                cm += (sm - t) + v
            else:
                cm += (v - t) + sm
            sm = t
    e_plus = sp + cp
    e_minus = sm + cm
    report = GapReport(alpha=alpha, e_plus=e_plus, e_minus=e_minus, route="exact")
    if alpha <= 2:
        _check_nonneg(report.gap, e_plus + e_minus, "exact gap")
    return report


def gap_tail_integral(d: DiscreteDist) -> GapReport:
    """alpha = 1 gap from the squared tail functional.

    For a finite law the integrand [P(X>r) - P(X<-r)]**2 is piecewise
    constant with breakpoints at the distinct |x_i|, so the integral is a
    finite exact sum of interval length times squared value.
    """
    abs_vals = sorted({abs(x) for x, _ in d.atoms})
    points = [0.0] + [b for b in abs_vals if b > 0.0]
    terms = []
    for bk, bk1 in zip(points, points[1:]):
        tv = tail_functional(d, bk)
        terms.append((bk1 - bk) * tv * tv)
    gap = 2.0 * neumaier_sum(terms)
    e_plus = expect_pair(d, lambda u, v: abs(u + v))
    return GapReport(alpha=1.0, e_plus=e_plus, e_minus=e_plus - gap, route="tail")


def gap_via_variance(d: DiscreteDist, alpha: float) -> GapReport:
    """Gap reconstructed as 2**alpha times the variance of the kernel
    functional sum p_i * sgn(x_i) * B_{|x_i|} for the (1/2, alpha) process.

    The variance is the double sum of p_i p_j cov(|x_i|, |x_j|) sgn sgn;
    it must be nonnegative, which is exactly why the gap is.
    """
    if not 0 < alpha <= 2:
        raise OutOfDomainError("0 < alpha <= 2")
    params = validate_params(0.5, alpha)
    atoms = d.atoms
    abss = [abs(x) for x, _ in atoms]
    signs = [sgn(x) for x, _ in atoms]
    var = cv = 0.0
    scale = cs = 0.0
    n = len(atoms)
    for i in range(n):
        pi = atoms[i][1]
        ai = abss[i]
        gi = signs[i]
        for j in range(n):
            kij = cov(params, ai, abss[j])
            mag = pi * atoms[j][1] * kij
            v = mag * gi * signs[j]
            t = var + v
            if abs(var) >= abs(v):
                cv += (var - t) + v
            else:
                cv += (v - t) + var
            var = t
            u = abs(mag)
            t = scale + u
            if abs(scale) >= abs(u):
                cs += (scale - t) + u
            else:
                cs += (u - t) + scale
            scale = t
    var += cv
    scale += cs
    _check_nonneg(var, scale, "Var of kernel functional")
    gap = 2.0**alpha * var
    e_plus = expect_pair(d, lambda u, v: abs(u + v) ** alpha)
    return GapReport(alpha=alpha, e_plus=e_plus, e_minus=e_plus - gap, route="variance")


def _mc_chunk(s: Sampler, alpha: float, seed: int, chunk: int, size: int):
    x = s.draw(substream(seed, 0, chunk), size)
    y = s.draw(substream(seed, 1, chunk), size)
    ap = np.abs(x + y) ** alpha
    am = np.abs(x - y) ** alpha
    dv = ap - am
    return float(np.sum(ap)), float(np.sum(am)), float(np.sum(dv)), float(np.sum(dv * dv))


def gap_mc(s: Sampler, alpha: float, n: int, seed: int, workers: int = 1) -> GapReport:
    """Paired Monte Carlo estimate of the gap.

    Both means are taken over the same n pairs (X_k, Y_k), drawn from two
    independent substreams of ``seed``; ``stderr`` is the sample standard
    error of the per-pair difference.  Work is split into fixed-size
    chunks reduced in index order, so the estimate does not depend on
    ``workers``.
    """
    if not 0 < alpha <= 2:
        raise OutOfDomainError("0 < alpha <= 2")
    if n < 2:
        raise InsufficientSamplesError(f"need n >= 2 pairs, got {n}")
    if s.moment_hint is not None and alpha > s.moment_hint:
        raise ValueError(
            f"sampler only asserts finite moments up to order {s.moment_hint}, got alpha={alpha}"
        )
    sizes = [min(MC_CHUNK, n - start) for start in range(0, n, MC_CHUNK)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(
                pool.map(lambda c: _mc_chunk(s, alpha, seed, c, sizes[c]), range(len(sizes)))
            )
    else:
        partials = [_mc_chunk(s, alpha, seed, c, size) for c, size in enumerate(sizes)]
    sum_p = neumaier_sum(p[0] for p in partials)
    sum_m = neumaier_sum(p[1] for p in partials)
    sum_d = neumaier_sum(p[2] for p in partials)
    sum_d2 = neumaier_sum(p[3] for p in partials)
    var_d = max(0.0, (sum_d2 - sum_d * sum_d / n) / (n - 1))
    return GapReport(
        alpha=alpha,
        e_plus=sum_p / n,
        e_minus=sum_m / n,
        route="mc",
        n=n,
        stderr=math.sqrt(var_d / n),
    )


def supnorm_bound(d: DiscreteDist) -> SupnormBound:
    """Endpoint form of the gap inequality: the essential sup of |X-Y| is
    m_hi - m_lo, that of |X+Y| is 2*max(|m_hi|, |m_lo|), and the first
    never exceeds the second (equality iff the support endpoints mirror).
    """
    xs = d.values()
    m_lo = xs[0]
    m_hi = xs[-1]
    lhs = m_hi - m_lo
    rhs = 2.0 * max(abs(m_hi), abs(m_lo))
    if lhs > rhs:
        raise InequalityViolationError(f"sup-norm bound failed: {lhs!r} > {rhs!r}")
    return SupnormBound(m_lo=m_lo, m_hi=m_hi, lhs=lhs, rhs=rhs)
