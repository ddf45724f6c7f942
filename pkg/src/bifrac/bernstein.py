"""Finite-atom Bernstein functions and the F(lam) = G(lam**2) gap machinery.

A Bernstein function here is

    G(lam) = a + b*lam + sum_i w_i * (1 - exp(-t_i * lam)),   a, b >= 0,

with a finite atomic measure (t_i > 0, w_i > 0).  The induced F(lam) =
G(lam**2) satisfies E F(|X-Y|) <= E F(|X+Y|) for i.i.d. X, Y.  The gap
decomposes over the representation: the constant contributes nothing, the
linear part contributes b times the alpha = 2 moment gap, and each measure
atom contributes the elementary gap

    E[exp(-t (X-Y)**2) - exp(-t (X+Y)**2)]
        = 2 * sum_{n>=0} (2t)**(2n+1) / (2n+1)! * E(X**(2n+1) e**(-t X**2))**2,

a series of squares, hence nonnegative term by term.  The series evaluator
below keeps the odd moments in a rescaled form (atom states carry their
exp(-t x**2) damping and powers of |x|/max|x| accumulated multiplicatively)
so intermediates stay inside floating range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .dists import DiscreteDist, expect_pair, neumaier_sum
from .errors import InequalityViolationError, NegativeArgumentError, NonFiniteError
from .inequality import GapReport

__all__ = [
    "BernsteinFn",
    "SeriesResult",
    "IdentityCheck",
    "eval_g",
    "eval_f",
    "bernstein_gap_exact",
    "elementary_gap_series",
    "series_identity_check",
    "bernstein_from_json",
    "bernstein_to_json",
]

# Beyond this value of 2*t*max|x|**2 the dominating coefficients
# 2*z**(2n+1)/(2n+1)! leave double range near their peak (~e**z).
_Z_LIMIT = 650.0

_STOP_ABS = 1e-16
_MAX_TERMS = 100_000


@dataclass(frozen=True)
class BernsteinFn:
    """Triple (a, b, mu) with mu a finite atomic measure on (0, inf)."""

    a: float
    b: float
    mu: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        a = float(self.a)
        b = float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise NonFiniteError(f"a, b must be finite, got ({a}, {b})")
        if a < 0 or b < 0:
            raise ValueError(f"a, b must be >= 0, got ({a}, {b})")
        atoms = []
        for t, w in self.mu:
            t = float(t)
            w = float(w)
            if not (math.isfinite(t) and math.isfinite(w)):
                raise NonFiniteError(f"measure atom ({t}, {w}) is not finite")
            if t <= 0:
                raise ValueError(f"measure atom location must be > 0, got {t}")
            if w <= 0:
                raise ValueError(f"measure atom weight must be > 0, got {w}")
            atoms.append((t, w))
        atoms.sort()
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "mu", tuple(atoms))


class SeriesResult(NamedTuple):
    value: float
    truncation_bound: float
    n_terms: int


class IdentityCheck(NamedTuple):
    lhs: float
    rhs_partial: float
    remainder_bound: float


def eval_g(g: BernsteinFn, lam: float) -> float:
    """G(lam) for lam >= 0; nondecreasing, G(0) = a."""
    if lam < 0:
        raise NegativeArgumentError(f"lam must be >= 0, got {lam}")
    return math.fsum(
        [g.a, g.b * lam] + [w * (1.0 - math.exp(-t * lam)) for t, w in g.mu]
    )


def eval_f(g: BernsteinFn, lam: float) -> float:
    """F(lam) = G(lam**2) for lam >= 0."""
    if lam < 0:
        raise NegativeArgumentError(f"lam must be >= 0, got {lam}")
    return eval_g(g, lam * lam)


def bernstein_gap_exact(d: DiscreteDist, g: BernsteinFn) -> GapReport:
    """E F(|X+Y|) - E F(|X-Y|) by the exact double sum; must be >= 0."""
    e_plus = expect_pair(d, lambda u, v: eval_f(g, abs(u + v)))
    e_minus = expect_pair(d, lambda u, v: eval_f(g, abs(u - v)))
    report = GapReport(alpha=None, e_plus=e_plus, e_minus=e_minus, route="exact")
    scale = e_plus + e_minus
    if report.gap < -1e-12 * scale:
        raise InequalityViolationError(
            f"Bernstein gap {report.gap!r} below -1e-12 * scale (scale = {scale!r})"
        )
    return report


def elementary_gap_series(
    d: DiscreteDist, t: float, n_terms: int | None = None
) -> SeriesResult:
    """Series evaluation of the elementary gap for one measure atom t.

    Terms are c_n * S_n**2 with c_n = 2*(2t)**(2n+1)/(2n+1)! and S_n the
    odd damped moment E(X**(2n+1) e**(-t X**2)); every term is >= 0 so the
    partial sums are nondecreasing.

    If ``n_terms`` is None the stopping rule is used: stop once the
    dominating coefficient of the next term falls below 1e-16 and the
    coefficient ratio is below 1/2.  ``truncation_bound`` is the tail of
    the dominating series (first omitted coefficient summed geometrically);
    it is a rigorous remainder bound because |S_n| <= max|x|**(2n+1).

    Raises
    ------
    OverflowError
        If 2*t*max|x|**2 is so large that the dominating coefficients
        leave floating range even after rescaling.
    """
    if t <= 0:
        raise ValueError(f"t must be > 0, got {t}")
    if n_terms is not None and n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    x_max = max(abs(x) for x, _ in d.atoms)
    if x_max == 0.0:
        return SeriesResult(value=0.0, truncation_bound=0.0, n_terms=n_terms or 1)
    z = 2.0 * t * x_max * x_max
    if z > _Z_LIMIT:
        raise OverflowError(
            f"2*t*max|x|**2 = {z:g} exceeds {_Z_LIMIT:g}; series coefficients overflow"
        )
    # Atom states p*sgn(x)*(|x|/x_max)**(2n+1)*exp(-t*x**2), advanced
    # multiplicatively; their fsum is the rescaled odd moment S_n.
    states = []
    ratios2 = []
    for x, p in d.atoms:
        rho = abs(x) / x_max
        states.append(p * math.copysign(rho, x) * math.exp(-t * x * x))
        ratios2.append(rho * rho)
    coef = 2.0 * z  # c_0 = 2*z/1!
    total = comp = 0.0
    n = 0
    while True:
        s_n = math.fsum(states)
        term = coef * s_n * s_n
        tt = total + term
        if abs(total) >= term:
            comp += (total - tt) + term
        else:
            comp += (term - tt) + total
        total = tt
        n += 1
        next_coef = coef * z * z / ((2.0 * n) * (2.0 * n + 1.0))
        if n_terms is not None:
            if n >= n_terms:
                break
        else:
            ratio = z * z / ((2.0 * n + 2.0) * (2.0 * n + 3.0))
            if ratio < 0.5 and next_coef < _STOP_ABS:
                break
            if n >= _MAX_TERMS:
                raise OverflowError(f"series did not satisfy stopping rule in {_MAX_TERMS} terms")
        coef = next_coef
        for i, r2 in enumerate(ratios2):
            states[i] *= r2
    ratio = z * z / ((2.0 * n + 2.0) * (2.0 * n + 3.0))
    bound = next_coef / (1.0 - ratio) if ratio < 1.0 else math.inf
    return SeriesResult(value=total + comp, truncation_bound=bound, n_terms=n)


def series_identity_check(x: float, y: float, t: float, n_terms: int) -> IdentityCheck:
    """Pointwise check of the product expansion

        exp(-t|x-y|**2) - exp(-t|x+y|**2)
            = 2*exp(-t x**2 - t y**2) * sum_n (2 t x y)**(2n+1) / (2n+1)!.

    Each summand is evaluated with its exp(-t x**2 - t y**2) prefactor
    folded in via logarithms, so no intermediate overflows regardless of
    magnitudes.  All summands share the sign of x*y, so the remainder
    bound is the first omitted summand summed geometrically (infinite when
    the term ratio is still >= 1 at the cutoff).
    """
    if t <= 0:
        raise ValueError(f"t must be > 0, got {t}")
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    lhs = math.exp(-t * (x - y) ** 2) - math.exp(-t * (x + y) ** 2)
    w = 2.0 * t * x * y
    if w == 0.0:
        return IdentityCheck(lhs=lhs, rhs_partial=0.0, remainder_bound=0.0)
    log_pref = math.log(2.0) - t * (x * x + y * y)
    log_w = math.log(abs(w))
    sign = 1.0 if w > 0 else -1.0
    terms = []
    for n in range(n_terms):
        log_term = log_pref + (2 * n + 1) * log_w - math.lgamma(2 * n + 2)
        terms.append(sign * math.exp(log_term))
    rhs_partial = math.fsum(terms)
    log_next = log_pref + (2 * n_terms + 1) * log_w - math.lgamma(2 * n_terms + 2)
    ratio = w * w / ((2.0 * n_terms + 2.0) * (2.0 * n_terms + 3.0))
    bound = math.exp(log_next) / (1.0 - ratio) if ratio < 1.0 else math.inf
    return IdentityCheck(lhs=lhs, rhs_partial=rhs_partial, remainder_bound=bound)


def bernstein_from_json(obj) -> BernsteinFn:
    """Parse ``{"a":..,"b":..,"mu":[{"t":..,"w":..},...]}``."""
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
        raise ValueError('Bernstein JSON must be an object with "a", "b" and optional "mu"')
    raw = obj.get("mu", [])
    if not isinstance(raw, list):
        raise ValueError('"mu" must be a list')
    mu = []
    for entry in raw:
        if not isinstance(entry, dict) or "t" not in entry or "w" not in entry:
            raise ValueError('each measure atom must be an object with "t" and "w"')
        mu.append((float(entry["t"]), float(entry["w"])))
    return BernsteinFn(a=float(obj["a"]), b=float(obj["b"]), mu=tuple(mu))


def bernstein_to_json(g: BernsteinFn) -> dict:
    return {"a": g.a, "b": g.b, "mu": [{"t": t, "w": w} for t, w in g.mu]}
