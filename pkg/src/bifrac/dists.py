"""Finite discrete probability laws and seedable samplers.

DiscreteDist is the exact-computation workhorse: expectations are plain
weighted sums taken in a canonical (ascending-x) order with compensated
summation, so every result is reproducible to the bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NegativeArgumentError, NonFiniteError

__all__ = [
    "DiscreteDist",
    "Sampler",
    "expect",
    "expect_pair",
    "tail_functional",
    "neumaier_sum",
    "dist_from_json",
    "dist_to_json",
    "normal_sampler",
]

_SUM_TOL = 1e-12


def neumaier_sum(values) -> float:
    """Compensated (Neumaier) sum of an iterable of floats."""
    s = 0.0
    c = 0.0
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


class DiscreteDist:
    """Finite atomic law.  Atoms are (value, probability) pairs, canonically
    sorted ascending by value, duplicates merged, probabilities scaled so the
    compensated sum is exactly 1.0."""

    __slots__ = ("atoms",)

    def __init__(self, atoms: Sequence[tuple[float, float]]):
        merged: dict[float, float] = {}
        for x, p in atoms:
            x = float(x)
            p = float(p)
            if not math.isfinite(x):
                raise NonFiniteError(f"atom value {x} is not finite")
            if not math.isfinite(p):
                raise NonFiniteError(f"atom probability {p} is not finite")
            merged[x] = merged.get(x, 0.0) + p
        if not merged:
            raise ValueError("distribution needs at least one atom")
        xs = sorted(merged)
        ps = [merged[x] for x in xs]
        for p in ps:
            if p <= 0:
                raise ValueError(f"atom probabilities must be > 0, got {p}")
        total = neumaier_sum(ps)
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities must sum to 1 within {_SUM_TOL}, got {total!r}")
        if total != 1.0:
            ps = [p / total for p in ps]
        # Fixpoint cleanup: nudge the heaviest atom until the compensated sum
        # is exactly 1.0, so reconstruction from .atoms is a no-op.
        for _ in range(32):
            total = neumaier_sum(ps)
            if total == 1.0:
                break
            k = max(range(len(ps)), key=ps.__getitem__)
            ps[k] += 1.0 - total
        self.atoms: tuple[tuple[float, float], ...] = tuple(zip(xs, ps))

    def __len__(self) -> int:
        return len(self.atoms)

    def __repr__(self) -> str:
        inner = ", ".join(f"({x:g}, {p:g})" for x, p in self.atoms)
        return f"DiscreteDist([{inner}])"

    def __eq__(self, other) -> bool:
        return isinstance(other, DiscreteDist) and self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash(self.atoms)

    def values(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.atoms)

    def probs(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.atoms)

    def scaled(self, c: float) -> "DiscreteDist":
        """The law of c*X."""
        return DiscreteDist([(c * x, p) for x, p in self.atoms])

    def sampler(self) -> "Sampler":
        xs = np.array(self.values(), dtype=np.float64)
        ps = np.array(self.probs(), dtype=np.float64)

        def draw(rng: np.random.Generator, size: int) -> np.ndarray:
            return rng.choice(xs, size=size, p=ps)

        return Sampler(draw=draw, moment_hint=math.inf)


@dataclass(frozen=True)
class Sampler:
    """Vectorized draw from an arbitrary law.

    ``draw(rng, size)`` must be a deterministic function of the generator
    state; all randomness flows through the explicit ``rng`` argument.
    ``moment_hint`` is the largest order alpha for which E|X|**alpha is
    known finite (math.inf when all moments exist).
    """

    draw: Callable[[np.random.Generator, int], np.ndarray]
    moment_hint: float | None = None


def normal_sampler() -> Sampler:
    """Standard normal sampler (all moments finite)."""
    return Sampler(draw=lambda rng, size: rng.standard_normal(size), moment_hint=math.inf)


def expect(d: DiscreteDist, f: Callable[[float], float]) -> float:
    """Sum p_i * f(x_i) in ascending-x order with compensated summation."""
    s = 0.0
    c = 0.0
    for x, p in d.atoms:
        fx = f(x)
        if not math.isfinite(fx):
            raise NonFiniteError(f"f({x}) = {fx}")
        v = p * fx
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def expect_pair(d: DiscreteDist, g: Callable[[float, float], float]) -> float:
    """Sum p_i * p_j * g(x_i, x_j) over the product law of two independent
    copies, fixed (i outer, j inner, both ascending) order, compensated."""
    s = 0.0
    c = 0.0
    atoms = d.atoms
    for xi, pi in atoms:
        for xj, pj in atoms:
            gx = g(xi, xj)
            if not math.isfinite(gx):
                raise NonFiniteError(f"g({xi}, {xj}) = {gx}")
            v = pi * pj * gx
            t = s + v
            if abs(s) >= abs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
    return s + c


def tail_functional(d: DiscreteDist, r: float) -> float:
    """P(X > r) - P(X < -r) for r >= 0, exact from atom mass.

    Right-continuous and piecewise constant in r, with breakpoints at the
    distinct absolute atom values.
    """
    if r < 0:
        raise NegativeArgumentError(f"r must be >= 0, got {r}")
    upper = neumaier_sum(p for x, p in d.atoms if x > r)
    lower = neumaier_sum(p for x, p in d.atoms if x < -r)
    return upper - lower


def dist_from_json(obj) -> DiscreteDist:
    """Parse ``{"atoms":[{"x":..,"p":..},...]}``.

    Rejects duplicate x, nonpositive p and |sum(p) - 1| > 1e-12.
    """
    if not isinstance(obj, dict) or "atoms" not in obj:
        raise ValueError('distribution JSON must be an object with an "atoms" list')
    raw = obj["atoms"]
    if not isinstance(raw, list) or not raw:
        raise ValueError('"atoms" must be a nonempty list')
    pairs = []
    seen = set()
    for entry in raw:
        if not isinstance(entry, dict) or "x" not in entry or "p" not in entry:
            raise ValueError('each atom must be an object with "x" and "p"')
        x = float(entry["x"])
        p = float(entry["p"])
        if x in seen:
            raise ValueError(f"duplicate atom value {x!r}")
        seen.add(x)
        if not p > 0:
            raise ValueError(f"atom probability must be > 0, got {p!r}")
        pairs.append((x, p))
    total = neumaier_sum(p for _, p in pairs)
    if abs(total - 1.0) > _SUM_TOL:
        raise ValueError(f"atom probabilities must sum to 1 within {_SUM_TOL}, got {total!r}")
    return DiscreteDist(pairs)


def dist_to_json(d: DiscreteDist) -> dict:
    return {"atoms": [{"x": x, "p": p} for x, p in d.atoms]}
