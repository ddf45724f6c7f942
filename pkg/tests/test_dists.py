import json
import math

import numpy as np
import pytest

from bifrac import (
    DiscreteDist,
    NonFiniteError,
    dist_from_json,
    dist_to_json,
    expect,
    expect_pair,
    normal_sampler,
    tail_functional,
)
from bifrac.errors import NegativeArgumentError

from _support import random_dist


class TestConstruction:
    def test_canonical_order_and_merge(self):
        d = DiscreteDist([(2.0, 0.25), (-1.0, 0.5), (2.0, 0.25)])
        assert d.values() == (-1.0, 2.0)
        assert d.probs() == (0.5, 0.5)

    def test_rejects_nonpositive_prob(self):
        with pytest.raises(ValueError):
            DiscreteDist([(0.0, 0.0), (1.0, 1.0)])
        with pytest.raises(ValueError):
            DiscreteDist([(0.0, -0.5), (1.0, 1.5)])

    def test_rejects_bad_total(self):
        with pytest.raises(ValueError):
            DiscreteDist([(0.0, 0.5), (1.0, 0.6)])

    def test_rejects_nonfinite(self):
        with pytest.raises(NonFiniteError):
            DiscreteDist([(math.nan, 1.0)])
        with pytest.raises(NonFiniteError):
            DiscreteDist([(0.0, math.inf)])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            DiscreteDist([])

    def test_accepts_tolerated_total_and_renormalizes(self):
        d = DiscreteDist([(0.0, 0.5 + 4e-13), (1.0, 0.5)])
        from bifrac.dists import neumaier_sum

        assert neumaier_sum(d.probs()) == 1.0

    def test_renormalization_idempotent(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            d1 = random_dist(rng)
            d2 = DiscreteDist(d1.atoms)
            assert d1.atoms == d2.atoms

    def test_renormalization_idempotent_adversarial(self):
        for n in (2, 3, 7, 10, 40):
            d1 = DiscreteDist([(float(i), 1.0 / n) for i in range(n)])
            d2 = DiscreteDist(d1.atoms)
            assert d1.atoms == d2.atoms


class TestExpect:
    def test_identity(self):
        d = DiscreteDist([(0.0, 0.5), (1.0, 0.5)])
        assert expect(d, lambda x: x) == 0.5

    def test_degenerate_abs_power(self):
        d = DiscreteDist([(-2.5, 1.0)])
        assert expect(d, lambda x: abs(x) ** 1.7) == abs(-2.5) ** 1.7

    def test_odd_symmetry(self):
        d = DiscreteDist([(-1.0, 0.5), (1.0, 0.5)])
        assert expect(d, lambda x: x**3) == 0.0

    def test_nonfinite_raises(self):
        d = DiscreteDist([(0.0, 0.5), (1.0, 0.5)])
        with pytest.raises(NonFiniteError):
            expect(d, lambda x: math.inf)


class TestExpectPair:
    def test_abs_sum(self):
        d = DiscreteDist([(0.0, 0.5), (1.0, 0.5)])
        # oracle: fsum over the 4 explicit pairs
        oracle = math.fsum(
            p1 * p2 * abs(x1 + x2) for x1, p1 in d.atoms for x2, p2 in d.atoms
        )
        assert oracle == 1.0
        assert expect_pair(d, lambda u, v: abs(u + v)) == oracle

    def test_abs_diff(self):
        d = DiscreteDist([(0.0, 0.5), (1.0, 0.5)])
        oracle = math.fsum(
            p1 * p2 * abs(x1 - x2) for x1, p1 in d.atoms for x2, p2 in d.atoms
        )
        assert oracle == 0.5
        assert expect_pair(d, lambda u, v: abs(u - v)) == oracle

    def test_total_mass(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            d = random_dist(rng)
            assert abs(expect_pair(d, lambda u, v: 1.0) - 1.0) < 1e-14

    def test_product_distribution_oracle(self):
        # expect_pair must agree with the expectation over the explicitly
        # enumerated product law, summed independently by fsum.
        rng = np.random.default_rng(9)
        for _ in range(200):
            d = random_dist(rng)
            for g in (
                lambda u, v: abs(u + v) ** 1.3,
                lambda u, v: abs(u - v),
                lambda u, v: u * v,
            ):
                product_atoms = [
                    (p1 * p2, g(x1, x2)) for x1, p1 in d.atoms for x2, p2 in d.atoms
                ]
                oracle = math.fsum(w * val for w, val in product_atoms)
                scale = math.fsum(abs(w * val) for w, val in product_atoms)
                assert abs(expect_pair(d, g) - oracle) <= 1e-14 * max(scale, 1.0)


class TestTailFunctional:
    def test_basic(self):
        d = DiscreteDist([(0.0, 0.5), (1.0, 0.5)])
        # oracle: P(X > 0.5) = 0.5, P(X < -0.5) = 0
        assert tail_functional(d, 0.5) == 0.5

    def test_symmetric_law_vanishes(self):
        d = DiscreteDist([(-1.0, 0.5), (1.0, 0.5)])
        for r in (0.0, 0.3, 1.0, 2.0):
            assert tail_functional(d, r) == 0.0

    def test_beyond_support(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            d = random_dist(rng)
            r = max(abs(x) for x in d.values()) + 1.0
            assert tail_functional(d, r) == 0.0

    def test_negative_r_rejected(self):
        with pytest.raises(NegativeArgumentError):
            tail_functional(DiscreteDist([(1.0, 1.0)]), -0.1)

    def test_piecewise_structure(self):
        # Constant on each interval between consecutive distinct |x|,
        # so the function takes (number of distinct |x|) + 1 pieces.
        rng = np.random.default_rng(11)
        for _ in range(50):
            d = random_dist(rng)
            breaks = sorted({abs(x) for x in d.values()})
            points = [0.0] + [b for b in breaks if b > 0]
            for lo, hi in zip(points, points[1:]):
                v_lo = tail_functional(d, lo)
                mid = lo + 0.5 * (hi - lo)
                assert tail_functional(d, mid) == v_lo
            assert tail_functional(d, points[-1]) == 0.0


class TestSamplers:
    def test_discrete_sampler_deterministic(self):
        d = DiscreteDist([(-1.0, 0.25), (0.0, 0.25), (3.0, 0.5)])
        s = d.sampler()
        draws1 = s.draw(np.random.Generator(np.random.Philox(5)), 1000)
        draws2 = s.draw(np.random.Generator(np.random.Philox(5)), 1000)
        assert np.array_equal(draws1, draws2)
        assert set(np.unique(draws1)) <= {-1.0, 0.0, 3.0}

    def test_discrete_sampler_frequencies(self):
        d = DiscreteDist([(0.0, 0.25), (1.0, 0.75)])
        s = d.sampler()
        draws = s.draw(np.random.Generator(np.random.Philox(6)), 100_000)
        assert abs(draws.mean() - 0.75) < 0.01

    def test_normal_sampler(self):
        s = normal_sampler()
        assert s.moment_hint == math.inf
        draws = s.draw(np.random.Generator(np.random.Philox(7)), 100_000)
        assert abs(draws.mean()) < 0.02
        assert abs(draws.std() - 1.0) < 0.02


class TestJson:
    def test_round_trip(self):
        d = DiscreteDist([(-3.0, 0.125), (0.5, 0.875)])
        assert dist_from_json(dist_to_json(d)) == d

    def test_round_trip_through_text(self):
        d = DiscreteDist([(-3.0, 0.125), (0.5, 0.875)])
        assert dist_from_json(json.loads(json.dumps(dist_to_json(d)))) == d

    def test_rejects_duplicate_x(self):
        with pytest.raises(ValueError):
            dist_from_json({"atoms": [{"x": 1.0, "p": 0.5}, {"x": 1.0, "p": 0.5}]})

    def test_rejects_nonpositive_p(self):
        with pytest.raises(ValueError):
            dist_from_json({"atoms": [{"x": 0.0, "p": 0.0}, {"x": 1.0, "p": 1.0}]})

    def test_rejects_bad_total(self):
        with pytest.raises(ValueError):
            dist_from_json({"atoms": [{"x": 0.0, "p": 0.5}, {"x": 1.0, "p": 0.5 + 1e-9}]})

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            dist_from_json({"nope": []})
        with pytest.raises(ValueError):
            dist_from_json({"atoms": []})
        with pytest.raises(ValueError):
            dist_from_json({"atoms": [{"x": 1.0}]})
