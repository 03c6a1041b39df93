import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_tail
from unimodal_bounds import (
    MomentKind,
    OracleConfig,
    SymmetricUniformMixture,
    markov_asym_bound,
    mixture_moment,
    mixture_tail,
    sample_mixture,
    semenikhin_bound,
    sharpness_report,
    two_atom_oracle,
)
from unimodal_bounds.errors import HorizonHit, NotCanonical
from unimodal_bounds.rng import LANES, XorShift64Star, splitmix64
from unimodal_bounds.suites import canonical_grid, random_unit_mixture
from unimodal_bounds.verify import (
    atom_weights,
    format_report,
    format_value,
    latent_moment,
    latent_moment_target,
    latent_pivot,
    oracle_search,
    parse_report,
)

SQRT3 = math.sqrt(3.0)
SECOND, FIRST = MomentKind.SECOND, MomentKind.FIRST_ABSOLUTE
MASK = (1 << 64) - 1


class TestMixtureCalculus:
    def test_uniform_two(self):
        assert mixture_tail(SymmetricUniformMixture.uniform(2.0), 1, 1) == 0.5

    def test_with_mode_atom(self):
        mix = SymmetricUniformMixture.build([(4.5, 2 / 4.5)])
        assert mixture_tail(mix, 1.5, 3) == pytest.approx(1 / 4.5, abs=1e-15)

    def test_beyond_support(self):
        mix = SymmetricUniformMixture.build([(1.0, 0.3), (2.5, 0.5)])
        assert mixture_tail(mix, 2.5, 7.0) == 0.0

    def test_moments(self):
        assert mixture_moment(SymmetricUniformMixture.uniform(SQRT3), SECOND) == pytest.approx(1.0, abs=1e-15)
        assert mixture_moment(SymmetricUniformMixture.uniform(2.0), FIRST) == 1.0
        assert mixture_moment(SymmetricUniformMixture.build([(3.0, 1 / 3)]), SECOND) == pytest.approx(1.0)

    def test_one_sided(self):
        mix = SymmetricUniformMixture.uniform(2.0, side="lower")
        assert mixture_tail(mix, 1.0, 0.5) == 0.5
        assert brute_tail(mix, 1.0, 0.5) == pytest.approx(0.5)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.tuples(st.floats(0.1, 5.0), st.floats(0.05, 1.0)), min_size=1, max_size=3),
        st.floats(0.01, 6.0),
        st.floats(0.01, 6.0),
    )
    def test_tail_matches_quadrature(self, parts, a, b):
        widths = sorted({round(c, 6) for c, _ in parts})
        ws = np.array([w for _, w in parts[: len(widths)]])
        mix = SymmetricUniformMixture.build(list(zip(widths, (0.9 * ws / ws.sum()).tolist())))
        u, v = min(a, b), max(a, b)
        assert mixture_tail(mix, u, v) == pytest.approx(brute_tail(mix, u, v), abs=1e-9)


class TestKhintchineHelpers:
    def test_targets(self):
        assert latent_moment_target(SECOND) == 3.0 and latent_moment_target(FIRST) == 2.0
        assert latent_moment(latent_pivot(SECOND), SECOND) == pytest.approx(3.0)
        assert latent_moment(latent_pivot(FIRST), FIRST) == 2.0

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(1.0, 40.0), st.sampled_from([SECOND, FIRST]))
    def test_weights_feasible(self, f1, f2, f3, kind):
        # any pair straddling the pivot gets an exact moment-matching weight in [0, 1]
        pivot = latent_pivot(kind)
        y1 = f1 * pivot
        y2 = pivot + f2 * (f3 * pivot - pivot)
        p = float(atom_weights(y1, y2, kind))
        assert 0.0 <= p <= 1.0
        if y2 > y1:
            m = p * latent_moment(y1, kind) + (1 - p) * latent_moment(y2, kind)
            assert m == pytest.approx(latent_moment_target(kind), rel=1e-12)


class TestOracle:
    def test_gauss_point(self):
        assert two_atom_oracle(1, 1, SECOND) == pytest.approx(1 - 1 / SQRT3, abs=5e-4)

    def test_a3_point(self):
        assert two_atom_oracle(1.5, 3, FIRST) == pytest.approx(1 / 4.5, abs=5e-4)

    def test_far_point(self):
        assert two_atom_oracle(100, 100, SECOND) == pytest.approx(4 / 9 * 1e-4, rel=1e-3)

    def test_result_is_feasible(self):
        res = oracle_search(0.5, 2.0, SECOND)
        m = res.low_weight * res.low_atom**2 + (1 - res.low_weight) * res.high_atom**2
        assert m == pytest.approx(3.0, rel=1e-12)
        assert 0 <= res.low_weight <= 1

    def test_horizon_hit(self):
        class Tight(OracleConfig):
            def horizon(self, u, v, kind):
                return 3.02

        with pytest.raises(HorizonHit):
            two_atom_oracle(2, 6, SECOND, Tight())

    def test_limit_below_requirement(self):
        with pytest.raises(ValueError):
            two_atom_oracle(2, 6, SECOND, OracleConfig(atom_upper_limit=5.0))

    def test_explicit_limit(self):
        assert two_atom_oracle(2, 6, SECOND, OracleConfig(atom_upper_limit=50.0)) == pytest.approx(1 / 18, abs=5e-4)

    @pytest.mark.parametrize("kwargs", [{"grid_points_per_axis": 10}, {"refine_iterations": 1}, {"tolerance": 0.0}])
    def test_config_validation(self, kwargs):
        with pytest.raises(ValueError):
            OracleConfig(**kwargs)

    def test_not_canonical(self):
        with pytest.raises(NotCanonical):
            two_atom_oracle(2, 1, SECOND)

    def test_never_beats_second_moment_bound(self):
        cfg = OracleConfig(grid_points_per_axis=128, refine_iterations=3)
        for u, v in canonical_grid(10, 4.0):
            assert two_atom_oracle(u, v, SECOND, cfg) <= semenikhin_bound(u, v).bound + 1e-9

    def test_never_beats_first_moment_bound_for_u_at_least_one(self):
        # below u = 1 the first-moment closed form is known to be beaten (see test_asymmetric)
        cfg = OracleConfig(grid_points_per_axis=128, refine_iterations=3)
        for u, v in canonical_grid(10, 4.0):
            if u >= 1.0:
                assert two_atom_oracle(u, v, FIRST, cfg) <= markov_asym_bound(u, v).bound + 1e-9


def reference_stream(seed, n):
    """Scalar re-implementation of the lane-interleaved xorshift64* stream."""
    sm, lanes = seed & MASK, []
    for _ in range(LANES):
        sm, z = splitmix64(sm)
        lanes.append(z or 1)
    out = []
    while len(out) < n:
        for i in range(LANES):
            x = lanes[i]
            x ^= x >> 12
            x ^= (x << 25) & MASK
            x ^= x >> 27
            lanes[i] = x
            out.append((x * 0x2545F4914F6CDD1D) & MASK)
    return out[:n]


class TestRng:
    def test_splitmix_known_value(self):
        # first output of splitmix64 seeded with 0
        assert splitmix64(0)[1] == 0xE220A8397B1DCDAF

    def test_matches_scalar_reference(self):
        rng = XorShift64Star(42)
        got = np.concatenate([rng.integers(7), rng.integers(3000), rng.integers(1)])
        assert got.tolist() == reference_stream(42, 3008)

    def test_doubles_in_unit_interval(self):
        x = XorShift64Star(1).random(10_000)
        assert x.min() >= 0.0 and x.max() < 1.0
        assert abs(x.mean() - 0.5) < 0.01

    def test_deterministic(self):
        assert np.array_equal(XorShift64Star(9).random(100), XorShift64Star(9).random(100))
        assert not np.array_equal(XorShift64Star(9).random(100), XorShift64Star(10).random(100))


class TestSampling:
    def test_uniform_large_sample(self):
        freq, se = sample_mixture(SymmetricUniformMixture.uniform(2.0), 1_000_000, 3)(1, 1)
        assert abs(freq - 0.5) <= 3 * se

    def test_single_draw(self):
        freq, _ = sample_mixture(SymmetricUniformMixture.uniform(2.0), 1, 5)(1, 1)
        assert freq in (0.0, 1.0)

    def test_all_mass_at_mode(self):
        mix = SymmetricUniformMixture(components=(), zero_mass=1.0)
        assert sample_mixture(mix, 1000, 1)(0.1, 0.1) == (0.0, 0.0)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            sample_mixture(SymmetricUniformMixture.uniform(1.0), 0, 1)

    def test_deterministic(self):
        mix = SymmetricUniformMixture.build([(1.0, 0.4), (3.0, 0.3)])
        assert sample_mixture(mix, 5000, 11)(0.5, 1.5) == sample_mixture(mix, 5000, 11)(0.5, 1.5)

    def test_lower_side_sampler(self):
        mix = SymmetricUniformMixture.uniform(2.0, side="lower")
        freq, se = sample_mixture(mix, 200_000, 2)(1.0, 0.5)
        assert abs(freq - 0.5) <= 4 * se

    @pytest.mark.slow
    def test_closed_form_agrees_with_sampling(self):
        rng = XorShift64Star(2024)
        for case in range(50):
            kind = SECOND if case % 2 else FIRST
            mix = random_unit_mixture(rng, kind)
            u, v = sorted(rng.uniform(0.05, 4.0, 2).tolist())
            freq, se = sample_mixture(mix, 1_000_000, case)(u, v)
            assert abs(mixture_tail(mix, u, v) - freq) <= 4 * se + 1e-12


class TestSharpnessReport:
    @pytest.mark.parametrize(
        "u, v, kind, expected",
        [(2, 6, SECOND, 1 / 18), (1, 1, FIRST, 0.5), (0.5, 2, SECOND, 0.36493)],
    )
    def test_examples(self, u, v, kind, expected):
        rep = sharpness_report(u, v, kind)
        assert rep.passed
        for value in (rep.closed_form_bound, rep.extremal_tail, rep.oracle_value):
            assert value == pytest.approx(expected, abs=5e-4)
        assert rep.extremal_moment == pytest.approx(1.0, abs=1e-12)

    def test_report_round_trip(self):
        rep = sharpness_report(2, 6, SECOND)
        parsed = parse_report(format_report(rep.items()))
        assert parsed["status"] == "PASS" and parsed["region"] == "S3"
        assert float(parsed["closed_form_bound"]) == rep.closed_form_bound


class TestFormatting:
    def test_values(self):
        assert format_value(True) == "true"
        assert format_value(math.inf) == "inf"
        assert format_value(0.1) == "0.10000000000000001"
        assert format_value("S3") == "S3"

    @settings(max_examples=200)
    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_float_round_trip(self, x):
        assert float(format_value(x)) == x

    def test_parse_skips_comments(self):
        assert parse_report("# note\na=1\nb=x=y\n") == {"a": "1", "b": "x=y"}
