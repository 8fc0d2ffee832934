"""Functional constructors, evaluation, and exact local bounds."""

import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from bellcert import (
    CapExceededError,
    Scenario,
    ScenarioMismatchError,
    ValidationError,
    chained_correlator,
    chained_modular,
    chsh,
    correlator_terms,
    deterministic_behavior,
    evaluate,
    evaluate_on_strategy,
    from_correlator_terms,
    functional_from_dict,
    functional_to_dict,
    lifted_chsh_c,
    local_bound,
    mermin,
    tilted_chsh,
    uniform_behavior,
)


def all_strategies(scenario):
    per_party = [
        list(itertools.product(range(scenario.outcomes), repeat=m))
        for m in scenario.settings
    ]
    return itertools.product(*per_party)


class TestEvaluate:
    def test_chsh_on_uniform(self):
        assert evaluate(chsh(), uniform_behavior(Scenario((2, 2), 2))) == pytest.approx(0.0, abs=1e-15)

    def test_chsh_on_all_plus(self):
        b = deterministic_behavior(Scenario((2, 2), 2), ((0, 0), (0, 0)))
        assert evaluate(chsh(), b) == pytest.approx(2.0, abs=1e-15)

    def test_scenario_mismatch(self):
        with pytest.raises(ScenarioMismatchError):
            evaluate(chsh(), uniform_behavior(Scenario((2, 2, 2), 2)))

    def test_uniform_value_is_coefficient_mean(self):
        functionals = [
            chsh(),
            tilted_chsh(0.5),
            chained_modular(2, 3),
            chained_modular(3, 2),
            chained_correlator(3),
            mermin(3),
            mermin(4),
            lifted_chsh_c(),
        ]
        for f in functionals:
            mean = float(sum(f.coefficients.values())) / f.scenario.num_outcomes
            got = evaluate(f, uniform_behavior(f.scenario))
            assert got == pytest.approx(mean, abs=1e-12), f.name


class TestChsh:
    def test_local_bound(self):
        report = local_bound(chsh())
        assert report.bound == Fraction(2)
        assert report.maximizer_count == 8

    def test_equals_mermin_two(self):
        assert chsh().same_coefficients(mermin(2))

    def test_maximizers_attain_bound(self):
        report = local_bound(chsh())
        for strategy in report.maximizers:
            assert evaluate_on_strategy(chsh(), strategy) == report.bound


class TestTilted:
    def test_eta_zero_is_chsh(self):
        assert tilted_chsh(0.0).same_coefficients(chsh())

    def test_uniform_value(self):
        f = tilted_chsh(0.5)
        assert evaluate(f, uniform_behavior(f.scenario)) == pytest.approx(0.0, abs=1e-15)

    def test_local_bound(self):
        assert local_bound(tilted_chsh(0.5)).bound == Fraction(5, 2)

    def test_arbitrary_float_eta_is_exact(self):
        # every float is dyadic; the all-plus strategy scores exactly 2 + eta
        f = tilted_chsh(0.3)
        assert evaluate_on_strategy(f, ((0, 0), (0, 0))) == Fraction(2) + Fraction(0.3)


class TestChainedModular:
    @pytest.mark.parametrize("m,d", [(2, 3), (3, 2), (4, 2)])
    def test_local_bound_is_d_minus_one(self, m, d):
        report = local_bound(chained_modular(m, d))
        assert report.bound == Fraction(d - 1)

    def test_orientation_is_minimize(self):
        assert chained_modular(2, 3).orientation == "min"

    @pytest.mark.parametrize("m,d", [(2, 3), (3, 2)])
    def test_uniform_value(self, m, d):
        f = chained_modular(m, d)
        expected = 2 * m * (d - 1) / 2
        assert evaluate(f, uniform_behavior(f.scenario)) == pytest.approx(expected)

    def test_range_errors(self):
        with pytest.raises(ValidationError):
            chained_modular(1, 2)
        with pytest.raises(ValidationError):
            chained_modular(2, 1)


class TestChainedCorrelator:
    def test_local_bound(self):
        assert local_bound(chained_correlator(3)).bound == Fraction(4)

    def test_uniform_value(self):
        f = chained_correlator(3)
        assert evaluate(f, uniform_behavior(f.scenario)) == pytest.approx(0.0, abs=1e-15)

    def test_equivalent_to_chsh_up_to_relabeling(self):
        # oracle: scan all 64 relabelings of the (2,2,2) scenario
        from bellcert import pushforward_functional
        from bellcert.symmetry import Relabeling

        target = chsh()
        f = chained_correlator(2)
        sc = f.scenario
        hits = 0
        for sa in itertools.permutations(range(2)):
            for ta in itertools.product(itertools.permutations(range(2)), repeat=2):
                for sb in itertools.permutations(range(2)):
                    for tb in itertools.product(itertools.permutations(range(2)), repeat=2):
                        g = Relabeling(sc, (sa, sb), (ta, tb))
                        if pushforward_functional(g, f).same_coefficients(target):
                            hits += 1
        assert hits >= 1

    def test_range_error(self):
        with pytest.raises(ValidationError):
            chained_correlator(1)


class TestMermin:
    def test_three_party_terms(self):
        terms, constant = correlator_terms(mermin(3))
        assert constant == 0
        assert len(terms) == 4
        for (parties, settings), coeff in terms.items():
            assert parties == (0, 1, 2)  # full correlators only
            assert sum(settings) % 2 == 1  # odd number of primed settings
            assert abs(coeff) == 1

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_odd_n_has_only_odd_primed_full_terms(self, n):
        terms, constant = correlator_terms(mermin(n))
        assert constant == 0
        for (parties, settings), _ in terms.items():
            assert parties == tuple(range(n))
            assert sum(settings) % 2 == 1

    def test_local_bounds(self):
        assert local_bound(mermin(3)).bound == Fraction(2)
        assert local_bound(mermin(4)).bound == Fraction(2)
        # enumerated over the 4**5 = 1024 joint strategies
        assert local_bound(mermin(5)).bound == Fraction(2)

    def test_range_error(self):
        with pytest.raises(ValidationError):
            mermin(1)


class TestLifted:
    def test_nonpositive_on_every_deterministic_strategy(self):
        f = lifted_chsh_c()
        values = [evaluate_on_strategy(f, s) for s in all_strategies(f.scenario)]
        assert max(values) == Fraction(0)
        assert all(v <= 0 for v in values)

    def test_local_bound_report(self):
        report = local_bound(lifted_chsh_c())
        assert report.bound == Fraction(0)
        assert report.maximizer_count == 24

    def test_scenario_shape(self):
        f = lifted_chsh_c()
        assert f.scenario.settings == (2, 2, 1)
        assert f.scenario.outcomes == 2


class TestLocalBoundMachinery:
    def test_cap_exceeded(self):
        with pytest.raises(CapExceededError):
            local_bound(mermin(3), cap=10)

    def test_listing_cap_keeps_exact_count(self):
        report = local_bound(chsh(), max_listed=3)
        assert report.maximizer_count == 8
        assert len(report.maximizers) == 3

    def test_enumeration_matches_direct_scan(self, rng):
        # independent oracle: evaluate every strategy through the public
        # exact evaluator and compare optimum and count
        for f in (chsh(), chained_modular(2, 3), lifted_chsh_c()):
            values = [evaluate_on_strategy(f, s) for s in all_strategies(f.scenario)]
            best = max(values) if f.orientation == "max" else min(values)
            report = local_bound(f)
            assert report.bound == best
            assert report.maximizer_count == sum(v == best for v in values)


class TestCorrelatorView:
    def test_round_trip_for_builtins(self):
        for f in (chsh(), tilted_chsh(0.5), chained_correlator(3), mermin(3), mermin(4)):
            terms, constant = correlator_terms(f)
            assert constant == 0
            rebuilt = from_correlator_terms(f.scenario, terms, orientation=f.orientation)
            assert rebuilt.same_coefficients(f), f.name

    def test_non_dyadic_spread_rejected(self):
        sc = Scenario((3, 3), 2)
        with pytest.raises(ValidationError, match="dyadic"):
            from_correlator_terms(sc, {((0,), (0,)): 1})

    def test_non_dyadic_coefficient_rejected(self):
        sc = Scenario((2, 2), 2)
        with pytest.raises(ValidationError, match="dyadic"):
            from_correlator_terms(sc, {((0, 1), (0, 0)): Fraction(1, 3)})


class TestFunctionalJson:
    @pytest.mark.parametrize(
        "factory",
        [chsh, lambda: tilted_chsh(0.5), lambda: chained_modular(2, 3), lambda: mermin(3)],
    )
    def test_round_trip(self, factory):
        f = factory()
        data = json.loads(json.dumps(functional_to_dict(f)))
        back = functional_from_dict(data)
        assert back.same_coefficients(f)
        assert back.orientation == f.orientation
        assert back.name == f.name

    def test_schema_fields(self):
        data = functional_to_dict(chsh())
        assert data["orientation"] == "max"
        assert data["settings"] == [2, 2]
        term = data["terms"][0]
        assert set(term) == {"x", "a", "c_num", "c_log2_den"}
