import math

import numpy as np
import pytest

from conftest import central_difference_gradient, random_records
from prefaudit.annotation import (
    EACH_PAIR_RANDOM_VOTER,
    RoundRobin,
    TrueRewardLabels,
    generate_dataset,
)
from prefaudit.errors import InputError
from prefaudit.estimation import borda_scores, fit_mle, nll, nll_gradient, score
from prefaudit.model import ComparisonRecord, RewardModel
from prefaudit.population import PointMass, UniformBox, sample_alternatives, sample_voters


def _record(a0, a1, label=1):
    return ComparisonRecord(voter_id=0, a0=a0, a1=a1, label=label)


class TestNll:
    def test_zero_theta_gives_n_ln2(self, rng):
        records = random_records(rng, 3, 20)
        assert nll(np.zeros(3), records, 0.0) == pytest.approx(20 * math.log(2), abs=1e-12)

    def test_unit_gap_log_sigmoid(self):
        # single record, winner gap <theta, delta> = 1: -ln sigma(1)
        records = [_record([0.0], [1.0], label=1)]
        assert nll([1.0], records, 0.0) == pytest.approx(0.3132616875182228, abs=1e-10)

    def test_zero_theta_zero_penalty(self, rng):
        records = random_records(rng, 2, 7)
        assert nll(np.zeros(2), records, 1.0) == pytest.approx(7 * math.log(2), abs=1e-12)

    def test_empty_dataset(self):
        with pytest.raises(InputError):
            nll([1.0], [], 0.0)


class TestGradient:
    def test_zero_theta_half_delta(self):
        records = [_record([0.0, 0.0], [2.0, -4.0], label=1)]
        grad = nll_gradient(np.zeros(2), records, 0.0)
        assert np.allclose(grad, [-1.0, 2.0], atol=1e-15)  # -0.5 * delta

    def test_symmetric_dataset_cancels(self, rng):
        # each record plus a copy with the opposite winner: deltas cancel
        records = random_records(rng, 3, 10)
        mirrored = records + [
            ComparisonRecord(voter_id=0, a0=r.a0, a1=r.a1, label=1 - r.label)
            for r in records
        ]
        grad = nll_gradient(np.zeros(3), mirrored, 0.0)
        assert np.allclose(grad, 0.0, atol=1e-14)

    def test_matches_central_differences(self, rng):
        for _ in range(100):
            d = int(rng.integers(1, 9))
            n = int(rng.integers(1, 51))
            records = random_records(rng, d, n)
            lam = float(rng.uniform(0, 0.1))
            theta = rng.normal(size=d)
            analytic = nll_gradient(theta, records, lam)
            fd = central_difference_gradient(theta, records, lam)
            scale = 1 + np.max(np.abs(analytic))
            assert np.max(np.abs(analytic - fd)) <= 1e-6 * scale


class TestFitMle:
    def test_separable_single_record_reports_divergence(self):
        model = fit_mle([_record([0.0], [1.0])], lam=0.0)
        assert not model.converged
        assert model.diagnostic

    def test_symmetric_data_fits_origin(self, rng):
        records = random_records(rng, 2, 15)
        mirrored = records + [
            ComparisonRecord(voter_id=0, a0=r.a0, a1=r.a1, label=1 - r.label)
            for r in records
        ]
        model = fit_mle(mirrored, lam=1e-3)
        assert model.converged
        assert np.max(np.abs(model.theta_hat)) < 1e-6

    def test_recovers_sign_structure(self):
        theta_star = np.array([1.0, 0.0])
        voters = sample_voters(PointMass(theta=theta_star), 1, seed=0)
        slate = sample_alternatives(UniformBox(lo=[0.0, 0.0], hi=[1.0, 1.0]), 20, seed=1)
        data = generate_dataset(voters, slate, RoundRobin(repeats=106),
                                EACH_PAIR_RANDOM_VOTER, TrueRewardLabels(), seed=2)
        model = fit_mle(data, lam=1e-3)
        agree = total = 0
        for i in range(len(slate)):
            for j in range(i + 1, len(slate)):
                true_gap = float(theta_star @ (slate[i] - slate[j]))
                if abs(true_gap) > 0.5:
                    total += 1
                    fitted_gap = score(model, slate[i]) - score(model, slate[j])
                    agree += np.sign(fitted_gap) == np.sign(true_gap)
        assert total > 0
        assert agree / total >= 0.99

    def test_monotone_descent(self, rng):
        records = random_records(rng, 4, 40)
        model = fit_mle(records, lam=1e-3)
        hist = np.array(model.nll_history)
        assert np.all(np.diff(hist) <= 0)
        assert model.final_nll <= hist[0]

    def test_permutation_invariance(self, rng):
        records = random_records(rng, 3, 30)
        model_a = fit_mle(records, lam=1e-2)
        shuffled = list(records)
        rng.shuffle(shuffled)
        model_b = fit_mle(shuffled, lam=1e-2)
        assert np.max(np.abs(model_a.theta_hat - model_b.theta_hat)) < 1e-5

    def test_final_nll_not_above_init(self, rng):
        records = random_records(rng, 2, 25)
        init = rng.normal(size=2)
        model = fit_mle(records, lam=1e-3, init=init)
        assert model.final_nll <= nll(init, records, 1e-3)


class TestBordaScores:
    def test_win_rate_counting(self):
        a, b, c = [1.0], [0.0], [0.5]
        records = [
            _record(b, a, label=1),  # a beats b
            _record(a, b, label=0),  # a beats b
            _record(c, a, label=1),  # a beats c
            _record(a, c, label=1),  # c beats a
        ]
        scores = borda_scores(records, [a, b, c])
        assert scores[0] == 0.75

    def test_never_compared_is_undefined(self):
        records = [_record([0.0], [1.0], label=1)]
        scores = borda_scores(records, [[0.0], [1.0], [2.0]])
        assert scores[2] is None

    def test_deterministic_winner(self):
        records = [_record([0.0], [1.0], label=1) for _ in range(5)]
        scores = borda_scores(records, [[1.0], [0.0]])
        assert scores[0] == 1.0 and scores[1] == 0.0

    def test_empty_data(self):
        with pytest.raises(InputError):
            borda_scores([], [[1.0]])


class TestScore:
    def test_dot_product(self):
        model = RewardModel(theta_hat=[1.0, -1.0], lam=0.0, final_nll=0.0,
                            converged=True, iterations=0)
        assert score(model, [2.0, 3.0]) == -1.0

    def test_zero_model(self, rng):
        model = RewardModel(theta_hat=[0.0, 0.0], lam=0.0, final_nll=0.0,
                            converged=True, iterations=0)
        for _ in range(5):
            assert score(model, rng.normal(size=2)) == 0.0

    def test_translation_covariance(self, rng):
        model = RewardModel(theta_hat=rng.normal(size=3), lam=0.0, final_nll=0.0,
                            converged=True, iterations=0)
        a, b, c = rng.normal(size=3), rng.normal(size=3), rng.normal(size=3)
        lhs = score(model, a) - score(model, b)
        rhs = score(model, a + c) - score(model, b + c)
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_dimension_mismatch(self):
        model = RewardModel(theta_hat=[1.0], lam=0.0, final_nll=0.0,
                            converged=True, iterations=0)
        with pytest.raises(InputError):
            score(model, [1.0, 2.0])
