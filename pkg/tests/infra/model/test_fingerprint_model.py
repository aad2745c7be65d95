import math

import numpy as np
import pytest

from bayesloc.core.errors import ParseError, UnknownLocation
from bayesloc.core.geometry import Grid, Location
from bayesloc.core.observation import ObservationVector
from bayesloc.infra.model.fingerprint_model import (
    FingerprintModel,
    bin_index,
    fingerprint_loglik,
    fingerprint_mean,
    fingerprint_train
)
from bayesloc.infra.model.trace_dataset import TraceDataset, TraceRecord

A = Location(0.5, 0.5)
B = Location(1.5, 0.5)


def dataset(rows):
    return TraceDataset(tuple(TraceRecord(rx, tx, rssi) for rx, tx, rssi in rows))


@pytest.fixture
def two_cell_db():
    rows = [(A, "ap0", -40.0)] * 20 + [(A, "ap1", -70.0)] * 20 + [(B, "ap0", -55.0)] * 20 + [(B, "ap1", -52.0)] * 20
    return fingerprint_train(dataset(rows))


class TestTraining:

    def test_constant_readings(self):
        db = fingerprint_train(dataset([(A, "ap0", -40.0)] * 250))
        histogram = db.histograms[0]["ap0"]
        assert histogram.mean == -40.0
        assert histogram.total == 250
        assert int(np.argmax(histogram.counts)) + histogram.start == bin_index(-40.0, 1.0)
        assert histogram.counts.max() == 250

    def test_two_values(self):
        db = fingerprint_train(dataset([(A, "ap0", -40.0), (A, "ap0", -42.0)]))
        histogram = db.histograms[0]["ap0"]
        assert np.count_nonzero(histogram.counts) == 2
        assert histogram.mean == pytest.approx(-41.0)

    def test_support_extends_three_bins(self):
        histogram = fingerprint_train(dataset([(A, "ap0", -40.0)])).histograms[0]["ap0"]
        assert histogram.counts.size == 7

    def test_empty_dataset_rejected(self):
        with pytest.raises(ParseError):
            TraceDataset(())

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(0)
        rows = [(A, "ap0", float(v)) for v in np.rint(rng.normal(-60, 5, 300))]
        histogram = fingerprint_train(dataset(rows), smoothing=2.5).histograms[0]["ap0"]
        assert histogram.probabilities().sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(histogram.probabilities() > 0)

    def test_empty_cells_recorded(self, caplog):
        db = fingerprint_train(dataset([(A, "ap0", -40.0), (B, "ap1", -50.0)]))
        assert set(db.empty_cells) == {(A, "ap1"), (B, "ap0")}
        assert "no readings" in caplog.text

    def test_locations_become_grid(self, two_cell_db):
        assert two_cell_db.grid.locations() == [A, B]


class TestLoglik:

    def test_modal_bin_scores_highest(self):
        rows = [(A, "ap0", v) for v in [-40.0] * 30 + [-41.0] * 5 + [-43.0] * 2]
        db = fingerprint_train(dataset(rows))
        scores = {v: fingerprint_loglik(db, ObservationVector({"ap0": v}), A) for v in (-40.0, -41.0, -43.0)}
        assert max(scores, key=scores.get) == -40.0

    def test_outside_range_is_finite_floor(self, two_cell_db):
        score = fingerprint_loglik(two_cell_db, ObservationVector({"ap0": -5.0}), A)
        assert math.isfinite(score)
        assert score == pytest.approx(math.log(two_cell_db.histograms[0]["ap0"].floor_probability))

    def test_factorizes(self, two_cell_db):
        both = fingerprint_loglik(two_cell_db, ObservationVector({"ap0": -41.0, "ap1": -69.0}), A)
        one = fingerprint_loglik(two_cell_db, ObservationVector({"ap0": -41.0}), A)
        two = fingerprint_loglik(two_cell_db, ObservationVector({"ap1": -69.0}), A)
        assert both == pytest.approx(one + two)

    def test_unheard_floor(self):
        db = fingerprint_train(dataset([(A, "ap0", -40.0)] * 9 + [(B, "ap1", -50.0)] * 4))
        score = fingerprint_loglik(db, ObservationVector({"ap1": -50.0}), A)
        assert score == pytest.approx(math.log(1.0 / (9 + 1.0)))

    def test_unknown_location(self, two_cell_db):
        with pytest.raises(UnknownLocation):
            fingerprint_loglik(two_cell_db, ObservationVector({"ap0": -40.0}), Location(9.0, 9.0))

    def test_finite_for_random_observations(self, two_cell_db):
        rng = np.random.default_rng(4)
        model = FingerprintModel(two_cell_db)
        for _ in range(50):
            o = ObservationVector({"ap0": rng.uniform(-120, 0), "ap1": rng.uniform(-120, 0)})
            assert np.all(np.isfinite(model.loglik(o, two_cell_db.grid)))


class TestFingerprintModel:

    def test_matches_scalar_loglik(self, two_cell_db):
        model = FingerprintModel(two_cell_db)
        o = ObservationVector({"ap0": -47.0, "ap1": -52.0, "ghost": -1.0})
        expected = [fingerprint_loglik(two_cell_db, o, loc) for loc in two_cell_db.locations]
        np.testing.assert_allclose(model.loglik(o, two_cell_db.grid), expected)

    def test_foreign_grid_rejected(self, two_cell_db):
        with pytest.raises(UnknownLocation):
            FingerprintModel(two_cell_db).loglik(ObservationVector({"ap0": -40.0}), Grid.from_line(0.0, 3.0, 1.0))

    def test_sample_draws_from_histograms(self, two_cell_db):
        o = FingerprintModel(two_cell_db).sample(A, np.random.default_rng(0))
        assert set(o.tx_ids) == {"ap0", "ap1"}


class TestMeans:

    def test_constant(self):
        db = fingerprint_train(dataset([(A, "ap0", -40.0)] * 5))
        np.testing.assert_allclose(fingerprint_mean(db, A), [-40.0])

    def test_two_values(self):
        db = fingerprint_train(dataset([(A, "ap0", -40.0), (A, "ap0", -42.0)]))
        np.testing.assert_allclose(fingerprint_mean(db, A), [-41.0])

    def test_missing_transmitter_is_nan(self):
        db = fingerprint_train(dataset([(A, "ap0", -40.0), (B, "ap1", -50.0)]))
        means = fingerprint_mean(db, A)
        assert db.tx_ids == ("ap0", "ap1")
        assert means[0] == -40.0 and math.isnan(means[1])


class TestConvergence:
    """Trained histograms approach the generating distribution as data grows."""

    def test_total_variation_shrinks(self):
        support = np.arange(-70, -49)
        weights = np.exp(-0.5 * ((support + 60) / 3.0) ** 2)
        truth = weights / weights.sum()

        def tv(samples: int, seed: int) -> float:
            rng = np.random.default_rng(seed)
            values = rng.choice(support, size=samples, p=truth).astype(float)
            histogram = fingerprint_train(dataset([(A, "ap0", v) for v in values])).histograms[0]["ap0"]
            estimate = np.array([histogram.probability(v) for v in support])
            return 0.5 * float(np.abs(estimate - truth).sum())

        means = [np.mean([tv(n, seed) for seed in range(20)]) for n in (50, 250, 1000)]
        assert means[0] > means[1] > means[2]
