import numpy as np
import pytest

from bayesloc.core.errors import DegenerateGeometry, UnknownTransmitter
from bayesloc.core.geometry import Location
from bayesloc.infra.model.pathloss_model import PathLossParams, TransmitterSet, mean_observation, sample_rss
from bayesloc.infra.model.trace_dataset import TraceDataset, TraceRecord
from bayesloc.simulation.fitting import MIN_SIGMA_DB, fit_pathloss

TXS = TransmitterSet.from_locations([Location(0.0, 0.0)])


def noiseless(params, distances):
    return TraceDataset(tuple(
        TraceRecord(Location(d, 0.0), "tx0", params.offset_db + mean_observation(params, Location(0.0, 0.0), Location(d, 0.0)))
        for d in distances
    ))


class TestFitPathloss:

    def test_noiseless_recovery(self):
        truth = PathLossParams(k_db=-39.13, eta=3.93, pt_dbm=16.0)
        fit = fit_pathloss(noiseless(truth, [1.0, 2.0, 5.0, 10.0, 30.0]), TXS, pt_dbm=16.0)
        assert fit.params.k_db == pytest.approx(-39.13, abs=1e-9)
        assert fit.params.eta == pytest.approx(3.93, abs=1e-9)
        assert fit.params.sigma_db == MIN_SIGMA_DB
        assert fit.r_squared == pytest.approx(1.0)
        assert fit.samples == 5

    def test_noisy_recovery(self):
        truth = PathLossParams(k_db=-40.0, eta=3.0, sigma_db=4.0)
        rng = np.random.default_rng(0)
        records = []
        for d in np.linspace(1.0, 40.0, 400):
            r = Location(float(d), 0.0)
            records.append(TraceRecord(r, "tx0", sample_rss(truth, TXS, r, rng)["tx0"]))
        fit = fit_pathloss(TraceDataset(tuple(records)), TXS)
        assert fit.params.eta == pytest.approx(3.0, abs=0.3)
        assert fit.params.k_db == pytest.approx(-40.0, abs=2.0)
        assert fit.params.sigma_db == pytest.approx(4.0, rel=0.1)

    def test_single_distance(self):
        data = TraceDataset((TraceRecord(Location(3.0, 4.0), "tx0", -50.0), TraceRecord(Location(5.0, 0.0), "tx0", -52.0)))
        with pytest.raises(DegenerateGeometry):
            fit_pathloss(data, TXS)

    def test_power_rising_with_distance(self):
        data = TraceDataset((TraceRecord(Location(1.0, 0.0), "tx0", -60.0), TraceRecord(Location(10.0, 0.0), "tx0", -40.0)))
        with pytest.raises(DegenerateGeometry):
            fit_pathloss(data, TXS)

    def test_unknown_transmitter(self):
        data = TraceDataset((TraceRecord(Location(1.0, 0.0), "ap9", -60.0),))
        with pytest.raises(UnknownTransmitter):
            fit_pathloss(data, TXS)


def noisy_survey(params, count, rng):
    distances = rng.uniform(1.0, 40.0, count)
    noise = rng.normal(0.0, params.sigma_db, count)
    return TraceDataset(tuple(
        TraceRecord(Location(float(d), 0.0), "tx0", params.offset_db + mean_observation(params, Location(0.0, 0.0), Location(float(d), 0.0)) + float(e))
        for d, e in zip(distances, noise)
    ))


@pytest.mark.slow
class TestFitConsistency:

    TRUTH = PathLossParams(k_db=-40.0, eta=3.0, sigma_db=4.0)

    def test_thousand_points(self):
        fit = fit_pathloss(noisy_survey(self.TRUTH, 1000, np.random.default_rng(7)), TXS)
        assert fit.params.eta == pytest.approx(3.0, rel=0.05)

    def test_error_shrinks_with_sample_count(self):
        rng = np.random.default_rng(19)
        small, large = [], []
        for _ in range(20):
            small.append(abs(fit_pathloss(noisy_survey(self.TRUTH, 1000, rng), TXS).params.eta - 3.0))
            large.append(abs(fit_pathloss(noisy_survey(self.TRUTH, 16000, rng), TXS).params.eta - 3.0))
        assert 2.0 <= np.mean(small) / np.mean(large) <= 8.0
