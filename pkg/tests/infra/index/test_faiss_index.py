import math

import numpy as np
import pytest

from bayesloc.core.errors import NoCommonTransmitters
from bayesloc.core.geometry import Location
from bayesloc.core.observation import ObservationVector
from bayesloc.infra.index.faiss_index import FaissFingerprintIndex
from bayesloc.infra.model.fingerprint_model import fingerprint_train
from bayesloc.infra.model.trace_dataset import TraceDataset, TraceRecord

A = Location(0.5, 0.5)
B = Location(1.5, 0.5)
C = Location(2.5, 0.5)


def build(rows):
    return FaissFingerprintIndex(fingerprint_train(TraceDataset(tuple(TraceRecord(rx, tx, v) for rx, tx, v in rows))))


@pytest.fixture
def full_index():
    return build([
        (A, "ap0", -40.0), (A, "ap1", -70.0),
        (B, "ap0", -55.0), (B, "ap1", -55.0),
        (C, "ap0", -70.0), (C, "ap1", -40.0),
    ])


class TestFaissFingerprintIndex:

    def test_size(self, full_index):
        assert full_index.size == 3

    def test_exact_match(self, full_index):
        index, dist, ties = full_index.nearest(ObservationVector({"ap0": -55.0, "ap1": -55.0}))
        assert index == 1
        assert dist == pytest.approx(0.0, abs=1e-3)
        assert list(ties) == [1]

    def test_squared_distances(self, full_index):
        d2 = full_index.squared_distances(ObservationVector({"ap0": -40.0, "ap1": -70.0}))
        np.testing.assert_allclose(d2, [0.0, 450.0, 1800.0], rtol=1e-5, atol=1e-3)

    def test_subset_of_transmitters(self, full_index):
        index, dist, _ = full_index.nearest(ObservationVector({"ap1": -43.0}))
        assert index == 2
        assert dist == pytest.approx(3.0, rel=1e-5)

    def test_unknown_transmitters_ignored(self, full_index):
        assert full_index.nearest(ObservationVector({"ap0": -69.0, "zz": 0.0}))[0] == 2

    def test_no_common_transmitter(self, full_index):
        with pytest.raises(NoCommonTransmitters):
            full_index.nearest(ObservationVector({"zz": -50.0}))

    def test_partial_coverage_uses_shared_transmitters(self):
        index = build([(A, "ap0", -40.0), (B, "ap0", -60.0), (B, "ap1", -50.0), (C, "ap1", -45.0)])
        d2 = index.squared_distances(ObservationVector({"ap0": -41.0, "ap1": -50.0}))
        np.testing.assert_allclose(d2, [1.0, 361.0, 25.0])

    def test_location_without_shared_transmitter_is_infinite(self):
        index = build([(A, "ap0", -40.0), (B, "ap1", -50.0)])
        d2 = index.squared_distances(ObservationVector({"ap0": -40.0}))
        assert d2[0] == 0.0 and math.isinf(d2[1])

    def test_tie_goes_to_first_location(self):
        index = build([(A, "ap0", -40.0), (B, "ap0", -50.0)])
        first, _, ties = index.nearest(ObservationVector({"ap0": -45.0}))
        assert first == 0
        assert list(ties) == [0, 1]
