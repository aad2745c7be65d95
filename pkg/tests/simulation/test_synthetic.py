import numpy as np
import pytest

from bayesloc.core.errors import InvalidParameters
from bayesloc.core.geometry import Location
from bayesloc.simulation.synthetic import (
    NoiseProfile,
    office_cells,
    office_source,
    synthesize_office_traces
)


class TestOffice:

    def test_cells(self):
        cells = office_cells()
        assert len(cells) == 8
        assert cells[0] == Location(0.5, 0.5)
        assert cells[3] == Location(3.5, 0.5)
        assert cells[4] == Location(0.5, 1.5)

    def test_trace_layout(self):
        data = synthesize_office_traces(scans_per_cell=6, tx_count=4, seed=1)
        assert len(data) == 8 * 6 * 4
        assert data.tx_ids() == ("ap0", "ap1", "ap2", "ap3")
        scans = data.scans()
        assert len(scans) == 48
        assert all(len(s.observation) == 4 for s in scans)
        assert all(float(r.rssi).is_integer() for r in data.records)

    def test_deterministic(self):
        a = synthesize_office_traces(scans_per_cell=3, tx_count=2, seed=7)
        b = synthesize_office_traces(scans_per_cell=3, tx_count=2, seed=7)
        assert a.records == b.records

    def test_high_profile_is_wider(self):
        rng = np.random.default_rng(0)
        low = office_source(NoiseProfile.LOW, seed=3).sample(rng, 400)
        high = office_source(NoiseProfile.HIGH, seed=3).sample(rng, 400)
        assert high.std(axis=1).mean() > 2 * low.std(axis=1).mean()

    def test_low_profile_centres_on_mean(self):
        source = office_source(NoiseProfile.LOW, seed=2)
        values = source.sample(np.random.default_rng(1), 2000)
        np.testing.assert_allclose(values.mean(axis=1), source.means, atol=0.2)

    @pytest.mark.parametrize("kwargs", [{"scans_per_cell": 0}, {"tx_count": 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameters):
            synthesize_office_traces(**kwargs)
