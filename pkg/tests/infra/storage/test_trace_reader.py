import pytest

from bayesloc.core.errors import EmptyFile, InvalidSpace, ParseError
from bayesloc.core.geometry import Location, Space
from bayesloc.infra.model.pathloss_model import TransmitterSet
from bayesloc.infra.model.trace_dataset import TraceDataset, TraceRecord
from bayesloc.infra.storage.trace_reader import load_traces, load_transmitters, write_traces, write_transmitters


def write(tmp_path, text, name="traces.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadTraces:

    def test_three_rows(self, tmp_path):
        path = write(tmp_path, "rx_x,rx_y,tx_id,rssi_dbm\n0.5,0.5,ap0,-41\n0.5,0.5,ap1,-63\n1.5,0.5,ap0,-52\n")
        data = load_traces(path)
        assert len(data) == 3
        assert data.records[0] == TraceRecord(Location(0.5, 0.5), "ap0", -41.0)
        assert not data.has_timestamps

    def test_timestamp_column(self, tmp_path):
        path = write(tmp_path, "rx_x,rx_y,tx_id,rssi_dbm,timestamp\n0.5,0.5,ap0,-41,0.0\n0.5,0.5,ap1,-63,0.0\n")
        data = load_traces(path)
        assert data.has_timestamps
        assert len(data.scans()) == 1

    def test_bad_rssi_names_line(self, tmp_path):
        path = write(tmp_path, "rx_x,rx_y,tx_id,rssi_dbm\n0.5,0.5,ap0,-41\n0.5,0.5,ap1,loud\n")
        with pytest.raises(ParseError, match="line 3"):
            load_traces(path)

    def test_blank_lines_keep_file_line_numbers(self, tmp_path):
        path = write(tmp_path, "rx_x,rx_y,tx_id,rssi_dbm\n1,2,a,-40\n\n\n1,2,a,oops\n")
        with pytest.raises(ParseError, match="line 5:"):
            load_traces(path)

    def test_blank_lines_are_skipped(self, tmp_path):
        path = write(tmp_path, "rx_x,rx_y,tx_id,rssi_dbm\n0.5,0.5,ap0,-41\n\n0.5,0.5,ap1,-63\n\n")
        assert [r.tx_id for r in load_traces(path).records] == ["ap0", "ap1"]

    def test_missing_tx_id(self, tmp_path):
        path = write(tmp_path, "rx_x,rx_y,tx_id,rssi_dbm\n0.5,0.5,,-41\n")
        with pytest.raises(ParseError, match="line 2"):
            load_traces(path)

    def test_header_only(self, tmp_path):
        with pytest.raises(EmptyFile):
            load_traces(write(tmp_path, "rx_x,rx_y,tx_id,rssi_dbm\n"))

    def test_empty_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_traces(write(tmp_path, ""))

    def test_wrong_header(self, tmp_path):
        with pytest.raises(ParseError, match="expected header"):
            load_traces(write(tmp_path, "x,y,ap,rss\n0,0,a,-40\n"))

    def test_receiver_outside_space(self, tmp_path):
        path = write(tmp_path, "rx_x,rx_y,tx_id,rssi_dbm\n9,9,ap0,-41\n")
        with pytest.raises(InvalidSpace):
            load_traces(path, Space.of_size(2.0, 2.0, 1.0))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_traces(tmp_path / "absent.csv")

    def test_write_then_load(self, tmp_path):
        data = TraceDataset((
            TraceRecord(Location(0.5, 0.5), "ap0", -41.0, 0.0),
            TraceRecord(Location(1.5, 0.5), "ap1", -57.5, 0.4),
        ))
        path = tmp_path / "out" / "traces.csv"
        write_traces(data, path)
        assert path.read_text().splitlines()[0] == "rx_x,rx_y,tx_id,rssi_dbm,timestamp"
        assert load_traces(path).records == data.records


class TestTransmitters:

    def test_load(self, tmp_path):
        txs = load_transmitters(write(tmp_path, "tx_id,x,y\nA,0,0\nB,10,2.5\n", "txs.csv"))
        assert txs.ids == ("A", "B")
        assert txs.location("B") == Location(10.0, 2.5)

    def test_duplicate_ids(self, tmp_path):
        with pytest.raises(ParseError, match="duplicate"):
            load_transmitters(write(tmp_path, "tx_id,x,y\nA,0,0\nA,1,1\n", "txs.csv"))

    def test_malformed_row(self, tmp_path):
        with pytest.raises(ParseError, match="line 3"):
            load_transmitters(write(tmp_path, "tx_id,x,y\nA,0,0\nB,east,1\n", "txs.csv"))

    def test_malformed_row_after_blank_line(self, tmp_path):
        with pytest.raises(ParseError, match="line 4:"):
            load_transmitters(write(tmp_path, "tx_id,x,y\nA,0,0\n\nB,east,1\n", "txs.csv"))

    def test_header_only(self, tmp_path):
        with pytest.raises(EmptyFile):
            load_transmitters(write(tmp_path, "tx_id,x,y\n", "txs.csv"))

    def test_write_then_load(self, tmp_path):
        txs = TransmitterSet.from_locations([Location(1.0, 2.0), Location(3.25, 4.0)])
        path = tmp_path / "txs.csv"
        write_transmitters(txs, path)
        assert load_transmitters(path) == txs
