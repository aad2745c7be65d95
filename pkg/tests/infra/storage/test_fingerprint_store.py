import json

import numpy as np
import pytest

from bayesloc.core.errors import ParseError
from bayesloc.core.geometry import Location
from bayesloc.core.observation import ObservationVector
from bayesloc.infra.model.fingerprint_model import FingerprintModel, fingerprint_train
from bayesloc.infra.model.trace_dataset import TraceDataset, TraceRecord
from bayesloc.infra.storage.fingerprint_store import (
    fingerprint_from_dict,
    fingerprint_to_dict,
    load_fingerprint_db,
    save_fingerprint_db
)

A = Location(0.5, 0.5)
B = Location(1.5, 0.5)


@pytest.fixture
def db():
    rows = [(A, "ap0", -40.0), (A, "ap0", -42.0), (A, "ap1", -70.0), (B, "ap0", -55.0)]
    return fingerprint_train(TraceDataset(tuple(TraceRecord(rx, tx, v) for rx, tx, v in rows)), smoothing=0.5)


class TestFingerprintStore:

    def test_saved_document_shape(self, db, tmp_path):
        path = tmp_path / "db.json"
        save_fingerprint_db(db, path)
        text = path.read_text()
        assert text.endswith("}\n")
        document = json.loads(text)
        assert document["bin_width"] == 1.0
        assert document["smoothing"] == 0.5
        first = document["locations"][0]
        assert (first["x"], first["y"]) == (0.5, 0.5)
        assert [item["tx_id"] for item in first["per_tx"]] == ["ap0", "ap1"]
        assert first["per_tx"][0]["mean"] == -41.0

    def test_loaded_db_scores_identically(self, db, tmp_path):
        path = tmp_path / "db.json"
        save_fingerprint_db(db, path)
        loaded = load_fingerprint_db(path)
        assert loaded.locations == db.locations
        assert loaded.empty_cells == db.empty_cells
        o = ObservationVector({"ap0": -43.0, "ap1": -70.0})
        np.testing.assert_allclose(
            FingerprintModel(loaded).loglik(o, loaded.grid),
            FingerprintModel(db).loglik(o, db.grid)
        )

    def test_saving_twice_is_byte_identical(self, db, tmp_path):
        save_fingerprint_db(db, tmp_path / "a.json")
        save_fingerprint_db(db, tmp_path / "b.json")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_invalid_json_names_line(self, tmp_path):
        path = tmp_path / "db.json"
        path.write_text('{\n  "bin_width": 1.0,\n  oops\n}\n')
        with pytest.raises(ParseError, match="line 3"):
            load_fingerprint_db(path)

    def test_missing_key(self, db):
        document = fingerprint_to_dict(db)
        del document["smoothing"]
        with pytest.raises(ParseError):
            fingerprint_from_dict(document)

    def test_gapped_bins(self, db):
        document = fingerprint_to_dict(db)
        document["locations"][0]["per_tx"][0]["bins"][1]["lo"] += 5.0
        with pytest.raises(ParseError, match="contiguous"):
            fingerprint_from_dict(document)
