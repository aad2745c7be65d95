import json
from pathlib import Path

import numpy as np

from bayesloc.core.errors import ParseError
from bayesloc.core.geometry import Location
from bayesloc.infra.model.fingerprint_model import FingerprintDb, Histogram


def fingerprint_to_dict(db: FingerprintDb) -> dict:
  """
  JSON-ready form of a database.

  Only support bins are stored; the smoothing floor is recomputed on load.
  """
  locations = []
  for loc, per_tx in zip(db.locations, db.histograms):
    locations.append({
      "x": loc.x,
      "y": loc.y,
      "per_tx": [
        {
          "tx_id": tx_id,
          "mean": per_tx[tx_id].mean,
          "bins": [
            {"lo": float(lo), "count": int(count)}
            for lo, count in zip(per_tx[tx_id].bin_lows(), per_tx[tx_id].counts)
          ],
        }
        for tx_id in sorted(per_tx)
      ],
    })
  return {"bin_width": db.bin_width, "smoothing": db.smoothing, "locations": locations}


def fingerprint_from_dict(document: dict) -> FingerprintDb:
  """
  Rebuild a database from its JSON form.

  Raises:
      ParseError: If a required key is missing or bins are not contiguous.
  """
  try:
    bin_width = float(document["bin_width"])
    smoothing = float(document["smoothing"])
    locations: list[Location] = []
    histograms: list[dict[str, Histogram]] = []
    for entry in document["locations"]:
      locations.append(Location(float(entry["x"]), float(entry["y"])))
      per_tx = {}
      for item in entry["per_tx"]:
        lows = np.array([b["lo"] for b in item["bins"]], dtype=np.float64)
        counts = np.array([b["count"] for b in item["bins"]], dtype=np.int64)
        if lows.size == 0:
          raise ParseError(f"Histogram for {item['tx_id']!r} at ({entry['x']}, {entry['y']}) has no bins")
        start = int(round(lows[0] / bin_width))
        expected = (start + np.arange(lows.size)) * bin_width
        if not np.allclose(lows, expected):
          raise ParseError(f"Histogram bins for {item['tx_id']!r} at ({entry['x']}, {entry['y']}) are not contiguous")
        per_tx[str(item["tx_id"])] = Histogram(start, counts, float(item["mean"]), bin_width, smoothing)
      histograms.append(per_tx)
  except (KeyError, TypeError) as exc:
    raise ParseError(f"Fingerprint document is missing or mistypes {exc}") from None

  all_tx = sorted({tx_id for per_tx in histograms for tx_id in per_tx})
  empty = tuple((loc, tx_id) for loc, per_tx in zip(locations, histograms) for tx_id in all_tx if tx_id not in per_tx)
  return FingerprintDb(bin_width, smoothing, tuple(locations), tuple(histograms), empty)


def save_fingerprint_db(db: FingerprintDb, path: Path) -> None:
  """Write a database as indented JSON with a trailing newline."""
  path.parent.mkdir(parents=True, exist_ok=True)
  with open(path, "w", encoding="utf-8", newline="\n") as f:
    json.dump(fingerprint_to_dict(db), f, indent=2)
    f.write("\n")


def load_fingerprint_db(path: Path) -> FingerprintDb:
  """
  Raises:
      ParseError: If the file is not valid JSON or not a fingerprint document.
      OSError: If the file cannot be read.
  """
  with open(path, encoding="utf-8") as f:
    try:
      document = json.load(f)
    except json.JSONDecodeError as exc:
      raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from None
  return fingerprint_from_dict(document)
