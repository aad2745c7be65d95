import logging
from pathlib import Path

import numpy as np
import pandas as pd

from bayesloc.core.errors import EmptyFile, ParseError
from bayesloc.core.geometry import Location, Space
from bayesloc.infra.model.pathloss_model import TransmitterSet
from bayesloc.infra.model.trace_dataset import TraceDataset, TraceRecord

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["rx_x", "rx_y", "tx_id", "rssi_dbm"]
TIMESTAMP_COLUMN = "timestamp"
TRANSMITTER_COLUMNS = ["tx_id", "x", "y"]
FLOAT_FORMAT = "%.10g"


def _read_rows(path: Path, expected: list[str]) -> pd.DataFrame:
  """
  Every cell as a string, blank lines dropped. The index still counts the
  dropped lines, so `_line` maps a row back to its file line.
  """
  try:
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True, skip_blank_lines=False)
  except pd.errors.EmptyDataError:
    raise ParseError(f"{path}: file is empty, expected header {','.join(expected)}") from None
  except pd.errors.ParserError as exc:
    raise ParseError(f"{path}: {exc}") from None
  frame = frame.fillna("")
  blank = (frame.apply(lambda column: column.str.strip()) == "").all(axis=1)
  return frame[~blank]


def _line(frame: pd.DataFrame, position: int) -> int:
  # one header line, one-based numbering
  return int(frame.index[position]) + 2


def load_traces(path: Path, space: Space | None = None) -> TraceDataset:
  """
  Read a trace CSV with header `rx_x,rx_y,tx_id,rssi_dbm[,timestamp]`.

  Args:
      path (Path): CSV file, one reading per row.
      space (Space | None): If given, every receiver must lie inside it.

  Returns:
      TraceDataset: Records in file order.

  Raises:
      EmptyFile: If the file has a header but no rows.
      ParseError: If the header differs from the schema or a row is malformed;
          the message names the file line.
      OSError: If the file cannot be read.
  """
  frame = _read_rows(path, TRACE_COLUMNS)

  columns = list(frame.columns)
  has_time = columns == TRACE_COLUMNS + [TIMESTAMP_COLUMN]
  if columns != TRACE_COLUMNS and not has_time:
    raise ParseError(f"{path}: expected header {','.join(TRACE_COLUMNS)}[,{TIMESTAMP_COLUMN}], got {','.join(columns)}")
  if frame.empty:
    raise EmptyFile(f"{path}: header only, no trace records")

  numeric_columns = ["rx_x", "rx_y", "rssi_dbm"] + ([TIMESTAMP_COLUMN] if has_time else [])
  numeric = frame[numeric_columns].apply(pd.to_numeric, errors="coerce")
  if has_time:
    # a blank timestamp is allowed and means "not recorded"
    blank_time = frame[TIMESTAMP_COLUMN].str.strip() == ""
    valid = np.isfinite(numeric[["rx_x", "rx_y", "rssi_dbm"]].to_numpy()).all(axis=1)
    valid &= blank_time.to_numpy() | np.isfinite(numeric[TIMESTAMP_COLUMN].to_numpy())
  else:
    valid = np.isfinite(numeric.to_numpy()).all(axis=1)
  valid &= (frame["tx_id"].str.strip() != "").to_numpy()

  bad = np.flatnonzero(~valid)
  if bad.size:
    row = int(bad[0])
    raise ParseError(f"{path}: line {_line(frame, row)}: malformed record {','.join(frame.iloc[row].tolist())!r}")

  timestamps = numeric[TIMESTAMP_COLUMN].to_numpy() if has_time else np.full(len(frame), np.nan)
  records = tuple(
    TraceRecord(
      rx=Location(float(x), float(y)),
      tx_id=tx_id.strip(),
      rssi=float(rssi),
      timestamp=None if np.isnan(t) else float(t)
    )
    for x, y, tx_id, rssi, t in zip(
      numeric["rx_x"].to_numpy(), numeric["rx_y"].to_numpy(), frame["tx_id"], numeric["rssi_dbm"].to_numpy(), timestamps
    )
  )
  logger.info("Loaded %d trace records from %s", len(records), path)
  return TraceDataset(records, space)


def write_traces(data: TraceDataset, path: Path) -> None:
  """Write a dataset in the trace CSV schema; timestamps only when every record has one."""
  rows = {
    "rx_x": [r.rx.x for r in data.records],
    "rx_y": [r.rx.y for r in data.records],
    "tx_id": [r.tx_id for r in data.records],
    "rssi_dbm": [r.rssi for r in data.records],
  }
  if data.has_timestamps:
    rows[TIMESTAMP_COLUMN] = [r.timestamp for r in data.records]
  path.parent.mkdir(parents=True, exist_ok=True)
  pd.DataFrame(rows).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def load_transmitters(path: Path) -> TransmitterSet:
  """
  Read transmitter positions from a CSV with header `tx_id,x,y` (metres).

  Raises:
      ParseError: If the header differs, a row is malformed or an id repeats.
      OSError: If the file cannot be read.
  """
  frame = _read_rows(path, TRANSMITTER_COLUMNS)
  if list(frame.columns) != TRANSMITTER_COLUMNS:
    raise ParseError(f"{path}: expected header {','.join(TRANSMITTER_COLUMNS)}, got {','.join(frame.columns)}")
  if frame.empty:
    raise EmptyFile(f"{path}: header only, no transmitters")

  coords = frame[["x", "y"]].apply(pd.to_numeric, errors="coerce").to_numpy()
  ids = frame["tx_id"].str.strip()
  bad = np.flatnonzero(~np.isfinite(coords).all(axis=1) | (ids == "").to_numpy())
  if bad.size:
    raise ParseError(f"{path}: line {_line(frame, int(bad[0]))}: malformed transmitter {','.join(frame.iloc[int(bad[0])].tolist())!r}")
  duplicated = ids[ids.duplicated()].tolist()
  if duplicated:
    raise ParseError(f"{path}: duplicate transmitter ids {duplicated}")
  return TransmitterSet.from_mapping({tx_id: Location(float(x), float(y)) for tx_id, (x, y) in zip(ids, coords)})


def write_transmitters(txs: TransmitterSet, path: Path) -> None:
  rows = [(tx_id, loc.x, loc.y) for tx_id, loc in txs]
  path.parent.mkdir(parents=True, exist_ok=True)
  pd.DataFrame(rows, columns=TRANSMITTER_COLUMNS).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
