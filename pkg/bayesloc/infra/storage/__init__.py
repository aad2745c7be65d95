from bayesloc.infra.storage.fingerprint_store import (
  fingerprint_from_dict,
  fingerprint_to_dict,
  load_fingerprint_db,
  save_fingerprint_db
)
from bayesloc.infra.storage.result_writer import (
  format_table,
  write_columns,
  write_curve,
  write_curves,
  write_manifest,
  write_posterior,
  write_table_csv,
  write_text
)
from bayesloc.infra.storage.trace_reader import load_traces, load_transmitters, write_traces, write_transmitters

__all__ = [
  "fingerprint_from_dict",
  "fingerprint_to_dict",
  "format_table",
  "load_fingerprint_db",
  "load_traces",
  "load_transmitters",
  "save_fingerprint_db",
  "write_columns",
  "write_curve",
  "write_curves",
  "write_manifest",
  "write_posterior",
  "write_table_csv",
  "write_text",
  "write_traces",
  "write_transmitters"
]
