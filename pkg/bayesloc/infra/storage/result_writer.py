from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import pandas as pd
from numpy.typing import NDArray

# Fixed float format and LF endings; no timestamps, so reruns are byte-identical.
FLOAT_FORMAT = "%.10g"


def _write_frame(frame: pd.DataFrame, path: Path) -> None:
  path.parent.mkdir(parents=True, exist_ok=True)
  frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_curve(path: Path, d_grid: NDArray[np.float64], values: NDArray[np.float64]) -> None:
  """One error CDF as `d,F` rows."""
  _write_frame(pd.DataFrame({"d": d_grid, "F": values}), path)


def write_curves(path: Path, d_grid: NDArray[np.float64], curves: Mapping[str, NDArray[np.float64]]) -> None:
  """Several error CDFs on a shared grid: a `d` column, then one column per curve."""
  write_columns(path, {"d": d_grid, **curves})


def write_columns(path: Path, columns: Mapping[str, NDArray[np.float64]]) -> None:
  """Equal-length columns in insertion order."""
  _write_frame(pd.DataFrame(dict(columns)), path)


def write_table_csv(path: Path, rows: Sequence[str], columns: Sequence[str], values: NDArray[np.float64]) -> None:
  frame = pd.DataFrame(values, index=list(rows), columns=list(columns))
  frame.index.name = "algorithm"
  path.parent.mkdir(parents=True, exist_ok=True)
  frame.to_csv(path, float_format=FLOAT_FORMAT, lineterminator="\n")


def format_table(rows: Sequence[str], columns: Sequence[str], values: NDArray[np.float64], digits: int = 4) -> str:
  """Aligned plain-text table."""
  frame = pd.DataFrame(values, index=list(rows), columns=list(columns))
  return frame.to_string(float_format=lambda v: f"{v:.{digits}f}") + "\n"


def write_text(path: Path, text: str) -> None:
  path.parent.mkdir(parents=True, exist_ok=True)
  with open(path, "w", encoding="utf-8", newline="\n") as f:
    f.write(text)


def write_posterior(path: Path, points: NDArray[np.float64], mass: NDArray[np.float64]) -> None:
  """Posterior dump as `x,y,mass` rows in grid order."""
  _write_frame(pd.DataFrame({"x": points[:, 0], "y": points[:, 1], "mass": mass}), path)


def write_manifest(path: Path, entries: Mapping[str, object]) -> None:
  """`key=value` lines recording every parameter and seed of a run, in insertion order."""
  lines = []
  for key, value in entries.items():
    if isinstance(value, float):
      value = FLOAT_FORMAT % value
    lines.append(f"{key}={value}")
  write_text(path, "\n".join(lines) + "\n")
