from bayesloc.core.density import DensityGrid, gaussian_prior, posterior, uniform_prior
from bayesloc.core.geometry import DEFAULT_RESOLUTION, Grid, Location, Space, distance, grid_points
from bayesloc.core.observation import ObservationVector

__all__ = [
  "DEFAULT_RESOLUTION",
  "DensityGrid",
  "Grid",
  "Location",
  "ObservationVector",
  "Space",
  "distance",
  "gaussian_prior",
  "grid_points",
  "posterior",
  "uniform_prior"
]
