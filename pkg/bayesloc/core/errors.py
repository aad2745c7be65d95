class BayeslocError(Exception):
  """Base class for every error raised by bayesloc."""


class InvalidSpace(BayeslocError, ValueError):
  """A space or grid violates its geometric invariants."""


class InvalidDensity(BayeslocError, ValueError):
  """A mass vector is negative, non-finite or does not match its grid."""


class InvalidObservation(BayeslocError, ValueError):
  """An observation vector has no usable reading."""


class InvalidRadius(BayeslocError, ValueError):
  """A radius parameter is not strictly positive."""


class InvalidCost(BayeslocError, ValueError):
  """A cost function violates the distance-error cost invariants."""


class InvalidParameters(BayeslocError, ValueError):
  """Model parameters violate their invariants."""


class AllZeroLikelihood(BayeslocError):
  """Every grid point scored -inf: the observation is inconsistent with the model."""


class SingularDistance(BayeslocError, ValueError):
  """The receiver sits closer to a transmitter than the model's distance floor."""


class UnknownTransmitter(BayeslocError, KeyError):
  """A reading names a transmitter the model does not know."""

  def __str__(self) -> str:
    return str(self.args[0]) if self.args else "unknown transmitter"


class UnknownLocation(BayeslocError, KeyError):
  """A location is not a survey location of the fingerprint database."""

  def __str__(self) -> str:
    return str(self.args[0]) if self.args else "unknown location"


class NoCommonTransmitters(BayeslocError, ValueError):
  """An observation shares no transmitter with the fingerprint database."""


class GridMismatch(BayeslocError, ValueError):
  """Two curves or densities are defined on different grids."""


class NotIncomparable(BayeslocError, ValueError):
  """Witness costs were requested for curves that are ordered by dominance."""


class DegenerateGeometry(BayeslocError, ValueError):
  """Readings do not span enough distinct distances to fit a path-loss model."""


class InsufficientData(BayeslocError, ValueError):
  """A training subset leaves a (location, transmitter) cell empty."""


class ParseError(BayeslocError, ValueError):
  """A trace or database file is malformed."""


class EmptyFile(ParseError):
  """A trace file holds a header but no records."""


class ConfigError(BayeslocError, ValueError):
  """An environment or command-line setting is invalid."""
