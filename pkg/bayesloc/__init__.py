"""Grid-based Bayesian RSS localization: posteriors, cost-optimal estimators and error-CDF evaluation."""

__version__ = "0.1.0"
