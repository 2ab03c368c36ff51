"""pqc-forge: greedy non-parametric approximation of parametric quantum circuits."""

__version__ = "0.1.0"
