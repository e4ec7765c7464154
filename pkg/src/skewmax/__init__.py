"""Maxima of skew elliptical triangular arrays.

Modules
-------
radius
    Radius laws, their quantiles and max-domain classification.
marginal
    Tail of ``X = R cos T`` and the normalising sequences.
limitlaws
    Hüsler-Reiss and Weibull-case limit distribution functions.
oracle
    Exact finite-n tail probabilities by angular quadrature.
sampler
    Counter-based sampling of the triangular arrays and their row maxima.
mcharness
    Monte Carlo convergence experiments and reports.
"""

from ._backend import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
