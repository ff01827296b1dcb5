"""
r-ascents in Łukasiewicz excursions, dispersed excursions and meanders.

Exact counting, generating-function series, asymptotic expansions, uniform
sampling and the plane-tree bijection.
"""

__version__ = "0.1.0"
