"""Exact symbolic toolkit for two-parameter (q, z) spinor recoupling:
coefficient field, extended q-combinatorics, closed recoupling values,
explicit braid/R-matrix verification, and independent classical oracles.
"""

from . import cli, errors, matrixlab, networks, qcomb, recoupling, scalar

__all__ = [
    "cli",
    "errors",
    "matrixlab",
    "networks",
    "qcomb",
    "recoupling",
    "scalar",
]

__version__ = "0.1.0"
