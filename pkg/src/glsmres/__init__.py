"""Exact gauge-theory correlators via residues, with independent oracles.

The package computes correlation functions of two-dimensional abelian and
nonabelian gauge theories as truncated q-series by Jeffrey-Kirwan residues,
and cross-checks them against quantum cohomology rings, fixed-point
localization sums, hypergeometric-series factorization identities, and exact
rational-function reconstruction.
"""

from .scalars import GaussianRational, I_UNIT, parse_scalar, scalar_str, to_scalar
from .poly import MultiPoly, parse_poly, divexact, poly_divmod
from .series import QSeries, series_invert, truncated_exp, geometric_series
from .ratfun import RationalFunction, PadeError, PadeResult, pade_reconstruct
from .residues import (
    Arrangement,
    JKFactor,
    PoleAssignment,
    RationalExpression,
    ResidueError,
    iterated_residue,
    jk_residue,
    residue_at,
    sum_residues,
)

__version__ = "0.1.0"
