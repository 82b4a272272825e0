"""Exact computations on the parabola translation surface and its affine family."""

from .exact import Poly, PolyMatrix, PolyVec, QuadNum, QuadSeries
from .homology import AbsClass, RelClass, epsilon, gamma_class, hol_at, sigma_class, sigma_coords
from .pairing import moment, pair
from .spectral import SurdClass, asymptotic_constant, barwedge_taylor, beta, jet_class, spectral_data
from .veech import GroupWord, act, act_power, is_hyperbolic, rho, rho_at, word_reduce

__all__ = [
    "AbsClass",
    "GroupWord",
    "Poly",
    "PolyMatrix",
    "PolyVec",
    "QuadNum",
    "QuadSeries",
    "RelClass",
    "SurdClass",
    "act",
    "act_power",
    "asymptotic_constant",
    "barwedge_taylor",
    "beta",
    "epsilon",
    "gamma_class",
    "hol_at",
    "is_hyperbolic",
    "jet_class",
    "moment",
    "pair",
    "rho",
    "rho_at",
    "sigma_class",
    "sigma_coords",
    "spectral_data",
    "word_reduce",
]
