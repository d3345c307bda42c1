"""Extremal null curves in de Sitter 3-space: closed-form frames and a numerical oracle."""

from .params import ModelParams
from .weierstrass import Invariants, half_periods, sigma, wp, zeta
from .potentials import CaseTag, Potential, eval_potential, make_potential
from .closed_form import FrameCase, classify_extremal, extremal_frame

__version__ = "0.1.0"

__all__ = [
    "CaseTag",
    "FrameCase",
    "Invariants",
    "ModelParams",
    "Potential",
    "classify_extremal",
    "eval_potential",
    "extremal_frame",
    "half_periods",
    "make_potential",
    "sigma",
    "wp",
    "zeta",
]
