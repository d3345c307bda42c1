"""Reduced-curvature potentials: real solutions of (h')^2 = 4h^3 - g2 h - g3.

Each potential is the restriction to a real interval of a translate
``h(z) = wp(z + shift)`` of the Weierstrass function (or one of its degenerate
forms).  The representative is fixed with the pole at ``s = 0`` for the
pole branches and with the minimum at ``s = 0`` for the branches that are
bounded below on their domain.

=============  ==========================  =============================
tag            h(s)                        domain
=============  ==========================  =============================
WP_NEG_DISC    wp(s)                       (0, 2 omega1)
WP3_NEG_DISC   wp(s + omega3)              R
WP_POS_DISC    wp(s)                       (0, 2 omega1)
TAN_DEGEN      -3a tan^2(sqrt(-3a) s) - 2a (-pi/sqrt(-12a), pi/sqrt(-12a))
TANH_DEGEN     3a tanh^2(sqrt(3a) s) - 2a  R
RATIONAL       s^-2                        (0, +inf)
CONSTANT       a (null helix)              R
=============  ==========================  =============================

``CONSTANT`` is the stationary solution at the double root of a degenerate
cubic; it is kept separate so the helix frames can be dispatched from a
``Potential`` like every other case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .params import ModelParams
from .weierstrass import (
    HalfPeriods,
    Invariants,
    PoleError,
    discriminant,
    degenerate_parameter,
    half_periods,
    is_degenerate,
    wp,
)

DOMAIN_GUARD = 1e-8


class DomainError(ValueError):
    """Evaluation point outside the domain of a potential."""


class CaseTag(str, Enum):
    WP_NEG_DISC = "WP_NEG_DISC"
    WP3_NEG_DISC = "WP3_NEG_DISC"
    WP_POS_DISC = "WP_POS_DISC"
    TAN_DEGEN = "TAN_DEGEN"
    TANH_DEGEN = "TANH_DEGEN"
    RATIONAL = "RATIONAL"
    CONSTANT = "CONSTANT"


class Branch(str, Enum):
    AUTO = "auto"
    WP = "wp"
    WP3 = "wp3"


@dataclass(frozen=True)
class PotentialCase:
    tag: CaseTag
    domain: tuple[float, float]
    a: float | None = None


@dataclass(frozen=True)
class Jet3:
    """Value and first three s-derivatives of a potential."""

    h: float
    h1: float
    h2: float
    h3: float | None = None


def classify(inv: Invariants, branch: Branch | str = Branch.AUTO) -> PotentialCase:
    """Pick the potential family for ``inv``.

    The branch flag only matters for negative discriminant, where ``WP`` gives
    the pole branch on ``(0, 2 omega1)`` and ``WP3`` (the ``AUTO`` choice) the
    bounded branch on the real line.
    """
    branch = Branch(branch)
    if is_degenerate(inv):
        if branch is Branch.WP3:
            raise ValueError("the wp3 branch exists only for negative discriminant")
        if inv.g2 == 0 and inv.g3 == 0:
            return PotentialCase(CaseTag.RATIONAL, (0.0, math.inf))
        a = degenerate_parameter(inv)
        if a < 0:
            half = math.pi / math.sqrt(-12 * a)
            return PotentialCase(CaseTag.TAN_DEGEN, (-half, half), a)
        return PotentialCase(CaseTag.TANH_DEGEN, (-math.inf, math.inf), a)
    hp = half_periods(inv)
    if discriminant(inv) < 0:
        if branch is Branch.WP:
            return PotentialCase(CaseTag.WP_NEG_DISC, (0.0, 2 * hp.omega1))
        return PotentialCase(CaseTag.WP3_NEG_DISC, (-math.inf, math.inf))
    if branch is Branch.WP3:
        raise ValueError("the wp3 branch exists only for negative discriminant")
    return PotentialCase(CaseTag.WP_POS_DISC, (0.0, 2 * hp.omega1))


@dataclass(frozen=True)
class Potential:
    inv: Invariants
    case: PotentialCase
    periods: HalfPeriods

    @property
    def tag(self) -> CaseTag:
        return self.case.tag

    @property
    def domain(self) -> tuple[float, float]:
        return self.case.domain

    @property
    def shift(self) -> complex:
        """Translation with ``h(z) = wp(z + shift)`` on the meromorphic side."""
        tag = self.tag
        if tag in (CaseTag.WP3_NEG_DISC, CaseTag.TANH_DEGEN):
            return self.periods.omega3
        if tag is CaseTag.TAN_DEGEN:
            return complex(self.periods.omega1)
        return 0j

    def contains(self, s: float, guard: float = DOMAIN_GUARD) -> bool:
        lo, hi = self.domain
        return lo + guard < s < hi - guard

    def h_complex(self, z: complex) -> tuple[complex, complex]:
        """Meromorphic extension ``(h(z), h'(z))``."""
        if self.tag is CaseTag.CONSTANT:
            return complex(self.case.a), 0j
        return wp(complex(z) + self.shift, self.inv)

    @property
    def anchor(self) -> float:
        """Interior reference point used to pin continuous branches."""
        lo, hi = self.domain
        if self.tag is CaseTag.RATIONAL:
            return 1.0
        if math.isinf(lo) and math.isinf(hi):
            return 0.0
        return (lo + hi) / 2

    def default_interval(self) -> tuple[float, float]:
        """A pole-free sampling interval well inside the domain."""
        lo, hi = self.domain
        if self.tag is CaseTag.RATIONAL:
            return 0.5, 3.0
        if math.isinf(lo) and math.isinf(hi):
            return 0.0, 2.0
        width = hi - lo
        return lo + 0.2 * width, hi - 0.2 * width


def make_potential(inv: Invariants, branch: Branch | str = Branch.AUTO) -> Potential:
    return Potential(inv, classify(inv, branch), half_periods(inv))


def constant_potential(h0: float) -> Potential:
    """Stationary potential ``h = h0``; its invariants are ``(12 h0^2, -8 h0^3)``."""
    inv = Invariants(12.0 * h0 * h0, -8.0 * h0**3)
    case = PotentialCase(CaseTag.CONSTANT, (-math.inf, math.inf), float(h0))
    return Potential(inv, case, half_periods(inv))


def eval_potential(p: Potential, s: float, guard: float = DOMAIN_GUARD) -> Jet3:
    """Jet ``(h, h', h'', h''')`` at a real interior point."""
    s = float(s)
    if not p.contains(s, guard):
        raise DomainError(f"s = {s} is outside the domain {p.domain} of {p.tag.value}")
    tag = p.tag
    g2 = p.inv.g2
    if tag is CaseTag.CONSTANT:
        h, h1 = p.case.a, 0.0
    elif tag is CaseTag.RATIONAL:
        h, h1 = s**-2, -2.0 * s**-3
    elif tag is CaseTag.TANH_DEGEN:
        a = p.case.a
        lam = math.sqrt(3 * a)
        t = math.tanh(lam * s)
        h = 3 * a * t * t - 2 * a
        h1 = 6 * a * lam * t * (1 - t * t)
    elif tag is CaseTag.TAN_DEGEN:
        a = p.case.a
        mu = math.sqrt(-3 * a)
        t = math.tan(mu * s)
        h = -3 * a * t * t - 2 * a
        h1 = -6 * a * mu * t * (1 + t * t)
    else:
        try:
            P, dP = wp(s + p.shift, p.inv)
        except PoleError as exc:
            raise DomainError(str(exc)) from exc
        h, h1 = P.real, dP.real
    h2 = 6 * h * h - g2 / 2
    return Jet3(h, h1, h2, 12 * h * h1)


def invariants_from_jet(j: Jet3) -> Invariants:
    g2 = 12 * j.h**2 - 2 * j.h2
    g3 = 4 * j.h**3 - g2 * j.h - j.h1**2
    return Invariants(g2, g3)


def k_from_h(h: float, params: ModelParams) -> float:
    return 2 * params.eps * h + params.m / 3


def h_from_k(k: float, params: ModelParams) -> float:
    return params.eps / 2 * (k - params.m / 3)
