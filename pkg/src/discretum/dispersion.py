"""Frequency/velocity relations of the discrete medium and cutoff estimators.

The chain dispersion is the nearest-neighbour monatomic law
omega(q) = 2*sqrt(kappa/m)*|sin(q a/2)|, whose small-q slope is the sound
speed a*sqrt(kappa/m).  The cutoff estimators map an upper bound on particle
energy to a relativistic momentum, from there to a lattice spacing a_s = h/p,
and on to the zone extent 2*pi/a_s.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DiscretumError, SubRestMassError


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants used by the estimators (all exact defining values)."""

    c: float = 2.99792458e8          # m/s
    h: float = 6.62607015e-34        # J s
    eV: float = 1.602176634e-19      # J

    def __post_init__(self):
        if not (self.c > 0 and self.h > 0 and self.eV > 0):
            raise DiscretumError("physical constants must be positive")

    @property
    def hbar(self):
        return self.h / (2.0 * math.pi)


CONSTANTS = PhysicalConstants()

# 938.272 MeV/c^2
PROTON_MASS = 938.272e6 * CONSTANTS.eV / CONSTANTS.c**2


@dataclass(frozen=True)
class OscillatorParams:
    """Spring constant, mass and spacing of the harmonic chain."""

    kappa: float
    m: float
    a: float

    def __post_init__(self):
        if not (self.kappa > 0 and self.m > 0 and self.a > 0):
            raise DiscretumError(
                "oscillator parameters must be positive, got kappa=%r m=%r a=%r"
                % (self.kappa, self.m, self.a))


def oscillator_frequency(params):
    """Single-oscillator frequency sqrt(kappa/m)."""
    return math.sqrt(params.kappa / params.m)


def sound_speed(params):
    """Long-wavelength acoustic speed a*sqrt(kappa/m)."""
    return params.a * math.sqrt(params.kappa / params.m)


def chain_dispersion(params, q):
    """Acoustic dispersion 2*sqrt(kappa/m)*|sin(q a/2)|.

    Accepts scalar or array q; periodic in q with period 2*pi/a and linear
    with slope sound_speed(params) as q -> 0.
    """
    q = np.asarray(q, dtype=float)
    omega = 2.0 * math.sqrt(params.kappa / params.m) * np.abs(
        np.sin(0.5 * q * params.a))
    return float(omega) if omega.ndim == 0 else omega


def cutoff_momentum(consts, E_b, m_p):
    """Relativistic momentum sqrt(E_b^2/c^2 - m_p^2 c^2) for total energy E_b."""
    rest = m_p * consts.c**2
    if E_b < rest:
        raise SubRestMassError(
            "energy bound %.6e J is below rest energy %.6e J" % (E_b, rest))
    # Guard the radicand: at the threshold E_b == rest the two squared terms
    # cancel and rounding may leave a signless residue either side of zero.
    diff = (E_b / consts.c) ** 2 - (m_p * consts.c) ** 2
    return math.sqrt(diff) if diff > 0.0 else 0.0


def lattice_spacing_from_cutoff(consts, p_cut):
    """Spacing a_s = h/p_cut at which the zone edge sits at momentum p_cut."""
    if p_cut <= 0:
        raise DiscretumError("cutoff momentum must be positive, got %r" % p_cut)
    return consts.h / p_cut


def bz_extent(a_s):
    """Extent 2*pi/a_s of the first zone for spacing a_s."""
    if a_s <= 0:
        raise DiscretumError("spacing must be positive, got %r" % a_s)
    return 2.0 * math.pi / a_s


@dataclass(frozen=True)
class CutoffEstimate:
    """One full estimation chain: energy bound -> momentum -> spacing -> zone."""

    E_b: float
    m_p: float
    p_cut: float
    a_s: float
    bz_extent: float

    @classmethod
    def from_energy(cls, consts, E_b, m_p):
        """Chain starting from an energy bound, via the exact momentum formula."""
        p = cutoff_momentum(consts, E_b, m_p)
        a_s = lattice_spacing_from_cutoff(consts, p)
        return cls(E_b=E_b, m_p=m_p, p_cut=p, a_s=a_s, bz_extent=bz_extent(a_s))

    @classmethod
    def from_momentum(cls, consts, p_cut, m_p=0.0):
        """Chain starting from a quoted momentum; E_b back-filled from it."""
        E_b = consts.c * math.sqrt(p_cut**2 + (m_p * consts.c) ** 2)
        a_s = lattice_spacing_from_cutoff(consts, p_cut)
        return cls(E_b=E_b, m_p=m_p, p_cut=p_cut, a_s=a_s,
                   bz_extent=bz_extent(a_s))


@dataclass(frozen=True)
class CutoffComparison:
    """Exact-formula chain vs a separately quoted momentum, with agreement flag."""

    exact: CutoffEstimate
    stated: CutoffEstimate
    consistent: bool


def compare_cutoffs(consts, E_b, m_p, stated_momentum, rtol=0.01):
    """Run both estimation chains and flag whether their momenta agree.

    `consistent` is True when the exact-formula momentum for (E_b, m_p) and
    the separately stated momentum agree within `rtol` relative.
    """
    exact = CutoffEstimate.from_energy(consts, E_b, m_p)
    stated = CutoffEstimate.from_momentum(consts, stated_momentum, m_p)
    consistent = abs(exact.p_cut - stated.p_cut) <= rtol * exact.p_cut
    return CutoffComparison(exact=exact, stated=stated, consistent=consistent)
