"""Physical constants (CODATA via scipy) and unit helpers.

Frequency convention used throughout the package and all file formats:
"angular THz" means angular frequency in units of 1e12 rad/s.  A value
of 4800 angular THz is omega = 4.8e15 rad/s, i.e. a vacuum wavelength
lambda = 2*pi*c/omega of about 393 nm.
"""

from math import pi

from scipy.constants import c as C_LIGHT  # m/s
from scipy.constants import e as E_CHARGE  # C
from scipy.constants import epsilon_0 as EPS0  # F/m
from scipy.constants import hbar as HBAR  # J*s

ANGULAR_THZ = 1e12  # rad/s per "angular THz"
NM = 1e-9  # metres per nanometre
ANGSTROM = 1e-10  # metres per angstrom
EV = 1.602176634e-19  # J per eV (exact, SI 2019)


def omega_from_ev(energy_ev):
    """Angular frequency (rad/s) of a photon of the given energy in eV."""
    return energy_ev * EV / HBAR


def ev_from_omega(omega):
    """Photon energy in eV at angular frequency omega (rad/s)."""
    return omega * HBAR / EV


def vacuum_wavelength(omega):
    """Vacuum wavelength (m) at angular frequency omega (rad/s)."""
    return 2.0 * pi * C_LIGHT / omega


def free_space_decay_rate(omega, dipole_moment):
    """Spontaneous decay rate (1/s) of a dipole in vacuum.

    Wigner-Weisskopf rate omega^3 |d|^2 / (3 pi eps0 hbar c^3).
    """
    return omega**3 * dipole_moment**2 / (3.0 * pi * EPS0 * HBAR * C_LIGHT**3)
