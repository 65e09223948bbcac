"""Special functions, vector spherical wave functions, and translation
machinery underlying the multiple-scattering solver."""

from .bessel import sph_bessel, sph_jn_all, sph_h1n_all, riccati_derivative

__all__ = [
    "sph_bessel",
    "sph_jn_all",
    "sph_h1n_all",
    "riccati_derivative",
]
