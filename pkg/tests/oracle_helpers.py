"""Independent oracles shared by unit and acceptance tests.

These deliberately avoid the production assembly paths (source
expansions, translation operators, the coupled solver): the
single-sphere emission series is the classical closed-form sum over
sphere reflection coefficients, evaluated directly from radial-function
ladders.  Only the scaled special-function primitives are shared with
the package, the same way both sides would share a math library.
"""

import numpy as np

from plasmonqe.constants import C_LIGHT
from plasmonqe.em.mie import t_matrix_entries_scaled
from plasmonqe.numerics.bessel import riccati_derivative_scaled, sph_h1n_scaled


def single_sphere_purcell(radius, eps_sphere, r_dip, omega, eps_host=1.0, l_sum=250):
    """(radial, tangential) decay rates over the free-space rate for a
    dipole at distance r_dip from the centre of a sphere of the given
    radius, from the classical single-sphere reflection series:

      G_r/G_0 (radial)     = 1 + 3/2 Re sum_l l(l+1)(2l+1) T_TM (h_l(x)/x)^2
      G_t/G_0 (tangential) = 1 + 3/4 Re sum_l (2l+1) [T_TE h_l(x)^2
                                                      + T_TM (psi'_l(x)/x)^2]

    with x = k r_dip.  Term magnitudes are assembled from scaled
    (mantissa, exponent) pieces so extreme orders contribute exactly.
    """
    k = omega / C_LIGHT * np.sqrt(complex(eps_host))
    x = k * r_dip
    te_m, te_e, tm_m, tm_e = t_matrix_entries_scaled(
        radius, eps_sphere, eps_host, omega, l_sum
    )
    h_m, h_e = sph_h1n_scaled(l_sum, complex(x))
    p_m, p_e = riccati_derivative_scaled(h_m, h_e, complex(x))
    ls = np.arange(l_sum + 1, dtype=float)

    def series(t_mant, t_ex, f_mant, f_ex, weight):
        with np.errstate(under="ignore"):
            ex = np.clip(t_ex + 2 * f_ex, -1060, 1023).astype(float)
            terms = np.real(t_mant * f_mant * f_mant) * np.exp2(ex)
        return np.sum(weight * terms)

    rad = 1.0 + 1.5 * series(tm_m, tm_e, h_m, h_e, ls * (ls + 1) * (2 * ls + 1)) / abs(x) ** 2
    tan = 1.0 + 0.75 * (
        series(te_m, te_e, h_m, h_e, 2 * ls + 1)
        + series(tm_m, tm_e, p_m, p_e, 2 * ls + 1) / abs(x) ** 2
    )
    return float(rad), float(tan)
