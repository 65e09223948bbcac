"""3j recurrence ladder against exact rational evaluation."""

import numpy as np
import pytest
from sympy.physics.wigner import wigner_3j

from plasmonqe.numerics.wigner import w3j_p_ladder, wigner3j


@pytest.mark.parametrize("seed", [0, 1])
def test_ladder_matches_sympy(seed):
    rng = np.random.default_rng(seed)
    for _ in range(8):
        j1 = int(rng.integers(1, 41))
        j2 = int(rng.integers(1, 41))
        m1 = int(rng.integers(-j1, j1 + 1))
        m2 = int(rng.integers(-j2, j2 + 1))
        lad = w3j_p_ladder(j1, j2, np.array(m1), np.array(-m2))
        scale = np.max(np.abs(lad))
        for p in range(max(abs(j1 - j2), abs(m2 - m1)), j1 + j2 + 1):
            ref = float(wigner_3j(j1, j2, p, m1, -m2, m2 - m1))
            assert abs(float(lad[p]) - ref) <= 1e-11 * max(abs(ref), 1e-2 * scale)


def test_sum_rule():
    # sum_p (2p+1) f(p)^2 = 1 for any (j1, j2, ma, mb)
    for (j1, j2, ma, mb) in [(20, 17, 5, 9), (35, 35, 35, -35), (8, 3, 0, 0), (1, 1, 1, 0)]:
        f = w3j_p_ladder(j1, j2, np.array(ma), np.array(mb))
        s = sum((2 * p + 1) * float(f[p]) ** 2 for p in range(j1 + j2 + 1))
        assert s == pytest.approx(1.0, abs=1e-11)


def test_selection_rules():
    assert wigner3j(2, 2, 1, 1, 1, -2) == 0.0  # m-sum fine but j3 < |m3| no:
    assert wigner3j(1, 1, 3, 0, 0, 0) == 0.0  # triangle violated
    assert wigner3j(2, 1, 1, 0, 0, 1) == 0.0  # m-sum nonzero


def test_known_values():
    assert wigner3j(1, 1, 2, 1, -1, 0) == pytest.approx(1 / np.sqrt(30), rel=1e-13)
    assert wigner3j(1, 1, 0, 1, -1, 0) == pytest.approx(1 / np.sqrt(3), rel=1e-13)
    assert wigner3j(2, 6, 4, 0, 0, 0) == pytest.approx(
        float(wigner_3j(2, 6, 4, 0, 0, 0)), rel=1e-13
    )
