"""Material models and the bundled silver table."""

import numpy as np
import pytest

from plasmonqe.constants import omega_from_ev
from plasmonqe.em.materials import (
    Material,
    load_nk_csv,
    material_by_name,
    permittivity,
    silver_johnson_christy,
)
from plasmonqe.errors import MaterialRangeError


def test_constant_vacuum():
    m = Material.constant(1.0)
    assert permittivity(m, 3e15) == 1.0 + 0.0j


def test_drude_plasma_zero_crossing():
    m = Material.drude(eps_inf=1.0, omega_p=9e15, gamma=0.0)
    assert permittivity(m, 9e15) == pytest.approx(0.0, abs=1e-14)
    lossy = Material.drude(1.0, 9e15, 1e14)
    assert permittivity(lossy, 4e15).imag > 0


def test_tabulated_node_exact():
    ag = silver_johnson_christy()
    # at a table node the interpolated value equals the node value
    i = 20
    w = ag.table_omega[i]
    assert permittivity(ag, w) == ag.table_eps[i]


def test_tabulated_range_error():
    ag = silver_johnson_christy()
    with pytest.raises(MaterialRangeError):
        permittivity(ag, ag.table_omega[0] * 0.5)
    with pytest.raises(MaterialRangeError):
        permittivity(ag, ag.table_omega[-1] * 1.5)


def test_silver_values_in_plasmonic_band():
    ag = silver_johnson_christy()
    eps3 = permittivity(ag, omega_from_ev(3.0))
    assert eps3.real == pytest.approx(-5.17, abs=0.3)
    assert 0.1 < eps3.imag < 0.5
    eps35 = permittivity(ag, omega_from_ev(3.5))
    assert eps35.real == pytest.approx(-2.0, abs=0.3)


def test_tabulated_monotonicity_enforced():
    with pytest.raises(ValueError):
        Material.tabulated([2e15, 1e15], [1 + 1j, 2 + 1j])
    with pytest.raises(ValueError):
        Material.tabulated([1e15, 2e15], [1 - 1j, 2 + 1j])  # gain medium


def test_csv_loader_header_check(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("energy,n,k\n1.0,0.1,2.0\n")
    with pytest.raises(ValueError):
        load_nk_csv(p)
    p2 = tmp_path / "ok.csv"
    p2.write_text("energy_ev,n,k\n1.0,0.1,2.0\n2.0,0.2,1.0\n")
    m = load_nk_csv(p2)
    eps = permittivity(m, omega_from_ev(1.0))
    assert eps == pytest.approx((0.1 + 2.0j) ** 2)


def test_material_by_name():
    assert material_by_name("vacuum").kind == "constant"
    assert material_by_name("ag_johnson_christy").kind == "tabulated"
    with pytest.raises(ValueError):
        material_by_name("unobtainium")
