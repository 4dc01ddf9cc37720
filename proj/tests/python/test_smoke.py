import math
import os
import pathlib

import pytest

import rydcav

CONFIGS = pathlib.Path(os.environ.get("RYDCAV_CONFIG_DIR", pathlib.Path(__file__).parents[2] / "configs"))


def test_dispersive_point():
    c = rydcav.load_config(str(CONFIGS / "dispersive.cfg"))
    r = rydcav.run_point(c)
    assert abs(r.correlations.g2_t_zero - 0.263309286214346) < 1e-9
    assert abs(r.first.a1 - complex(0.0017988304894293406, -0.0041817506869432476)) < 1e-14
    assert "a1 = " in str(r)


def test_overrides_and_errors():
    c = rydcav.load_config(str(CONFIGS / "resonant.cfg"), ["alpha=0"])
    with pytest.raises(rydcav.ZeroDenominator) as info:
        rydcav.run_point(c)
    assert info.value.kind == "ZeroDenominator"
    assert isinstance(info.value, rydcav.RydcavError)
    with pytest.raises(rydcav.ConfigError):
        rydcav.load_config(str(CONFIGS / "resonant.cfg"), ["nonsense=1"])


def test_keyword_config_and_coherent_limit():
    c = rydcav.config(mode="radiative", g2N=18, omega_cf=4.858, gamma_r=0.1, gamma_c_L=0.3, c6=0, volume=1e5)
    p = c.params
    d = rydcav.effective_detunings(p, c.mode)
    f = rydcav.first_order(p, d)
    s = rydcav.second_order(p, d, f, rydcav.kernel_analytic(p, d))
    assert abs(rydcav.transmitted_g2_zero(f, s) - 1.0) < 1e-9
    t = rydcav.g2_tau(p, d, f, s, 20.0, 11)
    assert all(abs(g - 1.0) < 1e-9 for g in t.g2_tau)


def test_scan_and_optimum():
    c = rydcav.load_config(str(CONFIGS / "dispersive.cfg"))
    rows = rydcav.scan(c, "theta_c", -10, 10, 21, ["g2_t_0", "kappa_r"], threads=2)
    assert len(rows) == 21
    assert all(err == "" and not math.isnan(v[0]) for _, v, err in rows)
    assert rydcav.find_linear_optimum(c) == pytest.approx(-7.0201028758325328, abs=1e-6)


def test_oracle_agrees_with_perturbation_theory():
    c = rydcav.load_config(str(CONFIGS / "resonant.cfg"), ["alpha=1e-3"])
    p = c.params
    d = rydcav.effective_detunings(p, c.mode)
    f = rydcav.first_order(p, d)
    s = rydcav.second_order(p, d, f, rydcav.kernel_analytic(p, d))
    r = rydcav.three_boson_oracle(p, d, rydcav.effective_kappa(p, d).kappa)
    assert r.reliable
    assert r.g2_zero == pytest.approx(rydcav.transmitted_g2_zero(f, s), rel=1e-2)
    eff = rydcav.effective_second_order(p, d, rydcav.effective_kappa(p, d).kappa)
    assert abs(eff.aa - s.aa) < 1e-10 * abs(s.aa)


def test_factorization_slopes():
    c = rydcav.load_config(str(CONFIGS / "resonant.cfg"))
    rep = rydcav.factorization_check(c.params, n_atoms=2, pair_shift=-3.0)
    assert rep.intensity_slope == pytest.approx(4.0, abs=0.3)
    assert rep.pair_slope == pytest.approx(6.0, abs=0.3)
