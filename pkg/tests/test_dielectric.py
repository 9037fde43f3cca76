import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tlsbath import dielectric as dl
from tlsbath.errors import DomainError, ModelValidityWarning


def toy_map():
    return [
        dl.FieldSample("helium", 1.0426, 1.0, 1.0),
        dl.FieldSample("substrate", 10.4, 1.0, 1.0),
    ]


def test_filling_factor_toy_map():
    f = dl.filling_factor(toy_map())
    assert f == pytest.approx(1.0426 / 11.4426, rel=1e-12)


def test_filling_factor_region_weighting():
    # field-weighted map tuned to a round 10% helium share
    samples = [
        dl.FieldSample("helium", 1.0426, 1.0, 1.0),
        dl.FieldSample("substrate", 10.4, 0.902250, 1.0),
    ]
    assert dl.filling_factor(samples) == pytest.approx(0.10, abs=1e-9)


def test_filling_factor_missing_region_warns():
    with pytest.warns(ModelValidityWarning):
        f = dl.filling_factor(toy_map(), region="vacuum")
    assert f == 0.0


def test_load_field_samples_roundtrip(tmp_path):
    p = tmp_path / "fields.csv"
    p.write_text(
        "region,eps,e_squared,volume\n"
        "helium,1.0426,1.0,1.0\n"
        "substrate,10.4,0.902250,1.0\n"
    )
    samples = dl.load_field_samples(p)
    assert len(samples) == 2
    assert dl.filling_factor(samples) == pytest.approx(0.10, abs=1e-9)


def test_fill_freq_shift_immersion():
    # F = 0.10, eps = 1.0426, 5.839 GHz resonator: -12.4 MHz, close to the
    # measured -12.2 MHz
    shift = dl.fill_freq_shift(5.839e9, 0.10)
    assert shift == pytest.approx(-12.437e6, rel=1e-3)
    assert abs(shift - (-12.2e6)) / 12.2e6 < 0.05


def test_film_freq_shift():
    # ten-monolayer film carries 3.7% of the immersion shift
    shift = dl.film_freq_shift(5.839e9, 0.10, coverage=0.037)
    assert shift == pytest.approx(-460e3, rel=5e-3)
    assert abs(shift - (-450e3)) / 450e3 < 0.05


def test_pressure_eps_value():
    eps = dl.pressure_eps(1.3)
    assert eps == pytest.approx(1.05561, rel=1e-5)
    assert dl.pressure_eps(1.0) == pytest.approx(1.0426, rel=1e-12)


@given(r=st.floats(0.1, 5.0))
@settings(max_examples=80, deadline=None)
def test_pressure_eps_roundtrip(r):
    # invert the map: recover the density ratio from the output permittivity
    eps = dl.pressure_eps(r)
    q = (eps - 1.0) / (eps + 2.0)
    r_back = q * (1.0426 + 2.0) / (1.0426 - 1.0)
    assert r_back == pytest.approx(r, rel=1e-9)


def test_pressure_eps_pole():
    with pytest.raises(DomainError):
        dl.pressure_eps(0.0426**-1 * 3.1)  # q beyond 1


QI_FULL_B = [3.7e4, 2.3e4, 2.1e4, 2.3e4, 3.0e4]
QI_EMPTY_B = [3.9e4, 3.0e4, 2.9e4, 2.3e4, 1.9e4]


def test_loss_tangent_bound_single_resonator():
    res = dl.loss_tangent_bound(QI_FULL_B, QI_EMPTY_B, filling=0.10)
    assert res.resolvable
    assert res.f_tan_delta == pytest.approx(1.6e-6, rel=0.01)
    assert res.tan_delta == pytest.approx(1.6e-5, rel=0.01)
    # same scale as the published estimate
    assert abs(res.f_tan_delta - 1.5e-6) / 1.5e-6 < 0.10


def test_loss_tangent_bound_unresolvable():
    full = QI_FULL_B + [6.0e4, 7.4e4, 6.4e4, 6.3e4, 4.1e4, 4.5e4]
    empty = QI_EMPTY_B + [6.6e4, 5.4e4, 5.4e4]
    with pytest.warns(ModelValidityWarning):
        res = dl.loss_tangent_bound(full, empty)
    assert not res.resolvable
    assert res.f_tan_delta < 0


def test_t1_bound():
    assert dl.t1_bound(6e9, 1.5e-6) == pytest.approx(111.11e-6, rel=1e-3)


def test_esr_peak_ratio_at_equivalent_temperature():
    t_eq = dl.esr_equivalent_temperature()
    assert t_eq == pytest.approx(0.068149, rel=1e-4)
    ratio, norm = dl.esr_peak_ratio(t_eq)
    assert ratio == pytest.approx(math.exp(-1.0), abs=1e-9)
    assert norm == pytest.approx(ratio / (1 + ratio), rel=1e-12)


def test_esr_peak_ratio_deep_cold():
    ratio, norm = dl.esr_peak_ratio(1e-4)
    assert ratio < 1e-43
    assert norm < 1e-43


def test_esr_peak_ratio_monotone():
    temps = [1e-3 * 10 ** (3 * k / 99) for k in range(100)]
    ratios = [dl.esr_peak_ratio(t)[0] for t in temps]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_he3_bcs_gap():
    assert dl.he3_bcs_gap(0.0) == pytest.approx(57.38e6, rel=1e-3)
    assert dl.he3_bcs_gap(0.45e-3) == pytest.approx(57.38e6 / math.sqrt(2), rel=1e-3)
    with pytest.warns(ModelValidityWarning):
        assert dl.he3_bcs_gap(1e-3) == 0.0


def test_domain_errors():
    with pytest.raises(DomainError):
        dl.fill_freq_shift(5.8e9, 1.5)
    with pytest.raises(DomainError):
        dl.film_freq_shift(5.8e9, 0.1, coverage=2.0)
    with pytest.raises(DomainError):
        dl.loss_tangent_bound([], [1e4])
    with pytest.raises(DomainError):
        dl.esr_peak_ratio(0.0)
    with pytest.raises(DomainError):
        dl.FieldSample("helium", 0.9, 1.0, 1.0)
