import numpy as np
import pytest
from scipy.integrate import trapezoid

from src.errors import DomainError
from src.fourier import (check_annulus, check_bilateral, check_chord_majorant, check_podkorytov, check_ray_lower,
                         check_tail, ft_body, ft_profile, mu, normalize_profile, omega2, profile_spectrum,
                         ray_spectrum, second_diff_l2, semicircle, tent)
from src.fourier.profile import omega2_grid
from src.fourier.transforms import has_closed_form
from src.geometry import BodySpec, Direction, make_body


def test_tent_transform_is_squared_sinc():
    f = tent()
    for s in (0.0, 0.3, 1.5, 7.25):
        assert ft_profile(f, s).real == pytest.approx(np.sinc(s) ** 2, abs=1e-9)


def test_mu_domain():
    f = tent()
    assert mu(f, 0.25) == pytest.approx(0.25)
    assert mu(f, -0.25) == pytest.approx(0.25)
    with pytest.raises(DomainError):
        mu(f, 0.0)
    with pytest.raises(DomainError):
        mu(f, 0.6)
    with pytest.raises(DomainError):
        mu(f, -0.5)
    assert mu(semicircle(), 0.02) == pytest.approx(np.sqrt(0.0396), abs=1e-9)


def test_second_difference_of_tent():
    # three kinks, each contributing a triangle of height h and base 2h
    for h in (2.0 ** -10, 2.0 ** -5, 0.125):
        assert second_diff_l2(tent(), h) == pytest.approx(2.0 * h ** 1.5, rel=1e-6)
    assert second_diff_l2(tent(), 0.0) == 0.0


def test_omega2_grid_starts_at_nu():
    grid = omega2_grid(0.5, points=16)
    assert grid[0] == 0.5
    assert np.all(np.diff(grid) < 0)
    with pytest.raises(DomainError):
        omega2(tent(), 0.0)


def test_omega2_reuses_cache():
    cache = {}
    first = omega2(semicircle(), 0.01, points=8, cache=cache)
    assert len(cache) == 8
    assert omega2(semicircle(), 0.01, points=8, cache=cache) == first


def test_podkorytov_holds_for_tent():
    report = check_podkorytov(tent())
    assert report["pass"]
    assert report["max_ratio"] <= 1.0 / np.pi ** 2 + 1e-6


def test_podkorytov_rejects_low_frequencies():
    with pytest.raises(ValueError):
        check_podkorytov(tent(), s_grid=[1.0, 4.0])
    with pytest.raises(ValueError):
        check_podkorytov(tent(), s_grid=[2.0, 4.0])


def test_bilateral_ratio_of_tent_is_two():
    report = check_bilateral(tent())
    assert report["pass"]
    np.testing.assert_allclose(report["ratios"], 2.0, rtol=0.01)


def test_square_profile_transform_matches_closed_form():
    body = make_body(BodySpec(kind="axis_square", side=0.5))
    assert has_closed_form(body)
    xi = np.array([3.0, 0.0])
    f = normalize_profile(body, Direction.from_vector(xi))
    rho = 3.0
    via_profile = f.to_body(rho, ft_profile(f, rho * f.half_width))
    assert via_profile == pytest.approx(ft_body(body, xi), abs=1e-10)
    assert ft_body(body, xi).real == pytest.approx(0.25 * np.sinc(1.5), abs=1e-12)


def test_ft_body_at_zero_is_area():
    body = make_body(BodySpec(kind="c_sigma", sigma=0.75))
    assert ft_body(body, [0.0, 0.0]) == pytest.approx(body.area)


def test_ray_spectrum_matches_pointwise_transform():
    body = make_body(BodySpec(kind="c_sigma", sigma=0.75))
    direction = Direction(0.4)
    spectrum = ray_spectrum(body, direction, rho_max=16.0)
    assert spectrum.method == "fft_of_profile"
    assert spectrum.ft_values[0] == body.area
    for k in (3, 17, 60):
        rho = spectrum.rho_values[k]
        assert spectrum.ft_values[k] == pytest.approx(ft_body(body, rho * direction.vector), abs=1e-6)


def test_ray_spectrum_closed_form_for_disk():
    body = make_body(BodySpec(kind="disk", r=0.25))
    spectrum = ray_spectrum(body, Direction(1.0), rho_max=10.0)
    assert spectrum.method == "closed_form"
    expected = np.array([ft_body(body, rho * Direction(1.0).vector) for rho in spectrum.rho_values[1::7]])
    np.testing.assert_allclose(spectrum.ft_values[1::7], expected, atol=1e-12)
    with pytest.raises(ValueError):
        ray_spectrum(body, Direction(0.0), rho_max=-1.0)


def test_chord_majorant_on_disk():
    body = make_body(BodySpec(kind="disk", r=0.25))
    report = check_chord_majorant(body, Direction(0.3))
    assert report["pass"]
    with pytest.raises(ValueError):
        check_chord_majorant(body, Direction(0.3), rho_grid=[2.0])


def test_transform_examples():
    assert ft_profile(tent(), 0.5).real == pytest.approx((2.0 / np.pi) ** 2, abs=1e-9)
    assert abs(ft_profile(tent(), 1.0)) == pytest.approx(0.0, abs=1e-9)
    square = make_body(BodySpec(kind="axis_square", side=0.5))
    assert ft_body(square, [1.0, 0.0]).real == pytest.approx(1.0 / (2.0 * np.pi), abs=1e-12)


@pytest.mark.parametrize("spec", [BodySpec(kind="c_sigma", sigma=0.75, center=(0.05, -0.03)),
                                  BodySpec(kind="regular_polygon", k=5, circumradius=0.3)],
                         ids=["c_sigma_shifted", "pentagon"])
def test_opposite_ray_gives_conjugate_spectrum(spec):
    body = make_body(spec)
    direction = Direction(0.7)
    forward = ray_spectrum(body, direction, rho_max=12.0)
    backward = ray_spectrum(body, direction.opposite(), rho_max=12.0)
    n = min(len(forward.rho_values), len(backward.rho_values))
    np.testing.assert_allclose(backward.rho_values[:n], forward.rho_values[:n], rtol=1e-12)
    np.testing.assert_allclose(backward.ft_values[:n], np.conj(forward.ft_values[:n]), atol=1e-8 * body.area)


@pytest.mark.parametrize("factory, energy", [(tent, 2.0 / 3.0), (semicircle, 4.0 / 3.0)], ids=["tent", "semicircle"])
def test_plancherel(factory, energy):
    s, fhat = profile_spectrum(factory(), 1024.0)
    assert np.all(np.abs(fhat) <= fhat[0].real + 1e-9)
    assert 2.0 * trapezoid(np.abs(fhat) ** 2, s) == pytest.approx(energy, rel=0.01)


@pytest.mark.parametrize("factory", [tent, semicircle], ids=["tent", "semicircle"])
def test_tail_ratios_stay_bounded(factory):
    report = check_tail(factory(), rho_grid=[2.0, 4.0, 8.0, 16.0, 32.0])
    assert report["pass"]
    assert np.all(np.isfinite(report["tail_ratios"]))
    assert np.all(np.isfinite(report["low_ratios"]))
    with pytest.raises(ValueError):
        check_tail(factory(), rho_grid=[1.0])


def test_annulus_ratio_of_tent():
    # |f_hat|^2 = sinc^4 averages to 3 / (8 pi^4 s^4) and mu(1/rho) = 1/rho
    report = check_annulus(tent(), rho_grid=[8.0, 16.0, 32.0, 64.0])
    assert report["pass"]
    np.testing.assert_allclose(report["ratios"], 1.75 / np.pi ** 4, rtol=0.15)
    with pytest.raises(ValueError):
        check_annulus(tent(), rho_grid=[2.0])


def test_ray_lower_bound_for_disk():
    body = make_body(BodySpec(kind="disk", r=0.25))
    report = check_ray_lower(body, Direction(0.0), 0.5, rho_grid=[8.0, 16.0, 32.0, 64.0, 128.0, 256.0])
    assert report["pass"]
    assert report["inf_q"] > 0.0
    assert report["max_ratio"] / report["min_ratio"] < 2.0


def test_ray_lower_bound_for_c_sigma_pole():
    body = make_body(BodySpec(kind="c_sigma", sigma=0.75))
    report = check_ray_lower(body, Direction(np.pi / 2), 0.75, rho_grid=[8.0, 16.0, 32.0, 64.0])
    assert report["inf_q"] > 0.0
