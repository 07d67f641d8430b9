import dataclasses
import math

import numpy as np
import pytest
import sympy

from slowlight.errors import InvalidParameters, UnequalDecayRates
from slowlight.langevin import (
    SERIES_THRESHOLD,
    diffusion,
    effective_length,
    noise_floor,
    noise_floor_quadrature_check,
    noise_source,
)
from slowlight.medium import derived_figures, transfer_exponent
from slowlight.models import Populations
from tests.cells import make_cell


def test_weak_probe_diffusion(paper_cell):
    coefficients = diffusion(paper_cell)
    per_length = paper_cell.linear_density
    assert coefficients.d_ba_ab * per_length == pytest.approx(2 * paper_cell.gamma_ba - paper_cell.gamma_bc)
    assert coefficients.d_bc_cb * per_length == pytest.approx(paper_cell.gamma_bc)
    assert coefficients.d_cb_bc == coefficients.d_bc_cb
    assert coefficients.d_ab_bc == 0
    assert coefficients.d_cb_ba == 0


def test_pumped_ground_state_diffusion(paper_cell):
    coefficients = diffusion(paper_cell, Populations(sigma_bb=0.0, sigma_cc=1.0))
    per_length = paper_cell.linear_density
    assert coefficients.d_ba_ab * per_length == pytest.approx(paper_cell.gamma_bc)
    assert coefficients.d_bc_cb * per_length == pytest.approx(paper_cell.gamma_bc)


def test_uniform_populations_diffusion(dephased_cell):
    gamma_ba, gamma_bc, aa, bb, cc = sympy.symbols('gamma_ba gamma_bc sigma_aa sigma_bb sigma_cc', positive=True)
    third = sympy.Rational(1, 3)
    uniform = {aa: third, bb: third, cc: third}
    ba_ab = sympy.simplify((gamma_ba * aa + 2 * gamma_ba * bb - gamma_bc * (bb - cc)).subs(uniform))
    ground = sympy.simplify((gamma_ba * aa + gamma_bc * (cc + bb)).subs(uniform))
    assert ba_ab == gamma_ba

    rates = {gamma_ba: dephased_cell.gamma_ba, gamma_bc: dephased_cell.gamma_bc}
    coefficients = diffusion(dephased_cell, Populations.uniform())
    per_length = dephased_cell.linear_density
    assert coefficients.d_ba_ab * per_length == pytest.approx(float(ba_ab.subs(rates)), rel=1e-12)
    assert coefficients.d_bc_cb * per_length == pytest.approx(float(ground.subs(rates)), rel=1e-12)


def test_populations_must_sum_to_one():
    with pytest.raises(InvalidParameters):
        Populations(sigma_bb=0.5, sigma_cc=0.2)
    with pytest.raises(InvalidParameters):
        Populations(sigma_bb=1.5, sigma_cc=-0.5)


def test_unequal_decay_rates(paper_cell):
    params = dataclasses.replace(paper_cell, gamma_ac=2 * paper_cell.gamma_ba)
    with pytest.raises(UnequalDecayRates):
        diffusion(params)
    with pytest.raises(UnequalDecayRates):
        noise_floor(params, 0.0)


def test_effective_length_limits():
    length = 0.035
    assert effective_length(0.0, length) == length
    assert effective_length(1e6, length) == pytest.approx(1 / 2e6)
    # The series and the closed form agree on both sides of the switch.
    below = SERIES_THRESHOLD / (4 * length)
    above = SERIES_THRESHOLD / length
    assert effective_length(below, length) == pytest.approx(length * (1 - below * length), rel=1e-14)
    assert effective_length(above, length) == pytest.approx(length * (1 - above * length), rel=1e-12)


def test_effective_length_shapes():
    rates = np.array([[0.0, 1.0], [10.0, 100.0]])
    assert effective_length(rates, 0.1).shape == (2, 2)
    assert np.ndim(effective_length(1.0, 0.1)) == 0


def test_noise_floor_vanishes_without_dephasing():
    params = make_cell(gamma_bc=0.0)
    assert noise_floor(params, 0.0) == 0
    assert noise_source(params, 0.0) == 0
    omegas = np.array([1e3, 1e5, 1e6, 1e7])
    assert np.all(noise_floor(params, omegas) > 0)
    assert noise_floor(params, 1e-3) < noise_floor(params, 1e3) < 1e-6


def test_noise_floor_is_even_and_nonnegative(random_cells):
    for params in random_cells(20, max_dephasing=1e-2):
        window = derived_figures(params).delta_omega
        omegas = np.linspace(0, 10 * window, 501)
        floor = noise_floor(params, omegas)
        assert np.all(floor >= 0)
        np.testing.assert_allclose(noise_floor(params, -omegas), floor, rtol=1e-14)


def test_noise_floor_shape(paper_cell):
    omegas = np.linspace(-1e7, 1e7, 7)
    assert noise_floor(paper_cell, omegas).shape == (7,)
    assert np.ndim(noise_floor(paper_cell, 1e6)) == 0


def test_noise_floor_restores_vacuum_at_line_center(paper_cell, dephased_cell):
    for params in (paper_cell, dephased_cell):
        optical_depth = derived_figures(params).optical_depth
        assert noise_floor(params, 0.0) == pytest.approx(-math.expm1(-2 * optical_depth), rel=1e-7)


def test_vacuum_is_preserved(paper_cell):
    for gamma_bc in np.geomspace(1.0, 1e5, 10):
        for omega_c in np.linspace(paper_cell.gamma_ba, 10 * paper_cell.gamma_ba, 10):
            params = dataclasses.replace(paper_cell, gamma_bc=gamma_bc, omega_c=omega_c)
            transmission = math.exp(-2 * float(np.real(transfer_exponent(params, 0.0))) * params.length)
            excess = abs(transmission + noise_floor(params, 0.0) - 1)
            assert excess <= 5 * gamma_bc * params.gamma_ba / omega_c ** 2


def test_noise_floor_quadrature(paper_cell):
    assert noise_floor_quadrature_check(paper_cell, 0.0) <= 1e-8
    assert noise_floor_quadrature_check(make_cell(gamma_bc=0.0), 0.0) <= 1e-12


def test_noise_floor_quadrature_random_cells(random_cells, rng):
    for params in random_cells(100):
        omega = rng.uniform(-1, 1) * derived_figures(params).delta_omega
        assert noise_floor_quadrature_check(params, omega) <= 1e-6


def test_noise_floor_quadrature_needs_panels(paper_cell):
    with pytest.raises(InvalidParameters):
        noise_floor_quadrature_check(paper_cell, 0.0, n_panels=8)
