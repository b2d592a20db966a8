import math

import numpy as np
import pytest

from qotto.errors import DegeneracyError, ParameterError
from qotto.mat2 import HermitianOp, eig_herm2
from qotto.model import EngineParams, h_cold, h_hot
from qotto.thermal import (SpinTemperature, beta_from_population,
                           gibbs_state, partition_function,
                           population_from_state)

PARAMS = EngineParams.from_lab(2.0, 3.6, 100.0, 0.2, 0.261, 0.99)


def test_equal_populations_give_zero_beta():
    assert beta_from_population(0.5, 2000.0, 0.0).beta == 0.0


def test_tanh_identity():
    # beta is defined so that tanh(beta E) = 1 - 2 p+, exactly
    p = PARAMS
    e_cold = eig_herm2(h_cold(p)).e_plus
    for pop in np.linspace(0.01, 0.99, 99):
        beta = beta_from_population(pop, p.nu_cold, p.omega_tilde)
        assert math.tanh(beta.beta * e_cold) == pytest.approx(
            1.0 - 2.0 * pop, abs=1e-12)


def test_reference_population_tanh_value():
    beta = beta_from_population(0.261, PARAMS.nu_cold, PARAMS.omega_tilde)
    e_cold = eig_herm2(h_cold(PARAMS)).e_plus
    assert math.tanh(beta.beta * e_cold) == pytest.approx(0.478, abs=1e-12)


def test_inverted_population_negative_beta():
    assert beta_from_population(0.99, 3600.0, 0.0).beta < 0.0
    assert beta_from_population(0.01, 3600.0, 0.0).beta > 0.0


def test_population_domain():
    for bad in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(ParameterError):
            beta_from_population(bad, 2000.0, 0.0)


def test_gibbs_infinite_temperature():
    rho = gibbs_state(h_cold(PARAMS), SpinTemperature(0.0))
    np.testing.assert_allclose(rho.matrix, 0.5 * np.eye(2), atol=1e-15)


def test_gibbs_ground_state_limit():
    h = h_cold(PARAMS)
    e = eig_herm2(h).e_plus
    rho = gibbs_state(h, SpinTemperature(50.0 / e))
    assert population_from_state(rho, h) < 1e-21


def test_gibbs_round_trip():
    p = PARAMS
    h = h_cold(p)
    for pop in np.linspace(0.01, 0.99, 99):
        beta = beta_from_population(pop, p.nu_cold, p.omega_tilde)
        back = population_from_state(gibbs_state(h, beta), h)
        assert back == pytest.approx(pop, rel=1e-10)
    # and through beta again
    pop = 0.261
    beta = beta_from_population(pop, p.nu_cold, p.omega_tilde)
    back = population_from_state(gibbs_state(h, beta), h)
    beta2 = beta_from_population(back, p.nu_cold, p.omega_tilde)
    assert beta2.beta == pytest.approx(beta.beta, rel=1e-10)


def test_gibbs_commutes_with_hamiltonian():
    for pop, h in ((0.261, h_cold(PARAMS)), (0.99, h_hot(PARAMS))):
        nu = PARAMS.nu_cold if pop < 0.5 else PARAMS.nu_hot
        beta = beta_from_population(pop, nu, PARAMS.omega_tilde)
        rho = gibbs_state(h, beta).matrix
        hm = h.matrix
        assert np.max(np.abs(rho @ hm - hm @ rho)) < 1e-12


def test_pure_state_population():
    h = h_hot(PARAMS)
    basis = eig_herm2(h)
    rho_plus = np.outer(basis.psi_plus, basis.psi_plus.conj())
    from qotto.mat2 import DensityOp
    assert population_from_state(DensityOp(rho_plus), h) == pytest.approx(
        1.0, abs=1e-14)
    assert population_from_state(DensityOp(0.5 * np.eye(2)), h) == \
        pytest.approx(0.5, abs=1e-14)


def test_partition_function_values():
    h = h_cold(PARAMS)
    e = eig_herm2(h).e_plus
    assert partition_function(h, SpinTemperature(0.0)) == 2.0
    assert partition_function(h, SpinTemperature(math.log(2.0) / e)) == \
        pytest.approx(2.5, rel=1e-14)


def test_partition_function_against_trace():
    # two-route check: spectral sum versus the closed form
    rng = np.random.default_rng(31)
    for _ in range(100):
        h = HermitianOp(*rng.normal(0.0, 1.5, 4))
        pair = eig_herm2(h)
        if pair.degenerate:
            continue
        beta = SpinTemperature(rng.normal())
        trace = math.exp(-beta.beta * pair.e_plus) \
            + math.exp(-beta.beta * pair.e_minus)
        assert partition_function(h, beta) == pytest.approx(trace, rel=1e-12)


def test_degenerate_hamiltonian_rejected():
    with pytest.raises(DegeneracyError):
        gibbs_state(HermitianOp(a0=1.0), SpinTemperature(1.0))
    from qotto.mat2 import DensityOp
    with pytest.raises(DegeneracyError):
        population_from_state(DensityOp(0.5 * np.eye(2)), HermitianOp())
