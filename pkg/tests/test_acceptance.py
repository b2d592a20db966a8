"""Acceptance suite: one test per release criterion.

Each test prints a ``CRITERION n: PASS`` line (visible with ``-s`` or
in the captured output summary) after its assertions succeed.  The
reference configuration throughout is the NMR-style working point:
nu_cold = 2.0 kHz, nu_hot = 3.6 kHz, p+_cold = 0.261.

Pointwise reproduction of published transition-probability,
efficiency, coherence or disorder curves is explicitly out of scope
(criterion 10): the plots' grid resolutions and disorder strengths are
not public, so shape and ordering claims stand in for them.
"""

import math
import os
import time
from dataclasses import replace

import numpy as np
import pytest

from qotto.coherence import l1_coherence, stroke_coherence
from qotto.cycle import (efficiency_closed_form, otto_threshold,
                         reservoir_energies, run_cycle_trace)
from qotto.disorder import DisorderSpec, quenched_efficiency
from qotto.errors import DegeneracyError
from qotto.evolution import (analytic_propagator_g1, propagator_lab,
                             propagator_rotating, transition_probability)
from qotto.mat2 import DensityOp, EigenPair, eig_herm2
from qotto.model import EngineParams, h_cold, h_hot
from qotto.thermal import (beta_from_population, gibbs_state,
                           population_from_state)

BASE = dict(nu_cold_khz=2.0, nu_hot_khz=3.6, tau_us=100.0, g=0.2,
            p_plus_cold=0.261, p_plus_hot=0.99)

TAUS_US = np.linspace(100.0, 400.0, 5)
GS = np.linspace(-0.3, 1.0, 5)
P_COLDS = np.linspace(0.10, 0.45, 5)
P_HOTS = np.linspace(0.55, 0.99, 5)

N_STEPS = 20_000
WORKERS = min(8, os.cpu_count() or 1)

_propagators: dict = {}


def params(**overrides):
    return EngineParams.from_lab(**{**BASE, **overrides})


def cached_propagator(p, n_steps=N_STEPS):
    key = (p.nu_cold, p.nu_hot, p.tau, p.g, n_steps)
    if key not in _propagators:
        _propagators[key] = propagator_lab(p, n_steps).u
    return _propagators[key]


def closed_form_eta(p, n_steps=N_STEPS):
    u = cached_propagator(p, n_steps)
    return efficiency_closed_form(p, transition_probability(p, u))


def report(n, text):
    print(f"CRITERION {n}: PASS  {text}")


def test_criterion_1_closed_form_oracle_equivalence():
    t0 = time.perf_counter()
    worst_eta, worst_first_law = 0.0, 0.0
    for tau_us in TAUS_US:
        for g in GS:
            u = cached_propagator(params(tau_us=tau_us, g=g))
            for p_cold in P_COLDS:
                for p_hot in P_HOTS:
                    p = params(tau_us=tau_us, g=g, p_plus_cold=p_cold,
                               p_plus_hot=p_hot)
                    res = run_cycle_trace(p, u)
                    eta_closed = efficiency_closed_form(p, res.xi)
                    worst_eta = max(worst_eta, abs(eta_closed - res.eta))
                    worst_first_law = max(
                        worst_first_law,
                        abs(res.work + res.q_hot + res.q_cold))
    elapsed = time.perf_counter() - t0
    assert worst_eta < 1e-10
    assert worst_first_law < 1e-12
    assert elapsed < 60.0
    report(1, f"efficiency routes within {worst_eta:.2e}, first law within "
              f"{worst_first_law:.2e} on 625 points in {elapsed:.1f}s")


def test_criterion_2_dual_propagator_agreement():
    worst = 0.0
    for tau_us in TAUS_US:
        for g in GS:
            p = params(tau_us=tau_us, g=g)
            lab = cached_propagator(p).matrix
            rot = propagator_rotating(p, N_STEPS).u.matrix
            worst = max(worst, np.max(np.abs(lab - rot)))
    assert worst < 1e-8
    worst_analytic = 0.0
    for tau_us in TAUS_US:
        p = params(tau_us=tau_us, g=1.0)
        exact = analytic_propagator_g1(p).matrix
        lab = propagator_lab(p, 600_000).u.matrix
        rot = propagator_rotating(p, N_STEPS).u.matrix
        worst_analytic = max(worst_analytic,
                             np.max(np.abs(lab - exact)),
                             np.max(np.abs(rot - exact)))
    assert worst_analytic < 1e-10
    report(2, f"lab vs rotating within {worst:.2e} at matched resolution; "
              f"both within {worst_analytic:.2e} of the g=1 closed form")


def test_criterion_3_field_advantage_headline_numbers():
    d_100 = closed_form_eta(params(tau_us=100.0, g=0.2)) \
        - closed_form_eta(params(tau_us=100.0, g=0.0))
    assert d_100 == pytest.approx(0.012, abs=0.002)
    d_140 = closed_form_eta(params(tau_us=140.0, g=0.3)) \
        - closed_form_eta(params(tau_us=140.0, g=0.0))
    assert d_140 == pytest.approx(0.012, abs=0.002)
    # the 0.007 statement mixes driving times; evaluate both readings
    # and record the one that matches rather than assuming it
    eta_200_g3 = closed_form_eta(params(tau_us=200.0, g=0.3))
    same_tau = eta_200_g3 - closed_form_eta(params(tau_us=200.0, g=0.0))
    mixed_tau = eta_200_g3 - closed_form_eta(params(tau_us=100.0, g=0.0))
    readings = {"same-tau": same_tau, "mixed-tau": mixed_tau}
    matching = [name for name, val in readings.items()
                if abs(val - 0.007) <= 0.002]
    assert matching, f"neither reading matches 0.007: {readings}"
    report(3, f"advantages {d_100:+.4f} (100us, g=0.2), {d_140:+.4f} "
              f"(140us, g=0.3); 0.007 statement matches {matching} "
              f"(same-tau {same_tau:+.4f}, mixed-tau {mixed_tau:+.4f})")


def test_criterion_4_best_field_ratio_per_driving_time():
    g_set = (0.0, 0.1, 0.2, 0.3)
    best = {}
    for tau_us in (100.0, 140.0):
        etas = {g: closed_form_eta(params(tau_us=tau_us, g=g))
                for g in g_set}
        best[tau_us] = max(etas, key=etas.get)
    assert best[100.0] == 0.2
    assert best[140.0] == 0.3
    report(4, f"argmax g over {g_set}: {best[100.0]} at 100us, "
              f"{best[140.0]} at 140us")


def test_criterion_5_threshold_sign_equivalence():
    rng = np.random.default_rng(97)
    checked = 0
    while checked < 1000:
        p = params(tau_us=rng.uniform(60.0, 400.0),
                   g=rng.uniform(-0.3, 1.0),
                   p_plus_cold=rng.uniform(0.05, 0.49),
                   p_plus_hot=rng.uniform(0.51, 0.995))
        xi = rng.uniform(0.01, 0.99)
        ok, margin = otto_threshold(p)
        if abs(margin) < 1e-12:
            continue  # tie excluded by construction
        # the equivalence is a statement about engine operation
        s = (1.0 - 2.0 * p.p_plus_cold) - (1.0 - 2.0 * p.p_plus_hot)
        if 1.0 - 2.0 * xi * (1.0 - 2.0 * p.p_plus_cold) / s <= 1e-6:
            continue  # Q_hot <= 0: not an engine
        e_c, e_h = reservoir_energies(p)
        eta = efficiency_closed_form(p, xi)
        assert ((eta - (1.0 - e_c / e_h)) >= 0.0) == ok
        checked += 1
    report(5, "sign(eta - eta_otto) matched the threshold inequality on "
              "1000 engine-regime draws")


def test_criterion_6_adiabatic_limit_and_shape():
    p_slow = params(tau_us=10_000.0, g=0.0)
    res = propagator_lab(p_slow, 2_000_000, strict=True)
    xi_slow = transition_probability(p_slow, res.u)
    assert xi_slow < 1e-3

    taus = np.linspace(50.0, 400.0, 71)
    interior_max = {}
    for g in (0.0, 0.01, 0.2):
        xs = []
        for tau_us in taus:
            p = params(tau_us=tau_us, g=g)
            xs.append(transition_probability(p, propagator_lab(p, 8000).u))
        interior_max[g] = any(
            xs[i] > xs[i - 1] and xs[i] > xs[i + 1]
            for i in range(1, len(xs) - 1))
    # the rise-then-fall shape shows up for a finite z field; the
    # zero-field curve enters the window already past its maximum
    assert any(interior_max.values())
    assert interior_max[0.2]
    report(6, f"xi(10 ms) = {xi_slow:.2e}; interior maximum on the "
              f"50-400 us grid per g: {interior_max}")


def test_criterion_7_population_temperature_round_trip():
    worst_round, worst_tanh = 0.0, 0.0
    for which, h, nu in (("cold", h_cold(params()), 2000.0),
                         ("hot", h_hot(params()), 3600.0)):
        e = eig_herm2(h).e_plus
        wt = params().omega_tilde
        for pop in np.linspace(0.01, 0.99, 99):
            beta = beta_from_population(pop, nu, wt)
            back = population_from_state(gibbs_state(h, beta), h)
            worst_round = max(worst_round, abs(back - pop))
            worst_tanh = max(worst_tanh,
                             abs(math.tanh(beta.beta * e) - (1.0 - 2.0 * pop)))
    assert worst_round < 1e-10
    assert worst_tanh < 1e-12
    report(7, f"round trip within {worst_round:.2e}, tanh identity within "
              f"{worst_tanh:.2e} on 99-point grids, both reservoirs")


def test_criterion_8_coherence_suite():
    p = params(p_plus_hot=0.9)
    # thermal endpoints carry no coherence in their own bases
    beta_c = beta_from_population(p.p_plus_cold, p.nu_cold, p.omega_tilde)
    beta_h = beta_from_population(p.p_plus_hot, p.nu_hot, p.omega_tilde)
    zero_in = l1_coherence(gibbs_state(h_cold(p), beta_c),
                           eig_herm2(h_cold(p)))
    zero_th = l1_coherence(gibbs_state(h_hot(p), beta_h),
                           eig_herm2(h_hot(p)))
    assert zero_in < 1e-14 and zero_th < 1e-14

    # basis-phase invariance
    u = cached_propagator(p)
    rho_exp = DensityOp(u.matrix @ gibbs_state(h_cold(p), beta_c).matrix
                        @ u.matrix.conj().T)
    basis = eig_herm2(h_hot(p))
    reference = l1_coherence(rho_exp, basis)
    rng = np.random.default_rng(101)
    for _ in range(25):
        ph = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, 2))
        twisted = EigenPair(basis.e_plus, basis.e_minus,
                            ph[0] * basis.psi_plus, ph[1] * basis.psi_minus)
        assert abs(l1_coherence(rho_exp, twisted) - reference) < 1e-12

    # a window in 100..200 us where the z field wins, at p+_hot = 0.9
    taus = np.linspace(100.0, 200.0, 6)
    wins = []
    for tau_us in taus:
        off = stroke_coherence(params(tau_us=tau_us, g=0.0,
                                      p_plus_hot=0.9), 8000)
        on = stroke_coherence(params(tau_us=tau_us, g=0.2,
                                     p_plus_hot=0.9), 8000)
        wins.append(on.c_exp > off.c_exp and on.c_comp > off.c_comp)
    assert any(wins)
    report(8, f"thermal endpoints <1e-14; phase invariance within 1e-12; "
              f"z-field coherence window at taus {list(taus[np.array(wins)])}")


def test_criterion_9_disorder_suite():
    t0 = time.perf_counter()
    p = params()

    # sigma = 0 reduces to the clean engine exactly
    clean = quenched_efficiency(
        p, DisorderSpec("gaussian", 0.0, 1000, 1), 5000)
    u = propagator_lab(p, 5000).u
    eta_clean = efficiency_closed_form(p, transition_probability(p, u))
    assert abs(clean.mean_eta - eta_clean) < 1e-12
    assert clean.std_error == 0.0

    # Monte Carlo vs Gauss quadrature at three strengths
    z_scores = {}
    mc_means = {}
    for sigma in (0.01, 0.05, 0.1):
        mc = quenched_efficiency(
            p, DisorderSpec("gaussian", sigma, 100_000, 20_260_809),
            5000, workers=WORKERS)
        quad = quenched_efficiency(
            p, DisorderSpec("gaussian", sigma, 1, 0, method="quadrature",
                            quadrature_order=16), 5000)
        z_scores[sigma] = abs(mc.mean_eta - quad.mean_eta) / mc.std_error
        mc_means[sigma] = mc.mean_eta
        assert z_scores[sigma] < 3.0

    # byte-for-byte determinism across reruns and worker counts
    spec = DisorderSpec("gaussian", 0.01, 4096, 20_260_809)
    runs = [quenched_efficiency(p, spec, 2000, workers=w)
            for w in (1, 2, WORKERS, 1)]
    assert all(r == runs[0] for r in runs)

    # the moderate-strength average still beats the clean zero-field
    # engine
    p0 = params(g=0.0)
    u0 = propagator_lab(p0, 5000).u
    eta_g0 = efficiency_closed_form(p0, transition_probability(p0, u0))
    assert mc_means[0.05] > eta_g0

    # reduced per-sample resolution does not move the average
    coarse = quenched_efficiency(
        p, DisorderSpec("gaussian", 0.05, 1, 0, method="quadrature"), 5000)
    fine = quenched_efficiency(
        p, DisorderSpec("gaussian", 0.05, 1, 0, method="quadrature"), 20_000)
    assert abs(coarse.mean_eta - fine.mean_eta) < 1e-5

    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    report(9, f"z-scores {dict((k, round(v, 2)) for k, v in z_scores.items())}"
              f"; deterministic across reruns and 1/2/{WORKERS} workers; "
              f"<eta(0.05)> - eta_clean(g=0) = "
              f"{mc_means[0.05] - eta_g0:+.4f}; suite in {elapsed:.0f}s "
              f"on {WORKERS} workers")


def test_criterion_10_pointwise_reproduction_excluded():
    # shape and ordering claims (criteria 3, 4, 6, 8, 9) stand in for
    # pointwise curve reproduction, whose inputs are not public
    report(10, "pointwise figure reproduction intentionally not asserted")
