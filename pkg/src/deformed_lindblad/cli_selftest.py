"""Fast invariant battery behind `deformed-lindblad selftest`.

Each check prints one pass/fail line; the battery is meant to finish in a
few seconds and catch broken numerics, not to replace the full test suite.
"""

from __future__ import annotations

import math

import numpy as np

from .coherent_states import alpha_for_mean_n, docs_from_alpha, to_density
from .dissipator import (
    ReservoirParams,
    detailed_balance_populations,
    integrate,
    purity,
    rate_table,
    steady_state,
)
from .fock_algebra import OscillatorModel, eigenoperator_residual, harmonic_deformation
from .morse import MorseParams, eta_values, morse_model, wavefunction_table
from .phasespace import bessel_k_complex_order


def run_selftest() -> bool:
    params = MorseParams(15)
    model = morse_model(params)
    etas = eta_values(params)
    reservoir = ReservoirParams(theta=4.0)
    rates = rate_table(model, reservoir)
    checks: list[tuple[str, bool, str]] = []

    residual = eigenoperator_residual(model)
    checks.append(("eigenoperator residual (morse)", residual < 1e-12, f"{residual:.2e}"))

    harmonic = OscillatorModel(1.0, 8, harmonic_deformation())
    residual_h = eigenoperator_residual(harmonic)
    checks.append(("eigenoperator residual (harmonic)", residual_h < 1e-12, f"{residual_h:.2e}"))

    cap = (math.pi / 2 - 1e-9) / params.chi
    alpha = alpha_for_mean_n(2.0, lambda a, m: docs_from_alpha(a, params), model, alpha_max=cap)
    rho0 = to_density(docs_from_alpha(alpha, params))
    evolution = integrate(rho0, model, rates, etas, t_final=1.0, dt=1e-3, sample_times=[0.0, 1.0])
    drift = evolution.diagnostics["max_trace_error"]
    checks.append(("trace drift over one time unit", drift < 1e-9, f"{drift:.2e}"))
    checks.append(
        ("purity within (0, 1]", 0.0 < purity(evolution.states[-1]) <= 1.0 + 1e-12,
         f"{purity(evolution.states[-1]):.6f}")
    )

    stationary = steady_state(model, rates, etas)
    predicted = detailed_balance_populations(rates)
    balance = float(np.max(np.abs(np.diag(stationary).real - predicted)))
    checks.append(("steady state matches detailed balance", balance < 1e-8, f"{balance:.2e}"))

    k_half = bessel_k_complex_order(0.5, 1.0)
    k_exact = math.sqrt(math.pi / 2.0) * math.exp(-1.0)
    bessel_err = abs(k_half - k_exact)
    checks.append(("K_{1/2}(1) spot value", bessel_err < 1e-8, f"err {bessel_err:.2e}"))

    table = wavefunction_table(params, np.linspace(-3.0, 30.0, 4001))
    ortho = table.orthonormality_residual()
    checks.append(("wavefunction orthonormality", ortho < 1e-6, f"{ortho:.2e}"))

    all_ok = True
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        print(f"{status}  {name}: {detail}")
        all_ok = all_ok and ok
    return all_ok
