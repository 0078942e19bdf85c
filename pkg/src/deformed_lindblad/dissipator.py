"""Thermal-reservoir dissipator and time evolution for the deformed ladder.

The reduced density matrix evolves under a generalized Lindblad-type
generator whose jump structure couples adjacent levels n <-> n+1 with the
amplitude g(n) = eta(n) f(n+1) sqrt(n+1) and level-dependent rates

    K1(n) = gamma(n-1)/2 (nbar(Omega(n-1)) + 1)     loss, downward
    K2(n) = gamma(n)/2    nbar(Omega(n))            loss, upward
    K3(n) = gamma(n-1)/2  nbar(Omega(n-1))          gain, upward
    K4(n) = gamma(n)/2   (nbar(Omega(n)) + 1)       gain, downward

with gamma(n) = gamma_scale (Omega(n)/omega0)^3 omega0 and nbar the Planck
occupation at dimensionless inverse temperature theta.  In the number basis,

    d rho_mn/dt = -i (E_m - E_n) rho_mn
                  - (K1(m) g(m-1)^2 + K2(m) g(m)^2
                     + K1(n) g(n-1)^2 + K2(n) g(n)^2) rho_mn
                  + (K3(m) + K3(n)) g(m-1) g(n-1) rho_{m-1,n-1}
                  + (K4(m) + K4(n)) g(m) g(n)     rho_{m+1,n+1}.

Note the downward gain carries the full product g(m) g(n), i.e. the factor
sqrt((m+1)(n+1)) is present.  Without it the generator does not conserve
trace even in the harmonic limit; with it, the index identities
K3(n+1) = K2(n) and K4(n-1) = K1(n) make trace conservation exact.

Optional frequency-shift coefficients delta1..delta4 (Stark and Lamb type)
enter as commutator terms that perturb off-diagonal elements only.  They are
principal-value integrals that diverge without an ultraviolet cutoff, so
they are disabled by default and require an explicit cutoff when enabled.

A caution on positivity: this generator is Lindblad-like but not completely
positive.  Its gain terms weight the sandwich F rho F^dag by the arithmetic
mean of the rates at the two levels involved, where a completely positive
generator would carry the geometric mean.  States with coherences therefore
acquire a small transient negative eigenvalue, below 1e-3 in magnitude in
the worst measured case (even cat, theta = 4, 15 levels, gamma_scale <= 2)
and vanishing in the harmonic limit where the rates are level independent.
Trace and Hermiticity are conserved exactly.  The integrator aborts only
when an eigenvalue falls below EIG_ABORT_FLOOR, which is set well outside
that intrinsic band so it still catches genuine numerical breakage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .fock_algebra import OscillatorModel, gap_frequencies, hamiltonian

__all__ = [
    "ReservoirParams",
    "RateTable",
    "IntegrationError",
    "EvolutionResult",
    "planck_nbar",
    "gamma_of_n",
    "rate_table",
    "shift_table",
    "shift_sensitivity",
    "jump_amplitudes",
    "liouvillian_apply",
    "build_generator",
    "integrate",
    "steady_state",
    "detailed_balance_populations",
    "purity",
    "mean_occupation",
    "validate_density",
]

TRACE_TOL = 1e-9
TRACE_ABORT = 1e-7
HERMITICITY_TOL = 1e-10
# Abort threshold for negative eigenvalues.  The generator itself produces
# transient negativity up to about 1e-3 on coherent states (see the module
# docstring), so the abort floor sits an order of magnitude below that band
# rather than at round-off scale.
EIG_ABORT_FLOOR = -1e-2

# Damping prefactor with every physical constant in the decay-rate
# expression set to one (the convention of the source model), which makes
# gamma(n)/2 = (2/3) Omega(n)^3: gamma_scale = 4/3.
DEFAULT_GAMMA_SCALE = 4.0 / 3.0


@dataclass(frozen=True)
class ReservoirParams:
    """Thermal reservoir: inverse temperature and damping strength.

    theta is hbar omega0 / (k_B T); gamma_scale is the dimensionless damping
    prefactor multiplying (Omega(n)/omega0)^3.  The default 4/3 corresponds
    to setting every physical constant in the dipole decay rate to one.
    shift_cutoff (in units of omega0) is required only when shifts_enabled,
    because the shift integrals grow without bound as the upper limit
    increases.
    """

    theta: float
    gamma_scale: float = DEFAULT_GAMMA_SCALE
    shifts_enabled: bool = False
    shift_cutoff: float | None = None

    def __post_init__(self) -> None:
        if not self.theta > 0.0:
            raise ValueError(f"theta must be positive, got {self.theta}")
        if self.gamma_scale < 0.0:
            raise ValueError(f"gamma_scale must be >= 0, got {self.gamma_scale}")
        if self.shifts_enabled and self.shift_cutoff is None:
            raise ValueError("shift_cutoff is required when shifts_enabled")


@dataclass(frozen=True)
class RateTable:
    """Per-level rates K1..K4 and frequency shifts delta1..delta4.

    All arrays run over n = 0..dim-1 in units of omega0.  Entries at n = 0
    that would reference the gap below the ground state are zero; they always
    multiply the structural zero g(-1).  The identities K3(n+1) = K2(n) and
    K4(n-1) = K1(n) hold bitwise by construction.
    """

    K1: np.ndarray
    K2: np.ndarray
    K3: np.ndarray
    K4: np.ndarray
    delta1: np.ndarray
    delta2: np.ndarray
    delta3: np.ndarray
    delta4: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.K1)


class IntegrationError(RuntimeError):
    """A density-matrix invariant broke during time evolution."""

    def __init__(self, message: str, time: float, drift: float):
        super().__init__(message)
        self.time = time
        self.drift = drift


def planck_nbar(omega: float, reservoir: ReservoirParams, omega0: float = 1.0) -> float:
    """Planck occupation 1 / (exp(theta omega / omega0) - 1)."""
    if not omega > 0.0:
        raise ValueError(f"frequency must be positive, got {omega}")
    with np.errstate(over="ignore"):
        return float(1.0 / np.expm1(reservoir.theta * omega / omega0))


def gamma_of_n(n: int, model: OscillatorModel, reservoir: ReservoirParams) -> float:
    """Generalized decay rate gamma(n) = gamma_scale (Omega(n)/omega0)^3 omega0."""
    from .fock_algebra import gap_frequency

    gap = gap_frequency(model, n)
    return reservoir.gamma_scale * (gap / model.omega0) ** 3 * model.omega0


def rate_table(model: OscillatorModel, reservoir: ReservoirParams) -> RateTable:
    """Build K1..K4 (and shifts, when enabled) for every level of the model."""
    dim = model.dim
    gaps = gap_frequencies(model)
    bad = np.flatnonzero(gaps <= 0.0)
    if bad.size:
        n = int(bad[0])
        raise ValueError(
            f"non-positive gap Omega({n}) = {gaps[n]} inside the ladder; "
            "rates undefined"
        )
    half_gamma = 0.5 * reservoir.gamma_scale * (gaps / model.omega0) ** 3 * model.omega0
    with np.errstate(over="ignore"):
        nbar = 1.0 / np.expm1(reservoir.theta * gaps / model.omega0)

    k1 = np.zeros(dim)
    k2 = half_gamma * nbar
    k3 = np.zeros(dim)
    k4 = half_gamma * (nbar + 1.0)
    k1[1:] = k4[:-1]
    k3[1:] = k2[:-1]

    zeros = np.zeros(dim)
    if reservoir.shifts_enabled:
        d1, d2, d3, d4 = shift_table(model, reservoir)
    else:
        d1 = d2 = d3 = d4 = zeros
    return RateTable(K1=k1, K2=k2, K3=k3, K4=k4,
                     delta1=d1, delta2=d2, delta3=d3, delta4=d4)


def _principal_value(weight, pole: float, cutoff: float) -> float:
    """P.V. of integral_0^cutoff weight(w) / (pole - w) dw.

    Splits at the pole and pairs symmetric points across it, leaving a
    regular integrand for adaptive quadrature.
    """
    if cutoff <= pole:
        raise ValueError(f"cutoff {cutoff} must exceed the pole {pole}")
    half = min(pole, cutoff - pole)

    def paired(u):
        return (weight(pole + u) - weight(pole - u)) / u

    total, _ = quad(paired, 0.0, half, limit=200)
    total = -total  # 1/(pole - w) = -1/(w - pole)
    if pole - half > 0.0:
        left, _ = quad(lambda w: weight(w) / (pole - w), 0.0, pole - half, limit=200)
        total += left
    if pole + half < cutoff:
        right, _ = quad(lambda w: weight(w) / (pole - w), pole + half, cutoff, limit=200)
        total += right
    return total


def shift_table(
    model: OscillatorModel, reservoir: ReservoirParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Frequency-shift coefficients delta1..delta4 by principal-value quadrature.

    Each integral runs over w in (0, cutoff) with the integrand
    (w^3 / Omega^3) occupancy(w) / (Omega - w); delta1/delta4 use the
    stimulated-plus-spontaneous weight (nbar + 1), delta2/delta3 the thermal
    weight nbar.  delta1 and delta3 at level n sit at the lower gap
    Omega(n-1) and are zero at n = 0 where no lower gap exists.
    """
    if not reservoir.shifts_enabled:
        dim = model.dim
        z = np.zeros(dim)
        return z, z.copy(), z.copy(), z.copy()
    cutoff = float(reservoir.shift_cutoff) * model.omega0
    gaps = gap_frequencies(model)
    if cutoff <= np.max(gaps):
        raise ValueError(
            f"shift_cutoff {reservoir.shift_cutoff} omega0 lies below the "
            f"largest gap {np.max(gaps) / model.omega0} omega0"
        )
    theta = reservoir.theta / model.omega0
    half_gamma = 0.5 * reservoir.gamma_scale * (gaps / model.omega0) ** 3 * model.omega0

    def spontaneous(w):
        return w**3 * (1.0 / np.expm1(theta * w) + 1.0)

    def thermal(w):
        return w**3 / np.expm1(theta * w)

    dim = model.dim
    d1 = np.zeros(dim)
    d2 = np.zeros(dim)
    d3 = np.zeros(dim)
    d4 = np.zeros(dim)
    pv_spont = [ _principal_value(spontaneous, g, cutoff) for g in gaps ]
    pv_therm = [ _principal_value(thermal, g, cutoff) for g in gaps ]
    for n in range(dim):
        scale = half_gamma[n] / (np.pi * gaps[n] ** 3)
        d2[n] = -scale * pv_therm[n]
        d4[n] = -scale * pv_spont[n]
        if n >= 1:
            scale_lo = half_gamma[n - 1] / (np.pi * gaps[n - 1] ** 3)
            d1[n] = scale_lo * pv_spont[n - 1]
            d3[n] = scale_lo * pv_therm[n - 1]
    return d1, d2, d3, d4


def shift_sensitivity(
    model: OscillatorModel, reservoir: ReservoirParams
) -> dict[str, float]:
    """Max |delta(2 cutoff) - delta(cutoff)| per coefficient.

    The integrals are cutoff-dependent by construction, so this diagnostic is
    expected to be non-negligible; it quantifies how much physics the cutoff
    convention is absorbing.
    """
    if not reservoir.shifts_enabled:
        raise ValueError("shift sensitivity requires shifts_enabled")
    doubled = ReservoirParams(
        theta=reservoir.theta,
        gamma_scale=reservoir.gamma_scale,
        shifts_enabled=True,
        shift_cutoff=2.0 * reservoir.shift_cutoff,
    )
    base = shift_table(model, reservoir)
    wide = shift_table(model, doubled)
    names = ("delta1", "delta2", "delta3", "delta4")
    return {
        name: float(np.max(np.abs(w - b)))
        for name, b, w in zip(names, base, wide)
    }


def jump_amplitudes(model: OscillatorModel, eta_values: Sequence[float]) -> np.ndarray:
    """Transition amplitudes g(n) = eta(n) f(n+1) sqrt(n+1) for n = 0..dim-1.

    g(n) couples levels n and n+1.  The top entry g(dim-1) is forced to zero:
    it would couple to the first discarded level, and dropping both its loss
    and gain contributions together is what keeps the truncated generator
    trace-preserving.  (For the Morse ladder eta(N-1) = 0 makes this exact
    rather than a truncation choice.)
    """
    etas = np.asarray(eta_values, dtype=float)
    if len(etas) < model.dim:
        raise ValueError(
            f"need eta values for levels 0..{model.dim - 1}, got {len(etas)}"
        )
    g = np.zeros(model.dim)
    for n in range(model.dim - 1):
        g[n] = etas[n] * model.deformation.f(n + 1) * np.sqrt(n + 1.0)
    return g


@dataclass(frozen=True)
class _Generator:
    """Precomputed pieces of the number-basis generator."""

    omega_diff: np.ndarray      # (E_m - E_n), real dim x dim
    loss: np.ndarray            # K1 g(.-1)^2 + K2 g(.)^2 per level
    gain_up: np.ndarray         # (K3(m)+K3(n)) g(m-1) g(n-1), valid for m,n >= 1
    gain_down: np.ndarray       # (K4(m)+K4(n)) g(m) g(n), valid for m,n <= dim-2
    shift_diff: np.ndarray | None
    shift_up: np.ndarray | None
    shift_down: np.ndarray | None

    def apply(self, rho: np.ndarray) -> np.ndarray:
        loss = self.loss
        out = (-1j * self.omega_diff - (loss[:, None] + loss[None, :])) * rho
        out[1:, 1:] += self.gain_up[1:, 1:] * rho[:-1, :-1]
        out[:-1, :-1] += self.gain_down[:-1, :-1] * rho[1:, 1:]
        if self.shift_diff is not None:
            out += -1j * self.shift_diff * rho
            out[1:, 1:] += -1j * self.shift_up[1:, 1:] * rho[:-1, :-1]
            out[:-1, :-1] += -1j * self.shift_down[:-1, :-1] * rho[1:, 1:]
        return out


def build_generator(
    model: OscillatorModel, rates: RateTable, eta_values: Sequence[float]
) -> _Generator:
    """Assemble the generator once; reuse across many applications."""
    if rates.dim != model.dim:
        raise ValueError(
            f"rate table dimension {rates.dim} != model dimension {model.dim}"
        )
    g = jump_amplitudes(model, eta_values)
    g2 = g * g
    g2_below = np.concatenate(([0.0], g2[:-1]))   # g(n-1)^2 with g(-1) = 0
    g_below = np.concatenate(([0.0], g[:-1]))

    energies = np.diag(hamiltonian(model))
    omega_diff = energies[:, None] - energies[None, :]
    loss = rates.K1 * g2_below + rates.K2 * g2
    gain_up = (rates.K3[:, None] + rates.K3[None, :]) * np.outer(g_below, g_below)
    gain_down = (rates.K4[:, None] + rates.K4[None, :]) * np.outer(g, g)

    shift_diff = shift_up = shift_down = None
    if np.any(rates.delta1) or np.any(rates.delta2) or np.any(rates.delta3) or np.any(rates.delta4):
        level_shift = rates.delta1 * g2_below + rates.delta2 * g2
        shift_diff = level_shift[:, None] - level_shift[None, :]
        shift_up = (rates.delta3[:, None] - rates.delta3[None, :]) * np.outer(g_below, g_below)
        shift_down = (rates.delta4[:, None] - rates.delta4[None, :]) * np.outer(g, g)
    return _Generator(
        omega_diff=omega_diff,
        loss=loss,
        gain_up=gain_up,
        gain_down=gain_down,
        shift_diff=shift_diff,
        shift_up=shift_up,
        shift_down=shift_down,
    )


def liouvillian_apply(
    rho: np.ndarray,
    model: OscillatorModel,
    rates: RateTable,
    eta_values: Sequence[float],
) -> np.ndarray:
    """Right-hand side d rho/dt for a single density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (model.dim, model.dim):
        raise ValueError(
            f"density matrix shape {rho.shape} != ({model.dim}, {model.dim})"
        )
    return build_generator(model, rates, eta_values).apply(rho)


def validate_density(
    rho: np.ndarray,
    time: float = 0.0,
    trace_abort: float = TRACE_ABORT,
    herm_tol: float = HERMITICITY_TOL,
    eig_floor: float = EIG_ABORT_FLOOR,
) -> dict[str, float]:
    """Check Hermiticity, trace, and positivity; raise IntegrationError on breach."""
    trace_err = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
    herm_err = float(np.max(np.abs(rho - rho.conj().T)))
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    if trace_err > trace_abort:
        raise IntegrationError(
            f"trace drift {trace_err:.3e} exceeds {trace_abort} at t = {time}",
            time=time, drift=trace_err,
        )
    if herm_err > herm_tol:
        raise IntegrationError(
            f"Hermiticity deviation {herm_err:.3e} exceeds {herm_tol} at t = {time}",
            time=time, drift=herm_err,
        )
    if min_eig < eig_floor:
        raise IntegrationError(
            f"negative eigenvalue {min_eig:.3e} below {eig_floor} at t = {time}",
            time=time, drift=min_eig,
        )
    return {"trace_error": trace_err, "hermiticity_error": herm_err, "min_eigenvalue": min_eig}


def _rk4_step(gen: _Generator, rho: np.ndarray, dt: float) -> np.ndarray:
    k1 = gen.apply(rho)
    k2 = gen.apply(rho + 0.5 * dt * k1)
    k3 = gen.apply(rho + 0.5 * dt * k2)
    k4 = gen.apply(rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass
class EvolutionResult:
    """Snapshots at the requested sample times plus run diagnostics."""

    times: list[float]
    states: list[np.ndarray]
    diagnostics: dict[str, float] = field(default_factory=dict)


def integrate(
    rho0: np.ndarray,
    model: OscillatorModel,
    rates: RateTable,
    eta_values: Sequence[float],
    t_final: float,
    dt: float,
    sample_times: Sequence[float] | None = None,
) -> EvolutionResult:
    """Fixed-step fourth-order propagation with an error monitor.

    Steps with constant dt (trimming the last step of each sample interval so
    snapshots land exactly on the requested times).  Once per interval the
    local error is estimated by comparing a full step against two half steps;
    the running maximum is reported in diagnostics.  Every snapshot must pass
    the density-matrix invariants, and the run aborts if the trace drifts
    beyond TRACE_ABORT.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_final < 0.0:
        raise ValueError(f"t_final must be >= 0, got {t_final}")
    if sample_times is None:
        sample_times = [0.0, t_final] if t_final > 0.0 else [0.0]
    samples = [float(t) for t in sample_times]
    if any(t < 0.0 for t in samples) or sorted(samples) != samples:
        raise ValueError(f"sample times must be sorted and non-negative: {samples}")
    if samples and samples[-1] > t_final + 1e-12:
        raise ValueError(
            f"last sample time {samples[-1]} exceeds t_final {t_final}"
        )

    gen = build_generator(model, rates, eta_values)
    rho = np.asarray(rho0, dtype=complex).copy()
    if rho.shape != (model.dim, model.dim):
        raise ValueError(
            f"initial density matrix shape {rho.shape} != ({model.dim}, {model.dim})"
        )

    result = EvolutionResult(times=[], states=[])
    max_trace = max_herm = 0.0
    min_eig = 1.0
    step_err = 0.0
    t = 0.0
    for target in samples:
        monitored = False
        while target - t > 1e-12:
            step = min(dt, target - t)
            if not monitored:
                full = _rk4_step(gen, rho, step)
                halves = _rk4_step(gen, _rk4_step(gen, rho, 0.5 * step), 0.5 * step)
                step_err = max(step_err, float(np.max(np.abs(full - halves))))
                monitored = True
                rho = full
            else:
                rho = _rk4_step(gen, rho, step)
            t += step
        t = target
        checks = validate_density(rho, time=t)
        max_trace = max(max_trace, checks["trace_error"])
        max_herm = max(max_herm, checks["hermiticity_error"])
        min_eig = min(min_eig, checks["min_eigenvalue"])
        result.times.append(t)
        result.states.append(rho.copy())
    result.diagnostics = {
        "max_trace_error": max_trace,
        "max_hermiticity_error": max_herm,
        "min_eigenvalue": min_eig,
        "step_doubling_error": step_err,
    }
    return result


def steady_state(
    model: OscillatorModel,
    rates: RateTable,
    eta_values: Sequence[float],
    residual_tol: float = 1e-12,
    relative_tol: float = 1e-9,
    max_time: float = 2e5,
) -> np.ndarray:
    """Stationary state by relaxing the maximally mixed state.

    The maximally mixed start is diagonal, and the generator keeps it so; the
    effective dynamics is a birth-death chain whose rates set a safe step
    size.  Iterates until the generator residual ||d rho/dt||_max falls below
    residual_tol AND every diagonal relative rate |dp_n/dt| / p_n falls below
    relative_tol, or raises with the residual achieved by max_time.  The
    relative condition matters because the coldest rungs hold populations
    many orders of magnitude below the residual floor: the max-norm residual
    alone would declare victory while the tail, relaxing at the slowest rate
    in the ladder, is still far from its rung-by-rung balance.
    """
    if not np.any(rates.K1[1:]) and not np.any(rates.K4[:-1]):
        raise ValueError("steady state requires nonzero damping")
    gen = build_generator(model, rates, eta_values)
    rho = np.eye(model.dim, dtype=complex) / model.dim
    fastest = float(np.max(2.0 * gen.loss))
    dt = 0.5 / fastest
    t = 0.0
    check_every = 64
    while t < max_time:
        for _ in range(check_every):
            rho = _rk4_step(gen, rho, dt)
        t += check_every * dt
        derivative = gen.apply(rho)
        residual = float(np.max(np.abs(derivative)))
        relative = float(
            np.max(np.abs(np.diag(derivative).real) / np.diag(rho).real)
        )
        if residual < residual_tol and relative < relative_tol:
            rho /= np.trace(rho).real
            return rho
    raise RuntimeError(
        f"steady state not converged by t = {max_time}: residual {residual:.3e} "
        f"(tolerance {residual_tol}), relative rate {relative:.3e} "
        f"(tolerance {relative_tol})"
    )


def detailed_balance_populations(rates: RateTable) -> np.ndarray:
    """Stationary populations predicted by rung-by-rung flux balance.

    Upward flux from n equals downward flux from n+1 when
    p(n+1)/p(n) = K2(n)/K1(n+1), which is the Boltzmann factor over the local
    gap.  This is an independent cross-check route for the evolved steady
    state, not a substitute for it.
    """
    dim = rates.dim
    ratios = rates.K2[:-1] / rates.K1[1:]
    log_p = np.concatenate(([0.0], np.cumsum(np.log(ratios))))
    p = np.exp(log_p - np.max(log_p))
    return p / np.sum(p)


def purity(rho: np.ndarray) -> float:
    """Tr rho^2 (real part; imaginary residue is round-off for Hermitian rho)."""
    return float(np.einsum("ij,ji->", rho, rho).real)


def mean_occupation(rho: np.ndarray) -> float:
    """<n> = sum_n n rho_nn."""
    return float(np.dot(np.arange(rho.shape[0]), np.diag(rho).real))
