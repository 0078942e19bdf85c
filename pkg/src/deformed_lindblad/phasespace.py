"""Wigner phase-space maps of Morse-ladder density matrices.

Two independent routes to the same function:

* wigner_closed evaluates the analytic double sum obtained by inserting the
  bound-state wavefunctions into the Wigner integral.  Each term carries a
  modified Bessel function of the second kind at complex order
  D - 2ip/(hbar beta) with integer D, evaluated here by panel quadrature of

      K_nu(x) = integral_0^inf exp(-x cosh t) cosh(nu t) dt,   x > 0,

  which is valid for arbitrary complex order.
* wigner_direct_oracle builds the coordinate-space kernel
  rho(r + y/2, r - y/2) from the wavefunctions and Fourier-transforms in y
  with refinement-controlled quadrature.  It is the testing reference, kept
  deliberately free of the combinatorics the closed form relies on.

A note on precision: the closed-form expansion is ill conditioned.  For
states with coherences between distant levels, the individual Bessel-
weighted terms near the potential minimum exceed the assembled value by up
to nine orders of magnitude, so ordinary doubles leave only six to seven
correct digits.  The closed-form pipeline therefore runs in extended
precision (x86 80-bit long double) with exact integer combinatorics, which
restores agreement with the direct-integral oracle to well below the
comparison tolerances.  On platforms where numpy's longdouble is plain
float64 the closed form still works, with accuracy degraded to the
conditioning limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .morse import MorseParams, morse_wavefunction

__all__ = [
    "GridSpec",
    "WignerGrid",
    "WignerDiagnostics",
    "BesselAccuracyError",
    "bessel_k_complex_order",
    "wigner_closed",
    "wigner_direct_oracle",
    "wigner_diagnostics",
]

_LD = np.longdouble

# log-integrand drop below the peak at which the Bessel integral is truncated
_TAIL_DROP = 45.0


class BesselAccuracyError(RuntimeError):
    """Panel refinement exhausted before reaching the accuracy target."""

    def __init__(self, message: str, estimate=None, error: float = float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class GridSpec:
    """Rectangular phase-space window (defaults sized for a 15-level ladder)."""

    r_min: float = -2.0
    r_max: float = 10.0
    n_r: int = 121
    p_min: float = -6.0
    p_max: float = 6.0
    n_p: int = 121

    def __post_init__(self) -> None:
        if self.n_r < 2 or self.n_p < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if not (self.r_max > self.r_min and self.p_max > self.p_min):
            raise ValueError("grid extents must be increasing")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.r_min, self.r_max, self.n_r),
            np.linspace(self.p_min, self.p_max, self.n_p),
        )


@dataclass(frozen=True)
class WignerGrid:
    """Real Wigner values on the (r, p) grid for one time slice."""

    r_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    time: float = 0.0


@dataclass(frozen=True)
class WignerDiagnostics:
    """Scalar summaries of one Wigner grid against its density matrix."""

    norm: float
    purity_w: float
    purity_m: float
    min_w: float
    min_w_location: tuple[float, float]
    max_w: float


def _ld_int(value: int) -> np.longdouble:
    """Exact integer -> longdouble conversion (python ints can exceed 2^53)."""
    if -(2**53) < value < 2**53:
        return _LD(value)
    hi, lo = divmod(value, 2**53)
    return _ld_int(hi) * _LD(2**53) + _LD(lo)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_nodes(n: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1] at longdouble precision.

    Double-precision seeds are polished with Newton steps on the longdouble
    Legendre recurrence; weights come from the standard derivative formula.
    """
    cached = _GL_CACHE.get(n)
    if cached is not None:
        return cached
    x = np.polynomial.legendre.leggauss(n)[0].astype(_LD)
    for _ in range(3):
        p_prev = np.ones_like(x)
        p_curr = x.copy()
        for i in range(2, n + 1):
            p_prev, p_curr = p_curr, ((2 * i - 1) * x * p_curr - (i - 1) * p_prev) / i
        dp = n * (x * p_curr - p_prev) / (x * x - 1.0)
        x = x - p_curr / dp
    p_prev = np.ones_like(x)
    p_curr = x.copy()
    for i in range(2, n + 1):
        p_prev, p_curr = p_curr, ((2 * i - 1) * x * p_curr - (i - 1) * p_prev) / i
    dp = n * (x * p_curr - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    _GL_CACHE[n] = (x, w)
    return x, w


def _tail_cutoff(x: float, re_order: float) -> float:
    """Smallest t beyond the integrand peak where the log-integrand has
    dropped _TAIL_DROP below its peak value."""
    re = abs(re_order)
    t_peak = math.asinh(re / x) if re > 0.0 else 0.0
    log_peak = -x * math.cosh(t_peak) + re * t_peak

    def excess(t: float) -> float:
        return (-x * math.cosh(t) + re * t) - (log_peak - _TAIL_DROP)

    hi = t_peak + 1.0
    for _ in range(200):
        if excess(hi) < 0.0:
            break
        hi = t_peak + 1.5 * (hi - t_peak)
    else:
        return hi
    lo = t_peak
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def _panel_edges(t_max: float, x_large: float, b_max: float) -> np.ndarray:
    """Graded panel edges on [0, t_max].

    Early panels resolve the exp(-x cosh t) boundary layer (width about
    1/sqrt(x) for large x); the panel width then grows geometrically up to a
    cap small enough that 16-node Gauss-Legendre resolves the cos(b t)
    oscillation to spectral accuracy.
    """
    cap = min(0.5, 6.0 / (1.0 + b_max))
    width = min(cap, 1.6 / math.sqrt(1.0 + x_large))
    edges = [0.0]
    t = 0.0
    while t < t_max:
        t = min(t + width, t_max)
        edges.append(t)
        width = min(width * 1.6, cap)
    return np.asarray(edges)


def _nodes_weights(
    edges: np.ndarray, level: int, dtype=np.float64
) -> tuple[np.ndarray, np.ndarray]:
    """GL nodes/weights after splitting each base panel 2^level times."""
    xg, wg = _gl_nodes()
    xg = xg.astype(dtype)
    wg = wg.astype(dtype)
    splits = 2**level
    fine = np.concatenate(
        [np.linspace(a, b, splits + 1)[:-1] for a, b in zip(edges[:-1], edges[1:])]
        + [edges[-1:]]
    ).astype(dtype)
    a = fine[:-1][:, None]
    b = fine[1:][:, None]
    nodes = (0.5 * (b - a) * xg[None, :] + 0.5 * (a + b)).ravel()
    weights = (0.5 * (b - a) * wg[None, :]).ravel()
    return nodes, weights


def bessel_k_complex_order(
    nu: complex, x: float, rtol: float = 1e-9, max_levels: int = 8
) -> complex:
    """K_nu(x) for arbitrary complex order by refinement-controlled quadrature.

    The integrand is assembled as exp(-x cosh t + nu t)/2 + exp(-x cosh t
    - nu t)/2 so the two exponentials never overflow individually even when
    cosh(nu t) alone would.  Panels are refined (halved) until two successive
    levels agree to rtol; exhaustion raises BesselAccuracyError carrying the
    best estimate.  Designed for x >= 1e-6 and |Re nu| <= 35, where the
    result itself stays inside double range.
    """
    if not x > 0.0:
        raise ValueError(f"argument must be positive, got x = {x}")
    nu = complex(nu)
    t_max = _tail_cutoff(x, nu.real)
    edges = _panel_edges(t_max, x, abs(nu.imag))

    def evaluate(level: int) -> complex:
        t, w = _nodes_weights(edges, level)
        base = -x * np.cosh(t)
        integrand = 0.5 * (np.exp(base + nu * t) + np.exp(base - nu * t))
        return complex(np.dot(w, integrand))

    previous = evaluate(0)
    for level in range(1, max_levels + 1):
        current = evaluate(level)
        diff = abs(current - previous)
        if diff <= rtol * max(abs(current), 1e-300):
            return current
        previous = current
    raise BesselAccuracyError(
        f"K_nu quadrature did not reach rtol = {rtol} for nu = {nu}, x = {x} "
        f"(achieved {diff / max(abs(current), 1e-300):.3e})",
        estimate=current,
        error=diff,
    )


def _k_tensor_level(
    xi: np.ndarray, b_abs: np.ndarray, d_max: int, edges: np.ndarray, level: int
) -> tuple[np.ndarray, np.ndarray]:
    """Re and Im of K_{D - i b}(xi) for D = 0..d_max on the (xi, b) grid.

    Returns two longdouble arrays of shape (len(xi), len(b_abs), d_max + 1).
    The two exponentials exp(-xi cosh t +- D t) are kept together so neither
    factor overflows on its own.  Work is chunked over xi to bound memory.
    No convergence control here: the caller compares successive levels on
    the quantity it assembles.
    """
    d = np.arange(d_max + 1).astype(_LD)
    t, w = _nodes_weights(edges, level, dtype=_LD)
    cosh_t = np.cosh(t)
    cos_b = np.cos(np.outer(b_abs, t)) * w
    sin_b = np.sin(np.outer(b_abs, t)) * w
    n_x = len(xi)
    real = np.empty((n_x, len(b_abs), d_max + 1), dtype=_LD)
    imag = np.empty_like(real)
    chunk = max(1, int(24e6 // ((d_max + 1) * len(t) * 16)))
    for start in range(0, n_x, chunk):
        sl = slice(start, min(start + chunk, n_x))
        base = -xi[sl, None, None] * cosh_t[None, None, :]
        dt = d[None, :, None] * t[None, None, :]
        plus = np.exp(base + dt)
        minus = np.exp(base - dt)
        even = 0.5 * (plus + minus)      # exp(-xi cosh t) cosh(D t)
        odd = 0.5 * (plus - minus)       # exp(-xi cosh t) sinh(D t)
        del plus, minus
        # K_{D - ib} = int exp(-xi cosh t) (cosh(Dt) cos(bt) - i sinh(Dt) sin(bt)) dt
        real[sl] = np.einsum("xdt,bt->xbd", even, cos_b, optimize=False)
        imag[sl] = -np.einsum("xdt,bt->xbd", odd, sin_b, optimize=False)
    return real, imag


def _closed_coefficients(
    rho: np.ndarray, params: MorseParams, xi: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Order-resolved coefficients of the closed-form Bessel sum, per r point.

    For the ordered level pair (n, m) the inner sums run over j = 0..m and
    k = 0..n with Bessel order D = (n - m) + s where s = j - k.  Along a
    fixed anti-diagonal s the sign (-xi)^(j+k) = (-1)^s xi^(j+k) is constant,
    so each group

        G_s(xi) = sum_k C(2N-m, m-s-k) C(2N-n, n-k) xi^(s+2k) / ((s+k)! k!)

    is a sum of positive terms built from exact integer combinatorics.
    Swapping (n, m) maps s to -s and negates D with identical magnitudes, so
    only unordered pairs are walked; rho_mn rides along unconjugated so a
    non-Hermitian input surfaces in the imaginary residue check rather than
    being silently symmetrized.

    Everything is longdouble: the alternating sums over s and over orders
    cancel to one part in 1e9 of their largest terms on parts of the default
    window, which exhausts double precision but leaves extended precision
    with ten spare digits.  Longdouble range (1e4932) also removes any need
    for log-space scaling of the xi powers.

    Returns (c_pos, c_neg) of shape (len(xi), N), complex longdouble:
    c_pos[x, D] collects orders +D, c_neg[x, D] orders -D (column 0 unused).
    """
    big_n = params.n_bound
    two_n = 2 * big_n
    k_total = params.k
    n_x = len(xi)

    factorial = [math.factorial(i) for i in range(two_n + 1)]
    # norms[n] = N_n / sqrt(beta) = sqrt(n! (k - 2n - 1) / (k - n - 1)!)
    norms = [
        np.sqrt(
            _ld_int(factorial[n] * (k_total - 2 * n - 1)) / _ld_int(factorial[k_total - n - 1])
        )
        for n in range(big_n)
    ]
    beta_ld = _LD(params.beta)

    c_pos = np.zeros((n_x, big_n), dtype=np.clongdouble)
    c_neg = np.zeros((n_x, big_n), dtype=np.clongdouble)
    xi_sq = xi * xi

    for n in range(big_n):
        for m in range(n + 1):
            rho_nm = rho[n, m]
            rho_mn = rho[m, n]
            if rho_nm == 0.0 and rho_mn == 0.0:
                continue
            pair = beta_ld * norms[n] * norms[m] * xi ** _LD(two_n - n - m)
            s_lo = -n if n > m else 0     # s < 0 on the diagonal mirrors s > 0
            for s in range(s_lo, m + 1):
                k_start = max(0, -s)
                k_stop = min(n, m - s)
                if k_stop < k_start:
                    continue
                # Horner over k of the positive series G_s; exact integer
                # weights C(2N-m, m-j) C(2N-n, n-k) / (j! k!) with j = s + k
                value = np.zeros(n_x, dtype=_LD)
                for k in range(k_stop, k_start - 1, -1):
                    coef = _ld_int(
                        math.comb(two_n - m, m - s - k) * math.comb(two_n - n, n - k)
                    ) / _ld_int(factorial[s + k] * factorial[k])
                    value = value * xi_sq + coef
                value *= xi ** _LD(s + 2 * k_start)
                x = pair * value
                if s % 2:
                    x = -x
                if n == m:
                    c_pos[:, s] += rho_nm * x
                    if s > 0:
                        # G is symmetric in the sign of s on the diagonal;
                        # reuse x so the +D and -D partners pair bitwise
                        c_neg[:, s] += rho_nm * x
                    continue
                order = n - m + s
                if order == 0:
                    # conjugate partners summed before accumulating, so a
                    # Hermitian rho keeps this column exactly real while a
                    # broken one still shows up in the residue check
                    c_pos[:, 0] += (rho_nm + rho_mn) * x
                elif order > 0:
                    c_pos[:, order] += rho_nm * x
                    c_neg[:, order] += rho_mn * x
                else:
                    c_neg[:, -order] += rho_nm * x
                    c_pos[:, -order] += rho_mn * x
    return c_pos, c_neg


def wigner_closed(
    rho: np.ndarray,
    params: MorseParams,
    grid: GridSpec | None = None,
    time: float = 0.0,
    hbar: float = 1.0,
    rtol: float = 1e-8,
    imag_tol: float = 1e-10,
    max_levels: int = 6,
) -> WignerGrid:
    """Wigner function from the analytic bound-state sum.

    The Bessel panel quadrature is refined until the assembled W values
    stabilize to rtol of the grid maximum; exhaustion raises
    BesselAccuracyError naming the worst grid point.  The full complex sum
    is evaluated, including both Bessel-order signs, and the imaginary
    residue must stay below imag_tol relative to the largest real value; a
    larger residue means the order pairing (or the input density matrix) is
    broken, and raises rather than being discarded.
    """
    grid = grid or GridSpec()
    big_n = params.n_bound
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (big_n, big_n):
        raise ValueError(f"density matrix shape {rho.shape} != ({big_n}, {big_n})")
    r_axis, p_axis = grid.axes()

    xi = _ld_int(params.k) * np.exp(-_LD(params.beta) * r_axis.astype(_LD))
    b = 2.0 * p_axis.astype(_LD) / (_LD(hbar) * _LD(params.beta))
    b_abs, inverse = np.unique(np.abs(b), return_inverse=True)
    negative_b = b < 0.0

    c_pos, c_neg = _closed_coefficients(rho, params, xi)
    prefactor = _LD(2.0) / (_LD(math.pi) * _LD(hbar) * _LD(params.beta))

    t_max = _tail_cutoff(float(np.min(xi)), float(big_n - 1))
    edges = _panel_edges(t_max, float(np.max(xi)), float(np.max(b_abs, initial=0.0)))

    def assemble(level: int) -> np.ndarray:
        k_re, k_im = _k_tensor_level(xi, b_abs, big_n - 1, edges, level)
        k_re = k_re[:, inverse, :]
        k_im = k_im[:, inverse, :]
        k_im[:, negative_b, :] = -k_im[:, negative_b, :]
        k_all = k_re + 1j * k_im
        w = np.einsum("xd,xbd->xb", c_pos, k_all, optimize=False)
        w += np.einsum("xd,xbd->xb", c_neg, np.conj(k_all), optimize=False)
        return w * prefactor

    previous = assemble(0)
    for level in range(1, max_levels + 1):
        w_complex = assemble(level)
        scale = float(np.max(np.abs(w_complex)))
        diff = np.abs(w_complex - previous).astype(float)
        if float(np.max(diff)) <= rtol * max(scale, 1e-300):
            break
        previous = w_complex
    else:
        idx = np.unravel_index(int(np.argmax(diff)), diff.shape)
        raise BesselAccuracyError(
            f"Wigner quadrature at t = {time} did not stabilize to rtol = "
            f"{rtol}; worst grid point r = {r_axis[idx[0]]:.4g}, "
            f"p = {p_axis[idx[1]]:.4g} "
            f"(residual {float(np.max(diff)) / max(scale, 1e-300):.3e})",
            estimate=np.asarray(w_complex, dtype=complex),
            error=float(np.max(diff)),
        )

    real = np.asarray(w_complex.real, dtype=float)
    imag = np.asarray(w_complex.imag, dtype=float)
    scale = float(np.max(np.abs(real)))
    residue = float(np.max(np.abs(imag)))
    if scale > 0.0 and residue > imag_tol * scale:
        raise ValueError(
            f"imaginary residue {residue:.3e} exceeds {imag_tol:g} x max |W| "
            f"= {imag_tol * scale:.3e} at t = {time}; order pairing or input "
            "Hermiticity is broken"
        )
    return WignerGrid(r_axis=r_axis, p_axis=p_axis, values=real, time=time)


def _support_bounds(params: MorseParams, tail: float = 1e-12) -> tuple[float, float]:
    """Position interval outside which every bound state is below tail * peak."""
    probe = np.linspace(-6.0, 80.0, 2049)
    table = np.stack(
        [np.abs(morse_wavefunction(params, n, probe)) for n in range(params.n_bound)]
    )
    reference = table.max()
    alive = np.any(table > tail * reference, axis=0)
    if not np.any(alive):
        raise RuntimeError("no wavefunction support found on the probe window")
    idx = np.flatnonzero(alive)
    lo = probe[max(idx[0] - 1, 0)]
    hi = probe[min(idx[-1] + 1, len(probe) - 1)]
    return float(lo), float(hi)


def wigner_direct_oracle(
    rho: np.ndarray,
    params: MorseParams,
    grid: GridSpec | None = None,
    time: float = 0.0,
    hbar: float = 1.0,
    rtol: float = 1e-8,
    max_levels: int = 6,
) -> WignerGrid:
    """Wigner function by direct Fourier transform of the coordinate kernel.

    Builds rho(r + y/2, r - y/2) from the wavefunctions and integrates
    against exp(-i p y / hbar), refining the y-quadrature until two levels
    agree to rtol of the grid maximum.  The y-range is truncated where the
    wavefunction tails fall below 1e-12 of their peak.  Reference
    implementation for testing, not tuned for speed.
    """
    grid = grid or GridSpec()
    big_n = params.n_bound
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (big_n, big_n):
        raise ValueError(f"density matrix shape {rho.shape} != ({big_n}, {big_n})")
    r_axis, p_axis = grid.axes()

    lo, hi = _support_bounds(params)
    reach = np.minimum(r_axis - lo, hi - r_axis)
    y_max = 2.0 * float(np.max(np.maximum(reach, 0.0)))
    if y_max == 0.0:
        values = np.zeros((len(r_axis), len(p_axis)))
        return WignerGrid(r_axis=r_axis, p_axis=p_axis, values=values, time=time)

    # panel width set by the fastest oscillation: the Fourier phase plus the
    # highest wavefunction momentum content (about sqrt(2N+1) at the bottom)
    p_scale = max(1.0, float(np.max(np.abs(p_axis))) / hbar)
    cap = 6.0 / (p_scale + 0.5 * math.sqrt(2.0 * params.k) * params.beta)
    n_panels = max(8, int(math.ceil(2.0 * y_max / cap)))
    edges = np.linspace(-y_max, y_max, n_panels + 1)

    def evaluate(level: int) -> np.ndarray:
        y, w = _nodes_weights(edges, level)
        psi_plus = np.stack(
            [
                morse_wavefunction(
                    params, n, (r_axis[None, :] + 0.5 * y[:, None]).ravel()
                ).reshape(len(y), -1)
                for n in range(big_n)
            ]
        )
        psi_minus = np.stack(
            [
                morse_wavefunction(
                    params, n, (r_axis[None, :] - 0.5 * y[:, None]).ravel()
                ).reshape(len(y), -1)
                for n in range(big_n)
            ]
        )
        kernel = np.einsum("nyx,nm,myx->yx", psi_plus, rho, psi_minus, optimize=False)
        phases = np.exp(-1j * np.outer(y, p_axis) / hbar) * w[:, None]
        return np.einsum("yx,yp->xp", kernel, phases, optimize=False) / (
            2.0 * math.pi * hbar
        )

    previous = evaluate(0)
    for level in range(1, max_levels + 1):
        current = evaluate(level)
        scale = float(np.max(np.abs(current)))
        diff = np.abs(current - previous)
        if float(np.max(diff)) <= rtol * max(scale, 1e-300):
            return WignerGrid(
                r_axis=r_axis, p_axis=p_axis, values=current.real, time=time
            )
        previous = current
    idx = np.unravel_index(int(np.argmax(diff)), diff.shape)
    raise RuntimeError(
        f"direct Wigner quadrature did not converge to rtol = {rtol}; worst "
        f"grid point r = {r_axis[idx[0]]:.4g}, p = {p_axis[idx[1]]:.4g} "
        f"(residual {float(np.max(diff)) / max(scale, 1e-300):.3e})"
    )


def _trapezoid_weights(axis: np.ndarray) -> np.ndarray:
    w = np.zeros_like(axis)
    w[1:] += 0.5 * np.diff(axis)
    w[:-1] += 0.5 * np.diff(axis)
    return w


def wigner_diagnostics(
    grid: WignerGrid, rho: np.ndarray, hbar: float = 1.0
) -> WignerDiagnostics:
    """Normalization, the two purity routes, and the grid minimum."""
    w_r = _trapezoid_weights(grid.r_axis)
    w_p = _trapezoid_weights(grid.p_axis)
    norm = float(w_r @ grid.values @ w_p)
    purity_w = float(2.0 * math.pi * hbar * (w_r @ grid.values**2 @ w_p))
    purity_m = float(np.einsum("ij,ji->", rho, rho).real)
    flat_min = int(np.argmin(grid.values))
    i, j = np.unravel_index(flat_min, grid.values.shape)
    return WignerDiagnostics(
        norm=norm,
        purity_w=purity_w,
        purity_m=purity_m,
        min_w=float(grid.values[i, j]),
        min_w_location=(float(grid.r_axis[i]), float(grid.p_axis[j])),
        max_w=float(np.max(grid.values)),
    )
