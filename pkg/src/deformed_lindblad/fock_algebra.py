"""Truncated f-deformed oscillator algebra in the number basis.

A deformed oscillator is a harmonic oscillator whose ladder operators are
rescaled by a level-dependent function f, so that the lowering operator acts
as A|n> = f(n) sqrt(n) |n-1> and the raising operator as its conjugate
transpose.  The Hamiltonian is diagonal in the number basis with

    H_nn = (omega0 / 2) * ((n + 1) f^2(n + 1) + n f^2(n))        (hbar = 1)

and the spacing between adjacent levels is the gap frequency

    Omega(n) = (omega0 / 2) * ((n + 2) f^2(n + 2) - n f^2(n)).

Everything here is a dense float matrix over the first ``dim`` number states.
The untruncated algebra satisfies [H, A] = -Omega(n_hat) A exactly; after
truncation, identities that touch the top edge are only guaranteed on the
interior block (rows/columns 0..dim-2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "DeformationFunction",
    "OscillatorModel",
    "harmonic_deformation",
    "ladder_pair",
    "hamiltonian",
    "gap_frequency",
    "gap_frequencies",
    "eigenoperator_residual",
]


@dataclass(frozen=True)
class DeformationFunction:
    """Level-dependent deformation f^2(n) plus a short label.

    ``f_squared`` maps an integer level n >= 0 to the dimensionless value
    f^2(n).  The harmonic oscillator corresponds to f^2(n) = 1 for all n.
    Levels with negative f^2 lie outside the physical ladder and must be
    excluded by the model truncation.
    """

    f_squared: Callable[[int], float]
    label: str = "custom"

    def f2(self, n: int) -> float:
        return float(self.f_squared(n))

    def f(self, n: int) -> float:
        value = self.f2(n)
        if value < 0.0:
            raise ValueError(
                f"deformation '{self.label}': f^2({n}) = {value} is negative; "
                "level lies outside the physical ladder"
            )
        return math.sqrt(value)


def harmonic_deformation() -> DeformationFunction:
    """The undeformed case f^2(n) = 1, which contracts to the textbook oscillator."""
    return DeformationFunction(lambda n: 1.0, label="harmonic")


@dataclass(frozen=True)
class OscillatorModel:
    """Truncated deformed oscillator: base frequency, dimension, deformation.

    ``dim`` is the number of retained number states (indices 0..dim-1).  For
    a Morse-like ladder with N bound states set dim = N.  Frequencies are in
    units of 1/time; the default simulation convention is omega0 = 1.
    """

    omega0: float
    dim: int
    deformation: DeformationFunction

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError(f"model dimension must be >= 2, got {self.dim}")
        if not self.omega0 > 0.0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")

    def f2_values(self, upto: int) -> np.ndarray:
        """f^2(n) for n = 0..upto inclusive."""
        return np.array([self.deformation.f2(n) for n in range(upto + 1)])


def _require_physical(model: OscillatorModel, upto: int) -> np.ndarray:
    values = model.f2_values(upto)
    bad = np.flatnonzero(values < 0.0)
    if bad.size:
        n = int(bad[0])
        raise ValueError(
            f"deformation '{model.deformation.label}': f^2({n}) = {values[n]} "
            f"is negative inside the truncation (dim = {model.dim})"
        )
    return values


def ladder_pair(model: OscillatorModel) -> tuple[np.ndarray, np.ndarray]:
    """Lowering and raising matrices (A, A_dagger) in the number basis.

    <n-1|A|n> = f(n) sqrt(n) on the superdiagonal; A_dagger is the exact
    transpose (entries are real).  The matrices are dim x dim, so the
    amplitude f(dim) sqrt(dim) that would leak past the top level is never
    referenced.
    """
    f2 = _require_physical(model, model.dim)
    n = np.arange(1, model.dim)
    amplitudes = np.sqrt(f2[1:model.dim] * n)
    a = np.zeros((model.dim, model.dim))
    a[n - 1, n] = amplitudes
    return a, a.T.copy()


def hamiltonian(model: OscillatorModel) -> np.ndarray:
    """Diagonal Hamiltonian with H_nn = (omega0/2)((n+1) f^2(n+1) + n f^2(n)).

    The top entry n = dim-1 evaluates f^2(dim) through the deformation
    function directly.
    """
    f2 = _require_physical(model, model.dim)
    n = np.arange(model.dim)
    diag = 0.5 * model.omega0 * ((n + 1) * f2[1:] + n * f2[:-1])
    return np.diag(diag)


def gap_frequency(model: OscillatorModel, n: int) -> float:
    """Energy spacing Omega(n) = (omega0/2)((n+2) f^2(n+2) - n f^2(n)).

    Physically meaningful for 0 <= n <= dim-2 (the spacing between retained
    levels n+1 and n); the value at n = dim-1 is computable from the
    deformation function but refers to the first level beyond the truncation.
    """
    if n < 0:
        raise ValueError(f"level must be non-negative, got {n}")
    f2n = model.deformation.f2(n)
    f2n2 = model.deformation.f2(n + 2)
    return 0.5 * model.omega0 * ((n + 2) * f2n2 - n * f2n)


def gap_frequencies(model: OscillatorModel) -> np.ndarray:
    """Omega(n) for n = 0..dim-1 as an array."""
    return np.array([gap_frequency(model, n) for n in range(model.dim)])


def eigenoperator_residual(model: OscillatorModel) -> float:
    """Max-norm of [H, A] + Omega(n_hat) A on the interior block.

    The untruncated algebra makes this vanish identically, so the residual is
    a round-off-level self-test of the ladder, Hamiltonian, and gap-frequency
    constructions.  Rows and columns 0..dim-2 are checked; the edge row is a
    truncation artifact.
    """
    a, _ = ladder_pair(model)
    h = hamiltonian(model)
    omega_diag = np.diag(gap_frequencies(model))
    residual = h @ a - a @ h + omega_diag @ a
    interior = residual[: model.dim - 1, : model.dim - 1]
    return float(np.max(np.abs(interior))) if interior.size else 0.0
