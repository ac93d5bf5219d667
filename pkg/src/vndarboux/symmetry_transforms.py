"""Spectrum shifting and rescaling of solutions.

For any X with ``[X, A] = [X, rho] = 0`` (typically X = Lambda 1),

    rho_X(t) = exp(-i (n+1) X A^n t) (rho(t) + X) exp(+i (n+1) X A^n t)

is again a solution, with the inner spectrum shifted by Lambda; and

    rho_Y(t) = Y rho(Y t),  Y != 0,

rescales spectrum and time together.  Composing the two turns non-positive or
non-normalized solutions into density matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnnormalizableError, UnsupportedScenario
from .operator_core import (as_operator, commutator, eig_hermitian, frob,
                            is_hermitian, mat_exp)
from .seed_factory import SeedFamily, SeedSolution
from .tolerances import DEFAULT, Tolerances
from .vne_model import ModelSpec


@dataclass(frozen=True, eq=False)
class ShiftSpec:
    """A shift operator X; must commute with both A and rho(0) where used."""

    X: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "X", as_operator(self.X))

    @classmethod
    def uniform(cls, lam: float, dim: int) -> "ShiftSpec":
        return cls(float(lam) * np.eye(dim, dtype=complex))


def _check_shift_invariants(X: np.ndarray, A: np.ndarray, rho0: np.ndarray,
                            tolerances: Tolerances):
    gate = tolerances.seed_structure
    if frob(commutator(X, A)) > gate * max(1.0, frob(X) * frob(A)):
        raise ValueError("shift operator must commute with A")
    if frob(commutator(X, rho0)) > gate * max(1.0, frob(X) * frob(rho0)):
        raise ValueError("shift operator must commute with rho(0)")


def shift(spec: ModelSpec, rho_at, X: ShiftSpec | np.ndarray, t: float,
          tolerances: Tolerances = DEFAULT) -> np.ndarray:
    """Evaluate the shifted solution rho_X at time t."""
    X = X.X if isinstance(X, ShiftSpec) else as_operator(X)
    _check_shift_invariants(X, spec.A, as_operator(rho_at(0.0)), tolerances)
    K = (spec.n + 1) * (X @ spec.powers[spec.n])
    U = mat_exp(-1j * t * K)
    U_inv = mat_exp(1j * t * K)
    return U @ (as_operator(rho_at(t)) + X) @ U_inv


def shifted_flow(spec: ModelSpec, rho_at, X: ShiftSpec | np.ndarray,
                 tolerances: Tolerances = DEFAULT):
    """Return ``t -> rho_X(t)`` with the invariants checked once up front."""
    X = X.X if isinstance(X, ShiftSpec) else as_operator(X)
    _check_shift_invariants(X, spec.A, as_operator(rho_at(0.0)), tolerances)
    K = (spec.n + 1) * (X @ spec.powers[spec.n])

    def rho_x_at(t: float) -> np.ndarray:
        U = mat_exp(-1j * t * K)
        return U @ (as_operator(rho_at(t)) + X) @ mat_exp(1j * t * K)

    return rho_x_at


def rescale(rho_at, Y: float, t: float) -> np.ndarray:
    """Y rho(Y t)."""
    Y = float(Y)
    if Y == 0:
        raise ValueError("Y must be nonzero")
    return Y * as_operator(rho_at(Y * t))


def rescaled_flow(rho_at, Y: float):
    Y = float(Y)
    if Y == 0:
        raise ValueError("Y must be nonzero")
    return lambda t: Y * as_operator(rho_at(Y * t))


def normalize_to_density(rho_at, spec: ModelSpec, margin: float = 0.0,
                         tolerances: Tolerances = DEFAULT):
    """Shift then rescale a Hermitian solution into a density matrix.

    Chooses ``Lambda = max(0, -lambda_min(rho(0))) + margin`` and
    ``Y = 1 / (Tr rho(0) + Lambda dim)``; returns ``(ShiftSpec, Y, flow)``
    where ``flow(t) = Y rho_X(Y t)`` has unit trace and no eigenvalue below
    the positivity floor at t = 0.
    """
    rho0 = as_operator(rho_at(0.0))
    if not is_hermitian(rho0, tolerances.hermiticity):
        raise ValueError("normalize_to_density requires a Hermitian rho(0)")
    values, _ = eig_hermitian(rho0, eps=tolerances.hermiticity)
    lam = max(0.0, -float(values[0])) + float(margin)
    dim = rho0.shape[0]
    total = float(np.trace(rho0).real) + lam * dim
    if abs(total) < 1e-14 * max(1.0, frob(rho0)):
        raise UnnormalizableError(
            "shifted solution has zero trace and cannot be normalized")
    Y = 1.0 / total
    X = ShiftSpec.uniform(lam, dim)
    base = shifted_flow(spec, rho_at, X, tolerances=tolerances)
    flow = rescaled_flow(base, Y)

    start = flow(0.0)
    start_vals, _ = eig_hermitian((start + start.conj().T) / 2)
    if start_vals[0] < tolerances.positivity_floor:
        raise UnnormalizableError(
            f"normalized start is not positive (min eig {start_vals[0]:.3e})")
    if abs(np.trace(start) - 1.0) > 1e-10:
        raise UnnormalizableError("normalized start does not have unit trace")
    return X, Y, flow


def reseed_shift(seed: SeedSolution, lam: float,
                 tolerances: Tolerances = DEFAULT) -> SeedSolution:
    """Absorb a uniform shift into the seed itself (dressing-compatible).

    Exact re-seedings:

    * Delta-commuting: ``rho0 + Lambda 1`` with ``a -> a + 2 Lambda`` (the
      n = 1 gauge transformation);
    * commuting: ``rho0 + Lambda 1`` stays diagonal and stationary.

    Anticommuting seeds lose their family structure under a shift; shift the
    dressed trajectory instead.
    """
    lam = float(lam)
    if lam == 0:
        return seed
    eye = np.eye(seed.dim, dtype=complex)
    if seed.family is SeedFamily.DELTA_COMMUTING:
        out = SeedSolution(SeedFamily.DELTA_COMMUTING, seed.rho0 + lam * eye,
                           seed.spec, a=seed.a + 2.0 * lam)
        if frob(commutator(out.delta_a, seed.spec.A)) > tolerances.seed_structure:
            raise ValueError("shift re-seeding broke the Delta structure")
        return out
    if seed.family is SeedFamily.COMMUTING:
        out = SeedSolution(SeedFamily.COMMUTING, seed.rho0 + lam * eye, seed.spec)
        if frob(commutator(out.rho0, seed.spec.A)) > tolerances.seed_structure:
            raise ValueError("shift re-seeding broke commutation")
        return out
    raise UnsupportedScenario(
        f"a uniform shift breaks the {seed.family.value} structure; "
        "apply the shift to the dressed trajectory instead")


def reseed_rescale(seed: SeedSolution, Y: float) -> SeedSolution:
    """Absorb a rescaling into the seed itself (exact for all families)."""
    Y = float(Y)
    if Y == 0:
        raise ValueError("Y must be nonzero")
    if Y == 1.0:
        return seed
    if seed.family is SeedFamily.DELTA_COMMUTING:
        return SeedSolution(SeedFamily.DELTA_COMMUTING, Y * seed.rho0,
                            seed.spec, a=Y * seed.a)
    if seed.family in (SeedFamily.COMMUTING, SeedFamily.ANTICOMMUTING):
        return SeedSolution(seed.family, Y * seed.rho0, seed.spec)
    raise UnsupportedScenario(
        f"rescale re-seeding is not defined for {seed.family.value} seeds")
