"""The nonlinear von Neumann family i rho' = sum_k [A^{n-k} rho A^k, rho].

``ModelSpec`` fixes the nonlinearity order n and the time-independent
self-adjoint operator A; ``rhs`` evaluates the flow and ``residual``
certifies that a trajectory actually solves the equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operator_core import as_operator, commutator, frob, is_hermitian
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """One member of the equation family: order ``n`` and generator ``A``.

    Powers A^0 .. A^{n+1} are cached eagerly (A is time-independent), so all
    reads after construction are contention-free.
    """

    n: int
    A: np.ndarray
    powers: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("nonlinearity order n must be a positive integer")
        A = as_operator(self.A)
        if not is_hermitian(A, DEFAULT.model_hermiticity):
            raise ValueError("A must be self-adjoint")
        A = A.copy()
        A.setflags(write=False)
        powers = [np.eye(A.shape[0], dtype=complex)]
        for _ in range(int(self.n) + 1):
            powers.append(powers[-1] @ A)
        for p in powers:
            p.setflags(write=False)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "powers", tuple(powers))

    @property
    def dim(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class ResidualReport:
    t: float
    residual_norm: float
    tolerance_used: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed",
                           bool(self.residual_norm <= self.tolerance_used))


def hamiltonian_of(spec: ModelSpec, rho) -> np.ndarray:
    """sum_{k=0}^{n} A^{n-k} rho A^k, the state-dependent generator."""
    rho = as_operator(rho)
    if rho.shape != spec.A.shape:
        raise ValueError(f"dimension mismatch: rho {rho.shape} vs A {spec.A.shape}")
    total = np.zeros_like(rho)
    for k in range(spec.n + 1):
        total += spec.powers[spec.n - k] @ rho @ spec.powers[k]
    return total


def rhs_alt(spec: ModelSpec, rho) -> np.ndarray:
    """The commutator-free form -i sum_k [A^{n-k}, rho A^k rho]."""
    rho = as_operator(rho)
    total = np.zeros_like(rho)
    for k in range(spec.n + 1):
        total += commutator(spec.powers[spec.n - k], rho @ spec.powers[k] @ rho)
    return -1j * total


def rhs(spec: ModelSpec, rho) -> np.ndarray:
    """Time derivative rho' = -i [H(rho), rho].

    The equivalent form ``rhs_alt`` is evaluated alongside and the two must
    agree to 1e-11 (relative-guarded); a disagreement indicates corrupted
    inputs, not round-off.
    """
    rho = as_operator(rho)
    H = hamiltonian_of(spec, rho)
    primary = -1j * commutator(H, rho)
    alt = rhs_alt(spec, rho)
    scale = max(1.0, frob(H) * frob(rho))
    gap = frob(primary - alt)
    if gap > 1e-11 * scale:
        raise ArithmeticError(
            f"the two algebraic forms of the flow disagree by {gap:.3g}")
    return primary


def default_step(spec: ModelSpec) -> float:
    # generator norms scale like ||A||^{n+1}
    return 1e-3 * (1.0 + frob(spec.A)) ** (-(spec.n + 1))


def residual(spec: ModelSpec, rho_at, t: float, h: float | None = None,
             tol: float | None = None, tol_scale: float = 1.0,
             tolerances: Tolerances = DEFAULT) -> ResidualReport:
    """Finite-difference check that ``rho_at`` solves the equation at ``t``.

    rho' is estimated by the 5-point central stencil (O(h^4)); the default
    tolerance is ``max(residual_floor, C h^4)`` with
    ``C = ((n+1) (1+||A||_F)^{n+1} max(1, ||rho(t)||_F))^5 / 30``, a bound on
    the fifth time-derivative entering the stencil error.
    """
    if h is None:
        h = default_step(spec)
    if h <= 0:
        raise ValueError("step h must be positive")
    rho_t = as_operator(rho_at(t))
    rdot = (-rho_at(t + 2 * h) + 8 * rho_at(t + h)
            - 8 * rho_at(t - h) + rho_at(t - 2 * h)) / (12 * h)
    H = hamiltonian_of(spec, rho_t)
    residual_norm = frob(1j * rdot - commutator(H, rho_t))
    if tol is None:
        C = ((spec.n + 1) * (1.0 + frob(spec.A)) ** (spec.n + 1)
             * max(1.0, frob(rho_t))) ** 5 / 30.0
        tol = max(tolerances.residual_floor, C * h ** 4)
    tol = tol * tol_scale
    return ResidualReport(t=float(t), residual_norm=float(residual_norm),
                          tolerance_used=float(tol))
