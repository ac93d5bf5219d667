"""Lax eigenproblem at t = 0 and closed-form evolution of the linear pairs.

The right problem is ``z_mu |phi> = (rho - mu A)|phi>`` together with
``i |phi'> = (sum_k A^{n-k} rho A^k - mu A^{n+1}) |phi>``; two conjugate
left problems (parameters nu and lambda) mirror it.  For every supported
seed family the time equation has a constant effective generator G on the
eigenvector orbit, so

    phi(t) = exp(-i G t) phi(0),        chi(t) = chi(0) exp(+i G_nu t),

with the same dispatch serving both sides:

* anticommuting, even n:  G = z A^n
* anticommuting, odd n:   G = -parameter A^{n+1}
* commuting (stationary): G = sum_k A^{n-k} rho0 A^k - parameter A^{n+1}
* Delta-commuting, n = 1: G = a H + Delta_a/parameter - ((z^2 - a z)/parameter) 1

The scalar term in the last line is the integrating factor that makes the
time equation hold exactly; it cancels in every rank-one projector built
from the pair, so dressed states do not depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedScenario
from .operator_core import as_state, eig_pair_general, eig_pair_left, mat_exp
from .seed_factory import SeedFamily, SeedSolution
from .tolerances import DEFAULT, Tolerances
from .vne_model import hamiltonian_of


@dataclass(frozen=True)
class DarbouxParams:
    """Transformation parameters and the eigenvalues selected for them.

    ``hermitian_mode`` is equivalent to ``nu == conj(mu)``; in that regime the
    projector is Hermitian, T is unitary and density-matrix structure is
    preserved.  ``mu == nu`` is rejected: it generates the identity map.
    """

    mu: complex
    nu: complex
    lam: complex | None
    z_mu: complex
    z_nu: complex
    z_lambda: complex | None
    hermitian_mode: bool

    def __post_init__(self):
        for name in ("mu", "nu"):
            if getattr(self, name) == 0:
                raise ValueError(f"{name} must be nonzero")
        if abs(self.mu - self.nu) <= 1e-14 * max(1.0, abs(self.mu)):
            raise ValueError(
                "mu == nu generates the identity transformation; "
                "pick distinct parameters (a real mu with conjugate nu does this too)")
        if self.lam is not None and self.lam == self.mu:
            raise ValueError("lambda must differ from mu")


def hermitian_pairing(mu: complex, nu: complex) -> bool:
    return bool(abs(nu - np.conj(mu)) <= 1e-12 * max(1.0, abs(mu)))


def solve_initial(seed: SeedSolution, mu: complex, pin: complex | None = None,
                  tolerances: Tolerances = DEFAULT) -> tuple[complex, np.ndarray]:
    """Deterministic eigenpair of ``rho0 - mu A`` at t = 0."""
    mu = complex(mu)
    if mu == 0:
        raise ValueError("mu must be nonzero")
    pencil = seed.rho0 - mu * seed.spec.A
    return eig_pair_general(pencil, pin=pin, tolerances=tolerances)


def solve_initial_left(seed: SeedSolution, param: complex,
                       pin: complex | None = None,
                       tolerances: Tolerances = DEFAULT) -> tuple[complex, np.ndarray]:
    """Deterministic left eigenpair ``w (rho0 - param A) = z w`` (row vector)."""
    param = complex(param)
    if param == 0:
        raise ValueError("parameter must be nonzero")
    pencil = seed.rho0 - param * seed.spec.A
    return eig_pair_left(pencil, pin=pin, tolerances=tolerances)


def eigenvalue_multiplicity(seed: SeedSolution, param: complex, z: complex) -> int:
    """How many pencil eigenvalues coincide with ``z`` numerically."""
    pencil = seed.rho0 - complex(param) * seed.spec.A
    roots = np.linalg.eigvals(pencil)
    scale = max(1.0, float(np.abs(roots).max()))
    return int(np.sum(np.abs(roots - z) <= 1e-8 * scale))


def lax_generator(seed: SeedSolution, param: complex, z: complex) -> np.ndarray:
    """Constant effective generator for the given seed family (see module doc)."""
    spec = seed.spec
    n = spec.n
    if seed.family is SeedFamily.ANTICOMMUTING:
        if n % 2 == 0:
            return z * spec.powers[n]
        return -param * spec.powers[n + 1]
    if seed.family is SeedFamily.COMMUTING:
        return hamiltonian_of(spec, seed.rho0) - param * spec.powers[n + 1]
    if seed.family is SeedFamily.DELTA_COMMUTING:
        a = seed.a
        scalar = (z * z - a * z) / param
        return (a * spec.A + seed.delta_a / param
                - scalar * np.eye(spec.dim, dtype=complex))
    raise UnsupportedScenario(
        f"no closed-form Lax evolution for {seed.family.value} seeds (n={n})")


def evolve_phi(seed: SeedSolution, params: DarbouxParams, phi0, t: float) -> np.ndarray:
    """phi(t) = exp(-i G t) phi(0) with the family generator for (mu, z_mu)."""
    phi0 = as_state(phi0)
    if t == 0:
        return np.array(phi0)
    G = lax_generator(seed, params.mu, params.z_mu)
    return mat_exp(-1j * t * G) @ phi0


def evolve_chi(seed: SeedSolution, params: DarbouxParams, t: float, *,
               phi0=None, chi0=None) -> np.ndarray:
    """chi(t) as a row vector.

    In hermitian mode the chi pair is the adjoint of the phi pair
    (z_nu = conj(z_mu), chi = phi^dag); otherwise an independently supplied
    left eigenvector ``chi0`` evolves by the conjugate generator.
    """
    if params.hermitian_mode:
        if phi0 is None:
            raise ValueError("hermitian-mode evolve_chi needs phi0")
        return np.conj(evolve_phi(seed, params, phi0, t))
    if chi0 is None:
        raise ValueError("general-mode evolve_chi needs the left eigenvector chi0")
    chi0 = as_state(chi0)
    if t == 0:
        return np.array(chi0)
    G = lax_generator(seed, params.nu, params.z_nu)
    return chi0 @ mat_exp(1j * t * G)


def evolve_psi(seed: SeedSolution, params: DarbouxParams, psi0, t: float) -> np.ndarray:
    """Left lambda-pair evolution, used by the covariance checks."""
    if params.lam is None or params.z_lambda is None:
        raise ValueError("lambda is not configured on these parameters")
    psi0 = as_state(psi0)
    if t == 0:
        return np.array(psi0)
    G = lax_generator(seed, params.lam, params.z_lambda)
    return psi0 @ mat_exp(1j * t * G)


@dataclass(frozen=True, eq=False)
class LaxSolution:
    """Assembled Lax data: parameters, initial vectors and evolution rules."""

    params: DarbouxParams
    seed: SeedSolution
    phi0: np.ndarray
    chi0: np.ndarray
    psi0: np.ndarray | None
    generator_phi: np.ndarray

    def phi_at(self, t: float) -> np.ndarray:
        return evolve_phi(self.seed, self.params, self.phi0, t)

    def chi_at(self, t: float) -> np.ndarray:
        return evolve_chi(self.seed, self.params, t,
                          phi0=self.phi0, chi0=self.chi0)

    def psi_at(self, t: float) -> np.ndarray:
        return evolve_psi(self.seed, self.params, self.psi0, t)


def build_lax(seed: SeedSolution, mu: complex, nu: complex | None = None,
              lam: complex | None = None, *,
              z_mu_pin: complex | None = None,
              z_nu_pin: complex | None = None,
              z_lambda_pin: complex | None = None,
              tolerances: Tolerances = DEFAULT) -> LaxSolution:
    """Solve all configured pencils at t = 0 and package the evolution rules.

    ``nu`` defaults to ``conj(mu)`` (hermitian mode).  ``lam`` is optional and
    only needed for covariance checks; it must differ from ``mu``.
    """
    mu = complex(mu)
    if mu == 0:
        raise ValueError("mu must be nonzero")
    nu = np.conj(mu) if nu is None else complex(nu)
    if nu == 0:
        raise ValueError("nu must be nonzero")
    herm = hermitian_pairing(mu, nu)

    z_mu, phi0 = solve_initial(seed, mu, pin=z_mu_pin, tolerances=tolerances)
    if herm:
        z_nu = np.conj(z_mu)
        chi0 = np.conj(phi0)
    else:
        z_nu, chi0 = solve_initial_left(seed, nu, pin=z_nu_pin,
                                        tolerances=tolerances)

    z_lambda, psi0 = None, None
    if lam is not None:
        lam = complex(lam)
        if lam == mu:
            raise ValueError("lambda must differ from mu")
        z_lambda, psi0 = solve_initial_left(seed, lam, pin=z_lambda_pin,
                                            tolerances=tolerances)

    params = DarbouxParams(mu=mu, nu=complex(nu), lam=lam,
                           z_mu=z_mu, z_nu=complex(z_nu), z_lambda=z_lambda,
                           hermitian_mode=herm)
    generator = lax_generator(seed, mu, z_mu)
    return LaxSolution(params=params, seed=seed, phi0=phi0, chi0=chi0,
                       psi0=psi0, generator_phi=generator)


def lax_from_params(seed: SeedSolution, params: DarbouxParams,
                    tolerances: Tolerances = DEFAULT) -> LaxSolution:
    """Rebuild the Lax solution deterministically by pinning the recorded z."""
    return build_lax(seed, params.mu, params.nu, params.lam,
                     z_mu_pin=params.z_mu, z_nu_pin=params.z_nu,
                     z_lambda_pin=params.z_lambda, tolerances=tolerances)
