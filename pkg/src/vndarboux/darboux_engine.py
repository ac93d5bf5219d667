"""Binary Darboux dressing: projector, similarity operator, dressed states.

The rank-one idempotent ``P = |phi><chi| / <chi|phi>`` turns a seed solution
rho into ``rho[1] = rho + (mu - nu)[P, A]``, which equals the similarity form
``T rho T^{-1}`` with ``T = 1 + ((mu - nu)/nu) P = exp(P ln(mu/nu))``.  Both
forms are computed independently on every call; their distance (``form_gap``)
is the strongest integrity check of the whole pipeline and a disagreement is
an error, never a warning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InconsistentLax, SingularDarboux
from .lax_engine import DarbouxParams, LaxSolution, lax_from_params
from .operator_core import (as_operator, as_state, commutator, dagger, frob,
                            mat_exp, trace_moments)
from .seed_factory import SeedFamily, SeedSolution
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True, eq=False)
class DressedState:
    """rho[1] at one time together with the operators that produced it."""

    rho1: np.ndarray
    P: np.ndarray
    T: np.ndarray
    t: float
    form_gap: float


@dataclass(frozen=True, eq=False)
class SampleDiagnostics:
    moments: np.ndarray
    hermiticity_gap: float
    min_eig: float | None
    phi_norm: float
    F_value: complex | None
    form_gap: float
    trace: complex
    p_dot_norm: float
    P: np.ndarray


@dataclass(eq=False)
class Trajectory:
    """Sampled rho[1](t) with per-sample diagnostics and an exact re-evaluator.

    ``rho_at`` recomputes the state at arbitrary t (used by the residual and
    covariance checks); ``singular_t`` is set when the dressing blew up and
    the sampling was truncated.
    """

    times: np.ndarray
    states: list
    seed_ref: SeedSolution | None = None
    params_ref: DarbouxParams | None = None
    diagnostics: list | None = None
    rho_at: object = None
    singular_t: float | None = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        if self.diagnostics is not None and len(self.diagnostics) != len(self.states):
            raise ValueError("diagnostics length must match states")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")


def projector(phi, chi, tolerances: Tolerances = DEFAULT) -> np.ndarray:
    """Rank-one idempotent ``|phi><chi| / <chi|phi>``.

    ``chi`` is a row vector (conjugation folded in), so the overlap is the
    plain contraction ``chi @ phi``.  Near-orthogonal pairs raise
    ``SingularDarboux``: the quotient loses all digits past the floor.
    """
    phi = as_state(phi)
    chi = as_state(chi)
    if phi.shape != chi.shape:
        raise ValueError("phi and chi dimensions disagree")
    overlap = chi @ phi
    floor = tolerances.overlap_floor * np.linalg.norm(phi) * np.linalg.norm(chi)
    if abs(overlap) < floor:
        raise SingularDarboux(
            f"<chi|phi> = {overlap:.3e} is below the relative floor {floor:.3e}")
    P = np.outer(phi, chi) / overlap
    if frob(P @ P - P) > tolerances.idempotency * max(1.0, frob(P)):
        raise SingularDarboux(
            "projector lost idempotency to round-off; the pair is too close "
            "to orthogonal for a reliable dressing")
    if abs(np.trace(P) - 1.0) > tolerances.projector_trace:
        raise SingularDarboux("projector trace moved away from 1")
    return P


def similarity_T(P, mu: complex, nu: complex,
                 tolerances: Tolerances = DEFAULT) -> np.ndarray:
    """T = 1 + ((mu - nu)/nu) P, asserted equal to exp(P ln(mu/nu)).

    The principal branch is used for the logarithm; the equality is
    branch-independent because exp(zP) = 1 - P + e^z P for idempotent P.
    """
    P = as_operator(P)
    mu = complex(mu)
    nu = complex(nu)
    if mu == 0 or nu == 0:
        raise ValueError("mu and nu must be nonzero")
    eye = np.eye(P.shape[0], dtype=complex)
    T = eye + ((mu - nu) / nu) * P
    T_exp = mat_exp(np.log(mu / nu) * P)
    if frob(T - T_exp) > tolerances.t_equality * max(1.0, frob(T)):
        raise InconsistentLax(
            "rational and exponential forms of T disagree; P is not idempotent")
    return T


def dress(rho, A, P, mu: complex, nu: complex, t: float = 0.0,
          tolerances: Tolerances = DEFAULT) -> DressedState:
    """Dress one state: rho[1] by the commutator form, cross-checked.

    Computes ``rho + (mu - nu)[P, A]`` and ``T rho T^{-1}`` independently
    (``T^{-1} = 1 + ((nu - mu)/mu) P`` analytically) and records their
    distance as ``form_gap``.  Also asserts the bridging identity

        [P, A] = ((nu - mu)/(mu nu)) P rho P - (1/mu) rho P + (1/nu) P rho,

    which only holds when P comes from genuine eigenvectors of the pencils.
    """
    rho = as_operator(rho)
    A = as_operator(A)
    P = as_operator(P)
    mu = complex(mu)
    nu = complex(nu)
    if mu == 0 or nu == 0:
        raise ValueError("mu and nu must be nonzero")

    comm_PA = commutator(P, A)
    rho1 = rho + (mu - nu) * comm_PA

    T = similarity_T(P, mu, nu, tolerances=tolerances)
    eye = np.eye(rho.shape[0], dtype=complex)
    T_inv = eye + ((nu - mu) / mu) * P
    rho1_sim = T @ rho @ T_inv
    form_gap = frob(rho1 - rho1_sim)
    if form_gap > tolerances.form_gap:
        raise InconsistentLax(
            f"form_gap = {form_gap:.3e}: commutator and similarity forms of "
            "rho[1] disagree, so P was not built from genuine eigenvectors")

    bridge = (((nu - mu) / (mu * nu)) * (P @ rho @ P)
              - (rho @ P) / mu + (P @ rho) / nu)
    bridge_gap = frob(comm_PA - bridge)
    if bridge_gap > tolerances.bridge_identity * max(1.0, frob(rho) * frob(P)):
        raise InconsistentLax(
            f"[P, A] bridging identity violated by {bridge_gap:.3e}")

    if abs(nu - np.conj(mu)) <= 1e-12 * max(1.0, abs(mu)):
        unitarity = frob(dagger(T) @ T - eye)
        if unitarity > tolerances.t_unitarity:
            raise InconsistentLax(
                f"T fails unitarity by {unitarity:.3e} although nu = conj(mu)")

    return DressedState(rho1=rho1, P=P, T=T, t=float(t), form_gap=form_gap)


def _normalized_pair(lax: LaxSolution, t: float) -> tuple[np.ndarray, np.ndarray, float]:
    # P is homogeneous of degree zero in phi and chi, so renormalizing before
    # forming it is exact and prevents overflow at large |t|.
    phi = lax.phi_at(t)
    phi_norm = float(np.linalg.norm(phi))
    if phi_norm == 0:
        raise SingularDarboux("phi(t) vanished", t=t)
    phi_hat = phi / phi_norm
    if lax.params.hermitian_mode:
        chi_hat = np.conj(phi_hat)
    else:
        chi = lax.chi_at(t)
        chi_norm = float(np.linalg.norm(chi))
        if chi_norm == 0:
            raise SingularDarboux("chi(t) vanished", t=t)
        chi_hat = chi / chi_norm
    return phi_hat, chi_hat, phi_norm


def projector_at(lax: LaxSolution, t: float,
                 tolerances: Tolerances = DEFAULT) -> np.ndarray:
    phi_hat, chi_hat, _ = _normalized_pair(lax, t)
    return projector(phi_hat, chi_hat, tolerances=tolerances)


def f_value(seed: SeedSolution, mu: complex, phi0, t: float) -> complex:
    """F_a(t) = <phi(0)| exp(i ((mu - conj mu)/|mu|^2) Delta_a t) |phi(0)>."""
    phi0 = as_state(phi0)
    mu = complex(mu)
    coeff = 1j * ((mu - np.conj(mu)) / abs(mu) ** 2) * t
    return complex(np.conj(phi0) @ (mat_exp(coeff * seed.delta_a) @ phi0))


def dressed_state_at(seed: SeedSolution, lax: LaxSolution, t: float,
                     tolerances: Tolerances = DEFAULT) -> DressedState:
    P = projector_at(lax, t, tolerances=tolerances)
    return dress(seed.rho_at(t), seed.spec.A, P,
                 lax.params.mu, lax.params.nu, t=t, tolerances=tolerances)


def dressed_trajectory(seed: SeedSolution, params: DarbouxParams, times,
                       tolerances: Tolerances = DEFAULT,
                       lax: LaxSolution | None = None) -> Trajectory:
    """Sample rho[1](t) over a time grid with full per-sample diagnostics.

    A ``SingularDarboux`` at some sample truncates the trajectory and records
    the singular time instead of aborting.
    """
    times = np.asarray(times, dtype=float)
    if lax is None:
        lax = lax_from_params(seed, params, tolerances=tolerances)
    params = lax.params
    dim = seed.dim
    herm = params.hermitian_mode
    delta_family = seed.family is SeedFamily.DELTA_COMMUTING

    def rho1_at(t: float) -> np.ndarray:
        return dressed_state_at(seed, lax, t, tolerances=tolerances).rho1

    states, diagnostics = [], []
    done_times = []
    singular_t = None
    dp = 1e-4
    for t in times:
        try:
            phi_hat, chi_hat, phi_norm = _normalized_pair(lax, t)
            P = projector(phi_hat, chi_hat, tolerances=tolerances)
            ds = dress(seed.rho_at(t), seed.spec.A, P, params.mu, params.nu,
                       t=t, tolerances=tolerances)
            p_plus = projector_at(lax, t + dp, tolerances=tolerances)
            p_minus = projector_at(lax, t - dp, tolerances=tolerances)
        except SingularDarboux as exc:
            singular_t = float(t) if exc.t is None else float(exc.t)
            break
        rho1 = ds.rho1
        herm_gap = frob(rho1 - dagger(rho1))
        min_eig = None
        if herm:
            min_eig = float(np.linalg.eigvalsh((rho1 + dagger(rho1)) / 2)[0])
        diagnostics.append(SampleDiagnostics(
            moments=trace_moments(rho1, dim),
            hermiticity_gap=float(herm_gap),
            min_eig=min_eig,
            phi_norm=phi_norm,
            F_value=f_value(seed, params.mu, lax.phi0, t) if (delta_family and herm) else None,
            form_gap=ds.form_gap,
            trace=complex(np.trace(rho1)),
            p_dot_norm=float(frob((p_plus - p_minus) / (2 * dp))),
            P=P,
        ))
        states.append(rho1)
        done_times.append(float(t))

    return Trajectory(times=np.array(done_times), states=states,
                      seed_ref=seed, params_ref=params,
                      diagnostics=diagnostics, rho_at=rho1_at,
                      singular_t=singular_t)


def explicit_eavn(seed: SeedSolution, mu: complex, phi0, t: float,
                  tolerances: Tolerances = DEFAULT) -> np.ndarray:
    """Closed-form dressed solution for n = 1 Delta-commuting seeds.

    Valid in hermitian mode (nu = conj(mu) is built in) with H = A:

        rho[1](t) = e^{-iaHt} ( rho(0) + (mu - conj mu) F_a(t)^{-1}
                    e^{-(i/mu) Delta_a t} [|phi0><phi0|, H]
                    e^{(i/conj mu) Delta_a t} ) e^{iaHt}.
    """
    if seed.family is not SeedFamily.DELTA_COMMUTING or seed.spec.n != 1:
        raise ValueError("explicit_eavn requires an n = 1 Delta-commuting seed")
    phi0 = as_state(phi0)
    mu = complex(mu)
    if mu == 0:
        raise ValueError("mu must be nonzero")
    H = seed.spec.A
    a = seed.a
    delta = seed.delta_a
    F = f_value(seed, mu, phi0, t)
    if abs(F) < tolerances.f_floor:
        raise SingularDarboux(f"F_a({t}) = {F:.3e} vanished", t=t)
    proj0 = np.outer(phi0, np.conj(phi0))
    core = (mat_exp(-(1j / mu) * t * delta)
            @ commutator(proj0, H)
            @ mat_exp((1j / np.conj(mu)) * t * delta))
    inner = seed.rho0 + ((mu - np.conj(mu)) / F) * core
    U = mat_exp(-1j * a * t * H)
    return U @ inner @ dagger(U)


def transform_psi(psi, P, mu: complex, nu: complex, lam: complex) -> np.ndarray:
    """Covariance transform of the left lambda-solution:

    psi[1] = psi (1 - ((nu - mu)/(lambda - mu)) P).
    """
    psi = as_state(psi)
    P = as_operator(P)
    mu = complex(mu)
    nu = complex(nu)
    lam = complex(lam)
    if lam == mu:
        raise ValueError("lambda must differ from mu")
    return psi - ((nu - mu) / (lam - mu)) * (psi @ P)
