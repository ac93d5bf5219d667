"""Machine-checkable claims over a trajectory.

``rk4_integrate`` is the independent fixed-step oracle for the nonlinear
flow; ``run_suite`` aggregates every named check (residual, spectrum or
trace-moment invariance, Hermiticity, trace, positivity, projector
idempotency, form gap, covariance of the transformed left solution) into a
single deterministic report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .darboux_engine import (SampleDiagnostics, Trajectory, dressed_state_at,
                             projector_at, transform_psi)
from .lax_engine import lax_from_params
from .operator_core import dagger, frob, trace_moments
from .seed_factory import SeedSolution
from .tolerances import DEFAULT, Tolerances
from .vne_model import ModelSpec, default_step, hamiltonian_of, residual, rhs


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_value: float
    tolerance: float
    location_t: float | None


@dataclass(eq=False)
class VerificationReport:
    scenario_id: str
    checks: list
    overall: bool = field(init=False)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "overall", all(c.passed for c in self.checks))

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "overall": self.overall,
            "checks": [
                {"name": c.name, "pass": c.passed, "worst_value": c.worst_value,
                 "tolerance": c.tolerance, "location_t": c.location_t}
                for c in self.checks
            ],
            "notes": self.notes,
        }


def rk4_integrate(spec: ModelSpec, rho0, t_end: float, dt: float) -> Trajectory:
    """Classical fixed-step RK4 for rho' = rhs(spec, rho).

    The state is re-symmetrized (``(rho + rho^dag)/2``) after every step and
    the largest correction is logged in the trajectory diagnostics.  Negative
    ``t_end`` integrates backwards.  Steps are rejected once ``||rho||``
    exceeds 1e6.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    rho = np.array(rho0, dtype=complex)
    steps = int(round(abs(t_end) / dt))
    h = dt if t_end >= 0 else -dt
    times = [0.0]
    states = [rho.copy()]
    drift = 0.0
    t = 0.0
    for _ in range(steps):
        k1 = rhs(spec, rho)
        k2 = rhs(spec, rho + (h / 2) * k1)
        k3 = rhs(spec, rho + (h / 2) * k2)
        k4 = rhs(spec, rho + h * k3)
        rho = rho + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        sym = (rho + dagger(rho)) / 2
        drift = max(drift, frob(rho - sym))
        rho = sym
        if frob(rho) > 1e6:
            raise RuntimeError(f"state norm exceeded 1e6 at t = {t + h:.3g}")
        t += h
        times.append(t)
        states.append(rho.copy())
    if h < 0:
        times = times[::-1]
        states = states[::-1]
    traj = Trajectory(times=np.array(times), states=states)
    traj.resym_drift = drift
    return traj


def _worst(values, times):
    idx = int(np.argmax(values))
    return float(values[idx]), float(times[idx])


def run_suite(traj: Trajectory, *, scenario_id: str = "scenario",
              enabled: dict | None = None, reference: np.ndarray | None = None,
              residual_tol_scale: float = 1.0,
              tolerances: Tolerances = DEFAULT,
              notes: dict | None = None) -> VerificationReport:
    """Run every applicable named check over a dressed trajectory.

    ``reference`` overrides the matrix whose spectrum / moments / trace the
    samples are compared against (defaults to the seed's rho(0); symmetry
    pipelines pass the transformed reference).  Check failures become report
    entries, never exceptions.
    """
    seed: SeedSolution = traj.seed_ref
    params = traj.params_ref
    if seed is None or params is None:
        raise ValueError("run_suite needs a trajectory with seed and parameter refs")
    spec = seed.spec
    ref = seed.rho0 if reference is None else np.asarray(reference, dtype=complex)
    herm = params.hermitian_mode
    diags: list[SampleDiagnostics] = traj.diagnostics or []
    times = traj.times
    have_samples = len(times) > 0

    def on(name: str, default: bool = True) -> bool:
        if enabled is None:
            return default
        return bool(enabled.get(name, default))

    checks: list[CheckResult] = []

    def add(name, worst, tol, loc):
        checks.append(CheckResult(name=name, passed=bool(worst <= tol),
                                  worst_value=float(worst), tolerance=float(tol),
                                  location_t=loc))

    if on("residual") and have_samples and traj.rho_at is not None:
        reports = [residual(spec, traj.rho_at, t, tol_scale=residual_tol_scale,
                            tolerances=tolerances) for t in times]
        worst_idx = int(np.argmax([r.residual_norm for r in reports]))
        worst = reports[worst_idx]
        add("residual", worst.residual_norm, worst.tolerance_used, worst.t)

    if on("idempotency") and diags:
        vals = [frob(d.P @ d.P - d.P) for d in diags]
        worst, loc = _worst(vals, times)
        add("idempotency", worst, tolerances.idempotency, loc)
        trs = [abs(np.trace(d.P) - 1.0) for d in diags]
        worst, loc = _worst(trs, times)
        add("projector_trace", worst, tolerances.projector_trace, loc)

    if on("form_gap") and diags:
        worst, loc = _worst([d.form_gap for d in diags], times)
        add("form_gap", worst, tolerances.form_gap, loc)

    if on("trace") and have_samples:
        ref_trace = complex(np.trace(ref))
        vals = [abs(np.trace(s) - ref_trace) for s in traj.states]
        worst, loc = _worst(vals, times)
        add("trace", worst, tolerances.trace_match, loc)

    if herm:
        if on("hermiticity") and have_samples:
            vals = [frob(s - dagger(s)) for s in traj.states]
            worst, loc = _worst(vals, times)
            add("hermiticity", worst, tolerances.hermiticity_gap, loc)
        if on("spectrum") and have_samples:
            ref_vals = np.linalg.eigvalsh((ref + dagger(ref)) / 2)
            gaps = []
            for s in traj.states:
                vals = np.linalg.eigvalsh((s + dagger(s)) / 2)
                gaps.append(float(np.max(np.abs(vals - ref_vals))))
            worst, loc = _worst(gaps, times)
            add("spectrum", worst, tolerances.spectral_match, loc)
        ref_min = float(np.linalg.eigvalsh((ref + dagger(ref)) / 2)[0])
        seed_positive = ref_min >= tolerances.positivity_floor
        if on("positivity", default=seed_positive) and seed_positive and have_samples:
            vals = [-float(np.linalg.eigvalsh((s + dagger(s)) / 2)[0])
                    for s in traj.states]
            worst, loc = _worst(vals, times)
            add("positivity", worst, -tolerances.positivity_floor, loc)
    else:
        if on("moments") and have_samples:
            ref_moments = trace_moments(ref, spec.dim)
            gaps = [float(np.max(np.abs(trace_moments(s, spec.dim) - ref_moments)))
                    for s in traj.states]
            worst, loc = _worst(gaps, times)
            add("moments", worst, tolerances.moment_match, loc)

    if params.lam is not None and on("covariance") and have_samples:
        lax = lax_from_params(seed, params, tolerances=tolerances)
        A = spec.A
        lam = params.lam
        z_l = params.z_lambda
        eig_gaps, teq_gaps = [], []
        # the psi stencil is roundoff-limited, not truncation-limited, so a
        # coarser step than the matrix-residual default is strictly better
        h = 10 * default_step(spec)

        def psi1_at(t: float) -> np.ndarray:
            P = projector_at(lax, t, tolerances=tolerances)
            return transform_psi(lax.psi_at(t), P, params.mu, params.nu, lam)

        for t in times:
            # covariance is a property of the dressed state itself, so it is
            # rebuilt here even when the trajectory carries transformed states
            rho1 = dressed_state_at(seed, lax, t, tolerances=tolerances).rho1
            psi1 = psi1_at(t)
            # psi solves a linear equation and carries an arbitrary scale
            # (often exponentially growing), so residuals are per unit norm
            scale = max(1.0, float(np.linalg.norm(psi1)))
            eig_gaps.append(float(np.linalg.norm(
                z_l * psi1 - psi1 @ (rho1 - lam * A))) / scale)
            dpsi = (-psi1_at(t + 2 * h) + 8 * psi1_at(t + h)
                    - 8 * psi1_at(t - h) + psi1_at(t - 2 * h)) / (12 * h)
            V2 = hamiltonian_of(spec, rho1)
            teq_gaps.append(float(np.linalg.norm(
                -1j * dpsi - psi1 @ (V2 - lam * spec.powers[spec.n + 1]))) / scale)
        worst, loc = _worst(eig_gaps, times)
        add("covariance", worst, tolerances.covariance, loc)
        worst, loc = _worst(teq_gaps, times)
        add("time_equation", worst, tolerances.time_equation, loc)

    if traj.singular_t is not None:
        checks.append(CheckResult(name="singularity", passed=False,
                                  worst_value=float("inf"), tolerance=0.0,
                                  location_t=float(traj.singular_t)))

    return VerificationReport(scenario_id=scenario_id, checks=checks,
                              notes=notes or {})
