"""Command-line pipeline: seed -> Lax -> dress -> symmetries -> verify.

Scenario configs are JSON documents; complex numbers are ``[re, im]`` pairs
and matrices nested row arrays of such pairs.  ``run`` writes

* ``trajectory.csv``   t, row-major Re/Im entries of the final state, then
  scalar diagnostics (17 significant digits, bit-exact round trip);
* ``report.json``      the verification report;
* ``scenario.lock.json``  the fully resolved config (selected eigenvalues,
  seed matrices); feeding it back to ``run`` reproduces the CSV bitwise.

Exit codes: 0 all checks pass, 1 a check failed, 2 schema/config error,
3 the dressing hit a singular <chi|phi>.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .darboux_engine import Trajectory, dressed_trajectory
from .errors import DarbouxError, SingularDarboux, UnsupportedScenario
from .lax_engine import build_lax, eigenvalue_multiplicity
from .operator_core import frob
from .seed_factory import (SeedSolution, make_anticommuting_seed,
                           make_commuting_seed, make_delta_commuting_seed)
from .symmetry_transforms import (ShiftSpec, reseed_rescale, reseed_shift,
                                  rescaled_flow, shifted_flow)
from .tolerances import DEFAULT, Tolerances
from .verification import VerificationReport, run_suite

_SEED_FAMILIES = ("anticommuting", "delta_commuting", "commuting")
_CHECK_NAMES = ("residual", "idempotency", "form_gap", "trace", "hermiticity",
                "spectrum", "moments", "positivity", "covariance")


# ---------------------------------------------------------------------------
# JSON <-> numeric helpers

def complex_to_pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_nested(M: np.ndarray) -> list:
    return [[complex_to_pair(M[i, j]) for j in range(M.shape[1])]
            for i in range(M.shape[0])]


class _Collector:
    def __init__(self):
        self.errors: list[str] = []

    def add(self, path: str, message: str):
        self.errors.append(f"{path}: {message}")


def _as_pair(value, path, errs) -> complex | None:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(x, (int, float)) for x in value)):
        errs.add(path, "expected a [re, im] pair")
        return None
    return complex(float(value[0]), float(value[1]))


def _as_matrix(value, path, errs) -> np.ndarray | None:
    if not isinstance(value, list) or not value:
        errs.add(path, "expected a nested row array of [re, im] pairs")
        return None
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != len(value):
            errs.add(path, "matrix must be square")
            return None
        entries = []
        for j, e in enumerate(row):
            z = _as_pair(e, f"{path}[{i}][{j}]", errs)
            if z is None:
                return None
            entries.append(z)
        rows.append(entries)
    return np.array(rows, dtype=complex)


def _real_number(value, path, errs, nonzero=False) -> float | None:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        errs.add(path, "expected a real number")
        return None
    if nonzero and value == 0:
        errs.add(path, "must be nonzero")
        return None
    return float(value)


# ---------------------------------------------------------------------------
# schema validation

_SECTION_KEYS = {
    "": {"id", "model", "seed", "darboux", "times", "symmetries", "checks",
         "tolerances"},
    "model": {"n", "A"},
    "seed": {"family", "dim_pairs", "b", "alpha", "blocks", "a", "p"},
    "darboux": {"mu", "nu_mode", "lambda", "z_mu_pin", "z_nu_pin",
                "z_lambda_pin"},
    "times": {"t_min", "t_max", "samples"},
    "symmetries": {"order", "shift_lambda", "shift_x", "rescale_y"},
}


def _check_keys(obj, section, errs):
    allowed = _SECTION_KEYS[section]
    prefix = f"{section}." if section else ""
    for key in obj:
        if key not in allowed:
            errs.add(f"{prefix}{key}", "unknown field")


def validate_config(data) -> tuple[dict, list[str]]:
    """Normalize a raw config dict; returns (config, error messages)."""
    errs = _Collector()
    if not isinstance(data, dict):
        return {}, ["top level: expected a JSON object"]
    _check_keys(data, "", errs)

    cfg = {}
    cfg["id"] = data.get("id")
    if not isinstance(cfg["id"], str) or not cfg["id"]:
        errs.add("id", "required non-empty string")
        cfg["id"] = "unnamed"

    model = data.get("model")
    if not isinstance(model, dict):
        errs.add("model", "required object with field n")
        model = {}
    _check_keys(model, "model", errs)
    n = model.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        errs.add("model.n", "must be a positive integer")
        n = 1
    cfg["model"] = {"n": n}
    if "A" in model:
        A = _as_matrix(model["A"], "model.A", errs)
        if A is not None:
            cfg["model"]["A"] = model["A"]

    seed = data.get("seed")
    if not isinstance(seed, dict):
        errs.add("seed", "required object")
        seed = {}
    _check_keys(seed, "seed", errs)
    family = seed.get("family")
    if family not in _SEED_FAMILIES:
        errs.add("seed.family", f"must be one of {_SEED_FAMILIES}")
        family = None
    cfg["seed"] = dict(seed)
    if family == "anticommuting":
        pairs = seed.get("dim_pairs")
        if not isinstance(pairs, int) or isinstance(pairs, bool) or pairs < 1:
            errs.add("seed.dim_pairs", "must be a positive integer")
        b = seed.get("b")
        if not isinstance(b, list) or not b or any(
                not isinstance(x, (int, float)) or x == 0 for x in b):
            errs.add("seed.b", "must be a list of nonzero reals")
        elif isinstance(pairs, int) and len(b) != pairs:
            errs.add("seed.b", f"must have exactly {pairs} entries")
        alpha = seed.get("alpha")
        if alpha is not None:
            if not isinstance(alpha, list) or any(
                    not isinstance(x, (int, float)) or x == 0 for x in alpha):
                errs.add("seed.alpha", "must be a list of nonzero reals")
            elif isinstance(pairs, int) and len(alpha) != pairs:
                errs.add("seed.alpha", f"must have exactly {pairs} entries")
    elif family == "delta_commuting":
        if n != 1:
            errs.add("model.n", "delta_commuting seeds require n = 1")
        blocks = seed.get("blocks")
        if (not isinstance(blocks, list) or not blocks
                or any(not isinstance(blk, list) or len(blk) != 2
                       or any(not isinstance(x, (int, float)) for x in blk)
                       for blk in blocks)):
            errs.add("seed.blocks", "must be a non-empty list of [omega, kappa] pairs")
        elif any(blk[1] == 0 for blk in blocks):
            errs.add("seed.blocks", "every kappa must be nonzero")
        _real_number(seed.get("a"), "seed.a", errs)
    elif family == "commuting":
        p = seed.get("p")
        alpha = seed.get("alpha")
        for name, val in (("p", p), ("alpha", alpha)):
            if not isinstance(val, list) or not val or any(
                    not isinstance(x, (int, float)) for x in val):
                errs.add(f"seed.{name}", "must be a non-empty list of reals")
        if isinstance(p, list) and isinstance(alpha, list) and len(p) != len(alpha):
            errs.add("seed.alpha", "must match the length of seed.p")

    darboux = data.get("darboux")
    if not isinstance(darboux, dict):
        errs.add("darboux", "required object with field mu")
        darboux = {}
    _check_keys(darboux, "darboux", errs)
    cfg["darboux"] = dict(darboux)
    mu = _as_pair(darboux.get("mu"), "darboux.mu", errs)
    if mu is not None and mu == 0:
        errs.add("darboux.mu", "must be nonzero")
        mu = None
    nu_mode = darboux.get("nu_mode", "conjugate")
    nu = None
    if nu_mode == "conjugate":
        if mu is not None:
            nu = np.conj(mu)
            if abs(mu - nu) <= 1e-14 * max(1.0, abs(mu)):
                errs.add("darboux.mu", "real mu with conjugate nu gives the "
                         "identity transformation; use a complex mu")
    elif isinstance(nu_mode, dict) and "explicit" in nu_mode:
        nu = _as_pair(nu_mode["explicit"], "darboux.nu_mode.explicit", errs)
        if nu is not None and nu == 0:
            errs.add("darboux.nu_mode.explicit", "must be nonzero")
            nu = None
        if None not in (mu, nu) and abs(mu - nu) <= 1e-14 * max(1.0, abs(mu)):
            errs.add("darboux.nu_mode.explicit",
                     "nu must differ from mu (identity transformation)")
    else:
        errs.add("darboux.nu_mode", 'must be "conjugate" or {"explicit": [re, im]}')
    lam = None
    if "lambda" in darboux:
        lam = _as_pair(darboux["lambda"], "darboux.lambda", errs)
        if lam is not None and mu is not None and lam == mu:
            errs.add("darboux.lambda", "must differ from mu")
    for pin in ("z_mu_pin", "z_nu_pin", "z_lambda_pin"):
        if pin in darboux:
            _as_pair(darboux[pin], f"darboux.{pin}", errs)

    times = data.get("times")
    if not isinstance(times, dict):
        errs.add("times", "required object with t_min, t_max, samples")
        times = {}
    _check_keys(times, "times", errs)
    t_min = _real_number(times.get("t_min"), "times.t_min", errs)
    t_max = _real_number(times.get("t_max"), "times.t_max", errs)
    samples = times.get("samples")
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 2:
        errs.add("times.samples", "must be an integer >= 2")
    if None not in (t_min, t_max) and not t_min < t_max:
        errs.add("times.t_min", "must be strictly below t_max")
    cfg["times"] = dict(times)

    symmetries = data.get("symmetries")
    if symmetries is not None:
        if not isinstance(symmetries, dict):
            errs.add("symmetries", "expected an object")
            symmetries = {}
        _check_keys(symmetries, "symmetries", errs)
        order = symmetries.get("order", "after")
        if order not in ("before", "after"):
            errs.add("symmetries.order", 'must be "before" or "after"')
        if "shift_lambda" in symmetries:
            _real_number(symmetries["shift_lambda"], "symmetries.shift_lambda", errs)
        if "shift_x" in symmetries:
            if "shift_lambda" in symmetries:
                errs.add("symmetries.shift_x", "mutually exclusive with shift_lambda")
            _as_matrix(symmetries["shift_x"], "symmetries.shift_x", errs)
            if order == "before":
                errs.add("symmetries.shift_x",
                         'general X supports order "after" only')
        if "rescale_y" in symmetries:
            _real_number(symmetries["rescale_y"], "symmetries.rescale_y",
                         errs, nonzero=True)
        if (order == "before" and family == "anticommuting"
                and symmetries.get("shift_lambda", 0.0) != 0.0):
            errs.add("symmetries.order",
                     "a uniform shift breaks the anticommuting structure; "
                     'use order "after" for this family')
        cfg["symmetries"] = {"order": order, **{k: symmetries[k] for k in
                             ("shift_lambda", "shift_x", "rescale_y")
                             if k in symmetries}}

    checks = data.get("checks")
    if checks is not None:
        if not isinstance(checks, dict):
            errs.add("checks", "expected an object of booleans")
        else:
            for key, val in checks.items():
                if key not in _CHECK_NAMES:
                    errs.add(f"checks.{key}", f"unknown check (known: {_CHECK_NAMES})")
                elif not isinstance(val, bool):
                    errs.add(f"checks.{key}", "expected a boolean")
            cfg["checks"] = dict(checks)

    overrides = data.get("tolerances")
    if overrides is not None:
        if not isinstance(overrides, dict):
            errs.add("tolerances", "expected an object of numbers")
        else:
            known = set(Tolerances().__dataclass_fields__)
            for key, val in overrides.items():
                if key not in known:
                    errs.add(f"tolerances.{key}", "unknown tolerance name")
                elif not isinstance(val, (int, float)) or isinstance(val, bool):
                    errs.add(f"tolerances.{key}", "expected a number")
            cfg["tolerances"] = dict(overrides)

    return cfg, errs.errors


def build_seed(cfg: dict) -> SeedSolution:
    seed_cfg = cfg["seed"]
    family = seed_cfg["family"]
    n = cfg["model"]["n"]
    if family == "anticommuting":
        seed = make_anticommuting_seed(seed_cfg["dim_pairs"], seed_cfg["b"],
                                       alpha=seed_cfg.get("alpha"), n=n)
    elif family == "delta_commuting":
        seed = make_delta_commuting_seed([tuple(b) for b in seed_cfg["blocks"]],
                                         seed_cfg["a"])
    else:
        seed = make_commuting_seed(seed_cfg["p"], seed_cfg["alpha"], n=n)
    if "A" in cfg["model"]:
        A_given = np.array([[complex(e[0], e[1]) for e in row]
                            for row in cfg["model"]["A"]])
        if A_given.shape != seed.spec.A.shape or frob(A_given - seed.spec.A) > 1e-12:
            raise ValueError(
                "model.A: does not match the operator derived from the seed "
                "parameters (A is determined by the seed family)")
    return seed


# ---------------------------------------------------------------------------
# pipeline

@dataclass(eq=False)
class ScenarioResult:
    config: dict
    seed: SeedSolution
    trajectory: Trajectory
    report: VerificationReport
    lock: dict


def _scenario_tolerances(cfg: dict, tol_scale: float) -> Tolerances:
    tol = DEFAULT
    if cfg.get("tolerances"):
        tol = tol.replaced(**{k: float(v) for k, v in cfg["tolerances"].items()})
    if tol_scale != 1.0:
        tol = tol.scaled(tol_scale)
    return tol


def execute_scenario(cfg: dict, tol_scale: float = 1.0) -> ScenarioResult:
    tolerances = _scenario_tolerances(cfg, tol_scale)
    seed = build_seed(cfg)

    sym = cfg.get("symmetries") or {}
    order = sym.get("order", "after")
    shift_lam = float(sym.get("shift_lambda", 0.0))
    rescale_y = float(sym.get("rescale_y", 1.0))
    shift_x = sym.get("shift_x")
    if order == "before":
        if shift_lam != 0.0:
            seed = reseed_shift(seed, shift_lam, tolerances=tolerances)
        if rescale_y != 1.0:
            seed = reseed_rescale(seed, rescale_y)

    darboux = cfg["darboux"]
    mu = complex(darboux["mu"][0], darboux["mu"][1])
    nu_mode = darboux.get("nu_mode", "conjugate")
    nu = None if nu_mode == "conjugate" else complex(*nu_mode["explicit"])
    lam = None
    if "lambda" in darboux:
        lam = complex(darboux["lambda"][0], darboux["lambda"][1])
    pins = {}
    for pin, kw in (("z_mu_pin", "z_mu_pin"), ("z_nu_pin", "z_nu_pin"),
                    ("z_lambda_pin", "z_lambda_pin")):
        if pin in darboux:
            pins[kw] = complex(darboux[pin][0], darboux[pin][1])

    lax = build_lax(seed, mu, nu, lam, tolerances=tolerances, **pins)
    params = lax.params

    times_cfg = cfg["times"]
    times = np.linspace(times_cfg["t_min"], times_cfg["t_max"],
                        times_cfg["samples"])
    traj = dressed_trajectory(seed, params, times, tolerances=tolerances,
                              lax=lax)

    reference = None
    residual_scale = 1.0
    final = traj
    if order == "after" and (shift_lam != 0.0 or rescale_y != 1.0
                             or shift_x is not None):
        spec = seed.spec
        flow = traj.rho_at
        if shift_x is not None:
            X = np.array([[complex(e[0], e[1]) for e in row] for row in shift_x])
            flow = shifted_flow(spec, flow, X, tolerances=tolerances)
            reference = seed.rho0 + X
            residual_scale = (1.0 + frob(X)) * max(1.0, frob(spec.A) ** spec.n)
        elif shift_lam != 0.0:
            X = ShiftSpec.uniform(shift_lam, seed.dim)
            flow = shifted_flow(spec, flow, X, tolerances=tolerances)
            reference = seed.rho0 + shift_lam * np.eye(seed.dim)
            residual_scale = (1.0 + abs(shift_lam)) * max(1.0, frob(spec.A) ** spec.n)
        else:
            reference = np.array(seed.rho0)
        if rescale_y != 1.0:
            flow = rescaled_flow(flow, rescale_y)
            reference = rescale_y * reference
            residual_scale *= rescale_y ** 2
        states = [flow(t) for t in traj.times]
        final = Trajectory(times=traj.times, states=states,
                           seed_ref=traj.seed_ref, params_ref=traj.params_ref,
                           diagnostics=traj.diagnostics, rho_at=flow,
                           singular_t=traj.singular_t)

    notes = {"symmetry_order": order if sym else None,
             "shift_lambda": shift_lam, "rescale_y": rescale_y,
             "hermitian_mode": params.hermitian_mode}
    report = run_suite(final, scenario_id=cfg["id"], enabled=cfg.get("checks"),
                       reference=reference, residual_tol_scale=residual_scale,
                       tolerances=tolerances, notes=notes)

    lock = {
        "config": cfg,
        "resolved": {
            "version": __version__,
            "hermitian_mode": params.hermitian_mode,
            "z_mu": complex_to_pair(params.z_mu),
            "z_nu": complex_to_pair(params.z_nu),
            "z_lambda": (complex_to_pair(params.z_lambda)
                         if params.z_lambda is not None else None),
            "z_nu_multiplicity": eigenvalue_multiplicity(seed, params.nu,
                                                         params.z_nu),
            "rho0": matrix_to_nested(seed.rho0),
            "A": matrix_to_nested(seed.spec.A),
            "phi0": [complex_to_pair(x) for x in lax.phi0],
            "chi0": [complex_to_pair(x) for x in lax.chi0],
            "singular_t": traj.singular_t,
        },
    }
    return ScenarioResult(config=cfg, seed=seed, trajectory=final,
                          report=report, lock=lock)


# ---------------------------------------------------------------------------
# output files

def _atomic_write(path: str, text: str):
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_trajectory_csv(path: str, result: ScenarioResult):
    traj = result.trajectory
    dim = result.seed.dim
    header = ["t"]
    for i in range(dim):
        for j in range(dim):
            header += [f"re_{i}_{j}", f"im_{i}_{j}"]
    header += ["phi_norm", "form_gap", "hermiticity_gap", "min_eig",
               "F_re", "F_im", "p_dot_norm"]
    lines = [",".join(header)]
    diags = traj.diagnostics or [None] * len(traj.states)
    for t, state, diag in zip(traj.times, traj.states, diags):
        row = [_fmt(float(t))]
        for i in range(dim):
            for j in range(dim):
                row += [_fmt(state[i, j].real), _fmt(state[i, j].imag)]
        if diag is None:
            row += [""] * 7
        else:
            row += [_fmt(diag.phi_norm), _fmt(diag.form_gap),
                    _fmt(diag.hermiticity_gap),
                    _fmt(diag.min_eig) if diag.min_eig is not None else "",
                    _fmt(diag.F_value.real) if diag.F_value is not None else "",
                    _fmt(diag.F_value.imag) if diag.F_value is not None else "",
                    _fmt(diag.p_dot_norm)]
        lines.append(",".join(row))
    _atomic_write(path, "\n".join(lines) + "\n")


def read_trajectory_csv(path: str) -> tuple[np.ndarray, list]:
    """Parse a trajectory.csv back into (times, state matrices)."""
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    header = rows[0]
    entry_cols = [c for c in header if c.startswith("re_")]
    dim = int(np.sqrt(len(entry_cols)))
    times, states = [], []
    for row in rows[1:]:
        times.append(float(row[0]))
        M = np.empty((dim, dim), dtype=complex)
        k = 1
        for i in range(dim):
            for j in range(dim):
                M[i, j] = complex(float(row[k]), float(row[k + 1]))
                k += 2
        states.append(M)
    return np.array(times), states


def write_outputs(result: ScenarioResult, out_dir: str):
    os.makedirs(out_dir, exist_ok=True)
    write_trajectory_csv(os.path.join(out_dir, "trajectory.csv"), result)
    _atomic_write(os.path.join(out_dir, "report.json"),
                  json.dumps(result.report.to_dict(), indent=2) + "\n")
    _atomic_write(os.path.join(out_dir, "scenario.lock.json"),
                  json.dumps(result.lock, indent=2) + "\n")


# ---------------------------------------------------------------------------
# commands

def _load_config(config_path: str) -> tuple[dict | None, list[str]]:
    try:
        with open(config_path) as handle:
            data = json.load(handle)
    except OSError as exc:
        return None, [f"{config_path}: {exc}"]
    except json.JSONDecodeError as exc:
        return None, [f"{config_path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"]
    if isinstance(data, dict) and "config" in data and "resolved" in data:
        data = data["config"]  # a lock file replays its embedded config
    return validate_config(data)


def run(config_path: str, out_dir: str, tol_scale: float = 1.0,
        seed_dump: bool = False) -> int:
    cfg, errors = _load_config(config_path)
    if errors:
        for e in errors:
            print(e, file=sys.stderr)
        return 2
    try:
        result = execute_scenario(cfg, tol_scale=tol_scale)
    except (ValueError, UnsupportedScenario) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SingularDarboux as exc:
        print(f"singular dressing: {exc}", file=sys.stderr)
        return 3
    except DarbouxError as exc:
        print(f"numerical check failure: {exc}", file=sys.stderr)
        return 1
    if seed_dump:
        np.set_printoptions(precision=17, linewidth=200)
        print("rho0 =")
        print(result.seed.rho0)
        print("A =")
        print(result.seed.spec.A)
    write_outputs(result, out_dir)
    if result.trajectory.singular_t is not None:
        print(f"singular dressing at t = {result.trajectory.singular_t:.6g}; "
              "trajectory truncated", file=sys.stderr)
        return 3
    if not result.report.overall:
        failed = [c.name for c in result.report.checks if not c.passed]
        print(f"checks failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def _check_value(report: VerificationReport, *names: str) -> float | None:
    for check in report.checks:
        if check.name in names:
            return check.worst_value
    return None


def _run_sweep_point(args: tuple) -> dict:
    cfg, out_dir, tol_scale, param, value_repr, index = args
    row = {"index": index, "param": param, "value": value_repr,
           "out_dir": out_dir, "status": "ok", "overall": False,
           "worst_residual": "", "worst_spectral_gap": ""}
    try:
        result = execute_scenario(cfg, tol_scale=tol_scale)
    except (ValueError, UnsupportedScenario):
        row["status"] = "config_error"
        return row
    except SingularDarboux:
        row["status"] = "singular"
        return row
    except DarbouxError:
        row["status"] = "check_failed"
        return row
    write_outputs(result, out_dir)
    report = result.report
    row["overall"] = report.overall
    res = _check_value(report, "residual")
    gap = _check_value(report, "spectrum", "moments")
    row["worst_residual"] = _fmt(res) if res is not None else ""
    row["worst_spectral_gap"] = _fmt(gap) if gap is not None else ""
    if result.trajectory.singular_t is not None:
        row["status"] = "singular"
    elif not report.overall:
        row["status"] = "check_failed"
    return row


def sweep(config_path: str, param: str, values, out_dir: str,
          jobs: int = 1, tol_scale: float = 1.0) -> int:
    cfg, errors = _load_config(config_path)
    if param not in ("mu", "t_max", "a"):
        errors = errors + [f"--param: unknown parameter {param!r}"]
    values = list(values)
    if not values:
        errors = errors + ["--values: empty list"]
    if not errors and param == "a" and cfg["seed"].get("family") != "delta_commuting":
        errors = [f"--param a: requires a delta_commuting seed, "
                  f"got {cfg['seed'].get('family')}"]
    if errors:
        for e in errors:
            print(e, file=sys.stderr)
        return 2

    points, rows_by_index = [], {}
    for idx, value in enumerate(values):
        sub = json.loads(json.dumps(cfg))  # deep copy via JSON round trip
        if param == "mu":
            value = complex(value)
            sub["darboux"]["mu"] = [value.real, value.imag]
            value_repr = f"{value.real:g}{value.imag:+g}j"
        elif param == "t_max":
            sub["times"]["t_max"] = float(value)
            value_repr = f"{float(value):g}"
        else:
            sub["seed"]["a"] = float(value)
            value_repr = f"{float(value):g}"
        sub["id"] = f"{cfg['id']}[{param}={value_repr}]"
        sub_dir = os.path.join(out_dir, f"{param}_{idx:03d}_{value_repr}")
        sub, sub_errors = validate_config(sub)
        if sub_errors:
            # a failing point never aborts the sweep
            for e in sub_errors:
                print(f"{param}={value_repr}: {e}", file=sys.stderr)
            rows_by_index[idx] = {
                "index": idx, "param": param, "value": value_repr,
                "out_dir": sub_dir, "status": "config_error",
                "overall": False, "worst_residual": "",
                "worst_spectral_gap": ""}
            continue
        points.append((sub, sub_dir, tol_scale, param, value_repr, idx))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            computed = list(pool.map(_run_sweep_point, points))
    else:
        computed = [_run_sweep_point(p) for p in points]
    for row in computed:
        rows_by_index[row["index"]] = row
    rows = [rows_by_index[i] for i in sorted(rows_by_index)]

    os.makedirs(out_dir, exist_ok=True)
    header = ["index", "param", "value", "status", "overall",
              "worst_residual", "worst_spectral_gap", "out_dir"]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(row[h]) for h in header))
    _atomic_write(os.path.join(out_dir, "summary.csv"), "\n".join(lines) + "\n")

    return 0 if all(r["status"] == "ok" for r in rows) else 1


def _parse_values(text: str, param: str) -> list:
    tokens = [tok.strip() for tok in text.split(",") if tok.strip()]
    if param == "mu":
        return [complex(tok) for tok in tokens]
    return [float(tok) for tok in tokens]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="vndarboux",
        description="Construct and verify Darboux-dressed solutions of "
                    "nonlinear von Neumann equations.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario config")
    run_p.add_argument("config")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--tol-scale", type=float, default=1.0,
                       help="global tolerance multiplier")
    run_p.add_argument("--seed-dump", action="store_true",
                       help="print the resolved seed matrices")

    sweep_p = sub.add_parser("sweep", help="run a parameter sweep")
    sweep_p.add_argument("config")
    sweep_p.add_argument("--param", required=True, choices=["mu", "t_max", "a"])
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated values; complex literals for mu "
                              "(e.g. '1j,2j,1+1j')")
    sweep_p.add_argument("--out", required=True)
    sweep_p.add_argument("--jobs", type=int, default=1)
    sweep_p.add_argument("--tol-scale", type=float, default=1.0)

    args = parser.parse_args(argv)
    if args.command == "run":
        return run(args.config, args.out, tol_scale=args.tol_scale,
                   seed_dump=args.seed_dump)
    try:
        values = _parse_values(args.values, args.param)
    except ValueError as exc:
        print(f"--values: {exc}", file=sys.stderr)
        return 2
    return sweep(args.config, args.param, values, args.out,
                 jobs=args.jobs, tol_scale=args.tol_scale)


if __name__ == "__main__":
    sys.exit(main())
