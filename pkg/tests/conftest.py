"""Shared oracles and scenario generators for the test suite."""

from __future__ import annotations

import numpy as np

from vndarboux import (SingularDarboux, build_lax, dressed_trajectory,
                       make_anticommuting_seed, make_commuting_seed,
                       make_delta_commuting_seed)

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def rk4_ode(f, y0, t_end, dt):
    """Classical fixed-step RK4 for dy/dt = f(t, y).

    Test-local oracle, deliberately independent of the library code paths it
    cross-checks.
    """
    steps = int(round(abs(t_end) / dt))
    h = dt if t_end >= 0 else -dt
    t = 0.0
    y = np.array(y0, dtype=complex)
    for _ in range(steps):
        k1 = f(t, y)
        k2 = f(t + h / 2, y + (h / 2) * k1)
        k3 = f(t + h / 2, y + (h / 2) * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y


def random_seed_solution(rng, family=None):
    """One random certified seed with moderate norms (desk scale)."""
    if family is None:
        family = rng.choice(["anticommuting", "delta_commuting", "commuting"])
    if family == "anticommuting":
        pairs = int(rng.integers(1, 4))
        b = rng.uniform(0.3, 1.2, pairs) * rng.choice([-1.0, 1.0], pairs)
        alpha = rng.uniform(0.5, 1.4, pairs)
        n = int(rng.integers(1, 4))
        return make_anticommuting_seed(pairs, b, alpha=alpha, n=n)
    if family == "delta_commuting":
        nblocks = int(rng.integers(1, 4))
        blocks = [(float(rng.uniform(-1.0, 2.0)),
                   float(rng.uniform(0.2, 0.8) * rng.choice([-1.0, 1.0])))
                  for _ in range(nblocks)]
        a = float(rng.uniform(-1.0, 1.5))
        return make_delta_commuting_seed(blocks, a)
    dim = int(rng.integers(2, 7))
    p = rng.uniform(-1.0, 1.0, dim)
    alpha = rng.uniform(0.5, 1.5, dim) * rng.choice([-1.0, 1.0], dim)
    n = int(rng.integers(1, 4))
    return make_commuting_seed(p, alpha, n=n)


def _random_mu(rng):
    mu = complex(rng.uniform(-1.2, 1.2),
                 float(rng.uniform(0.25, 1.0) * rng.choice([-1.0, 1.0])))
    if abs(mu) < 0.35:
        mu = 0.5 * mu / abs(mu)
    return mu


def draw_valid_scenario(rng, times, hermitian=None, family=None, max_tries=60):
    """Draw (seed, lax, trajectory) with a complete (nonsingular) sampling.

    Deterministic for a given rng state; general-mode draws that hit a
    singular overlap are redrawn.
    """
    for _ in range(max_tries):
        herm = bool(rng.random() < 0.7) if hermitian is None else hermitian
        seed = random_seed_solution(rng, family=family)
        mu = _random_mu(rng)
        nu = None if herm else _random_mu(rng)
        try:
            lax = build_lax(seed, mu, nu)
            traj = dressed_trajectory(seed, lax.params, times, lax=lax)
        except (SingularDarboux, ValueError):
            continue
        if traj.singular_t is None:
            return seed, lax, traj
    raise RuntimeError("could not draw a valid scenario")
