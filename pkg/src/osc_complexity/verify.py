"""Randomised self-checks, deterministic for a given seed.

Each suite draws ``trials`` random cases and reports the worst error against
its tolerance.  Used by ``osc-complexity verify``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .boundary import BoundaryProblem, complexity, enumerate_roots, solve_constants
from .geodesics import (
    DEFAULT_MODEL,
    GeodesicModel,
    GeodesicParams,
    Metric,
    geodesic_point,
    geodesic_velocity,
    nu_tilde,
    speed,
)
from .group import AlgebraElement, GroupElement, compose, exp, inverse, log, IDENTITY
from .oracle import (
    conserved_along,
    hamiltonian_data,
    hamiltonian_solution,
    integrate_christoffel_batch,
    integrate_geodesic_batch,
)


@dataclass
class SuiteResult:
    name: str
    max_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tol)


@dataclass
class VerificationSummary:
    seed: int
    trials: int
    suites: List[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)


def random_metric(rng: np.random.Generator) -> Metric:
    a = rng.uniform(0.5, 2.0)
    b = rng.uniform(-1.5, 1.5)
    d = (b * b + rng.uniform(0.3, 2.0)) / a
    return Metric(a, b, d)


def random_params(rng: np.random.Generator, scale: float = 1.5) -> GeodesicParams:
    return GeodesicParams(*rng.uniform(-scale, scale, 4))


def _group_laws(rng, trials) -> SuiteResult:
    worst = 0.0
    for _ in range(trials):
        g, h, k = (GroupElement(*rng.normal(size=4)) for _ in range(3))
        worst = max(worst, compose(compose(g, h), k).distance_to(compose(g, compose(h, k))))
        worst = max(worst, compose(g, inverse(g)).distance_to(IDENTITY))
        worst = max(worst, compose(inverse(g), g).distance_to(IDENTITY))
        x = AlgebraElement(*rng.normal(size=3), rng.uniform(-6.0, 6.0))
        worst = max(worst, float(np.abs(log(exp(x)).as_array() - x.as_array()).max()))
    return SuiteResult("group laws", worst, 1e-10)


def _round_trip(rng, trials, model) -> SuiteResult:
    """Targets reached by a known geodesic.

    Every candidate must hit the target, the known geodesic must be recovered
    from its root, and the minimum may not exceed the known length.
    """
    worst = 0.0
    for _ in range(trials):
        m, gp = random_metric(rng), random_params(rng)
        target = geodesic_point(m, gp, 1.0, model)
        bp = BoundaryProblem(m, target, model)
        res = complexity(bp)
        for c in res.candidates:
            worst = max(worst, geodesic_point(m, c.params, 1.0, model).distance_to(target))
        # the known geodesic is a competitor, so the minimum cannot exceed it
        worst = max(worst, res.value - speed(m, gp))
        nt = nu_tilde(m, gp, model)
        roots = enumerate_roots(bp, max(3, int(abs(nt) / (2 * math.pi)) + 2))
        near = min(roots, key=lambda r: abs(r - nt))
        worst = max(worst, float(np.abs(solve_constants(bp, near).as_array() - gp.as_array()).max()))
    label = model.name.lower().replace("_", "-")
    return SuiteResult(f"boundary round trip ({label})", worst, 1e-8)


def _oracles(rng, trials, steps) -> SuiteResult:
    """Closed-form Levi-Civita geodesics against two independent integrators."""
    model = GeodesicModel.LEVI_CIVITA
    ms = [random_metric(rng) for _ in range(trials)]
    gps = [random_params(rng) for _ in range(trials)]
    exact = np.array([geodesic_point(m, g, 1.0, model).as_array() for m, g in zip(ms, gps)])
    first = integrate_geodesic_batch(ms, gps, steps, model)
    second = integrate_christoffel_batch(ms, [g.initial_pi() for g in gps], steps)[:, :4]
    err = max(float(np.abs(first - exact).max()), float(np.abs(second - exact).max()))
    return SuiteResult("oracle agreement", err, 1e-8)


def _conservation(rng, trials) -> SuiteResult:
    model = GeodesicModel.LEVI_CIVITA
    ts = np.linspace(0.0, 1.0, 51)
    worst = 0.0
    for _ in range(trials):
        m, gp = random_metric(rng), random_params(rng)
        coords = np.array([geodesic_point(m, gp, t, model).as_array() for t in ts])
        vel = np.array([geodesic_velocity(m, gp, t, model) for t in ts])
        worst = max(worst, conserved_along(m, coords, vel).max_drift)
    return SuiteResult("conservation", worst, 1e-9)


def _hamiltonian(rng, trials) -> SuiteResult:
    model = GeodesicModel.LEVI_CIVITA
    worst = 0.0
    for _ in range(trials):
        m, gp = random_metric(rng), random_params(rng)
        hd = hamiltonian_data(m, gp)
        if abs(hd.pe) < 1e-6:
            continue
        for s in (0.25, 1.0):
            g = hamiltonian_solution(m, hd.pe, hd.palpha, hd.energy, hd.gamma0, s)
            worst = max(worst, g.distance_to(geodesic_point(m, gp, s, model)))
    return SuiteResult("hamiltonian dictionary", worst, 1e-9)


def run_verification(seed: int = 0, trials: int = 100, steps: int = 2000) -> VerificationSummary:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    ss = np.random.SeedSequence(seed)
    rngs = [np.random.default_rng(s) for s in ss.spawn(6)]
    summary = VerificationSummary(seed, trials)
    summary.suites.append(_group_laws(rngs[0], trials))
    summary.suites.append(_round_trip(rngs[1], trials, DEFAULT_MODEL))
    other = GeodesicModel.PAPER if DEFAULT_MODEL is GeodesicModel.LEVI_CIVITA else GeodesicModel.LEVI_CIVITA
    summary.suites.append(_round_trip(rngs[2], trials, other))
    summary.suites.append(_oracles(rngs[3], trials, steps))
    summary.suites.append(_conservation(rngs[4], trials))
    summary.suites.append(_hamiltonian(rngs[5], trials))
    return summary
