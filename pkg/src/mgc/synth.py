"""The twenty benchmark dependencies and their independent-null versions.

Draw order inside each generator is fixed (auxiliary variables, then X,
then noise terms in the order they appear in the formula) so a seed
always reproduces the same sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

SIM_NAMES = {
    1: "linear",
    2: "exponential",
    3: "cubic",
    4: "joint_normal",
    5: "step",
    6: "quadratic",
    7: "w_shape",
    8: "spiral",
    9: "uncorrelated_bernoulli",
    10: "logarithmic",
    11: "fourth_root",
    12: "sine_4pi",
    13: "sine_16pi",
    14: "square",
    15: "two_parabolas",
    16: "circle",
    17: "ellipse",
    18: "diamond",
    19: "multiplicative_noise",
    20: "independence",
}
MONOTONE = tuple(range(1, 6))
NON_MONOTONE = tuple(range(6, 20))
SAME_DIM_Y = frozenset({4, 10, 12, 13, 14, 18, 19, 20})


def y_dim(sim_id: int, p: int) -> int:
    return p if sim_id in SAME_DIM_Y else 1


def default_kappa(p: int) -> float:
    """Noise level used by the experiment drivers: 1 in 1-d, 0 otherwise."""
    return 1.0 if p == 1 else 0.0


@dataclass(frozen=True)
class SimulationSpec:
    sim_id: int
    n: int
    p: int = 1
    kappa: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.sim_id not in SIM_NAMES:
            raise ValueError(f"sim_id must be in 1..20, got {self.sim_id}")
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive")
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")

    @property
    def q(self) -> int:
        return y_dim(self.sim_id, self.p)

    @property
    def name(self) -> str:
        return SIM_NAMES[self.sim_id]


@dataclass(frozen=True)
class SamplePair:
    x: np.ndarray
    y: np.ndarray


def weights(p: int) -> np.ndarray:
    return 1.0 / np.arange(1, p + 1)


def _col(v):
    return v[:, None]


def _linear(rng, n, p, kappa):
    x = rng.uniform(-1, 1, (n, p))
    return x, x @ weights(p) + kappa * rng.standard_normal(n)


def _exponential(rng, n, p, kappa):
    x = rng.uniform(0, 3, (n, p))
    return x, np.exp(x @ weights(p)) + 10 * kappa * rng.standard_normal(n)


def _cubic(rng, n, p, kappa):
    x = rng.uniform(-1, 1, (n, p))
    t = x @ weights(p) - 1.0 / 3.0
    y = 128 * t**3 + 48 * t**2 - 12 * t + 80 * kappa * rng.standard_normal(n)
    return x, y


def joint_normal_cov(p: int, kappa: float) -> np.ndarray:
    rho = 1.0 / (2 * p)
    ones = np.ones((p, p))
    eye = np.eye(p)
    return np.block([[eye, rho * ones], [rho * ones, (1 + 0.5 * kappa) * eye]])


def _joint_normal(rng, n, p, kappa):
    chol = np.linalg.cholesky(joint_normal_cov(p, kappa))
    z = rng.standard_normal((n, 2 * p)) @ chol.T
    return z[:, :p], z[:, p:]


def _step(rng, n, p, kappa):
    # noise is not scaled by kappa in this relationship
    x = rng.uniform(-1, 1, (n, p))
    return x, (x @ weights(p) > 0).astype(float) + rng.standard_normal(n)


def _quadratic(rng, n, p, kappa):
    x = rng.uniform(-1, 1, (n, p))
    return x, (x @ weights(p)) ** 2 + 0.5 * kappa * rng.standard_normal(n)


def _w_shape(rng, n, p, kappa):
    w = weights(p)
    u = rng.uniform(-1, 1, (n, p))
    x = rng.uniform(-1, 1, (n, p))
    y = 4 * (((x @ w) ** 2 - 0.5) ** 2 + (u @ w) / 500) + 0.5 * kappa * rng.standard_normal(n)
    return x, y


def _spiral(rng, n, p, kappa):
    u = rng.uniform(0, 5, n)
    eps = rng.standard_normal(n)
    s, c = np.sin(np.pi * u), np.cos(np.pi * u)
    x = np.empty((n, p))
    for d in range(1, p):
        x[:, d - 1] = u * s * c**d
    x[:, p - 1] = u * c**p
    return x, u * s + 0.4 * p * eps


def _uncorrelated_bernoulli(rng, n, p, kappa):
    u = rng.binomial(1, 0.5, n)
    x = rng.binomial(1, 0.5, (n, p)) + 0.5 * rng.standard_normal((n, p))
    y = (2 * u - 1) * (x @ weights(p)) + 0.5 * rng.standard_normal(n)
    return x, y


def _logarithmic(rng, n, p, kappa):
    x = rng.standard_normal((n, p))
    return x, 2 * np.log2(np.abs(x)) + 3 * kappa * rng.standard_normal((n, p))


def _fourth_root(rng, n, p, kappa):
    x = rng.uniform(-1, 1, (n, p))
    return x, np.abs(x @ weights(p)) ** 0.25 + kappa / 4 * rng.standard_normal(n)


def _sine(theta, noise):
    def gen(rng, n, p, kappa):
        u = rng.uniform(-1, 1, n)
        v = rng.standard_normal((n, p))
        x = _col(u) + 0.02 * p * v
        return x, np.sin(theta * x) + noise * kappa * rng.standard_normal((n, p))

    return gen


def _rotated(theta):
    def gen(rng, n, p, kappa):
        u = rng.uniform(-1, 1, n)
        v = rng.uniform(-1, 1, n)
        eps = rng.standard_normal((n, p))
        ct, st = np.cos(theta), np.sin(theta)
        x = _col(u * ct + v * st) + 0.05 * p * eps
        y = np.repeat(_col(-u * st + v * ct), p, axis=1)
        return x, y

    return gen


def _two_parabolas(rng, n, p, kappa):
    u = rng.binomial(1, 0.5, n)
    x = rng.uniform(-1, 1, (n, p))
    eps = rng.uniform(0, 1, n)
    return x, ((x @ weights(p)) ** 2 + 2 * kappa * eps) * (u - 0.5)


def sphere_coords(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Noise-free circle coordinates from the angle draws ``u`` (n x p).

    Returns the ``p`` x-coordinates and the y-coordinate; together they
    lie on the unit sphere in ``p + 1`` dimensions.
    """
    n, p = u.shape
    cos = np.cos(np.pi * u)
    prod = np.cumprod(cos, axis=1)
    x = np.empty((n, p))
    for d in range(1, p):
        x[:, d - 1] = np.sin(np.pi * u[:, d]) * prod[:, d - 1]
    x[:, p - 1] = prod[:, p - 1]
    return x, np.sin(np.pi * u[:, 0])


def _circle(radius):
    def gen(rng, n, p, kappa):
        u = rng.uniform(-1, 1, (n, p))
        eps = rng.standard_normal((n, p))
        x0, y = sphere_coords(u)
        return radius * (x0 + 0.4 * eps), y

    return gen


def _multiplicative(rng, n, p, kappa):
    u = rng.standard_normal((n, p))
    x = rng.standard_normal((n, p))
    return x, u * x


def _independence(rng, n, p, kappa):
    u = rng.standard_normal((n, p))
    v = rng.standard_normal((n, p))
    u2 = rng.binomial(1, 0.5, (n, p))
    v2 = rng.binomial(1, 0.5, (n, p))
    return u / 3 + 2 * u2 - 1, v / 3 + 2 * v2 - 1


GENERATORS: Dict[int, Callable] = {
    1: _linear,
    2: _exponential,
    3: _cubic,
    4: _joint_normal,
    5: _step,
    6: _quadratic,
    7: _w_shape,
    8: _spiral,
    9: _uncorrelated_bernoulli,
    10: _logarithmic,
    11: _fourth_root,
    12: _sine(4 * np.pi, 1.0),
    13: _sine(16 * np.pi, 0.5),
    14: _rotated(-np.pi / 8),
    15: _two_parabolas,
    16: _circle(1.0),
    17: _circle(5.0),
    18: _rotated(-np.pi / 4),
    19: _multiplicative,
    20: _independence,
}


def _draw(spec: SimulationSpec, rng: np.random.Generator) -> SamplePair:
    x, y = GENERATORS[spec.sim_id](rng, spec.n, spec.p, spec.kappa)
    x = np.asarray(x, dtype=float).reshape(spec.n, spec.p)
    y = np.asarray(y, dtype=float).reshape(spec.n, spec.q)
    return SamplePair(x, y)


def sample_dependency(spec: SimulationSpec, rng: Optional[np.random.Generator] = None) -> SamplePair:
    """Draw ``n`` joint samples of relationship ``spec.sim_id``.

    Uses ``np.random.default_rng(spec.seed)`` unless a generator is given.
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    return _draw(spec, rng)


def sample_null(spec: SimulationSpec, rng: Optional[np.random.Generator] = None) -> SamplePair:
    """Same marginals, no dependence: x and y come from two separate joint draws."""
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    first = _draw(spec, rng)
    second = _draw(spec, rng)
    return SamplePair(first.x, second.y)
