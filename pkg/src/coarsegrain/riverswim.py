"""Continuous riverswim: ``s' = s + a - c (+ noise)``, terminal at |s| >= 1.

Rewards are paid on reaching a terminal region and are discounted on
arrival, i.e. a reward earned by the t-th transition (t = 0, 1, ...)
contributes ``gamma**(t + 1) * r``.  This is the convention under which
the closed-form state value ``r_right * gamma**ceil((1 - s) / (a_max - c))``
is exact.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr

from . import _kernels
from .errors import ConfigurationError, UsageError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RiverswimConfig:
    a_max: float = 1.0
    c: float = 0.3
    r_left: float = 0.01
    r_right: float = 1.0
    gamma: float = 0.95
    # Transition-noise standard deviation as a fraction of a_max.
    noise_sigma: float = 0.0
    s0: float = 0.0

    def __post_init__(self):
        if not self.a_max > 0:
            raise ConfigurationError("a_max must be positive")
        if not 0 <= self.c <= self.a_max:
            raise ConfigurationError("current c must satisfy 0 <= c <= a_max")
        if not self.r_right > self.r_left:
            raise ConfigurationError("r_right must exceed r_left")
        if not 0 < self.gamma < 1:
            raise ConfigurationError("gamma must lie in (0, 1)")
        if self.noise_sigma < 0:
            raise ConfigurationError("noise_sigma must be non-negative")
        if not -1 < self.s0 < 1:
            raise ConfigurationError("s0 must lie in (-1, 1)")
        if self.a_max > self.c:
            cap = self.r_right * self.gamma ** math.floor(2.0 / (self.a_max - self.c))
            if self.r_left > cap:
                raise ConfigurationError(
                    f"r_left={self.r_left} exceeds r_right*gamma^floor(2/(a_max-c))={cap:.6g}; "
                    "moving left would be optimal somewhere"
                )

    @property
    def drift(self):
        """Net rightward progress per step under a = a_max."""
        return self.a_max - self.c

    @property
    def deterministic(self):
        return self.noise_sigma == 0

    def to_json(self):
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigurationError(f"unknown riverswim fields: {sorted(unknown)}")
        return cls(**data)


class Transition(NamedTuple):
    s_next: float
    reward: float
    done: bool


class Riverswim:
    """Stateful wrapper that counts clipped actions."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.clipped_actions = 0

    def step(self, s, a, rng):
        if not -1 < s < 1:
            raise UsageError(f"cannot step from terminal state s={s}")
        cfg = self.cfg
        if abs(a) > cfg.a_max:
            self.clipped_actions += 1
            log.warning("action %g clipped to [-%g, %g]", a, cfg.a_max, cfg.a_max)
            a = max(-cfg.a_max, min(cfg.a_max, a))
        s_next = s + a - cfg.c
        if cfg.noise_sigma > 0:
            s_next += rng.normal(0.0, cfg.noise_sigma * cfg.a_max)
        if s_next >= 1:
            return Transition(s_next, cfg.r_right, True)
        if s_next <= -1:
            return Transition(s_next, cfg.r_left, True)
        return Transition(s_next, 0.0, False)


def step(cfg, s, a, rng=None):
    return Riverswim(cfg).step(s, a, rng)


def _require_progress(cfg):
    if not cfg.a_max > cfg.c:
        raise ConfigurationError("a_max == c: the current cancels all progress")


def steps_to_goal(cfg, s):
    """Always-right steps needed from ``s`` (vectorized)."""
    _require_progress(cfg)
    s = np.asarray(s, dtype=np.float64)
    return np.ceil((1.0 - s) / cfg.drift)


def v_star(cfg, s):
    """Optimal state value ``r_right * gamma**ceil((1 - s) / (a_max - c))``."""
    if not cfg.deterministic:
        raise ConfigurationError("closed-form V* needs noise_sigma == 0")
    out = cfg.r_right * cfg.gamma ** steps_to_goal(cfg, s)
    return float(out) if np.ndim(out) == 0 else out


def q_star(cfg, s, a, arrival_discount=False):
    """Optimal action value.

    With ``arrival_discount=False`` the terminal branches pay ``r_left`` /
    ``r_right`` undiscounted, the usual way the closed form is written.  That form
    is one discount factor off from :func:`v_star` (and from the simulator)
    whenever the action itself ends the episode; ``arrival_discount=True``
    returns ``gamma * r`` there, which is the Bellman-consistent value.
    """
    if not cfg.deterministic:
        raise ConfigurationError("closed-form Q* needs noise_sigma == 0")
    _require_progress(cfg)
    s = np.asarray(s, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    y = s + a
    scale = cfg.gamma if arrival_discount else 1.0
    mid = (y > cfg.c - 1) & (y < cfg.c + 1)
    inner = np.where(mid, y - cfg.c, 0.0)
    out = np.where(
        y <= cfg.c - 1,
        scale * cfg.r_left,
        np.where(y >= cfg.c + 1, scale * cfg.r_right, cfg.gamma * cfg.r_right * cfg.gamma ** steps_to_goal(cfg, inner)),
    )
    return float(out) if out.ndim == 0 else out


class ValueEstimate(NamedTuple):
    states: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray


def default_horizon(cfg, tail=1e-4):
    """Horizon after which an always-right episode is unfinished with prob < ``tail``."""
    _require_progress(cfg)
    base = math.ceil(2.0 / cfg.drift)
    sd = cfg.noise_sigma * cfg.a_max
    if sd == 0:
        return base + 1
    # unfinished after t steps needs the noise sum to cancel t*drift - 2
    for t in range(base, 100_000):
        z = (t * cfg.drift - 2.0) / (sd * math.sqrt(t))
        if z > 0 and 0.5 * math.erfc(z / math.sqrt(2)) < tail:
            return t
    raise ConfigurationError("no practical horizon for this configuration")


def mc_value_estimate(cfg, states, rollouts, horizon=None, rng=None):
    """Monte Carlo value of the always-``a_max`` policy at each state."""
    _require_progress(cfg)
    if rollouts < 1:
        raise ConfigurationError("rollouts must be >= 1")
    rng = np.random.default_rng() if rng is None else rng
    horizon = default_horizon(cfg) if horizon is None else int(horizon)
    states = np.asarray(states, dtype=np.float64).reshape(-1)
    sd = cfg.noise_sigma * cfg.a_max
    mean = np.empty(states.shape[0])
    stderr = np.empty(states.shape[0])
    unfinished = 0
    for k, s in enumerate(states):
        if not -1 < s < 1:
            raise UsageError(f"state {s} is terminal")
        noise = rng.normal(0.0, sd, size=(rollouts, horizon)) if sd > 0 else np.zeros((rollouts, horizon))
        ret, done = _kernels.rollout_right(np.full(rollouts, s), noise, cfg.drift, cfg.r_left, cfg.r_right, cfg.gamma)
        unfinished += int((~done).sum())
        mean[k] = ret.mean()
        stderr[k] = ret.std(ddof=1) / math.sqrt(rollouts) if rollouts > 1 else 0.0
    if unfinished:
        log.warning("%d rollouts hit the horizon before terminating", unfinished)
    return ValueEstimate(states, mean, stderr)


def noisy_v_reference(cfg, states, cells=4000, width=8.0, tol=1e-13):
    """Value of the always-``a_max`` policy under Gaussian noise, without sampling.

    Policy evaluation on a partition of (-1, 1) into equal cells: the next
    state ``s + drift + eps`` lands in each cell with its exact Gaussian
    mass, terminal regions are integrated in closed form, and V is held
    at cell centres.  Reference curve for :func:`mc_value_estimate`.
    """
    _require_progress(cfg)
    sd = cfg.noise_sigma * cfg.a_max
    states = np.asarray(states, dtype=np.float64).reshape(-1)
    if sd == 0:
        return v_star(cfg, states)
    edges = np.linspace(-1.0, 1.0, cells + 1)
    centers = 0.5 * (edges[1:] + edges[:-1])
    h = edges[1] - edges[0]
    half = int(math.ceil(width * sd / h)) + 1
    offs = np.arange(-half, half + 1)

    def kernel(s):
        mu = s + cfg.drift
        k0 = np.floor((mu + 1.0) / h).astype(np.int64)
        idx = k0[:, None] + offs[None, :]
        valid = (idx >= 0) & (idx < cells)
        idx = np.clip(idx, 0, cells - 1)
        lo = (edges[idx] - mu[:, None]) / sd
        hi = (edges[idx + 1] - mu[:, None]) / sd
        mass = np.where(valid, ndtr(hi) - ndtr(lo), 0.0)
        term = cfg.r_right * ndtr((mu - 1.0) / sd) + cfg.r_left * ndtr((-1.0 - mu) / sd)
        return idx, mass, term

    idx, mass, term = kernel(centers)
    V = np.zeros(cells)
    for _ in range(100_000):
        nv = cfg.gamma * (term + (mass * V[idx]).sum(axis=1))
        done = np.max(np.abs(nv - V)) < tol
        V = nv
        if done:
            break
    qi, qm, qt = kernel(states)
    return cfg.gamma * (qt + (qm * V[qi]).sum(axis=1))
