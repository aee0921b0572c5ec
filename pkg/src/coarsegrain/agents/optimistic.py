"""Optimistic Q-agent driven by a nearest-point Lipschitz upper bound.

Memory holds value-labelled state-action points.  The upper bound at x is
``min(q_cap, min_i q_i + L * d(x, x_i))`` with ``d = |ds| + |da|``; the
agent acts greedily on it over an action grid and, after each episode,
backs the realised trajectory up from its end.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .. import riverswim
from ..errors import ConfigurationError


@dataclass(frozen=True)
class OptimisticAgentConfig:
    L_replacement: float = 1.0
    action_grid: int = 21
    episodes: int = 50
    max_steps: int = 50
    q_cap: float = 1.0
    gamma: float = 0.95
    seed: int = 0

    def __post_init__(self):
        if self.L_replacement < 0:
            raise ConfigurationError("L_replacement must be non-negative")
        if self.action_grid < 2:
            raise ConfigurationError("action_grid must be >= 2")
        if self.episodes < 1 or self.max_steps < 1:
            raise ConfigurationError("episodes and max_steps must be positive")
        if not 0 < self.gamma < 1:
            raise ConfigurationError("gamma must lie in (0, 1)")


class OptimisticAgent:
    def __init__(self, cfg, env):
        if cfg.q_cap < env.r_right:
            raise ConfigurationError("q_cap must be at least the largest achievable return")
        self.cfg = cfg
        self.env = env
        self.actions = np.linspace(-env.a_max, env.a_max, cfg.action_grid)
        self._X = np.empty((0, 2))
        self._q = np.empty(0)

    @property
    def memory_size(self):
        return self._q.size

    def q_upper(self, X):
        """Upper bound at the rows of ``X`` (n, 2)."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if self._q.size == 0:
            return np.full(X.shape[0], self.cfg.q_cap)
        d = np.abs(X[:, None, :] - self._X[None, :, :]).sum(axis=2)
        return np.minimum(self.cfg.q_cap, (self._q[None, :] + self.cfg.L_replacement * d).min(axis=1))

    def action_values(self, s):
        return self.q_upper(np.column_stack([np.full_like(self.actions, s), self.actions]))

    def greedy(self, s):
        # argmax returns the first maximiser, i.e. the lowest-index action
        return float(self.actions[int(np.argmax(self.action_values(s)))])

    def remember(self, x, q):
        hit = np.flatnonzero(np.all(self._X == x, axis=1))
        if hit.size:
            self._q[hit[0]] = q
            return
        self._X = np.vstack([self._X, x])
        self._q = np.append(self._q, q)

    def backup(self, states, actions, rewards, next_states, dones):
        for t in range(len(rewards) - 1, -1, -1):
            q = rewards[t]
            if not dones[t]:
                q += self.cfg.gamma * float(self.action_values(next_states[t]).max())
            self.remember(np.array([states[t], actions[t]]), q)


def sweep_environment():
    """Noisy riverswim used for replacement-L sweeps.

    The larger left reward makes a pessimistic agent settle for the left
    bank some of the time, so too small an L shows up as low mean and high
    spread across seeds.
    """
    return riverswim.RiverswimConfig(r_left=0.15, noise_sigma=0.03)


SWEEP_VALUES = (0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0)


def optimistic_q_upper(agent, x):
    return float(agent.q_upper(np.asarray(x, dtype=np.float64).reshape(1, 2))[0])


def run_control_episode(agent, rng):
    """One greedy episode followed by a backward backup; returns the undiscounted return."""
    env = agent.env
    sim = riverswim.Riverswim(env)
    s = env.s0
    S, A, R, S2, done = [], [], [], [], []
    for _ in range(agent.cfg.max_steps):
        a = agent.greedy(s)
        tr = sim.step(s, a, rng)
        S.append(s)
        A.append(a)
        R.append(tr.reward)
        S2.append(tr.s_next)
        done.append(tr.done)
        if tr.done:
            break
        s = tr.s_next
    agent.backup(S, A, R, S2, done)
    return float(sum(R))


def total_reward(cfg, env):
    """Sum of episode returns over ``cfg.episodes`` episodes for one seed."""
    rng = np.random.default_rng(cfg.seed)
    agent = OptimisticAgent(cfg, env)
    return sum(run_control_episode(agent, rng) for _ in range(cfg.episodes))


class SweepRow(NamedTuple):
    L_replacement: float
    seed: int
    total_reward: float


def sweep_replacement_L(values, seeds, env, cfg):
    """Total reward for every (value, seed) cell; seeds run 0..seeds-1 offset by ``cfg.seed``."""
    values = list(values)
    if not values:
        raise ConfigurationError("values must be non-empty")
    rows = []
    for v in values:
        for k in range(seeds):
            c = OptimisticAgentConfig(float(v), cfg.action_grid, cfg.episodes, cfg.max_steps, cfg.q_cap, cfg.gamma, cfg.seed + k)
            rows.append(SweepRow(float(v), c.seed, total_reward(c, env)))
    return rows


class SweepSummary(NamedTuple):
    L_replacement: float
    mean: float
    std: float
    n: int


def summarize(rows):
    out = []
    for v in sorted({r.L_replacement for r in rows}):
        x = np.array([r.total_reward for r in rows if r.L_replacement == v])
        out.append(SweepSummary(v, float(x.mean()), float(x.std(ddof=1)) if x.size > 1 else 0.0, int(x.size)))
    return out


def pooled_se(a, b):
    return math.sqrt(a.std**2 / a.n + b.std**2 / b.n)


def write_sweep_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["L_replacement", "seed", "total_reward"])
    for r in rows:
        w.writerow([f"{r.L_replacement:.12g}", r.seed, f"{r.total_reward:.12g}"])
