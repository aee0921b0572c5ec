"""Ball-tree (zooming) agent on riverswim with Lipschitz or L_alpha indices.

State-action pairs are mapped to the unit square and measured with the
sup-norm, so the root ball (centre (1/2, 1/2), radius 1/2) covers the
whole space and every child has half its parent's radius.  One tree is
kept per step of the episode.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .. import riverswim, theory
from ..errors import ConfigurationError, UsageError
from ..smoothness import SmoothnessProfile

_IN_TOL = 1e-12


class IndexMode(str, Enum):
    LIPSCHITZ = "lipschitz"
    L_ALPHA = "l_alpha"
    COMBINED = "combined"


@dataclass(eq=False)
class Ball:
    center: np.ndarray
    radius: float
    q_hat: float
    visits: int = 0
    parent: "Ball | None" = None
    children: list = field(default_factory=list)
    order: int = 0

    def contains(self, p):
        return float(np.max(np.abs(np.asarray(p) - self.center))) <= self.radius + _IN_TOL


def dist(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


class BallTree:
    """Dyadic ball hierarchy with per-ball value estimates.

    ``profile`` supplies L (needed by the lipschitz and combined modes) and
    a single (alpha, L_alpha) pair (needed by l_alpha and combined).
    """

    def __init__(self, profile, mode=IndexMode.LIPSCHITZ, q_init=1.0, dim=2):
        self.mode = IndexMode(mode)
        self.profile = profile
        if self.mode is not IndexMode.L_ALPHA and profile.L is None:
            raise ConfigurationError(f"mode {self.mode.value} needs L")
        if self.mode is not IndexMode.LIPSCHITZ and len(profile.pairs) != 1:
            raise ConfigurationError(f"mode {self.mode.value} needs exactly one (alpha, L_alpha) pair")
        self.root = Ball(np.full(dim, 0.5), 0.5, float(q_init))
        self.balls = [self.root]

    @property
    def alpha(self):
        return self.profile.pairs[0][0]

    @property
    def L_alpha(self):
        return self.profile.pairs[0][1]

    def add_child(self, parent, center):
        if parent not in self.balls:
            raise UsageError("parent ball is not in this tree")
        child = Ball(np.asarray(center, dtype=np.float64).copy(), parent.radius / 2.0, parent.q_hat, parent=parent, order=len(self.balls))
        parent.children.append(child)
        self.balls.append(child)
        return child

    def _arrays(self):
        C = np.array([b.center for b in self.balls])
        R = np.array([b.radius for b in self.balls])
        Q = np.array([b.q_hat for b in self.balls])
        return C, R, Q

    def indices(self):
        """Index of every ball, in tree order."""
        C, R, Q = self._arrays()
        D = np.max(np.abs(C[:, None, :] - C[None, :, :]), axis=2)
        eligible = R[None, :] >= R[:, None]
        out = []
        if self.mode is not IndexMode.L_ALPHA:
            L = self.profile.L
            out.append(L * R + np.where(eligible, Q[None, :] + L * D, np.inf).min(axis=1))
        if self.mode is not IndexMode.LIPSCHITZ:
            a, la = self.alpha, self.L_alpha
            term = np.where(D >= a, la * D, 3.0 * a * la)
            out.append(la * R + np.where(eligible, Q[None, :] + term, np.inf).min(axis=1))
        return out[0] if len(out) == 1 else np.minimum(out[0], out[1])

    def domain_mask(self, points):
        """``mask[b, i]``: point i lies in ball b but in none of b's children."""
        C, R, _ = self._arrays()
        P = np.asarray(points, dtype=np.float64)
        inside = np.max(np.abs(P[None, :, :] - C[:, None, :]), axis=2) <= R[:, None] + _IN_TOL
        covered = np.zeros_like(inside)
        pos = {id(b): i for i, b in enumerate(self.balls)}
        for i, b in enumerate(self.balls):
            if b.parent is not None:
                covered[pos[id(b.parent)]] |= inside[i]
        return inside & ~covered


def ball_index(tree, B):
    try:
        k = next(i for i, b in enumerate(tree.balls) if b is B)
    except StopIteration:
        raise UsageError("ball is not in this tree") from None
    return float(tree.indices()[k])


def refine(tree, B, point):
    """Split off a half-radius child at ``point`` once B has enough visits."""
    if B.visits < 1.0 / B.radius - 1e-9:
        return None
    if any(c.contains(point) for c in B.children):
        return None
    return tree.add_child(B, point)


# ------------------------------------------------------------------ riverswim wiring


@dataclass(frozen=True)
class ZoomConfig:
    mode: str = "lipschitz"
    L: float = 2.0
    alpha: float = 1.0 / 24.0
    L_alpha: float = 1.0
    episodes: int = 50
    horizon: int = 10
    action_grid: int = 21
    q_init: float | None = None

    def __post_init__(self):
        IndexMode(self.mode)
        if self.action_grid < 2 or self.horizon < 1 or self.episodes < 1:
            raise ConfigurationError("action_grid >= 2, horizon >= 1 and episodes >= 1 are required")

    @property
    def profile(self):
        return SmoothnessProfile(L=self.L, pairs=((self.alpha, self.L_alpha),))


def to_unit(env, s, a):
    return np.stack(np.broadcast_arrays((np.asarray(s) + 1.0) / 2.0, (np.asarray(a) + env.a_max) / (2.0 * env.a_max)), axis=-1)


class Selection(NamedTuple):
    ball: Ball
    action: float
    point: np.ndarray
    index: float


def select(tree, env, s, actions):
    """Max-index ball whose domain meets the state slice; ties favour larger radius, then age."""
    pts = to_unit(env, np.full_like(actions, s), actions)
    dom = tree.domain_mask(pts)
    idx = tree.indices()
    best = None
    for k, b in enumerate(tree.balls):
        if not dom[k].any():
            continue
        key = (idx[k], b.radius, -b.order)
        if best is None or key > best[0]:
            best = (key, k)
    k = best[1]
    b = tree.balls[k]
    cand = np.flatnonzero(dom[k])
    j = cand[np.argmin(np.abs(pts[cand, 1] - b.center[1]))]
    return Selection(b, float(actions[j]), pts[j], float(idx[k]))


def state_value(tree, env, s, actions):
    return select(tree, env, s, actions).index


class EpisodeStats(NamedTuple):
    episode: int
    mode: str
    cumulative_reward: float
    num_balls: int
    min_radius: float


class ZoomAgent:
    def __init__(self, zcfg, env):
        self.zcfg = zcfg
        self.env = env
        q0 = env.r_right if zcfg.q_init is None else zcfg.q_init
        self.trees = [BallTree(zcfg.profile, zcfg.mode, q0) for _ in range(zcfg.horizon)]
        self.actions = np.linspace(-env.a_max, env.a_max, zcfg.action_grid)
        self.q_cap = q0
        self.episodes_run = 0
        self.cumulative = 0.0

    @property
    def min_radius(self):
        return min(b.radius for t in self.trees for b in t.balls)

    @property
    def num_balls(self):
        return sum(len(t.balls) for t in self.trees)

    def run_episode(self, rng):
        env, H = self.env, self.zcfg.horizon
        sim = riverswim.Riverswim(env)
        s = env.s0
        total = 0.0
        for h in range(H):
            sel = select(self.trees[h], env, s, self.actions)
            tr = sim.step(s, sel.action, rng)
            total += tr.reward
            nxt = 0.0
            if not tr.done and h + 1 < H:
                nxt = min(self.q_cap, state_value(self.trees[h + 1], env, tr.s_next, self.actions))
            B = sel.ball
            B.visits += 1
            lr = 1.0 / B.visits
            B.q_hat = (1.0 - lr) * B.q_hat + lr * (tr.reward + env.gamma * nxt)
            refine(self.trees[h], B, sel.point)
            if tr.done:
                break
            s = tr.s_next
        self.episodes_run += 1
        self.cumulative += total
        return EpisodeStats(self.episodes_run, self.zcfg.mode, self.cumulative, self.num_balls, self.min_radius)


def run_zoom_episode(agent, rng):
    return agent.run_episode(rng)


def run_zoom(zcfg, env, seed, radius_floor=None):
    """Run ``zcfg.episodes`` episodes; with ``radius_floor=(floor, K)`` raise if it breaks early."""
    rng = np.random.default_rng(seed)
    agent = ZoomAgent(zcfg, env)
    rows = []
    for _ in range(zcfg.episodes):
        st = agent.run_episode(rng)
        rows.append(st)
        if radius_floor is not None:
            floor, K = radius_floor
            if st.episode <= K and st.min_radius < floor - 1e-15:
                raise AssertionError(f"radius {st.min_radius} below {floor} in episode {st.episode} <= {K}")
    return rows


def write_zoom_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["episode", "mode", "cumulative_reward", "num_balls", "min_radius"])
    for r in rows:
        w.writerow([r.episode, r.mode, f"{r.cumulative_reward:.12g}", r.num_balls, f"{r.min_radius:.12g}"])


# ------------------------------------------------------------------ checks


def random_tree(rng, alpha, mode=IndexMode.COMBINED, L=None, L_alpha=None, max_balls=40):
    """Random tree with every radius >= 3 alpha."""
    L = float(rng.uniform(0.5, 10.0)) if L is None else L
    la = L * float(rng.uniform(0.0, 0.5)) if L_alpha is None else L_alpha
    tree = BallTree(SmoothnessProfile(L=L, pairs=((alpha, la),)), mode, float(rng.uniform(0, 1)))
    for _ in range(int(rng.integers(0, max_balls))):
        parents = [b for b in tree.balls if b.radius / 2.0 >= 3.0 * alpha]
        if not parents:
            break
        p = parents[int(rng.integers(len(parents)))]
        c = tree.add_child(p, p.center + rng.uniform(-p.radius, p.radius, 2))
        c.q_hat = float(rng.uniform(0, 1))
    return tree


def _mode_indices(tree, mode, L_alpha=None):
    prof = tree.profile
    if L_alpha is not None:
        prof = SmoothnessProfile(L=max(prof.L, L_alpha), pairs=((prof.pairs[0][0], L_alpha),))
    saved = tree.mode, tree.profile
    tree.mode, tree.profile = IndexMode(mode), prof
    try:
        return tree.indices()
    finally:
        tree.mode, tree.profile = saved


def check_index_dominance(n_trees, rng, bound_scale=1.0):
    """L_alpha index never above the Lipschitz one when radii >= 3 alpha and L_alpha <= L/2.

    ``bound_scale < 1`` inflates L_alpha by ``1/bound_scale`` (negative control).
    """
    lhs = []
    for _ in range(n_trees):
        alpha = float(rng.uniform(0.002, 1.0 / 6.0))
        tree = random_tree(rng, alpha)
        la = tree.L_alpha / bound_scale
        lhs.append(_mode_indices(tree, IndexMode.L_ALPHA, la) - _mode_indices(tree, IndexMode.LIPSCHITZ))
    return theory._report("prop3_index", np.concatenate(lhs), 0.0, 0.0)


FLOOR_ALPHAS = (1.0 / 12.0, 1.0 / 24.0, 1.0 / 48.0)


def radius_floor_violations(env, alpha, mode, seed):
    """Episodes within the first floor(2/(3 alpha)) whose smallest ball is below 3 alpha."""
    K = math.floor(theory.zoomrl_episode_threshold(alpha) + 1e-9)
    zcfg = ZoomConfig(mode=mode, alpha=alpha, L=2.0, L_alpha=1.0, episodes=K)
    rows = run_zoom(zcfg, env, seed)
    return sum(r.min_radius < 3.0 * alpha - 1e-15 for r in rows), K


def check_radius_floor(env, rng, seeds=10, alphas=FLOOR_ALPHAS):
    lhs = []
    for alpha in alphas:
        for mode in IndexMode:
            for _ in range(seeds):
                v, _ = radius_floor_violations(env, alpha, mode.value, int(rng.integers(2**31)))
                lhs.append(v)
    return theory._report("prop3_radius_floor", lhs, 0.0, 0.0)


def fastest_refinement_episodes(alpha):
    """Episodes after which a single-child chain first holds a ball below 3 alpha.

    With one visit per episode, radius 2**-n needs 2 + 4 + ... + 2**(n-1)
    visits along the chain.
    """
    r, total = 0.5, 0
    while r >= 3.0 * alpha:
        total += round(1.0 / r)
        r /= 2.0
    return total


# ------------------------------------------------------------------ exact-constant helpers


def riverswim_l_alpha_unit(env, alpha, grid=20_001):
    """Upper estimate of L_alpha for riverswim Q* in the unit-square sup metric.

    Q* depends on ``y = s + a`` only, is non-decreasing in y, and a sup
    distance d allows ``|dy| <= (2 + 2 a_max) d``.  Both suprema are taken
    on grids with one-cell padding so the result errs upward.
    """
    lo, hi = -1.0 - env.a_max, 1.0 + env.a_max
    y = np.linspace(lo, hi, grid)
    h = y[1] - y[0]
    s = np.clip(y - env.a_max, -1 + 1e-12, 1 - 1e-12)
    phi = riverswim.q_star(env, s, y - s, arrival_discount=True)
    span = 2.0 + 2.0 * env.a_max

    def rise(t):
        shift = min(grid - 1, int(math.ceil((t + h) / h)))
        return float(np.max(phi[shift:] - phi[: grid - shift])) if shift < grid else float(phi[-1] - phi[0])

    ds = np.linspace(alpha, 1.0, 400)
    best = 0.0
    for d0, d1 in zip(ds[:-1], ds[1:]):
        best = max(best, rise(span * d1) / d0)
    return best
