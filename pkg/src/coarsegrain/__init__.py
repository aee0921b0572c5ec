"""Coarse-grained smoothness toolkit: L and L_alpha constants, bound envelopes,
continuous riverswim, and numerical checks of the associated value-gap bounds."""

from .analytic import SineRamp, Stairs, sine_l_alpha, sine_lipschitz, stairs_l_alpha
from .metric import MetricKind, MetricSpace, ball_volume_constant, distance, linear_size
from .riverswim import RiverswimConfig, q_star, v_star
from .smoothness import (
    BoundEnvelope,
    SampleSet,
    SmoothnessProfile,
    g_alpha,
    l_alpha_empirical,
    l_alpha_envelope,
    lipschitz_constant_empirical,
    lipschitz_envelope,
    max_jump_given_l_alpha,
    multi_alpha_envelope,
    relaxed_envelope,
)

__version__ = "0.1.0"
