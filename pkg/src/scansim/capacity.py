"""Information-theoretic ceilings for a single-switch input channel.

A user who can only click conveys information through when they click.
Modelling the click as a stopping decision made once per granularity slot
``g`` after a reaction delay ``d`` gives an information rate that depends on
the per-slot stop probability ``beta``; these utilities compute that rate,
optimise it, and apply the penalty an unreliable switch imposes on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy import optimize

__all__ = [
    "ButtonModel",
    "entropy",
    "binary_entropy",
    "geometric_wait",
    "info_rate",
    "optimize_beta",
    "noisy_factor",
    "conditional_entropy",
    "channel_rate",
]


@dataclass(frozen=True)
class ButtonModel:
    """A single switch: reaction delay, timing granularity, stop probability.

    ``d`` is the fixed delay before the user can react (seconds), ``g`` the
    width of one decision slot (seconds), and ``beta`` the probability of
    clicking in any given slot once reacting.
    """

    d: float
    g: float
    beta: float

    def __post_init__(self) -> None:
        if self.d < 0:
            raise ValueError("reaction delay d must be non-negative")
        if self.g <= 0:
            raise ValueError("granularity g must be positive")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("stop probability beta must lie strictly in (0, 1)")


def entropy(dist: Sequence[float]) -> float:
    """Shannon entropy of a probability distribution, in bits.

    Zero entries contribute nothing (the 0·log(1/0) = 0 convention).
    Raises if the entries are negative or do not sum to one within 1e-9.
    """
    probs = np.asarray(dist, dtype=np.float64)
    if probs.ndim != 1 or probs.size == 0:
        raise ValueError("distribution must be a non-empty 1-d sequence")
    if np.any(probs < 0):
        raise ValueError("probabilities must be non-negative")
    total = float(math.fsum(probs))
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1 (got {total!r})")
    positive = probs[probs > 0]
    return float(-math.fsum(positive * np.log2(positive)))


def binary_entropy(p: float) -> float:
    """Entropy in bits of a yes/no event with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return float(-(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p)))


def geometric_wait(beta: float, n: int) -> float:
    """Probability that the click lands in slot ``n`` (counting from zero).

    The user holds off with probability ``1 - beta`` per slot, so the wait
    is geometric: ``(1 - beta)**n * beta``.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie strictly in (0, 1)")
    if n < 0 or n != int(n):
        raise ValueError("slot index n must be a non-negative integer")
    return (1.0 - beta) ** int(n) * beta


def info_rate(model: ButtonModel) -> float:
    """Bits per second the switch conveys under the stopping model.

    Each decision carries the binary entropy of the stop probability and
    takes ``beta * d + g`` seconds on average, so the rate is their ratio.
    """
    return binary_entropy(model.beta) / (model.beta * model.d + model.g)


def optimize_beta(d: float, g: float) -> tuple[float, float]:
    """Stop probability that maximises the information rate, and that rate.

    Golden-section search over beta in (0, 1); the rate is unimodal there
    (concave entropy over a positive affine cost).  The bracket is shrunk
    to well below 1e-9 so the returned beta is accurate to that scale.
    """
    if d < 0:
        raise ValueError("reaction delay d must be non-negative")
    if g <= 0:
        raise ValueError("granularity g must be positive")

    def loss(beta: float) -> float:
        return -info_rate(ButtonModel(d=d, g=g, beta=beta))

    result = optimize.minimize_scalar(
        loss,
        bracket=(1e-9, 0.5, 1.0 - 1e-9),
        method="golden",
        options={"xtol": 1e-12},
    )
    beta_star = float(min(max(result.x, 1e-12), 1.0 - 1e-12))
    return beta_star, -float(result.fun)


def noisy_factor(f: float) -> float:
    """Fraction of the information rate surviving a switch that fails.

    A switch that drops or fabricates a click with probability ``f`` behaves
    as a binary symmetric channel, scaling the rate by ``1 - H2(f)``.
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError("failure probability f must lie in [0, 1]")
    return 1.0 - binary_entropy(f)


def conditional_entropy(input_dist: Sequence[float], confusion: Sequence[Sequence[float]]) -> float:
    """Entropy in bits left in the input after observing the channel output.

    ``confusion[i][j]`` is the probability of output ``j`` given input ``i``;
    each row must be a distribution.  Returns H(input | output).
    """
    p_in = np.asarray(input_dist, dtype=np.float64)
    channel = np.asarray(confusion, dtype=np.float64)
    if channel.ndim != 2 or channel.shape[0] != p_in.size:
        raise ValueError("confusion must have one row per input symbol")
    if np.any(channel < 0) or np.any(np.abs(channel.sum(axis=1) - 1.0) > 1e-9):
        raise ValueError("each confusion row must be a probability distribution")
    entropy(p_in)  # validates the input distribution
    joint = p_in[:, None] * channel
    p_out = joint.sum(axis=0)
    h = 0.0
    for j in range(channel.shape[1]):
        if p_out[j] > 0:
            posterior = joint[:, j] / p_out[j]
            positive = posterior[posterior > 0]
            h += p_out[j] * float(-math.fsum(positive * np.log2(positive)))
    return h


def channel_rate(
    input_dist: Sequence[float],
    t_y: float,
    confusion: Union[Sequence[Sequence[float]], None] = None,
) -> float:
    """Bits per second through a channel producing one output every ``t_y`` s.

    Without a confusion matrix the channel is taken as error-free and the
    rate is the input entropy over the production time; with one, the
    conditional entropy of the input given the output is subtracted first.
    """
    if t_y <= 0:
        raise ValueError("output production time t_y must be positive")
    bits = entropy(input_dist)
    if confusion is not None:
        bits -= conditional_entropy(input_dist, confusion)
    return max(bits, 0.0) / t_y
