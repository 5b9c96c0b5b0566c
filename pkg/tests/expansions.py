"""Asymptotic expansions of the lumped-loss th-TMSS parameters.

Used only as test oracles; the package computes the exact inversion.
Each ``nbar`` pair is returned as ``(plus, minus)`` branches without
assigning them to signal or idler.
"""

import math


def weak_loss_nbar(r, eps_bar, delta):
    """Second order in ``eps_bar * exp(2 r)``."""
    x = eps_bar * math.exp(2 * r)
    base = -x * x * (1 - delta * delta) / 16
    return 0.25 * x * (1 + delta) + base, 0.25 * x * (1 - delta) + base


def weak_loss_cosh_ratio(r, eps_bar, delta):
    x = eps_bar * math.exp(2 * r)
    return 1 - 0.25 * x + x * x * (5 - 2 * delta * delta) / 32


def weak_asymmetry_nbar(r, eps_bar, delta):
    """Large ``r`` at fixed ``eps_bar``, second order in ``delta``."""
    root = math.sqrt((1 - eps_bar) * eps_bar)
    common = 0.5 * root * math.exp(r) + math.exp(3 * r) * eps_bar**2 * delta**2 / (16 * root)
    split = 0.25 * math.exp(2 * r) * eps_bar * delta
    return common + split, common - split


def weak_asymmetry_cosh_ratio(r, eps_bar, delta):
    d = 1 + (1 - eps_bar) * eps_bar * math.exp(2 * r)
    return math.sqrt(1 - eps_bar) / d**0.25 * (1 - eps_bar**2 * delta**2 * math.exp(4 * r) / (16 * d))


def small_loss_log_negativity(r, eps_bar, delta):
    e2 = math.exp(-2 * r)
    return -math.log(e2 + (1 - e2) * eps_bar + math.tanh(r) * eps_bar**2 * delta**2)
