"""Independent reference computations used only by the tests.

Everything here works from the raw edge list with exact rationals
(``fractions.Fraction``) or textbook linear algebra, never through the
package's own probability code.
"""

from collections import Counter
from fractions import Fraction
import math

import numpy as np


def degree_counts(edges):
    mu = Counter(i for i, _ in edges)
    omega = Counter(j for _, j in edges)
    return mu, omega


def exact_joint(edges, phi: int):
    """Joint probabilities as Fractions for an integer bias exponent."""
    mu, omega = degree_counts(edges)
    w = {(i, j): Fraction(mu[i] * omega[j]) ** phi for i, j in edges}
    total = sum(w.values())
    return {e: x / total for e, x in w.items()}, total


def exact_minimalist(edges):
    mu, _ = degree_counts(edges)
    w = {(i, j): Fraction(mu[i]) for i, j in edges}
    total = sum(w.values())
    return {e: x / total for e, x in w.items()}, total


def marginals(joint, n, m):
    pw = [Fraction(0)] * n
    pm = [Fraction(0)] * m
    for (i, j), p in joint.items():
        pw[i] += p
        pm[j] += p
    return pw, pm


def mi_by_definition(probs):
    """I(S,R) = sum p(s,r) log(p(s,r) / (p(s) p(r))), a separate route from H(S) - H(S|R)."""
    ps = probs.sum(axis=1)
    pr = probs.sum(axis=0)
    total = 0.0
    for (i, j), p in np.ndenumerate(probs):
        if p > 0:
            total += p * math.log(p / (ps[i] * pr[j]))
    return total


def stationary_by_eigen(p):
    """Left eigenvector for eigenvalue 1 of a row-stochastic matrix."""
    vals, vecs = np.linalg.eig(p.T)
    k = np.argmin(np.abs(vals - 1.0))
    v = np.real(vecs[:, k])
    return v / v.sum()


def ols_slope_intercept(xs, ys):
    """Textbook normal-equation formulas with compensated sums."""
    n = len(xs)
    sx, sy = math.fsum(xs), math.fsum(ys)
    sxx = math.fsum(x * x for x in xs)
    sxy = math.fsum(x * y for x, y in zip(xs, ys))
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    return slope, (sy - slope * sx) / n
