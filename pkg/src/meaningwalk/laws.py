"""Power-law fits and checks of the meaning-frequency law.

Fits are ordinary least squares on ``(log x, log y)``. The exponent
reported as ``delta`` comes from regressing word degree on word
probability (``mu ~ p ** delta``); the mirror fit (``p ~ mu ** (1/delta)``)
is reported alongside because OLS is not symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFitError
from .lexicon import BipartiteGraph, edge_degrees
from .probability import (
    JointDistribution,
    MeaningPrior,
    _check_phi,
    joint_probability,
    meaning_marginal,
    model_family_joint,
    word_marginal,
)


@dataclass(frozen=True)
class FitResult:
    exponent: float
    intercept: float
    r_squared: float
    point_count: int
    residuals: np.ndarray = field(repr=False)

    @property
    def max_abs_residual(self) -> float:
        return float(np.max(np.abs(self.residuals)))


def fit_power_law(pairs) -> FitResult:
    """Least-squares line through ``(log x, log y)``.

    A perfect fit reports ``r_squared = 1`` even when all ``y`` are equal.
    """
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("pairs must be a sequence of (x, y)")
    if np.any(arr <= 0):
        raise ValueError("power-law fit needs strictly positive x and y")
    lx, ly = np.log(arr[:, 0]), np.log(arr[:, 1])
    if np.unique(arr[:, 0]).size < 2:
        raise DegenerateFitError("need at least two distinct x values")
    mx, my = lx.mean(), ly.mean()
    dx, dy = lx - mx, ly - my
    slope = float(np.dot(dx, dy) / np.dot(dx, dx))
    intercept = float(my - slope * mx)
    resid = ly - (intercept + slope * lx)
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(dy, dy))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res == 0.0 else 0.0
    else:
        r2 = min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)
    return FitResult(slope, intercept, r2, len(arr), resid)


def loglog_points(pairs) -> np.ndarray:
    """Two-column ``(log x, log y)`` array, as written to plot-ready files."""
    return np.log(np.asarray(pairs, dtype=float))


@dataclass(frozen=True)
class BoundsReport:
    """Power-law bounds ``T_min mu**(phi+1) <= p <= T_max mu**(phi+1)`` per word.

    ``b1 = T_max ** -delta`` and ``b2 = T_min ** -delta`` give the degree
    form ``b1 p**delta <= mu <= b2 p**delta``.
    """

    phi: float
    t: np.ndarray
    t_min: float
    t_max: float
    lower: np.ndarray
    upper: np.ndarray
    word_probability: np.ndarray
    satisfied: np.ndarray
    gap_ratio: float
    omega_min: int
    omega_max: int
    b1: float
    b2: float
    degree_bounds_satisfied: np.ndarray

    @property
    def all_satisfied(self) -> bool:
        return bool(self.satisfied.all() and self.degree_bounds_satisfied.all())


def _within(lo, x, hi, rtol):
    return (lo <= x * (1 + rtol)) & (x <= hi * (1 + rtol))


def meaning_factors(joint: JointDistribution) -> np.ndarray:
    """``T_j = p(r_j) / sum_i a_ij mu_i**phi``; NaN for unlinked meanings."""
    g = joint.graph
    phi = joint.word_exponent_phi
    p_r = meaning_marginal(joint)
    denom = g.adjacency().T @ (g.word_degrees.astype(float) ** phi)
    t = np.full(g.m, np.nan)
    linked = g.meaning_degrees > 0
    t[linked] = p_r[linked] / denom[linked]
    return t


def bounds_from_joint(joint: JointDistribution, rtol: float = 1e-12) -> BoundsReport:
    g = joint.graph
    phi = joint.word_exponent_phi
    t = meaning_factors(joint)
    linked = g.meaning_degrees > 0
    t_min, t_max = float(np.nanmin(t)), float(np.nanmax(t))
    mu = g.word_degrees.astype(float)
    p = word_marginal(joint)
    lower, upper = t_min * mu ** (phi + 1), t_max * mu ** (phi + 1)
    delta = 1.0 / (phi + 1.0)
    b1, b2 = t_max ** -delta, t_min ** -delta
    omega = g.meaning_degrees[linked]
    return BoundsReport(
        phi=phi,
        t=t,
        t_min=t_min,
        t_max=t_max,
        lower=lower,
        upper=upper,
        word_probability=p,
        satisfied=_within(lower, p, upper, rtol),
        gap_ratio=t_max / t_min,
        omega_min=int(omega.min()),
        omega_max=int(omega.max()),
        b1=b1,
        b2=b2,
        degree_bounds_satisfied=_within(b1 * p ** delta, mu, b2 * p ** delta, rtol),
    )


def check_bounds(g: BipartiteGraph, phi: float, prior: MeaningPrior | None = None) -> BoundsReport:
    """Bounds for the core model, or for the model-family variant if ``prior`` is given."""
    phi = _check_phi(phi)
    joint = joint_probability(g, phi) if prior is None else model_family_joint(g, prior, phi)
    return bounds_from_joint(joint)


@dataclass(frozen=True)
class TrivialBoundsReport:
    pi_min: float
    pi_max: float
    linear_lower: np.ndarray
    linear_upper: np.ndarray
    linear_satisfied: np.ndarray
    power_lower: np.ndarray
    power_upper: np.ndarray
    power_within_linear: bool
    power_strictly_tighter: bool
    trivial_case: bool


def check_trivial_bounds(joint: JointDistribution, rtol: float = 1e-12) -> TrivialBoundsReport:
    """Linear bounds ``pi_min mu <= p <= pi_max mu`` from joint-probability extremes.

    ``power_strictly_tighter`` is true when the degree-power interval sits
    inside the linear one for every word and is strictly narrower for at
    least one word. ``trivial_case`` flags ``phi = 0`` where both coincide.
    """
    g = joint.graph
    positive = joint.probs[joint.probs > 0]
    pi_min, pi_max = float(positive.min()), float(positive.max())
    mu = g.word_degrees.astype(float)
    p = word_marginal(joint)
    lin_lo, lin_hi = pi_min * mu, pi_max * mu
    power = bounds_from_joint(joint, rtol)
    inside = (power.lower >= lin_lo * (1 - rtol)) & (power.upper <= lin_hi * (1 + rtol))
    narrower = (power.upper - power.lower) < (lin_hi - lin_lo) * (1 - 1e-9)
    return TrivialBoundsReport(
        pi_min=pi_min,
        pi_max=pi_max,
        linear_lower=lin_lo,
        linear_upper=lin_hi,
        linear_satisfied=_within(lin_lo, p, lin_hi, rtol),
        power_lower=power.lower,
        power_upper=power.upper,
        power_within_linear=bool(inside.all()),
        power_strictly_tighter=bool(inside.all() and narrower.any()),
        trivial_case=joint.word_exponent_phi == 0.0,
    )


@dataclass(frozen=True)
class LawReport:
    phi: float
    predicted_delta: float
    fit: FitResult
    mirror_fit: FitResult
    bounds: BoundsReport

    @property
    def delta(self) -> float:
        return self.fit.exponent


def meaning_frequency_pairs(g: BipartiteGraph, phi: float) -> np.ndarray:
    """Per-word ``(p(s_i), mu_i)`` pairs."""
    p = word_marginal(joint_probability(g, phi))
    return np.column_stack([p, g.word_degrees.astype(float)])


def check_meaning_frequency_law(g: BipartiteGraph, phi: float) -> LawReport:
    phi = _check_phi(phi)
    if np.unique(g.word_degrees).size < 2:
        raise DegenerateFitError("need at least two distinct word degrees")
    pairs = meaning_frequency_pairs(g, phi)
    return LawReport(
        phi=phi,
        predicted_delta=1.0 / (phi + 1.0),
        fit=fit_power_law(pairs),
        mirror_fit=fit_power_law(pairs[:, ::-1]),
        bounds=check_bounds(g, phi),
    )


@dataclass(frozen=True)
class MeanIndependenceRow:
    mu: int
    mean_omega_phi: float
    mean_p: float
    predicted_p: float


@dataclass(frozen=True)
class MeanIndependenceReport:
    phi: float
    rows: list[MeanIndependenceRow]
    overall_mean_omega_phi: float
    mean_independent: bool
    law_holds: bool | None

    def table(self) -> list[tuple[int, float, float, float]]:
        return [(r.mu, r.mean_omega_phi, r.mean_p, r.predicted_p) for r in self.rows]


def mean_independence_check(g: BipartiteGraph, phi: float, tol: float = 1e-9) -> MeanIndependenceReport:
    """Per-degree conditional means of ``omega**phi`` over edges and of ``p`` over words.

    The predicted value ``c * E[omega**phi] * mu**(phi+1)`` uses the
    unconditional edge mean. ``law_holds`` is only evaluated (``None``
    otherwise) when the conditional means agree within ``tol``.
    """
    phi = _check_phi(phi)
    joint = joint_probability(g, phi)
    p = word_marginal(joint)
    view = edge_degrees(g)
    omega_phi = view.omega.astype(float) ** phi
    overall = math.fsum(omega_phi.tolist()) / len(omega_phi)
    rows = []
    for mu in np.unique(view.mu).tolist():
        on_edge = omega_phi[view.mu == mu]
        words = p[g.word_degrees == mu]
        rows.append(
            MeanIndependenceRow(
                mu=mu,
                mean_omega_phi=math.fsum(on_edge.tolist()) / len(on_edge),
                mean_p=math.fsum(words.tolist()) / len(words),
                predicted_p=joint.c * overall * mu ** (phi + 1),
            )
        )
    means = np.array([r.mean_omega_phi for r in rows])
    independent = bool(np.all(np.abs(means - overall) <= tol * max(1.0, abs(overall))))
    law = None
    if independent:
        law = all(abs(r.mean_p - r.predicted_p) <= tol for r in rows)
    return MeanIndependenceReport(phi, rows, overall, independent, law)


def zipf_chain_check(alpha: float, gamma: float, rank_count: int) -> FitResult:
    """Fit ``mu_i = i**-gamma`` against ``f_i = i**-alpha``; slope is ``gamma/alpha``."""
    if not (alpha > 0 and gamma > 0):
        raise ValueError(f"alpha and gamma must be positive, got {alpha}, {gamma}")
    if rank_count < 3:
        raise ValueError(f"rank_count must be >= 3, got {rank_count}")
    ranks = np.arange(1, rank_count + 1, dtype=float)
    return fit_power_law(np.column_stack([ranks ** -alpha, ranks ** -gamma]))


def counts_to_probabilities(frequencies, token_total: int) -> np.ndarray:
    """Token counts to probabilities ``f / L``; ``L`` must equal the count total."""
    f = np.asarray(frequencies, dtype=float)
    if token_total <= 0:
        raise ValueError("token total must be positive")
    if np.any(f < 0) or f.sum() != token_total:
        raise ValueError(f"token total {token_total} does not match counts summing to {f.sum():g}")
    return f / token_total
