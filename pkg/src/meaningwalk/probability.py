"""Exact joint, marginal and conditional word-meaning probabilities.

The core model weights an edge by the product of its end degrees raised to
a bias exponent ``phi``::

    p(s_i, r_j) = a_ij * (mu_i * omega_j) ** phi / M

``phi = 0`` gives the uniform distribution over edges. Normalizers and
marginals are summed with :func:`math.fsum` so the 1e-12 checks hold on
large graphs.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import GraphError
from .lexicon import BipartiteGraph

MINIMALIST = "minimalist"
DISCUSSED_PHI_MAX = 2.0


@dataclass(frozen=True)
class JointDistribution:
    """``n x m`` matrix of joint probabilities over a graph.

    ``phi`` is the bias exponent, or the string ``"minimalist"`` for the
    word-degree-only model. ``normalizer`` is the sum ``M`` with ``c = 1/M``;
    it is ``None`` for distributions composed from a prior.
    """

    graph: BipartiteGraph
    probs: np.ndarray
    phi: float | str
    normalizer: float | None

    @property
    def c(self) -> float | None:
        return None if self.normalizer is None else 1.0 / self.normalizer

    @property
    def word_exponent_phi(self) -> float:
        """Exponent on ``mu`` in the word factor; the minimalist model acts like 1."""
        return 1.0 if self.phi == MINIMALIST else float(self.phi)

    @property
    def phi_outside_discussed_range(self) -> bool:
        return self.phi != MINIMALIST and float(self.phi) > DISCUSSED_PHI_MAX

    def row(self, i: int) -> np.ndarray:
        """Meaning vector of word ``i`` (its row of joint probabilities)."""
        return self.probs[i].copy()


@dataclass(frozen=True)
class MeaningPrior:
    """A priori meaning probabilities for the optimization-model family.

    ``kind`` is ``"uniform"`` (1st model), ``"degree"`` (2nd model, ``p(r_j)``
    proportional to ``omega_j``) or ``"explicit"`` with ``probs`` given.
    """

    kind: Literal["uniform", "degree", "explicit"]
    probs: tuple[float, ...] | None = None

    def resolve(self, g: BipartiteGraph) -> np.ndarray:
        omega = g.meaning_degrees
        linked = omega >= 1
        if self.kind == "uniform":
            p = linked / linked.sum()
        elif self.kind == "degree":
            p = omega / omega.sum()
        elif self.kind == "explicit":
            if self.probs is None or len(self.probs) != g.m:
                raise ValueError(f"explicit prior needs {g.m} probabilities")
            p = np.asarray(self.probs, dtype=float)
            if np.any(p < 0):
                raise ValueError("prior probabilities must be non-negative")
            if np.any(p[~linked] > 0):
                bad = np.flatnonzero((~linked) & (p > 0)).tolist()
                raise GraphError(f"prior puts mass on unlinked meanings {bad}")
            if abs(math.fsum(p) - 1.0) > 1e-9:
                raise ValueError(f"prior sums to {math.fsum(p)}, not 1")
        else:
            raise ValueError(f"unknown prior kind {self.kind!r}")
        return np.asarray(p, dtype=float)


def _check_phi(phi: float) -> float:
    phi = float(phi)
    if not (phi >= 0.0 and math.isfinite(phi)):
        raise ValueError(f"phi must be a finite real >= 0, got {phi}")
    return phi


def _usable(g: BipartiteGraph) -> None:
    g.require_no_isolated_words()
    if g.edge_count == 0:
        raise GraphError("graph has no edges")


def _from_edge_weights(g: BipartiteGraph, weights: np.ndarray, phi) -> JointDistribution:
    total = math.fsum(weights.tolist())
    rows, cols = g.edge_arrays()
    probs = np.zeros((g.n, g.m))
    probs[rows, cols] = weights / total
    probs.flags.writeable = False
    return JointDistribution(graph=g, probs=probs, phi=phi, normalizer=total)


def edge_weights(g: BipartiteGraph, phi: float) -> np.ndarray:
    """Unnormalized ``(mu_i * omega_j) ** phi`` for each edge, in edge order."""
    rows, cols = g.edge_arrays()
    mu = g.word_degrees[rows].astype(float)
    omega = g.meaning_degrees[cols].astype(float)
    return (mu * omega) ** phi


def joint_probability(g: BipartiteGraph, phi: float) -> JointDistribution:
    phi = _check_phi(phi)
    _usable(g)
    return _from_edge_weights(g, edge_weights(g, phi), phi)


def minimalist_joint(g: BipartiteGraph) -> JointDistribution:
    """Joint probability proportional to the word degree alone; ``c = 1/sum(mu**2)``."""
    _usable(g)
    rows, _ = g.edge_arrays()
    return _from_edge_weights(g, g.word_degrees[rows].astype(float), MINIMALIST)


def _fsum_axis(a: np.ndarray, axis: int) -> np.ndarray:
    if axis == 0:
        a = a.T
    return np.array([math.fsum(r) for r in a.tolist()])


def word_marginal(joint: JointDistribution) -> np.ndarray:
    return _fsum_axis(joint.probs, 1)


def meaning_marginal(joint: JointDistribution) -> np.ndarray:
    return _fsum_axis(joint.probs, 0)


def closed_form_word_marginal(g: BipartiteGraph, phi: float) -> np.ndarray:
    """``c * mu_i**phi * sum_j a_ij omega_j**phi`` evaluated per word."""
    phi = _check_phi(phi)
    _usable(g)
    mu_phi = g.word_degrees.astype(float) ** phi
    omega_phi = g.meaning_degrees.astype(float) ** phi
    inner = _fsum_axis(g.adjacency() * omega_phi[None, :], 1)
    total = math.fsum((mu_phi * inner).tolist())
    return mu_phi * inner / total


def closed_form_meaning_marginal(g: BipartiteGraph, phi: float) -> np.ndarray:
    """``c * omega_j**phi * sum_i a_ij mu_i**phi`` evaluated per meaning."""
    phi = _check_phi(phi)
    _usable(g)
    mu_phi = g.word_degrees.astype(float) ** phi
    omega_phi = g.meaning_degrees.astype(float) ** phi
    inner = _fsum_axis(g.adjacency() * mu_phi[:, None], 0)
    total = math.fsum((omega_phi * inner).tolist())
    return omega_phi * inner / total


def conditional_word_given_meaning(g: BipartiteGraph, phi: float) -> np.ndarray:
    """``p(s_i | r_j)`` as an ``n x m`` matrix; unlinked meanings give zero columns."""
    phi = _check_phi(phi)
    g.require_no_isolated_words()
    a = g.adjacency()
    w = a * (g.word_degrees.astype(float) ** phi)[:, None]
    col = _fsum_axis(w, 0)
    out = np.zeros_like(w)
    linked = col > 0
    out[:, linked] = w[:, linked] / col[linked]
    return out


def model_family_joint(g: BipartiteGraph, prior: MeaningPrior | np.ndarray, phi: float) -> JointDistribution:
    """``p(s_i | r_j) * p(r_j)`` with the biased conditional and a given meaning prior.

    ``prior`` may be a :class:`MeaningPrior` or a raw probability vector over
    meanings (treated as an explicit prior).
    """
    phi = _check_phi(phi)
    _usable(g)
    if not isinstance(prior, MeaningPrior):
        prior = MeaningPrior("explicit", tuple(float(x) for x in np.asarray(prior)))
    p_r = prior.resolve(g)
    probs = conditional_word_given_meaning(g, phi) * p_r[None, :]
    probs.flags.writeable = False
    return JointDistribution(graph=g, probs=probs, phi=phi, normalizer=None)


def write_dense_csv(joint: JointDistribution, path: str | Path | None = None) -> str:
    """Dense CSV, one row per word, 17 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["word"] + [f"r{j}" for j in range(joint.graph.m)])
    for i, row in enumerate(joint.probs):
        w.writerow([i] + [f"{x:.17g}" for x in row])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def write_sparse_csv(joint: JointDistribution, path: str | Path | None = None) -> str:
    """Triplet CSV ``i,j,p`` over edges, 17 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "p"])
    for i, j in joint.graph.edges:
        w.writerow([i, j, f"{joint.probs[i, j]:.17g}"])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_dense_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    return np.array([[float(x) for x in r[1:]] for r in rows[1:]])


def read_sparse_csv(text: str, n: int, m: int) -> np.ndarray:
    out = np.zeros((n, m))
    for rec in csv.DictReader(io.StringIO(text)):
        out[int(rec["i"]), int(rec["j"])] = float(rec["p"])
    return out
