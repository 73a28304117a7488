"""Entropies and word-meaning mutual information.

Everything is computed in nats; :meth:`MIReport.in_bits` converts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from .lexicon import BipartiteGraph
from .probability import JointDistribution, meaning_marginal, word_marginal

OPTIMALITY_TOL = 1e-9


def entropy(dist) -> float:
    """Shannon entropy in nats, with ``0 log 0 = 0``."""
    p = np.asarray(dist, dtype=float)
    if np.any(p < 0):
        raise ValueError("probabilities must be non-negative")
    if abs(math.fsum(p.tolist()) - 1.0) > 1e-9:
        raise ValueError(f"distribution sums to {p.sum()!r}, not 1")
    nz = p[p > 0]
    return max(-math.fsum((nz * np.log(nz)).tolist()), 0.0)


def conditional_entropy(joint: JointDistribution) -> float:
    """``H(S|R) = sum_j p(r_j) H(S|r_j)`` over meanings with nonzero probability."""
    p_r = meaning_marginal(joint)
    terms = []
    for j in np.flatnonzero(p_r > 0):
        terms.append(p_r[j] * entropy(joint.probs[:, j] / p_r[j]))
    return max(math.fsum(terms), 0.0)


@dataclass(frozen=True)
class MIReport:
    h_words: float
    h_words_given_meanings: float
    mutual_info: float
    max_possible: float
    is_maximal: bool
    log_base: str = "e"

    def in_bits(self) -> "MIReport":
        k = 1.0 / math.log(2)
        return MIReport(
            h_words=self.h_words * k,
            h_words_given_meanings=self.h_words_given_meanings * k,
            mutual_info=self.mutual_info * k,
            max_possible=self.max_possible * k,
            is_maximal=self.is_maximal,
            log_base="2",
        )

    def as_record(self) -> dict:
        return asdict(self)


def mutual_information(joint: JointDistribution) -> MIReport:
    h_s = entropy(word_marginal(joint))
    h_s_r = conditional_entropy(joint)
    mi = h_s - h_s_r
    if -1e-12 < mi < 0:
        mi = 0.0
    g = joint.graph
    linked_words = int(np.count_nonzero(g.word_degrees))
    linked_meanings = int(np.count_nonzero(g.meaning_degrees))
    bound = math.log(g.n) if g.n <= g.m else math.log(g.m)
    return MIReport(
        h_words=h_s,
        h_words_given_meanings=h_s_r,
        mutual_info=mi,
        max_possible=math.log(min(linked_words, linked_meanings)),
        is_maximal=mi >= bound - OPTIMALITY_TOL,
    )


class Verdict(enum.Enum):
    OPTIMAL = "optimal"
    VIOLATES_CONDITION_1 = "violates_condition_1"
    VIOLATES_CONDITION_2 = "violates_condition_2"


def check_mi_optimal_configuration(g: BipartiteGraph) -> Verdict:
    """Structural test for mutual-information-maximizing configurations.

    With ``n <= m``: condition 2 is ``omega_j in {0, 1}`` and condition 1 is
    ``mu_i == d`` for a common ``d in [1, m // n]``. With ``n > m`` the roles
    of words and meanings swap. Condition 2 is checked first.
    """
    if g.n <= g.m:
        own, other, ratio = g.word_degrees, g.meaning_degrees, g.m // g.n
    else:
        own, other, ratio = g.meaning_degrees, g.word_degrees, g.n // g.m
    if np.any(other > 1):
        return Verdict.VIOLATES_CONDITION_2
    d = int(own[0])
    if not (np.all(own == d) and 1 <= d <= ratio):
        return Verdict.VIOLATES_CONDITION_1
    return Verdict.OPTIMAL
