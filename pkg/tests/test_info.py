import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from meaningwalk import (
    BipartiteGraph,
    Verdict,
    check_mi_optimal_configuration,
    conditional_entropy,
    entropy,
    generate_contrast_graph,
    generate_mi_optimal,
    joint_probability,
    mutual_information,
)

import oracles
from conftest import contrast_graphs, phis, strict_graphs

LN2 = math.log(2)


def test_entropy_examples():
    assert entropy([0.5, 0.5]) == pytest.approx(LN2, abs=1e-15)
    assert entropy([1, 0, 0]) == 0.0
    # direct evaluation: -(1/2 ln 1/2 + 1/3 ln 1/3 + 1/6 ln 1/6)
    oracle = -sum(p * math.log(p) for p in (1 / 2, 1 / 3, 1 / 6))
    assert oracle == pytest.approx(1.0114, abs=1e-3)
    assert entropy([1 / 2, 1 / 3, 1 / 6]) == pytest.approx(oracle, abs=1e-15)
    with pytest.raises(ValueError):
        entropy([0.5, 0.4])
    with pytest.raises(ValueError):
        entropy([1.5, -0.5])


@given(st.lists(st.floats(0, 1), min_size=1, max_size=12).filter(lambda v: sum(v) > 1e-3))
def test_entropy_bounded_by_log_support(raw):
    p = np.array(raw) / sum(raw)
    h = entropy(p)
    support = int(np.count_nonzero(p))
    assert -1e-12 <= h <= math.log(support) + 1e-12


def test_conditional_entropy_examples(g1, g3, k22):
    assert conditional_entropy(joint_probability(g1, 1)) == pytest.approx(2 / 3 * LN2, abs=1e-12)
    assert conditional_entropy(joint_probability(g3, 1.7)) == 0.0
    assert conditional_entropy(joint_probability(k22, 1)) == pytest.approx(LN2, abs=1e-12)


@given(contrast_graphs(), phis)
def test_contrast_graphs_have_no_residual_ambiguity(g, phi):
    assert conditional_entropy(joint_probability(g, phi)) == 0.0


def test_mutual_information_examples(g1):
    for phi in (0, 1, 2):
        rep = mutual_information(joint_probability(generate_mi_optimal(2, 2, 1), phi))
        assert rep.mutual_info == pytest.approx(LN2, abs=1e-12)
        assert rep.is_maximal
    rep = mutual_information(joint_probability(g1, 1))
    assert rep.mutual_info == pytest.approx(LN2 / 3, abs=1e-12)
    assert not rep.is_maximal
    rep = mutual_information(joint_probability(generate_mi_optimal(2, 4, 2), 1))
    assert rep.mutual_info == pytest.approx(LN2, abs=1e-12)
    assert rep.is_maximal


def test_report_bits_view(g1):
    rep = mutual_information(joint_probability(g1, 1))
    bits = rep.in_bits()
    assert bits.log_base == "2"
    assert bits.mutual_info == pytest.approx(1 / 3, abs=1e-12)
    assert bits.h_words == pytest.approx(1.0, abs=1e-12)
    assert set(rep.as_record()) >= {"h_words", "h_words_given_meanings", "mutual_info", "log_base"}


@given(strict_graphs(), phis)
def test_report_invariants(g, phi):
    j = joint_probability(g, phi)
    rep = mutual_information(j)
    assert rep.h_words >= 0 and rep.h_words_given_meanings >= 0
    assert 0 <= rep.mutual_info <= rep.h_words + 1e-12
    assert abs(rep.mutual_info - (rep.h_words - rep.h_words_given_meanings)) < 1e-12
    # separate route: sum p log(p / (p_s p_r))
    assert rep.mutual_info == pytest.approx(oracles.mi_by_definition(j.probs), abs=1e-12)
    linked = int(np.count_nonzero(g.meaning_degrees))
    assert rep.mutual_info <= min(rep.h_words, math.log(linked)) + 1e-12
    assert rep.max_possible == pytest.approx(math.log(min(g.n, linked)))


def test_verdict_examples(g1):
    assert check_mi_optimal_configuration(generate_mi_optimal(3, 6, 2)) is Verdict.OPTIMAL
    assert check_mi_optimal_configuration(g1) is Verdict.VIOLATES_CONDITION_2
    assert check_mi_optimal_configuration(generate_contrast_graph([1, 2, 3])) is Verdict.VIOLATES_CONDITION_1


def test_verdict_n_greater_than_m():
    # each meaning carries two private words
    g = generate_mi_optimal(4, 2, 2)
    assert g.strict
    assert check_mi_optimal_configuration(g) is Verdict.OPTIMAL
    # word 0 on both meanings breaks the words' {0,1} condition
    assert check_mi_optimal_configuration(g.with_edge(0, 1)) is Verdict.VIOLATES_CONDITION_2
    uneven = BipartiteGraph(3, 2, [(0, 0), (1, 0), (2, 1)])
    assert check_mi_optimal_configuration(uneven) is Verdict.VIOLATES_CONDITION_1


def test_condition_two_checked_first():
    # words have unequal degree and a meaning is shared
    g = BipartiteGraph(2, 4, [(0, 0), (1, 0), (1, 1), (1, 2)])
    assert check_mi_optimal_configuration(g) is Verdict.VIOLATES_CONDITION_2


@pytest.mark.parametrize("phi", [0, 0.5, 1, 2, 3.5])
@pytest.mark.parametrize("n,m,d", [(1, 1, 1), (2, 2, 1), (2, 4, 2), (3, 7, 2), (4, 2, 2), (3, 3, 1)])
def test_optimal_generators_reach_maximum(n, m, d, phi):
    rep = mutual_information(joint_probability(generate_mi_optimal(n, m, d), phi))
    assert rep.is_maximal
    assert rep.mutual_info == pytest.approx(math.log(min(n, m)), abs=1e-9)
