from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings

from meaningwalk import (
    BipartiteGraph,
    GraphError,
    MeaningPrior,
    conditional_word_given_meaning,
    generate_random_bipartite,
    joint_probability,
    meaning_marginal,
    minimalist_joint,
    model_family_joint,
    rows_pairwise_orthogonal,
    word_marginal,
)
from meaningwalk.probability import (
    closed_form_meaning_marginal,
    closed_form_word_marginal,
    read_dense_csv,
    read_sparse_csv,
    write_dense_csv,
    write_sparse_csv,
)

import oracles
from conftest import contrast_graphs, phis, strict_graphs

TOL = 1e-12


def _as_matrix(exact, n, m):
    out = np.zeros((n, m))
    for (i, j), p in exact.items():
        out[i, j] = float(p)
    return out


def test_g1_joint_phi1_matches_exact_oracle(g1):
    exact, total = oracles.exact_joint(g1.edges, 1)
    assert total == 12
    assert exact == {(0, 0): F(1, 6), (0, 1): F(1, 3), (1, 1): F(1, 3), (1, 2): F(1, 6)}
    j = joint_probability(g1, 1)
    assert j.normalizer == pytest.approx(12, abs=TOL)
    np.testing.assert_allclose(j.probs, _as_matrix(exact, 2, 3), rtol=TOL, atol=0)


def test_g1_joint_phi0_uniform_over_edges(g1):
    j = joint_probability(g1, 0)
    for i, jj in g1.edges:
        assert j.probs[i, jj] == pytest.approx(0.25, abs=TOL)
    assert j.probs[0, 2] == 0 and j.probs[1, 0] == 0


@pytest.mark.parametrize("phi", [0, 0.5, 1, 3])
def test_star_joint_symmetric(star, phi):
    np.testing.assert_allclose(joint_probability(star, phi).probs, [[1 / 3] * 3], rtol=TOL)


def test_zero_edges_rejected():
    with pytest.raises(GraphError):
        joint_probability(BipartiteGraph(1, 1, [], strict=False), 1)
    with pytest.raises(ValueError):
        joint_probability(BipartiteGraph(1, 1, [(0, 0)]), -0.5)


def test_minimalist_examples(g1, g3, star):
    exact, total = oracles.exact_minimalist(g1.edges)
    assert total == 8
    j = minimalist_joint(g1)
    assert j.phi == "minimalist"
    assert j.c == pytest.approx(1 / 8, abs=TOL)
    assert j.probs[0, 0] == pytest.approx(float(exact[(0, 0)]), abs=TOL) == pytest.approx(0.25)
    assert word_marginal(j)[0] == pytest.approx(0.5, abs=TOL)

    exact3, total3 = oracles.exact_minimalist(g3.edges)
    assert total3 == 14
    pw, _ = oracles.marginals(exact3, 3, 6)
    assert pw == [F(1, 14), F(4, 14), F(9, 14)]
    np.testing.assert_allclose(word_marginal(minimalist_joint(g3)), [1 / 14, 4 / 14, 9 / 14], rtol=TOL)
    assert word_marginal(minimalist_joint(star)).tolist() == [1.0]


def test_word_marginal_examples(g1, g3, k22):
    np.testing.assert_allclose(word_marginal(joint_probability(g1, 1)), [0.5, 0.5], rtol=TOL)
    np.testing.assert_allclose(word_marginal(joint_probability(g3, 1)), [1 / 14, 4 / 14, 9 / 14], rtol=TOL)
    exact, total = oracles.exact_joint(k22.edges, 1)
    assert total == 16
    np.testing.assert_allclose(word_marginal(joint_probability(k22, 1)), [0.5, 0.5], rtol=TOL)


def test_meaning_marginal_examples(g1, star):
    exact1, _ = oracles.exact_joint(g1.edges, 1)
    assert oracles.marginals(exact1, 2, 3)[1] == [F(1, 6), F(2, 3), F(1, 6)]
    np.testing.assert_allclose(meaning_marginal(joint_probability(g1, 1)), [1 / 6, 2 / 3, 1 / 6], rtol=TOL)
    exact0, _ = oracles.exact_joint(g1.edges, 0)
    assert oracles.marginals(exact0, 2, 3)[1] == [F(1, 4), F(1, 2), F(1, 4)]
    np.testing.assert_allclose(meaning_marginal(joint_probability(g1, 0)), [0.25, 0.5, 0.25], rtol=TOL)
    np.testing.assert_allclose(meaning_marginal(joint_probability(star, 2)), [1 / 3] * 3, rtol=TOL)


def test_joint_row_is_meaning_vector(g1):
    j = joint_probability(g1, 1)
    np.testing.assert_array_equal(j.row(0), [1 / 6, 1 / 3, 0])


@given(strict_graphs(), phis)
def test_normalization(g, phi):
    assert abs(joint_probability(g, phi).probs.sum() - 1) < TOL
    assert abs(minimalist_joint(g).probs.sum() - 1) < TOL


@given(strict_graphs(max_n=6, max_m=6))
@settings(max_examples=60)
def test_integer_phi_matches_exact_rationals(g):
    for phi in (0, 1, 2):
        exact, _ = oracles.exact_joint(g.edges, phi)
        np.testing.assert_allclose(joint_probability(g, phi).probs, _as_matrix(exact, g.n, g.m), rtol=TOL, atol=0)


@given(strict_graphs(), phis)
def test_support_equals_edges(g, phi):
    j = joint_probability(g, phi)
    assert np.array_equal(j.probs > 0, g.adjacency() > 0)


@pytest.mark.parametrize("phi", [0, 0.5, 1, 2])
@pytest.mark.parametrize("seed", range(8))
def test_marginals_match_closed_forms(phi, seed):
    g = generate_random_bipartite(9, 11, 0.3, seed)
    j = joint_probability(g, phi)
    np.testing.assert_allclose(word_marginal(j), closed_form_word_marginal(g, phi), rtol=TOL, atol=0)
    np.testing.assert_allclose(meaning_marginal(j), closed_form_meaning_marginal(g, phi), rtol=TOL, atol=1e-300)


@given(strict_graphs())
def test_phi_zero_is_uniform_over_edges(g):
    j = joint_probability(g, 0)
    np.testing.assert_allclose(j.probs, g.adjacency() / g.edge_count, rtol=TOL)


@given(strict_graphs())
def test_contrast_phi_one_reduces_to_minimalist(g):
    if rows_pairwise_orthogonal(g):
        np.testing.assert_allclose(joint_probability(g, 1).probs, minimalist_joint(g).probs, rtol=TOL)


@given(contrast_graphs(), phis)
def test_contrast_law_exact(g, phi):
    mu = g.word_degrees.astype(float)
    expected = mu ** (phi + 1) / (mu ** (phi + 1)).sum()
    np.testing.assert_allclose(word_marginal(joint_probability(g, phi)), expected, rtol=TOL)


@pytest.mark.parametrize("phi", [0, 0.5, 1, 2])
def test_constant_omega_law(phi):
    # every meaning has degree 2; word degrees 1, 2, 3, 2
    g = BipartiteGraph(4, 4, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (2, 3), (3, 3)])
    assert set(g.meaning_degrees.tolist()) == {2}
    mu = g.word_degrees.astype(float)
    expected = mu ** (phi + 1) / (mu ** (phi + 1)).sum()
    np.testing.assert_allclose(word_marginal(joint_probability(g, phi)), expected, rtol=TOL)


def test_conditional_examples(g1):
    c1 = conditional_word_given_meaning(g1, 1)
    np.testing.assert_allclose(c1[:, 1], [0.5, 0.5], rtol=TOL)
    c0 = conditional_word_given_meaning(g1, 0)
    assert c0[0, 0] == 1.0 and c0[1, 0] == 0.0
    # word 0 has degree 1, word 1 degree 3, both on meaning 0
    g = BipartiteGraph(2, 3, [(0, 0), (1, 0), (1, 1), (1, 2)])
    np.testing.assert_allclose(conditional_word_given_meaning(g, 1)[:, 0], [0.25, 0.75], rtol=TOL)


def test_conditional_zero_column_for_unlinked_meaning():
    g = BipartiteGraph(2, 3, [(0, 0), (1, 0)])
    c = conditional_word_given_meaning(g, 1)
    assert c[:, 1].tolist() == [0, 0] and c[:, 2].tolist() == [0, 0]


@given(strict_graphs(), phis)
def test_conditional_columns_and_bayes(g, phi):
    cond = conditional_word_given_meaning(g, phi)
    linked = g.meaning_degrees > 0
    np.testing.assert_allclose(cond[:, linked].sum(axis=0), 1.0, rtol=TOL)
    assert np.all(cond[:, ~linked] == 0)
    j = joint_probability(g, phi)
    np.testing.assert_allclose(j.probs, cond * meaning_marginal(j)[None, :], rtol=1e-12, atol=1e-15)


def test_model_family_uniform_prior(g1):
    j = model_family_joint(g1, MeaningPrior("uniform"), 0)
    # 1/3 * 1 + 1/3 * 1/2
    assert word_marginal(j)[0] == pytest.approx(0.5, abs=TOL)
    assert abs(j.probs.sum() - 1) < TOL


def test_model_family_reproduces_core_model(g1):
    core = joint_probability(g1, 1)
    fam = model_family_joint(g1, meaning_marginal(core), 1)
    np.testing.assert_allclose(fam.probs, core.probs, rtol=TOL)


@pytest.mark.parametrize("kind", ["uniform", "degree"])
def test_model_family_star(star, kind):
    assert word_marginal(model_family_joint(star, MeaningPrior(kind), 1.5)).tolist() == pytest.approx([1.0])


@given(strict_graphs(), phis)
def test_model_family_identities(g, phi):
    core = joint_probability(g, phi)
    np.testing.assert_allclose(
        model_family_joint(g, meaning_marginal(core), phi).probs, core.probs, rtol=1e-12, atol=1e-15
    )
    second = model_family_joint(g, MeaningPrior("degree"), 0)
    np.testing.assert_allclose(second.probs, joint_probability(g, 0).probs, rtol=1e-12)
    first = model_family_joint(g, MeaningPrior("uniform"), phi)
    assert abs(first.probs.sum() - 1) < TOL


def test_model_family_rejects_mass_on_unlinked_meaning():
    g = BipartiteGraph(1, 2, [(0, 0)])
    with pytest.raises(GraphError):
        model_family_joint(g, MeaningPrior("explicit", (0.5, 0.5)), 1)
    with pytest.raises(ValueError):
        model_family_joint(g, MeaningPrior("explicit", (0.5,)), 1)


def test_phi_range_flag(g1):
    assert not joint_probability(g1, 2).phi_outside_discussed_range
    assert joint_probability(g1, 2.5).phi_outside_discussed_range


def test_csv_exports_round_trip(g1):
    j = joint_probability(g1, 1)
    dense = write_dense_csv(j)
    assert dense.splitlines()[0] == "word,r0,r1,r2"
    assert "0.16666666666666666" in dense
    np.testing.assert_array_equal(read_dense_csv(dense), j.probs)
    sparse = write_sparse_csv(j)
    assert sparse.splitlines()[:2] == ["i,j,p", "0,0,0.16666666666666666"]
    np.testing.assert_array_equal(read_sparse_csv(sparse, 2, 3), j.probs)


@given(strict_graphs(), phis)
@settings(max_examples=30)
def test_csv_round_trip_bit_exact(g, phi):
    j = joint_probability(g, phi)
    np.testing.assert_array_equal(read_sparse_csv(write_sparse_csv(j), g.n, g.m), j.probs)
