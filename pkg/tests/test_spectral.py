import numpy as np
import pytest

from oracles import random_similarity, union_find_components

from meshplan.errors import ConfigError
from meshplan.spectral import (degree_vector, embed, fix_signs, laplacian_spectrum, normalized_laplacian,
                               zero_eigenvalue_count)

K3 = np.ones((3, 3)) - np.eye(3)


def test_degree_vector():
    np.testing.assert_array_equal(degree_vector(0.5 * K3), [1.0, 1.0, 1.0])
    s = np.zeros((3, 3))
    s[0, 1] = s[1, 0] = 0.3
    assert degree_vector(s)[2] == 0


def test_degree_vector_matches_row_sum_loop(rng):
    s = random_similarity(rng, 10)
    expected = [sum(s[i][j] for j in range(10)) for i in range(10)]
    np.testing.assert_allclose(degree_vector(s), expected, rtol=0, atol=1e-14)


def test_laplacian_k3():
    lap = normalized_laplacian(K3)
    np.testing.assert_allclose(lap, np.eye(3) - K3 / 2, atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(lap), [0.0, 1.5, 1.5], atol=1e-12)


def test_two_pairs_have_double_zero():
    s = np.zeros((4, 4))
    s[0, 1] = s[1, 0] = 0.7
    s[2, 3] = s[3, 2] = 0.2
    evals, _ = laplacian_spectrum(s)
    assert zero_eigenvalue_count(evals) == 2


def test_empty_graph_gives_identity():
    lap = normalized_laplacian(np.zeros((4, 4)))
    np.testing.assert_array_equal(lap, np.eye(4))


def test_unit_diagonal_for_connected_nodes(rng):
    s = random_similarity(rng, 12, density=1.0)
    np.testing.assert_allclose(np.diag(normalized_laplacian(s)), 1.0)


def test_embed_k3():
    emb = embed(K3, 1)
    assert emb.coords.shape == (3, 1)
    np.testing.assert_allclose(emb.eigenvalues, [0.0, 1.5], atol=1e-12)
    sqrt_deg = np.sqrt(degree_vector(K3))
    assert abs(sqrt_deg @ emb.coords[:, 0]) < 1e-12


def test_connected_graph_retains_positive_eigenvalues(rng):
    s = random_similarity(rng, 15, density=1.0)
    emb = embed(s, 4)
    assert np.all(emb.eigenvalues[1:] > 1e-8)
    assert abs(emb.eigenvalues[0]) < 1e-8


def test_twin_nodes_embed_identically():
    s = np.zeros((5, 5))
    pairs = {(0, 1): 0.9, (0, 2): 0.1, (1, 2): 0.1, (2, 3): 0.8, (2, 4): 0.8, (3, 4): 0.8}
    for (i, j), w in pairs.items():
        s[i, j] = s[j, i] = w
    emb = embed(s, 1)
    np.testing.assert_allclose(emb.coords[0], emb.coords[1], atol=1e-12)
    swap = [1, 0, 2, 3, 4]
    np.testing.assert_allclose(embed(s[np.ix_(swap, swap)], 1).coords, emb.coords[swap], atol=1e-12)


def test_sign_convention():
    v = np.array([[0.1, -0.5], [-0.9, 0.5], [0.2, 0.1]])
    out = fix_signs(v)
    np.testing.assert_array_equal(out[:, 0], -v[:, 0])
    # tie on |0.5|: first index decides, already positive -> unchanged
    np.testing.assert_array_equal(out[:, 1], -v[:, 1])


def test_permutation_equivariance(rng):
    s = random_similarity(rng, 20, density=1.0)
    perm = rng.permutation(20)
    a = embed(s, 3).coords
    b = embed(s[np.ix_(perm, perm)], 3).coords
    np.testing.assert_allclose(b, a[perm], atol=1e-9)


def test_reconstruction_and_bounds(rng):
    for _ in range(10):
        n = int(rng.integers(3, 30))
        s = random_similarity(rng, n, density=rng.uniform(0.05, 1))
        lap = normalized_laplacian(s)
        evals, evecs = laplacian_spectrum(s)
        assert np.all(np.diff(evals) >= 0)
        assert evals.min() >= -1e-8 and evals.max() <= 2 + 1e-8
        assert np.max(np.abs(lap @ evecs - evecs * evals)) <= 1e-8
        comps = union_find_components(s > 0)
        assert zero_eigenvalue_count(evals) == sum(1 for c in comps if len(c) > 1)


def test_disconnected_graph_warns(caplog):
    s = np.zeros((4, 4))
    s[0, 1] = s[1, 0] = 1.0
    s[2, 3] = s[3, 2] = 1.0
    with caplog.at_level("WARNING"):
        emb = embed(s, 2)
    assert "connected components" in caplog.text
    assert abs(emb.eigenvalues[1]) < 1e-8


@pytest.mark.parametrize("d", [0, 3, 5])
def test_dimension_out_of_range(d):
    with pytest.raises(ConfigError):
        embed(K3, d)
