"""Unit tests for cosine similarity, contrastive losses and ranking."""

import math

import numpy as np
import pytest

from inpaint_toolkit import cosine_similarity, in_batch_contrastive_loss, rank_passages
from inpaint_toolkit.exceptions import ConfigError, DegenerateEmbedding, ValidationError
from inpaint_toolkit.retrieval import annotated_loss, similarity_matrix


class TestCosineSimilarity:
    def test_value(self):
        assert cosine_similarity([1, 2], [2, 1]) == pytest.approx(0.8)

    def test_bounds(self):
        assert cosine_similarity([1, 0], [1, 0]) == 1.0
        assert cosine_similarity([1, 0], [-3, 0]) == -1.0

    def test_scale_invariance(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            q, p = rng.normal(size=8), rng.normal(size=8)
            scale = rng.uniform(0.01, 100.0)
            assert cosine_similarity(q * scale, p) == pytest.approx(cosine_similarity(q, p))

    def test_zero_vector(self):
        with pytest.raises(DegenerateEmbedding):
            cosine_similarity([0, 0], [1, 0])

    def test_non_finite(self):
        with pytest.raises(DegenerateEmbedding):
            cosine_similarity([np.nan, 1], [1, 0])

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            cosine_similarity([1, 0, 0], [1, 0])

    def test_similarity_matrix(self):
        matrix = similarity_matrix([[1, 0], [0, 2]], [[3, 0], [1, 1], [0, 1]])
        assert matrix.shape == (2, 3)
        assert matrix[0] == pytest.approx([1.0, 1 / math.sqrt(2), 0.0])
        assert matrix[1] == pytest.approx([0.0, 1 / math.sqrt(2), 1.0])


class TestInBatchContrastiveLoss:
    """Test the in-batch softmax cross-entropy."""

    def test_single_example_has_zero_loss(self):
        mean, losses = in_batch_contrastive_loss([[1, 2]], [[3, -1]], 0.05)
        assert mean == 0.0
        assert losses.tolist() == [0.0]

    def test_identical_embeddings(self):
        embeddings = [[1.0, 1.0]] * 4
        mean, losses = in_batch_contrastive_loss(embeddings, embeddings, 1.0)
        assert mean == pytest.approx(math.log(4))
        assert losses == pytest.approx([math.log(4)] * 4)

    def test_worked_example(self):
        _, losses = in_batch_contrastive_loss([[1, 0], [0, 1]], [[1, 0], [0, 1]], 0.5)
        assert losses[0] == pytest.approx(0.126928, abs=1e-6)
        assert losses[0] == pytest.approx(math.log(1 + math.exp(-2)))

    def test_losses_are_non_negative(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            batch = rng.integers(1, 6)
            _, losses = in_batch_contrastive_loss(rng.normal(size=(batch, 4)), rng.normal(size=(batch, 4)), 0.1)
            assert np.all(losses >= 0.0)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            queries, passages = rng.normal(size=(5, 6)), rng.normal(size=(5, 6))
            order = rng.permutation(5)
            _, losses = in_batch_contrastive_loss(queries, passages, 0.2)
            _, permuted = in_batch_contrastive_loss(queries[order], passages[order], 0.2)
            assert permuted == pytest.approx(losses[order])

    @pytest.mark.parametrize("temperature", [0.0, -1.0])
    def test_temperature_must_be_positive(self, temperature):
        with pytest.raises(ConfigError):
            in_batch_contrastive_loss([[1, 0]], [[1, 0]], temperature)

    def test_count_mismatch(self):
        with pytest.raises(ValidationError):
            in_batch_contrastive_loss([[1, 0], [0, 1]], [[1, 0]], 1.0)

    def test_empty_batch(self):
        with pytest.raises(ValidationError):
            in_batch_contrastive_loss([], [], 1.0)

    def test_degenerate_embedding(self):
        with pytest.raises(DegenerateEmbedding):
            in_batch_contrastive_loss([[0, 0]], [[1, 0]], 1.0)


class TestAnnotatedLoss:
    def test_no_negatives(self):
        assert annotated_loss([1, 0], [0, 1], [], 0.05) == 0.0

    def test_value(self):
        loss = annotated_loss([1, 0], [1, 0], [[0, 1], [-1, 0]], 1.0)
        assert loss == pytest.approx(math.log(math.e + 1 + math.exp(-1)) - 1)

    def test_temperature_must_be_positive(self):
        with pytest.raises(ConfigError):
            annotated_loss([1, 0], [1, 0], [], 0.0)


class TestRankPassages:
    def test_descending_similarity(self):
        assert rank_passages([1, 0], [[0, 1], [1, 1], [1, 0]]) == [2, 1, 0]

    def test_ties_keep_index_order(self):
        assert rank_passages([1, 0], [[0, 1], [2, 0], [1, 0]]) == [1, 2, 0]
