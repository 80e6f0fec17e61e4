"""Randomized and exhaustive oracle checks, excluded from the default run (``-m performance``)."""

import math
import random
import time
from collections import Counter
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from factories import make_document, random_dialog

from inpaint_toolkit import PrepConfig, SynthesisConfig, in_batch_contrastive_loss, mrr_at_k, rouge_l, rouge_n
from inpaint_toolkit.prep import SentinelVocabulary, parse_sentinel_output, sample_mask, serialize_training_example
from inpaint_toolkit.prep.sentinels import count_sentinels
from inpaint_toolkit.retrieval import evaluate_retrieval, rank_passages
from inpaint_toolkit.synthesis import inpaint_document, render_fills, synthesize_corpus

TRIALS = 1000
WORDS = ["who", "built", "it", "when", "tower", "why", "is", "the", "river", "long?"]


def random_fill(rng: random.Random) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(0, 4)))


class RandomFills:
    """Generator that answers every window with a random, well-formed completion."""

    def __init__(self, rng: random.Random):
        self.rng = rng

    async def generate(self, input_text: str) -> str:
        slots = count_sentinels(input_text)
        fills = [f"Q{self.rng.randint(0, 999)}?"] + [self.rng.choice(["", "", "Next?"]) for _ in range(slots - 1)]
        return render_fills(fills)


@pytest.mark.performance
class TestSentinelOracle:
    def test_render_then_parse(self):
        rng = random.Random(0)
        start = time.perf_counter()
        for _ in range(TRIALS):
            fills = [random_fill(rng) for _ in range(rng.randint(1, 8))]
            assert parse_sentinel_output(render_fills(fills), len(fills)) == fills
        print(f"\nsentinel round trip: {(time.perf_counter() - start) / TRIALS * 1e6:.1f}us per trial")

    def test_training_targets_recover_masked_questions(self):
        """Test every training target parses back to its masked questions and empty placeholder fills."""
        rng = random.Random(7)
        config = PrepConfig()
        for i in range(TRIALS):
            dialog = random_dialog(rng, f"d{i}")
            mask = sample_mask(dialog, config, rng)
            example = serialize_training_example(dialog, mask, config, rng.random() < 0.5, None)

            expected = []
            for index, turn in enumerate(dialog.turns):
                if index in mask.masked_turns:
                    expected.append(turn.question)
                expected.extend([""] * (len(turn.answer.sentences) - 1))

            assert count_sentinels(example.input_text) == example.num_masked_slots == len(expected)
            assert parse_sentinel_output(example.target_text, example.num_masked_slots) == expected

    def test_t5_vocabulary_round_trip(self):
        rng = random.Random(1)
        t5 = SentinelVocabulary("t5")
        for _ in range(TRIALS):
            fills = [random_fill(rng) for _ in range(rng.randint(1, 8))]
            text = render_fills(fills)
            native = t5.to_native(text)
            assert "<S" not in native
            assert t5.from_native(f"<pad> {native} </s>") == text


@pytest.mark.performance
class TestSynthesisOracle:
    async def test_answers_partition_documents(self):
        """Test answer sentences concatenate back to every document, over 500 random documents."""
        rng = random.Random(2)
        for i in range(500):
            document = make_document(f"doc-{i}", [f"s{j}." for j in range(rng.randint(1, 30))])
            config = SynthesisConfig(N=rng.randint(1, 6), include_title=rng.random() < 0.5)

            dialog, trace = await inpaint_document(document, RandomFills(rng), config)

            answers = [sentence for turn in dialog.turns for sentence in turn.answer.sentences]
            assert tuple(answers) == document.sentences
            assert all(1 <= len(turn.answer.sentences) <= config.N for turn in dialog.turns)
            assert trace.consumed_total == len(document.sentences)

    async def test_corpus_with_workers(self):
        rng = random.Random(3)
        documents = [make_document(f"doc-{i}", [f"s{j}." for j in range(rng.randint(1, 20))]) for i in range(200)]

        start = time.perf_counter()
        result = await synthesize_corpus(documents, RandomFills(rng), SynthesisConfig(), workers=16)
        print(f"\nsynthesized {result.stats.turns} turns in {time.perf_counter() - start:.2f}s")

        assert [dialog.id for dialog in result.dialogs] == [document.id for document in documents]
        assert result.stats.failed == 0


@pytest.mark.performance
class TestContrastiveLossOracle:
    def test_permutation_equivariance(self):
        rng = np.random.default_rng(4)
        for _ in range(TRIALS):
            batch, dim = rng.integers(1, 9), rng.integers(1, 7)
            queries, passages = rng.normal(size=(batch, dim)), rng.normal(size=(batch, dim))
            permutation = rng.permutation(batch)

            mean, losses = in_batch_contrastive_loss(queries, passages, 0.05)
            permuted_mean, permuted_losses = in_batch_contrastive_loss(
                queries[permutation], passages[permutation], 0.05
            )

            np.testing.assert_allclose(permuted_losses, losses[permutation], rtol=1e-9, atol=1e-9)
            assert permuted_mean == pytest.approx(mean)

    def test_scale_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(TRIALS):
            batch, dim = rng.integers(1, 9), rng.integers(1, 7)
            queries, passages = rng.normal(size=(batch, dim)), rng.normal(size=(batch, dim))
            scales = rng.uniform(0.01, 100.0, size=(batch, 1))

            _, losses = in_batch_contrastive_loss(queries, passages, 1.0)
            _, scaled = in_batch_contrastive_loss(queries * scales, passages * scales[::-1], 1.0)

            np.testing.assert_allclose(scaled, losses, rtol=1e-7, atol=1e-9)
            assert np.all(losses >= 0.0)

    def test_ranking_ignores_positive_rescaling(self):
        rng = np.random.default_rng(8)
        for _ in range(TRIALS):
            dim = rng.integers(2, 7)
            query, passages = rng.normal(size=dim), rng.normal(size=(rng.integers(1, 15), dim))
            scaled = passages * rng.uniform(0.001, 1000.0, size=(len(passages), 1))

            assert rank_passages(query * rng.uniform(0.001, 1000.0), scaled) == rank_passages(query, passages)


@pytest.mark.performance
class TestMrrOracle:
    def test_matches_exact_fractions(self):
        rng = random.Random(9)
        for _ in range(TRIALS):
            ranks = [rng.choice([None, *range(1, 21)]) for _ in range(rng.randint(1, 30))]
            k = rng.choice([None, *range(1, 21)])
            expected = sum(
                (Fraction(1, rank) for rank in ranks if rank is not None and (k is None or rank <= k)), Fraction(0)
            ) / len(ranks)

            assert mrr_at_k(ranks, k) == pytest.approx(float(expected), abs=1e-12)

    def test_matches_brute_force_ranking(self):
        """Test MRR against ranks found by counting strictly more similar passages."""
        rng = random.Random(6)
        for _ in range(TRIALS):
            dim = rng.randint(2, 5)
            passages = {f"p{i}": [rng.gauss(0, 1) for _ in range(dim)] for i in range(rng.randint(1, 12))}
            queries = {f"q{i}": [rng.gauss(0, 1) for _ in range(dim)] for i in range(rng.randint(1, 6))}
            relevance = {query_id: rng.choice([*passages, "missing"]) for query_id in queries}
            k = rng.choice([None, 1, 3, 5])

            def cosine(a, b):
                return sum(x * y for x, y in zip(a, b, strict=True)) / (math.hypot(*a) * math.hypot(*b))

            expected = 0.0
            for query_id, gold_id in relevance.items():
                if gold_id not in passages:
                    continue
                gold = cosine(queries[query_id], passages[gold_id])
                rank = 1 + sum(1 for vector in passages.values() if cosine(queries[query_id], vector) > gold)
                if k is None or rank <= k:
                    expected += 1 / rank
            expected /= len(relevance)

            assert evaluate_retrieval(queries, passages, relevance, k).mrr_at_k == pytest.approx(expected)


def f_measure(overlap: int, hypothesis_total: int, reference_total: int) -> float:
    if overlap == 0:
        return 0.0
    precision, recall = overlap / hypothesis_total, overlap / reference_total
    return 2 * precision * recall / (precision + recall)


def ngrams(tokens: tuple[str, ...], n: int) -> Counter:
    return Counter(tokens[i : i + n] for i in range(len(tokens) - n + 1))


def lcs_length(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for j, other in enumerate(b):
            current.append(previous[j] + 1 if token == other else max(previous[j + 1], current[j]))
        previous = current
    return previous[-1]


@pytest.mark.performance
class TestRougeOracle:
    def test_exhaustive_grid(self):
        """Test every pair of token sequences up to length 6 over a three-word vocabulary."""
        sequences = [seq for length in range(1, 7) for seq in product("abc", repeat=length)]
        for reference, hypothesis in product(sequences, repeat=2):
            ref_text, hyp_text = " ".join(reference), " ".join(hypothesis)
            for n in (1, 2):
                ref_grams, hyp_grams = ngrams(reference, n), ngrams(hypothesis, n)
                overlap = sum((ref_grams & hyp_grams).values())
                expected = f_measure(overlap, sum(hyp_grams.values()), sum(ref_grams.values()))
                assert rouge_n(ref_text, hyp_text, n) == pytest.approx(expected), (ref_text, hyp_text, n)
            expected = f_measure(lcs_length(reference, hypothesis), len(hypothesis), len(reference))
            assert rouge_l(ref_text, hyp_text) == pytest.approx(expected), (ref_text, hyp_text)
