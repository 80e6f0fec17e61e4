from .rouge import RougeScores, qa_overlap_report, render_rouge_table, rouge_l, rouge_n
from .stats import HISTOGRAM_BUCKETS, CorpusStats, corpus_stats, render_stats_table
from .tables import render_table

__all__ = [
    "HISTOGRAM_BUCKETS",
    "CorpusStats",
    "RougeScores",
    "corpus_stats",
    "qa_overlap_report",
    "render_rouge_table",
    "render_stats_table",
    "render_table",
    "rouge_l",
    "rouge_n",
]
