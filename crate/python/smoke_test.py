#!/usr/bin/env python3
"""Smoke test for the devsum_py extension module.

Builds nothing itself: expects `cargo build -p devsum-py` (or --release) to
have produced the cdylib, copies it under an importable name and exercises
the exported surface end to end.

    cargo build -p devsum-py
    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "crates" / "core" / "tests" / "fixtures"


def import_devsum_py():
    candidates = [
        REPO / "target" / "release" / "libdevsum_py.so",
        REPO / "target" / "debug" / "libdevsum_py.so",
        REPO / "target" / "release" / "libdevsum_py.dylib",
        REPO / "target" / "debug" / "libdevsum_py.dylib",
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit("devsum_py cdylib not found; run `cargo build -p devsum-py` first")
    newest = max(built, key=lambda p: p.stat().st_mtime)
    staging = Path(tempfile.mkdtemp(prefix="devsum_py_"))
    shutil.copy2(newest, staging / "devsum_py.so")
    sys.path.insert(0, str(staging))
    import devsum_py

    return devsum_py


def main():
    dp = import_devsum_py()
    print(f"devsum_py {dp.__version__} loaded")

    # stemming and preprocessing
    assert dp.stem("testing") == "test"
    assert dp.stem("failing") == "fail"
    sentences = dp.preprocess("The tests were failing. Fixed now!")
    assert len(sentences) == 2
    raw, tokens, stems = sentences[0]
    assert raw == "The tests were failing."
    assert stems == ["test", "fail"]

    # syllables and features
    assert dp.count_syllables("table") == 2
    assert dp.count_syllables("code") == 1
    features = dp.extract_features("The cat sat on the mat.")
    assert len(features) == 26
    assert features[0] == 6.0  # word count
    assert features[4] == 1.0  # sentence count
    assert abs(features[22] - 116.145) < 1e-9  # Flesch reading ease

    # cosine similarity
    score, valid = dp.cosine([1.0, 2.0, 3.0], [3.0, 2.0, 1.0])
    assert valid and abs(score - 10.0 / 14.0) < 1e-12
    score, valid = dp.cosine([0.0, 0.0], [1.0, 1.0])
    assert not valid and score == 0.0

    # Mann-Whitney U
    u, p = dp.mann_whitney_u([1.0, 2.0, 3.0], [10.0, 20.0, 30.0])
    assert u == 0.0 and abs(p - 0.1) < 1e-12

    # corpus + summarization
    corpus = dp.Corpus.load(str(FIXTURES / "corpus_week.jsonl"))
    assert len(corpus) == 31
    assert corpus.projects() == ["alpha", "beta"]
    histogram = dict((code, (a, s)) for code, a, s in corpus.type_histogram())
    assert histogram["CM"][0] == 7

    target = (
        "This week we fixed the login redirect loop after session expiry "
        "and added regression tests for the session middleware."
    )
    result = dp.summarize(
        corpus,
        project="alpha",
        window_start="2020-01-01",
        window_end="2020-01-08",
        target_text=target,
        algo="greedy",
        mode="word",
        max_len=5,
        budget_evals=2000,
        seed=7,
    )
    assert result["valid"]
    assert 0.0 < result["score"] <= 1.0
    assert 1 <= len(result["sentences"]) <= 5
    assert result["pool_size"] > 10
    again = dp.summarize(
        corpus,
        project="alpha",
        window_start="2020-01-01",
        window_end="2020-01-08",
        target_text=target,
        algo="rls_restricted",
        mode="word",
        max_len=5,
        budget_evals=2000,
        seed=7,
    )
    repeat = dp.summarize(
        corpus,
        project="alpha",
        window_start="2020-01-01",
        window_end="2020-01-08",
        target_text=target,
        algo="rls_restricted",
        mode="word",
        max_len=5,
        budget_evals=2000,
        seed=7,
    )
    assert again["sids"] == repeat["sids"]
    assert again["score"] == repeat["score"]
    assert not math.isnan(again["score"])

    subset = dp.summarize(
        corpus,
        project="alpha",
        window_start="2020-01-01",
        window_end="2020-01-08",
        target_text=target,
        algo="greedy",
        mode="feature",
        scenario="subset",
        budget_evals=500,
        seed=1,
    )
    assert subset["scenario"] == "subset"
    assert subset["pool_size"] < result["pool_size"]

    print("smoke test passed")


if __name__ == "__main__":
    main()
