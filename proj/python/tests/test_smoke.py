import math
import os
import pathlib

import pytest

import nbayes

DATA = pathlib.Path(os.environ.get("NBAYES_TEST_DATA_DIR", pathlib.Path(__file__).parents[2] / "tests" / "data"))

SMS = [
    ("spam", "WIN a FREE prize now"),
    ("ham", "see you at lunch"),
    ("spam", "free entry claim your prize"),
    ("ham", "are you coming to lunch today"),
    ("ham", "call me later"),
]


def toy():
    rows = [r.split(",") for r in (DATA / "toy_shapes.csv").read_text().split()]
    return [r[1:] for r in rows], [r[0] for r in rows]


def test_pipeline():
    assert nbayes.tokenize("Hello, HELLO hello!") == ["hello"] * 3
    assert nbayes.porter_stem("swimming") == "swim"
    assert nbayes.ngrams(["a", "swimmer", "likes"], 2) == ["a swimmer", "swimmer likes"]
    cfg = nbayes.PipelineConfig(stemming=True)
    assert nbayes.run_pipeline("A swimmer likes swimming, thus he swims.", cfg) == [
        "a", "swimmer", "like", "swim", "thu", "he", "swim",
    ]
    assert nbayes.run_pipeline("a b the c", stop_words={"the", "a"}) == ["b", "c"]
    with pytest.raises(ValueError):
        nbayes.PipelineConfig(ngram_size=0)


def test_vectorizer():
    docs = [nbayes.tokenize(t) for t in ("Each state has its own laws.", "Every country has its own culture.")]
    vocab = nbayes.Vocabulary.build(docs)
    assert len(vocab) == 9
    v = nbayes.vectorize(docs[1], vocab, nbayes.WeightingMode.binary)
    assert sorted(vocab.token(i) for i in v.entries) == sorted(["has", "its", "own", "every", "country", "culture"])
    assert nbayes.idf(vocab, vocab.find("state")) == pytest.approx(math.log(2))


def test_toy_categorical():
    samples, labels = toy()
    model = nbayes.Model.train_categorical(samples, labels, alpha=0.0)
    assert model.variant == "categorical"
    assert model.priors == pytest.approx([7 / 12, 5 / 12], abs=1e-12)
    report = model.posterior(["blue", "square"])
    assert report.predicted == "+"
    assert math.exp(report.log_scores[0]) == pytest.approx(5 / 28, abs=1e-12)
    assert model.with_priors([0.5, 0.5]).predict(["blue", "square"]) == "-"
    assert model.posterior(["yellow", "square"]).degenerate_evidence


def test_text_model_round_trip(tmp_path):
    model = nbayes.Model.train_text(SMS, variant="multinomial", weighting="raw_count")
    assert model.predict("free prize") == "spam"
    path = tmp_path / "m.json"
    model.save(path)
    loaded = nbayes.Model.load(path)
    for text in ("free prize", "lunch later", "nothing known here"):
        assert loaded.posterior(text).log_scores == model.posterior(text).log_scores
    report = loaded.evaluate([t for _, t in SMS], [l for l, _ in SMS])
    assert report["n_test"] == 5
    assert 0.0 <= report["accuracy"] <= 1.0


def test_bernoulli_and_gaussian():
    model = nbayes.Model.train_text(SMS, variant="bernoulli", weighting="binary")
    assert model.predict("free prize") == "spam"
    with pytest.raises(ValueError):
        nbayes.Model.train_text(SMS, variant="bernoulli", weighting="raw_count")

    g = nbayes.Model.train_gaussian([[4.0], [6.0], [3.0], [3.5]], ["a", "a", "b", "b"])
    assert g.predict([5.0]) == "a"
    assert sum(g.posterior([3.2]).posteriors) == pytest.approx(1.0)


def test_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format_version": 2}')
    with pytest.raises(nbayes.FormatError):
        nbayes.Model.load(bad)
    with pytest.raises(OSError):
        nbayes.Model.load(tmp_path / "missing.json")
    with pytest.raises(nbayes.ParseError):
        nbayes.parse_corpus("ham\tok\nno tab here\n")


def test_split():
    train, test = nbayes.split_indices(10, 0.2, 42)
    assert len(train) == 8 and len(test) == 2
    assert sorted(train + test) == list(range(10))
    assert nbayes.split_indices(10, 0.2, 42) == (train, test)
