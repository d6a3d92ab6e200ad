import pytest
from hypothesis import given
from hypothesis import strategies as st

from queryspell import EvalRecord, LoadError, evaluate, load_eval_records
from queryspell.evaluate import format_report, normalize_query

# Hand-counted: 10 records; 6 misspelled inputs of which 5 corrected to
# gold; 6 system changes of which 5 correct; 8 predictions exactly gold.
FIXTURE = [
    EvalRecord("muzeem", "museum", "museum"),
    EvalRecord("crative cloud", "creative cloud", "creative cloud"),
    EvalRecord("photoshp", "photoshop", "photoshop"),
    EvalRecord("glaicer park", "glacier park", "glacier park"),
    EvalRecord(",edal icon", "medal icon", "medal icon"),
    EvalRecord("frsh flowers", "fresh flowers", "frsh flowers"),
    EvalRecord("museum", "museum", "museum"),
    EvalRecord("creative cloud", "creative cloud", "creative cloud"),
    EvalRecord("icon", "icon", "icon"),
    EvalRecord("express", "express", "espresso"),
]


def test_hand_counted_fixture():
    report = evaluate(FIXTURE)
    assert report.accuracy == 0.8
    assert report.recall == pytest.approx(5 / 6)
    assert report.precision == pytest.approx(5 / 6)
    assert report.total == 10
    assert report.misspelled == 6
    assert report.changed == 6


def test_all_correct_nothing_changed():
    records = [EvalRecord(q, q, q) for q in ("museum", "icon", "park")]
    report = evaluate(records)
    assert report.accuracy == 1.0
    assert report.recall is None
    assert report.precision is None


def test_echo_system_half_misspelled():
    records = [EvalRecord("museum", "museum", "museum"),
               EvalRecord("muzeem", "museum", "muzeem")]
    report = evaluate(records)
    assert report.accuracy == 0.5
    assert report.recall == 0.0
    assert report.precision is None


def test_empty_records_rejected():
    with pytest.raises(ValueError):
        evaluate([])


def test_comparison_is_normalized():
    record = EvalRecord("Café  Paris", "café paris", "CAFÉ PARIS")
    assert not record.input_was_misspelled
    assert record.prediction_correct
    assert not record.system_changed


records_strategy = st.lists(
    st.tuples(st.sampled_from(["aa", "bb", "cc"]),
              st.sampled_from(["aa", "bb"]),
              st.sampled_from(["aa", "bb", "cc"])).map(lambda t: EvalRecord(*t)),
    min_size=1, max_size=30)


@given(records_strategy)
def test_metrics_bounded(records):
    report = evaluate(records)
    assert 0.0 <= report.accuracy <= 1.0
    for value in (report.precision, report.recall):
        assert value is None or 0.0 <= value <= 1.0


@given(records_strategy, st.randoms())
def test_permutation_invariance(records, rng):
    before = evaluate(records)
    shuffled = list(records)
    rng.shuffle(shuffled)
    assert evaluate(shuffled) == before


@given(st.lists(st.tuples(st.sampled_from(["aa", "bb", "cc"]),
                          st.sampled_from(["aa", "bb"])),
                min_size=1, max_size=30))
def test_perfect_system_scores_one(pairs):
    records = [EvalRecord(inp, gold, gold) for inp, gold in pairs]
    report = evaluate(records)
    assert report.accuracy == 1.0
    assert report.precision in (None, 1.0)
    assert report.recall in (None, 1.0)


class TestIO:
    def test_three_column_file(self, tmp_path):
        path = tmp_path / "eval.tsv"
        path.write_text("muzeem\tmuseum\tmuseum\nicon\ticon\ticon\n",
                        encoding="utf-8")
        records = load_eval_records(path)
        assert evaluate(records).accuracy == 1.0

    def test_two_column_file_needs_predictor(self, tmp_path):
        path = tmp_path / "eval.tsv"
        path.write_text("muzeem\tmuseum\n", encoding="utf-8")
        with pytest.raises(LoadError):
            load_eval_records(path)
        records = load_eval_records(path, predictor=lambda q: "museum")
        assert evaluate(records).accuracy == 1.0

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "eval.tsv"
        path.write_text("too\tmany\tcolumns\there\n", encoding="utf-8")
        with pytest.raises(LoadError) as err:
            load_eval_records(path)
        assert err.value.line == 1

    def test_report_formatting(self):
        text = format_report(evaluate(FIXTURE))
        assert "0.8000" in text
        assert "0.8333" in text

    def test_normalize_query(self):
        assert normalize_query("  Creative   CLOUD ") == "creative cloud"
