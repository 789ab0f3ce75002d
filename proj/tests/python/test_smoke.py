"""Smoke tests for the compiled videocot module."""

import math

import pytest

import videocot as vc


def test_frame_normalization_endpoints():
    assert vc.normalize_frame_index(0, 64) == 0
    assert vc.normalize_frame_index(63, 64) == 31
    assert vc.normalize_frame_index(32, 64) == 16  # round(32*31/63)
    assert vc.normalize_frame_index(0, 1) == 0
    with pytest.raises(ValueError):
        vc.normalize_frame_index(64, 64)


def test_denormalize_round_trip():
    lo, hi = vc.denormalize_span((0, 31), 64)
    assert (lo, hi) == (0, 63)
    lo, hi = vc.denormalize_span((16, 16), 64)
    assert lo <= 32 <= hi
    assert vc.normalize_frame_index(lo, 64) == 16
    assert vc.normalize_frame_index(hi, 64) == 16


def test_metric_kernels():
    assert vc.box_iou((0, 0, 2, 2), (0, 0, 2, 2)) == pytest.approx(1.0)
    assert vc.box_iou((0, 0, 2, 2), (1, 1, 3, 3)) == pytest.approx(1 / 7)
    assert vc.temporal_iou((5, 10), (8, 12)) == pytest.approx(3 / 8)
    assert vc.keyframe_recall((5, 10), [3, 6, 9, 14]) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        vc.keyframe_recall((5, 10), [])


def test_program_canonicalization_and_validation():
    code = 'clip = trim(video,"after taking the food")\nanswer(query(clip,question))\n'
    canonical = vc.canonical_program(code)
    assert canonical == vc.canonical_program(canonical)  # idempotent
    bindings = vc.validate_program(code)
    assert [b["sub_task"] for b in bindings] == ["ground", "qa"]
    with pytest.raises(ValueError):
        vc.canonical_program("import os\n")
    with pytest.raises(ValueError):
        vc.validate_program("answer(ghost)\n")


def test_extract_code_fenced():
    raw = "Here you go:\n```python\nanswer(\"yes\")\n```"
    assert vc.extract_code(raw) == 'answer("yes")\n'
    with pytest.raises(ValueError):
        vc.extract_code("no program in this prose")


def test_rationale_rendering_round_trip():
    text = f"the clip {vc.render_span((5, 12))} shows {vc.render_box((1, 2, 3.5, 4))}"
    parsed = vc.parse_rationale(text)
    assert parsed["parse_ok"]
    assert parsed["intervals"] == [(5, 12)]
    assert parsed["boxes"] == [(1.0, 2.0, 3.5, 4.0)]
    assert not vc.parse_rationale("nothing to see here")["parse_ok"]


def test_mc_letter_and_text_match():
    options = ["the book", "the laptop"]
    assert vc.mc_answer_letter("(B)", options) == "B"
    assert vc.mc_answer_letter("the laptop", options) == "B"
    assert vc.mc_answer_letter("nope", options) is None
    assert vc.best_text_match(options, "a laptop") == "the laptop"
    assert vc.token_f1("a b", "a b") == pytest.approx(1.0)


def test_suffix_constants():
    assert vc.MC_ANSWER_SUFFIX.startswith("Answer with the option's letter")
    assert vc.OE_ANSWER_SUFFIX == "Answer in one word or phrase."
    assert vc.RATIONALE_SUFFIX == "Explain the rationale to answer the question."
    assert vc.NORM_FRAME_COUNT == 32


def test_offline_pipeline_end_to_end(tmp_path):
    corpus_dir = tmp_path / "corpus"
    out_dir = tmp_path / "out"
    summary = vc.generate_synthetic_corpus(corpus_dir, videos=6, qa_per_video=3, seed=4)
    assert summary["videos"] == 6
    assert summary["samples"] == 18

    funnel = vc.run_generate(corpus_dir, out_dir, workers=2)
    row = funnel["synthetic"]
    assert row["labels"] == 18
    assert row["labels"] >= row["executed_ok"] >= row["answer_passed"] >= row["coherence_passed"]
    assert row["coherence_passed"] == 18  # oracle agents + stub judges
    assert (out_dir / "traces.jsonl").exists()

    dataset = vc.emit_dataset(corpus_dir, out_dir, tmp_path / "data", 0.5)
    assert dataset["qa_pairs"] == 18
    assert dataset["answer_samples"] == 18
    assert dataset["rationale_samples"] == 18
    assert math.isclose(dataset["lambda"], 0.5)
