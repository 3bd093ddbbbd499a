import json
from pathlib import Path

import pytest

from drskit.clausal import parse_corpus, serialize
from drskit.cli import main
from drskit.corpus import default_spar_form
from drskit.transforms import Level, encode_output, rename_absolute, rename_relative

FIXTURES = Path(__file__).parent / "fixtures"
FEAR = str(FIXTURES / "negated_fear.clf")
PIANO = str(FIXTURES / "piano_duet.clf")

SMALL_TEXT = ('b0 REF e1\nb0 sleep "v.01" e1\n'
              'b0 REF x1\nb0 cat "n.01" x1\nb0 Agent e1 x1\n')


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# check

def test_check_valid_file(capsys):
    assert main(["check", FEAR]) == 0
    out = capsys.readouterr().out
    assert "negated_fear\tVALID" in out
    assert "# 0/1 ill-formed (0.00%)" in out


def test_check_reports_reasons(tmp_path, capsys):
    path = _write(tmp_path, "mixed.clf", "b0 NOT b1\n\nb0 NOT\n")
    assert main(["check", path]) == 0
    out = capsys.readouterr().out
    assert "mixed:0\tINVALID\tDanglingBoxReference" in out
    assert "mixed:1\tINVALID\tSyntaxError" in out
    assert "# 2/2 ill-formed (100.00%)" in out


def test_check_quiet_keeps_only_summary(capsys):
    assert main(["check", "--quiet", FEAR]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ["# 0/1 ill-formed (0.00%)"]


def test_check_json(capsys):
    assert main(["check", "--json", FEAR]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == 1
    assert payload["command"] == "check"
    assert payload["documents"][0]["valid"] is True
    assert payload["invalid"] == 0


# ---------------------------------------------------------------------------
# score

def test_score_self(capsys):
    assert main(["score", "--sys", FEAR, "--gold", FEAR]) == 0
    out = capsys.readouterr().out
    assert "negated_fear\t10\t10\t10\t1.000\t1.000\t1.000" in out
    assert "# matched=10 sys=10 gold=10 P=1.000 R=1.000 F=1.000" in out


def test_score_json(capsys):
    assert main(["score", "--json", "--sys", FEAR, "--gold", FEAR]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == 1
    assert payload["micro"]["f1"] == 1.0
    assert payload["documents"][0]["doc"] == "negated_fear"


def test_score_out_file(tmp_path, capsys):
    out_path = tmp_path / "result.tsv"
    assert main(["score", "--sys", FEAR, "--gold", FEAR,
                 "--out", str(out_path)]) == 0
    assert capsys.readouterr().out == ""
    assert "F=1.000" in out_path.read_text()


def test_score_category(capsys):
    assert main(["score", "--sys", PIANO, "--gold", PIANO,
                 "--category", "operators"]) == 0
    assert "# matched=5 sys=5 gold=5" in capsys.readouterr().out


def test_score_by_length(tmp_path, capsys):
    lengths = _write(tmp_path, "lengths.txt", "4\n")
    assert main(["score", "--sys", FEAR, "--gold", FEAR,
                 "--by-length", lengths]) == 0
    out = capsys.readouterr().out
    assert "# length=4 mean_F=1.000 n=1 low-support" in out


def test_score_bad_length_file(tmp_path, capsys):
    lengths = _write(tmp_path, "lengths.txt", "four\n")
    assert main(["score", "--sys", FEAR, "--gold", FEAR,
                 "--by-length", lengths]) == 2
    assert "error:" in capsys.readouterr().err


def test_score_significance(capsys):
    assert main(["score", "--json", "--sys", FEAR, "--gold", FEAR,
                 "--significance", FEAR]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["significance"]["p_value"] == 1.0
    assert payload["significance"]["significant"] is False


def test_score_document_count_mismatch(tmp_path, capsys):
    two_docs = _write(tmp_path, "two.clf", SMALL_TEXT + "\n" + SMALL_TEXT)
    assert main(["score", "--sys", FEAR, "--gold", two_docs]) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# rewrite

def test_rewrite_absolute_matches_library(capsys):
    assert main(["rewrite", FEAR, "--scheme", "absolute"]) == 0
    out = capsys.readouterr().out
    form = parse_corpus(Path(FEAR).read_text())[0]
    assert out == serialize(rename_absolute(form))


def test_rewrite_relative_round_trip(tmp_path, capsys):
    relative = tmp_path / "relative.clf"
    assert main(["rewrite", FEAR, "--scheme", "relative",
                 "--out", str(relative)]) == 0
    assert main(["rewrite", str(relative), "--scheme", "standard"]) == 0
    restored = parse_corpus(capsys.readouterr().out)[0]
    original = parse_corpus(Path(FEAR).read_text())[0]
    assert serialize(rename_absolute(restored)) == serialize(rename_absolute(original))


def test_rewrite_rejects_invalid_input(tmp_path, capsys):
    path = _write(tmp_path, "bad.clf", "b0 NOT b1\n")
    assert main(["rewrite", path, "--scheme", "absolute"]) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# encode / decode

def test_encode_decode_output_round_trip(tmp_path, capsys):
    tokens = tmp_path / "tokens.txt"
    assert main(["encode", FEAR, "--side", "output", "--level", "word",
                 "--out", str(tokens)]) == 0
    assert main(["decode", str(tokens), "--side", "output",
                 "--level", "word"]) == 0
    assert capsys.readouterr().out == Path(FEAR).read_text()


def test_encode_decode_input_round_trip(tmp_path, capsys):
    sentences = "Tom plays piano\nAnna sings\n"
    sent_path = _write(tmp_path, "sentences.txt", sentences)
    encoded = tmp_path / "encoded.txt"
    assert main(["encode", sent_path, "--side", "input", "--level", "charword",
                 "--casing", "feature", "--out", str(encoded)]) == 0
    assert main(["decode", str(encoded), "--side", "input",
                 "--level", "charword", "--casing", "feature"]) == 0
    assert capsys.readouterr().out == sentences


def test_charword_output_side_is_a_usage_error(capsys):
    assert main(["encode", FEAR, "--side", "output", "--level", "charword"]) == 1
    assert "input side only" in capsys.readouterr().err


def test_decode_output_reports_bad_clauses(tmp_path, capsys):
    path = _write(tmp_path, "tokens.txt", "b0 REF x1 SEP ???\n")
    assert main(["decode", path, "--side", "output", "--level", "word"]) == 2
    captured = capsys.readouterr()
    assert "decode error in document 0" in captured.err
    assert "b0 REF x1" in captured.out


# ---------------------------------------------------------------------------
# baseline

def test_baseline_spar(tmp_path, capsys):
    sent_path = _write(tmp_path, "sentences.txt", "one sentence\nanother\n")
    assert main(["baseline", sent_path, "--kind", "spar"]) == 0
    forms = parse_corpus(capsys.readouterr().out)
    assert len(forms) == 2
    assert forms[0] == forms[1] == default_spar_form()


def test_baseline_spar_custom_form(tmp_path, capsys):
    sent_path = _write(tmp_path, "sentences.txt", "one sentence\n")
    form_path = _write(tmp_path, "form.clf", SMALL_TEXT)
    assert main(["baseline", sent_path, "--kind", "spar",
                 "--default-form", form_path]) == 0
    forms = parse_corpus(capsys.readouterr().out)
    assert forms == parse_corpus(SMALL_TEXT)


def test_baseline_simspar(tmp_path, capsys):
    train = _write(tmp_path, "train.txt",
                   'a cat sleeps\nb0 REF x1\nb0 cat "n.01" x1\n\n'
                   'a dog runs\nb0 REF x1\nb0 dog "n.01" x1\n')
    emb = _write(tmp_path, "emb.txt",
                 "cat 1.0 0.0\nsleeps 1.0 0.0\ndog 0.0 1.0\nruns 0.0 1.0\n")
    sent_path = _write(tmp_path, "sentences.txt", "the dog\nthe cat sleeps\n")
    assert main(["baseline", sent_path, "--kind", "simspar",
                 "--train", train, "--emb", emb]) == 0
    forms = parse_corpus(capsys.readouterr().out)
    assert forms[0].clauses[1].op == "dog"
    assert forms[1].clauses[1].op == "cat"


def test_baseline_simspar_needs_train_and_emb(tmp_path, capsys):
    sent_path = _write(tmp_path, "sentences.txt", "x\n")
    assert main(["baseline", sent_path, "--kind", "simspar"]) == 1
    assert "needs --train and --emb" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# phenomena / stats

def test_phenomena_self(capsys):
    assert main(["phenomena", "--sys", FEAR, "--gold", FEAR]) == 0
    out = capsys.readouterr().out
    assert "NegationModals\t1\t1\t1\t1\texact" in out
    assert "ScopeAmbiguity\t0\t0\t0\t0\tapprox" in out


def test_phenomena_json(capsys):
    assert main(["phenomena", "--json", "--sys", PIANO, "--gold", PIANO]) == 0
    payload = json.loads(capsys.readouterr().out)
    relation = payload["phenomena"]["DiscourseRelImp"]
    assert relation["gold"] == relation["successes"] == 1
    assert relation["approximate"] is False


def test_stats(tmp_path, capsys):
    sent_path = _write(tmp_path, "sentences.txt", "tom is not afraid\n")
    assert main(["stats", FEAR, sent_path]) == 0
    out = capsys.readouterr().out
    assert "documents\t1" in out
    assert "tokens\t4" in out
    assert "avg_tokens_per_sentence\t4.00" in out
    assert "NegationModals\t1\texact" in out


# ---------------------------------------------------------------------------
# pipeline

def _token_line(form, scheme="relative"):
    renamed = rename_relative(form) if scheme == "relative" else rename_absolute(form)
    return " ".join(encode_output(renamed, Level.WORD).tokens)


def test_pipeline_identity(tmp_path, capsys):
    form = parse_corpus(Path(FEAR).read_text())[0]
    sys_path = _write(tmp_path, "tokens.txt", _token_line(form) + "\n")
    assert main(["pipeline", "--sys", sys_path, "--gold", FEAR,
                 "--level", "word", "--scheme", "relative"]) == 0
    out = capsys.readouterr().out
    assert "tokens\tok\t10\t10\t10\t1.000" in out
    assert "F=1.000 ill=0/1 (0.00%) syntactic=0 semantic=0" in out


def test_pipeline_flags_syntactic_failures(tmp_path, capsys):
    form = parse_corpus(Path(FEAR).read_text())[0]
    gold_path = _write(tmp_path, "gold.clf",
                       Path(FEAR).read_text() + "\n" + Path(FEAR).read_text())
    sys_path = _write(tmp_path, "tokens.txt",
                      _token_line(form) + "\n???\n")
    assert main(["pipeline", "--sys", sys_path, "--gold", gold_path,
                 "--level", "word", "--scheme", "relative"]) == 0
    out = capsys.readouterr().out
    assert "tokens:1\tsyntactic\t0\t0\t10\t0.000" in out
    assert "ill=1/2 (50.00%) syntactic=1 semantic=0" in out


def test_pipeline_flags_semantic_failures(tmp_path, capsys):
    gold_path = _write(tmp_path, "gold.clf", SMALL_TEXT)
    sys_path = _write(tmp_path, "tokens.txt", "b0 NOT b1\n")
    assert main(["pipeline", "--sys", sys_path, "--gold", gold_path,
                 "--level", "word", "--scheme", "standard"]) == 0
    out = capsys.readouterr().out
    assert "tokens\tsemantic\t0\t1\t3\t0.000" in out
    assert "semantic=1" in out


def test_pipeline_alignment_checked(tmp_path, capsys):
    sys_path = _write(tmp_path, "tokens.txt", "b0 REF x1\nb0 REF x1\n")
    assert main(["pipeline", "--sys", sys_path, "--gold", FEAR,
                 "--level", "word"]) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# harness behaviour

def test_missing_file_is_a_data_error(capsys):
    assert main(["check", "/nonexistent/path.clf"]) == 2
    assert "error:" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == 1
    assert main(["rewrite", FEAR, "--scheme", "bogus"]) == 1
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert main(["score", "--help"]) == 0
    capsys.readouterr()


def test_repeated_runs_are_byte_identical(capsys):
    assert main(["score", "--json", "--sys", PIANO, "--gold", PIANO,
                 "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert main(["score", "--json", "--sys", PIANO, "--gold", PIANO,
                 "--seed", "7"]) == 0
    assert capsys.readouterr().out == first
