"""Command-line entry point.

Subcommands: check, score, rewrite, encode, decode, baseline, phenomena,
stats, pipeline.  Data goes to stdout (or --out); diagnostics to stderr.
Exit codes: 0 success, 1 usage error, 2 malformed input, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

from .clausal import (ClausalError, ClausalForm, DEFAULT_TABLES, OperatorTables,
                      iter_blocks, parse_corpus, serialize, serialize_corpus)
from .checker import check, check_text
from .matcher import (CategoryFilter, LengthMismatch, fscore, load_synsets,
                      score_category, score_corpus, score_pair, significance,
                      score_by_length, _scored_count)
from .transforms import (Casing, Level, TokenSeq, UnresolvableOffset,
                         decode_input, decode_output, encode_input,
                         encode_output, rename_absolute, rename_relative,
                         restore_relative)
from . import corpus as corpus_tools

SCHEMA_VERSION = 1


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _doc_ids(path: str, count: int) -> list[str]:
    stem = Path(path).stem
    if count == 1:
        return [stem]
    return [f"{stem}:{i}" for i in range(count)]


def _tables(args) -> OperatorTables:
    if getattr(args, "ops_table", None):
        return OperatorTables.from_file(args.ops_table)
    return DEFAULT_TABLES


def _synsets(args) -> Optional[dict[str, str]]:
    if getattr(args, "synsets", None):
        return load_synsets(args.synsets)
    return None


def _emit(args, lines: Sequence[str], payload: dict) -> None:
    if args.json:
        text = json.dumps({"schema": SCHEMA_VERSION, **payload}) + "\n"
    else:
        text = "".join(line + "\n" for line in lines)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt(value: float) -> str:
    return f"{value:.3f}"


# ---------------------------------------------------------------------------
# Subcommands

def cmd_check(args) -> int:
    tables = _tables(args)
    blocks = iter_blocks(_read_text(args.input))
    ids = _doc_ids(args.input, len(blocks))
    rows, docs, invalid = [], [], 0
    for doc_id, block in zip(ids, blocks):
        report = check_text("\n".join(line for _, line in block), tables)
        if report.valid:
            rows.append(f"{doc_id}\tVALID")
        else:
            invalid += 1
            rows.append(f"{doc_id}\tINVALID\t{report.reason.value}\t{report.detail}")
        docs.append({"doc": doc_id, "valid": report.valid,
                     "reason": report.reason.value if report.reason else None,
                     "detail": report.detail})
    total = len(blocks)
    pct = 100.0 * invalid / total if total else 0.0
    summary = f"# {invalid}/{total} ill-formed ({pct:.2f}%)"
    _emit(args, ([summary] if args.quiet else rows + [summary]),
          {"command": "check", "documents": docs, "total": total,
           "invalid": invalid, "ill_formed_pct": pct})
    return 0


def _result_payload(result) -> dict:
    return {"matched": result.matched, "sys_total": result.sys_total,
            "gold_total": result.gold_total, "precision": result.precision,
            "recall": result.recall, "f1": result.f1}


def cmd_score(args) -> int:
    tables, synsets = _tables(args), _synsets(args)
    sys_forms = parse_corpus(_read_text(args.sys), tables)
    gold_forms = parse_corpus(_read_text(args.gold), tables)
    ids = _doc_ids(args.sys, len(sys_forms))
    payload: dict = {"command": "score"}
    rows: list[str] = []

    if args.category != CategoryFilter.ALL_CLAUSES.value:
        category = CategoryFilter(args.category)
        result = score_category(sys_forms, gold_forms, category,
                                restarts=args.restarts, seed=args.seed,
                                synsets=synsets)
        payload["category"] = category.value
        per_doc = []
    else:
        result, per_doc = score_corpus(sys_forms, gold_forms,
                                       restarts=args.restarts, seed=args.seed,
                                       synsets=synsets)
        docs = []
        for doc_id, doc in zip(ids, per_doc):
            rows.append(f"{doc_id}\t{doc.matched}\t{doc.sys_total}\t"
                        f"{doc.gold_total}\t{_fmt(doc.precision)}\t"
                        f"{_fmt(doc.recall)}\t{_fmt(doc.f1)}")
            docs.append({"doc": doc_id, **_result_payload(doc)})
        payload["documents"] = docs

    payload["micro"] = _result_payload(result)
    summary = [f"# matched={result.matched} sys={result.sys_total} "
               f"gold={result.gold_total} P={_fmt(result.precision)} "
               f"R={_fmt(result.recall)} F={_fmt(result.f1)}"]

    if args.by_length:
        try:
            lengths = [int(line) for line in _read_text(args.by_length).split()]
        except ValueError as exc:
            raise ClausalError(f"bad length file {args.by_length}: {exc}") from None
        buckets = score_by_length(sys_forms, gold_forms, lengths,
                                  restarts=args.restarts, seed=args.seed,
                                  synsets=synsets)
        payload["by_length"] = {
            str(length): {"mean_f1": b.mean_f1, "count": b.count,
                          "low_support": b.low_support}
            for length, b in buckets.items()}
        for length, b in buckets.items():
            flag = "low-support" if b.low_support else "ok"
            summary.append(f"# length={length} mean_F={_fmt(b.mean_f1)} "
                           f"n={b.count} {flag}")

    if args.significance:
        other_forms = parse_corpus(_read_text(args.significance), tables)
        _, other_docs = score_corpus(other_forms, gold_forms,
                                     restarts=args.restarts, seed=args.seed,
                                     synsets=synsets)
        a = [(d.matched, d.sys_total, d.gold_total) for d in per_doc]
        b = [(d.matched, d.sys_total, d.gold_total) for d in other_docs]
        sig = significance(a, b, seed=args.seed)
        payload["significance"] = {"p_value": sig.p_value,
                                   "observed": sig.observed,
                                   "repetitions": sig.repetitions,
                                   "significant": sig.significant}
        summary.append(f"# significance p={sig.p_value:.4f} "
                       f"observed={sig.observed:.4f} R={sig.repetitions}")

    _emit(args, (summary if args.quiet else rows + summary), payload)
    return 0


def cmd_rewrite(args) -> int:
    tables = _tables(args)
    forms = parse_corpus(_read_text(args.input), tables)
    if args.scheme == "absolute":
        out = [rename_absolute(f) for f in forms]
    elif args.scheme == "relative":
        out = [rename_relative(f) for f in forms]
    else:
        # Target scheme standard: the input is read as relatively named.
        out = [restore_relative(f) for f in forms]
    text = serialize_corpus(out)
    _emit(args, text.splitlines(),
          {"command": "rewrite", "scheme": args.scheme,
           "documents": [serialize(f).splitlines() for f in out]})
    return 0


def cmd_encode(args) -> int:
    tables = _tables(args)
    level = Level(args.level)
    casing = Casing(args.casing)
    if args.side == "output":
        if level is Level.CHARWORD:
            print("error: charword level applies to the input side only",
                  file=sys.stderr)
            return 1
        forms = parse_corpus(_read_text(args.input), tables)
        lines = [" ".join(encode_output(f, level, tables).tokens) for f in forms]
    else:
        sentences = [s for s in _read_text(args.input).splitlines() if s.strip()]
        lines = [" ".join(encode_input(s, level, casing).tokens)
                 for s in sentences]
    _emit(args, lines, {"command": "encode", "side": args.side,
                        "level": level.value, "sequences": lines})
    return 0


def cmd_decode(args) -> int:
    tables = _tables(args)
    level = Level(args.level)
    casing = Casing(args.casing)
    lines = [s for s in _read_text(args.input).splitlines() if s.strip()]
    if args.side == "output":
        if level is Level.CHARWORD:
            print("error: charword level applies to the input side only",
                  file=sys.stderr)
            return 1
        out_forms, failures = [], 0
        for i, line in enumerate(lines):
            form, errors = decode_output(TokenSeq(tuple(line.split()), level),
                                         level, tables)
            out_forms.append(form)
            for err in errors:
                failures += 1
                print(f"decode error in document {i}: {err}", file=sys.stderr)
        _emit(args, serialize_corpus(out_forms).splitlines(),
              {"command": "decode", "side": "output",
               "documents": [serialize(f).splitlines() for f in out_forms],
               "errors": failures})
        return 2 if failures else 0
    decoded = [decode_input(TokenSeq(tuple(line.split()), level), casing)
               for line in lines]
    _emit(args, decoded, {"command": "decode", "side": "input",
                          "sentences": decoded})
    return 0


def _read_training_pairs(path: str, tables: OperatorTables
                         ) -> list[tuple[str, ClausalForm]]:
    """Blocks separated by blank lines: a sentence line, then clause lines."""
    pairs = []
    for chunk in re.split(r"\n\s*\n", _read_text(path)):
        if not chunk.strip():
            continue
        chunk_lines = chunk.splitlines()
        sentence = chunk_lines[0].strip()
        forms = parse_corpus("\n".join(chunk_lines[1:]), tables)
        if len(forms) != 1:
            raise ClausalError(f"training block for {sentence!r} holds "
                               f"{len(forms)} clause documents, expected 1")
        pairs.append((sentence, forms[0]))
    return pairs


def cmd_baseline(args) -> int:
    tables = _tables(args)
    sentences = [s for s in _read_text(args.input).splitlines() if s.strip()]
    if args.kind == "spar":
        form = None
        if args.default_form:
            form = parse_corpus(_read_text(args.default_form), tables)[0]
        parser = corpus_tools.spar(form)
    else:
        if not args.train or not args.emb:
            print("error: simspar needs --train and --emb", file=sys.stderr)
            return 1
        stopwords = corpus_tools.load_stopwords(args.stopwords)
        emb = corpus_tools.load_embeddings(args.emb, stopwords=stopwords)
        parser = corpus_tools.sim_spar(_read_training_pairs(args.train, tables),
                                       emb)
    forms = [parser(s) for s in sentences]
    _emit(args, serialize_corpus(forms).splitlines(),
          {"command": "baseline", "kind": args.kind,
           "documents": [serialize(f).splitlines() for f in forms]})
    return 0


def cmd_phenomena(args) -> int:
    tables, synsets = _tables(args), _synsets(args)
    sys_forms = parse_corpus(_read_text(args.sys), tables)
    gold_forms = parse_corpus(_read_text(args.gold), tables)
    if len(sys_forms) != len(gold_forms):
        raise LengthMismatch(f"{len(sys_forms)} system documents vs "
                             f"{len(gold_forms)} gold documents")
    totals = {kind: {"gold": 0, "sys": 0, "docs": 0, "successes": 0}
              for kind in corpus_tools.Phenomenon}
    for i, (sys_form, gold_form) in enumerate(zip(sys_forms, gold_forms)):
        gold_counts = corpus_tools.detect_phenomena(gold_form)
        sys_report = check(sys_form)
        sys_counts = (corpus_tools.detect_phenomena(sys_form, report=sys_report)
                      if sys_report.valid else dict.fromkeys(corpus_tools.Phenomenon, 0))
        result = score_pair(sys_form, gold_form, restarts=args.restarts,
                            seed=f"{args.seed}:{i}", synsets=synsets,
                            sys_report=sys_report)
        for kind in corpus_tools.Phenomenon:
            totals[kind]["gold"] += gold_counts[kind]
            totals[kind]["sys"] += sys_counts[kind]
            if gold_counts[kind]:
                totals[kind]["docs"] += 1
                if corpus_tools.judge_phenomenon(sys_form, gold_form, kind,
                                                 result.mapping, synsets=synsets):
                    totals[kind]["successes"] += 1
    rows = []
    for kind in corpus_tools.Phenomenon:
        t = totals[kind]
        flag = "approx" if kind in corpus_tools.APPROXIMATE else "exact"
        rows.append(f"{kind.value}\t{t['gold']}\t{t['sys']}\t{t['docs']}\t"
                    f"{t['successes']}\t{flag}")
    _emit(args, rows,
          {"command": "phenomena",
           "phenomena": {kind.value: {**totals[kind],
                                      "approximate": kind in corpus_tools.APPROXIMATE}
                         for kind in corpus_tools.Phenomenon}})
    return 0


def cmd_stats(args) -> int:
    tables = _tables(args)
    forms = parse_corpus(_read_text(args.input), tables)
    sentences = [s for s in _read_text(args.sentences).splitlines() if s.strip()]
    stats = corpus_tools.corpus_stats(forms, sentences)
    rows = [f"documents\t{stats.documents}",
            f"sentences\t{stats.sentences}",
            f"tokens\t{stats.tokens}",
            f"avg_tokens_per_sentence\t{stats.avg_tokens_per_sentence:.2f}"]
    for kind in corpus_tools.Phenomenon:
        flag = "approx" if kind in stats.approximate else "exact"
        rows.append(f"{kind.value}\t{stats.phenomena[kind]}\t{flag}")
    _emit(args, rows,
          {"command": "stats", "documents": stats.documents,
           "sentences": stats.sentences, "tokens": stats.tokens,
           "avg_tokens_per_sentence": stats.avg_tokens_per_sentence,
           "phenomena": {k.value: v for k, v in stats.phenomena.items()},
           "approximate": sorted(k.value for k in stats.approximate)})
    return 0


def cmd_pipeline(args) -> int:
    tables, synsets = _tables(args), _synsets(args)
    gold_forms = parse_corpus(_read_text(args.gold), tables)
    token_lines = [s for s in _read_text(args.sys).splitlines() if s.strip()]
    if len(token_lines) != len(gold_forms):
        raise LengthMismatch(f"{len(token_lines)} system documents vs "
                             f"{len(gold_forms)} gold documents")
    level = Level(args.level)
    ids = _doc_ids(args.sys, len(token_lines))

    rows, docs = [], []
    matched = sys_total = gold_total = 0
    syntactic = semantic = 0
    for i, (doc_id, line, gold_form) in enumerate(zip(ids, token_lines,
                                                      gold_forms)):
        status = "ok"
        form, errors = decode_output(TokenSeq(tuple(line.split()), level),
                                     level, tables)
        if errors:
            status = "syntactic"
        elif args.scheme == "relative":
            try:
                form = restore_relative(form)
            except UnresolvableOffset:
                status = "syntactic"
        if status == "syntactic":
            doc_m, doc_s, doc_g = 0, _scored_count(form), _scored_count(gold_form)
            f1 = fscore(doc_m, doc_s, doc_g)[2]
        else:
            report = check(form)
            if not report.valid:
                status = "semantic"
            result = score_pair(form, gold_form, restarts=args.restarts,
                                seed=f"{args.seed}:{i}", synsets=synsets,
                                sys_report=report)
            doc_m, doc_s, doc_g = result.matched, result.sys_total, result.gold_total
            f1 = result.f1
        syntactic += status == "syntactic"
        semantic += status == "semantic"
        matched += doc_m
        sys_total += doc_s
        gold_total += doc_g
        rows.append(f"{doc_id}\t{status}\t{doc_m}\t{doc_s}\t{doc_g}\t{_fmt(f1)}")
        docs.append({"doc": doc_id, "status": status, "matched": doc_m,
                     "sys_total": doc_s, "gold_total": doc_g, "f1": f1})

    precision, recall, f1 = fscore(matched, sys_total, gold_total)
    total = len(token_lines)
    ill = syntactic + semantic
    pct = 100.0 * ill / total if total else 0.0
    summary = (f"# docs={total} P={_fmt(precision)} R={_fmt(recall)} "
               f"F={_fmt(f1)} ill={ill}/{total} ({pct:.2f}%) "
               f"syntactic={syntactic} semantic={semantic}")
    _emit(args, ([summary] if args.quiet else rows + [summary]),
          {"command": "pipeline", "documents": docs,
           "micro": {"matched": matched, "sys_total": sys_total,
                     "gold_total": gold_total, "precision": precision,
                     "recall": recall, "f1": f1},
           "ill_formed": {"total": ill, "syntactic": syntactic,
                          "semantic": semantic, "pct": pct}})
    return 0


# ---------------------------------------------------------------------------
# Parser wiring

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1,
                        help="base random seed (default 1)")
    common.add_argument("--ops-table", metavar="PATH",
                        help="operator table file overriding the built-ins")
    common.add_argument("--quiet", action="store_true",
                        help="suppress per-document lines and warnings")
    common.add_argument("--json", action="store_true",
                        help="emit one JSON object instead of TSV lines")
    common.add_argument("--out", metavar="PATH",
                        help="write data there instead of stdout")

    scoring = argparse.ArgumentParser(add_help=False)
    scoring.add_argument("--restarts", type=int, default=20,
                         help="hill-climbing restarts per document (default 20)")
    scoring.add_argument("--synsets", metavar="PATH",
                         help="tab-separated sense-to-synset table")

    parser = argparse.ArgumentParser(
        prog="drskit",
        description="Parse, validate, transform, and score clausal forms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common],
                       help="validate documents and report verdicts")
    p.add_argument("input", help="clause file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("score", parents=[common, scoring],
                       help="clause-level F-score of system against gold")
    p.add_argument("--sys", required=True, help="system clause file")
    p.add_argument("--gold", required=True, help="gold clause file")
    p.add_argument("--category", default=CategoryFilter.ALL_CLAUSES.value,
                   choices=[c.value for c in CategoryFilter],
                   help="restrict counting or apply an oracle rewrite")
    p.add_argument("--by-length", metavar="PATH",
                   help="file of per-document sentence lengths")
    p.add_argument("--significance", metavar="PATH",
                   help="second system file for a paired significance test")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("rewrite", parents=[common],
                       help="rename variables between naming schemes")
    p.add_argument("input", help="clause file")
    p.add_argument("--scheme", required=True,
                   choices=["absolute", "relative", "standard"],
                   help="target scheme; standard restores relative input")
    p.set_defaults(func=cmd_rewrite)

    for name, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        p = sub.add_parser(name, parents=[common],
                           help=f"{name} token sequences")
        p.add_argument("input",
                       help="clause file or sentence/token-sequence file")
        p.add_argument("--side", required=True, choices=["input", "output"],
                       help="sentence side or clause side")
        p.add_argument("--level", required=True,
                       choices=[l.value for l in Level])
        p.add_argument("--casing", default=Casing.KEEP.value,
                       choices=[c.value for c in Casing])
        p.set_defaults(func=func)

    p = sub.add_parser("baseline", parents=[common],
                       help="run a baseline parser over sentences")
    p.add_argument("input", help="sentence file, one sentence per line")
    p.add_argument("--kind", required=True, choices=["spar", "simspar"])
    p.add_argument("--train", metavar="PATH",
                   help="training pairs: sentence line + clause block per doc")
    p.add_argument("--emb", metavar="PATH", help="word embedding file")
    p.add_argument("--stopwords", metavar="PATH",
                   help="stopword file (default list shipped)")
    p.add_argument("--default-form", metavar="PATH",
                   help="clause file overriding the shipped constant output")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("phenomena", parents=[common, scoring],
                       help="detect and judge semantic phenomena")
    p.add_argument("--sys", required=True, help="system clause file")
    p.add_argument("--gold", required=True, help="gold clause file")
    p.set_defaults(func=cmd_phenomena)

    p = sub.add_parser("stats", parents=[common],
                       help="corpus size and phenomenon counts")
    p.add_argument("input", help="clause file")
    p.add_argument("sentences", help="sentence file aligned with documents")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("pipeline", parents=[common, scoring],
                       help="decode, restore, check, and score model output")
    p.add_argument("--sys", required=True,
                   help="token sequences, one document per line")
    p.add_argument("--gold", required=True, help="gold clause file")
    p.add_argument("--level", required=True,
                   choices=[Level.CHAR.value, Level.WORD.value])
    p.add_argument("--scheme", default="relative",
                   choices=["relative", "absolute", "standard"],
                   help="naming scheme the token sequences use")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    if args.quiet:
        warnings.simplefilter("ignore")
    try:
        return args.func(args)
    except (ClausalError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # never crash on corpus input
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
