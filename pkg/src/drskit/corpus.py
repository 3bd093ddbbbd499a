"""Baseline parsers, embedding ingestion, phenomenon detectors, corpus stats.

The two baselines are deliberately simple: a constant-output parser and a
nearest-training-sentence parser by cosine over averaged word embeddings.
Phenomenon detectors count clause patterns; the pairwise judges are
deterministic proxies for what is ultimately a manual evaluation protocol,
so three of the five kinds are flagged approximate.
"""

from __future__ import annotations

import enum
import warnings
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Optional, Sequence

import numpy as np

from .clausal import ClausalForm, Clause, ClausalError, Kind, Variable, parse_corpus
from .checker import CheckReport, RequiresValidForm, _closure, _explicit_edges, check, require_valid
from .matcher import LengthMismatch, clause_match


class DimensionMismatch(ClausalError):
    """Embedding row width disagrees with the established dimension."""


class EmptyFile(ClausalError):
    """Embedding file contains no data rows."""


class EmptyTrainingSet(ClausalError):
    """Nearest-neighbour baseline needs at least one training pair."""


class PhenomenonAbsentInGold(ClausalError):
    """Judging a phenomenon the gold form does not exhibit."""


# ---------------------------------------------------------------------------
# Embeddings

def _packaged_text(name: str) -> str:
    return resources.files("drskit.data").joinpath(name).read_text(encoding="utf-8")


def load_stopwords(path: Optional[str] = None) -> frozenset[str]:
    """One word per line; '#' comments and blanks ignored; default list shipped."""
    text = _packaged_text("stopwords_en.txt") if path is None else open(
        path, encoding="utf-8").read()
    words = set()
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return frozenset(words)


@dataclass(frozen=True)
class EmbeddingStore:
    dim: int
    vectors: dict[str, np.ndarray]
    stopwords: frozenset[str] = frozenset()
    lowercase: bool = True

    def __len__(self) -> int:
        return len(self.vectors)

    def sentence_vector(self, sentence: str) -> np.ndarray:
        """Average vector over in-vocabulary, non-stopword tokens."""
        found = []
        for token in sentence.split():
            if self.lowercase:
                token = token.lower()
            if token in self.stopwords:
                continue
            vector = self.vectors.get(token)
            if vector is not None:
                found.append(vector)
        if not found:
            return np.zeros(self.dim)
        return np.mean(found, axis=0)


def load_embeddings(path: str, dim_check: Optional[int] = None, *,
                    stopwords: frozenset[str] = frozenset(),
                    lowercase: bool = True) -> EmbeddingStore:
    """Read text-format vectors: one word then d space-separated numbers per line."""
    vectors: dict[str, np.ndarray] = {}
    dim: Optional[int] = None
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            parts = raw.split()
            if not parts:
                continue
            word, values = parts[0], parts[1:]
            try:
                vector = np.array([float(v) for v in values])
            except ValueError as exc:
                raise DimensionMismatch(f"non-numeric value at line {line_no}") from exc
            if dim is None:
                dim = len(vector)
                if dim == 0:
                    raise DimensionMismatch(f"no values at line {line_no}")
                if dim_check is not None and dim != dim_check:
                    raise DimensionMismatch(
                        f"expected dimension {dim_check}, found {dim} at line {line_no}")
            elif len(vector) != dim:
                raise DimensionMismatch(
                    f"expected dimension {dim}, found {len(vector)} at line {line_no}")
            if word in vectors:
                warnings.warn(f"duplicate embedding for {word!r} at line {line_no}; "
                              f"keeping first")
                continue
            vectors[word] = vector
    if dim is None:
        raise EmptyFile(f"no embedding rows in {path}")
    return EmbeddingStore(dim, vectors, stopwords, lowercase)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; zero when either vector has zero norm."""
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


# ---------------------------------------------------------------------------
# Baseline parsers

Parser = Callable[[str], ClausalForm]


def default_spar_form() -> ClausalForm:
    """The shipped constant-output form."""
    forms = parse_corpus(_packaged_text("spar_default.clf"))
    return forms[0]


def spar(default_form: Optional[ClausalForm] = None) -> Parser:
    """Constant parser: every sentence maps to one fixed valid form."""
    form = default_spar_form() if default_form is None else default_form
    require_valid(form)

    def parse(sentence: str) -> ClausalForm:
        return form

    return parse


def sim_spar(train: Sequence[tuple[str, ClausalForm]], emb: EmbeddingStore) -> Parser:
    """Nearest-training-sentence parser by average-embedding cosine.

    Ties break toward the lowest training index; a zero-norm query vector
    falls back to training index 0."""
    if not train:
        raise EmptyTrainingSet("sim_spar needs a non-empty training set")
    train_vectors = [emb.sentence_vector(sentence) for sentence, _ in train]

    def parse(sentence: str) -> ClausalForm:
        query = emb.sentence_vector(sentence)
        if np.linalg.norm(query) == 0.0:
            return train[0][1]
        best_index = 0
        best_sim = cosine(query, train_vectors[0])
        for i in range(1, len(train)):
            sim = cosine(query, train_vectors[i])
            if sim > best_sim:
                best_index, best_sim = i, sim
        return train[best_index][1]

    return parse


# ---------------------------------------------------------------------------
# Phenomenon detectors

class Phenomenon(enum.Enum):
    NEGATION_MODALS = "NegationModals"
    SCOPE_AMBIGUITY = "ScopeAmbiguity"
    PRONOUN_RESOLUTION = "PronounResolution"
    DISCOURSE_REL_IMP = "DiscourseRelImp"
    EMBEDDED_CLAUSES = "EmbeddedClauses"


# Detector counts for these kinds are heuristic, not guaranteed exact.
APPROXIMATE = frozenset({Phenomenon.SCOPE_AMBIGUITY,
                         Phenomenon.PRONOUN_RESOLUTION,
                         Phenomenon.EMBEDDED_CLAUSES})

DEFAULT_ANAPHORIC = frozenset({"male.n.02", "female.n.02",
                               "person.n.01", "thing.n.12"})

_SCOPAL_UNARY = {"NOT", "POS", "NEC"}


def _scopal_clauses(form: ClausalForm) -> list[tuple[Clause, list[str]]]:
    """Clauses of scopal operators with the boxes they take scope over."""
    out = []
    for clause in form.clauses:
        if clause.kind is Kind.UNARY:
            out.append((clause, [clause.args[0].name]))
        elif clause.kind is Kind.BINARY and clause.op == "IMP":
            out.append((clause, [a.name for a in clause.args]))
    return out


def _nested_pairs(form: ClausalForm) -> list[tuple[str, str]]:
    """(outer op, inner op) for each pair where one operator sits in the
    other's scope, judged on explicit subordination edges only."""
    scopal = _scopal_clauses(form)
    if len(scopal) < 2:
        return []
    edges, _ = _explicit_edges(form)
    nodes = {c.box.name for c in form.clauses}
    nodes.update(a.name for c in form.clauses for a in c.args
                 if isinstance(a, Variable))
    reach = _closure(nodes, edges)
    pairs = []
    for outer, outer_scope in scopal:
        in_scope = set(outer_scope)
        for box in outer_scope:
            in_scope.update(reach.get(box, set()))
        for inner, _ in scopal:
            if inner is outer:
                continue
            if inner.box.name in in_scope:
                pairs.append((outer.op, inner.op))
    return pairs


def _pronoun_entities(form: ClausalForm, report: CheckReport,
                      anaphoric: frozenset[str]) -> list[str]:
    presupp = report.presupposition_boxes
    named = {c.args[0].name for c in form.clauses
             if c.kind is Kind.ROLE and c.op == "Name"
             and isinstance(c.args[0], Variable)}
    found = []
    for clause in form.clauses:
        if clause.kind is not Kind.REF or clause.box.name not in presupp:
            continue
        entity = clause.args[0].name
        if entity in named or entity in found:
            continue
        concepts = {f"{c.op}.{c.sense}" for c in form.clauses
                    if c.kind is Kind.CONCEPT and c.box.name == clause.box.name
                    and isinstance(c.args[0], Variable) and c.args[0].name == entity}
        if not concepts & anaphoric:
            continue
        role_boxes = {c.box.name for c in form.clauses if c.kind is Kind.ROLE
                      and any(isinstance(a, Variable) and a.name == entity
                              for a in c.args)}
        if len(role_boxes) >= 2:
            found.append(entity)
    return found


def detect_phenomena(form: ClausalForm, *, report: Optional[CheckReport] = None,
                     anaphoric: frozenset[str] = DEFAULT_ANAPHORIC
                     ) -> dict[Phenomenon, int]:
    """Per-phenomenon clause-pattern counts on a valid form."""
    if report is None:
        report = require_valid(form)
    elif not report.valid:
        raise RequiresValidForm(report.reason, report.detail)

    counts = dict.fromkeys(Phenomenon, 0)
    counts[Phenomenon.NEGATION_MODALS] = sum(
        1 for c in form.clauses if c.kind is Kind.UNARY)
    counts[Phenomenon.SCOPE_AMBIGUITY] = len(_nested_pairs(form))
    counts[Phenomenon.DISCOURSE_REL_IMP] = sum(
        1 for c in form.clauses
        if c.kind is Kind.RELATION or (c.kind is Kind.BINARY and c.op == "IMP"))

    verb_boxes = {c.box.name for c in form.clauses
                  if c.kind is Kind.CONCEPT and c.sense.startswith("v.")}
    counts[Phenomenon.EMBEDDED_CLAUSES] = sum(
        1 for c in form.clauses
        if c.kind is Kind.PRP and c.args[1].name in verb_boxes)

    counts[Phenomenon.PRONOUN_RESOLUTION] = len(
        _pronoun_entities(form, report, anaphoric))
    return counts


# ---------------------------------------------------------------------------
# Pairwise phenomenon judges

def _main_concept(form: ClausalForm, box_name: str) -> Optional[Clause]:
    """The box's head predicate: prefer verbal, then adjectival, then first."""
    concepts = [c for c in form.clauses
                if c.kind is Kind.CONCEPT and c.box.name == box_name]
    for prefix in ("v.", "a."):
        for clause in concepts:
            if clause.sense.startswith(prefix):
                return clause
    return concepts[0] if concepts else None


def _has_counterpart(sys_form: ClausalForm, gold_clause: Clause,
                     mapping: dict[str, str],
                     synsets: Optional[dict[str, str]]) -> bool:
    return any(c.kind is not Kind.REF and clause_match(c, gold_clause, mapping, synsets)
               for c in sys_form.clauses)


def judge_phenomenon(sys_form: ClausalForm, gold_form: ClausalForm,
                     kind: Phenomenon, mapping: dict[str, str], *,
                     synsets: Optional[dict[str, str]] = None,
                     anaphoric: frozenset[str] = DEFAULT_ANAPHORIC) -> bool:
    """Did the system capture every instance of the phenomenon in gold?

    The mapping comes from a prior scoring run (system variable -> gold
    variable).  Judgments are clause-level proxies; see detector notes."""
    gold_report = require_valid(gold_form)
    gold_counts = detect_phenomena(gold_form, report=gold_report,
                                   anaphoric=anaphoric)
    if gold_counts[kind] == 0:
        raise PhenomenonAbsentInGold(f"gold form exhibits no {kind.value}")

    def captured(gold_clause: Clause, scope_boxes: list[str]) -> bool:
        if not _has_counterpart(sys_form, gold_clause, mapping, synsets):
            return False
        for box in scope_boxes:
            main = _main_concept(gold_form, box)
            if main is not None and not _has_counterpart(sys_form, main,
                                                         mapping, synsets):
                return False
        return True

    if kind is Phenomenon.NEGATION_MODALS:
        return all(captured(c, [c.args[0].name])
                   for c in gold_form.clauses if c.kind is Kind.UNARY)

    if kind is Phenomenon.DISCOURSE_REL_IMP:
        return all(captured(c, [a.name for a in c.args])
                   for c in gold_form.clauses
                   if c.kind is Kind.RELATION
                   or (c.kind is Kind.BINARY and c.op == "IMP"))

    if kind is Phenomenon.EMBEDDED_CLAUSES:
        for clause in gold_form.clauses:
            if clause.kind is not Kind.PRP:
                continue
            prop_box = clause.args[1].name
            main = _main_concept(gold_form, prop_box)
            if main is None or not main.sense.startswith("v."):
                continue
            if not _has_counterpart(sys_form, clause, mapping, synsets):
                return False
            if not _has_counterpart(sys_form, main, mapping, synsets):
                return False
            # Control-verb argument sharing: roles in the proposition box
            # whose entity also occurs outside it must carry over.
            for role in gold_form.clauses:
                if role.kind is not Kind.ROLE or role.box.name != prop_box:
                    continue
                shared = any(
                    isinstance(arg, Variable) and any(
                        other.box.name != prop_box and (
                            any(isinstance(t, Variable) and t.name == arg.name
                                for t in other.args))
                        for other in gold_form.clauses if other.kind is not Kind.REF)
                    for arg in role.args)
                if shared and not _has_counterpart(sys_form, role, mapping, synsets):
                    return False
        return True

    if kind is Phenomenon.PRONOUN_RESOLUTION:
        pronouns = _pronoun_entities(gold_form, gold_report, anaphoric)
        for entity in pronouns:
            for role in gold_form.clauses:
                if role.kind is Kind.ROLE and any(
                        isinstance(a, Variable) and a.name == entity
                        for a in role.args):
                    if not _has_counterpart(sys_form, role, mapping, synsets):
                        return False
        return True

    if kind is Phenomenon.SCOPE_AMBIGUITY:
        gold_pairs = Counter(_nested_pairs(gold_form))
        sys_pairs = Counter(_nested_pairs(sys_form))
        return not gold_pairs - sys_pairs

    raise ValueError(f"unknown phenomenon kind: {kind!r}")


# ---------------------------------------------------------------------------
# Corpus statistics

@dataclass(frozen=True)
class CorpusStats:
    documents: int
    sentences: int
    tokens: int
    avg_tokens_per_sentence: float
    phenomena: dict[Phenomenon, int] = field(default_factory=dict)
    approximate: frozenset[Phenomenon] = APPROXIMATE


def corpus_stats(forms: Sequence[ClausalForm], sentences: Sequence[str]
                 ) -> CorpusStats:
    """Size and phenomenon totals for an aligned corpus.

    Each sentences entry is the (pre-tokenized, whitespace-separated) text of
    one document; newline-separated lines count as separate sentences."""
    if len(forms) != len(sentences):
        raise LengthMismatch(f"{len(forms)} forms vs {len(sentences)} sentences")
    sentence_count = 0
    token_count = 0
    for text in sentences:
        lines = [line for line in text.splitlines() if line.strip()]
        sentence_count += len(lines)
        token_count += sum(len(line.split()) for line in lines)
    totals = dict.fromkeys(Phenomenon, 0)
    for form in forms:
        for phenomenon, count in detect_phenomena(form).items():
            totals[phenomenon] += count
    avg = token_count / sentence_count if sentence_count else 0.0
    return CorpusStats(len(forms), sentence_count, token_count, avg, totals)
