"""Clause-level F-score between clausal forms.

Scoring searches for the type-respecting injective variable mapping that
maximizes the number of matched clauses (multiset semantics), then reports
precision/recall/F1.  REF clauses never count.  The search is restarted
hill-climbing: one concept-anchored start, one empty start (pure greedy),
and random starts for the remaining restarts, all derived from one seed.
"""

from __future__ import annotations

import enum
import itertools
import random
import warnings
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

from .clausal import ClausalForm, Clause, ClausalError, Constant, Kind, Variable
from .checker import CheckReport, VarType, check

Seed = Union[int, str]


class InvalidGold(ClausalError):
    """Gold-side form failed validation."""


class LengthMismatch(ClausalError):
    """Aligned lists have different lengths."""


@dataclass(frozen=True)
class MatchResult:
    matched: int
    sys_total: int
    gold_total: int
    precision: float
    recall: float
    f1: float
    mapping: dict[str, str] = field(default_factory=dict)
    restarts_used: int = 0


class CategoryFilter(enum.Enum):
    ALL_CLAUSES = "all"
    DRS_OPERATORS = "operators"
    VERBNET_ROLES = "roles"
    WORDNET_SYNSETS = "synsets"
    SYNSET_NOUNS = "synsets-nominal"
    SYNSET_VERBAL = "synsets-verbal"
    ORACLE_SENSE_NUMBERS = "oracle-senses"
    ORACLE_SYNSETS = "oracle-synsets"
    ORACLE_ROLES = "oracle-roles"


_ORACLE_FILTERS = {CategoryFilter.ORACLE_SENSE_NUMBERS,
                   CategoryFilter.ORACLE_SYNSETS,
                   CategoryFilter.ORACLE_ROLES}

_OPERATOR_KINDS = {Kind.UNARY, Kind.BINARY, Kind.COMPARISON, Kind.PRP,
                   Kind.SDRS, Kind.RELATION}


def _in_category(clause: Clause, category: CategoryFilter) -> bool:
    if category is CategoryFilter.ALL_CLAUSES:
        return True
    if category is CategoryFilter.DRS_OPERATORS:
        return clause.kind in _OPERATOR_KINDS
    if category is CategoryFilter.VERBNET_ROLES:
        return clause.kind is Kind.ROLE
    if category is CategoryFilter.WORDNET_SYNSETS:
        return clause.kind is Kind.CONCEPT
    if category is CategoryFilter.SYNSET_NOUNS:
        return clause.kind is Kind.CONCEPT and clause.sense.startswith("n.")
    if category is CategoryFilter.SYNSET_VERBAL:
        return clause.kind is Kind.CONCEPT and not clause.sense.startswith("n.")
    raise ValueError(f"{category} does not select a clause subset")


def fscore(matched: int, sys_total: int, gold_total: int) -> tuple[float, float, float]:
    """Precision, recall, F1; zero whenever a denominator is zero."""
    precision = matched / sys_total if sys_total else 0.0
    recall = matched / gold_total if gold_total else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def load_synsets(path: str) -> dict[str, str]:
    """Read a tab-separated table mapping sense keys (lemma.p.nn) to synset ids."""
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ClausalError(f"bad synset row at line {line_no}: {raw!r}")
            key, synset_id = parts
            if key in table and table[key] != synset_id:
                warnings.warn(f"duplicate synset key {key!r} at line {line_no}; keeping first")
                continue
            table.setdefault(key, synset_id)
    return table


def _sense_key(lemma: str, sense: str, synsets: Optional[dict[str, str]]) -> str:
    if synsets:
        return synsets.get(f"{lemma}.{sense}", sense)
    return sense


def clause_match(sys_clause: Clause, gold_clause: Clause, mapping: dict[str, str],
                 synsets: Optional[dict[str, str]] = None) -> bool:
    """Pairwise match under a variable mapping; raises on REF clauses."""
    if sys_clause.kind is Kind.REF or gold_clause.kind is Kind.REF:
        raise ValueError("REF clauses are excluded from matching")
    if sys_clause.kind is not gold_clause.kind or sys_clause.op != gold_clause.op:
        return False
    if sys_clause.kind is Kind.CONCEPT:
        if (_sense_key(sys_clause.op, sys_clause.sense, synsets)
                != _sense_key(gold_clause.op, gold_clause.sense, synsets)):
            return False
    if mapping.get(sys_clause.box.name) != gold_clause.box.name:
        return False
    for s_term, g_term in zip(sys_clause.args, gold_clause.args):
        if isinstance(s_term, Constant) != isinstance(g_term, Constant):
            return False
        if isinstance(s_term, Constant):
            if s_term.text != g_term.text:
                return False
        elif mapping.get(s_term.name) != g_term.name:
            return False
    return True


# ---------------------------------------------------------------------------
# Search internals

Prep = tuple  # (kind, op, normalized sense, ((tag, value), ...)) with box first


def _prepare(form: ClausalForm, synsets: Optional[dict[str, str]]) -> list[Prep]:
    prepared: list[Prep] = []
    for clause in form.clauses:
        if clause.kind is Kind.REF:
            continue
        sense = None
        if clause.kind is Kind.CONCEPT:
            sense = _sense_key(clause.op, clause.sense, synsets)
        args: list[tuple[str, str]] = [("v", clause.box.name)]
        for term in clause.args:
            if isinstance(term, Variable):
                args.append(("v", term.name))
            else:
                args.append(("c", term.text))
        prepared.append((clause.kind, clause.op, sense, tuple(args)))
    return prepared


def _identity_key(prep: Prep):
    kind, op, sense, args = prep
    return (kind, op, sense, tuple(a[1] if a[0] == "v" else a for a in args))


def _skeleton(prep: Prep):
    kind, op, sense, args = prep
    return (kind, op, sense, tuple("v" if a[0] == "v" else a for a in args))


class _Search:
    """Hill-climbing over injective variable mappings for one document pair."""

    def __init__(self, sys_prep: list[Prep], gold_prep: list[Prep],
                 sys_types: dict[str, VarType], gold_types: dict[str, VarType]):
        self.sys_prep = sys_prep
        self.gold_counter = Counter(_identity_key(p) for p in gold_prep)
        self.upper_bound = sum((Counter(_skeleton(p) for p in sys_prep)
                                & Counter(_skeleton(p) for p in gold_prep)).values())

        sys_vars = {a[1] for p in sys_prep for a in p[3] if a[0] == "v"}
        gold_vars = {a[1] for p in gold_prep for a in p[3] if a[0] == "v"}
        self.sys_by_type = {
            t: sorted(v for v in sys_vars if sys_types[v] is t) for t in VarType}
        self.gold_by_type = {
            t: sorted(v for v in gold_vars if gold_types[v] is t) for t in VarType}

        self.var_clauses: dict[str, list[int]] = {v: [] for v in sys_vars}
        for ci, prep in enumerate(sys_prep):
            for tag, value in prep[3]:
                if tag == "v" and (not self.var_clauses[value]
                                   or self.var_clauses[value][-1] != ci):
                    self.var_clauses[value].append(ci)

        # Candidate images: gold variables aligned with a sys variable in at
        # least one skeleton-compatible clause pair.  The same alignments,
        # taken per whole clause, double as joint "jump" moves that escape
        # plateaus where no single reassignment gains anything.
        pools: dict[str, set[str]] = {v: set() for v in sys_vars}
        gold_by_skel: dict = {}
        for prep in gold_prep:
            gold_by_skel.setdefault(_skeleton(prep), []).append(prep)
        self.jumps: list[tuple[tuple[tuple[str, str], ...], ...]] = []
        for prep in sys_prep:
            options = set()
            for gold in gold_by_skel.get(_skeleton(prep), ()):
                pairs: dict[str, str] = {}
                consistent = True
                for (tag, value), (_, g_value) in zip(prep[3], gold[3]):
                    if tag != "v":
                        continue
                    pools[value].add(g_value)
                    if pairs.setdefault(value, g_value) != g_value:
                        consistent = False
                if consistent and len(set(pairs.values())) == len(pairs):
                    options.add(tuple(sorted(pairs.items())))
            self.jumps.append(tuple(sorted(options)))
        self.pools = {v: sorted(ps) for v, ps in pools.items()}
        self.all_vars = sorted(sys_vars)
        self.swap_pairs = [pair
                           for t in VarType
                           for pair in itertools.combinations(self.sys_by_type[t], 2)]
        self.sentinel = {v: ("U", v) for v in sys_vars}

        self.mapping: dict[str, str] = {}
        self.inverse: dict[str, str] = {}  # gold image -> sys owner
        self.keys: list = []
        self.trans: Counter = Counter()
        self.matched = 0

    def _key_for(self, ci: int):
        kind, op, sense, args = self.sys_prep[ci]
        return (kind, op, sense,
                tuple(self.mapping.get(a[1], self.sentinel[a[1]]) if a[0] == "v" else a
                      for a in args))

    def _reset(self) -> None:
        self.mapping.clear()
        self.inverse.clear()
        self.keys = [self._key_for(ci) for ci in range(len(self.sys_prep))]
        self.trans = Counter(self.keys)
        self.matched = sum(min(c, self.gold_counter.get(k, 0))
                           for k, c in self.trans.items())

    def _set(self, var: str, image: Optional[str]) -> None:
        old = self.mapping.get(var)
        if old == image:
            return
        if old is not None:
            del self.inverse[old]
            del self.mapping[var]
        if image is not None:
            self.inverse[image] = var
            self.mapping[var] = image
        gold = self.gold_counter
        for ci in self.var_clauses[var]:
            key = self.keys[ci]
            count = self.trans[key]
            if count <= gold.get(key, 0):
                self.matched -= 1
            if count == 1:
                del self.trans[key]
            else:
                self.trans[key] = count - 1
            new_key = self._key_for(ci)
            self.keys[ci] = new_key
            count = self.trans.get(new_key, 0)
            if count < gold.get(new_key, 0):
                self.matched += 1
            self.trans[new_key] = count + 1

    def _swap(self, v1: str, v2: str) -> None:
        g1, g2 = self.mapping.get(v1), self.mapping.get(v2)
        self._set(v1, None)
        self._set(v2, g1)
        self._set(v1, g2)

    def _gain_set(self, var: str, image: str) -> int:
        before = self.matched
        old = self.mapping.get(var)
        self._set(var, image)
        gain = self.matched - before
        self._set(var, old)
        return gain

    def _gain_swap(self, v1: str, v2: str) -> int:
        before = self.matched
        self._swap(v1, v2)
        gain = self.matched - before
        self._swap(v1, v2)
        return gain

    def _apply_jump(self, pairs) -> dict[str, Optional[str]]:
        """Map every (var, image) pair at once, displacing current owners."""
        jump_vars = {v for v, _ in pairs}
        snapshot: dict[str, Optional[str]] = {}
        for _, image in pairs:
            owner = self.inverse.get(image)
            if owner is not None and owner not in jump_vars:
                snapshot.setdefault(owner, self.mapping.get(owner))
        for var in jump_vars:
            snapshot.setdefault(var, self.mapping.get(var))
        for var in snapshot:
            self._set(var, None)
        for var, image in pairs:
            self._set(var, image)
        return snapshot

    def _revert(self, snapshot: dict[str, Optional[str]]) -> None:
        for var in snapshot:
            self._set(var, None)
        for var, image in snapshot.items():
            if image is not None:
                self._set(var, image)

    def _gain_jump(self, pairs) -> int:
        before = self.matched
        snapshot = self._apply_jump(pairs)
        gain = self.matched - before
        self._revert(snapshot)
        return gain

    def _init_concept_anchor(self) -> None:
        gold_by_label: dict[tuple, list] = {}
        for key in self.gold_counter:
            kind, op, sense, args = key
            if kind is Kind.CONCEPT:
                gold_by_label.setdefault((op, sense), []).append(args)
        for prep in self.sys_prep:
            kind, op, sense, args = prep
            if kind is not Kind.CONCEPT:
                continue
            for gold_args in gold_by_label.get((op, sense), ()):
                pairs = [(a[1], g) for a, g in zip(args, gold_args) if a[0] == "v"]
                ok = all(self.mapping.get(v, None) in (None, g) and
                         (g not in self.inverse or self.mapping.get(v) == g)
                         for v, g in pairs)
                if ok:
                    for v, g in pairs:
                        if self.mapping.get(v) != g:
                            self._set(v, g)
                    break

    def _init_random(self, rng: random.Random) -> None:
        for var_type in VarType:
            sys_vars = self.sys_by_type[var_type]
            gold_vars = self.gold_by_type[var_type]
            if not sys_vars or not gold_vars:
                continue
            images = rng.sample(gold_vars, len(gold_vars))
            for var, image in zip(sys_vars, images):
                self._set(var, image)

    def _climb(self) -> None:
        while True:
            best_gain = 0
            best_move: Optional[tuple] = None
            for var in self.all_vars:
                current = self.mapping.get(var)
                for image in self.pools[var]:
                    if image == current or image in self.inverse:
                        continue
                    gain = self._gain_set(var, image)
                    if gain > best_gain:
                        best_gain, best_move = gain, ("set", var, image)
            for v1, v2 in self.swap_pairs:
                if self.mapping.get(v1) is None and self.mapping.get(v2) is None:
                    continue
                gain = self._gain_swap(v1, v2)
                if gain > best_gain:
                    best_gain, best_move = gain, ("swap", v1, v2)
            for options in self.jumps:
                for pairs in options:
                    if all(self.mapping.get(v) == g for v, g in pairs):
                        continue
                    gain = self._gain_jump(pairs)
                    if gain > best_gain:
                        best_gain, best_move = gain, ("jump", pairs)
            if best_move is None:
                return
            if best_move[0] == "set":
                self._set(best_move[1], best_move[2])
            elif best_move[0] == "swap":
                self._swap(best_move[1], best_move[2])
            else:
                self._apply_jump(best_move[1])

    def run(self, restarts: int, seed: Seed) -> tuple[int, dict[str, str], int]:
        best_matched = -1
        best_mapping: dict[str, str] = {}
        used = 0
        for r in range(max(1, restarts)):
            self._reset()
            if r == 0:
                self._init_concept_anchor()
            elif r >= 2:
                self._init_random(random.Random(f"{seed}:{r}"))
            self._climb()
            used = r + 1
            if self.matched > best_matched:
                best_matched, best_mapping = self.matched, dict(self.mapping)
            if best_matched >= self.upper_bound:
                break
        return best_matched, best_mapping, used


# ---------------------------------------------------------------------------
# Public scoring API

def _scored_count(form: ClausalForm) -> int:
    return sum(1 for c in form.clauses if c.kind is not Kind.REF)


def score_pair(sys_form: ClausalForm, gold_form: ClausalForm, *,
               restarts: int = 20, seed: Seed = 1,
               synsets: Optional[dict[str, str]] = None,
               gold_report: Optional[CheckReport] = None,
               sys_report: Optional[CheckReport] = None) -> MatchResult:
    """Best-mapping clause overlap for one document pair.

    The gold side must validate (InvalidGold otherwise).  An invalid system
    form scores zero matched clauses while its clause total still counts.
    """
    if gold_report is None:
        gold_report = check(gold_form)
    if not gold_report.valid:
        raise InvalidGold(f"gold form is invalid: {gold_report.reason.value} "
                          f"({gold_report.detail})")
    if sys_report is None:
        sys_report = check(sys_form)

    sys_total = _scored_count(sys_form)
    gold_total = _scored_count(gold_form)
    if not sys_report.valid:
        precision, recall, f1 = fscore(0, sys_total, gold_total)
        return MatchResult(0, sys_total, gold_total, precision, recall, f1, {}, 0)

    search = _Search(_prepare(sys_form, synsets), _prepare(gold_form, synsets),
                     sys_report.typing.types, gold_report.typing.types)
    matched, mapping, used = search.run(restarts, seed)
    precision, recall, f1 = fscore(matched, sys_total, gold_total)
    return MatchResult(matched, sys_total, gold_total, precision, recall, f1,
                       mapping, used)


def _require_aligned(sys_forms: Sequence, gold_forms: Sequence) -> None:
    if len(sys_forms) != len(gold_forms):
        raise LengthMismatch(f"{len(sys_forms)} system documents vs "
                             f"{len(gold_forms)} gold documents")


def score_corpus(sys_forms: Sequence[ClausalForm], gold_forms: Sequence[ClausalForm],
                 *, restarts: int = 20, seed: Seed = 1,
                 synsets: Optional[dict[str, str]] = None
                 ) -> tuple[MatchResult, list[MatchResult]]:
    """Micro-averaged corpus score plus the per-document results."""
    _require_aligned(sys_forms, gold_forms)
    per_doc = [score_pair(s, g, restarts=restarts, seed=f"{seed}:{i}", synsets=synsets)
               for i, (s, g) in enumerate(zip(sys_forms, gold_forms))]
    matched = sum(r.matched for r in per_doc)
    sys_total = sum(r.sys_total for r in per_doc)
    gold_total = sum(r.gold_total for r in per_doc)
    precision, recall, f1 = fscore(matched, sys_total, gold_total)
    return (MatchResult(matched, sys_total, gold_total, precision, recall, f1),
            per_doc)


def _filtered_counts(sys_form: ClausalForm, gold_form: ClausalForm,
                     mapping: dict[str, str], category: CategoryFilter,
                     synsets: Optional[dict[str, str]], sys_valid: bool
                     ) -> tuple[int, int, int]:
    gold_keys = Counter(_identity_key(p)
                        for c, p in _pair_prep(gold_form, synsets)
                        if _in_category(c, category))
    sys_selected = [p for c, p in _pair_prep(sys_form, synsets)
                    if _in_category(c, category)]
    if not sys_valid:
        return 0, len(sys_selected), sum(gold_keys.values())
    translated = Counter()
    sentinel = object()
    for kind, op, sense, args in sys_selected:
        translated[(kind, op, sense,
                    tuple(mapping.get(a[1], sentinel) if a[0] == "v" else a
                          for a in args))] += 1
    matched = sum(min(count, gold_keys.get(key, 0))
                  for key, count in translated.items())
    return matched, len(sys_selected), sum(gold_keys.values())


def _pair_prep(form: ClausalForm, synsets):
    scored = [c for c in form.clauses if c.kind is not Kind.REF]
    return zip(scored, _prepare(form, synsets))


def _oracle_rewrite(sys_form: ClausalForm, gold_form: ClausalForm,
                    mapping: dict[str, str], category: CategoryFilter,
                    synsets: Optional[dict[str, str]]) -> ClausalForm:
    """Rewrite system clauses toward gold under the best mapping found."""
    gold_concepts = [c for c in gold_form.clauses if c.kind is Kind.CONCEPT]
    gold_roles = [c for c in gold_form.clauses if c.kind is Kind.ROLE]

    def args_match(sys_clause: Clause, gold_clause: Clause) -> bool:
        if mapping.get(sys_clause.box.name) != gold_clause.box.name:
            return False
        for s_term, g_term in zip(sys_clause.args, gold_clause.args):
            if isinstance(s_term, Constant) != isinstance(g_term, Constant):
                return False
            if isinstance(s_term, Constant):
                if s_term.text != g_term.text:
                    return False
            elif mapping.get(s_term.name) != g_term.name:
                return False
        return True

    out = []
    for clause in sys_form.clauses:
        new_clause = clause
        if category is CategoryFilter.ORACLE_SENSE_NUMBERS and clause.kind is Kind.CONCEPT:
            for gold in gold_concepts:
                if (gold.op == clause.op and gold.sense[0] == clause.sense[0]
                        and args_match(clause, gold)):
                    new_clause = replace(clause, sense=gold.sense)
                    break
        elif category is CategoryFilter.ORACLE_SYNSETS and clause.kind is Kind.CONCEPT:
            for gold in gold_concepts:
                if gold.op == clause.op and args_match(clause, gold):
                    new_clause = replace(clause, sense=gold.sense)
                    break
        elif category is CategoryFilter.ORACLE_ROLES and clause.kind is Kind.ROLE:
            for gold in gold_roles:
                if args_match(clause, gold):
                    new_clause = replace(clause, op=gold.op)
                    break
        out.append(new_clause)
    return sys_form.with_clauses(out)


def score_category(sys_forms: Sequence[ClausalForm], gold_forms: Sequence[ClausalForm],
                   category: CategoryFilter, *, restarts: int = 20, seed: Seed = 1,
                   synsets: Optional[dict[str, str]] = None) -> MatchResult:
    """Corpus score restricted to a clause category, or under an oracle rewrite.

    The global best mapping is computed on all clauses per document first.
    Subset categories then recount matched/system/gold inside the subset;
    oracle categories rewrite the system clauses toward gold under that
    mapping and rescore all clauses."""
    _require_aligned(sys_forms, gold_forms)
    matched = sys_total = gold_total = 0
    for i, (sys_form, gold_form) in enumerate(zip(sys_forms, gold_forms)):
        sys_report = check(sys_form)
        base = score_pair(sys_form, gold_form, restarts=restarts,
                          seed=f"{seed}:{i}", synsets=synsets,
                          sys_report=sys_report)
        if category in _ORACLE_FILTERS:
            if sys_report.valid:
                rewritten = _oracle_rewrite(sys_form, gold_form, base.mapping,
                                            category, synsets)
                result = score_pair(rewritten, gold_form, restarts=restarts,
                                    seed=f"{seed}:{i}:oracle", synsets=synsets,
                                    gold_report=check(gold_form))
            else:
                result = base
            matched += result.matched
            sys_total += result.sys_total
            gold_total += result.gold_total
        else:
            m, s, g = _filtered_counts(sys_form, gold_form, base.mapping,
                                       category, synsets, sys_report.valid)
            matched += m
            sys_total += s
            gold_total += g
    precision, recall, f1 = fscore(matched, sys_total, gold_total)
    return MatchResult(matched, sys_total, gold_total, precision, recall, f1)


@dataclass(frozen=True)
class LengthBucket:
    mean_f1: float
    count: int
    low_support: bool  # fewer than 10 documents at this length


def score_by_length(sys_forms: Sequence[ClausalForm], gold_forms: Sequence[ClausalForm],
                    lengths: Sequence[int], *, restarts: int = 20, seed: Seed = 1,
                    synsets: Optional[dict[str, str]] = None
                    ) -> dict[int, LengthBucket]:
    """Mean per-document F1 grouped by input sentence length (word count)."""
    _require_aligned(sys_forms, gold_forms)
    if len(lengths) != len(sys_forms):
        raise LengthMismatch(f"{len(lengths)} lengths vs {len(sys_forms)} documents")
    scores: dict[int, list[float]] = {}
    for i, (sys_form, gold_form) in enumerate(zip(sys_forms, gold_forms)):
        result = score_pair(sys_form, gold_form, restarts=restarts,
                            seed=f"{seed}:{i}", synsets=synsets)
        scores.setdefault(lengths[i], []).append(result.f1)
    return {length: LengthBucket(sum(fs) / len(fs), len(fs), len(fs) < 10)
            for length, fs in sorted(scores.items())}


# ---------------------------------------------------------------------------
# Significance testing

Triple = tuple[int, int, int]  # (matched, sys_total, gold_total)


@dataclass(frozen=True)
class SignificanceResult:
    p_value: float
    repetitions: int
    alpha: float
    observed: float

    @property
    def significant(self) -> bool:
        return self.p_value <= self.alpha


def _micro_f(triples: Sequence[Triple]) -> float:
    matched = sum(t[0] for t in triples)
    sys_total = sum(t[1] for t in triples)
    gold_total = sum(t[2] for t in triples)
    return fscore(matched, sys_total, gold_total)[2]


def significance(a: Sequence[Triple], b: Sequence[Triple], *,
                 repetitions: int = 1000, seed: Seed = 1,
                 alpha: float = 0.05) -> SignificanceResult:
    """Approximate randomization over per-document (matched, sys, gold) triples.

    Each repetition swaps every document's triples between the two systems
    with probability one half; the p-value is (r + 1) / (R + 1) where r counts
    shuffles whose absolute micro-F gap reaches the observed one."""
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} vs {len(b)} documents")
    if repetitions < 1:
        raise ValueError("repetitions must be positive")
    observed = abs(_micro_f(a) - _micro_f(b))
    rng = random.Random(seed)
    hits = 0
    a_list, b_list = list(a), list(b)
    for _ in range(repetitions):
        shuffled_a = []
        shuffled_b = []
        for doc_a, doc_b in zip(a_list, b_list):
            if rng.random() < 0.5:
                shuffled_a.append(doc_b)
                shuffled_b.append(doc_a)
            else:
                shuffled_a.append(doc_a)
                shuffled_b.append(doc_b)
        if abs(_micro_f(shuffled_a) - _micro_f(shuffled_b)) >= observed:
            hits += 1
    return SignificanceResult((hits + 1) / (repetitions + 1), repetitions, alpha,
                              observed)
