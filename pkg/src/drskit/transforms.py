"""Variable naming schemes and token-sequence codecs.

Renaming maps a validated form onto sequence-friendly variable tokens:
absolute names number entities and boxes by first occurrence, relative names
replace every occurrence with a new-introduction marker or an offset from the
most recent introduction of the same class.  The codecs turn forms and raw
sentences into flat token streams at character or word granularity and back.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Union

from .clausal import (ClausalForm, Clause, ClausalError, Constant, Kind,
                      MalformedClause, OperatorTables, DEFAULT_TABLES,
                      Variable, parse_clause)
from .checker import VarType, require_valid

SEP_TOKEN = "SEP"
SPACE_TOKEN = "|||SPACE|||"
CASE_MARKER = "^"


class NamingScheme(enum.Enum):
    STANDARD = "standard"
    ABSOLUTE = "absolute"
    RELATIVE = "relative"


class Level(enum.Enum):
    CHAR = "char"
    WORD = "word"
    CHARWORD = "charword"


class Casing(enum.Enum):
    KEEP = "keep"
    LOWER = "lower"
    CASE_FEATURE = "feature"


class UnresolvableOffset(ClausalError):
    """A relative variable token that cannot be resolved to an introduction."""


@dataclass(frozen=True)
class TokenSeq:
    """A flat token stream; tokens never contain raw whitespace."""

    tokens: tuple[str, ...]
    level: Level

    def text(self) -> str:
        return " ".join(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class RelativeToken:
    """A relative variable: a fresh introduction or an offset reference.

    Offset 0 points at the most recent introduction of the class, negative
    offsets at earlier ones, positive offsets forward at introductions that
    have not happened yet.
    """

    is_box: bool
    offset: Optional[int]  # None marks an introduction

    _RE = re.compile(r"([be])(NEW|-?\d+)\Z")

    def spell(self) -> str:
        prefix = "b" if self.is_box else "e"
        return f"{prefix}NEW" if self.offset is None else f"{prefix}{self.offset}"

    @classmethod
    def parse(cls, token: str) -> "RelativeToken":
        match = cls._RE.fullmatch(token)
        if not match:
            raise UnresolvableOffset(f"token {token!r} is not a relative variable")
        body = match.group(2)
        return cls(is_box=match.group(1) == "b",
                   offset=None if body == "NEW" else int(body))


def _arg_is_box(kind: Kind, index: int) -> bool:
    if kind in (Kind.UNARY, Kind.BINARY, Kind.SDRS, Kind.RELATION):
        return True
    return kind is Kind.PRP and index == 1


def _rebuild(clause: Clause, box_name: str, arg_names: dict[int, str]) -> Clause:
    args = tuple(Variable(arg_names[i]) if i in arg_names else t
                 for i, t in enumerate(clause.args))
    return replace(clause, box=Variable(box_name), args=args)


# ---------------------------------------------------------------------------
# Naming schemes

def rename_absolute(form: ClausalForm) -> ClausalForm:
    """Number boxes $1,$2,... and entities @1,@2,... by first occurrence;
    the main box always becomes $0."""
    report = require_valid(form)
    main = report.main_box
    box_names: dict[str, str] = {}
    entity_names: dict[str, str] = {}
    next_box = 1

    def box_token(name: str) -> str:
        nonlocal next_box
        if name not in box_names:
            if name == main:
                box_names[name] = "$0"
            else:
                box_names[name] = f"${next_box}"
                next_box += 1
        return box_names[name]

    def entity_token(name: str) -> str:
        if name not in entity_names:
            entity_names[name] = f"@{len(entity_names) + 1}"
        return entity_names[name]

    out = []
    for clause in form.clauses:
        new_box = box_token(clause.box.name)
        new_args = {}
        for i, term in enumerate(clause.args):
            if isinstance(term, Variable):
                new_args[i] = (box_token(term.name) if _arg_is_box(clause.kind, i)
                               else entity_token(term.name))
        out.append(_rebuild(clause, new_box, new_args))
    return form.with_clauses(out)


def rename_relative(form: ClausalForm) -> ClausalForm:
    """Replace variables with introduction markers and offsets.

    A box is introduced at its first mention anywhere; an entity at the
    referent position of its first REF clause.  Every other occurrence becomes
    an offset from the most recent introduction of its class, so forward
    references get positive offsets.
    """
    require_valid(form)
    entity_intro_idx: dict[str, int] = {}
    entity_intro_clause: dict[str, int] = {}
    for ci, clause in enumerate(form.clauses):
        if clause.kind is Kind.REF:
            name = clause.args[0].name
            if name not in entity_intro_idx:
                entity_intro_idx[name] = len(entity_intro_idx)
                entity_intro_clause[name] = ci

    box_idx: dict[str, int] = {}
    entities_emitted = 0

    def box_token(name: str) -> str:
        if name not in box_idx:
            box_idx[name] = len(box_idx)
            return RelativeToken(True, None).spell()
        return RelativeToken(True, box_idx[name] - (len(box_idx) - 1)).spell()

    def entity_token(name: str, ci: int, clause: Clause, arg_index: int) -> str:
        nonlocal entities_emitted
        is_intro = (clause.kind is Kind.REF and arg_index == 0
                    and entity_intro_clause.get(name) == ci)
        if is_intro:
            entities_emitted += 1
            return RelativeToken(False, None).spell()
        offset = entity_intro_idx[name] - (entities_emitted - 1)
        return RelativeToken(False, offset).spell()

    out = []
    for ci, clause in enumerate(form.clauses):
        new_box = box_token(clause.box.name)
        new_args = {}
        for i, term in enumerate(clause.args):
            if isinstance(term, Variable):
                new_args[i] = (box_token(term.name) if _arg_is_box(clause.kind, i)
                               else entity_token(term.name, ci, clause, i))
        out.append(_rebuild(clause, new_box, new_args))
    return form.with_clauses(out)


def restore_relative(form: ClausalForm) -> ClausalForm:
    """Invert rename_relative onto standard names (b1..bn, x1..xn).

    Introductions are collected in a first pass so that forward offsets
    resolve; an offset pointing outside the introduction sequence raises
    UnresolvableOffset.
    """
    # slot := (clause index, arg index or -1 for the box field, payload)
    slots: list[tuple[int, int, RelativeToken, Optional[int], int]] = []
    box_count = 0
    entity_count = 0
    for ci, clause in enumerate(form.clauses):
        positions: list[tuple[int, bool, str]] = [(-1, True, clause.box.name)]
        for i, term in enumerate(clause.args):
            if isinstance(term, Variable):
                positions.append((i, _arg_is_box(clause.kind, i), term.name))
        for arg_i, is_box_slot, name in positions:
            token = RelativeToken.parse(name)
            if token.is_box != is_box_slot:
                raise UnresolvableOffset(
                    f"{name!r} in clause {ci} sits in a "
                    f"{'box' if is_box_slot else 'referent'} position")
            if token.is_box:
                if token.offset is None:
                    slots.append((ci, arg_i, token, box_count, box_count))
                    box_count += 1
                else:
                    slots.append((ci, arg_i, token, None, box_count))
            else:
                if token.offset is None:
                    slots.append((ci, arg_i, token, entity_count, entity_count))
                    entity_count += 1
                else:
                    slots.append((ci, arg_i, token, None, entity_count))

    resolved: dict[tuple[int, int], str] = {}
    for ci, arg_i, token, intro_idx, seen in slots:
        total = box_count if token.is_box else entity_count
        if intro_idx is None:
            target = (seen - 1) + token.offset
            if not 0 <= target < total:
                raise UnresolvableOffset(
                    f"offset {token.spell()!r} in clause {ci} points outside "
                    f"the {total} introductions of its class")
        else:
            target = intro_idx
        resolved[(ci, arg_i)] = f"b{target + 1}" if token.is_box else f"x{target + 1}"

    out = []
    for ci, clause in enumerate(form.clauses):
        new_box = resolved[(ci, -1)]
        new_args = {i: resolved[(ci, i)] for i, t in enumerate(clause.args)
                    if isinstance(t, Variable)}
        out.append(_rebuild(clause, new_box, new_args))
    return form.with_clauses(out)


def apply_scheme(form: ClausalForm, scheme: NamingScheme) -> ClausalForm:
    if scheme is NamingScheme.STANDARD:
        return form
    if scheme is NamingScheme.ABSOLUTE:
        return rename_absolute(form)
    return rename_relative(form)


# ---------------------------------------------------------------------------
# Output codec: clausal form <-> token stream

def _char_tokens(text: str) -> list[str]:
    return [SPACE_TOKEN if ch.isspace() else ch for ch in text]


def _encode_fields(clause: Clause, tables: OperatorTables) -> list[list[str]]:
    fields: list[list[str]] = [[clause.box.name]]
    if clause.kind is Kind.CONCEPT:
        fields.append(_char_tokens(clause.op))
        fields.append(_char_tokens(f'"{clause.sense}"'))
    else:
        fields.append([clause.op])
    for term in clause.args:
        if isinstance(term, Variable):
            fields.append([term.name])
        elif term.text in tables.deictic:
            fields.append([term.token()])
        else:
            fields.append(_char_tokens(term.token()))
    return fields


def encode_output(form: ClausalForm, level: Level,
                  tables: OperatorTables = DEFAULT_TABLES) -> TokenSeq:
    """Flatten a form into tokens; SEP separates consecutive clauses."""
    if level is Level.CHARWORD:
        raise ValueError("the combined char+word level only applies to input encoding")
    tokens: list[str] = []
    for ci, clause in enumerate(form.clauses):
        if ci:
            tokens.append(SEP_TOKEN)
        if level is Level.WORD:
            tokens.extend(t.replace(" ", SPACE_TOKEN) for t in clause.tokens())
        else:
            fields = _encode_fields(clause, tables)
            for fi, f in enumerate(fields):
                if fi:
                    tokens.append(SPACE_TOKEN)
                tokens.extend(f)
    return TokenSeq(tuple(tokens), level)


def _split_clause_groups(tokens: Sequence[str]) -> list[list[str]]:
    groups: list[list[str]] = [[]]
    for token in tokens:
        if token == SEP_TOKEN:
            groups.append([])
        else:
            groups[-1].append(token)
    return [g for g in groups if g]


def _char_group_to_line(group: list[str]) -> str:
    fields: list[str] = []
    current: list[str] = []
    quotes = 0
    for token in group:
        if token == SPACE_TOKEN:
            if quotes % 2 == 1:
                current.append(" ")
            elif current:
                fields.append("".join(current))
                current = []
        else:
            current.append(token)
            quotes += token.count('"')
    if current:
        fields.append("".join(current))
    return " ".join(fields)


def decode_output(seq: Union[TokenSeq, Sequence[str]], level: Optional[Level] = None,
                  tables: OperatorTables = DEFAULT_TABLES
                  ) -> tuple[ClausalForm, list[str]]:
    """Decode a token stream back into a form.

    Robust by design: clauses that fail to parse are skipped and reported in
    the returned error list, so a garbled stream still yields a partial form.
    """
    if isinstance(seq, TokenSeq):
        tokens: Sequence[str] = seq.tokens
        level = seq.level if level is None else level
    else:
        tokens = tuple(seq)
        if level is None:
            raise ValueError("level is required when decoding a bare token list")
    clauses: list[Clause] = []
    errors: list[str] = []
    for gi, group in enumerate(_split_clause_groups(tokens)):
        if level is Level.WORD:
            line = " ".join(t.replace(SPACE_TOKEN, " ") for t in group)
        else:
            line = _char_group_to_line(group)
        try:
            clauses.append(parse_clause(line, tables))
        except MalformedClause as exc:
            errors.append(f"clause {gi}: {exc}")
    return ClausalForm(tuple(clauses)), errors


# ---------------------------------------------------------------------------
# Input codec: sentence -> token stream

def _encode_word_chars(word: str, casing: Casing) -> list[str]:
    out: list[str] = []
    for ch in word:
        if casing is Casing.LOWER:
            out.append(ch.lower())
        elif casing is Casing.CASE_FEATURE and ch.isupper():
            out.extend([CASE_MARKER, ch.lower()])
        else:
            out.append(ch)
    return out


def encode_input(sentence: str, level: Level, casing: Casing = Casing.KEEP) -> TokenSeq:
    """Encode a raw sentence for sequence models.

    At the character level every character is a token and spaces become the
    dedicated space token; at the word level tokens are whitespace-split
    words.  The case feature lowercases and emits a marker token instead
    (before each uppercase character, or before each capitalized word)."""
    tokens: list[str] = []
    if level is Level.CHAR:
        for ch in sentence:
            if ch.isspace():
                tokens.append(SPACE_TOKEN)
            else:
                tokens.extend(_encode_word_chars(ch, casing))
    elif level is Level.WORD:
        for word in sentence.split():
            if casing is Casing.LOWER:
                tokens.append(word.lower())
            elif casing is Casing.CASE_FEATURE and word[:1].isupper():
                tokens.extend([CASE_MARKER, word[0].lower() + word[1:]])
            else:
                tokens.append(word)
    else:  # CHARWORD: char tokens of each word, then the word token itself
        for wi, word in enumerate(sentence.split()):
            if wi:
                tokens.append(SPACE_TOKEN)
            tokens.extend(_encode_word_chars(word, casing))
            tokens.append(word if casing is Casing.KEEP else word.lower())
    return TokenSeq(tuple(tokens), level)


def decode_input(seq: TokenSeq, casing: Casing = Casing.KEEP) -> str:
    """Invert encode_input where the combination is invertible.

    Lowercasing is lossy (the lowercased sentence comes back); the case
    feature reserves the marker token, so sentences containing it as text
    only survive the keep mode."""
    feature = casing is Casing.CASE_FEATURE
    tokens = list(seq.tokens)
    if seq.level is Level.WORD:
        words = []
        upper_next = False
        for token in tokens:
            if feature and token == CASE_MARKER:
                upper_next = True
                continue
            words.append(token[:1].upper() + token[1:] if upper_next else token)
            upper_next = False
        return " ".join(words)

    if seq.level is Level.CHARWORD:
        groups: list[list[str]] = [[]]
        for token in tokens:
            if token == SPACE_TOKEN:
                groups.append([])
            else:
                groups[-1].append(token)
        tokens = []
        for gi, group in enumerate(groups):
            if gi:
                tokens.append(SPACE_TOKEN)
            tokens.extend(group[:-1])  # drop the trailing word token

    chars = []
    upper_next = False
    for token in tokens:
        if token == SPACE_TOKEN:
            chars.append(" ")
        elif feature and token == CASE_MARKER:
            upper_next = True
        else:
            chars.append(token.upper() if upper_next else token)
            upper_next = False
    return "".join(chars)
