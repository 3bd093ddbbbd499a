"""Clausal-form data model: terms, clauses, operator tables, parsing, serialization.

A document is a flat list of clauses, one per line.  Every clause starts with a
box label, followed by an operator/role/relation/concept token and its
arguments.  Constants are double-quoted; everything else is a variable or a
bare token.  Blank lines separate documents inside a corpus file; '%' starts a
comment when it appears outside quotes.
"""

from __future__ import annotations

import enum
import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union


class ClausalError(Exception):
    """Base class for all errors raised by this package."""


class MalformedClause(ClausalError):
    """A line that cannot be parsed into a clause."""

    def __init__(self, message: str, *, line: str = "", column: Optional[int] = None,
                 line_no: Optional[int] = None, doc_index: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        self.line_no = line_no
        self.doc_index = doc_index
        where = []
        if doc_index is not None:
            where.append(f"doc {doc_index}")
        if line_no is not None:
            where.append(f"line {line_no}")
        if column is not None:
            where.append(f"col {column}")
        suffix = f" ({', '.join(where)})" if where else ""
        detail = f": {line!r}" if line else ""
        super().__init__(f"{message}{suffix}{detail}")


class UnclassifiableToken(ClausalError):
    """A token in operator position that fits no clause kind."""

    def __init__(self, token: str, reason: str = ""):
        self.token = token
        msg = f"cannot classify token {token!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Variable:
    """A variable token: non-empty, unquoted, no whitespace."""

    name: str

    def token(self) -> str:
        return self.name


@dataclass(frozen=True)
class Constant:
    """A constant; serialized with surrounding double quotes."""

    text: str

    def token(self) -> str:
        return f'"{self.text}"'


Term = Union[Variable, Constant]


class Kind(enum.Enum):
    """Discriminant for the nine clause kinds."""

    REF = "Ref"
    UNARY = "UnaryBoxOp"
    BINARY = "BinaryBoxOp"
    PRP = "Prp"
    SDRS = "SdrsConstituent"
    RELATION = "DiscourseRelation"
    CONCEPT = "Concept"
    ROLE = "Role"
    COMPARISON = "Comparison"


# Number of argument fields that follow the operator token (the concept sense
# constant is part of the kind, not an argument).
ARITY: dict[Kind, int] = {
    Kind.REF: 1,
    Kind.UNARY: 1,
    Kind.BINARY: 2,
    Kind.PRP: 2,
    Kind.SDRS: 1,
    Kind.RELATION: 2,
    Kind.CONCEPT: 1,
    Kind.ROLE: 2,
    Kind.COMPARISON: 2,
}

# Kinds whose arguments must all be variables.
_VARS_ONLY = {Kind.REF, Kind.UNARY, Kind.BINARY, Kind.PRP, Kind.SDRS,
              Kind.RELATION, Kind.CONCEPT}

_RELATION_RE = re.compile(r"[A-Z]+\Z")
_ROLE_RE = re.compile(r"[A-Z][A-Za-z]*\Z")
_CONCEPT_RE = re.compile(r"[a-z][a-z~'._-]*\Z")
_SENSE_RE = re.compile(r"([a-z])\.(\d\d)\Z")
_KNOWN_POS = frozenset("nvar")


@dataclass(frozen=True)
class OperatorTables:
    """Token tables that drive clause classification.

    Classification precedence is fixed: REF, then the three tables, then DRS,
    PRP, all-caps relations, initial-capital roles, lowercase concepts.
    """

    unary: frozenset[str] = frozenset({"NOT", "POS", "NEC"})
    binary: frozenset[str] = frozenset({"IMP", "DIS", "DUP"})
    comparison: frozenset[str] = frozenset({"EQU", "NEQ", "APX", "LES", "LEQ", "TPR", "TAB"})
    deictic: frozenset[str] = frozenset({"now", "speaker", "hearer"})

    @classmethod
    def from_file(cls, path: str) -> "OperatorTables":
        """Load tables from a plain-text config: one token per line under
        [unary] / [binary] / [comparison] / [deictic] section headers."""
        sections: dict[str, set[str]] = {"unary": set(), "binary": set(),
                                         "comparison": set(), "deictic": set()}
        current: Optional[set[str]] = None
        with open(path, encoding="utf-8") as handle:
            for raw in handle:
                line = raw.split("%", 1)[0].strip()
                if not line:
                    continue
                if line.startswith("[") and line.endswith("]"):
                    name = line[1:-1].strip().lower()
                    if name not in sections:
                        raise ClausalError(f"unknown section {name!r} in {path}")
                    current = sections[name]
                    continue
                if current is None:
                    raise ClausalError(f"token {line!r} before any section in {path}")
                current.add(line)
        return cls(unary=frozenset(sections["unary"]),
                   binary=frozenset(sections["binary"]),
                   comparison=frozenset(sections["comparison"]),
                   deictic=frozenset(sections["deictic"]) or cls.deictic)


DEFAULT_TABLES = OperatorTables()


@dataclass(frozen=True)
class Clause:
    """One clause: box label, kind, operator token, optional sense, arguments."""

    box: Variable
    kind: Kind
    op: str
    sense: Optional[str]
    args: tuple[Term, ...]

    def tokens(self) -> list[str]:
        out = [self.box.name, self.op]
        if self.kind is Kind.CONCEPT:
            out.append(f'"{self.sense}"')
        out.extend(t.token() for t in self.args)
        return out

    def line(self) -> str:
        return " ".join(self.tokens())


@dataclass(frozen=True)
class ClausalForm:
    """An ordered clause list for one document."""

    clauses: tuple[Clause, ...]
    doc_id: Optional[str] = None

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def with_clauses(self, clauses: Iterable[Clause]) -> "ClausalForm":
        return ClausalForm(tuple(clauses), doc_id=self.doc_id)


# ---------------------------------------------------------------------------
# Tokenization

def strip_comment(line: str) -> str:
    """Drop everything from the first '%' that sits outside double quotes."""
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "%" and not in_quote:
            return line[:i]
    return line


def tokenize_clause(line: str) -> list[str]:
    """Split a clause line on whitespace, keeping quoted spans intact."""
    tokens: list[str] = []
    current: list[str] = []
    in_quote = False
    quote_start = -1
    for i, ch in enumerate(line):
        if ch == '"':
            if not in_quote:
                quote_start = i
            in_quote = not in_quote
            current.append(ch)
        elif ch.isspace() and not in_quote:
            if current:
                tokens.append("".join(current))
                current = []
        else:
            current.append(ch)
    if in_quote:
        raise MalformedClause("unterminated quote", line=line, column=quote_start)
    if current:
        tokens.append("".join(current))
    return tokens


def _is_quoted(token: str) -> bool:
    return len(token) >= 2 and token.startswith('"') and token.endswith('"') \
        and '"' not in token[1:-1]


def _term_from_token(token: str, line: str) -> Term:
    if _is_quoted(token):
        return Constant(token[1:-1])
    if '"' in token:
        raise MalformedClause(f"stray quote in token {token!r}", line=line)
    return Variable(token)


# ---------------------------------------------------------------------------
# Classification and parsing

def classify_token(token: str, tables: OperatorTables = DEFAULT_TABLES) -> Kind:
    """Classify the token in operator position into a clause kind."""
    if not token:
        raise UnclassifiableToken(token, "empty token")
    if token == "REF":
        return Kind.REF
    if token in tables.unary:
        return Kind.UNARY
    if token in tables.binary:
        return Kind.BINARY
    if token in tables.comparison:
        return Kind.COMPARISON
    if token == "DRS":
        return Kind.SDRS
    if token == "PRP":
        return Kind.PRP
    if _RELATION_RE.fullmatch(token):
        return Kind.RELATION
    if _ROLE_RE.fullmatch(token):
        return Kind.ROLE
    if _CONCEPT_RE.fullmatch(token):
        return Kind.CONCEPT
    if any(ch.isdigit() for ch in token):
        raise UnclassifiableToken(token, "digits in operator position")
    raise UnclassifiableToken(token, "mixed-case token is neither role nor concept")


def parse_clause(line: str, tables: OperatorTables = DEFAULT_TABLES, *,
                 line_no: Optional[int] = None, doc_index: Optional[int] = None) -> Clause:
    """Parse one clause line; comments and surrounding whitespace are ignored."""

    def fail(message: str, column: Optional[int] = None) -> "MalformedClause":
        return MalformedClause(message, line=line.rstrip("\n"), column=column,
                               line_no=line_no, doc_index=doc_index)

    text = strip_comment(line).strip()
    if not text:
        raise fail("empty clause line")
    try:
        tokens = tokenize_clause(text)
    except MalformedClause as exc:
        raise fail(exc.message, exc.column) from None
    if len(tokens) < 2:
        raise fail("clause needs at least a box label and an operator")

    box_tok, op_tok = tokens[0], tokens[1]
    if '"' in box_tok:
        raise fail("box label must be an unquoted variable", column=0)
    if '"' in op_tok:
        raise fail("operator position holds a constant")
    try:
        kind = classify_token(op_tok, tables)
    except UnclassifiableToken as exc:
        raise fail(str(exc)) from None

    sense: Optional[str] = None
    arg_tokens = tokens[2:]
    if kind is Kind.CONCEPT:
        if len(tokens) != 4:
            raise fail("concept clause takes a sense constant and one referent")
        sense_tok = tokens[2]
        if not _is_quoted(sense_tok):
            raise fail(f"concept sense must be a quoted constant, got {sense_tok!r}")
        match = _SENSE_RE.fullmatch(sense_tok[1:-1])
        if not match:
            raise fail(f"concept sense must look like \"p.nn\", got {sense_tok}")
        if match.group(1) not in _KNOWN_POS:
            warnings.warn(f"unknown part-of-speech letter in sense {sense_tok}",
                          stacklevel=2)
        sense = sense_tok[1:-1]
        arg_tokens = tokens[3:]
    else:
        arity = ARITY[kind]
        if len(arg_tokens) != arity:
            if kind is Kind.RELATION:
                raise fail(f"discourse relation {op_tok!r} takes exactly two box "
                           f"arguments, got {len(arg_tokens)}")
            raise fail(f"{op_tok!r} takes {arity} argument(s), got {len(arg_tokens)}")

    args = tuple(_term_from_token(t, text) for t in arg_tokens)
    if kind in _VARS_ONLY or kind is Kind.CONCEPT:
        for term in args:
            if isinstance(term, Constant):
                raise fail(f"{op_tok!r} does not accept constant arguments")
    return Clause(box=Variable(box_tok), kind=kind, op=op_tok, sense=sense, args=args)


# ---------------------------------------------------------------------------
# Corpus I/O

Block = list[tuple[int, str]]


def iter_blocks(text: str) -> list[Block]:
    """Split corpus text into documents: lists of (line_no, clause line).

    Comments are stripped first, so a line holding only a comment acts like a
    blank line boundary only when the document is already closed by a real
    blank; inside a document it is simply skipped.
    """
    blocks: list[Block] = []
    current: Block = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = strip_comment(raw).strip()
        if not stripped:
            if not raw.strip() and current:
                blocks.append(current)
                current = []
            continue
        current.append((line_no, stripped))
    if current:
        blocks.append(current)
    return blocks


def parse_corpus(source: Union[str, Iterable[str]],
                 tables: OperatorTables = DEFAULT_TABLES) -> list[ClausalForm]:
    """Parse corpus text (or an iterable of lines) into clausal forms."""
    text = source if isinstance(source, str) else "".join(source)
    forms: list[ClausalForm] = []
    for doc_index, block in enumerate(iter_blocks(text)):
        clauses = [parse_clause(line, tables, line_no=line_no, doc_index=doc_index)
                   for line_no, line in block]
        forms.append(ClausalForm(tuple(clauses)))
    return forms


def serialize(form: ClausalForm) -> str:
    """Render a form as clause lines; empty forms serialize to empty text."""
    if not form.clauses:
        return ""
    return "\n".join(c.line() for c in form.clauses) + "\n"


def serialize_corpus(forms: Iterable[ClausalForm]) -> str:
    """Render forms separated by single blank lines."""
    parts = [serialize(f) for f in forms]
    return "\n".join(parts)
