"""Well-formedness checker for clausal forms.

Validation runs five ordered constraints: consistent variable typing, referent
introduction and accessibility, box-reference grounding, acyclicity of the
subordination closure, and main-box uniqueness.  The verdict carries the first
violated constraint together with a witness.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

from .clausal import (ClausalForm, Clause, ClausalError, Constant, Kind,
                      MalformedClause, OperatorTables, DEFAULT_TABLES,
                      Variable, parse_clause, iter_blocks)


class VarType(enum.Enum):
    BOX = "Box"
    ENTITY = "Entity"


class Reason(enum.Enum):
    TYPE_CLASH = "TypeClash"
    FREE_ENTITY_VARIABLE = "FreeEntityVariable"
    UNINTRODUCED_DISCOURSE_REFERENT = "UnintroducedDiscourseReferent"
    DANGLING_BOX_REFERENCE = "DanglingBoxReference"
    RELATION_OUTSIDE_SEGMENTED_DRS = "RelationOutsideSegmentedDrs"
    ACCESSIBILITY_CYCLE = "AccessibilityCycle"
    NO_UNIQUE_MAIN_BOX = "NoUniqueMainBox"
    SYNTAX_ERROR = "SyntaxError"


class TypeClash(ClausalError):
    """One variable name forced to both the box and the entity type."""

    def __init__(self, name: str, first: tuple[int, int], second: tuple[int, int]):
        self.name = name
        self.first = first
        self.second = second
        super().__init__(
            f"variable {name!r} used as both box and entity "
            f"(clause {first[0]} field {first[1]} vs clause {second[0]} field {second[1]})")


class RequiresValidForm(ClausalError):
    """An operation that needs a checker-valid form got an invalid one."""

    def __init__(self, reason: "Reason", detail: str = ""):
        self.reason = reason
        self.detail = detail
        msg = f"form fails validation: {reason.value}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


@dataclass(frozen=True)
class TypingTable:
    """Variable name to type, with the clause/field position that forced it."""

    types: dict[str, VarType]
    witness: dict[str, tuple[int, int]]

    def __getitem__(self, name: str) -> VarType:
        return self.types[name]


def _typed_positions(clause: Clause):
    """Yield (name, type, field index) for every variable slot of a clause."""
    yield clause.box.name, VarType.BOX, 0
    offset = 3 if clause.kind is Kind.CONCEPT else 2
    kind = clause.kind
    for i, term in enumerate(clause.args):
        if isinstance(term, Constant):
            continue
        if kind in (Kind.UNARY, Kind.BINARY, Kind.SDRS, Kind.RELATION):
            var_type = VarType.BOX
        elif kind is Kind.PRP:
            var_type = VarType.ENTITY if i == 0 else VarType.BOX
        else:  # REF, CONCEPT, ROLE, COMPARISON
            var_type = VarType.ENTITY
        yield term.name, var_type, offset + i


def induce_types(form: ClausalForm) -> TypingTable:
    """Assign each variable a type from the positions it occupies."""
    types: dict[str, VarType] = {}
    witness: dict[str, tuple[int, int]] = {}
    for ci, clause in enumerate(form.clauses):
        for name, var_type, fi in _typed_positions(clause):
            seen = types.get(name)
            if seen is None:
                types[name] = var_type
                witness[name] = (ci, fi)
            elif seen is not var_type:
                raise TypeClash(name, witness[name], (ci, fi))
    return TypingTable(types, witness)


# ---------------------------------------------------------------------------
# Accessibility

@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    label: str  # operator token for explicit edges, entity name for induced


@dataclass(frozen=True)
class AccessibilityGraph:
    """Subordination edges between boxes, outscoper to subordinate."""

    nodes: frozenset[str]
    explicit: tuple[Edge, ...]
    induced: tuple[Edge, ...]
    constituents: dict[str, frozenset[str]]

    def closure(self) -> dict[str, set[str]]:
        return _closure(self.nodes, self.explicit + self.induced)


def _closure(nodes, edges) -> dict[str, set[str]]:
    adjacency: dict[str, set[str]] = {}
    for edge in edges:
        adjacency.setdefault(edge.src, set()).add(edge.dst)
    reach: dict[str, set[str]] = {}
    for node in nodes:
        seen: set[str] = set()
        stack = list(adjacency.get(node, ()))
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(adjacency.get(current, ()))
        reach[node] = seen
    return reach


def _explicit_edges(form: ClausalForm) -> tuple[list[Edge], dict[str, set[str]]]:
    edges: list[Edge] = []
    constituents: dict[str, set[str]] = {}
    for clause in form.clauses:
        box = clause.box.name
        kind = clause.kind
        if kind is Kind.UNARY:
            edges.append(Edge(box, clause.args[0].name, clause.op))
        elif kind is Kind.BINARY:
            first, second = (t.name for t in clause.args)
            if clause.op == "IMP":
                # The antecedent is accessible from the consequent.
                edges.append(Edge(box, first, clause.op))
                edges.append(Edge(first, second, clause.op))
            else:
                edges.append(Edge(box, first, clause.op))
                edges.append(Edge(box, second, clause.op))
        elif kind is Kind.PRP:
            edges.append(Edge(box, clause.args[1].name, clause.op))
        elif kind is Kind.SDRS:
            target = clause.args[0].name
            edges.append(Edge(box, target, clause.op))
            constituents.setdefault(box, set()).add(target)
    return edges, constituents


@dataclass(frozen=True)
class _Violation:
    reason: Reason
    detail: str


def _entity_uses(form: ClausalForm, typing: TypingTable):
    """Yield (entity name, box name, clause index) for every non-REF use."""
    for ci, clause in enumerate(form.clauses):
        if clause.kind is Kind.REF:
            continue
        for term in clause.args:
            if isinstance(term, Variable) and typing.types.get(term.name) is VarType.ENTITY:
                yield term.name, clause.box.name, ci


def _bind_entities(form: ClausalForm, typing: TypingTable, nodes: frozenset[str],
                   explicit: list[Edge]):
    """Accommodate referent binders by adding induced edges.

    Returns (induced edges, binder map, violations in clause order).  A binder
    edge p -> b is added when entity u is used in box b but introduced in p
    with no existing path; if every introducing box is itself subordinate to b
    the use is free.
    """
    intros: dict[str, list[str]] = {}
    for clause in form.clauses:
        if clause.kind is Kind.REF:
            intros.setdefault(clause.args[0].name, []).append(clause.box.name)

    edges = list(explicit)
    induced: list[Edge] = []
    binders: dict[str, str] = {}
    violations: list[_Violation] = []
    reported: set[str] = set()
    reach = _closure(nodes, edges)

    for name, box, ci in _entity_uses(form, typing):
        if name in reported:
            continue
        intro_boxes = intros.get(name)
        if not intro_boxes:
            reported.add(name)
            violations.append(_Violation(
                Reason.UNINTRODUCED_DISCOURSE_REFERENT,
                f"referent {name!r} used in clause {ci} has no REF introduction"))
            continue
        if name in binders:
            p = binders[name]
            if p == box or box in reach.get(p, set()):
                continue
        if box in intro_boxes:
            binders.setdefault(name, box)
            continue
        hit = next((p for p in intro_boxes if box in reach.get(p, set())), None)
        if hit is not None:
            binders.setdefault(name, hit)
            continue
        candidate = next((p for p in intro_boxes if p not in reach.get(box, set())), None)
        if candidate is None:
            reported.add(name)
            violations.append(_Violation(
                Reason.FREE_ENTITY_VARIABLE,
                f"referent {name!r} used in box {box!r} (clause {ci}) outside "
                f"the scope of its introduction"))
            continue
        edge = Edge(candidate, box, name)
        edges.append(edge)
        induced.append(edge)
        binders[name] = candidate
        reach = _closure(nodes, edges)
    return induced, binders, violations


def build_accessibility(form: ClausalForm, typing: TypingTable) -> AccessibilityGraph:
    """Assemble explicit operator edges plus induced binder edges."""
    nodes = frozenset(n for n, t in typing.types.items() if t is VarType.BOX)
    explicit, constituents = _explicit_edges(form)
    induced, _, _ = _bind_entities(form, typing, nodes, explicit)
    return AccessibilityGraph(
        nodes=nodes,
        explicit=tuple(explicit),
        induced=tuple(induced),
        constituents={k: frozenset(v) for k, v in constituents.items()})


# ---------------------------------------------------------------------------
# Verdict

@dataclass(frozen=True)
class CheckReport:
    """Validation outcome; valid iff reason is None iff main_box is set."""

    valid: bool
    reason: Optional[Reason]
    detail: str
    typing: Optional[TypingTable] = None
    graph: Optional[AccessibilityGraph] = None
    main_box: Optional[str] = None
    presupposition_boxes: frozenset[str] = frozenset()
    binders: dict[str, str] = field(default_factory=dict)


def _invalid(reason: Reason, detail: str, **extras) -> CheckReport:
    return CheckReport(valid=False, reason=reason, detail=detail, **extras)


def check(form: ClausalForm) -> CheckReport:
    """Run the five ordered constraints and report the first violation."""
    try:
        typing = induce_types(form)
    except TypeClash as exc:
        return _invalid(Reason.TYPE_CLASH, str(exc))

    nodes = frozenset(n for n, t in typing.types.items() if t is VarType.BOX)
    explicit, constituent_sets = _explicit_edges(form)
    induced, binders, violations = _bind_entities(form, typing, nodes, explicit)
    graph = AccessibilityGraph(
        nodes=nodes, explicit=tuple(explicit), induced=tuple(induced),
        constituents={k: frozenset(v) for k, v in constituent_sets.items()})

    if violations:
        first = violations[0]
        return _invalid(first.reason, first.detail, typing=typing, graph=graph)

    # Box references must be grounded; relation arguments must additionally be
    # constituents of the relation's host box.
    labeled = {c.box.name for c in form.clauses}
    grounded = labeled | {b for members in constituent_sets.values() for b in members}
    for ci, clause in enumerate(form.clauses):
        box_args = [t.name for t in clause.args
                    if isinstance(t, Variable) and typing.types.get(t.name) is VarType.BOX]
        for name in box_args:
            if name not in grounded:
                return _invalid(
                    Reason.DANGLING_BOX_REFERENCE,
                    f"box {name!r} in clause {ci} labels no clause and is no constituent",
                    typing=typing, graph=graph)
        if clause.kind is Kind.RELATION:
            members = constituent_sets.get(clause.box.name, set())
            for name in box_args:
                if name not in members:
                    return _invalid(
                        Reason.RELATION_OUTSIDE_SEGMENTED_DRS,
                        f"relation argument {name!r} in clause {ci} is not a "
                        f"constituent of {clause.box.name!r}",
                        typing=typing, graph=graph)

    reach = graph.closure()
    for node in sorted(nodes):
        if node in reach[node]:
            return _invalid(Reason.ACCESSIBILITY_CYCLE,
                            f"box {node!r} subordinates itself",
                            typing=typing, graph=graph)

    # Main box: among boxes with no incoming explicit edge, presuppositional
    # ones carry only induced out-edges; exactly one remaining candidate must
    # reach every non-presupposition box through the closure.
    explicit_in = {e.dst for e in explicit}
    explicit_out = {e.src for e in explicit}
    induced_out = {e.src for e in induced}
    roots = {n for n in nodes if n not in explicit_in}
    presupp = frozenset(r for r in roots
                        if r in induced_out and r not in explicit_out)
    candidates = sorted(roots - presupp)
    non_presupp = nodes - presupp
    mains = [m for m in candidates if non_presupp <= (reach[m] | {m})]
    if len(mains) != 1:
        return _invalid(
            Reason.NO_UNIQUE_MAIN_BOX,
            f"{len(mains)} main-box candidates among roots {candidates}",
            typing=typing, graph=graph)

    return CheckReport(valid=True, reason=None, detail="", typing=typing,
                       graph=graph, main_box=mains[0],
                       presupposition_boxes=presupp, binders=binders)


def check_text(text: str, tables: OperatorTables = DEFAULT_TABLES) -> CheckReport:
    """Check one document given as raw clause lines; parse failures yield a
    SyntaxError verdict instead of an exception."""
    blocks = iter_blocks(text)
    if len(blocks) > 1:
        return _invalid(Reason.SYNTAX_ERROR, "multiple documents in one block")
    lines = blocks[0] if blocks else []
    clauses = []
    for line_no, line in lines:
        try:
            clauses.append(parse_clause(line, tables, line_no=line_no))
        except MalformedClause as exc:
            return _invalid(Reason.SYNTAX_ERROR, str(exc))
    return check(ClausalForm(tuple(clauses)))


def is_well_formed_syntax(doc: Union[str, ClausalForm],
                          tables: OperatorTables = DEFAULT_TABLES) -> bool:
    """True iff every line parses as a clause with correct arity."""
    if isinstance(doc, ClausalForm):
        return True
    for block in iter_blocks(doc):
        for line_no, line in block:
            try:
                parse_clause(line, tables, line_no=line_no)
            except MalformedClause:
                return False
    return True


def require_valid(form: ClausalForm) -> CheckReport:
    """Return the report for a valid form or raise RequiresValidForm."""
    report = check(form)
    if not report.valid:
        raise RequiresValidForm(report.reason, report.detail)
    return report
