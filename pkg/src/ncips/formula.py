"""Non-commutative formula trees: ordered binary +/* gates over variables
and field constants.

Gate ids are pre-order indices (root = 0), recomputed from structure, so
any edit re-issues them.  Trees are immutable and share subterms freely.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .fields import Field, check_same_field
from .poly import DEFAULT_TERM_CAP, NcPoly

log = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class Const:
    value: object


@dataclass(frozen=True, slots=True)
class Plus:
    left: "Node"
    right: "Node"


@dataclass(frozen=True, slots=True)
class Times:
    left: "Node"
    right: "Node"


Node = Var | Const | Plus | Times


@dataclass(frozen=True)
class Formula:
    field: Field
    root: Node

    def __repr__(self):
        return f"Formula[{self.field.name}]({format_formula(self)})"


@dataclass(frozen=True)
class Metrics:
    size: int
    depth: int
    syntactic_degree: int


class FormulaParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# structure helpers

def node_size(node: Node) -> int:
    stack, n = [node], 0
    while stack:
        nd = stack.pop()
        n += 1
        if type(nd) in (Plus, Times):
            stack.append(nd.left)
            stack.append(nd.right)
    return n


def node_depth(node: Node) -> int:
    if type(node) in (Var, Const):
        return 0
    return 1 + max(node_depth(node.left), node_depth(node.right))


def _syntactic_degree(node: Node) -> int:
    t = type(node)
    if t is Var:
        return 1
    if t is Const:
        return 0
    a = _syntactic_degree(node.left)
    b = _syntactic_degree(node.right)
    return max(a, b) if t is Plus else a + b


def metrics(f: Formula) -> Metrics:
    return Metrics(
        size=node_size(f.root),
        depth=node_depth(f.root),
        syntactic_degree=_syntactic_degree(f.root),
    )


def gate_count(f: Formula) -> int:
    return node_size(f.root)


def preorder_nodes(f: Formula) -> list[Node]:
    """Nodes indexed by gate id (pre-order, root first, left before right)."""
    out: list[Node] = []
    stack = [f.root]
    while stack:
        nd = stack.pop()
        out.append(nd)
        if type(nd) in (Plus, Times):
            stack.append(nd.right)
            stack.append(nd.left)
    return out


def node_at_gate(f: Formula, gate_id: int) -> Node:
    nodes = preorder_nodes(f)
    if not 0 <= gate_id < len(nodes):
        raise ValueError(f"gate id {gate_id} out of range (formula has {len(nodes)} gates)")
    return nodes[gate_id]


def variables(f: Formula) -> list[int]:
    seen = set()
    stack = [f.root]
    while stack:
        nd = stack.pop()
        t = type(nd)
        if t is Var:
            seen.add(nd.index)
        elif t in (Plus, Times):
            stack.append(nd.left)
            stack.append(nd.right)
    return sorted(seen)


def count_occurrences(f: Formula, x: int) -> int:
    n = 0
    stack = [f.root]
    while stack:
        nd = stack.pop()
        t = type(nd)
        if t is Var and nd.index == x:
            n += 1
        elif t in (Plus, Times):
            stack.append(nd.left)
            stack.append(nd.right)
    return n


# ---------------------------------------------------------------------------
# text format

_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")
_VAR_RE = re.compile(r"^x([0-9]+)$")
_YVAR_RE = re.compile(r"^y([0-9]+)$")
_CONST_RE = re.compile(r"^-?[0-9]+(/[0-9]+)?$")


def _tokenize(text: str):
    line = 1
    line_start = 0
    pos = 0
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        gap = text[pos : m.start()]
        line += gap.count("\n")
        if "\n" in gap:
            line_start = pos + gap.rindex("\n") + 1
        tokens.append((m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    return tokens


def parse_formula(text: str, field: Field, y_base: int | None = None) -> Formula:
    """Parse the s-expression grammar: expr := var | const | (op expr expr).

    op is +, * or the - sugar, which desugars to a + (-1 * b).  y<k>
    tokens are accepted only when y_base is given and map to variable
    index y_base + k.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaParseError("empty input", 1, 1)
    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else (None, tokens[-1][1], tokens[-1][2])

    def take():
        nonlocal idx
        tok = peek()
        idx += 1
        return tok

    def parse_expr() -> Node:
        tok, line, col = take()
        if tok is None:
            raise FormulaParseError("unexpected end of input", line, col)
        if tok == "(":
            op, oline, ocol = take()
            if op not in ("+", "*", "-"):
                raise FormulaParseError(f"unknown operator {op!r}", oline, ocol)
            left = parse_expr()
            right = parse_expr()
            ctok, cline, ccol = take()
            if ctok != ")":
                raise FormulaParseError("expected ')'", cline, ccol)
            if op == "+":
                return Plus(left, right)
            if op == "*":
                return Times(left, right)
            return Plus(left, Times(Const(field.from_int(-1)), right))
        if tok == ")":
            raise FormulaParseError("unexpected ')'", line, col)
        m = _VAR_RE.match(tok)
        if m:
            index = int(m.group(1))
            if index < 1:
                raise FormulaParseError("variable indices are 1-based", line, col)
            return Var(index)
        m = _YVAR_RE.match(tok)
        if m:
            if y_base is None:
                raise FormulaParseError("y-variables are not allowed here", line, col)
            index = int(m.group(1))
            if index < 1:
                raise FormulaParseError("y-variable indices are 1-based", line, col)
            return Var(y_base + index)
        if _CONST_RE.match(tok):
            try:
                return Const(field.parse(tok))
            except ValueError as exc:
                raise FormulaParseError(str(exc), line, col) from None
        raise FormulaParseError(f"unrecognized token {tok!r}", line, col)

    root = parse_expr()
    if idx != len(tokens):
        tok, line, col = tokens[idx]
        raise FormulaParseError(f"trailing input starting at {tok!r}", line, col)
    return Formula(field, root)


def format_formula(f: Formula, y_base: int | None = None) -> str:
    """Canonical text; parse(format(f)) reproduces f exactly."""
    field = f.field

    def fmt(node: Node) -> str:
        t = type(node)
        if t is Var:
            if y_base is not None and node.index > y_base:
                return f"y{node.index - y_base}"
            return f"x{node.index}"
        if t is Const:
            return field.to_text(node.value)
        op = "+" if t is Plus else "*"
        return f"({op} {fmt(node.left)} {fmt(node.right)})"

    return fmt(f.root)


# ---------------------------------------------------------------------------
# semantics

def evaluate(f: Formula, assignment: dict[int, object]):
    """Field value of f at a total assignment to its variables."""
    field = f.field

    def ev(node: Node):
        t = type(node)
        if t is Var:
            try:
                return assignment[node.index]
            except KeyError:
                raise ValueError(f"assignment is missing variable x{node.index}") from None
        if t is Const:
            return node.value
        a = ev(node.left)
        b = ev(node.right)
        return field.add(a, b) if t is Plus else field.mul(a, b)

    return ev(f.root)


def expand(f: Formula, cap: int = DEFAULT_TERM_CAP) -> NcPoly:
    """The polynomial computed by f, as a canonical sparse map (the
    brute-force oracle; raises TermBudgetError past the cap)."""
    field = f.field

    def ex(node: Node) -> NcPoly:
        t = type(node)
        if t is Var:
            return NcPoly.variable(field, node.index)
        if t is Const:
            return NcPoly.const(field, node.value)
        a = ex(node.left)
        b = ex(node.right)
        return a + b if t is Plus else a.mul(b, cap)

    return ex(f.root)


def substitute_var(f: Formula, x: int, g: Formula) -> Formula:
    """Replace every occurrence of x in f by (a copy of) g."""
    check_same_field(f.field, g.field)
    replacement = g.root

    def sub(node: Node) -> Node:
        t = type(node)
        if t is Var:
            return replacement if node.index == x else node
        if t is Const:
            return node
        left = sub(node.left)
        right = sub(node.right)
        if left is node.left and right is node.right:
            return node
        return Plus(left, right) if t is Plus else Times(left, right)

    return Formula(f.field, sub(f.root))


# ---------------------------------------------------------------------------
# induced parts

@dataclass(frozen=True)
class InducedPart:
    """A subformula (by root gate id) with some of its gates replaced by
    constants; substitutions are (gate id, constant) pairs sorted by id."""

    root: int
    subs: tuple[tuple[int, object], ...]


def induced_part(root: int, subs: dict[int, object] | None = None) -> InducedPart:
    return InducedPart(root, tuple(sorted((subs or {}).items())))


def apply_induced_part(f: Formula, part: InducedPart) -> Formula:
    nodes = preorder_nodes(f)
    if not 0 <= part.root < len(nodes):
        raise ValueError(f"dangling gate id {part.root}")
    root_node = nodes[part.root]
    span = node_size(root_node)
    subs = dict(part.subs)
    for gid in subs:
        if not part.root <= gid < part.root + span:
            raise ValueError(f"dangling gate id {gid} (outside subtree at {part.root})")

    sizes: dict[int, int] = {}

    def size_of(node: Node) -> int:
        key = id(node)
        s = sizes.get(key)
        if s is None:
            if type(node) in (Var, Const):
                s = 1
            else:
                s = 1 + size_of(node.left) + size_of(node.right)
            sizes[key] = s
        return s

    def rebuild(node: Node, gid: int) -> Node:
        if gid in subs:
            return Const(subs[gid])
        t = type(node)
        if t in (Var, Const):
            return node
        left = rebuild(node.left, gid + 1)
        right = rebuild(node.right, gid + 1 + size_of(node.left))
        if left is node.left and right is node.right:
            return node
        return Plus(left, right) if t is Plus else Times(left, right)

    return Formula(f.field, rebuild(root_node, part.root))


# ---------------------------------------------------------------------------
# constant folding and homogeneity bookkeeping

def fold_zero_one(f: Formula) -> Formula:
    """Remove 0/1 identities only (0*g -> 0, 1*g -> g, 0+g -> g, both
    sides).  Semantics-preserving; anything beyond these is left alone."""
    field = f.field
    zero, one = field.zero, field.one
    folds = 0

    def fold(node: Node) -> Node:
        nonlocal folds
        t = type(node)
        if t in (Var, Const):
            return node
        left = fold(node.left)
        right = fold(node.right)
        lconst = type(left) is Const
        rconst = type(right) is Const
        if t is Plus:
            if lconst and left.value == zero:
                folds += 1
                return right
            if rconst and right.value == zero:
                folds += 1
                return left
        else:
            if (lconst and left.value == zero) or (rconst and right.value == zero):
                folds += 1
                return Const(zero)
            if lconst and left.value == one:
                folds += 1
                return right
            if rconst and right.value == one:
                folds += 1
                return left
        if left is node.left and right is node.right:
            return node
        return Plus(left, right) if t is Plus else Times(left, right)

    root = fold(f.root)
    if folds:
        log.debug("fold_zero_one removed %d identity gates", folds)
    return Formula(field, root)


_ANNIHILATED = object()  # marker: gate syntactically forced to zero


def _homog_degree(node: Node, zero):
    t = type(node)
    if t is Var:
        return 1
    if t is Const:
        return _ANNIHILATED if node.value == zero else 0
    a = _homog_degree(node.left, zero)
    b = _homog_degree(node.right, zero)
    if a is None or b is None:
        return None
    if t is Plus:
        if a is _ANNIHILATED:
            return b
        if b is _ANNIHILATED:
            return a
        return a if a == b else None
    if a is _ANNIHILATED or b is _ANNIHILATED:
        return _ANNIHILATED
    return a + b


def syntactic_homogeneous_degree(f: Formula) -> int | None:
    """Degree if every gate computes a homogeneous polynomial (checked by
    degree bookkeeping with an annihilated marker for zero-forced gates);
    None otherwise.  Formulas forced to zero report degree 0."""
    d = _homog_degree(f.root, f.field.zero)
    if d is _ANNIHILATED:
        return 0
    return d


def is_syntactically_homogeneous(f: Formula) -> bool:
    return syntactic_homogeneous_degree(f) is not None
