"""CNF ingestion, polynomial translations, the formula-calculus proof
checker, and the compiler from tree-like refutations into single-formula
certificates with a deterministic verifier.

Proof lines are formulas treated as syntax: the product rule multiplies
by a variable on the left, the addition rule combines two lines with
scalar coefficients, and the local rewrite rules apply one ring-axiom
instance at an explicit position.  Only the product-commutativity
rewrite can change the computed (non-commutative) polynomial, which is
exactly what the commutator axioms repair during compilation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Field, check_same_field
from .formula import (
    Const,
    Formula,
    Node,
    Plus,
    Times,
    Var,
    evaluate,
    expand,
    fold_zero_one,
    format_formula,
    node_size,
    parse_formula,
    variables,
)
from .pit import is_identically_zero
from .poly import DEFAULT_TERM_CAP

REWRITE_RULES = (
    "zero",
    "unit",
    "scalar",
    "comm-add",
    "comm-mul",
    "assoc-add",
    "assoc-mul",
    "distrib",
)


# ---------------------------------------------------------------------------
# CNF and DIMACS

@dataclass(frozen=True)
class Cnf:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]


def parse_dimacs(text: str) -> Cnf:
    num_vars = None
    declared_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ValueError(f"malformed header at line {lineno}: {line!r}")
            num_vars = int(parts[2])
            declared_clauses = int(parts[3])
            continue
        if num_vars is None:
            raise ValueError(f"clause data before the p cnf header at line {lineno}")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if not current:
                    raise ValueError(f"empty clause at line {lineno}")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > num_vars:
                    raise ValueError(f"literal {lit} out of range at line {lineno}")
                current.append(lit)
    if current:
        raise ValueError("missing terminating 0 after the last clause")
    if num_vars is None:
        raise ValueError("missing p cnf header")
    if declared_clauses is not None and declared_clauses != len(clauses):
        raise ValueError(
            f"header declares {declared_clauses} clauses but {len(clauses)} were given"
        )
    return Cnf(num_vars, tuple(clauses))


def format_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for cl in cnf.clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# propositional formulas and the two polynomial translations

@dataclass(frozen=True)
class PropVar:
    index: int


@dataclass(frozen=True)
class PropConst:
    value: bool


@dataclass(frozen=True)
class PropNot:
    arg: "Prop"


@dataclass(frozen=True)
class PropOr:
    left: "Prop"
    right: "Prop"


@dataclass(frozen=True)
class PropAnd:
    left: "Prop"
    right: "Prop"


Prop = PropVar | PropConst | PropNot | PropOr | PropAnd


def parse_prop(text: str) -> Prop:
    """(not e), (or e e), (and e e), x<k>, true, false."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse_expr() -> Prop:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of propositional formula")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            op = tokens[pos]
            pos += 1
            if op == "not":
                arg = parse_expr()
                out: Prop = PropNot(arg)
            elif op in ("or", "and"):
                a = parse_expr()
                b = parse_expr()
                out = PropOr(a, b) if op == "or" else PropAnd(a, b)
            else:
                raise ValueError(f"unknown connective {op!r}")
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ValueError("expected ')'")
            pos += 1
            return out
        if tok == "true":
            return PropConst(True)
        if tok == "false":
            return PropConst(False)
        if tok.startswith("x") and tok[1:].isdigit():
            return PropVar(int(tok[1:]))
        raise ValueError(f"unrecognized token {tok!r}")

    out = parse_expr()
    if pos != len(tokens):
        raise ValueError("trailing input in propositional formula")
    return out


def prop_eval(t: Prop, point: dict[int, bool]) -> bool:
    k = type(t)
    if k is PropVar:
        return point[t.index]
    if k is PropConst:
        return t.value
    if k is PropNot:
        return not prop_eval(t.arg, point)
    if k is PropOr:
        return prop_eval(t.left, point) or prop_eval(t.right, point)
    return prop_eval(t.left, point) and prop_eval(t.right, point)


def _one_minus(field: Field, node: Node) -> Node:
    return Plus(Const(field.one), Times(Const(field.from_int(-1)), node))


def translate_tr(t: Prop, field: Field) -> Formula:
    """Formula translation with tr(x) = x: satisfied inputs map to 0, so
    tautologies translate to formulas vanishing on every 0-1 point."""

    def tr(node: Prop) -> Node:
        k = type(node)
        if k is PropVar:
            return Var(node.index)
        if k is PropConst:
            return Const(field.zero if node.value else field.one)
        if k is PropNot:
            return _one_minus(field, tr(node.arg))
        if k is PropOr:
            return Times(tr(node.left), tr(node.right))
        return _one_minus(
            field, Times(_one_minus(field, tr(node.left)), _one_minus(field, tr(node.right)))
        )

    return fold_zero_one(Formula(field, tr(t)))


def translate_literal(lit: int, field: Field) -> Node:
    """Clause-side translation: positive literal x -> 1 - x, negated -> x."""
    if lit > 0:
        return _one_minus(field, Var(lit))
    return Var(-lit)


def translate_clause(clause: tuple[int, ...], field: Field) -> Formula:
    """Ordered product of the literal translations (left-associated tree);
    a clause is satisfied at a 0-1 point iff this evaluates to 0 there."""
    node = translate_literal(clause[0], field)
    for lit in clause[1:]:
        node = Times(node, translate_literal(lit, field))
    return fold_zero_one(Formula(field, node))


def translate_cnf(cnf: Cnf, field: Field) -> list[Formula]:
    return [translate_clause(cl, field) for cl in cnf.clauses]


def boolean_axiom_formula(i: int, field: Field) -> Formula:
    return fold_zero_one(Formula(field, Times(Var(i), _one_minus(field, Var(i)))))


def commutator_axiom_formula(i: int, j: int, field: Field) -> Formula:
    node = Plus(
        Times(Var(i), Var(j)),
        Times(Const(field.from_int(-1)), Times(Var(j), Var(i))),
    )
    return fold_zero_one(Formula(field, node))


# ---------------------------------------------------------------------------
# axiom systems

class AxiomSystem:
    """Ordered axiom list with role tags; positions fix the y-variables.

    Built from a CNF the order is: clause translations, then one Boolean
    axiom per variable, then commutators for every pair i < j.
    """

    def __init__(
        self,
        field: Field,
        num_vars: int,
        roles: list[tuple],
        formulas: list[Formula],
        cnf: Cnf | None = None,
    ):
        if len(roles) != len(formulas):
            raise ValueError("roles and formulas must align")
        self.field = field
        self.num_vars = num_vars
        self.roles = list(roles)
        self.formulas = list(formulas)
        self.cnf = cnf
        self._pos = {role: t for t, role in enumerate(self.roles, start=1)}
        if len(self._pos) != len(self.roles):
            raise ValueError("duplicate axiom roles")

    @property
    def y_count(self) -> int:
        return len(self.roles)

    @property
    def y_base(self) -> int:
        return self.num_vars

    def y_position(self, role: tuple) -> int:
        try:
            return self._pos[role]
        except KeyError:
            raise KeyError(f"no axiom with role {role}") from None

    def y_var(self, role: tuple) -> int:
        return self.y_base + self.y_position(role)

    def input_count(self) -> int:
        return sum(1 for r in self.roles if r[0] == "input")

    def input_formula(self, j: int) -> Formula:
        return self.formulas[self.y_position(("input", j)) - 1]

    def commutator_var_map(self) -> dict[tuple[int, int], int]:
        return {
            (r[1], r[2]): self.y_base + t
            for t, r in enumerate(self.roles, start=1)
            if r[0] == "commutator"
        }


def build_axiom_system(cnf: Cnf, field: Field) -> AxiomSystem:
    roles: list[tuple] = []
    formulas: list[Formula] = []
    for j, clause in enumerate(cnf.clauses, start=1):
        roles.append(("input", j))
        formulas.append(translate_clause(clause, field))
    for i in range(1, cnf.num_vars + 1):
        roles.append(("boolean", i))
        formulas.append(boolean_axiom_formula(i, field))
    for i in range(1, cnf.num_vars + 1):
        for j in range(i + 1, cnf.num_vars + 1):
            roles.append(("commutator", i, j))
            formulas.append(commutator_axiom_formula(i, j, field))
    return AxiomSystem(field, cnf.num_vars, roles, formulas, cnf)


# ---------------------------------------------------------------------------
# proof data model

@dataclass(frozen=True)
class InputRef:
    index: int


@dataclass(frozen=True)
class BooleanAxiomRef:
    var: int


@dataclass(frozen=True)
class ProductStep:
    var: int
    premise: int


@dataclass(frozen=True)
class AdditionStep:
    a: object
    b: object
    left: int
    right: int


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    direction: str  # "fwd" | "bwd"
    path: str  # L/R steps from the root
    premise: int


Justification = InputRef | BooleanAxiomRef | ProductStep | AdditionStep | RewriteStep


@dataclass
class ProofLine:
    formula: Formula
    just: Justification


@dataclass
class FpcProof:
    field: Field
    lines: list[ProofLine]
    tree_like: bool = True


@dataclass
class CheckReport:
    ok: bool
    line: int | None = None
    reason: str | None = None

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------
# the checker

def _subformula_at(node: Node, path: str) -> Node | None:
    for step in path:
        if type(node) not in (Plus, Times):
            return None
        node = node.left if step == "L" else node.right
    return node


def _replace_at(node: Node, path: str, replacement: Node) -> Node:
    if not path:
        return replacement
    step, rest = path[0], path[1:]
    if step == "L":
        return type(node)(_replace_at(node.left, rest, replacement), node.right)
    return type(node)(node.left, _replace_at(node.right, rest, replacement))


def _is_const_free_of_vars(node: Node) -> bool:
    t = type(node)
    if t is Var:
        return False
    if t is Const:
        return True
    return _is_const_free_of_vars(node.left) and _is_const_free_of_vars(node.right)


def _rewrite_instance_ok(field: Field, rule: str, told: Node, tnew: Node) -> bool:
    """One forward application of the rule maps told to tnew."""
    if rule == "zero":
        return (
            type(told) is Times
            and type(told.left) is Const
            and told.left.value == field.zero
            and tnew == Const(field.zero)
        )
    if rule == "unit":
        return (
            type(told) is Times
            and type(told.left) is Const
            and told.left.value == field.one
            and tnew == told.right
        )
    if rule == "scalar":
        if not _is_const_free_of_vars(told) or type(tnew) is not Const:
            return False
        return evaluate(Formula(field, told), {}) == tnew.value
    if rule == "comm-add":
        return (
            type(told) is Plus
            and type(tnew) is Plus
            and tnew.left == told.right
            and tnew.right == told.left
        )
    if rule == "comm-mul":
        return (
            type(told) is Times
            and type(tnew) is Times
            and tnew.left == told.right
            and tnew.right == told.left
        )
    if rule == "assoc-add":
        return (
            type(told) is Plus
            and type(told.right) is Plus
            and tnew == Plus(Plus(told.left, told.right.left), told.right.right)
        )
    if rule == "assoc-mul":
        return (
            type(told) is Times
            and type(told.right) is Times
            and tnew == Times(Times(told.left, told.right.left), told.right.right)
        )
    if rule == "distrib":
        return (
            type(told) is Times
            and type(told.right) is Plus
            and tnew
            == Plus(Times(told.left, told.right.left), Times(told.left, told.right.right))
        )
    return False


def _addition_shapes(field: Field, a, b, left: Node, right: Node) -> list[Node]:
    """The literal a*L + b*R tree plus its outer-folded form (coefficient
    1 wrappers dropped, coefficient 0 sides removed); premise subtrees
    are never folded."""
    literal = Plus(Times(Const(a), left), Times(Const(b), right))
    zero, one = field.zero, field.one
    t1 = None if a == zero else (left if a == one else Times(Const(a), left))
    t2 = None if b == zero else (right if b == one else Times(Const(b), right))
    if t1 is None and t2 is None:
        folded: Node = Const(zero)
    elif t1 is None:
        folded = t2
    elif t2 is None:
        folded = t1
    else:
        folded = Plus(t1, t2)
    return [literal] if literal == folded else [literal, folded]


def check_fpc(proof: FpcProof, system: AxiomSystem, tree_like: bool) -> CheckReport:
    """Syntactic line-by-line validation; the first violation is reported.

    Under the tree-like flag each line may be cited as a premise at most
    once (axioms and inputs can be re-derived as fresh lines at will).
    """
    check_same_field(proof.field, system.field)
    field = proof.field
    cited: set[int] = set()

    def take_premise(lineno: int, p: int) -> CheckReport | None:
        if not 1 <= p < lineno:
            return CheckReport(False, lineno, f"premise {p} is not an earlier line")
        if tree_like and p in cited:
            return CheckReport(False, lineno, f"premise reuse: line {p} already consumed")
        cited.add(p)
        return None

    for lineno, line in enumerate(proof.lines, start=1):
        j = line.just
        t = type(j)
        if t is InputRef:
            if not 1 <= j.index <= system.input_count():
                return CheckReport(False, lineno, f"input {j.index} does not exist")
            if line.formula != system.input_formula(j.index):
                return CheckReport(False, lineno, f"formula is not input {j.index}")
        elif t is BooleanAxiomRef:
            if not 1 <= j.var <= system.num_vars:
                return CheckReport(False, lineno, f"no Boolean axiom for x{j.var}")
            if line.formula != boolean_axiom_formula(j.var, field):
                return CheckReport(False, lineno, f"formula is not the Boolean axiom for x{j.var}")
        elif t is ProductStep:
            if not 1 <= j.var <= system.num_vars:
                return CheckReport(False, lineno, f"product variable x{j.var} out of range")
            bad = take_premise(lineno, j.premise)
            if bad is not None:
                return bad
            want = Times(Var(j.var), proof.lines[j.premise - 1].formula.root)
            if line.formula.root != want:
                return CheckReport(False, lineno, f"formula is not x{j.var} * (line {j.premise})")
        elif t is AdditionStep:
            bad = take_premise(lineno, j.left)
            if bad is None:
                bad = take_premise(lineno, j.right)
            if bad is not None:
                return bad
            shapes = _addition_shapes(
                field,
                j.a,
                j.b,
                proof.lines[j.left - 1].formula.root,
                proof.lines[j.right - 1].formula.root,
            )
            if line.formula.root not in shapes:
                return CheckReport(
                    False, lineno, f"formula is not a*(line {j.left}) + b*(line {j.right})"
                )
        elif t is RewriteStep:
            if j.rule not in REWRITE_RULES:
                return CheckReport(False, lineno, f"unknown rewrite rule {j.rule!r}")
            if j.direction not in ("fwd", "bwd"):
                return CheckReport(False, lineno, f"unknown direction {j.direction!r}")
            if any(c not in "LR" for c in j.path):
                return CheckReport(False, lineno, f"malformed path {j.path!r}")
            bad = take_premise(lineno, j.premise)
            if bad is not None:
                return bad
            old_root = proof.lines[j.premise - 1].formula.root
            told = _subformula_at(old_root, j.path)
            tnew = _subformula_at(line.formula.root, j.path)
            if told is None or tnew is None:
                return CheckReport(False, lineno, f"no subformula at path {j.path!r}")
            if _replace_at(old_root, j.path, tnew) != line.formula.root:
                return CheckReport(
                    False, lineno, f"formulas differ outside the rewrite site at path {j.path!r}"
                )
            src, dst = (told, tnew) if j.direction == "fwd" else (tnew, told)
            if not _rewrite_instance_ok(field, j.rule, src, dst):
                return CheckReport(
                    False, lineno, f"rule {j.rule} does not match at path {j.path!r}"
                )
        else:
            return CheckReport(False, lineno, "unknown justification")
    return CheckReport(True)


# ---------------------------------------------------------------------------
# commutator certificates

def _fold_add(field: Field, a: Node, b: Node) -> Node:
    if type(a) is Const and a.value == field.zero:
        return b
    if type(b) is Const and b.value == field.zero:
        return a
    return Plus(a, b)


def _fold_mul(field: Field, a: Node, b: Node) -> Node:
    zero, one = field.zero, field.one
    if type(a) is Const:
        if a.value == zero:
            return a
        if a.value == one:
            return b
    if type(b) is Const:
        if b.value == zero:
            return b
        if b.value == one:
            return a
    return Times(a, b)


def standalone_commutator_ymap(num_vars: int, y_base: int | None = None) -> dict[tuple[int, int], int]:
    """y-variable indices for every pair i < j, in lexicographic order,
    starting right after the x-variables (or after y_base if given)."""
    base = num_vars if y_base is None else y_base
    out = {}
    t = 0
    for i in range(1, num_vars + 1):
        for j in range(i + 1, num_vars + 1):
            t += 1
            out[(i, j)] = base + t
    return out


def commutator_certificate(
    p: Formula, q: Formula, ymap: dict[tuple[int, int], int]
) -> Formula:
    """A formula F over the x's and the pair variables y_{i,j} with
    F(x, 0) = 0 and F(x, C) = p*q - q*p once y_{i,j} is replaced by the
    commutator x_i*x_j - x_j*x_i.

    Recursion splits the larger factor: a sum splits into two
    certificates, a product p1*p2 rearranges into p1*F(p2,q) + F(p1,q)*p2
    (and symmetrically for q); leaf pairs bottom out at a single pair
    variable, its negation, or zero.
    """
    check_same_field(p.field, q.field)
    field = p.field
    zero = Const(field.zero)
    minus_one = field.from_int(-1)

    def cert(pn: Node, qn: Node) -> Node:
        sp, sq = node_size(pn), node_size(qn)
        p_internal = type(pn) in (Plus, Times)
        q_internal = type(qn) in (Plus, Times)
        if not p_internal and not q_internal:
            if type(pn) is Var and type(qn) is Var:
                i, j = pn.index, qn.index
                if i == j:
                    return zero
                if i < j:
                    return Var(ymap[(i, j)])
                return _fold_mul(field, Const(minus_one), Var(ymap[(j, i)]))
            return zero  # a constant commutes with everything
        if p_internal and (sp >= sq or not q_internal):
            if type(pn) is Plus:
                return _fold_add(field, cert(pn.left, qn), cert(pn.right, qn))
            return _fold_add(
                field,
                _fold_mul(field, pn.left, cert(pn.right, qn)),
                _fold_mul(field, cert(pn.left, qn), pn.right),
            )
        if type(qn) is Plus:
            return _fold_add(field, cert(pn, qn.left), cert(pn, qn.right))
        return _fold_add(
            field,
            _fold_mul(field, qn.left, cert(pn, qn.right)),
            _fold_mul(field, cert(pn, qn.left), qn.right),
        )

    return Formula(field, cert(p.root, q.root))


def rewrite_delta(
    li: Formula, lj: Formula, path: str, ymap: dict[tuple[int, int], int]
) -> Formula:
    """Correction term for one product-commutativity rewrite: a formula
    Phi with Phi(x, 0) = 0 and Phi(x, C) = li - lj, where li is lj with
    the factors at `path` swapped.

    Built by descending the shared spine: through a plus gate the
    differing child carries the whole difference; through a product gate
    the unchanged factor multiplies it from its own side; the rewrite
    site itself is a commutator certificate of the swapped factors.
    """
    check_same_field(li.field, lj.field)
    field = li.field

    def rec(a: Node, b: Node, pos: int) -> Node:
        if pos == len(path):
            if not (
                type(a) is Times
                and type(b) is Times
                and a.left == b.right
                and a.right == b.left
            ):
                raise ValueError("path does not witness a single comm-mul rewrite")
            return commutator_certificate(
                Formula(field, a.left), Formula(field, a.right), ymap
            ).root
        step = path[pos]
        if type(a) is not type(b) or type(a) not in (Plus, Times):
            raise ValueError(f"formulas disagree on the spine at path {path[:pos]!r}")
        if step == "L":
            if a.right != b.right:
                raise ValueError(f"off-path subformulas differ at path {path[:pos]!r}")
            child = rec(a.left, b.left, pos + 1)
            return child if type(a) is Plus else _fold_mul(field, child, a.right)
        if a.left != b.left:
            raise ValueError(f"off-path subformulas differ at path {path[:pos]!r}")
        child = rec(a.right, b.right, pos + 1)
        return child if type(a) is Plus else _fold_mul(field, a.left, child)

    return Formula(field, rec(li.root, lj.root, 0))


# ---------------------------------------------------------------------------
# certificates and their verifier

@dataclass
class IpsCertificate:
    """A single formula over the x's and the bound y's; substituting 0
    for every y must give the zero polynomial, substituting the bound
    axioms must give the constant 1."""

    field: Field
    formula: Formula
    system: AxiomSystem

    def __post_init__(self):
        check_same_field(self.field, self.formula.field)
        check_same_field(self.field, self.system.field)
        hi = self.system.y_base + self.system.y_count
        for v in variables(self.formula):
            if v > hi:
                raise ValueError(f"unbound y-variable y{v - self.system.y_base}")


def _substitute_many(node: Node, mapping: dict[int, Node]) -> Node:
    t = type(node)
    if t is Var:
        return mapping.get(node.index, node)
    if t is Const:
        return node
    left = _substitute_many(node.left, mapping)
    right = _substitute_many(node.right, mapping)
    if left is node.left and right is node.right:
        return node
    return Plus(left, right) if t is Plus else Times(left, right)


def certificate_conditions(cert: IpsCertificate) -> tuple[Formula, Formula]:
    """The two formulas whose zeroness the verifier decides: the y->0
    substitution, and the axiom substitution minus one."""
    field = cert.field
    system = cert.system
    zero_map = {
        system.y_base + t: Const(field.zero) for t in range(1, system.y_count + 1)
    }
    axiom_map = {
        system.y_base + t: system.formulas[t - 1].root
        for t in range(1, system.y_count + 1)
    }
    at_zero = Formula(field, _substitute_many(cert.formula.root, zero_map))
    at_axioms = _substitute_many(cert.formula.root, axiom_map)
    minus_one = Plus(at_axioms, Const(field.from_int(-1)))
    return at_zero, Formula(field, minus_one)


def verify_ips(cert: IpsCertificate) -> bool:
    """Deterministic certificate check: both conditions are zero-tested
    by the branching-program identity test (never by expansion)."""
    at_zero, at_axioms_minus_one = certificate_conditions(cert)
    if not is_identically_zero(at_zero):
        return False
    return is_identically_zero(at_axioms_minus_one)


def fpc_to_ips(proof: FpcProof, system: AxiomSystem) -> IpsCertificate:
    """Compile an accepted tree-like refutation into a certificate.

    Inputs and Boolean axioms become their y-variables, addition and
    product steps mirror the rule shape, rewrites sound in the
    non-commutative ring pass through unchanged, and each comm-mul step
    adds the correction term from rewrite_delta.
    """
    report = check_fpc(proof, system, tree_like=True)
    if not report.ok:
        raise ValueError(f"proof rejected at line {report.line}: {report.reason}")
    if not proof.lines:
        raise ValueError("empty proof")
    field = proof.field
    final = expand(proof.lines[-1].formula)
    if not (final.terms == {(): field.one}):
        raise ValueError("final line does not expand to the constant 1")
    ymap = system.commutator_var_map()

    phis: list[Node] = []
    for line in proof.lines:
        j = line.just
        t = type(j)
        if t is InputRef:
            phi: Node = Var(system.y_var(("input", j.index)))
        elif t is BooleanAxiomRef:
            phi = Var(system.y_var(("boolean", j.var)))
        elif t is ProductStep:
            phi = Times(Var(j.var), phis[j.premise - 1])
        elif t is AdditionStep:
            phi = _fold_add(
                field,
                _fold_mul(field, Const(j.a), phis[j.left - 1]),
                _fold_mul(field, Const(j.b), phis[j.right - 1]),
            )
        else:  # RewriteStep
            phi = phis[j.premise - 1]
            if j.rule == "comm-mul":
                delta = rewrite_delta(
                    line.formula,
                    proof.lines[j.premise - 1].formula,
                    j.path,
                    ymap,
                )
                phi = _fold_add(field, phi, delta.root)
        phis.append(phi)
    return IpsCertificate(field, Formula(field, phis[-1]), system)


# ---------------------------------------------------------------------------
# JSON formats (versioned with a "format" header)

PROOF_FORMAT = "ncips-proof-1"
CERT_FORMAT = "ncips-cert-1"


def _role_to_json(role: tuple) -> dict:
    if role[0] == "input":
        return {"kind": "input", "index": role[1]}
    if role[0] == "boolean":
        return {"kind": "boolean", "var": role[1]}
    return {"kind": "commutator", "i": role[1], "j": role[2]}


def _role_from_json(obj: dict) -> tuple:
    kind = obj["kind"]
    if kind == "input":
        return ("input", int(obj["index"]))
    if kind == "boolean":
        return ("boolean", int(obj["var"]))
    if kind == "commutator":
        return ("commutator", int(obj["i"]), int(obj["j"]))
    raise ValueError(f"unknown axiom role {kind!r}")


def system_to_json(system: AxiomSystem) -> dict:
    if system.cnf is not None:
        return {
            "cnf": {
                "num_vars": system.cnf.num_vars,
                "clauses": [list(cl) for cl in system.cnf.clauses],
            }
        }
    return {
        "num_vars": system.num_vars,
        "axioms": [
            {"role": _role_to_json(r), "formula": format_formula(f)}
            for r, f in zip(system.roles, system.formulas)
        ],
    }


def system_from_json(obj: dict, field: Field) -> AxiomSystem:
    if "cnf" in obj:
        c = obj["cnf"]
        clauses = tuple(tuple(int(l) for l in cl) for cl in c["clauses"])
        cnf = Cnf(int(c["num_vars"]), clauses)
        for cl in clauses:
            if not cl:
                raise ValueError("empty clause in system")
            for lit in cl:
                if lit == 0 or abs(lit) > cnf.num_vars:
                    raise ValueError(f"literal {lit} out of range")
        return build_axiom_system(cnf, field)
    num_vars = int(obj["num_vars"])
    roles = []
    formulas = []
    for ax in obj["axioms"]:
        roles.append(_role_from_json(ax["role"]))
        formulas.append(parse_formula(ax["formula"], field))
    return AxiomSystem(field, num_vars, roles, formulas)


def _just_to_json(field: Field, j: Justification) -> dict:
    t = type(j)
    if t is InputRef:
        return {"kind": "input", "index": j.index}
    if t is BooleanAxiomRef:
        return {"kind": "boolean-axiom", "var": j.var}
    if t is ProductStep:
        return {"kind": "product", "var": j.var, "premise": j.premise}
    if t is AdditionStep:
        return {
            "kind": "addition",
            "a": field.to_text(j.a),
            "b": field.to_text(j.b),
            "premises": [j.left, j.right],
        }
    return {
        "kind": "rewrite",
        "rule": j.rule,
        "direction": j.direction,
        "path": j.path,
        "premise": j.premise,
    }


def _just_from_json(field: Field, obj: dict) -> Justification:
    kind = obj["kind"]
    if kind == "input":
        return InputRef(int(obj["index"]))
    if kind == "boolean-axiom":
        return BooleanAxiomRef(int(obj["var"]))
    if kind == "product":
        return ProductStep(int(obj["var"]), int(obj["premise"]))
    if kind == "addition":
        p1, p2 = obj["premises"]
        return AdditionStep(field.parse(obj["a"]), field.parse(obj["b"]), int(p1), int(p2))
    if kind == "rewrite":
        return RewriteStep(obj["rule"], obj["direction"], obj.get("path", ""), int(obj["premise"]))
    raise ValueError(f"unknown justification kind {kind!r}")


def proof_to_json(proof: FpcProof, system: AxiomSystem) -> dict:
    return {
        "format": PROOF_FORMAT,
        "field": proof.field.name,
        "tree_like": proof.tree_like,
        "system": system_to_json(system),
        "lines": [
            {"formula": format_formula(l.formula), "just": _just_to_json(proof.field, l.just)}
            for l in proof.lines
        ],
    }


def proof_from_json(obj: dict) -> tuple[FpcProof, AxiomSystem]:
    from .fields import parse_field_spec

    if obj.get("format") != PROOF_FORMAT:
        raise ValueError("unrecognized proof format")
    field = parse_field_spec(obj["field"])
    system = system_from_json(obj["system"], field)
    lines = [
        ProofLine(parse_formula(l["formula"], field), _just_from_json(field, l["just"]))
        for l in obj["lines"]
    ]
    return FpcProof(field, lines, bool(obj.get("tree_like", True))), system


def certificate_to_json(cert: IpsCertificate) -> dict:
    return {
        "format": CERT_FORMAT,
        "field": cert.field.name,
        "system": system_to_json(cert.system),
        "formula": format_formula(cert.formula, y_base=cert.system.y_base),
        "bindings": [
            {"y": t, "axiom": _role_to_json(r)}
            for t, r in enumerate(cert.system.roles, start=1)
        ],
    }


def certificate_from_json(obj: dict) -> IpsCertificate:
    from .fields import parse_field_spec

    if obj.get("format") != CERT_FORMAT:
        raise ValueError("unrecognized certificate format")
    field = parse_field_spec(obj["field"])
    system = system_from_json(obj["system"], field)
    formula = parse_formula(obj["formula"], field, y_base=system.y_base)
    bindings = obj.get("bindings")
    if bindings is not None:
        declared = [(int(b["y"]), _role_from_json(b["axiom"])) for b in bindings]
        expected = list(enumerate(system.roles, start=1))
        if sorted(declared) != expected:
            raise ValueError("certificate bindings do not match the system's axiom order")
    return IpsCertificate(field, formula, system)
