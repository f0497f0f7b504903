"""Deterministic zero-testing for non-commutative formulas, plus
extraction and verification of the linear-algebra witnesses that certify
an identically-zero homogeneous formula.

The decision procedure never expands: it converts to per-degree
branching programs and propagates annihilator bases from the top degree
down (Lambda at the top degree starts as the 1x1 matrix (1); each step
stacks Lambda * M^(k) over the occurring variables k and takes a row
space basis), accepting a degree when the base relation against the
constant node vector holds.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abp import (
    Abp,
    abp_expand,
    formula_to_abp,
    level_matrices,
    split_degree_components,
)
from .fields import Field, check_same_field
from .formula import (
    Formula,
    InducedPart,
    apply_induced_part,
    evaluate,
    expand,
    induced_part,
    syntactic_homogeneous_degree,
    variables,
)
from .linalg import (
    FieldMatrix,
    LinForm,
    LinFormMatrix,
    express_in_basis,
    row_space_basis,
    scalar_combination,
)
from .poly import DEFAULT_TERM_CAP, NcPoly


class NotIdenticallyZeroError(ValueError):
    pass


class NotHomogeneousError(ValueError):
    pass


def constant_term(f: Formula):
    """Degree-0 coefficient of the computed polynomial (its value at the
    all-zero point)."""
    return evaluate(f, {x: f.field.zero for x in variables(f)})


def is_identically_zero(f: Formula) -> bool:
    """True iff f computes the zero polynomial; decided without expansion."""
    if constant_term(f) != f.field.zero:
        return False
    for _, component in sorted(split_degree_components(f).items()):
        if not _component_is_zero(component):
            return False
    return True


def _component_is_zero(a: Abp) -> bool:
    field = a.field
    zero = field.zero
    mats = level_matrices(a)
    lam = FieldMatrix(field, [[field.one]], 1)
    d = a.degree
    for i in range(d, 0, -1):
        ncols = len(a.levels[d - i + 1])
        rows: list[list] = []
        for k in sorted(mats.get(i, ())):
            rows.extend(lam.matmul(mats[i][k]).rows)
        lam = row_space_basis(FieldMatrix(field, rows, ncols))
        if lam.nrows == 0:
            return True
    for row in lam.rows:  # base relation against the constant node vector
        s = zero
        for c in row:  # strict construction folds the constants to (1)
            s = field.add(s, c)
        if s != zero:
            return False
    return True


# ---------------------------------------------------------------------------
# identity witnesses

@dataclass
class Witness:
    """Per-degree annihilator matrices, transfer matrices with linear-form
    entries, and the node part vectors they act on.

    lambdas[i] has dims[i] columns (square for i < d, a single selector
    row for i = d); transfers[i-1] is T_i of shape dims[i] x dims[i-1].
    """

    field: Field
    dims: list[int]
    lambdas: list[FieldMatrix]
    transfers: list[LinFormMatrix]
    vparts: list[list[InducedPart]]

    @property
    def degree(self) -> int:
        return len(self.dims) - 1


def _collect_vparts(a: Abp, vmap: dict) -> list[list[InducedPart]]:
    d = a.degree
    return [
        [vmap[(d - i, p)] for p in range(len(a.levels[d - i]))]
        for i in range(d + 1)
    ]


def extract_witnesses(f: Formula) -> Witness:
    """Witness matrices for an identically-zero homogeneous formula.

    Requires syntactic homogeneity and a zero polynomial, exactly the
    theorem hypotheses; the zero-degree formula gets the trivial witness
    (a 1x1 selector, no transfers).
    """
    d = syntactic_homogeneous_degree(f)
    if d is None:
        raise NotHomogeneousError("witness extraction needs a homogeneous formula")
    if not is_identically_zero(f):
        raise NotIdenticallyZeroError("formula does not compute the zero polynomial")
    field = f.field
    if d == 0:
        selector = FieldMatrix(field, [[field.one]], 1)
        return Witness(field, [1], [selector], [], [[induced_part(0)]])

    a, vmap = formula_to_abp(f)
    vparts = _collect_vparts(a, vmap)
    dims = [len(a.levels[d - i]) for i in range(d + 1)]
    mats = level_matrices(a)

    basis: dict[int, FieldMatrix] = {d: FieldMatrix(field, [[field.one]], dims[d])}
    tparts: dict[int, dict[int, FieldMatrix]] = {}
    for i in range(d, 0, -1):
        ks = sorted(mats.get(i, ()))
        products = {k: basis[i].matmul(mats[i][k]) for k in ks}
        rows: list[list] = []
        for k in ks:
            rows.extend(products[k].rows)
        nxt = row_space_basis(FieldMatrix(field, rows, dims[i - 1]))
        basis[i - 1] = nxt
        tparts[i] = {
            k: FieldMatrix(field, [express_in_basis(r, nxt) for r in products[k].rows], nxt.nrows)
            for k in ks
        }

    lambdas = []
    for i in range(d + 1):
        b = basis[i]
        if i == d:
            lambdas.append(b)
            continue
        rows = [list(r) for r in b.rows]
        zero_row = [field.zero] * dims[i]
        while len(rows) < dims[i]:  # all-zero rows cover the leftover slots
            rows.append(list(zero_row))
        lambdas.append(FieldMatrix(field, rows, dims[i]))

    transfers = []
    for i in range(1, d + 1):
        t = LinFormMatrix.zeros(field, dims[i], dims[i - 1])
        for k, mk in tparts[i].items():
            for u in range(mk.nrows):
                for w in range(mk.ncols):
                    c = mk.rows[u][w]
                    if c != field.zero:
                        t.rows[u][w] = t.rows[u][w] + LinForm(field, {k: c})
        transfers.append(t)

    return Witness(field, dims, lambdas, transfers, vparts)


def _live_rows(m: FieldMatrix) -> set[int]:
    zero = m.field.zero
    return {i for i, row in enumerate(m.rows) if any(c != zero for c in row)}


def verify_witnesses(f: Formula, w: Witness, cap: int = DEFAULT_TERM_CAP) -> bool:
    """Check a witness against the formula via the expansion oracle.

    Verifies the three equality families (every Lambda_i annihilates its
    part vector; consecutive levels align through T_i; the top selector
    reproduces f), the scalar alignment Lambda_i M^(k) = T_i^(k)
    Lambda_{i-1} that defines the transfers, and the format discipline
    (selector row at the top, transfer entries only between live relation
    rows).  Dimension inconsistencies raise; any failed equality returns
    False.
    """
    check_same_field(f.field, w.field)
    field = f.field
    d = syntactic_homogeneous_degree(f)
    if d is None:
        raise NotHomogeneousError("witness verification needs a homogeneous formula")
    if len(w.dims) != d + 1 or len(w.lambdas) != d + 1 or len(w.transfers) != d or len(w.vparts) != d + 1:
        raise ValueError("dimension mismatch between witness and formula degree")

    if d == 0:
        if w.dims != [1] or w.lambdas[0].nrows != 1 or w.lambdas[0].ncols != 1:
            raise ValueError("dimension mismatch in degree-0 witness")
        if w.vparts != [[induced_part(0)]]:
            return False
        if w.lambdas[0].rows[0][0] != field.one:
            return False
        return expand(f, cap).is_zero()

    a, vmap = formula_to_abp(f)
    dims = [len(a.levels[d - i]) for i in range(d + 1)]
    if w.dims != dims:
        raise ValueError("dimension mismatch between witness and program levels")
    for i in range(d + 1):
        lam = w.lambdas[i]
        want_rows = 1 if i == d else dims[i]
        if lam.nrows != want_rows or lam.ncols != dims[i]:
            raise ValueError(f"lambda {i} has shape {lam.nrows}x{lam.ncols}")
    for i in range(1, d + 1):
        t = w.transfers[i - 1]
        if t.nrows != dims[i] or t.ncols != dims[i - 1]:
            raise ValueError(f"transfer {i} has shape {t.nrows}x{t.ncols}")

    if w.vparts != _collect_vparts(a, vmap):
        return False
    # top selector: F is literally the single degree-d part
    if w.lambdas[d].rows[0] != [field.one] * dims[d]:
        return False
    # transfers may only connect live relation rows
    zero_form = LinForm.zero(field)
    for i in range(1, d + 1):
        live_hi = _live_rows(w.lambdas[i])
        live_lo = _live_rows(w.lambdas[i - 1])
        t = w.transfers[i - 1]
        for u in range(t.nrows):
            for v in range(t.ncols):
                if t.rows[u][v] != zero_form and (u not in live_hi or v not in live_lo):
                    return False

    polys = [
        [expand(apply_induced_part(f, part), cap) for part in w.vparts[i]]
        for i in range(d + 1)
    ]
    combos = [
        [scalar_combination(field, row, polys[i]) for row in w.lambdas[i].rows]
        for i in range(d + 1)
    ]
    for combo in combos:  # (a): Lambda_i annihilates its part vector
        if any(not p.is_zero() for p in combo):
            return False
    for i in range(1, d + 1):  # (b): levels align through the transfers
        rhs = w.transfers[i - 1].apply_to_polys(combos[i - 1], cap)
        if combos[i] != rhs:
            return False
    # scalar alignment that defines the transfers
    mats = level_matrices(a)
    for i in range(1, d + 1):
        t = w.transfers[i - 1]
        ks = set(mats.get(i, ())) | set(t.variables())
        for k in sorted(ks):
            mk = mats.get(i, {}).get(k)
            if mk is None:
                mk = FieldMatrix.zeros(field, dims[i], dims[i - 1])
            lhs = w.lambdas[i].matmul(mk)
            rhs = t.component(k).matmul(w.lambdas[i - 1])
            if lhs != rhs:
                return False
    # (c): the top selector reproduces f
    target = scalar_combination(field, w.lambdas[d].rows[0], polys[d])
    return expand(f, cap) == target


# ---------------------------------------------------------------------------
# nonzero witness monomials (for diagnostics when a zero test rejects)

def nonzero_witness(f: Formula, cap: int = DEFAULT_TERM_CAP) -> tuple[tuple[int, ...], object] | None:
    """A (word, coefficient) pair with nonzero coefficient in f, or None
    when f is identically zero.

    Found by the dual sweep direction: maintain, level by level from the
    source, an independent set of (prefix word, coefficient vector)
    representatives; any representative whose final value is nonzero
    names an explicit monomial.  Deterministic: the lexicographically
    smallest retained word wins.
    """
    field = f.field
    c0 = constant_term(f)
    if c0 != field.zero:
        return ((), c0)
    for _, component in sorted(split_degree_components(f).items()):
        found = _component_witness(component)
        if found is not None:
            return found
    return None


def _component_witness(a: Abp) -> tuple[tuple[int, ...], object] | None:
    field = a.field
    zero = field.zero
    mats = level_matrices(a)
    d = a.degree
    reps: list[tuple[tuple[int, ...], list]] = [((), [field.one])]
    for j in range(d):
        i = d - j
        ncols = len(a.levels[j + 1])
        kept: list[tuple[tuple[int, ...], list]] = []
        pivots: list[tuple[int, list]] = []  # (pivot column, reduced row)
        for word, vec in reps:
            for k in sorted(mats.get(i, ())):
                cand = word + (k,)
                row = FieldMatrix(field, [vec], len(vec)).matmul(mats[i][k]).rows[0]
                red = list(row)
                for pc, prow in pivots:
                    c = red[pc]
                    if c != zero:
                        for t in range(len(red)):
                            red[t] = field.sub(red[t], field.mul(c, prow[t]))
                pc = next((t for t, c in enumerate(red) if c != zero), None)
                if pc is None:
                    continue
                inv = field.inv(red[pc])
                pivots.append((pc, [field.mul(inv, c) for c in red]))
                kept.append((cand, row))
        reps = kept
        if not reps:
            return None
    best = None
    for word, vec in reps:
        if vec[0] != zero and (best is None or word < best[0]):
            best = (word, vec[0])
    return best


# ---------------------------------------------------------------------------
# witness serialization

def witness_to_json(w: Witness) -> dict:
    field = w.field
    return {
        "format": "ncips-witness-1",
        "field": field.name,
        "dims": list(w.dims),
        "lambdas": [[[field.to_text(c) for c in row] for row in m.rows] for m in w.lambdas],
        "transfers": [
            [
                [{str(k): field.to_text(c) for k, c in sorted(e.coeffs.items())} for e in row]
                for row in t.rows
            ]
            for t in w.transfers
        ],
        "vparts": [
            [
                {"root": p.root, "subs": [[g, field.to_text(v)] for g, v in p.subs]}
                for p in level
            ]
            for level in w.vparts
        ],
    }


def witness_from_json(obj: dict, field: Field | None = None) -> Witness:
    from .fields import parse_field_spec

    if obj.get("format") != "ncips-witness-1":
        raise ValueError("unrecognized witness format")
    fld = field if field is not None else parse_field_spec(obj["field"])
    dims = [int(x) for x in obj["dims"]]
    d = len(dims) - 1
    lambdas = []
    for i, rows in enumerate(obj["lambdas"]):
        lambdas.append(
            FieldMatrix(fld, [[fld.parse(c) for c in row] for row in rows], dims[i])
        )
    transfers = []
    for i, trows in enumerate(obj["transfers"], start=1):
        rows = [
            [LinForm(fld, {int(k): fld.parse(c) for k, c in e.items()}) for e in row]
            for row in trows
        ]
        transfers.append(LinFormMatrix(fld, rows, dims[i - 1]))
    vparts = [
        [
            InducedPart(int(p["root"]), tuple(sorted((int(g), fld.parse(v)) for g, v in p["subs"])))
            for p in level
        ]
        for level in obj["vparts"]
    ]
    return Witness(fld, dims, lambdas, transfers, vparts)
