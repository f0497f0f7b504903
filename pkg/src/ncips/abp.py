"""Leveled algebraic branching programs and the formula -> ABP conversion.

The conversion runs in three checkpointed phases:

1. a recursive non-homogeneous program (edges carry one variable or one
   constant), where every node is assigned an induced part of the source
   formula computing its suffix polynomial: plus gates wire the two
   branches in parallel through fresh nodes whose parts zero out the
   sibling branch, product gates wire sequentially through a middle node
   whose part sets the left factor to 1;
2. a degree split replacing each node v by copies (v, i), one per suffix
   degree i that v can still realize;
3. constant-edge elimination by closure: constant chains are folded into
   the variable-edge labels (merging parallel edges by label addition and
   dropping labels that cancel to zero), and trailing constant chains at
   degree 0 fold into the edges entering the single sink.

The result, per realizable degree, is a strict leveled ABP: one source,
one sink, and homogeneous linear forms on all edges.
"""

from __future__ import annotations

from .fields import Field
from .formula import (
    Const,
    Formula,
    InducedPart,
    Node,
    Plus,
    Times,
    Var,
    induced_part,
    node_size,
    syntactic_homogeneous_degree,
)
from .linalg import FieldMatrix, LinForm
from .poly import DEFAULT_TERM_CAP, NcPoly

_CONST = 0
_VAR = 1


class Abp:
    """Strict leveled branching program over one degree.

    levels[j] holds opaque node tags (frozen creation order); edges[j]
    maps (p, q) index pairs between level j and j+1 to linear forms.
    """

    __slots__ = ("field", "degree", "levels", "edges")

    def __init__(self, field: Field, degree: int, levels: list[list], edges: list[dict]):
        self.field = field
        self.degree = degree
        self.levels = levels
        self.edges = edges

    def width(self) -> int:
        return max(len(lv) for lv in self.levels)

    def node_count(self) -> int:
        return sum(len(lv) for lv in self.levels)

    def __repr__(self):
        shape = "x".join(str(len(lv)) for lv in self.levels)
        return f"Abp(degree={self.degree}, levels={shape})"


# ---------------------------------------------------------------------------
# phase 1: recursive non-homogeneous program with induced parts

class _Raw:
    __slots__ = ("field", "out", "parts", "count", "source", "sink")

    def __init__(self, field: Field):
        self.field = field
        self.out: list[list[tuple[int, int, object]]] = [[], []]
        self.parts: list[InducedPart | None] = [None, None]
        self.count = 2
        self.source = 0
        self.sink = 1

    def new_node(self, part: InducedPart | None) -> int:
        nid = self.count
        self.count += 1
        self.out.append([])
        self.parts.append(part)
        return nid

    def add_edge(self, u: int, v: int, kind: int, payload) -> None:
        self.out[u].append((v, kind, payload))


def _extend(part: InducedPart | None, gid: int, value) -> InducedPart | None:
    if part is None:
        return None
    return InducedPart(part.root, tuple(sorted(part.subs + ((gid, value),))))


def build_raw(f: Formula, want_parts: bool = True) -> _Raw:
    field = f.field
    raw = _Raw(field)
    if want_parts:
        raw.parts[raw.source] = induced_part(0, {})
        raw.parts[raw.sink] = induced_part(0, {0: field.one})
    one = field.one
    zero = field.zero

    def rec(v1: int, v2: int, node: Node, gid: int) -> None:
        t = type(node)
        if t is Var:
            raw.add_edge(v1, v2, _VAR, node.index)
            return
        if t is Const:
            if node.value != zero:  # zero edges contribute nothing
                raw.add_edge(v1, v2, _CONST, node.value)
            return
        gl = gid + 1
        gr = gid + 1 + node_size(node.left)
        base = raw.parts[v1]
        if t is Plus:
            vp = raw.new_node(_extend(base, gr, zero))
            vpp = raw.new_node(_extend(base, gl, zero))
            raw.add_edge(v1, vp, _CONST, one)
            raw.add_edge(v1, vpp, _CONST, one)
            rec(vp, v2, node.left, gl)
            rec(vpp, v2, node.right, gr)
        else:
            mid = raw.new_node(_extend(base, gl, one))
            rec(v1, mid, node.left, gl)
            rec(mid, v2, node.right, gr)

    rec(raw.source, raw.sink, f.root, 0)
    return raw


def _topo_order(raw: _Raw) -> list[int]:
    """Topological order of the nodes reachable from the source (the raw
    program is acyclic by construction)."""
    order: list[int] = []
    seen = [False] * raw.count
    seen[raw.source] = True
    stack: list[tuple[int, int]] = [(raw.source, 0)]
    while stack:
        v, ei = stack.pop()
        edges = raw.out[v]
        while ei < len(edges) and seen[edges[ei][0]]:
            ei += 1
        if ei < len(edges):
            stack.append((v, ei + 1))
            u = edges[ei][0]
            seen[u] = True
            stack.append((u, 0))
        else:
            order.append(v)
    order.reverse()
    return order


def suffix_degrees(raw: _Raw) -> list[set[int]]:
    """degs[v]: word lengths the sub-program from v to the sink can emit."""
    degs: list[set[int]] = [set() for _ in range(raw.count)]
    degs[raw.sink] = {0}
    for v in reversed(_topo_order(raw)):
        if v == raw.sink:
            continue
        acc = degs[v]
        for u, kind, _ in raw.out[v]:
            if kind == _VAR:
                acc.update(d + 1 for d in degs[u])
            else:
                acc.update(degs[u])
    return degs


# ---------------------------------------------------------------------------
# phases 2+3: degree split and constant-edge elimination

def _component(raw: _Raw, degs: list[set[int]], target: int, want_parts: bool):
    """Strict ABP for one target degree, plus its v-part map."""
    field = raw.field
    zero, one = field.zero, field.one
    fadd, fmul = field.add, field.mul

    clo_memo: dict[tuple[int, int], dict[int, object]] = {}

    def closure(v: int, i: int) -> dict[int, object]:
        key = (v, i)
        res = clo_memo.get(key)
        if res is not None:
            return res
        res = {v: one}
        for u, kind, payload in raw.out[v]:
            if kind == _CONST and i in degs[u]:
                for w, a in closure(u, i).items():
                    s = fadd(res.get(w, zero), fmul(payload, a))
                    if s == zero:
                        res.pop(w, None)
                    else:
                        res[w] = s
        clo_memo[key] = res
        return res

    def kappa(u: int) -> object:
        return closure(u, 0).get(raw.sink, zero)

    # Entries are variable-edge targets (plus the component source); the
    # sink absorbs the degree-0 constants.  Creation order is the frozen
    # node order within each level.
    entry_ids: dict[tuple[int, int], int] = {}
    entry_info: list[tuple[int, int]] = []
    labels: list[dict[int, dict[int, object]]] = []
    queue: list[int] = []

    def entry(v: int, i: int) -> int:
        key = (v, i)
        eid = entry_ids.get(key)
        if eid is None:
            eid = len(entry_info)
            entry_ids[key] = eid
            entry_info.append(key)
            labels.append({})
            queue.append(eid)
        return eid

    sink_eid = None
    src_eid = entry(raw.source, target)
    qi = 0
    while qi < len(queue):
        a = queue[qi]
        qi += 1
        v, i = entry_info[a]
        if i == 0:
            continue
        out_here = labels[a]
        clo = closure(v, i)
        for w in sorted(clo):
            alpha = clo[w]
            for u, kind, payload in raw.out[w]:
                if kind != _VAR:
                    continue
                k = payload
                if i == 1:
                    kap = kappa(u)
                    if kap == zero:
                        continue
                    if sink_eid is None:
                        sink_eid = entry(raw.sink, 0)
                    b = sink_eid
                    coeff = fmul(alpha, kap)
                else:
                    if (i - 1) not in degs[u]:
                        continue
                    b = entry(u, i - 1)
                    coeff = alpha
                row = out_here.setdefault(b, {})
                s = fadd(row.get(k, zero), coeff)
                if s == zero:
                    row.pop(k, None)
                else:
                    row[k] = s
        # drop edges whose labels cancelled entirely
        for b in [b for b, row in out_here.items() if not row]:
            del out_here[b]

    # alive: can reach the sink (edges always step degree down by one)
    alive = [False] * len(entry_info)
    if sink_eid is not None:
        alive[sink_eid] = True
    by_degree: dict[int, list[int]] = {}
    for eid, (v, i) in enumerate(entry_info):
        by_degree.setdefault(i, []).append(eid)
    for i in range(1, target + 1):
        for eid in by_degree.get(i, ()):
            kept = {b: row for b, row in labels[eid].items() if alive[b]}
            labels[eid] = kept
            if kept:
                alive[eid] = True

    if not alive[src_eid]:
        # The degree component cancelled away entirely: degenerate ABP.
        levels = [[("src", raw.source)]] + [[] for _ in range(target - 1)] + [[("sink", raw.sink)]]
        edges: list[dict] = [dict() for _ in range(target)]
        vparts = {}
        if want_parts:
            vparts[(0, 0)] = raw.parts[raw.source]
            vparts[(target, 0)] = raw.parts[raw.sink]
        return Abp(raw.field, target, levels, edges), vparts

    # reachable from the source over surviving labels
    reach = [False] * len(entry_info)
    reach[src_eid] = True
    stack = [src_eid]
    while stack:
        a = stack.pop()
        for b in labels[a]:
            if not reach[b]:
                reach[b] = True
                stack.append(b)

    levels = []
    index_of: dict[int, int] = {}
    for i in range(target, -1, -1):
        lv = []
        for eid in by_degree.get(i, ()):
            if alive[eid] and reach[eid]:
                index_of[eid] = len(lv)
                lv.append(("n", entry_info[eid][0]))
        levels.append(lv)
    edges = [dict() for _ in range(target)]
    for eid, (v, i) in enumerate(entry_info):
        if not (alive[eid] and reach[eid]) or i == 0:
            continue
        j = target - i
        p = index_of[eid]
        for b, row in labels[eid].items():
            edges[j][(p, index_of[b])] = LinForm(raw.field, dict(row))

    vparts = {}
    if want_parts:
        for eid, (v, i) in enumerate(entry_info):
            if alive[eid] and reach[eid]:
                vparts[(target - i, index_of[eid])] = raw.parts[v]
    return Abp(raw.field, target, levels, edges), vparts


# ---------------------------------------------------------------------------
# public conversion entry points

def formula_to_abp(f: Formula) -> tuple[Abp, dict]:
    """Convert a syntactically homogeneous formula of degree >= 1.

    Returns the ABP and the v-part map {(level, index) -> InducedPart};
    every mapped part expands to the polynomial of the sub-program from
    that node to the sink.
    """
    d = syntactic_homogeneous_degree(f)
    if d is None:
        raise ValueError("formula is not syntactically homogeneous")
    if d == 0:
        raise ValueError("degree-0 formulas have no branching-program form")
    raw = build_raw(f, want_parts=True)
    degs = suffix_degrees(raw)
    return _component(raw, degs, d, want_parts=True)


def split_degree_components(f: Formula) -> dict[int, Abp]:
    """Per-degree strict ABPs for every realizable degree >= 1.

    The degree-0 content of a formula is its value at the all-zero point
    and never needs a program.
    """
    raw = build_raw(f, want_parts=False)
    degs = suffix_degrees(raw)
    out = {}
    for d in sorted(x for x in degs[raw.source] if x >= 1):
        abp, _ = _component(raw, degs, d, want_parts=False)
        out[d] = abp
    return out


# ---------------------------------------------------------------------------
# evaluation oracle and level matrices

def abp_expand(
    a: Abp,
    frm: tuple[int, int] | None = None,
    to: tuple[int, int] | None = None,
    cap: int = DEFAULT_TERM_CAP,
) -> NcPoly:
    """Sum over paths of ordered label products (labels multiply in
    source -> sink order).  frm/to are (level, index) pairs; frm must not
    be on a later level than to; equal endpoints give the polynomial 1."""
    field = a.field
    if frm is None:
        frm = (0, 0)
    if to is None:
        to = (len(a.levels) - 1, 0)
    jf, pf = frm
    jt, pt = to
    if jf > jt:
        raise ValueError("frm must be at a lower level than to")
    if (jf, pf) == (jt, pt):
        return NcPoly.one(field)
    polys: dict[int, NcPoly] = {pt: NcPoly.one(field)}
    for j in range(jt - 1, jf - 1, -1):
        nxt: dict[int, NcPoly] = {}
        for (p, q), form in a.edges[j].items():
            tail = polys.get(q)
            if tail is None:
                continue
            piece = form.to_poly().mul(tail, cap)
            acc = nxt.get(p)
            nxt[p] = piece if acc is None else acc + piece
        polys = nxt
    return polys.get(pf, NcPoly.zero(field))


def level_matrices(a: Abp) -> dict[int, dict[int, FieldMatrix]]:
    """Variable coefficient matrices per consecutive degree pair.

    Result[i][k] is M^(k) of shape m_i x m_{i-1} (degree-i nodes index the
    rows, degree-(i-1) nodes the columns): the coefficient of x_k on the
    edge between those nodes; absent edges contribute zero rows/columns.
    """
    field = a.field
    zero = field.zero
    out: dict[int, dict[int, FieldMatrix]] = {}
    d = a.degree
    for j in range(d):
        i = d - j
        nrows = len(a.levels[j])
        ncols = len(a.levels[j + 1])
        ks = sorted({k for form in a.edges[j].values() for k in form.coeffs})
        mats = {
            k: [[zero] * ncols for _ in range(nrows)]
            for k in ks
        }
        for (p, q), form in a.edges[j].items():
            for k, c in form.coeffs.items():
                mats[k][p][q] = c
        out[i] = {k: FieldMatrix(field, rows, ncols) for k, rows in mats.items()}
    return out


# ---------------------------------------------------------------------------
# export

def abp_to_json(a: Abp) -> dict:
    edges = []
    for j, layer in enumerate(a.edges):
        for (p, q), form in sorted(layer.items()):
            edges.append(
                {
                    "from": [j, p],
                    "to": [j + 1, q],
                    "label": {str(k): a.field.to_text(c) for k, c in sorted(form.coeffs.items())},
                }
            )
    return {
        "format": "ncips-abp-1",
        "field": a.field.name,
        "degree": a.degree,
        "levels": [[f"n{j}_{p}" for p in range(len(lv))] for j, lv in enumerate(a.levels)],
        "edges": edges,
    }


def abp_to_dot(a: Abp) -> str:
    lines = ["digraph abp {", "  rankdir=LR;"]
    for j, lv in enumerate(a.levels):
        for p in range(len(lv)):
            shape = "doublecircle" if j in (0, len(a.levels) - 1) else "circle"
            lines.append(f'  n{j}_{p} [shape={shape}, label="{j}:{p}"];')
    for j, layer in enumerate(a.edges):
        for (p, q), form in sorted(layer.items()):
            lines.append(f'  n{j}_{p} -> n{j + 1}_{q} [label="{form.to_text()}"];')
    lines.append("}")
    return "\n".join(lines)
