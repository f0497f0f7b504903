"""Shared test utilities: deterministic generators, exhaustive
enumerators, and independent oracles that never reuse the code path they
check."""

import random

from ncips.fields import GF2_FIELD, QQ, prime_field
from ncips.formula import (
    Const,
    Formula,
    Plus,
    Times,
    Var,
    expand,
    node_size,
    preorder_nodes,
)
from ncips.poly import NcPoly, TermBudgetError

Z5 = prime_field(5)


def leaf_pool(field, nvars, consts=(0, 1)):
    return [Var(i) for i in range(1, nvars + 1)] + [
        Const(field.from_int(c)) for c in consts
    ]


def enumerate_nodes(max_size, leaves):
    """All fan-in-two trees up to max_size (odd sizes), sharing subtrees."""
    by_size = {1: list(leaves)}
    for s in range(3, max_size + 1, 2):
        out = []
        for ls in range(1, s - 1, 2):
            for left in by_size[ls]:
                for right in by_size[s - 1 - ls]:
                    out.append(Plus(left, right))
                    out.append(Times(left, right))
        by_size[s] = out
    return by_size


def all_formulas(field, max_size, leaves):
    by_size = enumerate_nodes(max_size, leaves)
    for s in sorted(by_size):
        for node in by_size[s]:
            yield Formula(field, node)


def random_node(rng, field, size, nvars, const_lo=-2, const_hi=2, plus_bias=0.62, var_bias=0.75):
    if size == 1:
        if rng.random() < var_bias:
            return Var(rng.randint(1, nvars))
        return Const(field.from_int(rng.randint(const_lo, const_hi)))
    ls = rng.randrange(1, size - 1, 2)
    left = random_node(rng, field, ls, nvars)
    right = random_node(rng, field, size - 1 - ls, nvars)
    return Plus(left, right) if rng.random() < plus_bias else Times(left, right)


def random_formula(rng, field, size, nvars, **kw):
    return Formula(field, random_node(rng, field, size, nvars, **kw))


def random_feasible_formula(rng, field, max_size, nvars, cap=1 << 13):
    """Random formula whose expansion fits the cap (resampling is part of
    the deterministic stream)."""
    while True:
        size = rng.randrange(1, max_size + 1, 2)
        f = random_formula(rng, field, size, nvars)
        try:
            return f, expand(f, cap)
        except TermBudgetError:
            continue


def random_homogeneous_node(rng, field, degree, budget, nvars=3):
    """Homogeneous formula over bare variables (all coefficients stay
    positive over Q, which keeps every subformula polynomial nonzero)."""
    if degree == 1 and (budget <= 1 or rng.random() < 0.4):
        return Var(rng.randint(1, nvars))
    if degree >= 2 and (budget <= 1 or rng.random() < 0.55):
        dl = rng.randint(1, degree - 1)
        return Times(
            random_homogeneous_node(rng, field, dl, budget // 2, nvars),
            random_homogeneous_node(rng, field, degree - dl, budget // 2, nvars),
        )
    return Plus(
        random_homogeneous_node(rng, field, degree, budget // 2, nvars),
        random_homogeneous_node(rng, field, degree, budget // 2, nvars),
    )


def random_homogeneous(rng, field, degree, budget=8, nvars=3):
    return Formula(field, random_homogeneous_node(rng, field, degree, budget, nvars))


def replace_gate(f, gid, replacement):
    def rec(node, pos):
        if pos == gid:
            return replacement
        ls = node_size(node.left)
        if gid <= pos + ls:
            return type(node)(rec(node.left, pos + 1), node.right)
        return type(node)(node.left, rec(node.right, pos + 1 + ls))

    return Formula(f.field, rec(f.root, 0))


def reassociate(rng, f, steps=8):
    """Apply random polynomial-preserving rotations: associativity on both
    gate kinds and commutativity on plus gates only."""
    g = f
    for _ in range(steps):
        moves = []
        for gid, node in enumerate(preorder_nodes(g)):
            t = type(node)
            if t is Plus:
                moves.append((gid, "swap"))
                if type(node.left) is Plus:
                    moves.append((gid, "rotR+"))
                if type(node.right) is Plus:
                    moves.append((gid, "rotL+"))
            elif t is Times:
                if type(node.left) is Times:
                    moves.append((gid, "rotR*"))
                if type(node.right) is Times:
                    moves.append((gid, "rotL*"))
        if not moves:
            break
        gid, kind = moves[rng.randrange(len(moves))]
        node = preorder_nodes(g)[gid]
        if kind == "swap":
            new = Plus(node.right, node.left)
        elif kind in ("rotR+", "rotR*"):
            op = Plus if kind == "rotR+" else Times
            new = op(node.left.left, op(node.left.right, node.right))
        else:
            op = Plus if kind == "rotL+" else Times
            new = op(op(node.left, node.right.left), node.right.right)
        g = replace_gate(g, gid, new)
    return g


def homog_cost_bound(f):
    """Upper bound on the total node count of homogeneous_parts(f)
    (counted without the zero/one folding, which only shrinks trees).
    Cheap: O(gates * degree^2) with memoization."""
    from ncips.formula import _syntactic_degree

    memo = {}

    def cost(node, deg):
        key = (id(node), deg)
        got = memo.get(key)
        if got is None:
            t = type(node)
            if t in (Var, Const):
                got = 1
            elif t is Plus:
                got = 1 + cost(node.left, deg) + cost(node.right, deg)
            else:
                got = deg  # plus gates of the convolution sum tree
                for i in range(deg + 1):
                    got += 1 + cost(node.left, i) + cost(node.right, deg - i)
            memo[key] = got
        return got

    d = _syntactic_degree(f.root)
    return sum(cost(f.root, i) for i in range(d + 1))


def make_expand_memo(field):
    """Expansion memoized on shared subtree identity; valid only for trees
    produced by enumerate_nodes (which reuses subtree objects)."""
    memo = {}

    def ex(node):
        key = id(node)
        got = memo.get(key)
        if got is None:
            t = type(node)
            if t is Var:
                got = NcPoly.variable(field, node.index)
            elif t is Const:
                got = NcPoly.const(field, node.value)
            elif t is Plus:
                got = ex(node.left) + ex(node.right)
            else:
                got = ex(node.left) * ex(node.right)
            memo[key] = got
        return got

    return ex


def oracle_substitute(p, x, q):
    """Word-level substitution oracle: replace every letter x inside every
    word of p by the whole polynomial q, preserving letter order."""
    field = p.field
    out = NcPoly.zero(field)
    for word, coeff in p.terms.items():
        piece = NcPoly.const(field, coeff)
        for letter in word:
            factor = q if letter == x else NcPoly.variable(field, letter)
            piece = piece * factor
        out = out + piece
    return out


def gf2_row_span(rows):
    """Brute-force span of GF(2) row vectors (tuples), incl. the zero row."""
    rows = [tuple(r) for r in rows]
    width = len(rows[0]) if rows else 0
    span = set()
    for mask in range(1 << len(rows)):
        acc = [0] * width
        m = mask
        i = 0
        while m:
            if m & 1:
                acc = [a ^ b for a, b in zip(acc, rows[i])]
            m >>= 1
            i += 1
        span.add(tuple(acc))
    return span


def zero_pair(rng, field, degree=None, budget=8, use_balance=None):
    """An identically-zero homogeneous formula built as g - g' where g' is
    a reassociated or balanced copy of a random homogeneous g."""
    from ncips.transform import balance

    if degree is None:
        degree = rng.randint(2, 4)
    g = random_homogeneous(rng, field, degree, budget)
    if use_balance is None:
        use_balance = rng.random() < 0.5
    alt = balance(g) if use_balance else reassociate(rng, g, steps=6)
    root = Plus(g.root, Times(Const(field.from_int(-1)), alt.root))
    return Formula(field, root)
