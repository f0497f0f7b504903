"""Sparse non-commutative polynomials: canonical word -> coefficient maps.

A word is a tuple of 1-based variable indices; the empty word is the
monomial 1.  Letter order is significant (x1*x2 and x2*x1 are different
monomials).  This representation is the expansion oracle for the whole
package, so it is deliberately exponential: a configurable term cap turns
infeasible expansions into loud errors instead of silent truncation.
"""

from __future__ import annotations

from .fields import Field, check_same_field

Word = tuple[int, ...]

DEFAULT_TERM_CAP = 1 << 20


class TermBudgetError(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"expansion exceeds the term budget of {cap} terms")
        self.cap = cap


class NcPoly:
    """Canonical sparse polynomial over a free (non-commutative) algebra."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: dict[Word, object] | None = None):
        # Callers must hand over a dict already free of zero coefficients.
        self.field = field
        self.terms = terms if terms is not None else {}

    @classmethod
    def zero(cls, field: Field) -> "NcPoly":
        return cls(field, {})

    @classmethod
    def const(cls, field: Field, value) -> "NcPoly":
        if value == field.zero:
            return cls(field, {})
        return cls(field, {(): value})

    @classmethod
    def one(cls, field: Field) -> "NcPoly":
        return cls(field, {(): field.one})

    @classmethod
    def variable(cls, field: Field, index: int) -> "NcPoly":
        return cls(field, {(index,): field.one})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, NcPoly)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def __add__(self, other: "NcPoly") -> "NcPoly":
        check_same_field(self.field, other.field)
        add, zero = self.field.add, self.field.zero
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = add(out.get(w, zero), c)
            if s == zero:
                out.pop(w, None)
            else:
                out[w] = s
        return NcPoly(self.field, out)

    def __neg__(self) -> "NcPoly":
        neg = self.field.neg
        return NcPoly(self.field, {w: neg(c) for w, c in self.terms.items()})

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + (-other)

    def scale(self, value) -> "NcPoly":
        if value == self.field.zero:
            return NcPoly.zero(self.field)
        mul = self.field.mul
        out = {}
        for w, c in self.terms.items():
            p = mul(value, c)
            if p != self.field.zero:
                out[w] = p
        return NcPoly(self.field, out)

    def mul(self, other: "NcPoly", cap: int = DEFAULT_TERM_CAP) -> "NcPoly":
        """Product; words concatenate left of self, right of other."""
        check_same_field(self.field, other.field)
        fmul, fadd, zero = self.field.mul, self.field.add, self.field.zero
        out: dict[Word, object] = {}
        for u, a in self.terms.items():
            for w, b in other.terms.items():
                word = u + w
                c = fmul(a, b)
                s = fadd(out.get(word, zero), c)
                if s == zero:
                    out.pop(word, None)
                else:
                    out[word] = s
                    if len(out) > cap:
                        raise TermBudgetError(cap)
        return NcPoly(self.field, out)

    def __mul__(self, other: "NcPoly") -> "NcPoly":
        return self.mul(other)

    def degree_part(self, i: int) -> "NcPoly":
        """Terms whose word length is exactly i."""
        if i < 0:
            raise ValueError("degree must be nonnegative")
        return NcPoly(self.field, {w: c for w, c in self.terms.items() if len(w) == i})

    def max_degree(self) -> int:
        """Largest word length; -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def sorted_terms(self) -> list[tuple[Word, object]]:
        """(word, coeff) pairs sorted lexicographically; fixes print order."""
        return sorted(self.terms.items(), key=lambda it: (len(it[0]), it[0]))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            mono = "*".join(f"x{i}" for i in w) if w else "1"
            coeff = self.field.to_text(c)
            parts.append(mono if coeff == "1" and w else f"{coeff}*{mono}" if w else coeff)
        return " + ".join(parts)

    def __repr__(self):
        return f"NcPoly({self.to_text()})"
