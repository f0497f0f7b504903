"""Dense matrices over exact fields, homogeneous linear forms, and the
row-space routines the identity test is built on (reduced row echelon
bases, expressing vectors in a basis)."""

from __future__ import annotations

from .fields import Field, check_same_field
from .poly import NcPoly


class NotInSpanError(ValueError):
    """A vector expected to lie in a row space did not."""


class LinForm:
    """Homogeneous linear form sum(c_k * x_k); no constant term."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: dict[int, object] | None = None):
        self.field = field
        self.coeffs = {k: c for k, c in (coeffs or {}).items() if c != field.zero}

    @classmethod
    def zero(cls, field: Field) -> "LinForm":
        return cls(field, {})

    @classmethod
    def variable(cls, field: Field, k: int) -> "LinForm":
        return cls(field, {k: field.one})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int):
        return self.coeffs.get(k, self.field.zero)

    def variables(self) -> list[int]:
        return sorted(self.coeffs)

    def __add__(self, other: "LinForm") -> "LinForm":
        check_same_field(self.field, other.field)
        add, zero = self.field.add, self.field.zero
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = add(out.get(k, zero), c)
            if s == zero:
                out.pop(k, None)
            else:
                out[k] = s
        return LinForm(self.field, out)

    def scale(self, value) -> "LinForm":
        if value == self.field.zero:
            return LinForm.zero(self.field)
        mul = self.field.mul
        return LinForm(self.field, {k: mul(value, c) for k, c in self.coeffs.items()})

    def to_poly(self) -> NcPoly:
        return NcPoly(self.field, {(k,): c for k, c in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, LinForm)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, frozenset(self.coeffs.items())))

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"{self.field.to_text(c)}*x{k}" for k, c in sorted(self.coeffs.items())
        )

    def __repr__(self):
        return f"LinForm({self.to_text()})"


class FieldMatrix:
    """Dense matrix with exact field entries.  Rows are lists; instances
    are treated as immutable after construction."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: list[list], ncols: int | None = None):
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        if rows:
            self.ncols = len(rows[0])
            for r in rows:
                if len(r) != self.ncols:
                    raise ValueError("ragged matrix rows")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs an explicit column count")
            self.ncols = ncols

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "FieldMatrix":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "FieldMatrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, FieldMatrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.nrows, self.ncols, tuple(map(tuple, self.rows))))

    def matmul(self, other: "FieldMatrix") -> "FieldMatrix":
        check_same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in matrix product")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        out = []
        for row in self.rows:
            new = [zero] * other.ncols
            for k, a in enumerate(row):
                if a == zero:
                    continue
                orow = other.rows[k]
                for j, b in enumerate(orow):
                    if b != zero:
                        new[j] = add(new[j], mul(a, b))
            out.append(new)
        return FieldMatrix(f, out, other.ncols)

    def stack(self, other: "FieldMatrix") -> "FieldMatrix":
        check_same_field(self.field, other.field)
        if self.ncols != other.ncols:
            raise ValueError("dimension mismatch in stack")
        return FieldMatrix(self.field, self.rows + other.rows, self.ncols)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(c == z for row in self.rows for c in row)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def __repr__(self):
        return f"FieldMatrix({self.nrows}x{self.ncols})"


def row_space_basis(m: FieldMatrix) -> FieldMatrix:
    """Reduced row echelon basis of the row space; zero rows dropped.

    The output is canonical, so equal row spaces yield equal matrices.
    """
    f = m.field
    zero, one = f.zero, f.one
    rows = [list(r) for r in m.rows]
    ncols = m.ncols
    pivot_row = 0
    for col in range(ncols):
        pivot = None
        for r in range(pivot_row, len(rows)):
            if rows[r][col] != zero:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        prow = rows[pivot_row]
        lead = prow[col]
        if lead != one:
            ilead = f.inv(lead)
            rows[pivot_row] = prow = [f.mul(ilead, c) for c in prow]
        for r in range(len(rows)):
            if r == pivot_row:
                continue
            factor = rows[r][col]
            if factor != zero:
                rr = rows[r]
                for j in range(col, ncols):
                    if prow[j] != zero:
                        rr[j] = f.sub(rr[j], f.mul(factor, prow[j]))
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return FieldMatrix(f, rows[:pivot_row], ncols)


def _pivot_columns(basis: FieldMatrix) -> list[int]:
    zero = basis.field.zero
    pivots = []
    for row in basis.rows:
        for j, c in enumerate(row):
            if c != zero:
                pivots.append(j)
                break
    return pivots


def express_in_basis(v: list, basis: FieldMatrix) -> list:
    """Coefficients c with c * basis == v; basis must be an RREF basis.

    Raises NotInSpanError when v is outside the row space (inside the
    identity test this signals a broken invariant and must abort).
    """
    f = basis.field
    if len(v) != basis.ncols:
        raise ValueError("vector length does not match basis width")
    coeffs = [v[j] for j in _pivot_columns(basis)]
    # Verify exactly; pivot reads are only valid for genuine members.
    zero = f.zero
    residue = list(v)
    for c, row in zip(coeffs, basis.rows):
        if c == zero:
            continue
        for j, b in enumerate(row):
            if b != zero:
                residue[j] = f.sub(residue[j], f.mul(c, b))
    if any(c != zero for c in residue):
        raise NotInSpanError("vector is not in the row space of the basis")
    return coeffs


class LinFormMatrix:
    """Matrix whose entries are homogeneous linear forms (transfer matrices)."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: list[list[LinForm]], ncols: int | None = None):
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        if rows:
            self.ncols = len(rows[0])
        else:
            if ncols is None:
                raise ValueError("empty matrix needs an explicit column count")
            self.ncols = ncols

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "LinFormMatrix":
        return cls(field, [[LinForm.zero(field) for _ in range(ncols)] for _ in range(nrows)], ncols)

    @classmethod
    def assemble(cls, field: Field, ncols: int, parts: dict[int, FieldMatrix]) -> "LinFormMatrix":
        """Build sum_k x_k * M^(k) from scalar coefficient matrices."""
        nrows = next(iter(parts.values())).nrows if parts else 0
        rows = []
        for i in range(nrows):
            row = []
            for j in range(ncols):
                coeffs = {}
                for k, mk in parts.items():
                    c = mk.rows[i][j]
                    if c != field.zero:
                        coeffs[k] = c
                row.append(LinForm(field, coeffs))
            rows.append(row)
        return cls(field, rows, ncols)

    def component(self, k: int) -> FieldMatrix:
        """Scalar coefficient matrix of x_k."""
        return FieldMatrix(
            self.field,
            [[e.coeff(k) for e in row] for row in self.rows],
            self.ncols,
        )

    def variables(self) -> list[int]:
        seen = set()
        for row in self.rows:
            for e in row:
                seen.update(e.coeffs)
        return sorted(seen)

    def apply_to_polys(self, vec: list[NcPoly], cap: int) -> list[NcPoly]:
        """Left-multiply a polynomial vector: out_i = sum_j T[i][j] * vec[j]."""
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match matrix width")
        out = []
        for row in self.rows:
            acc = NcPoly.zero(self.field)
            for e, p in zip(row, vec):
                if not e.is_zero() and not p.is_zero():
                    acc = acc + e.to_poly().mul(p, cap)
            out.append(acc)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, LinFormMatrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"LinFormMatrix({self.nrows}x{self.ncols})"


def scalar_combination(field: Field, coeffs: list, polys: list[NcPoly]) -> NcPoly:
    """sum_j coeffs[j] * polys[j] (scalar coefficients)."""
    acc = NcPoly.zero(field)
    for c, p in zip(coeffs, polys):
        if c != field.zero and not p.is_zero():
            acc = acc + p.scale(c)
    return acc
