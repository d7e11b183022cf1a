"""Exact scalars, sparse matrices, rank, homology dimensions and Smith normal form.

Everything here works with Python integers and ``fractions.Fraction``; there is
no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient kind: ``"z"`` (integers), ``"q"`` (rationals) or ``"fp"`` with modulus p."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("z", "q", "fp"):
            raise ValueError(f"unknown scalar kind {self.kind!r}")
        if self.kind == "fp" and not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if self.kind != "fp" and self.p:
            raise ValueError("modulus only allowed for prime fields")

    @property
    def is_field(self) -> bool:
        return self.kind != "z"

    def coerce(self, x):
        if self.kind == "fp":
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if self.kind == "q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def inv(self, x):
        if self.kind == "fp":
            return pow(x, -1, self.p)
        if self.kind == "q":
            return 1 / Fraction(x)
        raise ZeroDivisionError("integers are not a field")

    def label(self) -> str:
        return f"fp:{self.p}" if self.kind == "fp" else self.kind

    def __str__(self):
        return self.label()


QQ = Field("q")
ZZ = Field("z")


def Fp(p: int) -> Field:
    return Field("fp", p)


def parse_field(text: str) -> Field:
    """Parse ``q``, ``z`` or ``fp:P``."""
    t = text.strip().lower()
    if t in ("q", "z"):
        return Field(t)
    if t.startswith("fp:"):
        try:
            p = int(t[3:])
        except ValueError:
            raise ValueError(f"bad modulus in {text!r}") from None
        return Fp(p)
    raise ValueError(f"unknown field {text!r}")


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], object] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative shape")
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            if v == 0:
                raise ValueError(f"stored zero at ({r},{c})")

    @classmethod
    def build(cls, rows: int, cols: int, items: Iterable[tuple[int, int, object]] = ()):
        """Accumulate (row, col, value) triples, summing duplicates and dropping zeros."""
        acc: dict[tuple[int, int], object] = {}
        for r, c, v in items:
            acc[(r, c)] = acc.get((r, c), 0) + v
        return cls(rows, cols, {key: v for key, v in acc.items() if v != 0})

    @classmethod
    def from_dense(cls, dense: list[list]):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls.build(rows, cols, ((r, c, v) for r, row in enumerate(dense) for c, v in enumerate(row)))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int):
        return cls(rows, cols, {})

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, object]]:
        out: list[dict[int, object]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def permuted(self, row_perm: list[int], col_perm: list[int]) -> "SparseMatrix":
        """Entry (r, c) moves to (row_perm[r], col_perm[c])."""
        return SparseMatrix(
            self.rows, self.cols, {(row_perm[r], col_perm[c]): v for (r, c), v in self.entries.items()}
        )

    def triples(self) -> list[tuple[int, int, object]]:
        return sorted((r, c, v) for (r, c), v in self.entries.items())


def matmul(a: SparseMatrix, b: SparseMatrix, field: Field = ZZ) -> SparseMatrix:
    """Product a*b with entries reduced into ``field``."""
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    brows = b.row_dicts()
    acc: dict[tuple[int, int], object] = {}
    for (r, m), v in a.entries.items():
        v = field.coerce(v)
        for c, w in brows[m].items():
            key = (r, c)
            acc[key] = field.coerce(acc.get(key, 0) + v * field.coerce(w))
    return SparseMatrix(a.rows, b.cols, {key: v for key, v in acc.items() if v != 0})


def _echelon_rank(rows: list[dict[int, object]], field: Field) -> int:
    # Rows are reduced by their leading column against stored pivots.  Short
    # rows are inserted first, which keeps fill small on our sparse inputs.
    pivots: dict[int, dict[int, object]] = {}
    modp = field.p if field.kind == "fp" else 0
    for row in sorted(rows, key=len):
        r = {c: field.coerce(v) for c, v in row.items()}
        r = {c: v for c, v in r.items() if v != 0}
        while r:
            lead = min(r)
            piv = pivots.get(lead)
            if piv is None:
                inv = field.inv(r[lead])
                if modp:
                    pivots[lead] = {c: (v * inv) % modp for c, v in r.items()}
                else:
                    pivots[lead] = {c: v * inv for c, v in r.items()}
                break
            f = r[lead]
            for c, v in piv.items():
                nv = r.get(c, 0) - f * v
                if modp:
                    nv %= modp
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
    return len(pivots)


def rank(m: SparseMatrix, field: Field = QQ) -> int:
    """Rank over a field (Q or F_p)."""
    if not field.is_field:
        raise ValueError("rank over the integers is not defined here; use smith_normal_form")
    if not m.entries:
        return 0
    return _echelon_rank([r for r in m.row_dicts() if r], field)


def _check_complex(d_in: SparseMatrix, d_out: SparseMatrix, field: Field):
    if d_out.cols != d_in.rows:
        raise ValueError(f"dimension mismatch: d_out has {d_out.cols} columns, d_in has {d_in.rows} rows")
    comp = matmul(d_out, d_in, field)
    if comp.entries:
        raise ValueError("d_out * d_in is nonzero")


def homology_dims(d_in: SparseMatrix, d_out: SparseMatrix, field: Field = QQ) -> int:
    """dim ker(d_out) - rank(d_in) at the shared middle term."""
    _check_complex(d_in, d_out, field if field.is_field else ZZ)
    if not field.is_field:
        raise ValueError("use integral_homology for integer coefficients")
    mid = d_in.rows
    return mid - rank(d_out, field) - rank(d_in, field)


@dataclass(frozen=True)
class SNFResult:
    diagonal: tuple[int, ...]
    rank: int
    left: tuple[tuple[int, ...], ...] | None = None
    right: tuple[tuple[int, ...], ...] | None = None

    def torsion(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]


def smith_normal_form(m: SparseMatrix, transforms: bool = False) -> SNFResult:
    """Smith normal form over the integers.

    With ``transforms`` the unimodular U, V with U*M*V = D are returned and the
    identity is checked before returning.
    """
    rows, cols = m.rows, m.cols
    a = [[0] * cols for _ in range(rows)]
    for (r, c), v in m.entries.items():
        a[r][c] = ZZ.coerce(v)
    U = [[int(i == j) for j in range(rows)] for i in range(rows)] if transforms else None
    V = [[int(i == j) for j in range(cols)] for i in range(cols)] if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        rs, rd = a[src], a[dst]
        for c in range(cols):
            if rs[c]:
                rd[c] += f * rs[c]
        if U is not None:
            us, ud = U[src], U[dst]
            for c in range(rows):
                if us[c]:
                    ud[c] += f * us[c]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in a:
            if row[src]:
                row[dst] += f * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += f * row[src]

    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            row = a[i]
            for j in range(t, cols):
                if row[j] and (best is None or abs(row[j]) < best[0]):
                    best = (abs(row[j]), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    add_row(i, t, -q)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    add_col(j, t, -q)
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/col t to the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        diag.append(a[t][t])
        t += 1

    result = SNFResult(
        tuple(diag),
        len(diag),
        tuple(map(tuple, U)) if U is not None else None,
        tuple(map(tuple, V)) if V is not None else None,
    )
    if transforms:
        Um = SparseMatrix.build(rows, rows, ((i, j, v) for i, r in enumerate(U) for j, v in enumerate(r)))
        Vm = SparseMatrix.build(cols, cols, ((i, j, v) for i, r in enumerate(V) for j, v in enumerate(r)))
        lhs = matmul(matmul(Um, m), Vm)
        expect = {(i, i): d for i, d in enumerate(diag)}
        if dict(lhs.entries) != expect:
            raise AssertionError("Smith normal form transform check failed")
    return result


def integral_homology(d_in: SparseMatrix, d_out: SparseMatrix) -> tuple[int, list[int]]:
    """(free rank, torsion coefficients) of ker(d_out)/im(d_in) over the integers."""
    _check_complex(d_in, d_out, ZZ)
    s_in = smith_normal_form(d_in)
    s_out = smith_normal_form(d_out)
    free = d_in.rows - s_out.rank - s_in.rank
    return free, s_in.torsion()


def complex_homology(dims: Mapping[int, int], diffs: Mapping[int, SparseMatrix], field: Field = QQ) -> dict[int, int]:
    """Nonzero homology dimensions of a cochain complex.

    ``diffs[d]`` maps degree d to degree d+1 (shape dims[d+1] x dims[d]).
    Over the integers the free rank is returned; use ``complex_torsion`` for torsion.
    """
    out = {}
    rk = {}
    f = field if field.is_field else QQ
    for d, m in diffs.items():
        if m.cols != dims.get(d, 0) or m.rows != dims.get(d + 1, 0):
            raise ValueError(f"differential in degree {d} has the wrong shape")
        rk[d] = rank(m, f)
    for d, n in dims.items():
        h = n - rk.get(d, 0) - rk.get(d - 1, 0)
        if h:
            out[d] = h
    return out


def complex_torsion(dims: Mapping[int, int], diffs: Mapping[int, SparseMatrix]) -> dict[int, list[int]]:
    """Torsion coefficients of the integral homology, by degree (only nonempty lists)."""
    out = {}
    for d, m in diffs.items():
        tors = smith_normal_form(m).torsion()
        if tors:
            out[d + 1] = tors
    return out
