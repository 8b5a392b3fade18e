"""
Exact integer linear algebra
Smith normal form, integer linear systems and cokernels of integer matrices
"""

import logging
from typing import List, Optional, Sequence, Tuple

from errors import InputError, InternalError
from models import AbelianStructure

logger = logging.getLogger(__name__)


class IntegerMatrix:
    """Dense matrix of arbitrary-precision integers stored row-major"""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Sequence[int]] = None):
        if rows < 0 or cols < 0:
            raise InputError(f"invalid matrix shape {rows}x{cols}")
        if entries is None:
            entries = [0] * (rows * cols)
        if len(entries) != rows * cols:
            raise InputError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = [int(x) for x in entries]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise InputError("rows have different lengths")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols)

    @classmethod
    def hstack(cls, blocks: Sequence["IntegerMatrix"], rows: int) -> "IntegerMatrix":
        """Concatenate matrices with `rows` rows side by side"""
        out = [[] for _ in range(rows)]
        for block in blocks:
            if block.rows != rows:
                raise InputError("hstack needs equal row counts")
            for i, r in enumerate(block.to_rows()):
                out[i].extend(r)
        return cls.from_rows(out, sum(b.cols for b in blocks))

    @classmethod
    def block_diagonal(cls, block: "IntegerMatrix", copies: int) -> "IntegerMatrix":
        n = block.rows * copies
        m = block.cols * copies
        result = cls(n, m)
        for c in range(copies):
            for i in range(block.rows):
                for j in range(block.cols):
                    result[c * block.rows + i, c * block.cols + j] = block[i, j]
        return result

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def __setitem__(self, index: Tuple[int, int], value: int):
        i, j = index
        self.entries[i * self.cols + j] = int(value)

    def to_rows(self) -> List[List[int]]:
        return [self.entries[i * self.cols:(i + 1) * self.cols] for i in range(self.rows)]

    def copy(self) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, list(self.entries))

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows,
                             [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    def diagonal(self) -> List[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def apply(self, vector: Sequence[int]) -> List[int]:
        if len(vector) != self.cols:
            raise InputError(f"vector of length {len(vector)} does not fit {self.cols} columns")
        return [sum(a * b for a, b in zip(row, vector) if a) for row in self.to_rows()]

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        left = self.to_rows()
        right = other.to_rows()
        out = []
        for row in left:
            acc = [0] * other.cols
            for k, a in enumerate(row):
                if a:
                    for j, b in enumerate(right[k]):
                        if b:
                            acc[j] += a * b
            out.append(acc)
        return IntegerMatrix.from_rows(out, other.cols)

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("matrix shapes differ")
        return IntegerMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, [-a for a in self.entries])

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return self + (-other)

    def scale(self, k: int) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, [k * a for a in self.entries])

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(self.entries)))

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.to_rows()})"


def _swap_rows(m: List[List[int]], i: int, j: int):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: List[List[int]], i: int, j: int):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m: List[List[int]], target: int, source: int, factor: int):
    """row[target] += factor * row[source]"""
    src = m[source]
    dst = m[target]
    for k, v in enumerate(src):
        if v:
            dst[k] += factor * v


def _add_col(m: List[List[int]], target: int, source: int, factor: int):
    """col[target] += factor * col[source]"""
    for row in m:
        if row[source]:
            row[target] += factor * row[source]


def smith_normal_form(a: IntegerMatrix) -> Tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Return (D, U, V) with U*A*V == D diagonal, d_1 | d_2 | ... and U, V unimodular.

    Each step moves the entry of least absolute value into pivot position.
    """
    m, n = a.rows, a.cols
    d = a.to_rows()
    u = IntegerMatrix.identity(m).to_rows()
    vt = IntegerMatrix.identity(n).to_rows()  # V transposed: column ops become row ops

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        _swap_rows(d, t, best[0])
        _swap_rows(u, t, best[0])
        _swap_cols(d, t, best[1])
        _swap_rows(vt, t, best[1])

        while True:
            pivot = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // pivot
                    _add_row(d, i, t, -q)
                    _add_row(u, i, t, -q)
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // pivot
                    _add_col(d, j, t, -q)
                    _add_row(vt, j, t, -q)
                    dirty = dirty or d[t][j] != 0
            if dirty:
                best = (t, t)
                for i in range(t + 1, m):
                    if d[i][t] and abs(d[i][t]) < abs(d[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t + 1, n):
                    if d[t][j] and abs(d[t][j]) < abs(d[best[0]][best[1]]):
                        best = (t, j)
                if best[0] != t:
                    _swap_rows(d, t, best[0])
                    _swap_rows(u, t, best[0])
                elif best[1] != t:
                    _swap_cols(d, t, best[1])
                    _swap_rows(vt, t, best[1])
                continue
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % pivot:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(d, t, offender, 1)
            _add_row(u, t, offender, 1)

        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    diag = IntegerMatrix.from_rows(d, n)
    left = IntegerMatrix.from_rows(u, m)
    right = IntegerMatrix.from_rows(vt, n).transpose()
    return diag, left, right


def solve_integer_linear(a: IntegerMatrix, b: Sequence[int]) -> Optional[List[int]]:
    """One integer solution x of A x == b, or None when none exists"""
    if len(b) != a.rows:
        raise InputError(f"right-hand side has length {len(b)}, matrix has {a.rows} rows")
    diag, left, right = smith_normal_form(a)
    rhs = left.apply(b)
    y = [0] * a.cols
    for i, value in enumerate(rhs):
        pivot = diag[i, i] if i < min(a.rows, a.cols) else 0
        if pivot == 0:
            if value:
                return None
        elif value % pivot:
            return None
        else:
            y[i] = value // pivot
    x = right.apply(y)
    if a.apply(x) != list(b):
        raise InternalError("integer solution failed re-multiplication")
    return x


def cokernel_structure(a: IntegerMatrix) -> AbelianStructure:
    """Abelian group Z^rows modulo the column span of A"""
    diag = smith_normal_form(a)[0].diagonal()
    nonzero = [abs(x) for x in diag if x]
    torsion = [x for x in nonzero if x > 1]
    return AbelianStructure.free(a.rows - len(nonzero), torsion)


def unimodular_inverse(a: IntegerMatrix) -> Optional[IntegerMatrix]:
    """Integer inverse of a square matrix with determinant +1 or -1, else None"""
    if not a.is_square:
        raise InputError("only square matrices have inverses")
    diag, left, right = smith_normal_form(a)
    if any(x != 1 for x in diag.diagonal()):
        return None
    return right @ left


def is_unimodular(a: IntegerMatrix) -> bool:
    return a.is_square and all(x == 1 for x in smith_normal_form(a)[0].diagonal())
