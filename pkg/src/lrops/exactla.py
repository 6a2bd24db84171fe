"""Exact linear algebra over the rationals and over the polynomial ring.

Rational matrices get fraction-free (Bareiss) rank/determinant and exact
Gauss-Jordan RCF/nullspace.  Polynomial matrices get determinants through
fraction-free elimination with exact division, streamed minors, and the
partial Smith reduction that peels off an identity block using nonzero
scalar pivots until none remain.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .polyring import (
    QQ,
    DivisibilityError,
    PolyRing,
    Polynomial,
    canonical_str,
)


class ShapeError(ValueError):
    pass


class PolyMatrix:
    """Dense row-major matrix of Polynomials sharing one ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: PolyRing, entries: list[list[Polynomial]]):
        self.ring = ring
        self.entries = entries
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        for row in entries:
            if len(row) != self.cols:
                raise ShapeError("ragged rows")

    @classmethod
    def from_rows(cls, ring: PolyRing, rows):
        conv = []
        for row in rows:
            conv.append(
                [e if isinstance(e, Polynomial) else ring.const(e) for e in row]
            )
        return cls(ring, conv)

    @classmethod
    def identity(cls, ring: PolyRing, n: int):
        return cls(
            ring,
            [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)],
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return list(self.entries[i])

    def col(self, j):
        return [self.entries[i][j] for i in range(self.rows)]

    def copy_entries(self):
        return [list(row) for row in self.entries]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            self.ring,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def matmul(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ShapeError("inner dimensions differ")
        zero = self.ring.zero
        out = []
        for i in range(self.rows):
            arow = self.entries[i]
            orow = []
            for j in range(other.cols):
                s = zero
                for k in range(self.cols):
                    a = arow[k]
                    b = other.entries[k][j]
                    if a.terms and b.terms:
                        s = s + a * b
                orow.append(s)
            out.append(orow)
        return PolyMatrix(self.ring, out)

    def submatrix(self, rows, cols) -> "PolyMatrix":
        return PolyMatrix(
            self.ring, [[self.entries[i][j] for j in cols] for i in rows]
        )

    def subs(self, values, target: PolyRing | None = None) -> "PolyMatrix":
        tgt = target or self.ring
        return PolyMatrix(
            tgt, [[e.subs(values, tgt) for e in row] for row in self.entries]
        )

    def evaluate(self, point) -> list[list]:
        """Rational grid from full evaluation."""
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def is_rational(self) -> bool:
        return all(e.is_scalar() for row in self.entries for e in row)

    def rational_grid(self) -> list[list]:
        if not self.is_rational():
            raise ShapeError("matrix has non-constant entries")
        return [[e.constant() for e in row] for row in self.entries]

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols} over {self.ring})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        from .polyring import format_poly

        return json.dumps(
            {
                "rows": self.rows,
                "cols": self.cols,
                "ring": list(self.ring.names),
                # exact form (not sign-normalized): must round-trip entrywise
                "entries": [format_poly(e) for row in self.entries for e in row],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PolyMatrix":
        data = json.loads(text)
        ring = PolyRing(data["ring"])
        flat = [ring.parse(s) for s in data["entries"]]
        rows, cols = data["rows"], data["cols"]
        if len(flat) != rows * cols:
            raise ShapeError("entry count does not match shape")
        return cls(ring, [flat[i * cols : (i + 1) * cols] for i in range(rows)])


# -- exact rational elimination ----------------------------------------------


def _as_grid(matrix) -> list[list]:
    if isinstance(matrix, PolyMatrix):
        return [[QQ(c) for c in row] for row in matrix.rational_grid()]
    return [[QQ(c) for c in row] for row in matrix]


def rational_rank(matrix) -> int:
    """Exact rank via fraction-free elimination on the integer-cleared grid."""
    grid = _as_grid(matrix)
    if not grid:
        return 0
    # clear each row to integers: rank is unchanged
    rows = []
    for row in grid:
        den = 1
        for c in row:
            den = den * c.denominator // _igcd(den, c.denominator)
        rows.append([int(c * den) for c in row])
    m, n = len(rows), len(rows[0])
    rank = 0
    prev = 1
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        p = pr[col]
        for i in range(rank + 1, m):
            ri = rows[i]
            f = ri[col]
            if f:
                for j in range(col, n):
                    ri[j] = (p * ri[j] - f * pr[j]) // prev
            else:
                for j in range(col, n):
                    ri[j] = (p * ri[j]) // prev
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def _igcd(a, b):
    a, b = abs(int(a)), abs(int(b))
    while b:
        a, b = b, a % b
    return a


def rational_rcf(matrix) -> list[list]:
    """Reduced row-echelon (row canonical) form, exact, zero rows kept."""
    grid = _as_grid(matrix)
    if not grid:
        return grid
    m, n = len(grid), len(grid[0])
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if grid[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        grid[r], grid[piv] = grid[piv], grid[r]
        pv = grid[r][col]
        grid[r] = [c / pv for c in grid[r]]
        for i in range(m):
            if i != r and grid[i][col] != 0:
                f = grid[i][col]
                grid[i] = [a - f * b for a, b in zip(grid[i], grid[r])]
        r += 1
        if r == m:
            break
    return grid


def rational_nullspace_with_free(matrix) -> tuple[list[list], list[int]]:
    """Standard basis of the right nullspace (free columns set to unit
    vectors) together with the free column indices, one per basis vector."""
    grid = _as_grid(matrix)
    if not grid:
        return [], []
    n = len(grid[0])
    rcf = rational_rcf(grid)
    pivots = []
    for row in rcf:
        for j, c in enumerate(row):
            if c != 0:
                pivots.append(j)
                break
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis = []
    for f in free:
        v = [QQ(0)] * n
        v[f] = QQ(1)
        for row, pj in zip(rcf, pivots):
            v[pj] = -row[f]
        basis.append(v)
    return basis, free


def rational_nullspace(matrix) -> list[list]:
    return rational_nullspace_with_free(matrix)[0]


def rational_det(matrix):
    """Exact determinant by Bareiss elimination."""
    grid = _as_grid(matrix)
    m = len(grid)
    if m == 0:
        return QQ(1)
    if any(len(row) != m for row in grid):
        raise ShapeError("determinant of a non-square matrix")
    den = QQ(1)
    rows = []
    for row in grid:
        d = 1
        for c in row:
            d = d * c.denominator // _igcd(d, c.denominator)
        den = den * d
        rows.append([int(c * d) for c in row])
    sign = 1
    prev = 1
    for k in range(m - 1):
        if rows[k][k] == 0:
            piv = None
            for i in range(k + 1, m):
                if rows[i][k]:
                    piv = i
                    break
            if piv is None:
                return QQ(0)
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        p = rows[k][k]
        for i in range(k + 1, m):
            ri = rows[i]
            f = ri[k]
            for j in range(k, m):
                ri[j] = (p * ri[j] - f * rows[k][j]) // prev
        prev = p
    return QQ(sign * rows[m - 1][m - 1]) / den


# -- polynomial determinants and minors ---------------------------------------


def poly_det(a: PolyMatrix) -> Polynomial:
    """Exact determinant over the polynomial ring (fraction-free, exact division)."""
    if a.rows != a.cols:
        raise ShapeError("determinant of a non-square matrix")
    n = a.rows
    ring = a.ring
    if n == 0:
        return ring.one
    grid = a.copy_entries()
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if grid[k][k].is_zero():
            piv = None
            for i in range(k + 1, n):
                if not grid[i][k].is_zero():
                    piv = i
                    break
            if piv is None:
                return ring.zero
            grid[k], grid[piv] = grid[piv], grid[k]
            sign = -sign
        p = grid[k][k]
        trivial = prev.is_one()
        for i in range(k + 1, n):
            fi = grid[i][k]
            for j in range(k + 1, n):
                num = p * grid[i][j] - fi * grid[k][j]
                grid[i][j] = num if trivial else num.exact_divide(prev)
            grid[i][k] = ring.zero
        prev = p
    d = grid[n - 1][n - 1]
    return d.scale(-1) if sign < 0 else d


def minors(a: PolyMatrix, r: int):
    """Yield every r x r minor once, rows/columns in lexicographic index order."""
    if r < 1 or r > min(a.rows, a.cols):
        raise ShapeError(f"minor size {r} out of range for {a.rows}x{a.cols}")
    for rows in itertools.combinations(range(a.rows), r):
        for cols in itertools.combinations(range(a.cols), r):
            yield poly_det(a.submatrix(rows, cols))


def normalize_monic(polys) -> list[Polynomial]:
    """Monic versions of the nonzero inputs, deduplicated, in term order."""
    seen = {}
    for f in polys:
        if f.is_zero():
            continue
        g = f.monic()
        seen[frozenset(g.terms.items())] = g
    return sorted(seen.values(), key=Polynomial.sort_key)


# -- partial Smith form --------------------------------------------------------


@dataclass
class SmithResult:
    identity_size: int
    block: PolyMatrix
    left_transform: PolyMatrix | None = None
    right_transform: PolyMatrix | None = None
    row_perm_applied: list = field(default_factory=list)

    @property
    def block_size(self) -> tuple[int, int]:
        return (self.block.rows, self.block.cols)


def _is_nonzero_scalar(p: Polynomial) -> bool:
    return p.is_scalar() and not p.is_zero()


def partial_smith(mat: PolyMatrix, keep_transforms: bool = False) -> SmithResult:
    """Eliminate with nonzero-scalar pivots: S = U*mat*V = diag(I_r, B).

    Pivot search takes the least column >= k holding a nonzero scalar in some
    row >= k, then the least such row in that column (this column-first scan
    is the one that reproduces the published block statistics); the pivot is
    swapped to (k,k), scaled to 1, and its row and column are cleared.  Stops
    when the working block has no nonzero scalar entry.  U and V are retained
    on request only.
    """
    ring = mat.ring
    m, n = mat.rows, mat.cols
    # sparse working copy: dict-of-dict rows plus a column index
    rows: list[dict[int, Polynomial]] = []
    colsup: list[set[int]] = [set() for _ in range(n)]
    for i in range(m):
        r = {}
        for j, e in enumerate(mat.entries[i]):
            if not e.is_zero():
                r[j] = e
                colsup[j].add(i)
        rows.append(r)

    U = PolyMatrix.identity(ring, m).copy_entries() if keep_transforms else None
    V = PolyMatrix.identity(ring, n).copy_entries() if keep_transforms else None

    def set_entry(i, j, val):
        if val.is_zero():
            if j in rows[i]:
                del rows[i][j]
                colsup[j].discard(i)
        else:
            rows[i][j] = val
            colsup[j].add(i)

    k = 0
    limit = min(m, n)
    while k < limit:
        pivot = None
        for j in range(k, n):
            hits = [
                i for i in colsup[j] if i >= k and _is_nonzero_scalar(rows[i][j])
            ]
            if hits:
                pivot = (min(hits), j)
                break
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            rows[pi], rows[k] = rows[k], rows[pi]
            colsup = _rebuild_colsup(rows, n)
            if U is not None:
                U[pi], U[k] = U[k], U[pi]
        if pj != k:
            for i in range(m):
                a = rows[i].pop(pj, None)
                b = rows[i].pop(k, None)
                if a is not None:
                    rows[i][k] = a
                if b is not None:
                    rows[i][pj] = b
            colsup[k], colsup[pj] = colsup[pj], colsup[k]
            if V is not None:
                for i in range(n):
                    V[i][k], V[i][pj] = V[i][pj], V[i][k]
        pivval = rows[k][k]
        if not pivval.is_one():
            c = pivval.constant()
            for j in list(rows[k]):
                rows[k][j] = rows[k][j].scale(QQ(1) / c)
            if U is not None:
                U[k] = [e.scale(QQ(1) / c) for e in U[k]]
        # clear column k below and above is not needed (algorithm clears i>k);
        # but rows above k were already cleared in earlier iterations.
        krow = list(rows[k].items())
        for i in list(colsup[k]):
            if i == k or i < k:
                continue
            f = rows[i].get(k)
            if f is None or f.is_zero():
                continue
            for j, e in krow:
                cur = rows[i].get(j, ring.zero)
                set_entry(i, j, cur - f * e)
            if U is not None:
                U[i] = [a - f * b for a, b in zip(U[i], U[k])]
        # clear row k to the right of the pivot by column operations
        for j, e in list(rows[k].items()):
            if j <= k:
                continue
            # col_j -= e * col_k ; col k now only has the pivot at row k
            set_entry(k, j, ring.zero)
            if V is not None:
                for i in range(n):
                    V[i][j] = V[i][j] - e * V[i][k]
        k += 1

    ident = k
    block = PolyMatrix(
        ring,
        [[rows[i].get(j, ring.zero) for j in range(ident, n)] for i in range(ident, m)],
    )
    res = SmithResult(identity_size=ident, block=block)
    if keep_transforms:
        res.left_transform = PolyMatrix(ring, U)
        res.right_transform = PolyMatrix(ring, V)
    return res


def _rebuild_colsup(rows, n):
    colsup = [set() for _ in range(n)]
    for i, r in enumerate(rows):
        for j in r:
            colsup[j].add(i)
    return colsup


def smith_reassemble(res: SmithResult, ring: PolyRing, m: int, n: int) -> PolyMatrix:
    """diag(I_r, B) as a full matrix (for checking U*R*V == S)."""
    r = res.identity_size
    out = [[ring.zero for _ in range(n)] for _ in range(m)]
    for i in range(r):
        out[i][i] = ring.one
    for i in range(res.block.rows):
        for j in range(res.block.cols):
            out[r + i][r + j] = res.block.entries[i][j]
    return PolyMatrix(ring, out)
