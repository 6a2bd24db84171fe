"""The free symmetric operad on one binary operation, at arities <= 4.

Basis monomials are labeled binary trees: a leaf holds an argument index
(1-based), an internal node is a pair (left, right).  A monomial "bracketing
tensor permutation" is the tree whose leaves, read left to right, carry the
permutation's one-line images.  Composition grafts a tree into the leaf
holding the target argument and shifts the remaining labels.

Conventions pinned by tests against the printed consequence expansions and
the 6x12 orbit matrix:
  * the right action by sigma maps every leaf label l to sigma(l);
  * juxtaposition of permutations is read left to right, so the action
    satisfies (psi (x) tau) . sigma = psi (x) (tau then sigma);
  * matrix column blocks list bracketings in *reverse* enumeration order
    (left comb first), while enumerate_bracketings returns the ascending
    order (right comb first).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .exactla import PolyMatrix
from .polyring import QQ, PolyRing, Polynomial

LEAF = "*"

RING6 = PolyRing(["x1", "x2", "x3", "x4", "x5", "x6"])


class UnsupportedParametersError(ValueError):
    pass


# -- bracketings ----------------------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_bracketings(n: int) -> tuple:
    """All balanced bracketings with n leaves, in the inductive total order
    (left factor compared first, smaller arity first)."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    if n == 1:
        return (LEAF,)
    out = []
    for ln in range(1, n):
        for left in enumerate_bracketings(ln):
            for right in enumerate_bracketings(n - ln):
                out.append((left, right))
    return tuple(out)


@lru_cache(maxsize=None)
def matrix_bracketings(n: int) -> tuple:
    """Bracketings in matrix-index order (reverse of the enumeration order:
    the left comb comes first)."""
    return tuple(reversed(enumerate_bracketings(n)))


def tree_arity(t) -> int:
    if t == LEAF or isinstance(t, int):
        return 1
    return tree_arity(t[0]) + tree_arity(t[1])


def catalan(n: int) -> int:
    import math

    return math.comb(2 * n, n) // (n + 1)


# -- permutations (tuples of 1-based images) --------------------------------------


@lru_cache(maxsize=None)
def symmetric_group(n: int) -> tuple:
    """S_n in lex order on one-line notation."""
    return tuple(itertools.permutations(range(1, n + 1)))


def perm_then(a: tuple, b: tuple) -> tuple:
    """Left-to-right product: apply a, then b."""
    return tuple(b[a[i] - 1] for i in range(len(a)))


def perm_inverse(a: tuple) -> tuple:
    inv = [0] * len(a)
    for i, v in enumerate(a):
        inv[v - 1] = i + 1
    return tuple(inv)


def perm_sign(a: tuple) -> int:
    seen = [False] * len(a)
    sign = 1
    for i in range(len(a)):
        if not seen[i]:
            j = i
            clen = 0
            while not seen[j]:
                seen[j] = True
                j = a[j] - 1
                clen += 1
            if clen % 2 == 0:
                sign = -sign
    return sign


# -- labeled trees ----------------------------------------------------------------


def label_tree(bracketing, perm: tuple):
    """Attach the permutation's images to the bracketing's leaves, left to right."""
    it = iter(perm)

    def walk(t):
        if t == LEAF:
            return next(it)
        return (walk(t[0]), walk(t[1]))

    return walk(bracketing)


def unlabel_tree(t):
    """Split a labeled tree back into (bracketing, permutation)."""
    labels: list[int] = []

    def walk(u):
        if isinstance(u, int):
            labels.append(u)
            return LEAF
        return (walk(u[0]), walk(u[1]))

    shape = walk(t)
    return shape, tuple(labels)


def map_leaves(t, f):
    if isinstance(t, int):
        return f(t)
    return (map_leaves(t[0], f), map_leaves(t[1], f))


def tree_str(t) -> str:
    if isinstance(t, int):
        return str(t)
    if t == LEAF:
        return LEAF
    return f"({tree_str(t[0])}{tree_str(t[1])})"


# -- operad elements ---------------------------------------------------------------


class OperadElement:
    """Linear combination of labeled trees with Polynomial coefficients."""

    __slots__ = ("arity", "ring", "terms")

    def __init__(self, arity: int, ring: PolyRing, terms: dict | None = None):
        self.arity = arity
        self.ring = ring
        self.terms = {}
        if terms:
            for t, c in terms.items():
                if not isinstance(c, Polynomial):
                    c = ring.const(c)
                if not c.is_zero():
                    self.terms[t] = c

    @classmethod
    def monomial(cls, ring: PolyRing, tree, coeff=1) -> "OperadElement":
        return cls(tree_arity(tree), ring, {tree: coeff})

    def __add__(self, other: "OperadElement") -> "OperadElement":
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        res = dict(self.terms)
        for t, c in other.terms.items():
            s = res.get(t)
            s = c if s is None else s + c
            if s.is_zero():
                res.pop(t, None)
            else:
                res[t] = s
        return OperadElement(self.arity, self.ring, res)

    def __sub__(self, other: "OperadElement") -> "OperadElement":
        return self + other.scale(-1)

    def scale(self, c) -> "OperadElement":
        if not isinstance(c, Polynomial):
            c = self.ring.const(c)
        return OperadElement(
            self.arity, self.ring, {t: v * c for t, v in self.terms.items()}
        )

    def act(self, sigma: tuple) -> "OperadElement":
        """Right action: every leaf label l becomes sigma(l)."""
        if len(sigma) != self.arity:
            raise ValueError("arity mismatch")
        return OperadElement(
            self.arity,
            self.ring,
            {map_leaves(t, lambda l: sigma[l - 1]): c for t, c in self.terms.items()},
        )

    def compose(self, i: int, other: "OperadElement") -> "OperadElement":
        """Substitute `other` for the i-th argument (bilinear)."""
        if not 1 <= i <= self.arity:
            raise IndexError(f"composition slot {i} out of range")
        m = other.arity
        res: dict = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                t = _splice(t1, i, t2, m)
                c = c1 * c2
                s = res.get(t)
                s = c if s is None else s + c
                if s.is_zero():
                    res.pop(t, None)
                else:
                    res[t] = s
        return OperadElement(self.arity + m - 1, self.ring, res)

    def coefficient(self, tree) -> Polynomial:
        return self.terms.get(tree, self.ring.zero)

    def __eq__(self, other):
        return (
            isinstance(other, OperadElement)
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"({c})*{tree_str(t)}" for t, c in sorted(self.terms.items(), key=lambda x: str(x[0]))
        )


def _splice(t1, i: int, t2, m: int):
    """Replace the leaf labeled i of t1 by t2 (labels shifted by i-1);
    labels of t1 greater than i shift up by m-1."""

    def walk(u):
        if isinstance(u, int):
            if u == i:
                return map_leaves(t2, lambda l: l + i - 1)
            return u + m - 1 if u > i else u
        return (walk(u[0]), walk(u[1]))

    return walk(t1)


def identity_monomial(ring: PolyRing, n: int, q: int = 0) -> OperadElement:
    """gamma_q with identity labels (q indexes matrix_bracketings, 0-based)."""
    tree = label_tree(matrix_bracketings(n)[q], symmetric_group(n)[0])
    return OperadElement.monomial(ring, tree)


# -- monomial indexing (matrix order) ----------------------------------------------


@lru_cache(maxsize=None)
def _perm_rank(n: int) -> dict:
    return {p: r for r, p in enumerate(symmetric_group(n), start=1)}


@lru_cache(maxsize=None)
def _bracket_rank(n: int) -> dict:
    return {b: q for q, b in enumerate(matrix_bracketings(n), start=1)}


def monomial_index(tree) -> int:
    """1-based index: bracketing-major (matrix order), lex-permutation-minor."""
    shape, perm = unlabel_tree(tree)
    n = len(perm)
    q = _bracket_rank(n)[shape]
    r = _perm_rank(n)[perm]
    return len(symmetric_group(n)) * (q - 1) + r


def element_to_vector(e: OperadElement) -> list[Polynomial]:
    n = e.arity
    dim = len(symmetric_group(n)) * len(matrix_bracketings(n))
    vec = [e.ring.zero] * dim
    for t, c in e.terms.items():
        vec[monomial_index(t) - 1] = c
    return vec


# -- the LR relation and its consequences -------------------------------------------


@dataclass(frozen=True)
class RelationCoeffs:
    """The six right-hand coefficients of the rewriting relation."""

    x: tuple

    def __post_init__(self):
        if len(self.x) != 6:
            raise ValueError("exactly six coefficients required")

    @classmethod
    def generic(cls) -> "RelationCoeffs":
        return cls(RING6.gens())

    @classmethod
    def rational(cls, values, ring: PolyRing | None = None) -> "RelationCoeffs":
        ring = ring or RING6
        return cls(tuple(ring.const(v) for v in values))

    @classmethod
    def in_ring(cls, ring: PolyRing, values) -> "RelationCoeffs":
        out = []
        for v in values:
            if isinstance(v, Polynomial):
                if v.ring != ring:
                    raise ValueError("coefficient in wrong ring")
                out.append(v)
            else:
                out.append(ring.const(v))
        return cls(tuple(out))

    @property
    def ring(self) -> PolyRing:
        return self.x[0].ring

    def values(self, point) -> list:
        return [c.evaluate(point) for c in self.x]


def koszul_dual_coeffs(c: RelationCoeffs) -> RelationCoeffs:
    """Switch and negate coefficients 2 and 3, negate coefficient 6."""
    x = c.x
    return RelationCoeffs((x[0], -x[2], -x[1], x[3], x[4], -x[5]))


# the seven arity-3 monomials of the relation, as (tree-builder, coeff index)
def lr_relation(c: RelationCoeffs) -> OperadElement:
    """(a1a2)a3 minus the six right-normed terms with coefficients c."""
    ring = c.ring
    one = ring.one
    terms = {
        ((1, 2), 3): one,
        (1, (2, 3)): -c.x[0],
        (1, (3, 2)): -c.x[1],
        (2, (1, 3)): -c.x[2],
        (2, (3, 1)): -c.x[3],
        (3, (1, 2)): -c.x[4],
        (3, (2, 1)): -c.x[5],
    }
    return OperadElement(3, ring, terms)


def cubic_consequences(c: RelationCoeffs) -> list[OperadElement]:
    """The five arity-4 consequences, in the printed order:
    rho(a1a2,a3,a4), rho(a1,a2a3,a4), rho(a1,a2,a3a4), rho(..)a4, a1 rho(..)."""
    ring = c.ring
    rho = lr_relation(c)
    pair = OperadElement.monomial(ring, (1, 2))
    return [
        rho.compose(1, pair),
        rho.compose(2, pair),
        rho.compose(3, pair),
        pair.compose(1, rho),
        pair.compose(2, rho),
    ]


# row-vector order: leading position first, then entry rank 1 < -x1 < ... < -x6,
# then recurse on the remainder
def _row_sort_key(vec: list[Polynomial], rank_of) -> tuple:
    key = []
    for pos, entry in enumerate(vec):
        if not entry.is_zero():
            key.append((pos, rank_of(entry)))
    return tuple(key)


def _symbolic_entry_rank(entry: Polynomial) -> int:
    """1 -> 0, -x_i -> i; anything else is a construction bug."""
    if entry.is_one():
        return 0
    if len(entry.terms) == 1:
        ((m, coeff),) = entry.terms.items()
        if coeff == -1 and sum(m) == 1:
            return m.index(1) + 1
    raise ValueError(f"unexpected relation-matrix entry {entry}")


_M_CACHE: dict = {}


def cubic_relation_matrix(c: RelationCoeffs | None = None) -> PolyMatrix:
    """The 120x120 matrix whose rows are the sorted S4-translates of the five
    cubic consequences.  With no argument the generic (symbolic) matrix over
    x1..x6 is returned (and cached); otherwise the symbolic matrix is
    specialized by substitution, which preserves the row order."""
    M = _M_CACHE.get("M")
    if M is None:
        gen = RelationCoeffs.generic()
        rows = []
        for cons in cubic_consequences(gen):
            for tau in symmetric_group(4):
                rows.append(element_to_vector(cons.act(tau)))
        rows.sort(key=lambda v: _row_sort_key(v, _symbolic_entry_rank))
        M = PolyMatrix(RING6, rows)
        _M_CACHE["M"] = M
    if c is None:
        return M
    sub = {name: c.x[i] for i, name in enumerate(RING6.names)}
    return M.subs(sub, c.ring)


def evaluate_matrix(m: PolyMatrix, point: dict) -> list[list]:
    """Rational grid of a symbolic matrix at a rational point."""
    return m.evaluate(point)


# -- orbit matrix and Koszul duality -------------------------------------------------


def t3_monomial_column(tree) -> int:
    """0-based column in the 6+6 layout: bracketing block ((**)*, then *(**)),
    lex permutation within the block."""
    shape, perm = unlabel_tree(tree)
    q = _bracket_rank(3)[shape]
    r = _perm_rank(3)[perm]
    return 6 * (q - 1) + (r - 1)


def relation_orbit_matrix(c: RelationCoeffs) -> PolyMatrix:
    """6x12 matrix [W | Y]: rows are the S3-translates of the relation,
    sigma in lex order; columns in the 6+6 monomial layout."""
    ring = c.ring
    rho = lr_relation(c)
    rows = []
    for sigma in symmetric_group(3):
        vec = [ring.zero] * 12
        for t, coeff in rho.act(sigma).terms.items():
            vec[t3_monomial_column(t)] = coeff
        rows.append(vec)
    return PolyMatrix(ring, rows)


_ODD_S3 = [perm_sign(p) < 0 for p in symmetric_group(3)]
# tau -> tau . (reversal): index map on lex-ordered S3, 0-based
_OPP_PERM = [
    symmetric_group(3).index(tuple(reversed(p))) for p in symmetric_group(3)
]


def koszul_dual_module(c: RelationCoeffs) -> PolyMatrix:
    """The 6x12 orbit matrix of the dual relation, produced by the signed
    scalar-product construction: sign twists, nullspace, opposite-algebra
    column swap, and a final row sort back to RCF."""
    ring = c.ring
    N = relation_orbit_matrix(c).copy_entries()
    # scalar product: second bracketing gets the minus sign
    for i in range(6):
        for j in range(6, 12):
            N[i][j] = -N[i][j]
    # sign character on permutation columns
    for j in range(12):
        if _ODD_S3[j % 6]:
            for i in range(6):
                N[i][j] = -N[i][j]
    # rows with odd permutations flip, which restores [I | Z]
    for i in range(6):
        if _ODD_S3[i]:
            N[i] = [-e for e in N[i]]
    for i in range(6):
        for j in range(6):
            expected = ring.one if i == j else ring.zero
            if N[i][j] != expected:
                raise AssertionError("sign twists did not yield [I | Z]")
    # nullspace rows of [I | Z] are [-Z^T | I]
    rows = [
        [-N[i][6 + k] for i in range(6)] + [ring.one if j == k else ring.zero for j in range(6)]
        for k in range(6)
    ]
    # opposite algebra: swap bracketing blocks and compose each column's
    # permutation with the argument reversal
    out = [[ring.zero] * 12 for _ in range(6)]
    for i in range(6):
        for j in range(12):
            block, r = divmod(j, 6)
            nj = (1 - block) * 6 + _OPP_PERM[r]
            out[i][nj] = rows[i][j]
    # left block is a permutation of the identity columns: sort rows
    order = []
    for jcol in range(6):
        hits = [i for i in range(6) if not out[i][jcol].is_zero()]
        if len(hits) != 1 or not out[hits[0]][jcol].is_one():
            raise AssertionError("left block is not a column permutation of I")
        order.append(hits[0])
    return PolyMatrix(ring, [out[i] for i in order])


def koszul_dual_coeffs_from_module(c: RelationCoeffs) -> RelationCoeffs:
    D = koszul_dual_module(c)
    return RelationCoeffs(tuple(-D.entries[0][6 + i] for i in range(6)))


# -- change of basis (generator mixing a1a2 -> a1a2 + t a2a1) -------------------------


def twist_element(tree, ring: PolyRing, tname: str = "t") -> OperadElement:
    """Image of a labeled tree under the generator substitution
    (ab) -> (ab) + t (ba), applied at every internal node."""
    t = ring.var(tname)

    def walk(u) -> OperadElement:
        if isinstance(u, int):
            return OperadElement(1, ring, {u: ring.one})
        left = walk(u[0])
        right = walk(u[1])
        res: dict = {}
        for tl, cl in left.terms.items():
            for tr, cr in right.terms.items():
                c = cl * cr
                fwd = (tl, tr)
                bwd = (tr, tl)
                res[fwd] = res.get(fwd, ring.zero) + c
                res[bwd] = res.get(bwd, ring.zero) + c * t
        n = tree_arity(u)
        return OperadElement(n, ring, res)

    return walk(tree)


def basis_change_matrix(ring: PolyRing, tname: str = "t") -> PolyMatrix:
    """12x12 matrix of the twist on arity 3: entry (j,k) is the coefficient
    of monomial k in the image of monomial j (6+6 layout)."""
    rows = []
    for q in range(2):
        for perm in symmetric_group(3):
            tree = label_tree(matrix_bracketings(3)[q], perm)
            img = twist_element(tree, ring, tname)
            vec = [ring.zero] * 12
            for tt, cc in img.terms.items():
                vec[t3_monomial_column(tt)] = cc
            rows.append(vec)
    return PolyMatrix(ring, rows)


class NonExtractableRelationError(ValueError):
    """det W(t) is identically zero: no equivalent rewriting relation exists."""


@dataclass
class TransformedRelation:
    w: PolyMatrix
    y: PolyMatrix
    det_w: Polynomial
    numerators: list[Polynomial]  # x~_i = numerators[i] / det_w

    def coeff_fraction(self, i: int) -> tuple[Polynomial, Polynomial]:
        return self.numerators[i], self.det_w


def transform_relation(c: RelationCoeffs, tname: str = "t") -> TransformedRelation:
    """Apply the generator twist to the relation's orbit: N(t) = N0 A(t) =
    [W(t) | Y(t)]; the transformed coefficients are read from -W(t)^{-1}Y(t)
    row 1, tracked as fractions num/det W."""
    from .exactla import poly_det

    ring = c.ring
    if tname not in ring._index:
        raise ValueError(f"ring has no twist variable {tname}")
    n0 = relation_orbit_matrix(c)
    a = basis_change_matrix(ring, tname)
    n = n0.matmul(a)
    w = n.submatrix(range(6), range(6))
    y = n.submatrix(range(6), range(6, 12))
    det_w = poly_det(w)
    if det_w.is_zero():
        raise NonExtractableRelationError("det W(t) == 0 identically")
    # first row of adj(W) * Y; adj entries are signed 5x5 cofactors
    adj_row = []
    for k in range(6):
        rows = [r for r in range(6) if r != k]
        cols = [cc for cc in range(6) if cc != 0]
        cof = poly_det(w.submatrix(rows, cols))
        if k % 2 == 1:
            cof = -cof
        adj_row.append(cof)
    nums = []
    for j in range(6):
        s = ring.zero
        for k in range(6):
            s = s + adj_row[k] * y.entries[k][j]
        nums.append(-s)
    return TransformedRelation(w=w, y=y, det_w=det_w, numerators=nums)


# -- right-normed rewriting (x5 = x6 = 0) ---------------------------------------------


def is_right_normed(tree) -> bool:
    if isinstance(tree, int):
        return True
    return isinstance(tree[0], int) and is_right_normed(tree[1])


def _reducible_paths(tree, path=()) -> list[tuple]:
    """Paths (0/1 sequences) of subtrees of shape (AB)C, preorder (root first)."""
    out = []
    if not isinstance(tree, int):
        if not isinstance(tree[0], int):
            out.append(path)
        out.extend(_reducible_paths(tree[0], path + (0,)))
        out.extend(_reducible_paths(tree[1], path + (1,)))
    return out


def _subtree(tree, path):
    for step in path:
        tree = tree[step]
    return tree


def _replace(tree, path, sub):
    if not path:
        return sub
    if path[0] == 0:
        return (_replace(tree[0], path[1:], sub), tree[1])
    return (tree[0], _replace(tree[1], path[1:], sub))


def right_normed_rewrite(
    e: OperadElement, c: RelationCoeffs, prefer: str = "inner"
) -> OperadElement:
    """Rewrite every (AB)C via the four-term rule until only right-normed
    monomials remain.  Requires x5 = x6 = 0 (otherwise the rewriting can
    cycle).  `prefer` breaks the choice between nested reducible positions:
    'inner' rewrites the deepest one first, 'outer' the shallowest."""
    if not (c.x[4].is_zero() and c.x[5].is_zero()):
        raise UnsupportedParametersError("rewriting requires x5 = x6 = 0")
    if prefer not in ("inner", "outer"):
        raise ValueError("prefer must be 'inner' or 'outer'")
    ring = c.ring
    work = dict(e.terms)
    done: dict = {}
    while work:
        tree, coeff = work.popitem()
        paths = _reducible_paths(tree)
        if not paths:
            s = done.get(tree)
            s = coeff if s is None else s + coeff
            if s.is_zero():
                done.pop(tree, None)
            else:
                done[tree] = s
            continue
        paths.sort(key=len)
        path = paths[-1] if prefer == "inner" else paths[0]
        node = _subtree(tree, path)
        (a1, a2), b = node
        expansions = [
            (c.x[0], (a1, (a2, b))),
            (c.x[1], (a1, (b, a2))),
            (c.x[2], (a2, (a1, b))),
            (c.x[3], (a2, (b, a1))),
        ]
        for xc, sub in expansions:
            if xc.is_zero():
                continue
            new_tree = _replace(tree, path, sub)
            add = coeff * xc
            s = work.get(new_tree)
            s = add if s is None else s + add
            if s.is_zero():
                work.pop(new_tree, None)
            else:
                work[new_tree] = s
    return OperadElement(e.arity, ring, done)
