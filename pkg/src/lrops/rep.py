"""S4 representation theory: irreducible matrices, stacked relation matrices,
reduced blocks, and module multiplicities of nullspaces.

The five irreducibles are generated from pinned matrices for the adjacent
transpositions and extended multiplicatively (products read left to right,
consistent with the operad action convention).  Multiplicities come from
exact traces on the nullspace against the embedded character table.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exactla import (
    PolyMatrix,
    SmithResult,
    partial_smith,
    rational_nullspace_with_free,
    rational_rank,
)
from .operad import (
    RING6,
    OperadElement,
    RelationCoeffs,
    cubic_consequences,
    cubic_relation_matrix,
    label_tree,
    map_leaves,
    matrix_bracketings,
    monomial_index,
    perm_then,
    symmetric_group,
    unlabel_tree,
)
from .polyring import QQ, PolyRing, Polynomial

PARTITIONS = ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
PARTITION_NAMES = ("4", "31", "2^2", "21^2", "1^4")
DIMENSIONS = (1, 3, 2, 3, 1)

# the representing matrices of (12), (23), (34), one block per partition
_GEN_MATRICES = {
    (2, 1, 3, 4): (
        [[1]],
        [[1, 0, -1], [0, 1, -1], [0, 0, -1]],
        [[1, -1], [0, -1]],
        [[1, -1, 1], [0, -1, 0], [0, 0, -1]],
        [[-1]],
    ),
    (1, 3, 2, 4): (
        [[1]],
        [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
        [[0, 1], [1, 0]],
        [[0, 1, 0], [1, 0, 0], [0, 0, -1]],
        [[-1]],
    ),
    (1, 2, 4, 3): (
        [[1]],
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        [[1, -1], [0, -1]],
        [[-1, 0, 0], [0, 0, 1], [0, 1, 0]],
        [[-1]],
    ),
}

# conjugacy classes: representative, size, and the five simple characters
# in partition order 4, 31, 2^2, 21^2, 1^4
CLASS_REPS = (
    (1, 2, 3, 4),
    (2, 1, 3, 4),
    (2, 1, 4, 3),
    (2, 3, 1, 4),
    (2, 3, 4, 1),
)
CLASS_SIZES = (1, 6, 3, 8, 6)
CHARACTER_TABLE = (
    (1, 1, 1, 1, 1),
    (3, 1, -1, 0, -1),
    (2, 0, 2, -1, 0),
    (3, -1, -1, 0, 1),
    (1, -1, 1, 1, -1),
)


def _check_character_orthogonality():
    for a in range(5):
        for b in range(5):
            s = sum(
                CLASS_SIZES[k] * CHARACTER_TABLE[a][k] * CHARACTER_TABLE[b][k]
                for k in range(5)
            )
            expected = 24 if a == b else 0
            if s != expected:
                raise AssertionError("character table fails orthogonality")


_check_character_orthogonality()


def _mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [
        [sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)] for i in range(n)
    ]


@lru_cache(maxsize=None)
def build_irreps() -> dict:
    """Permutation (one-line tuple) -> tuple of five rational matrices."""
    gens = list(_GEN_MATRICES.items())
    table = {
        (1, 2, 3, 4): tuple(
            [[QQ(1) if i == j else QQ(0) for j in range(d)] for i in range(d)]
            for d in DIMENSIONS
        )
    }
    # R is a homomorphism for standard composition: R(s.p) = R(s) R(p),
    # where (s.p)(i) = s(p(i)); perm_then(p, g) is exactly g.p
    frontier = [(1, 2, 3, 4)]
    while frontier:
        new_frontier = []
        for p in frontier:
            for g, mats in gens:
                q = perm_then(p, g)
                if q not in table:
                    table[q] = tuple(
                        _mat_mul([[QQ(v) for v in row] for row in mats[k]], table[p][k])
                        for k in range(5)
                    )
                    new_frontier.append(q)
        frontier = new_frontier
    if len(table) != 24:
        raise AssertionError("irrep closure did not reach all of S4")
    return table


def irrep(partition_index: int, perm: tuple):
    return build_irreps()[perm][partition_index]


def rep_of_element(partition_index: int, elem: dict, ring: PolyRing) -> PolyMatrix:
    """Representation matrix of a group-algebra element {perm: Polynomial}."""
    d = DIMENSIONS[partition_index]
    acc = [[ring.zero for _ in range(d)] for _ in range(d)]
    for perm, coeff in elem.items():
        if not isinstance(coeff, Polynomial):
            coeff = ring.const(coeff)
        mat = irrep(partition_index, perm)
        for i in range(d):
            for j in range(d):
                if mat[i][j] != 0:
                    acc[i][j] = acc[i][j] + coeff.scale(mat[i][j])
    return PolyMatrix(ring, acc)


def consequence_components(c: RelationCoeffs) -> list[list[dict]]:
    """For each of the five consequences, its five group-algebra components
    (one per bracketing, matrix order): {perm: coefficient}."""
    out = []
    for cons in cubic_consequences(c):
        comps: list[dict] = [dict() for _ in range(5)]
        for tree, coeff in cons.terms.items():
            shape, perm = unlabel_tree(tree)
            q = matrix_bracketings(4).index(shape)
            comps[q][perm] = coeff
        out.append(comps)
    return out


def stacked_relation_matrix(partition_index: int, c: RelationCoeffs) -> PolyMatrix:
    """5d x 5d matrix: consequence block rows, bracketing block columns."""
    ring = c.ring
    d = DIMENSIONS[partition_index]
    comps = consequence_components(c)
    rows = []
    for i in range(5):
        blocks = [rep_of_element(partition_index, comps[i][q], ring) for q in range(5)]
        for r in range(d):
            row = []
            for q in range(5):
                row.extend(blocks[q].entries[r])
            rows.append(row)
    return PolyMatrix(ring, rows)


_BLOCK_CACHE: dict = {}


def reduced_block(partition_index: int, c: RelationCoeffs | None = None) -> PolyMatrix:
    """B(lambda): the scalar-free block of the stacked matrix's partial Smith
    form.  Symbolic result is cached; a given c specializes it."""
    key = partition_index
    blk = _BLOCK_CACHE.get(key)
    if blk is None:
        sym = stacked_relation_matrix(partition_index, RelationCoeffs.generic())
        res = partial_smith(sym)
        blk = (res.identity_size, res.block)
        _BLOCK_CACHE[key] = blk
    ident, block = blk
    if c is None:
        return block
    sub = {name: c.x[i] for i, name in enumerate(RING6.names)}
    return block.subs(sub, c.ring)


def reduced_block_identity_size(partition_index: int) -> int:
    reduced_block(partition_index)
    return _BLOCK_CACHE[partition_index][0]


# rank of the stacked matrix required for regularity, and the block rank
REGULAR_RANK = tuple(4 * d for d in DIMENSIONS)


def block_regular_rank(partition_index: int) -> int:
    """Rank that B(lambda) must have at a regular point (4d minus the peeled
    identity)."""
    return 4 * DIMENSIONS[partition_index] - reduced_block_identity_size(partition_index)


# -- nullspace multiplicities -----------------------------------------------------


@lru_cache(maxsize=None)
def _action_permutation(sigma: tuple) -> tuple:
    """Column permutation of the arity-4 monomial basis under the right action:
    position j-1 holds the image index of monomial j."""
    out = []
    for q in range(5):
        for perm in symmetric_group(4):
            tree = label_tree(matrix_bracketings(4)[q], perm)
            img = map_leaves(tree, lambda l: sigma[l - 1])
            out.append(monomial_index(img) - 1)
    return tuple(out)


@dataclass
class Multiplicities:
    values: tuple

    def __iter__(self):
        return iter(self.values)

    def dimension(self) -> int:
        return sum(m * d for m, d in zip(self.values, DIMENSIONS))


def nullspace_multiplicities(values) -> tuple[int, Multiplicities]:
    """Nullity of the relation matrix at a rational point, plus the S4-module
    multiplicities of its nullspace, via exact traces of class representatives."""
    point = {name: QQ(v) for name, v in zip(RING6.names, values)}
    M = cubic_relation_matrix()
    grid = M.evaluate(point)
    basis, free_rows = rational_nullspace_with_free(grid)
    nullity = len(basis)
    if nullity == 0:
        return 0, Multiplicities((0, 0, 0, 0, 0))
    traces = []
    for rep_perm in CLASS_REPS:
        act = _action_permutation(rep_perm)
        # (S_sigma n_k) coordinates: entry j of image = v[act^{-1}... careful:
        # acting maps basis monomial j to monomial act[j]; a column vector v
        # transforms to w with w[act[j]] = v[j].
        tr = QQ(0)
        for k, v in enumerate(basis):
            w = [QQ(0)] * len(v)
            for j, c in enumerate(v):
                if c != 0:
                    w[act[j]] = c
            tr += w[free_rows[k]]
        traces.append(tr)
    mults = []
    for lam in range(5):
        s = sum(
            CLASS_SIZES[k] * CHARACTER_TABLE[lam][k] * traces[k] for k in range(5)
        )
        m = s / 24
        if m.denominator != 1 or m < 0:
            raise AssertionError(f"non-integral multiplicity {m}")
        mults.append(int(m))
    result = Multiplicities(tuple(mults))
    if result.dimension() != nullity:
        raise AssertionError("multiplicities do not add up to the nullity")
    return nullity, result
