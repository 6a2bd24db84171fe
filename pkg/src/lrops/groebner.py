"""Buchberger-based reduced Groebner bases, ideal membership, radicals.

The engine runs on integer-cleared, content-free polynomials (dict exponent
tuple -> int) so the only rational arithmetic happens when the finished
basis is normalized to monic generators.  Pair selection is the normal
strategy (least lcm in grevlex) with the Gebauer-Moeller product and chain
criteria.  Radical membership goes through the ideal extended by 1 - y*f in
one extra variable; zero sets are compared by two-sided radical membership,
never by computing radicals from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .polyring import (
    QQ,
    DivisibilityError,
    PolyRing,
    Polynomial,
    grevlex_key,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)

try:
    from gmpy2 import gcd as _zgcd
except ImportError:  # pragma: no cover
    from math import gcd as _zgcd


# -- integer polynomial layer --------------------------------------------------

IntPoly = dict  # exponent tuple -> nonzero int


def _to_int_poly(f: Polynomial) -> IntPoly:
    g = f.primitive()
    return {m: int(c) for m, c in g.terms.items()}


def _from_int_poly(ring: PolyRing, p: IntPoly) -> Polynomial:
    return Polynomial(ring, {m: QQ(c) for m, c in p.items()})


def _content_free(p: IntPoly) -> IntPoly:
    if not p:
        return p
    g = 0
    for c in p.values():
        g = _zgcd(g, c)
        if g == 1:
            break
    lead = p[max(p, key=grevlex_key)]
    if lead < 0:
        g = -g
    if g not in (1,):
        p = {m: c // g for m, c in p.items()}
    return p


def _lm(p: IntPoly):
    return max(p, key=grevlex_key)


def _add_scaled(dst: IntPoly, src: IntPoly, coeff: int, shift) -> None:
    """dst += coeff * x^shift * src, in place."""
    if shift is None:
        for m, c in src.items():
            s = dst.get(m, 0) + coeff * c
            if s:
                dst[m] = s
            else:
                dst.pop(m, None)
    else:
        for m, c in src.items():
            mm = tuple(a + b for a, b in zip(m, shift))
            s = dst.get(mm, 0) + coeff * c
            if s:
                dst[mm] = s
            else:
                dst.pop(mm, None)


def _scale_inplace(p: IntPoly, a: int) -> None:
    if a != 1:
        for m in p:
            p[m] *= a


def _normal_form_int(f: IntPoly, basis: list[tuple[tuple, int, IntPoly]]) -> IntPoly:
    """Full normal form (head and tail reduced), fraction-free, content-free."""
    p = dict(f)
    rem: IntPoly = {}
    todo = sorted(p, key=grevlex_key)  # ascending; pop() gives the largest
    while todo:
        m = todo.pop()
        c = p.get(m, 0)
        if not c:
            continue
        hit = None
        for lm, lc, g in basis:
            if monomial_divides(lm, m):
                hit = (lm, lc, g)
                break
        if hit is None:
            rem[m] = c
            del p[m]
            continue
        lm, lc, g = hit
        d = _zgcd(c, lc)
        a = lc // d  # scale everything by a
        b = c // d
        if a != 1:
            if a < 0:
                a, b = -a, -b
            _scale_inplace(p, a)
            _scale_inplace(rem, a)
            c = p[m]
        shift = monomial_div(m, lm)
        before = set(p)
        _add_scaled(p, g, -b, shift)
        # new monomials may have appeared below m; refresh the worklist
        new = [mm for mm in p if mm not in before]
        if new:
            todo.extend(new)
            todo.sort(key=grevlex_key)
        # dedupe is unnecessary: stale entries are skipped via p.get
    return _content_free(rem)


def _spoly_int(f: tuple, g: tuple) -> IntPoly:
    """S-polynomial of (lm, lc, poly) triples, integer-scaled."""
    lmf, lcf, pf = f
    lmg, lcg, pg = g
    lcm = monomial_lcm(lmf, lmg)
    d = _zgcd(lcf, lcg)
    af = lcg // d
    ag = lcf // d
    out: IntPoly = {}
    _add_scaled(out, pf, af, monomial_div(lcm, lmf))
    _add_scaled(out, pg, -ag, monomial_div(lcm, lmg))
    return out


def _buchberger(gens: list[IntPoly], on_progress=None) -> list[IntPoly]:
    """Groebner basis of the ideal generated by gens (not yet reduced)."""
    basis: list[tuple[tuple, int, IntPoly]] = []

    def interreduced_insert(p: IntPoly):
        p = _normal_form_int(p, basis)
        if p:
            basis.append((_lm(p), p[_lm(p)], p))
        return p

    # seed with an interreduced generating set, smallest leading monomials first
    seeds = [g for g in (dict(g) for g in gens) if g]
    seeds.sort(key=lambda g: grevlex_key(_lm(g)))
    for g in seeds:
        interreduced_insert(g)

    pairs: set[tuple[int, int]] = set()

    def lcm_of(i, j):
        return monomial_lcm(basis[i][0], basis[j][0])

    def update_pairs(t: int):
        # Gebauer-Moeller update for the element with index t
        lmt = basis[t][0]
        new_pairs = []
        for i in range(t):
            new_pairs.append((i, t))
        # criterion M/F: drop (i,t) if lcm(i,t) strictly divisible by lcm(j,t)
        kept = []
        for i, t_ in new_pairs:
            l_it = monomial_lcm(basis[i][0], lmt)
            redundant = False
            for j, _ in new_pairs:
                if j == i:
                    continue
                l_jt = monomial_lcm(basis[j][0], lmt)
                if l_jt != l_it and monomial_divides(l_jt, l_it):
                    redundant = True
                    break
            if not redundant:
                kept.append((i, t_, l_it))
        # product criterion
        final = [
            (i, t_) for i, t_, l in kept if l != monomial_mul(basis[i][0], lmt)
        ]
        # chain criterion on old pairs
        stale = set()
        for (i, j) in pairs:
            l_ij = lcm_of(i, j)
            if (
                monomial_divides(lmt, l_ij)
                and monomial_lcm(basis[i][0], lmt) != l_ij
                and monomial_lcm(basis[j][0], lmt) != l_ij
            ):
                stale.add((i, j))
        pairs.difference_update(stale)
        pairs.update(final)

    for t in range(len(basis)):
        update_pairs(t)

    processed = 0
    while pairs:
        pair = min(
            pairs, key=lambda ij: grevlex_key(lcm_of(*ij))
        )  # normal strategy
        pairs.discard(pair)
        i, j = pair
        s = _spoly_int(basis[i], basis[j])
        if not s:
            continue
        r = _normal_form_int(s, basis)
        processed += 1
        if on_progress and processed % 50 == 0:
            on_progress(len(basis), len(pairs))
        if r:
            basis.append((_lm(r), r[_lm(r)], r))
            update_pairs(len(basis) - 1)
    return [p for (_, _, p) in basis]


def _reduce_basis(ring: PolyRing, raw: list[IntPoly]) -> list[Polynomial]:
    """Minimal + fully reduced + monic, sorted term by term."""
    work = [dict(p) for p in raw if p]
    # drop elements whose lm is divisible by another's lm (keep the smaller lm)
    work.sort(key=lambda p: grevlex_key(_lm(p)))
    minimal: list[IntPoly] = []
    for p in work:
        m = _lm(p)
        if not any(monomial_divides(_lm(q), m) for q in minimal):
            minimal.append(p)
    reduced = []
    for idx, p in enumerate(minimal):
        others = [
            ( _lm(q), q[_lm(q)], q)
            for k, q in enumerate(minimal)
            if k != idx
        ]
        r = _normal_form_int(p, others)
        if r:
            reduced.append(r)
    out = [_from_int_poly(ring, p).monic() for p in reduced]
    out.sort(key=Polynomial.sort_key)
    return out


# -- public ideal interface ----------------------------------------------------

ORDER_TAG = "grevlex"


@dataclass
class Ideal:
    generators: list[Polynomial]
    _gb: list[Polynomial] | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.generators:
            raise ValueError("ideal needs at least one generator (use the zero poly)")
        ring = self.generators[0].ring
        for g in self.generators:
            if g.ring != ring:
                raise ValueError("generators live in different rings")
        self.ring = ring

    @property
    def order_tag(self) -> str:
        return ORDER_TAG

    def is_zero_ideal(self) -> bool:
        return all(g.is_zero() for g in self.generators)

    def groebner(self) -> list[Polynomial]:
        if self._gb is None:
            self._gb = reduced_gb(self)
        return self._gb


def ideal(*gens) -> Ideal:
    return Ideal(list(gens))


def reduced_gb(I: Ideal, cache=None) -> list[Polynomial]:
    """The unique reduced Groebner basis, sorted term by term (grevlex)."""
    ring = I.ring
    gens = [g for g in I.generators if not g.is_zero()]
    if not gens:
        return []
    if cache is not None:
        cached = cache.get_gb(ring, gens)
        if cached is not None:
            I._gb = cached
            return cached
    raw = _buchberger([_to_int_poly(g) for g in gens])
    out = _reduce_basis(ring, raw)
    I._gb = out
    if cache is not None:
        cache.put_gb(ring, gens, out)
    return out


def normal_form(f: Polynomial, I: Ideal) -> Polynomial:
    gb = I.groebner()
    if not gb:
        return f
    if f.ring != I.ring:
        raise ValueError("polynomial and ideal rings differ")
    basis = []
    for g in gb:
        gi = _to_int_poly(g)
        basis.append((_lm(gi), gi[_lm(gi)], gi))
    if f.is_zero():
        return f
    r = _normal_form_int(_to_int_poly(f), basis)
    if not r:
        return f.ring.zero
    # normal form of f itself (not only up to scalar): redo with rational tracking
    return _rational_normal_form(f, gb)


def _rational_normal_form(f: Polynomial, gb: list[Polynomial]) -> Polynomial:
    ring = f.ring
    p = dict(f.terms)
    rem: dict = {}
    heads = [(g.lm(), g.lc(), g.terms) for g in gb]
    while p:
        m = max(p, key=grevlex_key)
        c = p.pop(m)
        hit = None
        for lm, lc, terms in heads:
            if monomial_divides(lm, m):
                hit = (lm, lc, terms)
                break
        if hit is None:
            rem[m] = c
            continue
        lm, lc, terms = hit
        shift = monomial_div(m, lm)
        factor = c / lc
        for gm, gc in terms.items():
            if gm == lm:
                continue
            mm = monomial_mul(gm, shift)
            s = p.get(mm, QQ(0)) - factor * gc
            if s == 0:
                p.pop(mm, None)
            else:
                p[mm] = s
    return Polynomial(ring, rem)


def membership(f: Polynomial, I: Ideal) -> bool:
    return normal_form(f, I).is_zero()


def reduce_mod(f: Polynomial, relations: list[Polynomial]) -> Polynomial:
    """Normal form of f against the reduced basis of (relations)."""
    if not relations:
        raise ValueError("relations must be nonempty")
    return normal_form(f, Ideal(list(relations)))


RABINOWITSCH_VAR = "y_"


def radical_membership(f: Polynomial, I: Ideal, cache=None) -> bool:
    """f in sqrt(I), by saturation: 1 in I + (1 - y*f) in one extra variable."""
    if f.is_zero():
        return True
    if I.is_zero_ideal():
        return False
    # fast sound path: plain membership implies radical membership
    if not I.is_zero_ideal() and membership(f, I):
        return True
    ring = I.ring
    name = RABINOWITSCH_VAR
    while name in ring._index:
        name += "_"
    ext = ring.extend(name)
    y = ext.var(name)
    # the reduced basis (already computed by the fast path) conditions the
    # extended computation far better than the raw generators
    base = I.groebner() or [g for g in I.generators if not g.is_zero()]
    gens = [g.embed(ext) for g in base]
    gens.append(ext.one - y * f.embed(ext))
    gb = reduced_gb(Ideal(gens), cache=cache)
    return len(gb) == 1 and gb[0].is_one()


def radical_membership_witness(f: Polynomial, I: Ideal, max_power: int = 20):
    """The least k <= max_power with f^k in I, or None."""
    p = f.ring.one
    for k in range(1, max_power + 1):
        p = p * f
        if membership(p, I):
            return k
    return None


def same_zero_set(I: Ideal, J: Ideal, cache=None) -> bool:
    """V(I) == V(J) over the algebraic closure (two-sided radical membership)."""
    gbJ = [g for g in J.generators if not g.is_zero()]
    gbI = [g for g in I.generators if not g.is_zero()]
    if not gbI and not gbJ:
        return True
    for g in gbJ:
        if not radical_membership(g, I, cache=cache):
            return False
    for g in gbI:
        if not radical_membership(g, J, cache=cache):
            return False
    return True


def ideal_sum(ideals: list[Ideal]) -> Ideal:
    gens: list[Polynomial] = []
    for I in ideals:
        gens.extend(I.generators)
    return Ideal(gens)


def drop_unit_factors(I: Ideal, nonvanishing: list[str]) -> Ideal:
    """Divide generators by the named variables wherever they divide exactly.

    The variables are asserted nonzero by the caller, so removing them does
    not change the zero set on the locus of interest.
    """
    ring = I.ring
    vs = [ring.var(n) for n in nonvanishing]
    out = []
    for g in I.generators:
        h = g
        changed = True
        while changed and not h.is_zero():
            changed = False
            for v in vs:
                try:
                    h = h.exact_divide(v)
                    changed = True
                except DivisibilityError:
                    pass
        out.append(h)
    return Ideal(out)


# -- resultants ----------------------------------------------------------------


def _coeffs_in(f: Polynomial, var: str) -> list[Polynomial]:
    """Coefficients of f as a polynomial in `var`, degree 0 upward, in the same ring."""
    ring = f.ring
    i = ring.index(var)
    d = f.degree_in(var)
    buckets: list[dict] = [{} for _ in range(d + 1)]
    for m, c in f.terms.items():
        e = m[i]
        rest = list(m)
        rest[i] = 0
        buckets[e][tuple(rest)] = c
    return [Polynomial(ring, b) for b in buckets]


class DegenerateResultantError(ValueError):
    pass


def resultant_wrt(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    """Sylvester determinant with respect to var (f's coefficients on top)."""
    from .exactla import PolyMatrix, poly_det

    if f.ring != g.ring:
        raise ValueError("operands in different rings")
    n, m = f.degree_in(var), g.degree_in(var)
    if n <= 0 or m <= 0:
        raise DegenerateResultantError(f"both inputs need positive degree in {var}")
    fc = _coeffs_in(f, var)[::-1]  # leading first
    gc = _coeffs_in(g, var)[::-1]
    ring = f.ring
    size = n + m
    rows = []
    for i in range(m):
        row = [ring.zero] * size
        for k, c in enumerate(fc):
            row[i + k] = c
        rows.append(row)
    for i in range(n):
        row = [ring.zero] * size
        for k, c in enumerate(gc):
            row[i + k] = c
        rows.append(row)
    return poly_det(PolyMatrix(ring, rows))


def scalar_multiple_of(f: Polynomial, g: Polynomial) -> bool:
    """True when f = c*g for a nonzero rational c (both nonzero), or both zero."""
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    if set(f.terms) != set(g.terms):
        return False
    c = f.lc() / g.lc()
    return all(cf == c * g.terms[m] for m, cf in f.terms.items())
