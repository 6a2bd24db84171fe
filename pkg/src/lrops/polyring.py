"""Sparse multivariate polynomials over exact rationals, in grevlex order.

Monomials are exponent tuples, one entry per ring variable, with x1 the
*smallest* variable: for equal total degree, the monomial with the larger
exponent at the smallest differing index is the smaller one.  This is the
graded reverse lexicographic order once the variable list is read in
reverse, and the whole toolkit depends on it (leading monomials, Groebner
bases, the printed basis comparisons).

Coefficients are exact rationals (gmpy2.mpq when available).  All values
are immutable after construction; operations are pure functions.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Union

try:
    from gmpy2 import mpq as QQ, mpz as ZZ
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as QQ

    ZZ = int

Rational = Union[int, "QQ"]

_ZERO = QQ(0)
_ONE = QQ(1)


class RingMismatchError(ValueError):
    """Operands live in different polynomial rings."""


class DivisibilityError(ArithmeticError):
    """Exact division was requested but the divisor does not divide."""


_KEY_CACHE: dict = {}


def grevlex_key(exps: tuple[int, ...]):
    """Sort key: ascending = increasing monomial.  Memoized (hot path)."""
    k = _KEY_CACHE.get(exps)
    if k is None:
        k = (sum(exps), tuple(-e for e in exps))
        if len(_KEY_CACHE) < 4_000_000:
            _KEY_CACHE[exps] = k
    return k


def grevlex_compare(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """-1, 0, 1 as a precedes, equals, follows b."""
    if len(a) != len(b):
        raise RingMismatchError("monomials of different rings")
    da, db = sum(a), sum(b)
    if da != db:
        return -1 if da < db else 1
    for ea, eb in zip(a, b):
        if ea != eb:
            # larger exponent at the smallest differing index = smaller monomial
            return -1 if ea > eb else 1
    return 0


def monomial_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    """A fixed, ordered list of variable names over the rationals."""

    __slots__ = ("names", "nvars", "_index", "_zero", "_one", "_gens")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names: {self.names}")
        self.nvars = len(self.names)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._zero = None
        self._one = None
        self._gens = None

    def __repr__(self):
        return f"PolyRing({','.join(self.names)})"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    @property
    def zero(self) -> "Polynomial":
        if self._zero is None:
            self._zero = Polynomial(self, {})
        return self._zero

    @property
    def one(self) -> "Polynomial":
        if self._one is None:
            self._one = self.const(1)
        return self._one

    def const(self, c: Rational) -> "Polynomial":
        c = QQ(c)
        if c == 0:
            return self.zero
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self._index[name]] = 1
        return Polynomial(self, {tuple(e): _ONE})

    def gens(self) -> tuple["Polynomial", ...]:
        if self._gens is None:
            self._gens = tuple(self.var(n) for n in self.names)
        return self._gens

    def monomial(self, exps: Iterable[int], coeff: Rational = 1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise RingMismatchError("exponent tuple has wrong length")
        c = QQ(coeff)
        return Polynomial(self, {exps: c} if c != 0 else {})

    def extend(self, *extra: str) -> "PolyRing":
        return PolyRing(self.names + extra)

    def poly(self, terms: Mapping[tuple[int, ...], Rational]) -> "Polynomial":
        clean = {}
        for m, c in terms.items():
            c = QQ(c)
            if c != 0:
                clean[tuple(m)] = c
        return Polynomial(self, clean)

    def parse(self, text: str) -> "Polynomial":
        return _parse_poly(self, text)


class Polynomial:
    """Immutable sparse polynomial: dict exponent-tuple -> nonzero rational."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        """Degree <= 0 (zero or a nonzero constant)."""
        if not self.terms:
            return True
        if len(self.terms) > 1:
            return False
        (m,) = self.terms
        return not any(m)

    def is_one(self) -> bool:
        return self.is_scalar() and not self.is_zero() and self.lc() == 1

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.ring.index(name)
        return max(m[i] for m in self.terms)

    # -- leading data -------------------------------------------------------

    def lm(self) -> tuple[int, ...]:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading monomial")
        if self._lm is None:
            self._lm = max(self.terms, key=grevlex_key)
        return self._lm

    def lc(self):
        return self.terms[self.lm()]

    def constant(self):
        """Coefficient of the constant monomial."""
        return self.terms.get((0,) * self.ring.nvars, _ZERO)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Rational]]:
        """Terms in strictly decreasing grevlex order (leading first)."""
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def sort_key(self):
        """Term-by-term grevlex key for ordering lists of polynomials."""
        return tuple(grevlex_key(m) for m, _ in self.sorted_terms())

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring is not other.ring and self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        self._check(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m, _ZERO) + c
            if s == 0:
                res.pop(m, None)
            else:
                res[m] = s
        return Polynomial(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if len(self.terms) > len(other.terms):
            f, g = other, self
        else:
            f, g = self, other
        res: dict = {}
        for m1, c1 in f.terms.items():
            for m2, c2 in g.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                s = res.get(m, _ZERO) + c1 * c2
                if s == 0:
                    res.pop(m, None)
                else:
                    res[m] = s
        return Polynomial(self.ring, res)

    __rmul__ = __mul__

    def scale(self, c: Rational) -> "Polynomial":
        c = QQ(c)
        if c == 0:
            return self.ring.zero
        return Polynomial(self.ring, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int,)) or type(other) is type(_ONE):
            return self.is_scalar() and self.constant() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- normalization ------------------------------------------------------

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lc = self.lc()
        if lc == 1:
            return self
        return Polynomial(self.ring, {m: c / lc for m, c in self.terms.items()})

    def primitive(self) -> "Polynomial":
        """Integer-cleared with content removed; leading coefficient positive."""
        if self.is_zero():
            return self
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = _gcd(num_gcd, abs(c.numerator))
            den_lcm = _lcm(den_lcm, c.denominator)
        factor = QQ(den_lcm, num_gcd)
        if self.lc() < 0:
            factor = -factor
        return Polynomial(self.ring, {m: c * factor for m, c in self.terms.items()})

    # -- substitution -------------------------------------------------------

    def subs(self, values: Mapping[str, object], target: PolyRing | None = None):
        """Substitute values (rationals or polynomials of `target`) for variables.

        Unsubstituted variables must exist in `target` (by name).  When
        `target` is None the original ring is reused (pure rational partial
        substitution).  Returns a Polynomial of the target ring.
        """
        if target is None:
            target = self.ring
        vals: list[Polynomial] = []
        for name in self.ring.names:
            if name in values:
                v = values[name]
                if not isinstance(v, Polynomial):
                    v = target.const(v)
                elif v.ring != target:
                    raise RingMismatchError("substitution value in wrong ring")
                vals.append(v)
            else:
                vals.append(target.var(name))
        result = target.zero
        pow_cache: dict[tuple[int, int], Polynomial] = {}
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    p = pow_cache.get(key)
                    if p is None:
                        p = vals[i] ** e
                        pow_cache[key] = p
                    term = term * p
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Rational]):
        """Full evaluation at a rational point (all variables assigned)."""
        vals = [QQ(point[name]) for name in self.ring.names]
        total = _ZERO
        for m, c in self.terms.items():
            v = c
            for x, e in zip(vals, m):
                if e:
                    v = v * x**e
            total += v
        return total

    def embed(self, target: PolyRing) -> "Polynomial":
        """Rename-free embedding into a ring containing all our variables."""
        pos = [target.index(n) for n in self.ring.names]
        res = {}
        for m, c in self.terms.items():
            e = [0] * target.nvars
            for p, x in zip(pos, m):
                e[p] = x
            res[tuple(e)] = c
        return Polynomial(target, res)

    def project(self, target: PolyRing) -> "Polynomial":
        """Inverse of embed: drop variables that never occur (must have exponent 0)."""
        pos = []
        for n in self.ring.names:
            pos.append(target.index(n) if n in target._index else None)
        res = {}
        for m, c in self.terms.items():
            e = [0] * target.nvars
            for name, p, x in zip(self.ring.names, pos, m):
                if p is None:
                    if x:
                        raise RingMismatchError(f"variable {name} occurs; cannot project")
                else:
                    e[p] = x
            res[tuple(e)] = c
        return Polynomial(target, res)

    # -- division -----------------------------------------------------------

    def exact_divide(self, g: "Polynomial") -> "Polynomial":
        """Quotient q with q*g == self; raises DivisibilityError otherwise."""
        self._check(g)
        if g.is_zero():
            raise DivisibilityError("division by zero polynomial")
        if self.is_zero():
            return self
        rem = dict(self.terms)
        quo: dict = {}
        glm, glc = g.lm(), g.lc()
        gterms = list(g.terms.items())
        while rem:
            m = max(rem, key=grevlex_key)
            if not monomial_divides(glm, m):
                raise DivisibilityError("not exactly divisible")
            qm = monomial_div(m, glm)
            qc = rem[m] / glc
            quo[qm] = qc
            for gm, gc in gterms:
                mm = monomial_mul(qm, gm)
                s = rem.get(mm, _ZERO) - qc * gc
                if s == 0:
                    rem.pop(mm, None)
                else:
                    rem[mm] = s
        return Polynomial(self.ring, quo)

    def divides(self, other: "Polynomial") -> bool:
        try:
            other.exact_divide(self)
            return True
        except DivisibilityError:
            return False

    # -- printing -----------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    __repr__ = __str__


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _lcm(a, b):
    if a == 0 or b == 0:
        return 0
    return a // _gcd(a, b) * b


# -- canonical text form ----------------------------------------------------
#
# Integer-cleared, terms in decreasing grevlex order, leading coefficient
# positive; e.g. "x1^2*x2 - 3*x3 + 1".  Used by every report file and cache.


def format_poly(f: Polynomial, clear: bool = False) -> str:
    if f.is_zero():
        return "0"
    g = f.primitive() if clear else f
    parts = []
    for m, c in g.sorted_terms():
        factors = []
        for name, e in zip(g.ring.names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        ac = abs(c)
        if not mono:
            body = str(ac)
        elif ac == 1:
            body = mono
        else:
            body = f"{ac}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def canonical_str(f: Polynomial) -> str:
    """The canonical (integer-cleared, sign-normalized) text form."""
    return format_poly(f, clear=True)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


def _parse_poly(ring: PolyRing, text: str) -> Polynomial:
    """Parse +,-,*,^,parentheses over ring variables and rational literals."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"cannot tokenize {text[pos:]!r}")
            break
        tokens.append(m)
        pos = m.end()
    toks = [
        (("num", t["num"]) if t["num"] else ("name", t["name"]) if t["name"] else ("op", t["op"]))
        for t in tokens
    ]
    idx = 0

    def peek():
        return toks[idx] if idx < len(toks) else ("end", "")

    def take():
        nonlocal idx
        t = peek()
        idx += 1
        return t

    def parse_sum() -> Polynomial:
        kind, val = peek()
        sign = 1
        while kind == "op" and val in "+-":
            take()
            if val == "-":
                sign = -sign
            kind, val = peek()
        acc = parse_product().scale(sign)
        while True:
            kind, val = peek()
            if kind == "op" and val in "+-":
                take()
                term = parse_product()
                acc = acc + term if val == "+" else acc - term
            else:
                return acc

    def parse_product() -> Polynomial:
        acc = parse_power()
        while True:
            kind, val = peek()
            if kind == "op" and val == "*":
                take()
                acc = acc * parse_power()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                acc = acc * parse_power()  # implicit multiplication
            else:
                return acc

    def parse_power() -> Polynomial:
        base = parse_atom()
        kind, val = peek()
        if kind == "op" and val == "^":
            take()
            kind, val = take()
            if kind != "num" or "/" in val:
                raise ValueError("exponent must be a nonnegative integer")
            return base ** int(val)
        return base

    def parse_atom() -> Polynomial:
        kind, val = take()
        if kind == "num":
            if "/" in val:
                p, q = val.split("/")
                return ring.const(QQ(int(p), int(q)))
            return ring.const(int(val))
        if kind == "name":
            return ring.var(val)
        if kind == "op" and val == "(":
            inner = parse_sum()
            kind, val = take()
            if (kind, val) != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        if kind == "op" and val == "-":
            return -parse_atom()
        raise ValueError(f"unexpected token {val!r}")

    result = parse_sum()
    if idx != len(toks):
        raise ValueError(f"trailing tokens in {text!r}")
    return result
