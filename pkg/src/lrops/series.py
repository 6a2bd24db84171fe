"""Truncated power series: compositional inverse and the signed inverse test.

A series is a list of rational coefficients [a1, a2, ...] for
a1*t + a2*t^2 + ... (no constant term).  The compositional inverse g
(f(g(t)) = t) is solved order by order; the generating-series screen used
for nilpotent operads is the sign-twisted inverse -f^<-1>(-t).
"""

from __future__ import annotations

from .polyring import QQ


class NonInvertibleSeriesError(ValueError):
    """The linear coefficient vanishes: no compositional inverse."""


def _mul_trunc(a: list, b: list, order: int) -> list:
    """Product of two series given as coefficient lists starting at t^1."""
    out = [QQ(0)] * order
    for i, ai in enumerate(a, start=1):
        if ai == 0:
            continue
        for j, bj in enumerate(b, start=1):
            if i + j > order:
                break
            out[i + j - 1] += ai * bj
    return out


def compose(f: list, g: list, order: int) -> list:
    """f(g(t)) truncated at t^order; both series have zero constant term."""
    out = [QQ(0)] * order
    power = [QQ(0)] * order  # g^k
    gk = None
    for k, fk in enumerate(f, start=1):
        if k > order:
            break
        gk = list(g[:order]) + [QQ(0)] * max(0, order - len(g)) if gk is None else _mul_trunc(gk, g, order)
        if fk != 0:
            for idx in range(order):
                out[idx] += fk * gk[idx]
    return out


def compositional_inverse(f: list, order: int) -> list:
    """g with f(g(t)) = t + O(t^{order+1}), solved order by order."""
    coeffs = [QQ(c) for c in f]
    if not coeffs or coeffs[0] == 0:
        raise NonInvertibleSeriesError("series has zero linear coefficient")
    a1 = coeffs[0]
    g = [QQ(1) / a1]
    for n in range(2, order + 1):
        # coefficient of t^n in f(g) with g_n unknown appears only in a1*g_n
        trial = g + [QQ(0)]
        val = compose(coeffs, trial, n)[n - 1]
        g.append(-val / a1)
    return g


def signed_inverse(f: list, order: int) -> list:
    """-f^<-1>(-t) through t^order.  Nonnegative coefficients are a
    necessary condition for the generating-series test to pass."""
    g = compositional_inverse(f, order)
    return [c if k % 2 == 1 else -c for k, c in enumerate(g, start=1)]
