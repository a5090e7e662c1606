"""Closed-form BV tables for loop homology of spheres and HH of exterior algebras.

Every table is truncated at a maximal exponent of its polynomial generator;
the reported window is the largest range of degrees in which no monomial is
missing.  Products or Delta values that would need a missing monomial are
left out of the table (truncated), unless their coefficient vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bv import BVTable, TableBuilder, sign
from .rings import F2, INTEGERS, Ring


def _power(name: str, k: int) -> str:
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


def _join(*parts: str) -> str:
    return " ".join(p for p in parts if p) or "1"


class _ExteriorTimesPolynomial:
    """Bookkeeping for Lambda(e) (x) R[p] truncated at p^K.

    Monomials ``(0, k) = p^k`` and ``(1, k) = e p^k``; ``|e|`` odd or the ring
    has characteristic 2, so ``e^2 = 0`` is consistent with graded commutativity.
    """

    def __init__(self, ring: Ring, e: str, de: int, p: str, dp: int, K: int):
        self.ring, self.de, self.dp, self.K = ring, de, dp, K
        self.b = TableBuilder(ring)
        self.idx = {}
        for k in range(K + 1):
            self.idx[0, k] = self.b.add(_join(_power(p, k)), k * dp)
        for k in range(K + 1):
            self.idx[1, k] = self.b.add(_join(e, _power(p, k)), de + k * dp)
        self.names = (e, p)

    def degree(self, key) -> int:
        return key[0] * self.de + key[1] * self.dp

    def element(self, terms: dict):
        """``{(e, k): c}`` -> monomial terms, or None if a nonzero term is missing."""
        out = {}
        for key, c in terms.items():
            c = self.ring.reduce(c)
            if not c:
                continue
            if key not in self.idx:
                return None
            out[self.idx[key]] = out.get(self.idx[key], 0) + c
        return out

    def fill_products(self):
        for (e1, i), m1 in self.idx.items():
            for (e2, j), m2 in self.idx.items():
                if e1 and e2:
                    self.b.products[m1, m2] = {}
                    continue
                s = sign(i * self.dp * self.de) if e2 else 1
                v = self.element({(e1 + e2, i + j): s})
                if v is not None:
                    self.b.products[m1, m2] = v

    def set_delta(self, key, terms: dict):
        v = self.element(terms)
        if v is not None:
            self.b.delta[self.idx[key]] = v

    def window(self) -> tuple[int, int]:
        lo = min(self.degree(k) for k in self.idx)
        missing = [self.degree((0, self.K + 1)), self.degree((1, self.K + 1))]
        return lo, min(missing) - 1


def circle_table(ring: Ring = INTEGERS, I: int = 5) -> BVTable:
    """k[Z] (x) Lambda(a), |x^i| = 0, |a| = -1, exponents |i| <= I.

    Delta(x^i a) = i x^i and Delta(x^i) = 0.  Degree 0 is infinite-dimensional,
    so no degree is complete: the window is empty.
    """
    if I < 1:
        raise ValueError("I must be >= 1")
    b = TableBuilder(ring)
    idx = {}
    exps = sorted(range(-I, I + 1), key=lambda i: (abs(i), i < 0))
    for i in exps:
        idx[0, i] = b.add(_join(_power("x", i)), 0)
    for i in exps:
        idx[1, i] = b.add(_join(_power("x", i), "a"), -1)
    for (e1, i), m1 in idx.items():
        for (e2, j), m2 in idx.items():
            if e1 and e2:
                b.products[m1, m2] = {}
            elif abs(i + j) <= I:
                b.products[m1, m2] = {idx[e1 + e2, i + j]: 1}
    for i in exps:
        b.delta[idx[0, i]] = {}
        b.delta[idx[1, i]] = {idx[0, i]: i}
    return b.build((-1, -2), "1", ["x", "x^-1", "a"])


def odd_sphere_table(n: int, ring: Ring = INTEGERS, K: int = 6) -> BVTable:
    """Lambda(a) (x) k[u], |a| = -n, |u| = n - 1 for odd n; Delta(a u^i) = i u^(i-1)."""
    if n < 3 or n % 2 == 0:
        raise ValueError("odd sphere model needs odd n >= 3")
    m = _ExteriorTimesPolynomial(ring, "a", -n, "u", n - 1, K)
    m.fill_products()
    for i in range(K + 1):
        m.set_delta((0, i), {})
        m.set_delta((1, i), {(0, i - 1): i} if i else {})
    return m.b.build(m.window(), "1", ["a", "u"])


def s2_f2_table(eps: int = 1, lam: int = 0, K: int = 8) -> BVTable:
    """Lambda(a) (x) F2[u], |a| = -2, |u| = 1.

    Delta(a u^k) = k (u^(k-1) + eps a u^(k+1)) and
    Delta(u^k) = lam k (u^(k+1) + eps a u^(k+3)).
    """
    if eps not in (0, 1) or lam not in (0, 1):
        raise ValueError("eps and lambda must be 0 or 1")
    m = _ExteriorTimesPolynomial(F2, "a", -2, "u", 1, K)
    m.fill_products()
    for k in range(K + 1):
        down = {(0, k - 1): k} if k else {}
        m.set_delta((1, k), {**down, (1, k + 1): k * eps})
        m.set_delta((0, k), {(0, k + 1): lam * k, (1, k + 3): lam * k * eps})
    return m.b.build(m.window(), "1", ["a", "u"])


def hh_sphere_f2_table(d: int = 2, K: int = 8) -> BVTable:
    """Lambda(g) (x) F2[f], |g| = -d, |f| = d - 1; Delta(g f^k) = k f^(k-1)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    m = _ExteriorTimesPolynomial(F2, "g", -d, "f", d - 1, K)
    m.fill_products()
    for k in range(K + 1):
        m.set_delta((0, k), {})
        m.set_delta((1, k), {(0, k - 1): k} if k else {})
    return m.b.build(m.window(), "1", ["g", "f"])


def even_sphere_z_table(n: int = 2, eps0: int | None = None, K: int = 6) -> BVTable:
    """Lambda(b) (x) Z[a, v] / (a^2, ab, 2av) with |a| = -n, |b| = -1, |v| = 2n - 2.

    Delta(b v^k) = (2k+1) v^k, plus eps0 a v^(k+1) when n = 2 (default eps0 = 1).
    Monomials: v^k and b v^k for k <= K, a, and a v^k of order 2 for 1 <= k <= K+1.
    """
    if n < 2 or n % 2:
        raise ValueError("even sphere model needs even n >= 2")
    if eps0 is None:
        eps0 = 1 if n == 2 else 0
    if eps0 not in (0, 1):
        raise ValueError("eps0 must be 0 or 1")
    if n != 2 and eps0:
        raise ValueError("eps0 only enters the model for n = 2")
    dv = 2 * (n - 1)
    bld = TableBuilder(INTEGERS)
    idx = {}
    for k in range(K + 1):
        idx["v", k] = bld.add(_join(_power("v", k)), k * dv)
    for k in range(K + 1):
        idx["b", k] = bld.add(_join("b", _power("v", k)), -1 + k * dv)
    for k in range(K + 2):
        idx["a", k] = bld.add(_join("a", _power("v", k)), -n + k * dv, 0 if k == 0 else 2)

    def elem(kind, k):
        return {idx[kind, k]: 1} if (kind, k) in idx else None

    for (s, i), m1 in idx.items():
        for (t, j), m2 in idx.items():
            kinds = {s, t} - {"v"}
            if len(kinds) > 1 or (s == t != "v"):
                bld.products[m1, m2] = {}
                continue
            kind = kinds.pop() if kinds else "v"
            v = elem(kind, i + j)
            if v is not None:
                bld.products[m1, m2] = v
    for (s, k), m1 in idx.items():
        if s != "b":
            bld.delta[m1] = {}
            continue
        val = {idx["v", k]: 2 * k + 1}
        if eps0:
            val[idx["a", k + 1]] = 1
        bld.delta[m1] = val
    missing = [(K + 1) * dv, -1 + (K + 1) * dv, -n + (K + 2) * dv]
    return bld.build((-n, min(missing) - 1), "1", ["a", "b", "v"])


@dataclass(frozen=True)
class SphereModelConfig:
    """Parameters for one of the closed-form tables.

    ``which`` is one of ``circle``, ``odd``, ``even-z``, ``s2-f2``, ``hh-f2``;
    ``K`` is the maximal exponent (``I`` for the circle).
    """

    which: str
    n: int = 2
    K: int = 6
    ring: Ring = INTEGERS
    eps: int = 1
    lam: int = 0
    eps0: int | None = None

    def build(self) -> BVTable:
        if self.which == "circle":
            return circle_table(self.ring, self.K)
        if self.which == "odd":
            return odd_sphere_table(self.n, self.ring, self.K)
        if self.which == "even-z":
            return even_sphere_z_table(self.n, self.eps0, self.K)
        if self.which == "s2-f2":
            return s2_f2_table(self.eps, self.lam, self.K)
        if self.which == "hh-f2":
            return hh_sphere_f2_table(self.n, self.K)
        raise ValueError(f"unknown model {self.which!r}")


def automorphism_images_f2(t: BVTable) -> dict[str, dict[str, int]]:
    """Images of the involution u^k -> u^k + k a u^(k+2), a u^k -> a u^k on an s2-f2 table."""
    out = {}
    lo, hi = t.window
    for mono in t.monomials:
        if mono.degree > hi:
            continue
        name = mono.name
        if name.startswith("a"):
            out[name] = {name: 1}
            continue
        k = 0 if name == "1" else (1 if name == "u" else int(name.split("^")[1]))
        img = {name: 1}
        if k % 2:
            img[_join("a", _power("u", k + 2))] = 1
        out[name] = img
    return out


def automorphism_images_z(t: BVTable) -> dict[str, dict[str, int]]:
    """Images of v^k -> v^k + k a v^(k+1) (identity on a, b v^k, a v^k) on the n = 2 table."""
    out = {}
    lo, hi = t.window
    for mono in t.monomials:
        if mono.degree > hi:
            continue
        name = mono.name
        img = {name: 1}
        if name == "1" or name.startswith("v"):
            k = 0 if name == "1" else (1 if name == "v" else int(name.split("^")[1]))
            if k % 2:
                img[_join("a", _power("v", k + 1))] = 1
        out[name] = img
    return out
