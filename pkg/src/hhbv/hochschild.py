"""Normalized Hochschild complexes of a lower-graded augmented algebra.

Chains are sums of ``a0[sa1|...|sap]`` with the ``ai`` in the augmentation ideal;
``|a0[sa1|...|sap]| = |a0| + sum(|ai| + 1)``.  All complexes are truncated to
words of length at most L (chains) or arity at most P (cochains), and every
routine that reads off homology checks that the requested degree is certified,
i.e. that no longer word could land in it or in a neighbouring degree.

Signs on the dual complex: ``B^v(phi) = (-1)^|phi| phi o B`` and
``d^v(phi) = -(-1)^|phi| phi o d``; with these ``B^v d^v + d^v B^v = 0``.
A functional on ``C_m`` has dual degree ``-m``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .algebra import GradedAlgebra, validate
from .bv import BVTable, Monomial, infer_generators
from .errors import HHBVError, NotDualizing, UnsupportedRing, WindowTooSmall
from .linalg import HomologyGroup, Matrix, homology, induced_map_on_homology, inverse
from .rings import F2, Ring


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def change_ring(A: GradedAlgebra, ring: Ring | None) -> GradedAlgebra:
    """Base change of the structure constants (only Z -> anything, or identity)."""
    if ring is None or ring == A.ring:
        return A
    if A.ring.kind != "Z":
        raise UnsupportedRing(f"cannot change coefficients from {A.ring} to {ring}")
    products = {k: tuple(ring.reduce(c) for c in v) for k, v in A.products.items()}
    theta = A.dualizing
    if theta is not None:
        theta = type(theta)(tuple(ring.reduce(c) for c in theta.values))
    return GradedAlgebra(ring, A.basis, A.unit, products, theta, A.commutative)


def _check(A: GradedAlgebra):
    bad = validate(A)
    if bad:
        raise HHBVError(f"invalid algebra: {bad[0].kind}: {bad[0].detail}")


@dataclass(frozen=True)
class ChainBasisElement:
    a0: int
    word: tuple[int, ...]
    degree: int


def _words(A: GradedAlgebra, max_len: int):
    for p in range(max_len + 1):
        yield from itertools.product(A.ideal, repeat=p)


def _word_degree(A: GradedAlgebra, word) -> int:
    return sum(A.degree(a) + 1 for a in word)


def d2_chain(A: GradedAlgebra, a0: int, word: tuple) -> dict:
    """d2 of a0[sa1|...|sak] as ``{(a0', word'): coeff}``.

    First term ``(-1)^|a0| a0 a1``, middle terms ``(-1)^eps_i`` merging
    ``a_i a_{i+1}`` with ``eps_i = |a0| + |sa1| + ... + |sai|``, last term
    ``-(-1)^{|sak| eps_{k-1}} ak a0``.  Merges landing on the unit vanish.
    """
    k = len(word)
    out: dict = {}
    if k == 0:
        return out
    deg = A.degree

    def put(key, c):
        out[key] = out.get(key, 0) + c

    s = _sign(deg(a0))
    for b, c in enumerate(A.mul_basis(a0, word[0])):
        if c:
            put((b, word[1:]), s * c)
    eps = deg(a0)
    for i in range(k - 1):
        eps += deg(word[i]) + 1
        s = _sign(eps)
        for b, c in enumerate(A.mul_basis(word[i], word[i + 1])):
            if c and b != A.unit:
                put((a0, word[:i] + (b,) + word[i + 2:]), s * c)
    eps_last = deg(a0) + _word_degree(A, word[:-1])
    s = -_sign((deg(word[-1]) + 1) * eps_last)
    for b, c in enumerate(A.mul_basis(word[-1], a0)):
        if c:
            put((b, word[:-1]), s * c)
    return {key: c for key, c in out.items() if A.ring.reduce(c)}


def connes_B_chain(A: GradedAlgebra, a0: int, word: tuple) -> dict:
    """B(a0[sa1|...|sap]) = sum_i (-1)^{|sa0..sa_{i-1}||sa_i..sa_p|} 1[sa_i|..|sa_p|sa0|..|sa_{i-1}]."""
    if a0 == A.unit:
        return {}
    letters = (a0,) + tuple(word)
    sdeg = [A.degree(x) + 1 for x in letters]
    out: dict = {}
    for i in range(len(letters)):
        e = sum(sdeg[:i]) * sum(sdeg[i:])
        key = (A.unit, letters[i:] + letters[:i])
        out[key] = out.get(key, 0) + _sign(e)
    return {key: c for key, c in out.items() if A.ring.reduce(c)}


class HochschildChainComplex:
    """Chains on words of length <= L, with d = d1 + d2 (d1 = 0 here: A has zero differential) and B.

    ``basis[m]`` lists the chain basis elements of degree m.  A degree m is
    *complete* when no word of length L+1 can reach it, which holds as soon as
    ``m > (L+1)(max|a| + 1)`` over the augmentation ideal.
    """

    def __init__(self, algebra: GradedAlgebra, max_word: int, ring: Ring | None = None):
        if max_word < 0:
            raise ValueError("max word length must be >= 0")
        A = change_ring(algebra, ring)
        _check(A)
        self.algebra = A
        self.ring = A.ring
        self.max_word = max_word
        top = max((A.degree(a) for a in A.ideal), default=-2)
        self.bound = (max_word + 1) * (top + 1)
        by_deg: dict[int, list] = {}
        for word in _words(A, max_word):
            wd = _word_degree(A, word)
            for a0 in range(A.dim):
                e = ChainBasisElement(a0, word, A.degree(a0) + wd)
                by_deg.setdefault(e.degree, []).append(e)
        self.basis = {m: tuple(v) for m, v in sorted(by_deg.items())}
        self._pos = {(e.a0, e.word): (m, i) for m, els in self.basis.items() for i, e in enumerate(els)}
        self._cache: dict = {}

    # -- bookkeeping -------------------------------------------------------------

    def dim(self, m: int) -> int:
        return len(self.basis.get(m, ()))

    def is_complete(self, m: int) -> bool:
        return m > self.bound

    def is_certified(self, m: int) -> bool:
        """Homology at chain degree m is exact when m-1, m, m+1 are complete."""
        return self.is_complete(m - 1)

    @property
    def certified_degrees(self) -> list[int]:
        """Certified chain degrees that carry at least one basis element."""
        return [m for m in self.basis if self.is_certified(m)]

    def require(self, degrees: Sequence[int]):
        bad = [m for m in degrees if not self.is_certified(m)]
        if bad:
            raise WindowTooSmall(bad, f"chain degrees {sorted(bad)} not certified with max word {self.max_word}")

    def element(self, a0: int, word: Sequence[int]) -> ChainBasisElement:
        m, i = self._pos[a0, tuple(word)]
        return self.basis[m][i]

    def position(self, a0: int, word: Sequence[int]) -> tuple[int, int]:
        return self._pos[a0, tuple(word)]

    def vector(self, terms: Mapping, degree: int) -> tuple:
        v = [0] * self.dim(degree)
        for key, c in terms.items():
            m, i = self._pos[key]
            if m != degree:
                raise ValueError(f"term {key} has degree {m}, expected {degree}")
            v[i] += c
        return tuple(self.ring.reduce(c) for c in v)

    def _matrix(self, op, m: int, step: int) -> Matrix:
        """Matrix of ``op`` from degree m to m+step; terms beyond the word window are dropped."""
        key = (op.__name__, m)
        if key not in self._cache:
            src, tgt = self.basis.get(m, ()), m + step
            cols = []
            for e in src:
                col = [0] * self.dim(tgt)
                for k, c in op(self.algebra, e.a0, e.word).items():
                    pos = self._pos.get(k)
                    if pos is None:
                        continue
                    col[pos[1]] += c
                cols.append(tuple(self.ring.reduce(c) for c in col))
            self._cache[key] = Matrix.from_columns(cols, self.dim(tgt))
        return self._cache[key]

    def d(self, m: int) -> Matrix:
        """d: C_m -> C_{m-1}."""
        return self._matrix(d2_chain, m, -1)

    def B(self, m: int) -> Matrix:
        """B: C_m -> C_{m+1}."""
        return self._matrix(connes_B_chain, m, +1)

    # -- dual complex ------------------------------------------------------------

    def dual_basis(self, k: int) -> tuple[ChainBasisElement, ...]:
        return self.basis.get(-k, ())

    def dual_d(self, k: int) -> Matrix:
        """d^v from dual degree k to k-1, i.e. -(-1)^k (d: C_{-k+1} -> C_{-k})^T."""
        return (self.d(-k + 1).T * -_sign(k)).reduce(self.ring)

    def dual_B(self, k: int) -> Matrix:
        """B^v from dual degree k to k+1, i.e. (-1)^k (B: C_{-k-1} -> C_{-k})^T."""
        return (self.B(-k - 1).T * _sign(k)).reduce(self.ring)

    def dual_certified(self, k: int) -> bool:
        return self.is_certified(-k)

    def dual_homology(self, k: int) -> HomologyGroup:
        self.require([-k])
        return homology(self.dual_d(k + 1), self.dual_d(k), self.ring)

    def chain_homology(self, m: int) -> HomologyGroup:
        self.require([m])
        return homology(self.d(m + 1), self.d(m), self.ring)


def build_chain_complex(A: GradedAlgebra, max_word: int, ring: Ring | None = None) -> HochschildChainComplex:
    return HochschildChainComplex(A, max_word, ring)


def connes_B(A: GradedAlgebra, max_word: int, ring: Ring | None = None) -> dict[int, Matrix]:
    """B: C_m -> C_{m+1} for every chain degree m whose target is complete."""
    cx = build_chain_complex(A, max_word, ring)
    return {m: cx.B(m) for m in cx.basis if cx.is_complete(m + 1)}


# -- integral route: HH^*(A; A^dual) as homology of the dual chain complex -----------


@dataclass
class DualHomology:
    """Groups of the dual Hochschild complex with the action of B^v.

    ``delta[k]`` is the induced map from degree k to k+1 in the representative
    bases of ``groups[k]`` and ``groups[k+1]``.
    """

    complex: HochschildChainComplex
    groups: dict[int, HomologyGroup]
    delta: dict[int, Matrix]

    @property
    def degrees(self) -> list[int]:
        return sorted(self.groups)


def hh_via_dual(
    A: GradedAlgebra,
    ring: Ring | None = None,
    max_word: int = 8,
    degrees: Sequence[int] | None = None,
) -> DualHomology:
    """HH^*(A; A^dual) and the induced B^v, read off the dual chain complex.

    Without ``degrees`` every certified non-empty degree is computed;
    requesting an uncertified degree raises WindowTooSmall.
    """
    cx = build_chain_complex(A, max_word, ring)
    if degrees is None:
        degrees = sorted(-m for m in cx.certified_degrees)
    else:
        cx.require([-k for k in degrees])
    groups = {k: cx.dual_homology(k) for k in degrees}
    delta = {}
    for k in degrees:
        if k + 1 in groups:
            delta[k] = induced_map_on_homology(cx.dual_B(k), groups[k], groups[k + 1])
    return DualHomology(cx, groups, delta)


# -- cochains over F2 -----------------------------------------------------------------


@dataclass(frozen=True)
class Cochain:
    """A Hochschild cochain over F2: ``values[word]`` is a vector in A.

    Words missing from ``values`` are sent to zero.  Cochains need not have a
    single arity, but the operations below keep homogeneous inputs homogeneous.
    """

    algebra: GradedAlgebra
    values: Mapping[tuple, tuple] = field(default_factory=dict)

    @classmethod
    def basic(cls, A: GradedAlgebra, word: Sequence[int], b: int) -> "Cochain":
        return cls(A, {tuple(word): A.e(b)})

    @classmethod
    def from_terms(cls, A: GradedAlgebra, terms: Mapping[tuple, int]) -> "Cochain":
        """Build from ``{(word, b): coeff}``."""
        vals: dict = {}
        for (word, b), c in terms.items():
            v = list(vals.get(word, (0,) * A.dim))
            v[b] += c
            vals[word] = tuple(v)
        return cls(A, vals).clean()

    def clean(self) -> "Cochain":
        red = self.algebra.ring.reduce
        vals = {}
        for w, v in self.values.items():
            v = tuple(red(c) for c in v)
            if any(v):
                vals[tuple(w)] = v
        return Cochain(self.algebra, vals)

    def terms(self) -> dict:
        return {(w, b): c for w, v in self.values.items() for b, c in enumerate(v) if c}

    @property
    def arity(self) -> int | None:
        ar = {len(w) for w in self.values}
        return ar.pop() if len(ar) == 1 else None

    @property
    def degree(self) -> int | None:
        A = self.algebra
        degs = {A.degree(b) - _word_degree(A, w) for (w, b) in self.terms()}
        if len(degs) > 1:
            raise ValueError("cochain is not homogeneous")
        return degs.pop() if degs else None

    def __call__(self, word) -> tuple:
        return self.values.get(tuple(word), (0,) * self.algebra.dim)

    def __add__(self, other: "Cochain") -> "Cochain":
        vals = dict(self.values)
        for w, v in other.values.items():
            old = vals.get(w, (0,) * self.algebra.dim)
            vals[w] = tuple(a + b for a, b in zip(old, v))
        return Cochain(self.algebra, vals).clean()

    __sub__ = __add__

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.clean().values == other.clean().values

    def __hash__(self):
        return hash(frozenset(self.clean().values.items()))

    def is_zero(self) -> bool:
        return not self.clean().values


def _require_f2(A: GradedAlgebra):
    if A.ring.characteristic != 2:
        raise UnsupportedRing("cochain-level operations are implemented over F2 only")


def cochain_differential(f: Cochain) -> Cochain:
    """(d2 f)[sa1|...|sa_{p+1}] = a1 f[..] + sum f[..|s(ai ai+1)|..] + f[sa1|..|sap] a_{p+1} (mod 2)."""
    A = f.algebra
    _require_f2(A)
    out: dict = {}

    def put(word, vec):
        old = out.get(word, (0,) * A.dim)
        out[word] = tuple(x + y for x, y in zip(old, vec))

    for word, val in f.values.items():
        for a in A.ideal:
            put((a,) + word, A.mul(A.e(a), val))
            put(word + (a,), A.mul(val, A.e(a)))
        # middle terms: words w' whose merge at position i gives ``word``
        for i, c in enumerate(word):
            for a, b in itertools.product(A.ideal, repeat=2):
                coeff = A.mul_basis(a, b)[c]
                if A.ring.reduce(coeff):
                    put(word[:i] + (a, b) + word[i + 1:], tuple(coeff * x for x in val))
    return Cochain(A, out).clean()


def cup(f: Cochain, g: Cochain) -> Cochain:
    """(f u g)[w1 w2] = f[w1] g[w2]."""
    A = f.algebra
    _require_f2(A)
    out: dict = {}
    for u, fu in f.values.items():
        for v, gv in g.values.items():
            w = u + v
            prod = A.mul(fu, gv)
            old = out.get(w, (0,) * A.dim)
            out[w] = tuple(x + y for x, y in zip(old, prod))
    return Cochain(A, out).clean()


def brace(f: Cochain, g: Cochain) -> Cochain:
    """f o g: insert g, projected to the augmentation ideal, into each slot of f (mod 2)."""
    A = f.algebra
    _require_f2(A)
    out: dict = {}
    for v, gv in g.values.items():
        for b in A.ideal:
            cb = gv[b]
            if not cb:
                continue
            for u, fu in f.values.items():
                for i, letter in enumerate(u):
                    if letter != b:
                        continue
                    w = u[:i] + v + u[i + 1:]
                    old = out.get(w, (0,) * A.dim)
                    out[w] = tuple(x + cb * y for x, y in zip(old, fu))
    return Cochain(A, out).clean()


def gerst_bracket(f: Cochain, g: Cochain) -> Cochain:
    """{f, g} = f o g - g o f (signs vanish mod 2)."""
    return brace(f, g) + brace(g, f)


class CochainComplex:
    """Cochains of arity <= P over F2, graded by ``|b| - sum(|ai| + 1)`` with d of degree -1.

    Arity-p cochains have degree >= min|A| + p*c where c = min(-|a| - 1) over the
    augmentation ideal, so degree m is complete when ``m < min|A| + (P+1)c``.
    """

    def __init__(self, algebra: GradedAlgebra, max_arity: int, ring: Ring | None = None):
        ring = ring or algebra.ring
        if ring.characteristic != 2:
            raise UnsupportedRing(f"cochain complexes are implemented over F2, not {ring}")
        A = change_ring(algebra, F2) if algebra.ring != F2 else algebra
        _check(A)
        self.algebra = A
        self.ring = F2
        self.max_arity = max_arity
        cmin = min((-A.degree(a) - 1 for a in A.ideal), default=1)
        self.min_degree = min(A.degree(i) for i in range(A.dim))
        self.bound = self.min_degree + (max_arity + 1) * cmin
        by_deg: dict[int, list] = {}
        for word in _words(A, max_arity):
            wd = _word_degree(A, word)
            for b in range(A.dim):
                by_deg.setdefault(A.degree(b) - wd, []).append((word, b))
        self.basis = {m: tuple(v) for m, v in sorted(by_deg.items())}
        self._pos = {key: (m, i) for m, keys in self.basis.items() for i, key in enumerate(keys)}
        self._cache: dict = {}

    def dim(self, m: int) -> int:
        return len(self.basis.get(m, ()))

    def is_complete(self, m: int) -> bool:
        return m < self.bound

    def is_certified(self, m: int) -> bool:
        return self.is_complete(m + 1)

    @property
    def top_certified(self) -> int:
        return self.bound - 2

    def require(self, degrees):
        bad = [m for m in degrees if not self.is_certified(m)]
        if bad:
            raise WindowTooSmall(bad, f"cochain degrees {sorted(bad)} not certified with max arity {self.max_arity}")

    def vector(self, f: Cochain, degree: int) -> tuple:
        v = [0] * self.dim(degree)
        for key, c in f.terms().items():
            m, i = self._pos[key]
            if m != degree:
                raise ValueError(f"cochain term {key} has degree {m}, expected {degree}")
            v[i] += c
        return tuple(c % 2 for c in v)

    def cochain(self, vec, degree: int) -> Cochain:
        keys = self.basis.get(degree, ())
        return Cochain.from_terms(self.algebra, {keys[i]: c for i, c in enumerate(vec) if c % 2})

    def d(self, m: int) -> Matrix:
        """d: C^m -> C^{m-1}; values on words longer than P are dropped."""
        if m not in self._cache:
            cols = []
            for word, b in self.basis.get(m, ()):
                img = cochain_differential(Cochain.basic(self.algebra, word, b))
                col = [0] * self.dim(m - 1)
                for key, c in img.terms().items():
                    pos = self._pos.get(key)
                    if pos is not None:
                        col[pos[1]] += c
                cols.append(tuple(c % 2 for c in col))
            self._cache[m] = Matrix.from_columns(cols, self.dim(m - 1))
        return self._cache[m]

    def homology(self, m: int) -> HomologyGroup:
        self.require([m])
        return homology(self.d(m + 1), self.d(m), F2)


def build_cochain_complex(A: GradedAlgebra, max_arity: int, ring: Ring | None = None) -> CochainComplex:
    return CochainComplex(A, max_arity, ring)


# -- transport to the dual complex ----------------------------------------------------------


def _theta(A: GradedAlgebra, theta=None):
    theta = theta if theta is not None else A.dualizing
    if theta is None:
        raise NotDualizing("algebra carries no dualizing functional")
    probe = GradedAlgebra(A.ring, A.basis, A.unit, A.products, theta, A.commutative)
    from .algebra import _duality_violations

    bad = _duality_violations(probe)
    if bad:
        raise NotDualizing(bad[0].detail)
    return theta, probe.dualizing_degree


def theta_hat(f: Cochain, theta=None) -> dict:
    """Dual chain ``a0[w] -> theta(f(w) a0)``, as ``{(a0, word): coeff}``."""
    A = f.algebra
    th, _ = _theta(A, theta)
    out = {}
    for w, val in f.values.items():
        for a0 in range(A.dim):
            c = A.ring.reduce(th(A.mul(val, A.e(a0))))
            if c:
                out[a0, w] = c
    return out


def theta_hat_matrix(cochains: CochainComplex, chains: HochschildChainComplex, m: int, theta=None) -> Matrix:
    """Theta-hat from cochain degree m to dual degree m + d, in the two bases."""
    A = cochains.algebra
    th, d = _theta(A, theta)
    k = m + d
    cols = []
    for word, b in cochains.basis.get(m, ()):
        img = theta_hat(Cochain.basic(A, word, b), th)
        col = [0] * len(chains.dual_basis(k))
        for key, c in img.items():
            col[chains.position(*key)[1]] += c
        cols.append(tuple(c % 2 for c in col))
    return Matrix.from_columns(cols, len(chains.dual_basis(k)))


def cochain_name(A: GradedAlgebra, word: Sequence[int], b: int) -> str:
    return "[" + "|".join(A.basis[a].name for a in word) + "]->" + A.basis[b].name


def _class_name(cx: CochainComplex, rep, m: int, i: int) -> str:
    support = [j for j, c in enumerate(rep) if c % 2]
    if len(support) == 1:
        word, b = cx.basis[m][support[0]]
        return cochain_name(cx.algebra, word, b)
    return f"h{m}.{i}"


def delta_on_HH(A: GradedAlgebra, max_arity: int, theta=None) -> BVTable:
    """HH^*(A; A) over F2 with cup product and Delta = Theta-hat^-1 o B^v o Theta-hat.

    The window is every degree whose homology is certified with cochains of
    arity <= ``max_arity``.  Monomials are homology classes; a class represented
    by a single basic cochain ``w -> b`` is named ``[w]->b``.
    """
    cx = build_cochain_complex(A, max_arity)
    A2 = cx.algebra
    th, d = _theta(A2, theta)
    chains = build_chain_complex(A2, max_arity)
    lo, hi = cx.min_degree, cx.top_certified
    if hi < lo:
        raise WindowTooSmall([lo], f"max arity {max_arity} certifies no degree")

    if not lo <= 0 <= hi:
        raise WindowTooSmall([0], f"max arity {max_arity} does not certify the unit's degree")
    groups = {m: cx.homology(m) for m in range(lo, hi + 1)}
    # swap one degree-0 representative for the unit cochain so the unit is a monomial
    unit_vec = cx.vector(Cochain.basic(A2, (), A2.unit), 0)
    unit_coords = tuple(c % 2 for c in groups[0].coordinates(unit_vec))
    pivot = unit_coords.index(1)
    monomials, reps, where = [], [], {}
    for m, H in groups.items():
        for i, rep in enumerate(H.representatives):
            if m == 0 and i == pivot:
                rep = unit_vec
            where[len(monomials)] = (m, i)
            monomials.append(Monomial(_class_name(cx, rep, m, i), m, 0))
            reps.append(rep)

    def to_terms(m, vec):
        base = sum(groups[k].ngens for k in range(lo, m))
        coords = [c % 2 for c in groups[m].coordinates(vec)]
        if m == 0 and coords[pivot]:
            coords = [(c + u) % 2 for c, u in zip(coords, unit_coords)]
            coords[pivot] = 1
        return tuple((base + j, 1) for j, c in enumerate(coords) if c % 2)

    n = len(monomials)
    as_cochain = [cx.cochain(reps[i], where[i][0]) for i in range(n)]
    products = {}
    for i, j in itertools.product(range(n), repeat=2):
        m = monomials[i].degree + monomials[j].degree
        if m > hi:
            continue
        if m < lo:
            products[i, j] = ()
            continue
        prod = cup(as_cochain[i], as_cochain[j])
        products[i, j] = to_terms(m, cx.vector(prod, m))

    thetas = {m: theta_hat_matrix(cx, chains, m, th) for m in range(lo, hi + 1)}
    delta = {}
    for idx in range(n):
        m = monomials[idx].degree
        if m + 1 > hi:
            continue
        img = chains.dual_B(m + d) @ (thetas[m] @ reps[idx])
        back = inverse(thetas[m + 1], F2) @ img
        delta[idx] = to_terms(m + 1, tuple(c % 2 for c in back))

    unit = next(i for i, (m, j) in where.items() if m == 0 and j == pivot)
    table = BVTable(F2, tuple(monomials), products, delta, (lo, hi), unit, ())
    return BVTable(F2, table.monomials, products, delta, (lo, hi), unit, infer_generators(table))


_SPHERE_NAME = re.compile(r"\[((?:x\|)*x)?\]->(1|x)")


def exterior_sphere_renaming(table: BVTable) -> dict[str, str]:
    """Map ``[x|...|x]->1`` to ``f^k`` and ``[x|...|x]->x`` to ``g f^k`` (HH of an exterior sphere)."""
    out = {}
    for mono in table.monomials:
        m = _SPHERE_NAME.fullmatch(mono.name)
        if not m:
            continue
        k = 0 if m.group(1) is None else m.group(1).count("x")
        power = "" if k == 0 else ("f" if k == 1 else f"f^{k}")
        if m.group(2) == "1":
            out[mono.name] = power or "1"
        else:
            out[mono.name] = f"g {power}" if power else "g"
    return out
