"""Degree-preserving unital algebra isomorphisms between truncated BV tables.

The search enumerates images of the algebra generators, extends them
multiplicatively along a fixed factorization of every monomial, keeps the
candidates that are multiplicative and bijective on the common window, and
only then filters by Delta or by the bracket.  Every claim is relative to the
window: a negative answer is only final when every generator sits in a
complete degree, otherwise :class:`~hhbv.errors.WindowNonConclusive` is raised.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .bv import BVTable, BracketTable, bracket_from_delta
from .errors import NotFinitelyGenerated, TruncationEscape, WindowNonConclusive
from .linalg import Matrix, rank
from .rings import prime_field


@dataclass
class IsoWitness:
    """A unital algebra map given by the images of the source monomials in its domain."""

    source: BVTable = field(repr=False)
    target: BVTable = field(repr=False)
    images: dict[int, dict]
    preserves_product: bool | None = None
    preserves_delta: bool | None = None
    preserves_bracket: bool | None = None

    def apply(self, x: Mapping) -> dict:
        out: dict = {}
        for i, c in x.items():
            if i not in self.images:
                raise TruncationEscape(f"{self.source.monomials[i].name} is outside the map's domain")
            for k, d in self.images[i].items():
                out[k] = out.get(k, 0) + c * d
        return self.target.normalize(out)

    def degrees(self) -> list[int]:
        return sorted({self.source.degree(i) for i in self.images})

    def matrix(self, degree: int) -> Matrix:
        src = [i for i in self.source.by_degree().get(degree, []) if i in self.images]
        tgt = self.target.by_degree().get(degree, [])
        pos = {k: r for r, k in enumerate(tgt)}
        cols = []
        for i in src:
            col = [0] * len(tgt)
            for k, c in self.images[i].items():
                col[pos[k]] = c
            cols.append(col)
        return Matrix.from_columns(cols, len(tgt))

    def named(self) -> dict[str, list]:
        s, t = self.source, self.target
        return {s.monomials[i].name: t.named(v) for i, v in sorted(self.images.items())}

    def is_identity(self) -> bool:
        s, t = self.source, self.target
        return all(
            t.named(v) == [(s.monomials[i].name, 1)] for i, v in self.images.items()
        )

    def to_json(self) -> dict:
        return {
            "kind": "witness",
            "images": {k: [[n, str(c)] for n, c in v] for k, v in self.named().items()},
            "preserves_product": self.preserves_product,
            "preserves_delta": self.preserves_delta,
            "preserves_bracket": self.preserves_bracket,
        }


@dataclass(frozen=True)
class Failure:
    """Where a candidate map stops intertwining: ``check`` is ``delta`` or ``bracket``."""

    check: str
    monomials: tuple[str, ...]
    defect_target: tuple = ()
    defect_source: tuple = ()

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "monomials": list(self.monomials),
            "defect_target": [[n, str(c)] for n, c in self.defect_target],
            "defect_source": [[n, str(c)] for n, c in self.defect_source],
        }


@dataclass
class Refutation:
    """Exhaustion certificate: every candidate algebra isomorphism with its failure."""

    reason: str
    candidates: list[tuple[IsoWitness, Failure]] = field(default_factory=list)
    degree: int | None = None

    @property
    def first_failure(self) -> Failure | None:
        return self.candidates[0][1] if self.candidates else None

    def to_json(self) -> dict:
        return {
            "kind": "refutation",
            "reason": self.reason,
            "degree": self.degree,
            "candidates": [
                {"images": w.to_json()["images"], "failure": f.to_json()} for w, f in self.candidates
            ],
        }


@dataclass
class IsoDecision:
    isomorphic: bool
    witness: IsoWitness | None = None
    refutation: Refutation | None = None
    conclusive: bool = True

    def __bool__(self):
        return self.isomorphic

    def to_json(self) -> dict:
        body = self.witness.to_json() if self.witness else self.refutation.to_json()
        return {"isomorphic": self.isomorphic, "conclusive": self.conclusive, **body}


@dataclass
class Enumeration:
    """Result of an automorphism search; ``conclusive`` is False when the window
    cannot see every possible generator image."""

    maps: list[IsoWitness]
    conclusive: bool

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    def __getitem__(self, i):
        return self.maps[i]


# -- search machinery -----------------------------------------------------------------


def _common_complete(t1: BVTable, t2: BVTable, degree: int) -> bool:
    return t1.is_complete(degree) and t2.is_complete(degree)


def _domain(t1: BVTable, t2: BVTable) -> list[int]:
    return [i for i, m in enumerate(t1.monomials) if _common_complete(t1, t2, m.degree)]


def _factorization(t: BVTable, gens) -> dict[int, tuple]:
    """``parent[m] = (m', g, c)`` with ``m = c * m' * g``; BFS from the unit."""
    parent = {t.unit: None}
    queue = deque([t.unit])
    while queue:
        m = queue.popleft()
        for g in gens:
            try:
                v = t.mul_mono(m, g)
            except TruncationEscape:
                continue
            v = t.normalize(v)
            if len(v) != 1:
                continue
            (k, c), = v.items()
            if k in parent or not t.ring.is_unit(c):
                continue
            parent[k] = (m, g, t.ring.inverse(c))
            queue.append(k)
    return parent


def _dimension_mismatch(t1: BVTable, t2: BVTable):
    d1, d2 = t1.by_degree(), t2.by_degree()
    for m in sorted(set(d1) | set(d2)):
        n1, n2 = len(d1.get(m, [])), len(d2.get(m, []))
        c1, c2 = t1.is_complete(m), t2.is_complete(m)
        if (c1 and c2 and n1 != n2) or (c1 and n2 > n1) or (c2 and n1 > n2):
            return m, n1, n2
    return None


def _candidates(t1: BVTable, t2: BVTable, g: int) -> list[dict]:
    """Possible images of the generator g, in lexicographic order."""
    deg = t1.degree(g)
    tgt = t2.by_degree().get(deg, [])
    ring = t2.ring
    if ring.kind == "F":
        out = []
        for coeffs in itertools.product(range(ring.p), repeat=len(tgt)):
            if any(coeffs):
                out.append({k: c for k, c in zip(tgt, coeffs) if c})
        return out
    if ring.kind != "Z":
        raise ValueError(f"isomorphism search is not available over {ring}")
    free = [k for k in tgt if t2.monomials[k].order == 0]
    tors = [k for k in tgt if t2.monomials[k].order]
    same = [k for k in free if t2.monomials[k].name == t1.monomials[g].name]
    leads = same or free
    corrections = list(itertools.product(*[range(t2.monomials[k].order) for k in tors]))
    out = []
    for k in leads:
        for s in (1, -1):
            for corr in corrections:
                img = {k: s}
                img.update({j: c for j, c in zip(tors, corr) if c})
                out.append(img)
    if not free:
        out = [{j: c for j, c in zip(tors, corr) if c} for corr in corrections]
        out = [o for o in out if o]
    return out


def _extend(t1, t2, parent, gen_images, needed) -> dict | None:
    """Images of the ``needed`` monomials; None if some image escapes the target table."""
    images = {t1.unit: {t2.unit: 1}}
    images.update(gen_images)

    def image(m):
        if m in images:
            return images[m]
        prev, g, c = parent[m]
        left = image(prev)
        if left is None:
            images[m] = None
            return None
        try:
            v = t2.scale(t2.mul(left, images[g]), c)
        except TruncationEscape:
            v = None
        images[m] = v
        return v

    out = {}
    for m in needed:
        v = image(m)
        if v is None:
            return None
        out[m] = v
    return out


def _bijective(w: IsoWitness, degree: int) -> bool:
    s, t = w.source, w.target
    src = [i for i in s.by_degree().get(degree, [])]
    tgt = t.by_degree().get(degree, [])
    if len(src) != len(tgt):
        return False
    if not src:
        return True
    M = w.matrix(degree)
    if t.ring.is_field:
        return rank(M, t.ring) == len(src)
    free_t = [r for r, k in enumerate(tgt) if t.monomials[k].order == 0]
    tors_t = [r for r, k in enumerate(tgt) if t.monomials[k].order]
    free_s = [c for c, i in enumerate(src) if s.monomials[i].order == 0]
    tors_s = [c for c, i in enumerate(src) if s.monomials[i].order]
    if len(free_t) != len(free_s):
        return False
    if free_s:
        F = M.select_rows(free_t).select_columns(free_s)
        from .linalg import smith_normal_form

        snf = smith_normal_form(F)
        if snf.rank < len(free_s) or any(d != 1 for d in snf.invariant_factors):
            return False
    if not tors_s:
        return True
    if sorted(s.monomials[src[c]].order for c in tors_s) != sorted(t.monomials[tgt[r]].order for r in tors_t):
        return False
    if not M.select_rows(free_t).select_columns(tors_s).is_zero():
        return False
    T = M.select_rows(tors_t).select_columns(tors_s)
    orders = math.lcm(*(t.monomials[tgt[r]].order for r in tors_t))
    primes = [q for q in range(2, orders + 1) if orders % q == 0 and all(q % r for r in range(2, q))]
    return all(rank(T, prime_field(q)) == len(tors_s) for q in primes)


def _multiplicative(w: IsoWitness) -> bool:
    s, t = w.source, w.target
    for (i, j), terms in s.products.items():
        if i not in w.images or j not in w.images:
            continue
        if any(k not in w.images for k, _ in terms):
            continue
        try:
            lhs = t.mul(w.images[i], w.images[j])
        except TruncationEscape:
            continue
        if lhs != w.apply(dict(terms)):
            return False
    return True


def _search(t1: BVTable, t2: BVTable, gens=None):
    """All unital multiplicative maps t1 -> t2, bijective on the common window."""
    if t1.ring != t2.ring:
        raise ValueError(f"tables are over different rings ({t1.ring} vs {t2.ring})")
    gens = tuple(gens) if gens is not None else t1.generators
    if not gens:
        raise NotFinitelyGenerated("no generators declared")
    parent = _factorization(t1, gens)
    domain = _domain(t1, t2)
    missing = [i for i in domain if i not in parent]
    if missing:
        raise NotFinitelyGenerated(
            f"{t1.monomials[missing[0]].name} is not a monomial in the generators inside the table"
        )
    conclusive = all(_common_complete(t1, t2, t1.degree(g)) for g in gens)
    degrees = sorted({t1.degree(i) for i in domain})
    found = []
    choices = [_candidates(t1, t2, g) for g in gens]
    for combo in itertools.product(*choices):
        images = _extend(t1, t2, parent, dict(zip(gens, combo)), domain)
        if images is None:
            conclusive = False
            continue
        w = IsoWitness(t1, t2, images)
        if not all(_bijective(w, m) for m in degrees):
            continue
        if not _multiplicative(w):
            continue
        w.preserves_product = True
        found.append(w)
    return found, conclusive


def enumerate_algebra_automorphisms(t: BVTable, gens=None) -> Enumeration:
    """Every degree-preserving unital algebra automorphism of ``t`` on its window."""
    found, conclusive = _search(t, t, gens)
    return Enumeration(found, conclusive)


# -- intertwining checks ----------------------------------------------------------------


def _defect(w: IsoWitness, lhs, rhs):
    t, s = w.target, w.source
    diff = t.add(lhs, rhs, coeffs=[1, -1])
    back = _preimage(w, diff)
    return tuple(t.named(diff)), tuple(s.named(back)) if back is not None else ()


def _preimage(w: IsoWitness, y: Mapping) -> dict | None:
    """Solve w(x) = y in one degree (field tables only)."""
    t = w.target
    if not y or not t.ring.is_field:
        return None
    deg = t.degree_of(y)
    src = [i for i in w.source.by_degree().get(deg, []) if i in w.images]
    for coeffs in itertools.product(range(t.ring.p or 2), repeat=len(src)):
        x = {i: c for i, c in zip(src, coeffs) if c}
        if w.apply(x) == t.normalize(y):
            return x
    return None


def delta_failure(w: IsoWitness) -> Failure | None:
    """First source monomial (by degree, then index) where w o Delta != Delta o w."""
    s, t = w.source, w.target
    for i in sorted(w.images, key=lambda i: (s.degree(i), i)):
        try:
            lhs = w.apply(s.delta_mono(i))
            rhs = t.apply_delta(w.images[i])
        except TruncationEscape:
            continue
        if lhs != rhs:
            dt, ds = _defect(w, lhs, rhs)
            return Failure("delta", (s.monomials[i].name,), dt, ds)
    return None


def bracket_failure(w: IsoWitness, b1: BracketTable, b2: BracketTable) -> Failure | None:
    s, t = w.source, w.target
    pairs = sorted(
        ((i, j) for i in w.images for j in w.images),
        key=lambda ij: (s.degree(ij[0]) + s.degree(ij[1]), ij),
    )
    for i, j in pairs:
        try:
            lhs = w.apply(b1.bracket_mono(i, j))
            rhs = b2.bracket(w.images[i], w.images[j])
        except TruncationEscape:
            continue
        if lhs != rhs:
            dt, ds = _defect(w, lhs, rhs)
            return Failure("bracket", (s.monomials[i].name, s.monomials[j].name), dt, ds)
    return None


def _decide(t1: BVTable, t2: BVTable, check, flag: str) -> IsoDecision:
    mismatch = _dimension_mismatch(t1, t2)
    if mismatch is not None:
        m, n1, n2 = mismatch
        return IsoDecision(
            False, refutation=Refutation(f"dimension mismatch in degree {m}: {n1} vs {n2}", degree=m)
        )
    found, conclusive = _search(t1, t2)
    ref = Refutation("every algebra isomorphism fails to intertwine the structure")
    for w in found:
        fail = check(w)
        if fail is None:
            setattr(w, flag, True)
            return IsoDecision(True, witness=w, conclusive=True)
        setattr(w, flag, False)
        ref.candidates.append((w, fail))
    if not found:
        ref.reason = "no algebra isomorphism on the common window"
    if not conclusive:
        err = WindowNonConclusive("a generator degree lies outside the common window")
        err.refutation = ref
        raise err
    return IsoDecision(False, refutation=ref)


def _identical(t1: BVTable, t2: BVTable) -> bool:
    return t1.canonical() == t2.canonical()


def _identity(t1: BVTable, t2: BVTable) -> IsoWitness:
    names = {m.name: i for i, m in enumerate(t2.monomials)}
    return IsoWitness(t1, t2, {i: {names[m.name]: 1} for i, m in enumerate(t1.monomials)}, True)


def bv_isomorphic(t1: BVTable, t2: BVTable) -> IsoDecision:
    """Is there a degree-preserving unital algebra isomorphism intertwining Delta?"""
    if _identical(t1, t2):
        w = _identity(t1, t2)
        w.preserves_delta = True
        return IsoDecision(True, witness=w)
    return _decide(t1, t2, delta_failure, "preserves_delta")


def gerstenhaber_isomorphic(t1: BVTable, t2: BVTable) -> IsoDecision:
    """Same question for the brackets derived from Delta."""
    if _identical(t1, t2):
        w = _identity(t1, t2)
        w.preserves_bracket = True
        return IsoDecision(True, witness=w)
    b1, b2 = bracket_from_delta(t1), bracket_from_delta(t2)
    return _decide(t1, t2, lambda w: bracket_failure(w, b1, b2), "preserves_bracket")


def witness_from_names(source: BVTable, target: BVTable, images: Mapping[str, Mapping[str, int]]) -> IsoWitness:
    """Build a witness from ``{source name: {target name: coeff}}`` and fill in its flags."""
    w = IsoWitness(
        source,
        target,
        {source.index(a): target.element(img) for a, img in images.items()},
    )
    w.preserves_product = _multiplicative(w) and all(_bijective(w, m) for m in w.degrees())
    w.preserves_delta = delta_failure(w) is None
    w.preserves_bracket = bracket_failure(w, bracket_from_delta(source), bracket_from_delta(target)) is None
    return w


def involution_f2(K: int = 8, eps: int = 1) -> IsoWitness:
    """u^k -> u^k + k a u^(k+2) from the lambda = 0 table to the lambda = 1 table."""
    from .models import automorphism_images_f2, s2_f2_table

    src, tgt = s2_f2_table(eps, 0, K), s2_f2_table(eps, 1, K)
    return witness_from_names(src, tgt, automorphism_images_f2(src))


def involution_z(K: int = 6, eps0: int = 1) -> IsoWitness:
    """v^k -> v^k + k a v^(k+1) on the integral n = 2 table."""
    from .models import automorphism_images_z, even_sphere_z_table

    t = even_sphere_z_table(2, eps0, K)
    return witness_from_names(t, t, automorphism_images_z(t))
