"""Truncated BV-algebra tables and the axiom checks run against them.

A :class:`BVTable` lists monomials (a basis, possibly with torsion orders) of a
graded-commutative algebra inside a finite window, the products of pairs of
monomials and the operator Delta on each monomial.  Entries that would leave
the truncation are simply absent; asking for them raises
:class:`~hhbv.errors.TruncationEscape`, and every verifier skips-and-counts
such tuples instead of passing them silently.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import SchemaError, TruncationEscape
from .rings import Ring

Terms = tuple[tuple[int, object], ...]


def sign(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class Monomial:
    name: str
    degree: int
    order: int = 0


@dataclass(frozen=True)
class BVTable:
    """Finite presentation of a BV algebra inside a degree window.

    ``window = (lo, hi)``: every degree below ``lo`` is empty and every degree in
    ``[lo, hi]`` is complete (all monomials of that degree are listed).  An
    empty window (``hi < lo``) means no degree is known to be complete.
    """

    ring: Ring
    monomials: tuple[Monomial, ...]
    products: Mapping[tuple[int, int], Terms] = field(repr=False)
    delta: Mapping[int, Terms] = field(repr=False)
    window: tuple[int, int]
    unit: int
    generators: tuple[int, ...] = ()

    # -- element arithmetic ---------------------------------------------------

    def normalize(self, x: Mapping[int, object]) -> dict:
        out = {}
        for k, c in x.items():
            c = self.ring.reduce(c)
            order = self.monomials[k].order
            if order and self.ring.kind == "Z":
                c %= order
            if c:
                out[k] = c
        return out

    def mono(self, i: int) -> dict:
        return {i: 1}

    def element(self, terms: Mapping[str, object]) -> dict:
        return self.normalize({self.index(n): c for n, c in terms.items()})

    def terms(self, x: Mapping[int, object]) -> Terms:
        return tuple(sorted(self.normalize(x).items()))

    def add(self, *xs, coeffs=None) -> dict:
        out: dict = {}
        coeffs = coeffs or [1] * len(xs)
        for x, s in zip(xs, coeffs):
            for k, c in x.items():
                out[k] = out.get(k, 0) + s * c
        return self.normalize(out)

    def scale(self, x, s) -> dict:
        return self.normalize({k: s * c for k, c in x.items()})

    def mul_mono(self, i: int, j: int) -> dict:
        val = self.products.get((i, j))
        if val is None:
            raise TruncationEscape(
                f"{self.monomials[i].name} * {self.monomials[j].name} is outside the table"
            )
        return dict(val)

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mul_mono(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return self.normalize(out)

    def delta_mono(self, i: int) -> dict:
        val = self.delta.get(i)
        if val is None:
            raise TruncationEscape(f"Delta({self.monomials[i].name}) is outside the table")
        return dict(val)

    def apply_delta(self, x: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for k, c in self.delta_mono(i).items():
                out[k] = out.get(k, 0) + a * c
        return self.normalize(out)

    # -- bookkeeping ------------------------------------------------------------

    def index(self, name: str) -> int:
        try:
            return self._names[name]
        except KeyError:
            raise KeyError(f"no monomial named {name!r}") from None

    @property
    def _names(self) -> dict:
        cache = self.__dict__.get("_name_cache")
        if cache is None:
            cache = {m.name: i for i, m in enumerate(self.monomials)}
            object.__setattr__(self, "_name_cache", cache)
        return cache

    def degree(self, i: int) -> int:
        return self.monomials[i].degree

    def degree_of(self, x: Mapping) -> int | None:
        degs = {self.degree(k) for k in x}
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop() if degs else None

    def by_degree(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, m in enumerate(self.monomials):
            out.setdefault(m.degree, []).append(i)
        return dict(sorted(out.items()))

    def is_complete(self, degree: int) -> bool:
        lo, hi = self.window
        return degree < lo or lo <= degree <= hi

    def window_degrees(self) -> list[int]:
        lo, hi = self.window
        return list(range(lo, hi + 1))

    def show(self, x: Mapping) -> str:
        if not x:
            return "0"
        parts = []
        for k, c in sorted(x.items()):
            name = self.monomials[k].name
            parts.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(parts)

    def named(self, x: Mapping) -> list[tuple[str, object]]:
        return [(self.monomials[k].name, c) for k, c in sorted(x.items())]

    def renamed(self, mapping: Mapping[str, str]) -> "BVTable":
        mons = tuple(Monomial(mapping.get(m.name, m.name), m.degree, m.order) for m in self.monomials)
        return BVTable(self.ring, mons, self.products, self.delta, self.window, self.unit, self.generators)

    def restricted(self, lo: int, hi: int) -> "BVTable":
        """Keep monomials of degree <= hi; forget values landing above hi.

        The new window is the intersection of ``[lo, hi]`` with the old one.
        """
        old_lo, old_hi = self.window
        new_window = (max(lo, old_lo), min(hi, old_hi))
        keep = [i for i, m in enumerate(self.monomials) if m.degree <= new_window[1]]
        remap = {old: new for new, old in enumerate(keep)}

        def move(terms, deg):
            if deg > new_window[1] or any(k not in remap for k, _ in terms):
                return None
            return tuple((remap[k], c) for k, c in terms)

        products = {}
        for (i, j), terms in self.products.items():
            if i in remap and j in remap:
                v = move(terms, self.degree(i) + self.degree(j))
                if v is not None:
                    products[remap[i], remap[j]] = v
        delta = {}
        for i, terms in self.delta.items():
            if i in remap:
                v = move(terms, self.degree(i) + 1)
                if v is not None:
                    delta[remap[i]] = v
        return BVTable(
            self.ring,
            tuple(self.monomials[i] for i in keep),
            products,
            delta,
            new_window,
            remap[self.unit],
            tuple(remap[g] for g in self.generators if g in remap),
        )

    def canonical(self) -> dict:
        """Name-keyed description, independent of monomial order."""
        name = lambda i: self.monomials[i].name  # noqa: E731
        return {
            "ring": str(self.ring),
            "window": tuple(self.window),
            "monomials": {m.name: (m.degree, m.order) for m in self.monomials},
            "products": {
                (name(i), name(j)): tuple(sorted((name(k), c) for k, c in t))
                for (i, j), t in self.products.items()
            },
            "delta": {name(i): tuple(sorted((name(k), c) for k, c in t)) for i, t in self.delta.items()},
            "unit": name(self.unit),
        }


@dataclass(frozen=True)
class TableBuilder:
    """Helper for constructing tables from named monomials and closed-form rules."""

    ring: Ring
    monomials: list = field(default_factory=list)
    products: dict = field(default_factory=dict)
    delta: dict = field(default_factory=dict)

    def add(self, name: str, degree: int, order: int = 0) -> int:
        self.monomials.append(Monomial(name, degree, order))
        return len(self.monomials) - 1

    def build(self, window, unit: str, generators: Iterable[str]) -> BVTable:
        t = BVTable(self.ring, tuple(self.monomials), {}, {}, tuple(window), 0, ())
        idx = t._names
        products = {k: t.terms(v) for k, v in self.products.items()}
        delta = {k: t.terms(v) for k, v in self.delta.items()}
        return BVTable(
            self.ring,
            tuple(self.monomials),
            products,
            delta,
            tuple(window),
            idx[unit],
            tuple(idx[g] for g in generators),
        )


# -- verification -----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    monomials: tuple[str, ...]
    detail: str = ""


@dataclass
class Report:
    """Outcome of an exhaustive check.  ``counts[kind] = (checked, skipped)``."""

    violation: Violation | None = None
    counts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violation is None

    @property
    def checked(self) -> int:
        return sum(c for c, _ in self.counts.values())

    @property
    def skipped(self) -> int:
        return sum(s for _, s in self.counts.values())

    def tally(self, kind: str, ok: bool | None):
        c, s = self.counts.get(kind, (0, 0))
        self.counts[kind] = (c + 1, s) if ok is not None else (c, s + 1)

    def fail(self, kind, names, detail=""):
        if self.violation is None:
            self.violation = Violation(kind, tuple(names), detail)

    def summary(self) -> str:
        head = "PASS" if self.passed else f"FAIL {self.violation.kind} at ({', '.join(self.violation.monomials)})"
        counts = ", ".join(f"{k}: {c} checked/{s} skipped" for k, (c, s) in self.counts.items())
        return f"{head}; {counts}"


def _names(t: BVTable, *idx) -> tuple[str, ...]:
    return tuple(t.monomials[i].name for i in idx)


def structure_violations(t: BVTable) -> Report:
    """Grading, unit, graded commutativity and associativity on every known entry."""
    rep = Report()
    n = len(t.monomials)
    for (i, j), terms in sorted(t.products.items()):
        want = t.degree(i) + t.degree(j)
        ok = all(t.degree(k) == want for k, _ in terms)
        rep.tally("product-degree", ok)
        if not ok:
            rep.fail("GradingViolation", _names(t, i, j), "product has the wrong degree")
    for i, terms in sorted(t.delta.items()):
        ok = all(t.degree(k) == t.degree(i) + 1 for k, _ in terms)
        rep.tally("delta-degree", ok)
        if not ok:
            rep.fail("DegreeViolation", _names(t, i), "Delta does not raise degree by one")
    for i in range(n):
        for left in (True, False):
            try:
                v = t.mul_mono(t.unit, i) if left else t.mul_mono(i, t.unit)
            except TruncationEscape:
                rep.tally("unit", None)
                continue
            ok = t.normalize(v) == t.normalize({i: 1})
            rep.tally("unit", ok)
            if not ok:
                rep.fail("UnitViolation", _names(t, i))
    for i in range(n):
        for j in range(i, n):
            try:
                ab = t.mul_mono(i, j)
                ba = t.mul_mono(j, i)
            except TruncationEscape:
                rep.tally("commutativity", None)
                continue
            ok = t.normalize(ab) == t.scale(ba, sign(t.degree(i) * t.degree(j)))
            rep.tally("commutativity", ok)
            if not ok:
                rep.fail("CommutativityViolation", _names(t, i, j))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                try:
                    left = t.mul(t.mul_mono(i, j), {k: 1})
                    right = t.mul({i: 1}, t.mul_mono(j, k))
                except TruncationEscape:
                    rep.tally("associativity", None)
                    continue
                ok = left == right
                rep.tally("associativity", ok)
                if not ok:
                    rep.fail("AssociativityViolation", _names(t, i, j, k))
    return rep


def seven_term_defect(t: BVTable, i: int, j: int, k: int) -> dict:
    """Delta(abc) minus the right-hand side of the second-order derivation identity.

    Raises TruncationEscape when some intermediate value is outside the table.
    """
    a, b, c = {i: 1}, {j: 1}, {k: 1}
    da, db = t.degree(i), t.degree(j)
    D, m = t.apply_delta, t.mul
    ab, bc, ac = m(a, b), m(b, c), m(a, c)
    lhs = D(m(ab, c))
    rhs = t.add(
        m(D(ab), c),
        m(a, D(bc)),
        m(b, D(ac)),
        m(m(D(a), b), c),
        m(m(a, D(b)), c),
        m(ab, D(c)),
        coeffs=[1, sign(da), sign((da - 1) * db), -1, -sign(da), -sign(da + db)],
    )
    return t.add(lhs, rhs, coeffs=[1, -1])


def _seven_term_rows(t: BVTable, rows: list[int]):
    n = len(t.monomials)
    checked = skipped = 0
    for i in rows:
        for j in range(n):
            for k in range(n):
                try:
                    defect = seven_term_defect(t, i, j, k)
                except TruncationEscape:
                    skipped += 1
                    continue
                checked += 1
                if defect:
                    return checked, skipped, (i, j, k, t.show(defect))
    return checked, skipped, None


def _jobs(n_jobs: int | None) -> int:
    if n_jobs is None:
        n_jobs = int(os.environ.get("HHBV_THREADS", "1") or 1)
    return max(1, n_jobs)


def verify_bv(t: BVTable, n_jobs: int | None = None) -> Report:
    """Exhaustive BV check: grading, Delta^2 = 0, the square identity (char 2) and
    the 7-term relation on every monomial triple whose values are all known.

    The first violation in lexicographic order is reported.
    """
    rep = structure_violations(t)
    if not rep.passed:
        return rep
    n = len(t.monomials)
    for i in range(n):
        try:
            dd = t.apply_delta(t.delta_mono(i))
        except TruncationEscape:
            rep.tally("delta-squared", None)
            continue
        rep.tally("delta-squared", not dd)
        if dd:
            rep.fail("DeltaSquare", _names(t, i), t.show(dd))
            return rep
    if t.ring.characteristic == 2:
        # Delta(a b^2) = Delta(a) b^2 + a Delta(b^2): a cheap consequence of the 7-term relation
        for i in range(n):
            for j in range(n):
                try:
                    a, b = {i: 1}, {j: 1}
                    bb = t.mul(b, b)
                    lhs = t.apply_delta(t.mul(a, bb))
                    rhs = t.add(t.mul(t.apply_delta(a), bb), t.mul(a, t.apply_delta(bb)))
                except TruncationEscape:
                    rep.tally("square-identity", None)
                    continue
                ok = lhs == rhs
                rep.tally("square-identity", ok)
                if not ok:
                    rep.fail("SquareIdentity", _names(t, i, j, j), t.show(t.add(lhs, rhs, coeffs=[1, -1])))
                    return rep
    jobs = _jobs(n_jobs)
    if jobs == 1 or n < 8:
        results = [_seven_term_rows(t, [i]) for i in range(n)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_seven_term_rows, [t] * n, [[i] for i in range(n)]))
    c0, s0 = rep.counts.get("seven-term", (0, 0))
    for checked, skipped, bad in results:
        c0 += checked
        s0 += skipped
        if bad is not None:
            i, j, k, shown = bad
            rep.counts["seven-term"] = (c0, s0)
            rep.fail("SevenTerm", _names(t, i, j, k), f"defect {shown}")
            return rep
    rep.counts["seven-term"] = (c0, s0)
    return rep


# -- brackets -------------------------------------------------------------------


def bracket_of(t: BVTable, x: Mapping, y: Mapping, dx: int) -> dict:
    """{x, y} = (-1)^|x| (Delta(xy) - Delta(x) y - (-1)^|x| x Delta(y)) for homogeneous x."""
    D, m = t.apply_delta, t.mul
    inner = t.add(D(m(x, y)), m(D(x), y), m(x, D(y)), coeffs=[1, -1, -sign(dx)])
    return t.scale(inner, sign(dx))


@dataclass(frozen=True)
class BracketTable:
    """Bracket structure constants on monomial pairs; missing pairs are truncated."""

    table: BVTable
    values: Mapping[tuple[int, int], Terms]

    @property
    def truncated(self) -> frozenset:
        n = len(self.table.monomials)
        return frozenset((i, j) for i in range(n) for j in range(n) if (i, j) not in self.values)

    def bracket_mono(self, i: int, j: int) -> dict:
        v = self.values.get((i, j))
        if v is None:
            raise TruncationEscape(
                f"{{{self.table.monomials[i].name}, {self.table.monomials[j].name}}} is outside the table"
            )
        return dict(v)

    def bracket(self, x: Mapping, y: Mapping) -> dict:
        t = self.table
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket_mono(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return t.normalize(out)

    def named(self) -> dict:
        t = self.table
        return {
            _names(t, i, j): tuple((t.monomials[k].name, c) for k, c in v)
            for (i, j), v in self.values.items()
        }


def bracket_from_delta(t: BVTable) -> BracketTable:
    """Bracket on every monomial pair whose ingredients are inside the table."""
    values = {}
    n = len(t.monomials)
    for i in range(n):
        for j in range(n):
            try:
                values[i, j] = t.terms(bracket_of(t, {i: 1}, {j: 1}, t.degree(i)))
            except TruncationEscape:
                continue
    return BracketTable(t, values)


def verify_gerstenhaber(t: BVTable, brackets: BracketTable | None = None) -> Report:
    """Bracket degree, antisymmetry, Jacobi and Poisson on every computable tuple."""
    br = brackets if brackets is not None else bracket_from_delta(t)
    rep = Report()
    n = len(t.monomials)
    deg = t.degree
    for (i, j), terms in sorted(br.values.items()):
        ok = all(deg(k) == deg(i) + deg(j) + 1 for k, _ in terms)
        rep.tally("bracket-degree", ok)
        if not ok:
            rep.fail("DegreeViolation", _names(t, i, j), "bracket does not have degree +1")
            return rep
    for i in range(n):
        for j in range(i, n):
            try:
                ab, ba = br.bracket_mono(i, j), br.bracket_mono(j, i)
            except TruncationEscape:
                rep.tally("antisymmetry", None)
                continue
            ok = t.normalize(ab) == t.scale(ba, -sign((deg(i) + 1) * (deg(j) + 1)))
            rep.tally("antisymmetry", ok)
            if not ok:
                rep.fail("Antisymmetry", _names(t, i, j))
                return rep
    for i in range(n):
        for j in range(n):
            for k in range(n):
                a, b, c = {i: 1}, {j: 1}, {k: 1}
                try:
                    lhs = br.bracket(a, br.bracket(b, c))
                    rhs = t.add(
                        br.bracket(br.bracket(a, b), c),
                        br.bracket(b, br.bracket(a, c)),
                        coeffs=[1, sign((deg(i) + 1) * (deg(j) + 1))],
                    )
                except TruncationEscape:
                    rep.tally("jacobi", None)
                else:
                    ok = lhs == rhs
                    rep.tally("jacobi", ok)
                    if not ok:
                        rep.fail("Jacobi", _names(t, i, j, k))
                        return rep
                try:
                    lhs = br.bracket(a, t.mul(b, c))
                    rhs = t.add(
                        t.mul(br.bracket(a, b), c),
                        t.mul(b, br.bracket(a, c)),
                        coeffs=[1, sign((deg(i) + 1) * deg(j))],
                    )
                except TruncationEscape:
                    rep.tally("poisson", None)
                    continue
                ok = lhs == rhs
                rep.tally("poisson", ok)
                if not ok:
                    rep.fail("Poisson", _names(t, i, j, k))
                    return rep
    return rep


# -- change of rings ---------------------------------------------------------------


@dataclass(frozen=True)
class DegreeComparison:
    degree: int
    dim_tensor: int
    dim_tor: int
    dim_target: int
    rank_tensor: int | None
    rank_target: int | None

    @property
    def dims_match(self) -> bool:
        return self.dim_tensor + self.dim_tor == self.dim_target

    @property
    def ranks_comparable(self) -> bool:
        return self.rank_tensor is not None and self.rank_target is not None

    @property
    def ranks_match(self) -> bool:
        """Unknown ranks (Delta leaving one of the windows) are not a mismatch."""
        return not self.ranks_comparable or self.rank_tensor == self.rank_target


@dataclass
class ReductionReport:
    p: int
    rows: list[DegreeComparison]

    @property
    def dims_match(self) -> bool:
        return all(r.dims_match for r in self.rows)

    @property
    def ranks_match(self) -> bool:
        return all(r.ranks_match for r in self.rows)

    @property
    def passed(self) -> bool:
        return bool(self.rows) and self.dims_match and self.ranks_match


def reduce_mod_p(t: BVTable, p: int, compare: BVTable | None = None):
    """Tensor an integral table with F_p (or with Q when ``p == 0``).

    A free monomial survives as a line; a monomial of order m survives iff p
    divides m (never over Q).  When ``compare`` (a table over the target ring) is
    given, a :class:`ReductionReport` compares per-degree dimensions, using the
    universal coefficient formula dim H(F_p)_m = dim(H_m (x) F_p) + dim Tor(H_{m-1}, F_p),
    and per-degree ranks of Delta.
    """
    from .rings import RATIONALS, prime_field

    if t.ring.kind != "Z":
        raise ValueError("reduce_mod_p expects a table over Z")
    ring = RATIONALS if p == 0 else prime_field(p)

    def survives(m: Monomial) -> bool:
        return m.order == 0 or (p != 0 and m.order % p == 0)

    keep = [i for i, m in enumerate(t.monomials) if survives(m)]
    remap = {old: new for new, old in enumerate(keep)}

    def move(terms):
        out = []
        for k, c in terms:
            if k in remap:
                c = ring.reduce(c)
                if c:
                    out.append((remap[k], c))
        return tuple(sorted(out))

    products = {
        (remap[i], remap[j]): move(v)
        for (i, j), v in t.products.items()
        if i in remap and j in remap
    }
    delta = {remap[i]: move(v) for i, v in t.delta.items() if i in remap}
    reduced = BVTable(
        ring,
        tuple(Monomial(t.monomials[i].name, t.monomials[i].degree, 0) for i in keep),
        products,
        delta,
        t.window,
        remap[t.unit],
        tuple(remap[g] for g in t.generators if g in remap),
    )
    if compare is None:
        return reduced, None
    if compare.ring != ring:
        raise ValueError(f"comparison table is over {compare.ring}, expected {ring}")

    def tor_dim(m):
        return sum(1 for i in t.by_degree().get(m, []) if t.monomials[i].order and p and t.monomials[i].order % p == 0)

    rows = []
    lo = max(t.window[0], compare.window[0])
    hi = min(t.window[1], compare.window[1])
    red_deg, cmp_deg = reduced.by_degree(), compare.by_degree()
    for m in range(lo, hi + 1):
        if not t.is_complete(m - 1):
            continue
        rows.append(
            DegreeComparison(
                m,
                len(red_deg.get(m, [])),
                tor_dim(m - 1),
                len(cmp_deg.get(m, [])),
                delta_rank(reduced, m) if reduced.is_complete(m + 1) else None,
                delta_rank(compare, m) if compare.is_complete(m + 1) else None,
            )
        )
    return reduced, ReductionReport(p, rows)


def delta_rank(t: BVTable, degree: int) -> int | None:
    """Rank of Delta from ``degree`` to ``degree + 1`` over a field; None if unknown."""
    from .linalg import Matrix, rank

    src = t.by_degree().get(degree, [])
    tgt = t.by_degree().get(degree + 1, [])
    pos = {k: r for r, k in enumerate(tgt)}
    cols = []
    try:
        for i in src:
            v = t.delta_mono(i)
            col = [0] * len(tgt)
            for k, c in v.items():
                col[pos[k]] = c
            cols.append(col)
    except TruncationEscape:
        return None
    if not cols or not tgt:
        return 0
    return rank(Matrix.from_columns(cols, len(tgt)), t.ring)


# -- JSON -----------------------------------------------------------------------------


def _num(c) -> str:
    return str(c)


def _parse_num(s, ring: Ring):
    if ring.kind == "Q":
        return Fraction(str(s))
    return ring.reduce(int(s))


def table_to_json(t: BVTable) -> dict:
    return {
        "ring": str(t.ring),
        "window": list(t.window),
        "unit": t.unit,
        "generators": list(t.generators),
        "monomials": [{"name": m.name, "degree": m.degree, "order": m.order} for m in t.monomials],
        "products": [
            [i, j, [[k, _num(c)] for k, c in v]] for (i, j), v in sorted(t.products.items())
        ],
        "delta": [[i, [[k, _num(c)] for k, c in v]] for i, v in sorted(t.delta.items())],
    }


def table_from_json(doc: Mapping) -> BVTable:
    try:
        ring = Ring.parse(str(doc["ring"]))
        mons = tuple(
            Monomial(str(m["name"]), int(m["degree"]), int(m.get("order", 0))) for m in doc["monomials"]
        )
        n = len(mons)
        lo, hi = (int(w) for w in doc["window"])
        shell = BVTable(ring, mons, {}, {}, (lo, hi), 0, ())

        def terms(raw):
            out = {}
            for k, c in raw:
                k = int(k)
                if not 0 <= k < n:
                    raise SchemaError(f"monomial index {k} out of range")
                out[k] = out.get(k, 0) + _parse_num(c, ring)
            return shell.terms(out)

        products = {}
        for i, j, raw in doc.get("products", []):
            products[int(i), int(j)] = terms(raw)
        delta = {int(i): terms(raw) for i, raw in doc.get("delta", [])}
        if "unit" in doc:
            unit = int(doc["unit"])
        else:
            unit = next(i for i, m in enumerate(mons) if m.name == "1")
        gens = tuple(int(g) for g in doc.get("generators", []))
        if not (0 <= unit < n) or any(not 0 <= g < n for g in gens):
            raise SchemaError("unit or generator index out of range")
        if any(not (0 <= i < n and 0 <= j < n) for i, j in products) or any(
            not 0 <= i < n for i in delta
        ):
            raise SchemaError("product or delta index out of range")
        return BVTable(ring, mons, products, delta, (lo, hi), unit, gens)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError, StopIteration) as exc:
        raise SchemaError(f"malformed table document: {exc!r}") from exc


def dump_table(t: BVTable, path) -> None:
    with open(path, "w") as fh:
        json.dump(table_to_json(t), fh, indent=1)
        fh.write("\n")


def load_table(path) -> BVTable:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
    return table_from_json(doc)


def infer_generators(t: BVTable) -> tuple[int, ...]:
    """Monomials outside the span of products of two non-unit monomials (field tables).

    Unknown products are ignored, so near the top of the window the answer can
    contain more generators than strictly needed.
    """
    from .linalg import Matrix, rank

    if not t.ring.is_field:
        raise ValueError("generator inference needs a field; declare generators explicitly")
    by_deg = t.by_degree()
    decomposable: dict[int, list] = {}
    for (i, j), terms in t.products.items():
        if i == t.unit or j == t.unit or not terms:
            continue
        decomposable.setdefault(t.degree(i) + t.degree(j), []).append(dict(terms))
    gens = []
    for m, idx in by_deg.items():
        pos = {k: r for r, k in enumerate(idx)}
        span = [[v.get(k, 0) for k in idx] for v in decomposable.get(m, [])]
        current = rank(Matrix.from_rows(span, len(idx)), t.ring) if span else 0
        for k in idx:
            if k == t.unit:
                continue
            row = [int(pos[k] == r) for r in range(len(idx))]
            r = rank(Matrix.from_rows(span + [row], len(idx)), t.ring)
            if r > current:
                gens.append(k)
                span.append(row)
                current = r
    return tuple(gens)
