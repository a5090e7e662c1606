"""Finite-dimensional lower-graded augmented algebras given by multiplication tables.

Sign convention (used everywhere in the package): lower grading, and the Koszul
rule ``a b = (-1)^{|a||b|} b a`` for graded-commutative algebras.  The
augmentation sends the unit to 1 and every other basis element to 0, so the
augmentation ideal is spanned by the non-unit basis elements.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import SchemaError
from .linalg import Matrix, smith_normal_form
from .rings import Ring


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int


@dataclass(frozen=True)
class Functional:
    """A linear functional on the algebra, given by its values on the basis."""

    values: tuple

    def __call__(self, vec) -> int:
        return sum(a * b for a, b in zip(self.values, vec))


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass(frozen=True)
class GradedAlgebra:
    ring: Ring
    basis: tuple[BasisElement, ...]
    unit: int
    products: Mapping[tuple[int, int], tuple] = field(repr=False)
    dualizing: Functional | None = None
    commutative: bool = True

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degree(self, i: int) -> int:
        return self.basis[i].degree

    @property
    def ideal(self) -> tuple[int, ...]:
        """Indices of the augmentation-ideal basis."""
        return tuple(i for i in range(self.dim) if i != self.unit)

    def index(self, name: str) -> int:
        for i, b in enumerate(self.basis):
            if b.name == name:
                return i
        raise KeyError(name)

    def mul_basis(self, i: int, j: int) -> tuple:
        vec = self.products.get((i, j))
        if vec is None:
            return (0,) * self.dim
        return vec

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        out = [0] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in enumerate(self.mul_basis(i, j)):
                    if c:
                        out[k] += a * b * c
        return tuple(self.ring.reduce(c) for c in out)

    def e(self, i: int) -> tuple:
        return tuple(int(k == i) for k in range(self.dim))

    @property
    def dualizing_degree(self) -> int | None:
        """Degree d of the induced map A -> A^dual (minus the degree theta lives on)."""
        if self.dualizing is None:
            return None
        degs = {self.degree(i) for i, v in enumerate(self.dualizing.values) if self.ring.reduce(v)}
        if len(degs) != 1:
            return None
        return -degs.pop()

    def pairing_matrix(self) -> Matrix:
        th = self.dualizing
        return Matrix.from_rows(
            [[self.ring.reduce(th(self.mul_basis(i, j))) for j in range(self.dim)]
             for i in range(self.dim)],
            self.dim,
        )


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def validate(a: GradedAlgebra) -> list[Violation]:
    """Report every violated invariant; an empty list means the algebra is usable."""
    out: list[Violation] = []
    ring, n = a.ring, a.dim
    red = ring.reduce
    for (i, j), vec in a.products.items():
        if len(vec) != n or not (0 <= i < n and 0 <= j < n):
            out.append(Violation("ShapeViolation", f"product entry ({i},{j}) malformed"))
            return out
    if not 0 <= a.unit < n:
        return [Violation("UnitViolation", "unit index out of range")]
    if a.degree(a.unit) != 0:
        out.append(Violation("UnitViolation", "unit is not in degree 0"))
    for i in range(n):
        if tuple(map(red, a.mul_basis(a.unit, i))) != a.e(i) or tuple(
            map(red, a.mul_basis(i, a.unit))
        ) != a.e(i):
            out.append(Violation("UnitViolation", f"unit does not act trivially on {a.basis[i].name}"))
    for i, j in itertools.product(range(n), repeat=2):
        for k, c in enumerate(a.mul_basis(i, j)):
            if red(c) and a.degree(k) != a.degree(i) + a.degree(j):
                out.append(
                    Violation(
                        "GradingViolation",
                        f"{a.basis[i].name}*{a.basis[j].name} has a component on "
                        f"{a.basis[k].name} of degree {a.degree(k)}",
                    )
                )
    for i in a.ideal:
        if a.degree(i) > -2:
            out.append(
                Violation("AugmentationViolation", f"{a.basis[i].name} has degree {a.degree(i)} > -2")
            )
    for i, j in itertools.product(a.ideal, repeat=2):
        if red(a.mul_basis(i, j)[a.unit]):
            out.append(Violation("AugmentationViolation", "augmentation ideal is not an ideal"))
    for i, j, k in itertools.product(range(n), repeat=3):
        left = a.mul(a.mul_basis(i, j), a.e(k))
        right = a.mul(a.e(i), a.mul_basis(j, k))
        if left != right:
            names = ",".join(a.basis[t].name for t in (i, j, k))
            out.append(Violation("AssociativityViolation", f"({names})"))
    if a.commutative:
        for i, j in itertools.combinations_with_replacement(range(n), 2):
            s = _sign(a.degree(i) * a.degree(j))
            ab = tuple(map(red, a.mul_basis(i, j)))
            ba = tuple(red(s * c) for c in a.mul_basis(j, i))
            if ab != ba:
                out.append(
                    Violation(
                        "CommutativityViolation",
                        f"{a.basis[i].name}, {a.basis[j].name} do not graded-commute",
                    )
                )
    if a.dualizing is not None:
        out.extend(_duality_violations(a))
    return out


def _duality_violations(a: GradedAlgebra) -> list[Violation]:
    out = []
    th = a.dualizing
    if len(th.values) != a.dim:
        return [Violation("DualityViolation", "functional has the wrong length")]
    if a.dualizing_degree is None:
        return [Violation("DualityViolation", "functional is zero or not homogeneous")]
    P = a.pairing_matrix()
    snf = smith_normal_form(P, a.ring)
    if snf.rank < a.dim or not all(a.ring.is_unit(d) for d in snf.invariant_factors):
        out.append(Violation("DualityViolation", "pairing theta(ab) is not perfect"))
    for i, j in itertools.product(range(a.dim), repeat=2):
        s = _sign(a.degree(i) * a.degree(j))
        if a.ring.reduce(P[i, j] - s * P[j, i]):
            out.append(
                Violation(
                    "DualityViolation",
                    f"theta({a.basis[i].name}{a.basis[j].name}) != "
                    f"+-theta({a.basis[j].name}{a.basis[i].name})",
                )
            )
    return out


def _merge_sign(left: tuple, right: tuple, degs: Sequence[int]) -> int:
    """Koszul sign for reordering the concatenation of two sorted generator tuples."""
    e = 0
    for g in left:
        for h in right:
            if h < g:
                e += degs[g] * degs[h]
    return _sign(e)


def make_exterior(generators: Sequence[tuple[str, int]], ring: Ring) -> GradedAlgebra:
    """Exterior algebra on the given generators, with top class as dualizing functional."""
    degs = [d for _, d in generators]
    k = len(generators)
    subsets = [s for r in range(k + 1) for s in itertools.combinations(range(k), r)]
    index = {s: i for i, s in enumerate(subsets)}
    n = len(subsets)

    def name(s):
        return "".join(generators[g][0] for g in s) or "1"

    basis = tuple(BasisElement(name(s), sum(degs[g] for g in s)) for s in subsets)
    products = {}
    for s, t in itertools.product(subsets, repeat=2):
        if set(s) & set(t):
            continue
        vec = [0] * n
        vec[index[tuple(sorted(s + t))]] = ring.reduce(_merge_sign(s, t, degs))
        products[index[s], index[t]] = tuple(vec)
    top = tuple(range(k))
    theta = Functional(tuple(int(s == top) for s in subsets))
    return GradedAlgebra(ring, basis, index[()], products, theta, commutative=True)


def make_exterior_sphere(n: int, ring: Ring) -> GradedAlgebra:
    """H^*(S^n) as the exterior algebra on one generator x of lower degree -n."""
    if n < 1:
        raise ValueError("sphere dimension must be >= 1")
    return make_exterior([("x", -n)], ring)


def make_truncated_polynomial(degree: int, top: int, ring: Ring, name: str = "y") -> GradedAlgebra:
    """k[y]/(y^(top+1)) with |y| = degree (even), dualizing on y^top."""
    if degree % 2:
        raise ValueError("truncated polynomial generator must have even degree")
    n = top + 1
    basis = tuple(
        BasisElement("1" if i == 0 else (name if i == 1 else f"{name}^{i}"), i * degree)
        for i in range(n)
    )
    products = {}
    for i, j in itertools.product(range(n), repeat=2):
        if i + j < n:
            products[i, j] = tuple(int(k == i + j) for k in range(n))
    theta = Functional(tuple(int(k == top) for k in range(n)))
    return GradedAlgebra(ring, basis, 0, products, theta, commutative=True)


def sphere_algebra(n: int, ring: Ring) -> GradedAlgebra:
    return make_exterior_sphere(n, ring)


# -- JSON ---------------------------------------------------------------------


def algebra_to_json(a: GradedAlgebra) -> dict:
    doc = {
        "ring": str(a.ring),
        "basis": [{"name": b.name, "degree": b.degree} for b in a.basis],
        "unit": a.unit,
        "products": [
            [i, j, [str(c) for c in vec]]
            for (i, j), vec in sorted(a.products.items())
            if any(vec)
        ],
        "commutative": a.commutative,
    }
    if a.dualizing is not None:
        doc["dualizing"] = [str(c) for c in a.dualizing.values]
    return doc


def algebra_from_json(doc: Mapping) -> GradedAlgebra:
    try:
        ring = Ring.parse(str(doc["ring"]))
        basis = tuple(BasisElement(str(b["name"]), int(b["degree"])) for b in doc["basis"])
        n = len(basis)
        products = {}
        for i, j, coeffs in doc.get("products", []):
            vec = tuple(ring.reduce(int(c)) for c in coeffs)
            if len(vec) != n:
                raise SchemaError(f"product ({i},{j}) has {len(vec)} coefficients, expected {n}")
            products[int(i), int(j)] = vec
        theta = None
        if doc.get("dualizing") is not None:
            theta = Functional(tuple(ring.reduce(int(c)) for c in doc["dualizing"]))
        return GradedAlgebra(
            ring, basis, int(doc["unit"]), products, theta, bool(doc.get("commutative", True))
        )
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed algebra document: {exc}") from exc


def load_algebra(path) -> GradedAlgebra:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
    return algebra_from_json(doc)
