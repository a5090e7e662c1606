import itertools
import json

import pytest

from hhbv.errors import TruncationEscape, WindowNonConclusive
from hhbv.iso import (
    bv_isomorphic,
    enumerate_algebra_automorphisms,
    gerstenhaber_isomorphic,
    witness_from_names,
)
from hhbv.linalg import Matrix, rank
from hhbv.models import (
    circle_table,
    even_sphere_z_table,
    hh_sphere_f2_table,
    odd_sphere_table,
    s2_f2_table,
)
from hhbv.rings import F2


def brute_force_automorphisms(t):
    """All unital, per-degree invertible, multiplicative linear maps on the window (F2)."""
    by_deg = {m: idx for m, idx in t.by_degree().items() if t.is_complete(m)}
    per_degree = []
    for m, idx in by_deg.items():
        n = len(idx)
        options = []
        for cols in itertools.product(itertools.product((0, 1), repeat=n), repeat=n):
            if rank(Matrix.from_columns(cols, n), F2) < n:
                continue
            images = {i: {idx[r]: 1 for r, c in enumerate(col) if c} for i, col in zip(idx, cols)}
            if t.unit in images and images[t.unit] != {t.unit: 1}:
                continue
            options.append(images)
        per_degree.append(options)
    found = []
    for choice in itertools.product(*per_degree):
        phi = {k: v for part in choice for k, v in part.items()}
        if _multiplicative(t, phi):
            found.append(phi)
    return found


def _multiplicative(t, phi):
    for i in phi:
        for j in phi:
            try:
                prod = t.mul_mono(i, j)
            except TruncationEscape:
                continue
            if any(k not in phi for k in prod):
                continue
            lhs = {}
            for k, c in prod.items():
                for r, d in phi[k].items():
                    lhs[r] = (lhs.get(r, 0) + c * d) % 2
            lhs = {k: c for k, c in lhs.items() if c}
            try:
                rhs = t.mul(phi[i], phi[j])
            except TruncationEscape:
                continue
            if lhs != rhs:
                return False
    return True


def _as_sets(maps):
    return {tuple(sorted((i, tuple(sorted(v.items()))) for i, v in phi.items())) for phi in maps}


@pytest.mark.parametrize("make", [lambda: s2_f2_table(K=6), lambda: s2_f2_table(K=3),
                                  lambda: hh_sphere_f2_table(3, K=3)])
def test_automorphism_search_matches_brute_force(make):
    t = make()
    found = enumerate_algebra_automorphisms(t)
    assert _as_sets(w.images for w in found) == _as_sets(brute_force_automorphisms(t))


def test_automorphism_counts():
    assert len(enumerate_algebra_automorphisms(s2_f2_table(K=6))) == 2
    assert enumerate_algebra_automorphisms(s2_f2_table(K=6)).conclusive
    small = enumerate_algebra_automorphisms(s2_f2_table(K=2))
    assert not small.conclusive and len(small) == 1
    assert len(enumerate_algebra_automorphisms(even_sphere_z_table(2, K=4))) == 16


F2_TABLES = {
    "s2(1,0)": lambda: s2_f2_table(1, 0, 8),
    "s2(1,1)": lambda: s2_f2_table(1, 1, 8),
    "s2(0,0)": lambda: s2_f2_table(0, 0, 8),
    "s2(0,1)": lambda: s2_f2_table(0, 1, 8),
    "hh": lambda: hh_sphere_f2_table(2, 8),
}


@pytest.fixture(scope="module")
def bv_relation():
    tables = {k: f() for k, f in F2_TABLES.items()}
    return {(a, b): bv_isomorphic(tables[a], tables[b]).isomorphic for a in tables for b in tables}


def test_bv_isomorphism_is_an_equivalence_relation(bv_relation):
    names = list(F2_TABLES)
    for a in names:
        assert bv_relation[a, a]
        for b in names:
            assert bv_relation[a, b] == bv_relation[b, a]
            for c in names:
                if bv_relation[a, b] and bv_relation[b, c]:
                    assert bv_relation[a, c]


def test_known_bv_classes(bv_relation):
    assert bv_relation["s2(1,0)", "s2(1,1)"]
    assert bv_relation["s2(0,0)", "hh"]
    assert not bv_relation["s2(1,0)", "hh"]


def test_sphere_and_exterior_hh_differ_as_bv_algebras():
    src, tgt = s2_f2_table(1, 0, 8), hh_sphere_f2_table(2, 8)
    res = bv_isomorphic(src, tgt)
    assert not res.isomorphic and res.conclusive
    assert res.refutation.candidates
    for w, fail in res.refutation.candidates:
        # the named monomial really does break Delta-equivariance
        x = {src.index(fail.monomials[0]): 1}
        assert w.apply(src.apply_delta(x)) != tgt.apply_delta(w.apply(x))
        assert fail.check == "delta"
        assert fail.monomials == ("a u",)
        assert "g f^2" in dict(fail.defect_target) or "g f^2" in dict(fail.defect_source)
    json.dumps(res.to_json())


def test_sphere_and_exterior_hh_agree_as_gerstenhaber_algebras():
    src, tgt = s2_f2_table(1, 0, 8), hh_sphere_f2_table(2, 8)
    res = gerstenhaber_isomorphic(src, tgt)
    assert res.isomorphic and res.witness.preserves_bracket
    # the witness is the nontrivial involution, not the naive renaming
    assert dict(res.witness.named()["u"]) == {"f": 1, "g f^3": 1}
    again = witness_from_names(src, tgt, {k: dict(v) for k, v in res.witness.named().items()})
    assert again.preserves_product and again.preserves_bracket and not again.preserves_delta
    json.dumps(res.to_json())


def test_dimension_mismatch_is_immediate():
    res = bv_isomorphic(circle_table(I=3), odd_sphere_table(3, K=3))
    assert not res.isomorphic and "dimension" in res.refutation.reason


def test_even_sphere_eps0_variants():
    t0, t1 = even_sphere_z_table(2, 0, 4), even_sphere_z_table(2, 1, 4)
    assert not bv_isomorphic(t0, t1).isomorphic
    assert gerstenhaber_isomorphic(t0, t1).isomorphic


def test_non_conclusive_window_raises():
    with pytest.raises(WindowNonConclusive) as exc:
        bv_isomorphic(s2_f2_table(1, 0, 2), hh_sphere_f2_table(2, 2))
    assert exc.value.refutation is not None


def test_identical_tables_give_identity():
    t = even_sphere_z_table(2, K=3)
    res = bv_isomorphic(t, even_sphere_z_table(2, K=3))
    assert res.isomorphic and res.witness.is_identity()
