import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhbv.errors import CompositionNonZero, NotAChainMap
from hhbv.linalg import (
    Matrix,
    cokernel,
    homology,
    induced_map_on_homology,
    inverse,
    rank,
    smith_normal_form,
)
from hhbv.rings import F2, INTEGERS, RATIONALS, prime_field


def det(rows):
    n = len(rows)
    if n == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for i, p in enumerate(perm):
            term *= rows[i][p]
        total += term
    return total


def determinantal_factors(m: Matrix):
    """Invariant factors from gcds of k x k minors (independent of elimination)."""
    rows = m.tolist()
    divisors = [1]
    for k in range(1, min(m.shape) + 1):
        g = 0
        for r in itertools.combinations(range(m.nrows), k):
            for c in itertools.combinations(range(m.ncols), k):
                g = math.gcd(g, det([[rows[i][j] for j in c] for i in r]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]


small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r
        ).map(lambda rows: Matrix.from_rows(rows, c))
    )
)


def test_snf_known_values():
    assert smith_normal_form(Matrix.from_rows([[2, 4], [6, 8]])).invariant_factors == (2, 4)
    m = Matrix.from_rows([[2, 0, 0], [0, 3, 0], [0, 0, 1]])
    assert smith_normal_form(m).invariant_factors == (1, 1, 6)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_matches_determinantal_divisors(m):
    res = smith_normal_form(m)
    assert list(res.invariant_factors) == determinantal_factors(m)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_transforms_are_unimodular_and_diagonalize(m):
    res = smith_normal_form(m)
    assert res.U @ m @ res.V == res.diagonal
    assert (res.U @ res.U_inv) == Matrix.identity(m.nrows)
    assert (res.V @ res.V_inv) == Matrix.identity(m.ncols)
    d = res.invariant_factors
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


@settings(max_examples=100, deadline=None)
@given(small_matrices)
def test_field_rank_matches_bruteforce_over_f2(m):
    rows = [tuple(a % 2 for a in r) for r in m.tolist()]
    # rank over F2 = log2 of the size of the row space
    span = {tuple(0 for _ in range(m.ncols))}
    for r in rows:
        span |= {tuple((a + b) % 2 for a, b in zip(r, s)) for s in span}
    assert 2 ** rank(m, F2) == len(span)


def test_homology_of_multiplication_by_two():
    zero = Matrix.zeros(1, 0)
    H = homology(Matrix.from_rows([[2]]), Matrix.zeros(0, 1), INTEGERS)
    assert H.free_rank == 0 and H.torsion == (2,)
    H = homology(zero, Matrix.zeros(0, 1), INTEGERS)
    assert H.free_rank == 1 and H.torsion == ()


def test_homology_rejects_non_complex():
    with pytest.raises(CompositionNonZero):
        homology(Matrix.from_rows([[1]]), Matrix.from_rows([[1]]), INTEGERS)


def test_homology_of_rp2_cellular_chains():
    # C2 --2--> C1 --0--> C0: H1 = Z/2
    H1 = homology(Matrix.from_rows([[2]]), Matrix.from_rows([[0]]), INTEGERS)
    assert H1.group.torsion == (2,) and H1.free_rank == 0
    H1q = homology(Matrix.from_rows([[2]]), Matrix.from_rows([[0]]), RATIONALS)
    assert H1q.dimension == 0
    H1f2 = homology(Matrix.from_rows([[2]]), Matrix.from_rows([[0]]), F2)
    assert H1f2.dimension == 1


def test_coordinates_and_induced_map():
    d_in = Matrix.from_rows([[2], [0]])
    d_out = Matrix.zeros(0, 2)
    H = homology(d_in, d_out, INTEGERS)
    assert H.torsion == (2,) and H.free_rank == 1
    # multiplication by 3 on the complex
    op = Matrix.from_rows([[3, 0], [0, 3]])
    M = induced_map_on_homology(op, H, H)
    assert [M[i, i] for i in range(2)] == [1, 3]
    assert cokernel(M, H).torsion == (3,)


def test_induced_map_detects_non_chain_map():
    H = homology(Matrix.zeros(2, 0), Matrix.from_rows([[1, 0]]), INTEGERS)
    with pytest.raises(NotAChainMap):
        induced_map_on_homology(Matrix.from_rows([[0, 1], [0, 0]]), H, H)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_over_f5(rows):
    ring = prime_field(5)
    m = Matrix.from_rows(rows)
    if rank(m, ring) < 3:
        with pytest.raises(ValueError):
            inverse(m, ring)
    else:
        assert (m @ inverse(m, ring)).reduce(ring) == Matrix.identity(3)
