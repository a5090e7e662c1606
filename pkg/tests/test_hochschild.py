import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhbv.algebra import GradedAlgebra, make_exterior, make_exterior_sphere, make_truncated_polynomial
from hhbv.bv import bracket_from_delta
from hhbv.errors import NotDualizing, UnsupportedRing, WindowTooSmall
from hhbv.hochschild import (
    Cochain,
    build_chain_complex,
    build_cochain_complex,
    cochain_differential,
    connes_B,
    connes_B_chain,
    cup,
    delta_on_HH,
    exterior_sphere_renaming,
    gerst_bracket,
    hh_via_dual,
    theta_hat,
    theta_hat_matrix,
)
from hhbv.linalg import Matrix, cokernel, rank
from hhbv.rings import F2, INTEGERS


def sx(k):
    return (1,) * k


def f_pow(A, k):
    return Cochain.basic(A, sx(k), 0)


def g_f_pow(A, k):
    return Cochain.basic(A, sx(k), 1)


# -- chains ---------------------------------------------------------------------------


def test_chain_basis_of_exterior_sphere():
    cx = build_chain_complex(make_exterior_sphere(2, INTEGERS), 2)
    got = {(e.a0, e.word): e.degree for els in cx.basis.values() for e in els}
    assert got == {
        (0, ()): 0, (1, ()): -2, (0, sx(1)): -1, (1, sx(1)): -3, (0, sx(2)): -2, (1, sx(2)): -4,
    }


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dual_degrees_of_words(n):
    cx = build_chain_complex(make_exterior_sphere(n, INTEGERS), 6)
    for k in range(7):
        assert -cx.element(0, sx(k)).degree == k * (n - 1)
        assert -cx.element(1, sx(k)).degree == n + k * (n - 1)


def test_dual_differential_has_magnitude_two_for_even_n():
    cx = build_chain_complex(make_exterior_sphere(2, INTEGERS), 4)
    k = -cx.element(1, sx(1)).degree
    col = cx.dual_d(k).column(cx.position(1, sx(1))[1])
    target = cx.dual_basis(k - 1)
    assert [(target[i].a0, target[i].word, abs(c)) for i, c in enumerate(col) if c] == [(0, sx(2), 2)]


def test_all_differentials_vanish_mod_two():
    cx = build_chain_complex(make_exterior_sphere(2, F2), 8)
    assert all(cx.d(m).is_zero(F2) for m in cx.basis)


def test_connes_boundary_small_values():
    A = make_exterior_sphere(2, INTEGERS)
    assert connes_B_chain(A, 0, ()) == {}
    assert connes_B_chain(A, 1, ()) == {(0, sx(1)): 1}
    mats = connes_B(A, 4)
    assert mats[-2].shape == (1, 2)


def test_dual_connes_boundary_is_rank_one_below_x():
    cx = build_chain_complex(make_exterior_sphere(2, INTEGERS), 6)
    k = -cx.element(0, sx(1)).degree
    assert k + 1 == -cx.element(1, ()).degree
    B = cx.dual_B(k)
    assert rank(B, INTEGERS) == 1
    assert [abs(c) for c in B.column(cx.position(0, sx(1))[1]) if c] == [1]


algebras = st.one_of(
    st.lists(st.integers(-5, -2), min_size=1, max_size=3).map(
        lambda ds: make_exterior([(f"x{i}", d) for i, d in enumerate(ds)], INTEGERS)
    ),
    st.tuples(st.sampled_from([-2, -4]), st.integers(1, 3)).map(
        lambda p: make_truncated_polynomial(p[0], p[1], INTEGERS)
    ),
)


@settings(max_examples=25, deadline=None)
@given(algebras)
def test_chain_identities_on_complete_degrees(A):
    L = 6 if A.dim <= 4 else 4
    cx = build_chain_complex(A, L)
    for m in cx.basis:
        if not cx.is_complete(m - 1):
            continue
        assert (cx.d(m - 1) @ cx.d(m)).is_zero()
        assert (cx.B(m + 1) @ cx.B(m)).is_zero()
        assert (cx.d(m + 1) @ cx.B(m) + cx.B(m - 1) @ cx.d(m)).is_zero()
        k = -m
        assert (cx.dual_B(k - 1) @ cx.dual_d(k) + cx.dual_d(k + 1) @ cx.dual_B(k)).is_zero()


def test_uncertified_degree_is_refused():
    cx = build_chain_complex(make_exterior_sphere(2, INTEGERS), 1)
    assert cx.is_certified(0) and not cx.is_certified(-1)
    with pytest.raises(WindowTooSmall) as exc:
        hh_via_dual(make_exterior_sphere(2, INTEGERS), INTEGERS, 1, degrees=[0, 1, 2])
    assert exc.value.degrees == [-2, -1]


# -- integral dual homology -------------------------------------------------------------

# Frozen from the dual complex of Lambda(x), |x| = -2: one generator per word type, with
# d^v(x[sx]^k) = +-2 [sx]^(k+1) for k odd and 0 otherwise, so even degrees >= 2 pick up Z/2.
EXPECTED_Z = {0: (1, ()), 1: (1, ()), 2: (1, (2,)), 3: (1, ()), 4: (1, (2,)), 5: (1, ()), 6: (1, (2,))}


def test_integral_groups_of_exterior_sphere():
    res = hh_via_dual(make_exterior_sphere(2, INTEGERS), INTEGERS, 9)
    for k, (free, tors) in EXPECTED_Z.items():
        assert (res.groups[k].free_rank, res.groups[k].torsion) == (free, tors)


def test_mod_two_dimensions():
    res = hh_via_dual(make_exterior_sphere(2, INTEGERS), F2, 9)
    assert [res.groups[k].dimension for k in range(7)] == [1, 1, 2, 2, 2, 2, 2]


def test_cokernel_of_delta_over_the_integers():
    res = hh_via_dual(make_exterior_sphere(2, INTEGERS), INTEGERS, 10)
    for k in (1, 2, 3):
        coker = cokernel(res.delta[2 * k + 1], res.groups[2 * k + 2])
        assert coker.free_rank == 0
        assert sorted(coker.torsion) == ([6] if k == 1 else [2 * (2 * k + 1)])


# -- cochains -----------------------------------------------------------------------------


def test_cochains_need_characteristic_two():
    with pytest.raises(UnsupportedRing):
        build_cochain_complex(make_exterior_sphere(2, INTEGERS), 3, INTEGERS)
    with pytest.raises(UnsupportedRing):
        cup(f_pow(make_exterior_sphere(2, INTEGERS), 1), f_pow(make_exterior_sphere(2, INTEGERS), 1))


def test_cochain_spaces_of_exterior_sphere():
    cx = build_cochain_complex(make_exterior_sphere(2, F2), 5)
    per_arity = {}
    for keys in cx.basis.values():
        for word, _ in keys:
            per_arity[len(word)] = per_arity.get(len(word), 0) + 1
    assert per_arity == {p: 2 for p in range(6)}
    assert all(cx.d(m).is_zero(F2) for m in cx.basis)


def test_cup_and_brace_on_exterior_sphere():
    A = make_exterior_sphere(2, F2)
    f, one = f_pow(A, 1), Cochain.basic(A, (), 0)
    assert cochain_differential(f).is_zero()
    assert cup(f, f) == f_pow(A, 2)
    assert cup(one, f) == f and cup(f, one) == f
    for k in range(4):
        assert cup(g_f_pow(A, 0), f_pow(A, k)) == g_f_pow(A, k)
    assert gerst_bracket(f, f).is_zero()
    for k in range(4):
        for l in range(4):
            expect = f_pow(A, k + l - 1) if l % 2 and k + l >= 1 else Cochain(A)
            assert gerst_bracket(g_f_pow(A, k), f_pow(A, l)) == expect
            expect = g_f_pow(A, k + l - 1) if (k - l) % 2 and k + l >= 1 else Cochain(A)
            assert gerst_bracket(g_f_pow(A, k), g_f_pow(A, l)) == expect


def test_cochain_degrees():
    A = make_exterior_sphere(3, F2)
    assert f_pow(A, 4).degree == 4 * 2
    assert g_f_pow(A, 0).degree == -3


@settings(max_examples=15, deadline=None)
@given(algebras)
def test_cochain_differential_squares_to_zero(A):
    cx = build_cochain_complex(A, 3, F2)
    for m in cx.basis:
        if cx.is_complete(m - 1) and cx.is_complete(m):
            assert (cx.d(m - 1) @ cx.d(m)).is_zero(F2)


def test_theta_hat_on_exterior_sphere():
    A = make_exterior_sphere(2, F2)
    for k in range(5):
        assert theta_hat(f_pow(A, k)) == {(1, sx(k)): 1}
        assert theta_hat(g_f_pow(A, k)) == {(0, sx(k)): 1}


def test_theta_hat_needs_a_dualizing_functional():
    A = make_exterior_sphere(2, F2)
    bare = GradedAlgebra(A.ring, A.basis, A.unit, A.products, None)
    with pytest.raises(NotDualizing):
        theta_hat(f_pow(bare, 1))


def test_theta_hat_is_a_bijective_chain_map():
    # y^3 = 0 with |y| = -2 has a non-zero cochain differential over F2
    A = make_truncated_polynomial(-2, 2, F2)
    P = 4
    cochains = build_cochain_complex(A, P)
    chains = build_chain_complex(A, P)
    d = A.dualizing_degree
    for m in cochains.basis:
        if not (cochains.is_complete(m) and cochains.is_complete(m - 1)):
            continue
        T0 = theta_hat_matrix(cochains, chains, m)
        T1 = theta_hat_matrix(cochains, chains, m - 1)
        assert T0.nrows == T0.ncols and rank(T0, F2) == T0.ncols
        lhs = (T1 @ cochains.d(m)).reduce(F2)
        rhs = (chains.dual_d(m + d) @ T0).reduce(F2)
        assert lhs == rhs


# -- Delta on HH ---------------------------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3])
def test_delta_on_hh_of_exterior_sphere(d):
    t = delta_on_HH(make_exterior_sphere(d, F2), 10)
    t = t.renamed(exterior_sphere_renaming(t))
    for i, m in enumerate(t.monomials):
        if i not in t.delta:
            continue
        val = t.named(dict(t.delta[i]))
        if m.name.startswith("g"):
            k = 0 if m.name == "g" else (1 if m.name == "g f" else int(m.name.split("^")[1]))
            lower = "1" if k == 1 else ("f" if k == 2 else f"f^{k - 1}")
            assert val == ([(lower, 1)] if k % 2 else [])
        else:
            assert val == []
        assert not t.apply_delta(dict(t.delta[i]))


def test_delta_vanishes_on_g_f_squared():
    t = delta_on_HH(make_exterior_sphere(2, F2), 8)
    t = t.renamed(exterior_sphere_renaming(t))
    assert t.delta[t.index("g f^2")] == ()


@pytest.mark.parametrize("A, P", [(make_exterior_sphere(2, F2), 7), (make_truncated_polynomial(-2, 2, F2), 7),
                                  (make_exterior([("x", -2), ("y", -3)], F2), 6)])
def test_delta_on_hh_agrees_with_dual_route(A, P):
    t = delta_on_HH(A, P)
    d = A.dualizing_degree
    dual = hh_via_dual(A, F2, P + 1)
    for m, idx in t.by_degree().items():
        assert len(idx) == dual.groups[m + d].dimension
        if all(i in t.delta for i in idx) and m + d in dual.delta:
            target = t.by_degree().get(m + 1, [])
            cols = [[dict(t.delta[i]).get(j, 0) for j in target] for i in idx]
            ours = rank(Matrix.from_columns(cols, len(target)), F2) if target else 0
            assert ours == rank(dual.delta[m + d], F2)


def test_bv_bracket_matches_cochain_bracket():
    A = make_exterior_sphere(2, F2)
    cx = build_cochain_complex(A, 8)
    t = delta_on_HH(A, 8)
    br = bracket_from_delta(t)
    single = {i: m.name for i, m in enumerate(t.monomials)}
    for (i, j), val in br.values.items():
        m = t.monomials[i].degree + t.monomials[j].degree + 1
        if m > t.window[1]:
            continue
        ci = _cochain_from_name(A, single[i])
        cj = _cochain_from_name(A, single[j])
        got = gerst_bracket(ci, cj)
        expect = sum((_cochain_from_name(A, t.monomials[k].name) for k, _ in val), Cochain(A))
        assert cx.vector(got, m) == cx.vector(expect, m)


def _cochain_from_name(A, name):
    word, target = name.split("->")
    letters = tuple(A.index(x) for x in word.strip("[]").split("|") if x)
    return Cochain.basic(A, letters, A.index(target))
