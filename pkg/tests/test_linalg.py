import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ as SZZ
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.matrices import DomainMatrix
from sympy import GF as SGF

from twdiag import linalg as la

small = st.integers(-6, 6)


def matrices(max_m=4, max_n=4):
    return st.integers(1, max_m).flatmap(
        lambda m: st.integers(1, max_n).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


def sympy_invariants(A):
    D = smith_normal_form(Matrix(A), domain=SZZ)
    k = min(D.shape)
    return [abs(int(D[i, i])) for i in range(k) if D[i, i] != 0]


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_smith_invariants_match_sympy(A):
    S = la.smith(la.ZZ, A)
    assert [abs(d) for d in S.diag] == sympy_invariants(A)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_smith_transforms(A):
    R = la.ZZ
    m, n = len(A), len(A[0])
    S = la.smith(R, A)
    D = la.matmul(R, la.matmul(R, S.U, A, m), S.V, n)
    for i in range(m):
        for j in range(n):
            want = S.diag[i] if i == j and i < S.rank else 0
            assert D[i][j] == want
    assert la.matmul(R, S.U, S.Uinv, m) == la.identity(R, m)
    assert la.matmul(R, S.V, S.Vinv, n) == la.identity(R, n)
    for a, b in zip(S.diag, S.diag[1:]):
        assert b % a == 0


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([2, 3, 5]))
def test_rank_over_fields(A, p):
    n = len(A[0])
    assert la.rank(la.QQ, [[la.QQ(x) for x in r] for r in A], n) == Matrix(A).rank()
    F = la.GF(p)
    dm = DomainMatrix.from_list_sympy(len(A), n, A).convert_to(SGF(p))
    assert la.rank(F, [[F(x) for x in r] for r in A], n) == dm.rank()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_kernel_and_solve(A, data):
    R = la.ZZ
    n = len(A[0])
    K = la.kernel(R, A, n)
    assert len(K) == n - Matrix(A).rank()
    for v in K:
        assert all(x == 0 for x in la.matvec(R, A, v))
    x0 = data.draw(st.lists(small, min_size=n, max_size=n))
    b = la.matvec(R, A, x0)
    x = la.solve(R, A, b, n)
    assert x is not None and la.matvec(R, A, x) == b


def test_solve_detects_integrality():
    # 2x = 1 has a rational but no integer solution
    assert la.solve(la.ZZ, [[2]], [1]) is None
    assert la.solve(la.QQ, [[la.QQ(2)]], [la.QQ(1)]) == [Fraction(1, 2)]


def test_quotient_orders():
    R = la.ZZ
    q = la.Quotient(R, [[1, 0], [0, 1]], [[2, 0], [0, 3]], 2)
    assert q.orders == (6,)
    q = la.Quotient(R, [[1, 0], [0, 1]], [[2, 0]], 2)
    assert sorted(q.orders) == [0, 2]
    # coordinates are well defined on cosets
    assert q.coords([2, 5]) == q.coords([0, 5])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_linear_system_planted(seed):
    rng = random.Random(seed)
    R = la.ZZ
    sys_ = la.LinearSystem(R)
    nv = rng.randint(1, 6)
    sys_.new_vars(nv)
    x0 = [rng.randint(-3, 3) for _ in range(nv)]
    eqs = []
    for _ in range(rng.randint(1, 6)):
        c = {k: rng.randint(-3, 3) for k in range(nv) if rng.random() < 0.6}
        mod = rng.choice([0, 0, 2, 6])
        rhs = sum(v * x0[k] for k, v in c.items())
        if mod:
            rhs %= mod
        sys_.add(c, rhs, mod)
        eqs.append((c, rhs, mod))

    def holds(x, homogeneous=False):
        for c, rhs, mod in eqs:
            lhs = sum(v * x[k] for k, v in c.items()) - (0 if homogeneous else rhs)
            if (lhs % mod if mod else lhs) != 0:
                return False
        return True

    x = sys_.solve()
    assert x is not None and holds(x)
    for v in sys_.kernel():
        assert holds(v, homogeneous=True)
    assert holds(sys_.solve_random(rng))


def test_linear_system_inconsistent():
    sys_ = la.LinearSystem(la.ZZ)
    sys_.new_vars(1)
    sys_.add({0: 2}, 1)
    assert sys_.solve() is None
    sys_ = la.LinearSystem(la.GF(2))
    sys_.new_vars(2)
    sys_.add({0: 1, 1: 1}, 1)
    sys_.add({0: 1, 1: 1}, 0)
    assert sys_.solve() is None


@pytest.mark.parametrize("name,want", [("ZZ", la.ZZ), ("Q", la.QQ), ("F_5", la.GF(5)), ("GF(3)", la.GF(3))])
def test_ring_names(name, want):
    assert la.ring_from_name(name) == want
