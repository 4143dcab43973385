"""Exact linear algebra over Euclidean rings (ZZ, QQ, GF(p)).

Everything funnels through one Smith normal form routine; solving,
kernels, images and lattice quotients are read off the transforms.
Matrices are lists of rows; vectors are lists.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

Matrix = List[List]
Vector = List


class Ring:
    name = "?"
    is_field = False
    zero = 0
    one = 1

    def __call__(self, x):
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Ring) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def reduce(self, a, order):
        return a

    def fmt(self, a) -> str:
        return str(a)

    def parse(self, s: str):
        return self(s)

    def random_element(self, rng: random.Random, bound: int = 2):
        return self(rng.randint(-bound, bound))


class IntegerRing(Ring):
    name = "ZZ"

    def __call__(self, x):
        if isinstance(x, str):
            return int(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return int(x.numerator)
        return int(x)

    def divmod(self, a, b):
        return divmod(a, b)

    def size(self, a):
        return abs(a)

    def unit_normal(self, a):
        """Return a unit u with u*a in canonical (non-negative) form."""
        return -1 if a < 0 else 1

    def inverse_unit(self, u):
        return u

    def is_unit(self, a):
        return a == 1 or a == -1

    def reduce(self, a, order):
        return a % order if order else a


class RationalField(Ring):
    name = "QQ"
    is_field = True

    def __call__(self, x):
        return Fraction(x)

    def divmod(self, a, b):
        return a / b, Fraction(0)

    def size(self, a):
        return 0 if a == 0 else 1

    def unit_normal(self, a):
        return 1 / a

    def inverse_unit(self, u):
        return 1 / u

    def is_unit(self, a):
        return a != 0

    def fmt(self, a) -> str:
        return str(a)


class PrimeField(Ring):
    is_field = True

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def __call__(self, x):
        if isinstance(x, str):
            x = int(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def divmod(self, a, b):
        return (a * pow(b, -1, self.p)) % self.p, 0

    def size(self, a):
        return 0 if a == 0 else 1

    def unit_normal(self, a):
        return pow(a, -1, self.p)

    def inverse_unit(self, u):
        return pow(u, -1, self.p)

    def is_unit(self, a):
        return a % self.p != 0

    def random_element(self, rng, bound=2):
        return rng.randrange(self.p)


ZZ = IntegerRing()
QQ = RationalField()
_prime_fields: Dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def ring_from_name(name: str) -> Ring:
    name = name.strip()
    if name in ("ZZ", "Z"):
        return ZZ
    if name in ("QQ", "Q"):
        return QQ
    for prefix in ("GF(", "F_", "GF", "F"):
        if name.startswith(prefix):
            return GF(int(name[len(prefix):].rstrip(")")))
    raise ValueError(f"unknown ring {name!r}")


# ---------------------------------------------------------------- matrices

def zeros(R: Ring, m: int, n: int) -> Matrix:
    return [[R.zero] * n for _ in range(m)]


def identity(R: Ring, n: int) -> Matrix:
    M = zeros(R, n, n)
    for i in range(n):
        M[i][i] = R.one
    return M


def copy(A: Sequence[Sequence]) -> Matrix:
    return [list(row) for row in A]


def ncols(A: Sequence[Sequence], default: int = 0) -> int:
    return len(A[0]) if A else default


def matmul(R: Ring, A: Sequence[Sequence], B: Sequence[Sequence], inner: Optional[int] = None,
           cols: Optional[int] = None) -> Matrix:
    m = len(A)
    k = len(B) if inner is None else inner
    n = cols if cols is not None else (len(B[0]) if B else 0)
    out = zeros(R, m, n)
    for i in range(m):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if a == 0:
                continue
            Bt = B[t]
            for j in range(n):
                b = Bt[j]
                if b != 0:
                    row[j] = R.add(row[j], R.mul(a, b))
    return out


def matvec(R: Ring, A: Sequence[Sequence], v: Sequence) -> Vector:
    out = []
    for row in A:
        s = R.zero
        for a, x in zip(row, v):
            if a != 0 and x != 0:
                s = R.add(s, R.mul(a, x))
        out.append(s)
    return out


def transpose(A: Sequence[Sequence], rows_if_empty: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(rows_if_empty)]
    return [list(col) for col in zip(*A)]


def hstack(R: Ring, blocks: Sequence[Sequence[Sequence]], m: int) -> Matrix:
    out = [[] for _ in range(m)]
    for B in blocks:
        for i in range(m):
            out[i].extend(B[i])
    return out


def columns_to_matrix(R: Ring, cols: Sequence[Sequence], m: int) -> Matrix:
    out = zeros(R, m, len(cols))
    for j, c in enumerate(cols):
        for i in range(m):
            out[i][j] = c[i]
    return out


def matrix_columns(A: Sequence[Sequence], n: Optional[int] = None) -> List[Vector]:
    n = ncols(A) if n is None else n
    return [[row[j] for row in A] for j in range(n)]


def is_zero_matrix(A: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in A for x in row)


# ----------------------------------------------------------- Smith form

class SmithForm:
    """U A V = D with D diagonal d_0 | d_1 | ... (canonical associates).

    ``Uinv`` and ``Vinv`` are the inverses of the (unimodular) transforms.
    """

    def __init__(self, R, diag, U, Uinv, V, Vinv, m, n):
        self.R = R
        self.diag = diag
        self.rank = len(diag)
        self.U, self.Uinv, self.V, self.Vinv = U, Uinv, V, Vinv
        self.m, self.n = m, n


def _rdivmod(R: Ring, a, b):
    """Division with the remainder of least size."""
    q, r = R.divmod(a, b)
    if not R.is_field and 2 * abs(r) > abs(b):
        q, r = q + 1, r - b
    return q, r


def smith(R: Ring, A: Sequence[Sequence], n: Optional[int] = None) -> SmithForm:
    m = len(A)
    n = ncols(A) if n is None else n
    D = copy(A)
    U, Uinv = identity(R, m), identity(R, m)
    V, Vinv = identity(R, n), identity(R, n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        Dd, Ds = D[dst], D[src]
        for k in range(n):
            if Ds[k] != 0:
                Dd[k] = R.add(Dd[k], R.mul(q, Ds[k]))
        Ud, Us = U[dst], U[src]
        for k in range(m):
            if Us[k] != 0:
                Ud[k] = R.add(Ud[k], R.mul(q, Us[k]))
        for row in Uinv:
            if row[dst] != 0:
                row[src] = R.sub(row[src], R.mul(q, row[dst]))

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in D:
            if row[src] != 0:
                row[dst] = R.add(row[dst], R.mul(q, row[src]))
        for row in V:
            if row[src] != 0:
                row[dst] = R.add(row[dst], R.mul(q, row[src]))
        Vd, Vs = Vinv[dst], Vinv[src]
        for k in range(n):
            if Vd[k] != 0:
                Vs[k] = R.sub(Vs[k], R.mul(q, Vd[k]))

    def scale_row(i, u):
        uinv = R.inverse_unit(u)
        D[i] = [R.mul(u, x) for x in D[i]]
        U[i] = [R.mul(u, x) for x in U[i]]
        for row in Uinv:
            row[i] = R.mul(row[i], uinv)

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                if Di[j] != 0:
                    s = R.size(Di[j])
                    if best is None or s < best[0]:
                        best = (s, i, j)
                        if s <= 1:
                            break
            if best is not None and best[0] <= 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            # move the smallest entry of row t and column t to the pivot
            ci = min((i for i in range(t, m) if D[i][t] != 0), key=lambda i: R.size(D[i][t]))
            if ci != t:
                swap_rows(ci, t)
            cj = min((j for j in range(t, n) if D[t][j] != 0), key=lambda j: R.size(D[t][j]))
            if cj != t:
                swap_cols(cj, t)
            p = D[t][t]
            clear = True
            for i in range(t + 1, m):
                if D[i][t] != 0:
                    q, r = _rdivmod(R, D[i][t], p)
                    add_row(i, t, R.neg(q))
                    clear = clear and r == 0
            for j in range(t + 1, n):
                if D[t][j] != 0:
                    q, r = _rdivmod(R, D[t][j], p)
                    add_col(j, t, R.neg(q))
                    clear = clear and r == 0
            if not clear:
                continue
            if not R.is_field:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] != 0 and R.divmod(D[i][j], p)[1] != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    add_row(t, bad, R.one)
                    continue
            break
        u = R.unit_normal(D[t][t])
        if u != 1:
            scale_row(t, u)
        diag.append(D[t][t])
        t += 1
    return SmithForm(R, diag, U, Uinv, V, Vinv, m, n)


def rank(R: Ring, A: Sequence[Sequence], n: Optional[int] = None) -> int:
    return smith(R, A, n).rank


def solve(R: Ring, A: Sequence[Sequence], b: Sequence, n: Optional[int] = None) -> Optional[Vector]:
    """One solution of A x = b (free Smith coordinates set to zero), or None."""
    S = smith(R, A, n)
    return _solve_with(S, b)


def _solve_with(S: SmithForm, b: Sequence) -> Optional[Vector]:
    R = S.R
    c = matvec(R, S.U, b)
    y = [R.zero] * S.n
    for k in range(S.m):
        if k < S.rank:
            q, r = R.divmod(c[k], S.diag[k])
            if r != 0:
                return None
            y[k] = q
        elif c[k] != 0:
            return None
    return matvec(R, S.V, y)


def kernel(R: Ring, A: Sequence[Sequence], n: Optional[int] = None) -> List[Vector]:
    """Basis of {x : A x = 0}; over ZZ a basis of the (saturated) lattice."""
    n = ncols(A) if n is None else n
    S = smith(R, A, n)
    return [[S.V[i][k] for i in range(n)] for k in range(S.rank, n)]


def image_basis(R: Ring, gens: Sequence[Vector], m: int) -> List[Vector]:
    """Basis of the span of the given vectors in R^m."""
    if not gens:
        return []
    G = columns_to_matrix(R, gens, m)
    S = smith(R, G, len(gens))
    out = []
    for k in range(S.rank):
        out.append([R.mul(S.Uinv[i][k], S.diag[k]) for i in range(m)])
    return out


class Quotient:
    """The quotient span(L) / span(S) for S inside span(L).

    ``orders[k]`` is the order of generator k (0 for a free generator);
    unit orders are dropped.  ``gens`` are representatives in the ambient
    space, ``coords`` maps an element of span(L) to quotient coordinates.
    """

    def __init__(self, R: Ring, basis: Sequence[Vector], sub: Sequence[Vector], m: int):
        self.R = R
        self.m = m
        r = len(basis)
        self.basis = [list(v) for v in basis]
        Lmat = columns_to_matrix(R, basis, m)
        self._L = smith(R, Lmat, r)
        C_cols = []
        for s in sub:
            c = _solve_with(self._L, s)
            if c is None:
                raise ValueError("subspace generator outside the ambient lattice")
            C_cols.append(c)
        C = columns_to_matrix(R, C_cols, r)
        S = smith(R, C, len(C_cols))
        self._S = S
        keep = []
        orders = []
        for k in range(r):
            d = S.diag[k] if k < S.rank else R.zero
            if k < S.rank and R.is_unit(d):
                continue
            keep.append(k)
            orders.append(0 if k >= S.rank else d)
        self.keep = keep
        self.orders = tuple(orders)
        # generator k of the quotient is L * Uinv[:, k]
        LU = matmul(R, Lmat, S.Uinv, r)
        self.gens = [[LU[i][k] for i in range(m)] for k in keep]

    def coords(self, v: Sequence) -> Vector:
        R = self.R
        c = _solve_with(self._L, v)
        if c is None:
            raise ValueError("element outside the ambient lattice")
        w = matvec(R, self._S.U, c)
        return [R.reduce(w[k], o) for k, o in zip(self.keep, self.orders)]


def random_combination(R: Ring, basis: Sequence[Vector], n: int, rng: random.Random, bound: int = 1) -> Vector:
    v = [R.zero] * n
    for b in basis:
        c = R.random_element(rng, bound)
        if c != 0:
            v = [R.add(x, R.mul(c, y)) for x, y in zip(v, b)]
    return v


# --------------------------------------------------------- linear systems

class LinearSystem:
    """Sparse linear equations, optionally congruences modulo an order.

    A congruence sum a_k x_k = b (mod e) becomes an equation with one
    extra slack unknown of coefficient e.
    """

    def __init__(self, R: Ring):
        self.R = R
        self.nvars = 0
        self.rows: List[Tuple[Dict[int, object], object, int]] = []

    def new_vars(self, count: int) -> int:
        start = self.nvars
        self.nvars += count
        return start

    def add(self, coeffs: Dict[int, object], rhs=None, modulus: int = 0):
        R = self.R
        c = {k: v for k, v in coeffs.items() if v != 0}
        rhs = R.zero if rhs is None else rhs
        if modulus and not R.is_field:
            c = {k: v % modulus for k, v in c.items() if v % modulus}
            rhs = rhs % modulus
        if not c and rhs == 0:
            return
        self.rows.append((c, rhs, modulus if not R.is_field else 0))

    def _rows(self):
        """Rows as (coeffs, rhs) with one slack unknown per congruence."""
        out = []
        s = self.nvars
        for c, rhs, mod in self.rows:
            c = dict(c)
            if mod:
                c[s] = mod
                s += 1
            out.append((c, rhs))
        return out, s

    def _reduce(self):
        """Sparse elimination on unit pivots, then Smith on what is left."""
        R = self.R
        rows, width = self._rows()
        live = {n: r for n, r in enumerate(rows)}
        where: Dict[int, set] = {}
        for n, (c, _) in live.items():
            for k in c:
                where.setdefault(k, set()).add(n)
        pivots = []
        consistent = True
        queue = list(live)
        while queue:
            n = queue.pop()
            if n not in live:
                continue
            c, rhs = live[n]
            if not c:
                if rhs != 0:
                    consistent = False
                del live[n]
                continue
            units = [k for k, v in c.items() if R.is_unit(v)]
            if not units:
                continue
            k = min(units, key=lambda k: (len(where[k]), k))
            inv = R.inverse_unit(c[k])
            c = {j: R.mul(inv, v) for j, v in c.items()}
            rhs = R.mul(inv, rhs)
            del live[n]
            for j in c:
                where[j].discard(n)
            for m in list(where[k]):
                cm, rm = live[m]
                q = cm[k]
                for j, v in c.items():
                    w = R.sub(cm.get(j, R.zero), R.mul(q, v))
                    if w == 0:
                        if j in cm:
                            del cm[j]
                            where[j].discard(m)
                    else:
                        if j not in cm:
                            where[j].add(m)
                        cm[j] = w
                live[m] = (cm, R.sub(rm, R.mul(q, rhs)))
                queue.append(m)
            pivots.append((k, c, rhs))
        return pivots, live, width, consistent

    def _back(self, pivots, x):
        R = self.R
        for k, c, rhs in reversed(pivots):
            v = rhs
            for j, a in c.items():
                if j != k and x[j] != 0:
                    v = R.sub(v, R.mul(a, x[j]))
            x[k] = v
        return x

    def _residual(self, live):
        cols = sorted({k for c, _ in live.values() for k in c})
        pos = {k: n for n, k in enumerate(cols)}
        A = zeros(self.R, len(live), len(cols))
        b = []
        for r, (c, rhs) in enumerate(live.values()):
            for k, v in c.items():
                A[r][pos[k]] = v
            b.append(rhs)
        return A, b, cols

    def solve(self) -> Optional[Vector]:
        R = self.R
        pivots, live, width, ok = self._reduce()
        if not ok:
            return None
        x = [R.zero] * width
        if live:
            A, b, cols = self._residual(live)
            y = solve(R, A, b, len(cols))
            if y is None:
                return None
            for k, v in zip(cols, y):
                x[k] = v
        return self._back(pivots, x)[: self.nvars]

    def kernel(self) -> List[Vector]:
        """Generators of the homogeneous solutions (projected off slacks)."""
        R = self.R
        pivots, live, width, _ = self._reduce()
        pivoted = {k for k, _, _ in pivots}
        A, _, cols = self._residual(live)
        basis = []
        for v in (kernel(R, A, len(cols)) if cols else []):
            x = [R.zero] * width
            for k, a in zip(cols, v):
                x[k] = a
            basis.append(x)
        inres = set(cols)
        for k in range(width):
            if k not in pivoted and k not in inres:
                x = [R.zero] * width
                x[k] = R.one
                basis.append(x)
        out = []
        homogeneous = [(k, c, R.zero) for k, c, _ in pivots]
        for x in basis:
            out.append(self._back(homogeneous, x)[: self.nvars])
        return out

    def solve_random(self, rng: random.Random, bound: int = 1) -> Optional[Vector]:
        x = self.solve()
        if x is None:
            return None
        K = self.kernel()
        if K:
            d = random_combination(self.R, K, self.nvars, rng, bound)
            x = [self.R.add(a, b) for a, b in zip(x, d)]
        return x


class VarMatrix:
    """A block of unknowns forming an m x n matrix inside a LinearSystem."""

    def __init__(self, system: LinearSystem, m: int, n: int):
        self.m, self.n = m, n
        self.base = system.new_vars(m * n)

    def index(self, i: int, j: int) -> int:
        return self.base + i * self.n + j

    def value(self, x: Sequence) -> Matrix:
        return [[x[self.index(i, j)] for j in range(self.n)] for i in range(self.m)]


def add_matrix_equation(system: LinearSystem, terms, rhs: Optional[Sequence[Sequence]],
                        m: int, n: int, moduli: Optional[Sequence[int]] = None):
    """Impose sum_t P_t X_t Q_t = rhs entrywise (row i modulo moduli[i]).

    Each term is (P, X, Q) with X a VarMatrix; P or Q may be None for the
    identity.  The result has shape m x n.
    """
    R = system.R
    for a in range(m):
        for b in range(n):
            coeffs: Dict[int, object] = {}
            for P, X, Q in terms:
                for r in range(X.m):
                    p = (R.one if r == a else R.zero) if P is None else P[a][r]
                    if p == 0:
                        continue
                    for c in range(X.n):
                        q = (R.one if c == b else R.zero) if Q is None else Q[c][b]
                        if q == 0:
                            continue
                        k = X.index(r, c)
                        coeffs[k] = R.add(coeffs.get(k, R.zero), R.mul(p, q))
            value = R.zero if rhs is None else rhs[a][b]
            system.add(coeffs, value, moduli[a] if moduli else 0)
