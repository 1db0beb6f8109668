"""Exact arithmetic mod p: scalars, small dense matrices, and the
4-dimensional twisted cubic-form module for 2x2 matrix groups."""

from __future__ import annotations

from functools import lru_cache
from itertools import product

Matrix = tuple  # nested tuple of int rows, entries reduced mod p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 is not invertible mod {p}")
    return pow(a, p - 2, p)


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Least positive primitive root mod p."""
    if p == 2:
        return 1
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"{p} is not prime")


def _prime_factors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def cube_root_of_unity(p: int) -> int:
    """Primitive cube root of unity mod p; requires p = 1 mod 3.

    Chosen as eta^((p-1)/3) with eta the least primitive root, so at p=7
    this is 2 = eta^2 for eta = 3.
    """
    if (p - 1) % 3 != 0:
        raise ValueError(f"F_{p} has no primitive cube root of unity")
    return pow(primitive_root(p), (p - 1) // 3, p)


# ---------------------------------------------------------------------------
# dense matrices as nested tuples


def mat_id(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    n, m = len(a), len(b[0])
    k = len(b)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) % p for j in range(m))
        for i in range(n)
    )


def mat_vec(a: Matrix, v: tuple, p: int) -> tuple:
    return tuple(sum(a[i][t] * v[t] for t in range(len(v))) % p for i in range(len(a)))


def vec_mat(v: tuple, a: Matrix, p: int) -> tuple:
    n = len(a)
    return tuple(sum(v[t] * a[t][j] for t in range(n)) % p for j in range(len(a[0])))


def mat_det(a: Matrix, p: int) -> int:
    n = len(a)
    if n == 1:
        return a[0][0] % p
    if n == 2:
        return (a[0][0] * a[1][1] - a[0][1] * a[1][0]) % p
    # Gaussian elimination on a mutable copy.
    m = [list(r) for r in a]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = inv_mod(m[c][c], p)
        for r in range(c + 1, n):
            f = m[r][c] * inv % p
            if f:
                for j in range(c, n):
                    m[r][j] = (m[r][j] - f * m[c][j]) % p
    return det % p


def mat_inv(a: Matrix, p: int) -> Matrix:
    n = len(a)
    m = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] % p), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = inv_mod(m[c][c], p)
        m[c] = [x * inv % p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def mat_pow(a: Matrix, k: int, p: int) -> Matrix:
    if k < 0:
        return mat_pow(mat_inv(a, p), -k, p)
    out = mat_id(len(a))
    while k:
        if k & 1:
            out = mat_mul(out, a, p)
        a = mat_mul(a, a, p)
        k >>= 1
    return out


def mat_rank(a, p: int) -> int:
    m = [list(r) for r in a]
    rows, cols = len(m), len(m[0])
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = inv_mod(m[rank][c], p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(rows):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


# ---------------------------------------------------------------------------
# degree-3 homogeneous polynomial module, basis (x^3, x^2 y, x y^2, y^3).
# Coordinate i of a point is the coefficient of x^(3-i) y^i, so axis i is
# the line V_i spanned by x^(3-i) y^i.


def sym3_act(g: Matrix, r: int, v: tuple, p: int) -> tuple:
    """Right action of an invertible 2x2 matrix with determinant twist r.

    The basis monomial x^i y^(3-i) maps to det(g)^r (ax+by)^i (cx+dy)^(3-i)
    for g = ((a,b),(c,d)).
    """
    a, b = g[0]
    c, d = g[1]
    det = (a * d - b * c) % p
    if det == 0:
        raise ZeroDivisionError("singular matrix acting on cubic forms")
    scale = pow(det, r % (p - 1), p)
    out = [0, 0, 0, 0]
    # v[j] multiplies x^(3-j) y^j = x^i y^(3-i) with i = 3-j.
    for j in range(4):
        coeff = v[j] % p
        if coeff == 0:
            continue
        i = 3 - j
        # expand (ax+by)^i (cx+dy)^(3-i); term x^(3-k) y^k
        poly = [0, 0, 0, 0]
        for s in range(i + 1):
            c1 = _binom(i, s) * pow(a, i - s, p) * pow(b, s, p) % p
            for t in range(3 - i + 1):
                c2 = _binom(3 - i, t) * pow(c, 3 - i - t, p) * pow(d, t, p) % p
                ydeg = s + t
                poly[ydeg] = (poly[ydeg] + c1 * c2) % p
        for k in range(4):
            out[k] = (out[k] + coeff * poly[k]) % p
    return tuple(x * scale % p for x in out)


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def sym3_matrix(g: Matrix, r: int, p: int) -> Matrix:
    """4x4 matrix of sym3_act(g, r, .) acting on row vectors."""
    rows = []
    for j in range(4):
        e = tuple(1 if t == j else 0 for t in range(4))
        rows.append(sym3_act(g, r, e, p))
    return tuple(rows)


def jordan_flag_check(p: int, r: int) -> bool:
    """A generator of the lower unitriangular group acts as one Jordan block
    along the flag V3+V2+V1+V0 > V2+V1+V0 > V1+V0 > V0, with fixed space V0."""
    if p < 5:
        raise ValueError("needs p >= 5")
    u = ((1, 0), (1, 1))
    m = sym3_matrix(u, r, p)
    n = tuple(
        tuple((m[i][j] - (1 if i == j else 0)) % p for j in range(4)) for i in range(4)
    )
    # single Jordan block: (m - 1) has rank 3, kernel V0, and respects the flag
    if mat_rank(n, p) != 3:
        return False
    fixed = [v for v in product(range(p), repeat=4) if vec_mat(v, m, p) == v]
    axis0 = {tuple((a, 0, 0, 0)) for a in range(p)}
    if set(fixed) != axis0:
        return False
    # flag condition: coordinate j moves only into coordinates < j
    for i in range(4):
        for j in range(4):
            if j > i and n[i][j] % p:
                return False
    return all(n[i + 1][i] % p for i in range(3))


def kernel_on_axis(p: int, r: int, i: int) -> frozenset:
    """Diagonal matrices acting trivially on the axis V_i: those diag(a, b)
    with a^(3+r-i) b^(r+i) = 1. Returned as a frozenset of 2x2 matrices."""
    if not 0 <= i <= 3:
        raise ValueError("axis index out of range")
    out = []
    for a in range(1, p):
        for b in range(1, p):
            if pow(a, (3 + r - i) % (p - 1), p) * pow(b, (r + i) % (p - 1), p) % p == 1:
                out.append(((a, 0), (0, b)))
    return frozenset(out)
