"""Ordinary character degrees by the class-matrix (Dixon-Schneider) method,
p-defect censuses, and counts of defect-zero irreducibles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sympy import GF, Poly, symbols

from .groups import FiniteGroup


class DixonError(RuntimeError):
    pass


MAX_ORDER = 500_000
MAX_CLASSES = 700


@dataclass
class CharacterCensus:
    order: int
    degrees: list  # sorted list of integers, one per irreducible
    class_count: int
    # optional full table: rows = irreducibles (values mod ell), aligned with
    # the class order of the group's conjugacy_classes()
    table_mod_ell: np.ndarray = field(default=None, repr=False)
    ell: int = 0

    def check(self):
        if sum(d * d for d in self.degrees) != self.order:
            raise DixonError("sum of squared degrees misses the group order")
        if len(self.degrees) != self.class_count:
            raise DixonError("irreducible count differs from class count")

    def defect(self, degree: int, p: int) -> int:
        cofactor = self.order // degree
        d = 0
        while cofactor % p == 0:
            cofactor //= p
            d += 1
        return d

    def defect_count(self, p: int, d: int) -> int:
        return sum(1 for deg in self.degrees if self.defect(deg, p) == d)

    def z_value(self, p: int) -> int:
        return self.defect_count(p, 0)


def product_census(a: CharacterCensus, b: CharacterCensus) -> CharacterCensus:
    degrees = sorted(x * y for x in a.degrees for y in b.degrees)
    return CharacterCensus(order=a.order * b.order, degrees=degrees,
                           class_count=a.class_count * b.class_count)


def abelian_census(group: FiniteGroup) -> CharacterCensus:
    n = group.order
    return CharacterCensus(order=n, degrees=[1] * n, class_count=n)


def character_degrees(group: FiniteGroup, want_table: bool = False) -> CharacterCensus:
    """Exact multiset of irreducible character degrees."""
    if group.is_abelian():
        census = abelian_census(group)
        if want_table:
            return _dixon(group, want_table=True)
        census.check()
        return census
    if group.order > MAX_ORDER:
        raise DixonError(f"group order {group.order} beyond configured bound")
    census = _dixon(group, want_table=want_table)
    census.check()
    return census


def _find_ell(exponent: int, lower: int) -> int:
    ell = exponent + 1
    while True:
        if ell > lower and _is_prime(ell) and (ell - 1) % exponent == 0:
            return ell
        ell += exponent


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _dixon(group: FiniteGroup, want_table: bool) -> CharacterCensus:
    classes = group.conjugacy_classes()
    k = len(classes)
    if k > MAX_CLASSES:
        raise DixonError(f"class count {k} beyond configured bound")
    cmap = group.class_map()
    order = group.order
    exponent = group.exponent()
    ell = _find_ell(exponent, max(2 * math.isqrt(order) + 1, 2 * k, 100))

    reps = [cls[0] for cls in classes]
    sizes = np.array([len(cls) for cls in classes], dtype=np.int64)
    inv_class = np.array([cmap[group.inv(r)] for r in reps], dtype=np.int64)

    # class matrices M_i[j][k] = #{x in C_i : x^-1 z_k in C_j} scaled below;
    # the standard a_ijk with x y = z_k, x in C_i, y in C_j.
    mats = []
    for i in range(k):
        m = np.zeros((k, k), dtype=np.int64)
        for x in classes[i]:
            xi = group.inv(x)
            for t, z in enumerate(reps):
                m[cmap[group.mul(xi, z)], t] += 1
        # a_ijk counts pairs per fixed z_k; normalize нn standard form:
        # column k counts x with x^-1 z_k in C_j; multiply to pair counts
        mats.append(m % ell)
    # The eigenvector columns v satisfy M_i v = w_i v with
    # w_i = |C_i| chi(g_i)/chi(1).

    order_mats = sorted(range(k), key=lambda i: -sizes[i])
    spaces = [np.eye(k, dtype=np.int64) % ell]
    rng = np.random.default_rng(20240901)
    tries = 0
    while any(s.shape[1] > 1 for s in spaces):
        tries += 1
        if tries > k + 24:
            raise DixonError("eigenspace refinement stalled")
        if tries <= k:
            M = mats[order_mats[tries - 1]]
        else:
            coeffs = rng.integers(1, ell, size=k)
            M = np.zeros((k, k), dtype=np.int64)
            for c, mat in zip(coeffs, mats):
                M = (M + int(c) * mat) % ell
        new_spaces = []
        for basis in spaces:
            if basis.shape[1] == 1:
                new_spaces.append(basis)
                continue
            new_spaces.extend(_split_space(M, basis, ell))
        spaces = new_spaces

    vectors = [s[:, 0] for s in spaces]
    degrees = []
    rows = []
    for v in vectors:
        # normalize so v[identity class] = 1
        id_cls = cmap[group.identity()]
        if v[id_cls] % ell == 0:
            raise DixonError("degenerate eigenvector")
        v = v * pow(int(v[id_cls]), ell - 2, ell) % ell
        # w_i = v[i]; degree from second orthogonality:
        # d^2 = |G| / sum_i w_i w_{i*} / |C_i|
        acc = 0
        for i in range(k):
            term = int(v[i]) * int(v[inv_class[i]]) % ell
            term = term * pow(int(sizes[i]), ell - 2, ell) % ell
            acc = (acc + term) % ell
        d2 = order % ell * pow(acc, ell - 2, ell) % ell
        d = _sqrt_int(d2, ell, order)
        degrees.append(d)
        if want_table:
            row = [
                d * int(v[i]) % ell * pow(int(sizes[i]), ell - 2, ell) % ell
                for i in range(k)
            ]
            rows.append(row)
    census = CharacterCensus(order=order, degrees=sorted(degrees), class_count=k,
                             table_mod_ell=np.array(rows, dtype=np.int64) if want_table else None,
                             ell=ell)
    return census


def _sqrt_int(d2: int, ell: int, order: int) -> int:
    """Recover integer degree d with d^2 = d2 mod ell and d^2 <= order."""
    bound = math.isqrt(order)
    # degrees divide no useful bound a priori; scan residues d with d <= bound
    for d in range(1, bound + 1):
        if d * d % ell == d2 and order % d == 0:
            return d
    for d in range(1, bound + 1):
        if d * d % ell == d2:
            return d
    raise DixonError("cannot lift a character degree")


def _split_space(M: np.ndarray, basis: np.ndarray, ell: int) -> list:
    """Split an M-invariant space spanned by basis columns along eigenspaces
    of M. Eigenvalues missed by the probe vectors leave an invariant
    residual block, refined by later matrices."""
    dim = basis.shape[1]
    MB = M @ basis % ell
    R = _solve_matrix(basis, MB, ell)
    lam_list = _eigenvalues(R, ell)
    out = []
    covered = 0
    eye = np.eye(dim, dtype=np.int64)
    prod = eye.copy()
    for lam in lam_list:
        A = (R - lam * eye) % ell
        null = _nullspace(A, ell)
        if null.shape[1] == 0:
            continue
        covered += null.shape[1]
        out.append(basis @ null % ell)
        prod = prod @ A % ell
    if covered < dim:
        # residual: image of prod spans the missed eigenspaces
        img = _column_space(prod, ell)
        if img.shape[1] != dim - covered:
            raise DixonError("eigenspace bookkeeping failed")
        out.append(basis @ img % ell)
    if len(out) == 1:
        return [basis]
    return out


def _column_space(A: np.ndarray, ell: int) -> np.ndarray:
    """Basis of the column space, as columns."""
    m = _rref(A.T.copy() % ell, ell)
    rows = [r for r in m if np.any(r % ell)]
    if not rows:
        return np.zeros((A.shape[0], 0), dtype=np.int64)
    return np.stack(rows, axis=1) % ell


def _solve_matrix(B: np.ndarray, Y: np.ndarray, ell: int) -> np.ndarray:
    """Solve B R = Y for R, with B of full column rank, modulo ell."""
    n, m = B.shape
    aug = np.concatenate([B, Y], axis=1) % ell
    aug = _rref(aug, ell, pivot_cols=m)
    R = aug[:m, m:] % ell
    return R


def _rref(mat: np.ndarray, ell: int, pivot_cols: int = None) -> np.ndarray:
    m = mat.copy() % ell
    rows, cols = m.shape
    if pivot_cols is None:
        pivot_cols = cols
    r = 0
    for c in range(pivot_cols):
        piv = None
        for i in range(r, rows):
            if m[i, c] % ell:
                piv = i
                break
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), ell - 2, ell)
        m[r] = m[r] * inv % ell
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - int(m[i, c]) * m[r]) % ell
        r += 1
        if r == rows:
            break
    return m


def _nullspace(A: np.ndarray, ell: int) -> np.ndarray:
    n = A.shape[1]
    m = _rref(A, ell)
    pivots = []
    r = 0
    for c in range(n):
        if r < m.shape[0] and m[r, c] == 1 and all(
            m[i, c] == 0 for i in range(m.shape[0]) if i != r
        ):
            pivots.append(c)
            r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for j, c in enumerate(free):
        basis[c, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-int(m[i, c])) % ell
    return basis % ell


def _eigenvalues(R: np.ndarray, ell: int) -> list:
    """Eigenvalues in F_ell found from minimal polynomials of a few probe
    vectors (a subset of the spectrum is fine; the caller keeps a residual)."""
    dim = R.shape[0]
    rng = np.random.default_rng(17)
    roots = set()
    probes = 3 if dim > 1 else 1
    for _ in range(probes):
        v = rng.integers(0, ell, size=dim)
        krylov = [v % ell]
        while True:
            krylov.append(R @ krylov[-1] % ell)
            K = np.stack(krylov, axis=1) % ell
            if _rank(K, ell) < K.shape[1]:
                break
        coeffs = _dependency(K, ell)
        x = symbols("x")
        poly = Poly(list(reversed([int(c) for c in coeffs])), x, domain=GF(ell))
        for factor, _mult in poly.factor_list()[1]:
            if factor.degree() == 1:
                c1, c0 = factor.all_coeffs()
                roots.add((-int(c0) * pow(int(c1), ell - 2, ell)) % ell)
        if len(roots) == dim:
            break
    if not roots:
        raise DixonError("eigenvalue search found no roots")
    return sorted(roots)


def _rank(K: np.ndarray, ell: int) -> int:
    m = _rref(K.copy(), ell)
    return int(np.sum(np.any(m % ell != 0, axis=1)))


def _dependency(K: np.ndarray, ell: int) -> np.ndarray:
    """Coefficients c with K c = 0, last coefficient 1 (monic relation)."""
    null = _nullspace(K, ell)
    for j in range(null.shape[1]):
        col = null[:, j]
        if col[-1] % ell:
            inv = pow(int(col[-1]), ell - 2, ell)
            return col * inv % ell
    raise DixonError("no monic dependency found")


def z_value(group: FiniteGroup, p: int) -> int:
    """Number of p-defect-zero ordinary irreducibles = simple projective
    modules in characteristic p. Shortcuts: nontrivial p-core forces 0;
    groups of order prime to p have all characters of defect zero."""
    if group.order % p != 0:
        return group.class_count()
    if group.p_core(p).order > 1:
        return 0
    return character_degrees(group).z_value(p)


def irr_defect_count(group: FiniteGroup, p: int, d: int) -> int:
    order_p = 0
    n = group.order
    while n % p == 0:
        n //= p
        order_p += 1
    if d > order_p:
        return 0
    return character_degrees(group).defect_count(p, d)
