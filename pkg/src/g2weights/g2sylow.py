"""Concrete Sylow p-subgroup of the rank-2 exceptional Chevalley group of
type G2, realized inside GL_7(p), together with its distinguished maximal
subgroups, upper central series, torus normalizer and the induced actions
on quotients.

The 7-dimensional module has weight basis ordered
    v1..v7  <->  2a+b, a+b, a, 0, -a, -a-b, -2a-b
(a short, b long). Root elements for the six positive roots are truncated
exponentials of explicit nilpotent integer matrices; all denominators are
invertible for p >= 5.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fpmath import inv_mod, mat_id, mat_inv, mat_mul, primitive_root
from .groups import FiniteGroup, MatrixOps, generate

N = 7

# nilpotent matrices E[i][j] meaning row i receives column j (column action)
_E1 = {(3, 4): 1, (2, 3): 1, (5, 6): 1, (0, 1): 1}
_E2 = {(1, 2): 1, (4, 5): 1}
_E3 = {(3, 5): 1, (1, 3): -1, (0, 2): 1, (4, 6): -1}
_E4 = {(1, 4): 1, (2, 5): 1, (3, 6): -2, (0, 3): -2}
_E5 = {(2, 6): -3, (0, 4): 3}
_E6 = {(1, 6): -3, (0, 5): -3}

_ROOT_MATS = [_E1, _E2, _E3, _E4, _E5, _E6]

# exponents of (alpha-height, beta-height) per positive root x1..x6
ROOT_HEIGHTS = [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)]


def _dense(entries: dict, p: int):
    m = [[0] * N for _ in range(N)]
    for (i, j), c in entries.items():
        m[i][j] = c % p
    return tuple(tuple(r) for r in m)


def _nilpotent_exp(entries: dict, u: int, p: int):
    """exp(u E) as a matrix tuple; E^3 = 0 for every root matrix here."""
    E = _dense(entries, p)
    E2 = mat_mul(E, E, p)
    half = inv_mod(2, p)
    out = [[0] * N for _ in range(N)]
    for i in range(N):
        for j in range(N):
            out[i][j] = (
                (1 if i == j else 0) + u * E[i][j] + u * u * half * E2[i][j]
            ) % p
    return tuple(tuple(r) for r in out)


@dataclass
class SylowG2:
    p: int
    S: FiniteGroup
    Q: FiniteGroup
    R: FiniteGroup
    Z: list  # Z[1..5] upper central series members as element sets

    def __post_init__(self):
        self.ops = self.S.ops


@lru_cache(maxsize=None)
def root_element(p: int, i: int, u: int):
    """x_i(u) for the i-th positive root, 1-based."""
    return _nilpotent_exp(_ROOT_MATS[i - 1], u % p, p)


@lru_cache(maxsize=None)
def torus_element(p: int, t: int, alpha: int):
    """Torus matrix normalizing S under which x1 has weight alpha and
    x2 has weight t; root x_i scales by alpha^m t^n for heights (m, n)."""
    A, B = alpha % p, t % p
    Ai, Bi = inv_mod(A, p), inv_mod(B, p)
    diag = [A * A * B, A * B, A, 1, Ai, Ai * Bi, Ai * Ai * Bi]
    return tuple(
        tuple(diag[i] % p if i == j else 0 for j in range(N)) for i in range(N)
    )


def root_weight(p: int, i: int, t: int, alpha: int) -> int:
    m, n = ROOT_HEIGHTS[i - 1]
    return pow(alpha, m, p) * pow(t, n, p) % p


def coordinates(g, p: int) -> tuple:
    """Root coordinates (u1..u6) of g = x1(u1) x2(u2) ... x6(u6)."""
    u = [0] * 6
    third = inv_mod(3, p)
    cur = g
    # u1 from the unique weight-step v5 -> v4
    u[0] = cur[3][4] % p
    cur = mat_mul(root_element(p, 1, -u[0]), cur, p)
    u[1] = cur[1][2] % p
    cur = mat_mul(root_element(p, 2, -u[1]), cur, p)
    u[2] = cur[3][5] % p
    cur = mat_mul(root_element(p, 3, -u[2]), cur, p)
    u[3] = cur[1][4] % p
    cur = mat_mul(root_element(p, 4, -u[3]), cur, p)
    u[4] = cur[0][4] * third % p
    cur = mat_mul(root_element(p, 5, -u[4]), cur, p)
    u[5] = (-cur[0][5]) * third % p
    cur = mat_mul(root_element(p, 6, -u[5]), cur, p)
    if cur != mat_id(N):
        raise ValueError("element is not in the unipotent group")
    return tuple(u)


def from_coordinates(u, p: int):
    g = mat_id(N)
    for i, ui in enumerate(u, start=1):
        if ui % p:
            g = mat_mul(g, root_element(p, i, ui), p)
    return g


@lru_cache(maxsize=None)
def build(p: int) -> SylowG2:
    """Construct and validate S, Q, R and the upper central series."""
    if p < 5:
        raise ValueError("construction requires p >= 5")
    ops = MatrixOps(p, N)
    x = {i: root_element(p, i, 1) for i in range(1, 7)}
    S = generate([x[1], x[2]], ops=ops, cap=p ** 6 + 1, name=f"S({p})")
    if S.order != p ** 6:
        raise AssertionError(f"|S| = {S.order}, expected p^6")
    Q = generate([x[i] for i in (2, 3, 4, 5, 6)], ops=ops, name=f"Q({p})")
    R = generate([x[i] for i in (1, 3, 4, 5, 6)], ops=ops, name=f"R({p})")
    if Q.order != p ** 5 or R.order != p ** 5:
        raise AssertionError("maximal subgroups have wrong order")

    # upper central series via coordinates: Z_k spanned by the top k roots
    Zsets = [None]
    for k in range(1, 6):
        members = generate([x[i] for i in range(7 - k, 7)], ops=ops)
        Zsets.append(frozenset(members.elements))
    syl = SylowG2(p=p, S=S, Q=Q, R=R, Z=Zsets)
    _validate(syl, x)
    return syl


def _validate(syl: SylowG2, x: dict):
    p, S, Q, R = syl.p, syl.S, syl.Q, syl.R
    # Q is extraspecial of order p^5 and exponent p; its center, derived
    # subgroup and Frattini subgroup coincide with the top root group
    zQ = Q.center()
    dQ = Q.derived_subgroup()
    if zQ.order != p or set(zQ.elements) != set(dQ.elements):
        raise AssertionError("Q is not extraspecial")
    if any(Q.element_order(g) not in (1, p) for g in Q.generators):
        raise AssertionError("Q has exponent > p on its generators")
    # R: derived subgroup = Frattini = Z3, elementary abelian of order p^3
    dR = R.derived_subgroup()
    if set(dR.elements) != syl.Z[3]:
        raise AssertionError("[R, R] is not Z3")
    if any(S.element_order(g) not in (1, p) for g in syl.Z[3]):
        raise AssertionError("Z3 is not elementary abelian")
    # center of S
    zS = S.center()
    if set(zS.elements) != syl.Z[1]:
        raise AssertionError("Z(S) is not the top root group")
    # derived subgroup of S is Z4
    dS = S.derived_subgroup()
    if set(dS.elements) != syl.Z[4]:
        raise AssertionError("[S, S] is not Z4")
    # nilpotency class 5: lower central series reaches 1 in exactly 5 steps
    if not _class_is_five(S, p):
        raise AssertionError("S does not have nilpotency class 5")
    # exponent: p for p >= 7, p^2 at p = 5
    expo = _exponent_from_reps(S)
    if p == 5 and expo != 25:
        raise AssertionError("S at p=5 must have exponent 25")
    if p >= 7 and expo != p:
        raise AssertionError("S must have exponent p")
    # torus normalizes S with the declared weights
    eta = primitive_root(p)
    for (t, alpha) in ((eta, 1), (1, eta), (eta, eta)):
        h = torus_element(p, t, alpha)
        hi = mat_inv(h, p)
        for i in range(1, 7):
            img = mat_mul(mat_mul(h, x[i], p), hi, p)
            w = root_weight(p, i, t, alpha)
            if img != root_element(p, i, w):
                raise AssertionError(f"torus weight mismatch on root {i}")


def _class_is_five(S: FiniteGroup, p: int) -> bool:
    # lower central series: commutators taken against all elements of the
    # previous term so each step is the true [S, gamma_k]
    term = S.derived_subgroup()
    steps = 1
    while term.order > 1 and steps < 8:
        gens = set()
        for a in S.generators:
            ai = S.inv(a)
            for b in term.elements:
                bi = S.inv(b)
                gens.add(S.mul(S.mul(ai, bi), S.mul(a, b)))
        term = generate(list(gens), ops=S.ops)
        steps += 1
    return steps == 5 and term.order == 1


def _exponent_from_reps(G: FiniteGroup) -> int:
    import math

    out = 1
    for cls in G.conjugacy_classes():
        out = math.lcm(out, G.element_order(cls[0]))
    return out


# ---------------------------------------------------------------------------
# induced actions on quotients


def q_module_matrix(syl: SylowG2, g) -> tuple:
    """4x4 matrix of conjugation by g on Q/[Q,Q] in root coordinates
    (u2, u3, u4, u5): coords(g^-1 q g) = coords(q) . M."""
    p = syl.p
    gi = mat_inv(g, p)
    rows = []
    for i in (2, 3, 4, 5):
        img = mat_mul(mat_mul(gi, root_element(p, i, 1), p), g, p)
        u = coordinates(img, p)
        if u[0] % p:
            raise ValueError("conjugation leaves Q")
        rows.append((u[1], u[2], u[3], u[4]))
    return tuple(rows)


def s_ab_matrix(syl: SylowG2, g) -> tuple:
    """2x2 matrix of conjugation by g on S/[S,S], coordinates (u1, u2)."""
    p = syl.p
    gi = mat_inv(g, p)
    rows = []
    for i in (1, 2):
        img = mat_mul(mat_mul(gi, root_element(p, i, 1), p), g, p)
        u = coordinates(img, p)
        rows.append((u[0], u[1]))
    return tuple(rows)


def r_ab_matrix(syl: SylowG2, g) -> tuple:
    """2x2 matrix of conjugation by g on R/[R,R], coordinates (u3, u1)."""
    p = syl.p
    gi = mat_inv(g, p)
    rows = []
    for i in (3, 1):
        img = mat_mul(mat_mul(gi, root_element(p, i, 1), p), g, p)
        u = coordinates(img, p)
        rows.append((u[2], u[0]))
    return tuple(rows)


def z2_matrix(syl: SylowG2, g) -> tuple:
    """2x2 matrix of conjugation by g on Z2, coordinates (u6, u5)."""
    p = syl.p
    gi = mat_inv(g, p)
    rows = []
    for i in (6, 5):
        img = mat_mul(mat_mul(gi, root_element(p, i, 1), p), g, p)
        u = coordinates(img, p)
        rows.append((u[5], u[4]))
    return tuple(rows)


def central_weight(syl: SylowG2, g) -> int:
    """Scalar by which conjugation by g acts on Z(S) = Z(Q)."""
    p = syl.p
    gi = mat_inv(g, p)
    img = mat_mul(mat_mul(gi, root_element(p, 6, 1), p), g, p)
    u = coordinates(img, p)
    if any(u[i] for i in range(5)):
        raise ValueError("conjugation does not preserve the center")
    return u[5] % p
