"""Explicit finite groups: BFS enumeration from generators, conjugacy
classes, normalizers, Sylow theory, p-core, normal chains, coset
enumeration and small-group shape recognition.

Elements are immutable payloads (nested tuples for matrices mod p, flat
tuples for permutations); the payload itself is the hash key.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .fpmath import mat_id, mat_inv, mat_mul

DEFAULT_CAP = 5_000_000


class OverflowCapError(RuntimeError):
    def __init__(self, partial: int, cap: int):
        super().__init__(f"closure exceeded cap {cap} (reached {partial} elements)")
        self.partial = partial


class MatrixOps:
    """Multiplication/inversion strategy for n x n matrices over F_p."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self._id = mat_id(n)

    def identity(self):
        return self._id

    def mul(self, a, b):
        return mat_mul(a, b, self.p)

    def inv(self, a):
        return mat_inv(a, self.p)

    # batched helpers (numpy) for the enumeration-heavy paths
    def np_stack(self, elements):
        import numpy as np

        return np.array(elements, dtype=np.int16)

    def np_mul(self, stack, g_np):
        import numpy as np

        return np.matmul(stack, g_np) % self.p

    def np_mul_left(self, g_np, stack):
        import numpy as np

        return np.matmul(g_np, stack) % self.p

    def np_keys(self, stack):
        import numpy as np

        flat = np.ascontiguousarray(stack.astype(np.uint8))
        m = stack.shape[0]
        return flat.reshape(m, -1)

    def from_np(self, row):
        return tuple(tuple(int(x) for x in r) for r in row)


class PermOps:
    """Strategy for permutations of range(n), stored as image tuples."""

    def __init__(self, n: int):
        self.n = n
        self._id = tuple(range(n))

    def identity(self):
        return self._id

    def mul(self, a, b):
        # (a*b)(i) = b(a(i)): apply a first, matching right-action convention
        return tuple(b[x] for x in a)

    def inv(self, a):
        out = [0] * self.n
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)

    def np_stack(self, elements):
        import numpy as np

        return np.array(elements, dtype=np.int32)

    def np_mul(self, stack, g_np):
        return g_np[stack]

    def np_mul_left(self, g_np, stack):
        import numpy as np

        return np.take(stack, g_np, axis=1)

    def np_keys(self, stack):
        import numpy as np

        return stack.astype(np.uint16).reshape(stack.shape[0], -1)

    def from_np(self, row):
        return tuple(int(x) for x in row)


class ProductOps:
    """Direct product of two strategies; elements are pairs."""

    def __init__(self, ops1, ops2):
        self.ops1, self.ops2 = ops1, ops2

    def identity(self):
        return (self.ops1.identity(), self.ops2.identity())

    def mul(self, a, b):
        return (self.ops1.mul(a[0], b[0]), self.ops2.mul(a[1], b[1]))

    def inv(self, a):
        return (self.ops1.inv(a[0]), self.ops2.inv(a[1]))


@dataclass
class FiniteGroup:
    ops: object
    elements: list
    index: dict = field(repr=False)
    generators: list = field(default_factory=list, repr=False)
    name: str = ""
    _classes: list = field(default=None, repr=False)
    _classmap: dict = field(default=None, repr=False)
    _np: object = field(default=None, repr=False)

    def np_view(self):
        if self._np is None and hasattr(self.ops, "np_stack"):
            self._np = _NpView(self)
        return self._np

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.index

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.ops.mul(a, b)

    def inv(self, a):
        return self.ops.inv(a)

    def identity(self):
        return self.ops.identity()

    def element_order(self, g) -> int:
        e = self.identity()
        x, n = g, 1
        while x != e:
            x = self.mul(x, g)
            n += 1
        return n

    def exponent(self) -> int:
        # element order is a class function, so class representatives suffice
        out = 1
        if self.order > 2000:
            for cls in self.conjugacy_classes():
                out = math.lcm(out, self.element_order(cls[0]))
        else:
            for g in self.elements:
                out = math.lcm(out, self.element_order(g))
        return out

    def subgroup(self, gens, name: str = "") -> "FiniteGroup":
        sub = generate(gens, ops=self.ops, name=name)
        for g in sub.elements:
            if g not in self.index:
                raise ValueError("generators leave the ambient group")
        return sub

    # -- conjugacy ---------------------------------------------------------

    def conjugacy_classes(self) -> list:
        """Classes as lists of elements; cached along with the class map."""
        if self._classes is None:
            if self.order > 4000 and self.np_view() is not None:
                self._classes, self._classmap = _np_conjugacy(self)
            else:
                self._classes, self._classmap = _generic_conjugacy(self)
        return self._classes

    def class_map(self) -> dict:
        self.conjugacy_classes()
        return self._classmap

    def class_count(self) -> int:
        return len(self.conjugacy_classes())

    # -- subgroup constructions -------------------------------------------

    def centralizer(self, g) -> "FiniteGroup":
        els = self._commuting_with([g])
        return _from_elements(self.ops, els, name=f"C({self.name})")

    def center(self) -> "FiniteGroup":
        els = self._commuting_with(self.generators or self.elements)
        return _from_elements(self.ops, els, name=f"Z({self.name})")

    def _commuting_with(self, gens) -> list:
        view = self.np_view() if self.order > 4000 else None
        if view is None:
            return [
                x for x in self.elements
                if all(self.mul(x, g) == self.mul(g, x) for g in gens)
            ]
        import numpy as np

        keep = np.ones(self.order, dtype=bool)
        for g in gens:
            g_np = self.ops.np_stack([g])[0]
            left = view.keys_of(self.ops.np_mul_left(g_np, view.stack))
            right = view.keys_of(self.ops.np_mul(view.stack, g_np))
            keep &= np.all(left == right, axis=1)
        return [self.elements[i] for i in np.where(keep)[0]]

    def normalizer(self, sub: "FiniteGroup") -> "FiniteGroup":
        sgens = sub.generators or sub.elements
        view = self.np_view() if self.order > 4000 else None
        if view is None:
            els = []
            for x in self.elements:
                xi = self.inv(x)
                if all(self.mul(self.mul(xi, g), x) in sub.index for g in sgens):
                    els.append(x)
            return _from_elements(self.ops, els, name=f"N({sub.name})")
        import numpy as np

        subkeys = {
            k.tobytes() for k in view.keys_of(self.ops.np_stack(sub.elements))
        }
        keep = np.ones(self.order, dtype=bool)
        for g in sgens:
            conj = view.conjugate_all(g)
            keys = view.keys_of(conj)
            keep &= np.array([k.tobytes() in subkeys for k in keys])
        els = [self.elements[i] for i in np.where(keep)[0]]
        return _from_elements(self.ops, els, name=f"N({sub.name})")

    def derived_subgroup(self) -> "FiniteGroup":
        """Normal closure of the basic commutators of the generators."""
        gens = self.generators or self.elements
        if len(gens) > 24:
            comms = set()
            for a in gens:
                ai = self.inv(a)
                for b in self.elements:
                    comms.add(self.mul(self.mul(ai, self.inv(b)), self.mul(a, b)))
            return generate(list(comms), ops=self.ops, name="derived")
        seeds = set()
        for a in gens:
            ai = self.inv(a)
            for b in gens:
                seeds.add(self.mul(self.mul(ai, self.inv(b)), self.mul(a, b)))
        closed = self.normal_closure_seeds(seeds)
        return generate(list(closed), ops=self.ops, name=f"[{self.name},{self.name}]")

    def normal_closure_seeds(self, seeds) -> set:
        """Close a seed set under conjugation by the group generators and
        under the subgroup closure's new elements (iterated)."""
        gens = self.generators or self.elements
        gen_pairs = [(s, self.inv(s)) for s in gens]
        while True:
            conj_closed = set()
            frontier = list(seeds)
            conj_closed |= seeds
            while frontier:
                nxt = []
                for x in frontier:
                    for s, si in gen_pairs:
                        y = self.mul(self.mul(si, x), s)
                        if y not in conj_closed:
                            conj_closed.add(y)
                            nxt.append(y)
                frontier = nxt
            sub = generate(list(conj_closed), ops=self.ops)
            if len(sub.elements) == len(conj_closed):
                return conj_closed
            seeds = set(sub.elements)

    def is_normal(self, sub: "FiniteGroup") -> bool:
        sgens = sub.generators or sub.elements
        for x in self.generators or self.elements:
            xi = self.inv(x)
            if any(self.mul(self.mul(x, g), xi) not in sub.index for g in sgens):
                return False
        return True

    def is_abelian(self) -> bool:
        gens = self.generators or self.elements
        return all(
            self.mul(a, b) == self.mul(b, a) for a in gens for b in gens
        )

    # -- Sylow / p-structure -----------------------------------------------

    def sylow_subgroup(self, p: int) -> "FiniteGroup":
        """Iterative normalizer growth from a maximal-order p-element."""
        target = _p_part(self.order, p)
        if target == 1:
            return _from_elements(self.ops, [self.identity()], name="1")
        seed = max(
            (g for g in self.elements if _is_p_element(self, g, p)),
            key=lambda g: self.element_order(g),
        )
        current = generate([seed], ops=self.ops)
        while current.order < target:
            norm = self.normalizer(current)
            grown = False
            for g in norm.elements:
                if g in current.index:
                    continue
                if _is_p_element(norm, g, p):
                    current = generate(current.generators + [g], ops=self.ops)
                    grown = True
                    break
            if not grown:
                raise RuntimeError("Sylow growth stalled")
        return current

    def p_core(self, p: int) -> "FiniteGroup":
        """Largest normal p-subgroup: intersection of a Sylow p-subgroup's
        conjugates."""
        syl = self.sylow_subgroup(p)
        if syl.order == 1:
            return syl
        core = set(syl.elements)
        for g in self.elements:
            gi = self.inv(g)
            core &= {self.mul(self.mul(g, x), gi) for x in syl.elements}
            if len(core) == 1:
                break
        return _from_elements(self.ops, sorted_elements(core), name="O_p")


class _NpView:
    """Lazy numpy mirror of a group: element stack, key lookup, inverses."""

    def __init__(self, group: FiniteGroup):
        import numpy as np

        self.group = group
        self.ops = group.ops
        self.stack = self.ops.np_stack(group.elements)
        keys = self.ops.np_keys(self.stack)
        self.key_index = {k.tobytes(): i for i, k in enumerate(keys)}
        self._inv_index = None
        self.np = np

    def keys_of(self, stack):
        return self.ops.np_keys(stack)

    def lookup(self, stack):
        """Indices of stacked elements inside the group (all must belong)."""
        keys = self.keys_of(stack)
        return self.np.array([self.key_index[k.tobytes()] for k in keys])

    def membership(self, stack) -> list:
        keys = self.keys_of(stack)
        return [k.tobytes() in self.key_index for k in keys]

    def inv_index(self):
        if self._inv_index is None:
            if isinstance(self.ops, MatrixOps):
                inv_stack = _batch_mat_inv(self.stack, self.ops.p)
            else:
                inv_stack = self.np.argsort(self.stack, axis=1)
            self._inv_index = self.lookup(inv_stack)
        return self._inv_index

    def conjugate_all(self, s):
        """Stack of g^-1 s g over all g in element order."""
        inv = self.stack[self.inv_index()]
        s_np = self.ops.np_stack([s])[0]
        if isinstance(self.ops, MatrixOps):
            tmp = self.np.matmul(inv, s_np) % self.ops.p
            return self.np.matmul(tmp, self.stack) % self.ops.p
        # permutations: mul(mul(g^-1, s), g) with mul(a, b) = b[a]
        tmp = self.ops.np_mul(inv, s_np)
        return self.np.take_along_axis(self.stack, tmp, axis=1)

    def conjugate_all_elements(self, s):
        """Index table x -> index of s^-1 x s over the whole group."""
        s_np = self.ops.np_stack([s])[0]
        si_np = self.ops.np_stack([self.group.inv(s)])[0]
        if isinstance(self.ops, MatrixOps):
            tmp = self.np.matmul(si_np, self.stack) % self.ops.p
            out = self.np.matmul(tmp, s_np) % self.ops.p
        else:
            tmp = self.ops.np_mul_left(si_np, self.stack)
            out = self.ops.np_mul(tmp, s_np)
        return self.lookup(out)


def _batch_mat_inv(stack, p: int):
    """Vectorized Gauss-Jordan inverse of a stack of matrices over F_p."""
    import numpy as np

    m, n, _ = stack.shape
    inv_table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv_table[a] = pow(a, p - 2, p)
    work = np.concatenate(
        [stack.astype(np.int64) % p, np.tile(np.eye(n, dtype=np.int64), (m, 1, 1))],
        axis=2,
    )
    rows = np.arange(m)
    for c in range(n):
        sub = work[:, c:, c] % p
        piv_rel = np.argmax(sub != 0, axis=1)
        if np.any(sub[rows, piv_rel] == 0):
            raise ZeroDivisionError("singular matrix in batch inverse")
        piv = piv_rel + c
        swap = piv != c
        if np.any(swap):
            idx = np.where(swap)[0]
            tmp = work[idx, c, :].copy()
            work[idx, c, :] = work[idx, piv[idx], :]
            work[idx, piv[idx], :] = tmp
        scale = inv_table[work[:, c, c] % p]
        work[:, c, :] = work[:, c, :] * scale[:, None] % p
        col = work[:, :, c].copy()
        col[:, c] = 0
        work -= col[:, :, None] * work[:, c, :][:, None, :]
        work %= p
    return work[:, :, n:].astype(stack.dtype)


def sorted_elements(els):
    return sorted(els)


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def _is_p_element(group: FiniteGroup, g, p: int) -> bool:
    n = group.element_order(g)
    while n % p == 0:
        n //= p
    return n == 1


def _from_elements(ops, els, name: str = "") -> FiniteGroup:
    els = list(els)
    if not els:
        els = [ops.identity()]
    index = {g: i for i, g in enumerate(els)}
    return FiniteGroup(ops=ops, elements=els, index=index, generators=list(els), name=name)


def from_elements(ops, els, name: str = "") -> FiniteGroup:
    return _from_elements(ops, els, name)


def generate(gens, ops=None, cap: int = DEFAULT_CAP, name: str = "") -> FiniteGroup:
    """Breadth-first closure of a generating set."""
    if ops is None:
        raise ValueError("ops strategy required")
    e = ops.identity()
    gens = [g for g in gens if g != e]
    if hasattr(ops, "np_stack") and gens:
        return _np_generate(gens, ops, cap, name)
    seen = {e: 0}
    elements = [e]
    frontier = [e]
    allgens = gens + [ops.inv(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in allgens:
                y = ops.mul(x, g)
                if y not in seen:
                    seen[y] = len(elements)
                    elements.append(y)
                    nxt.append(y)
                    if len(elements) > cap:
                        raise OverflowCapError(len(elements), cap)
        frontier = nxt
    return FiniteGroup(ops=ops, elements=elements, index=seen, generators=list(gens), name=name)


def _np_generate(gens, ops, cap: int, name: str) -> FiniteGroup:
    import numpy as np

    e = ops.identity()
    allgens = gens + [ops.inv(g) for g in gens]
    gen_nps = [ops.np_stack([g])[0] for g in allgens]
    elements = [e]
    seen = {ops.np_keys(ops.np_stack([e]))[0].tobytes(): 0}
    frontier = ops.np_stack([e])
    while frontier.shape[0]:
        branches = []
        for g_np in gen_nps:
            branches.append(ops.np_mul(frontier, g_np))
        batch = np.concatenate(branches, axis=0)
        keys = ops.np_keys(batch)
        fresh = []
        for i, k in enumerate(keys):
            kb = k.tobytes()
            if kb not in seen:
                seen[kb] = len(elements) + len(fresh)
                fresh.append(i)
        if len(elements) + len(fresh) > cap:
            raise OverflowCapError(len(elements) + len(fresh), cap)
        if not fresh:
            break
        frontier = batch[np.array(fresh)]
        for row in frontier:
            elements.append(ops.from_np(row))
    index = {g: i for i, g in enumerate(elements)}
    return FiniteGroup(ops=ops, elements=elements, index=index,
                       generators=list(gens), name=name)


def _generic_conjugacy(group: FiniteGroup):
    gens = group.generators or group.elements
    gen_pairs = [(s, group.inv(s)) for s in gens]
    seen = {}
    classes = []
    for g in group.elements:
        if g in seen:
            continue
        orbit = [g]
        seen[g] = len(classes)
        frontier = [g]
        while frontier:
            nxt = []
            for x in frontier:
                for s, si in gen_pairs:
                    y = group.mul(group.mul(si, x), s)
                    if y not in seen:
                        seen[y] = len(classes)
                        orbit.append(y)
                        nxt.append(y)
            frontier = nxt
        classes.append(orbit)
    return classes, seen


def _np_conjugacy(group: FiniteGroup):
    """Conjugation orbits computed by batched full-group sweeps."""
    import numpy as np

    view = group.np_view()
    n = group.order
    gens = group.generators or group.elements
    # map tables: index of s^-1 x s for every x, per generator
    tables = []
    for s in gens:
        conj = view.conjugate_all_elements(s)
        tables.append(conj)
    labels = np.full(n, -1, dtype=np.int64)
    classes = []
    for start in range(n):
        if labels[start] >= 0:
            continue
        cid = len(classes)
        members = [start]
        labels[start] = cid
        frontier = np.array([start])
        while frontier.size:
            nxt = []
            for table in tables:
                imgs = table[frontier]
                for i in imgs:
                    if labels[i] < 0:
                        labels[i] = cid
                        nxt.append(i)
            frontier = np.array(sorted(set(nxt)), dtype=np.int64)
        members = np.where(labels == cid)[0]
        classes.append([group.elements[i] for i in members])
    classmap = {group.elements[i]: int(labels[i]) for i in range(n)}
    return classes, classmap


# ---------------------------------------------------------------------------
# normal chains of p-subgroups


@dataclass
class NormalChain:
    """1 = X_0 < X_1 < ... < X_m, each X_i normal in X_m, as frozensets."""

    members: tuple  # tuple of frozensets of elements, excluding the trivial one

    @property
    def length(self) -> int:
        return len(self.members)

    def sign(self) -> int:
        return -1 if self.length % 2 else 1


def all_p_subgroups(group: FiniteGroup, p: int, elementary_only: bool = False,
                    cap: int = 200_000) -> list:
    """All p-subgroups as frozensets, found inside all Sylow conjugates."""
    syl = group.sylow_subgroup(p)
    base = _subgroups_of_pgroup(syl, p, elementary_only)
    found = set(base)
    frontier = list(base)
    gens = group.generators or group.elements
    while frontier:
        nxt = []
        for sub in frontier:
            for g in gens:
                gi = group.inv(g)
                img = frozenset(group.mul(group.mul(g, x), gi) for x in sub)
                if img not in found:
                    found.add(img)
                    nxt.append(img)
                    if len(found) > cap:
                        raise OverflowCapError(len(found), cap)
        frontier = nxt
    return list(found)


def _subgroups_of_pgroup(pg: FiniteGroup, p: int, elementary_only: bool) -> list:
    """Subgroups of a p-group of order <= p^3 by closure over element pairs."""
    if pg.order > p ** 3:
        raise NotImplementedError("p-subgroup enumeration limited to order p^3")
    e = pg.identity()
    out = {frozenset([e])}
    singles = set()
    for g in pg.elements:
        if g == e:
            continue
        if elementary_only and pg.element_order(g) != p:
            continue
        singles.add(frozenset(generate([g], ops=pg.ops).elements))
    out |= singles
    pair_seeds = sorted(singles, key=lambda s: min(s))
    for i, s1 in enumerate(pair_seeds):
        g1 = next(iter(s1))
        for s2 in pair_seeds[i + 1:]:
            g2 = next(iter(s2))
            try:
                sub = generate([g1, g2], ops=pg.ops, cap=pg.order)
            except OverflowCapError:
                continue
            if elementary_only and not (
                sub.is_abelian() and all(
                    pg.element_order(x) in (1, p) for x in sub.elements)
            ):
                continue
            out.add(frozenset(sub.elements))
    if not elementary_only:
        out.add(frozenset(pg.elements))
    else:
        if pg.is_abelian() and all(pg.element_order(x) in (1, p) for x in pg.elements):
            out.add(frozenset(pg.elements))
    return list(out)


def normal_chains(group: FiniteGroup, p: int, elementary_only: bool = False):
    """Representatives of conjugacy classes of non-empty normal chains of
    p-subgroups starting at 1, with their stabilizers.

    Returns a list of (NormalChain, stabilizer FiniteGroup); the trivial
    chain (length 0) is included with stabilizer the whole group.
    """
    subs = all_p_subgroups(group, p, elementary_only)
    subs = [s for s in subs if len(s) > 1]
    sub_index = {s: i for i, s in enumerate(subs)}
    gens = group.generators or group.elements
    # conjugation action on subgroup ids
    conj_tables = []
    for g in gens:
        gi = group.inv(g)
        table = []
        for s in subs:
            img = frozenset(group.mul(group.mul(g, x), gi) for x in s)
            table.append(sub_index[img])
        conj_tables.append(table)

    def chain_orbit(chain_ids):
        seen = {chain_ids}
        frontier = [chain_ids]
        while frontier:
            nxt = []
            for c in frontier:
                for table in conj_tables:
                    img = tuple(table[i] for i in c)
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            frontier = nxt
        return seen

    # enumerate all chains (id tuples, increasing by inclusion, all normal in top)
    contains = {}
    for i, a in enumerate(subs):
        for j, b in enumerate(subs):
            if i != j and len(a) < len(b) and a <= b:
                contains.setdefault(j, []).append(i)

    def normal_in(small, big) -> bool:
        sset = subs[small]
        for x in subs[big]:
            xi = group.inv(x)
            if any(group.mul(group.mul(x, y), xi) not in sset for y in sset):
                return False
        return True

    all_chains = []

    def extend(chain):
        all_chains.append(tuple(chain))
        top = chain[-1]
        for bigger in range(len(subs)):
            if subs[top] < subs[bigger]:
                if all(normal_in(c, bigger) for c in chain):
                    extend(chain + [bigger])

    for i in range(len(subs)):
        extend([i])

    reps = []
    covered = set()
    for c in sorted(all_chains, key=lambda c: (len(c), c)):
        if c in covered:
            continue
        covered |= chain_orbit(c)
        reps.append(c)

    out = [(NormalChain(members=()), group)]
    for c in reps:
        stab_els = []
        member_sets = [subs[i] for i in c]
        for g in group.elements:
            gi = group.inv(g)
            ok = True
            for s in member_sets:
                probe = [group.mul(group.mul(g, x), gi) for x in _gens_of_set(group, s)]
                if any(y not in s for y in probe):
                    ok = False
                    break
            if ok:
                stab_els.append(g)
        stab = _from_elements(group.ops, stab_els, name="I(sigma)")
        out.append((NormalChain(members=tuple(member_sets)), stab))
    return out


@lru_cache(maxsize=None)
def _cached_gens(key):  # pragma: no cover - placeholder for interning
    return None


def _gens_of_set(group: FiniteGroup, s: frozenset) -> list:
    """Small generating set of a subgroup given as an element set."""
    gens = []
    have = {group.identity()}
    for x in sorted(s):
        if x in have:
            continue
        gens.append(x)
        have = set(generate(gens, ops=group.ops).elements)
        if len(have) == len(s):
            break
    return gens


# ---------------------------------------------------------------------------
# coset enumeration (Todd-Coxeter via sympy)


def coset_enumeration(gen_names, relators, subgroup_words=(), cap: int = 200_000,
                      name: str = "") -> FiniteGroup:
    """Permutation group on the cosets of <subgroup_words> in the finitely
    presented group <gen_names | relators>.

    Words are strings over the generator letters, with upper case meaning
    inverse ("aBa" = a b^-1 a). Returns the image of the presented group in
    its action on cosets (the regular representation when no subgroup is
    given); the enumeration must complete within cap cosets.
    """
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    fg = free_group(", ".join(gen_names))
    F, syms = fg[0], fg[1:]
    table = {n: s for n, s in zip(gen_names, syms)}

    def word(w):
        out = F.identity
        for ch in w:
            if ch.islower():
                out = out * table[ch]
            else:
                out = out * table[ch.lower()] ** -1
        return out

    G = FpGroup(F, [word(w) for w in relators])
    H = [word(w) for w in subgroup_words]
    coset_table = G.coset_enumeration(H, max_cosets=cap)
    coset_table.standardize()
    n = len(coset_table.table)
    perms = []
    for i, s in enumerate(syms):
        col = coset_table.A.index(s)
        perms.append(tuple(row[col] for row in coset_table.table))
    ops = PermOps(n)
    return generate(perms, ops=ops, cap=cap, name=name)


# ---------------------------------------------------------------------------
# shape labels


def shape_label(group: FiniteGroup) -> str:
    n = group.order
    if n == 1:
        return "1"
    if n > 10_000:
        return f"order-{n}"
    if group.is_abelian():
        return "x".join(f"C{d}" for d in abelian_invariants(group))
    k = group.class_count()
    label = _named_shape(group, n, k)
    if label:
        return label
    return f"order-{n},{k}-classes"


def abelian_invariants(group: FiniteGroup) -> list:
    """Invariant factors d_1 | d_2 | ... of an abelian group."""
    if group.order == 1:
        return []
    # primary decomposition, then zip largest orders together
    primary = {}
    n = group.order
    for p in _prime_divisors(n):
        pel = [g for g in group.elements if _is_p_element(group, g, p)]
        sub = _from_elements(group.ops, pel)
        primary[p] = _abelian_p_invariants(sub, p)
    length = max(len(v) for v in primary.values())
    factors = []
    for i in range(length):
        d = 1
        for p, v in primary.items():
            if i < len(v):
                d *= v[i]
        factors.append(d)
    return sorted(factors)


def _abelian_p_invariants(pg: FiniteGroup, p: int) -> list:
    """Cyclic factor orders of an abelian p-group, largest first."""
    out = []
    rest = pg
    while rest.order > 1:
        g = max(rest.elements, key=rest.element_order)
        d = rest.element_order(g)
        out.append(d)
        # quotient by <g>: partition into cosets, keep transversal closure
        sub = generate([g], ops=rest.ops)
        cosets = {}
        for x in rest.elements:
            key = frozenset(rest.mul(x, s) for s in sub.elements)
            cosets.setdefault(key, x)
        if len(cosets) == 1:
            break
        ops = _QuotientOps(rest, sub)
        rest = generate(
            [ops.canon(x) for x in cosets.values()], ops=ops
        )
    return out


class _QuotientOps:
    """Group operations on cosets of a normal subgroup, cosets represented
    by a canonical (minimal) member."""

    def __init__(self, group: FiniteGroup, sub: FiniteGroup):
        self.group = group
        self.sub = sub
        self._canon = {}
        for x in group.elements:
            if x in self._canon:
                continue
            coset = sorted(group.mul(x, s) for s in sub.elements)
            rep = coset[0]
            for y in coset:
                self._canon[y] = rep

    def canon(self, x):
        return self._canon[x]

    def identity(self):
        return self._canon[self.group.identity()]

    def mul(self, a, b):
        return self._canon[self.group.mul(a, b)]

    def inv(self, a):
        return self._canon[self.group.inv(a)]


def quotient_group(group: FiniteGroup, sub: FiniteGroup) -> FiniteGroup:
    ops = _QuotientOps(group, sub)
    reps = sorted(set(ops._canon.values()))
    index = {g: i for i, g in enumerate(reps)}
    return FiniteGroup(ops=ops, elements=reps, index=index,
                       generators=[ops.canon(g) for g in (group.generators or reps)],
                       name=f"{group.name}/{sub.name}")


def _prime_divisors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _named_shape(group: FiniteGroup, n: int, k: int) -> str:
    if n == 6:
        return "S3" if k == 3 else "C6"
    orders = sorted(group.element_order(g) for g in group.elements)
    if n == 8 and k == 5:
        if orders.count(2) == 1:
            return "Q8"
        if orders.count(2) == 5:
            return "D8"
    # C_a : C_b with normal cyclic C_a and faithful cyclic action
    for p in _prime_divisors(n):
        a = _p_part(n, p)
        m = n // a
        if m == 1 or math.gcd(a, m) != 1:
            continue
        core = group.p_core(p)
        if core.order == a and _is_cyclic(core):
            comp = [g for g in group.elements if group.element_order(g) == m]
            if comp:
                label = f"C{a}" if _is_cyclic(core) else f"E{a}"
                if any(group.mul(x, c) != group.mul(c, x)
                       for c in comp[:1] for x in core.elements):
                    return f"{label}:C{m}"
    # recognizable linear groups by order + class count fingerprint
    fingerprints = {
        (120, 9): "SL(2,5)", (336, 11): "SL(2,7)", (1320, 15): "SL(2,11)",
        (2184, 17): "SL(2,13)", (480, 24): "GL(2,5)", (2016, 48): "GL(2,7)",
        (13200, 120): "GL(2,11)", (26208, 168): "GL(2,13)",
        (372000, 30): "SL(3,5)",
    }
    if (n, k) in fingerprints:
        return fingerprints[(n, k)]
    label = _pgroup_extension_shape(group, n)
    if label:
        return label
    return ""


def _is_cyclic(group: FiniteGroup) -> bool:
    return any(group.element_order(g) == group.order for g in group.elements)


def _pgroup_extension_shape(group: FiniteGroup, n: int) -> str:
    """Labels of shape <p-core>.<quotient> for solvable-ish stabilizers."""
    for p in _prime_divisors(n):
        a = _p_part(n, p)
        if a == 1 or a == n:
            continue
        core = group.p_core(p)
        if core.order == 1 or core.order == n:
            continue
        core_label = _pgroup_label(core, p)
        if not core_label:
            continue
        q = n // core.order
        quo = quotient_group(group, core)
        qk = quo.class_count()
        names = {
            (4, 4): "C4", (16, 16): "C4xC4", (120, 9): "SL(2,5)",
            (480, 24): "GL(2,5)", (336, 11): "SL(2,7)", (2016, 48): "GL(2,7)",
            (20, 5): "F20", (2, 2): "C2", (6, 6): "C6", (6, 3): "S3",
            (36, 36): "C6xC6", (12, 12): "C6xC2", (8, 8): "C4xC2",
        }
        qlabel = names.get((q, qk))
        if qlabel is None and quo.is_abelian():
            qlabel = "x".join(f"C{d}" for d in abelian_invariants(quo))
        if qlabel is None:
            qlabel = f"order-{q}"
        sep = ":" if _splits(group, core) else "."
        return f"{core_label}{sep}{qlabel}"
    return ""


def _pgroup_label(pg: FiniteGroup, p: int) -> str:
    n = pg.order
    e = 0
    while p ** (e + 1) <= n:
        e += 1
    if p ** e != n:
        return ""
    if pg.is_abelian():
        if all(pg.element_order(g) in (1, p) for g in pg.elements):
            return f"{p}^{e}" if e > 1 else f"C{p}"
        return "x".join(f"C{d}" for d in abelian_invariants(pg))
    z = pg.center()
    der = pg.derived_subgroup()
    if z.order == p and der.order == p and set(z.elements) == set(der.elements):
        return f"{p}^(1+{e-1})"
    return f"{p}^{e}-nonab"


def _splits(group: FiniteGroup, core: FiniteGroup) -> bool:
    """Crude complement search for small indices."""
    q = group.order // core.order
    if q > 600:
        return False
    cands = [g for g in group.elements if group.element_order(g) == q]
    for g in cands[:80]:
        sub = generate([g], ops=group.ops)
        if sub.order == q and sum(1 for x in sub.elements if x in core.index) == 1:
            return True
    return False
