"""Orbits and stabilizers of explicit group actions on finite point sets."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .groups import FiniteGroup, from_elements, shape_label


class ActionError(ValueError):
    pass


@dataclass
class Orbit:
    representative: object
    size: int
    stabilizer: FiniteGroup

    @property
    def shape(self) -> str:
        return shape_label(self.stabilizer)


@dataclass
class OrbitCensus:
    orbits: list

    def total_points(self) -> int:
        return sum(o.size for o in self.orbits)

    def shape_multiset(self) -> dict:
        out = {}
        for o in self.orbits:
            out[o.shape] = out.get(o.shape, 0) + 1
        return out

    def by_stabilizer_order(self) -> dict:
        out = {}
        for o in self.orbits:
            out[o.stabilizer.order] = out.get(o.stabilizer.order, 0) + 1
        return out


class GroupAction:
    """A FiniteGroup acting on explicit points via act(point, g) -> point."""

    def __init__(self, group: FiniteGroup, points, act, check: bool = True,
                 rng_seed: int = 7):
        self.group = group
        self.points = list(points)
        self.act = act
        if check:
            self._spot_check(rng_seed)

    def _spot_check(self, seed: int):
        if not self.points:
            return
        e = self.group.identity()
        rng = random.Random(seed)
        for _ in range(min(16, len(self.points))):
            v = rng.choice(self.points)
            if self.act(v, e) != v:
                raise ActionError("identity moves a point")
        for _ in range(64):
            v = rng.choice(self.points)
            g = rng.choice(self.group.elements)
            h = rng.choice(self.group.elements)
            if self.act(self.act(v, g), h) != self.act(v, self.group.mul(g, h)):
                raise ActionError("action is not compatible with multiplication")

    def orbit_of(self, v) -> set:
        gens = self.group.generators or self.group.elements
        seen = {v}
        frontier = [v]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.act(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def stabilizer_of(self, v) -> FiniteGroup:
        els = [g for g in self.group.elements if self.act(v, g) == v]
        return from_elements(self.group.ops, els, name="Stab")

    def orbits(self) -> OrbitCensus:
        remaining = set(self.points)
        out = []
        # deterministic representatives: least point key per orbit
        for v in self.points:
            if v not in remaining:
                continue
            orb = self.orbit_of(v)
            rep = min(orb)
            remaining -= orb
            out.append(Orbit(representative=rep, size=len(orb),
                             stabilizer=self.stabilizer_of(rep)))
        total = sum(o.size for o in out)
        if total != len(self.points):
            raise ActionError("orbit sizes do not partition the point set")
        for o in out:
            if o.size * o.stabilizer.order != self.group.order:
                raise ActionError("orbit-stabilizer mismatch")
        return OrbitCensus(orbits=out)


def orbit_count_by_stabilizer(action: GroupAction, sub: FiniteGroup) -> int:
    """Number of orbits whose point stabilizers are conjugates of sub,
    computed two ways: directly, and as |A| |H| / |N_G(H)| where A is the
    set of points with stabilizer exactly sub. Both must agree."""
    census = action.orbits()
    subset = frozenset(sub.elements)
    direct = 0
    for o in census.orbits:
        if o.stabilizer.order != sub.order:
            continue
        if _conjugate_in(action.group, frozenset(o.stabilizer.elements), subset):
            direct += 1
    a_count = sum(
        1 for v in action.points
        if frozenset(action.stabilizer_of(v).elements) == subset
    )
    norm = action.group.normalizer(sub)
    formula, rem = divmod(a_count * sub.order, norm.order)
    if rem or formula != direct:
        raise ActionError(
            f"counting identity fails: direct={direct}, |A||H|/|N|={a_count * sub.order}/{norm.order}"
        )
    return direct


def _conjugate_in(group: FiniteGroup, s1: frozenset, s2: frozenset) -> bool:
    if s1 == s2:
        return True
    for g in group.elements:
        gi = group.inv(g)
        if all(group.mul(group.mul(g, x), gi) in s2 for x in s1):
            return True
    return False


def quotient_orbit_transfer(action: GroupAction, normal_sub: FiniteGroup):
    """Census of V under G next to the census of V/H under the H-coset
    classes, for H normal and fixed-point-free on V; stabilizer orders must
    match orbit by orbit."""
    group = action.group
    if not group.is_normal(normal_sub):
        raise ActionError("subgroup is not normal")
    nontrivial = [h for h in normal_sub.elements if h != group.identity()]
    for v in action.points:
        if any(action.act(v, h) == v for h in nontrivial):
            raise ActionError("normal subgroup has a fixed point")

    census = action.orbits()

    # H-orbit blocks as quotient points
    block_of = {}
    blocks = []
    for v in action.points:
        if v in block_of:
            continue
        blk = frozenset(
            _orbit_under(action, v, normal_sub)
        )
        for x in blk:
            block_of[x] = blk
        blocks.append(blk)

    def act_block(blk, g):
        return block_of[action.act(next(iter(blk)), g)]

    qaction = GroupAction(group, blocks, act_block, check=False)
    qcensus = qaction.orbits()

    pairs = []
    used = set()
    for o in census.orbits:
        target = block_of[o.representative]
        match = None
        for i, q in enumerate(qcensus.orbits):
            if i in used:
                continue
            if target in qaction.orbit_of(q.representative):
                match = i
                break
        if match is None:
            raise ActionError("no matching quotient orbit")
        used.add(match)
        pairs.append((o, qcensus.orbits[match]))
    for o, q in pairs:
        # the block stabilizer in G is the preimage of Stab_{G/H}(block),
        # which matches Stab_G(v) x H when H is fixed-point-free
        if q.stabilizer.order != o.stabilizer.order * normal_sub.order:
            raise ActionError("stabilizer transfer failed")
    return census, qcensus, pairs


def _orbit_under(action: GroupAction, v, sub: FiniteGroup) -> set:
    seen = {v}
    frontier = [v]
    gens = sub.generators or sub.elements
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = action.act(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen
