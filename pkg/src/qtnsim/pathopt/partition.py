"""Hypergraph bi-partitioning for contraction-tree construction.

Small instances (<= 10 vertices) are solved by exhaustive enumeration; larger
ones by a multilevel scheme: heavy-edge matching coarsening, a greedy
balanced initial assignment, and Fiduccia-Mattheyses-style refinement.

The objective is  cut_weight + balance_weight * |s0 - s1|  where s0/s1 sum
the weights of the parent's outer indices present on each side: the parent
node's output indices should be split as evenly as possible between the two
children, since they determine the children's tensor sizes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .hypergraph import Hypergraph

_EXHAUSTIVE_LIMIT = 10
_COARSEST_SIZE = 16


@dataclass
class PartitionerConfig:
    imbalance: float = 0.03
    max_repeats: int = 128
    max_time: float = 120.0
    search_parallel: int = 1
    seed: int = 0
    balance_weight: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.imbalance < 0.5):
            raise ValueError(f"imbalance must be in (0, 0.5), got {self.imbalance}")
        if self.max_repeats < 1:
            raise ValueError("max_repeats must be >= 1")


@dataclass
class _SubProblem:
    """A sub-hypergraph restricted to one vertex subset."""

    vertices: tuple[int, ...]
    # edge id -> (weight, pins restricted to the subset)
    cut_edges: dict[int, tuple[float, tuple[int, ...]]]
    # edge id -> (weight, pins) for parent-outer edges (balance term)
    outer_edges: dict[int, tuple[float, tuple[int, ...]]]


def _restrict(h: Hypergraph, vertices, parent_outer) -> _SubProblem:
    vset = set(vertices)
    cut_edges = {}
    outer_edges = {}
    for eid, edge in h.edges.items():
        pins = tuple(v for v in edge.pins if v in vset)
        if not pins:
            continue
        if len(pins) >= 2:
            cut_edges[eid] = (edge.weight, pins)
        if eid in parent_outer:
            outer_edges[eid] = (edge.weight, pins)
    return _SubProblem(tuple(sorted(vertices)), cut_edges, outer_edges)


def _objective(sub: _SubProblem, side: dict[int, int], lam: float) -> float:
    cut = 0.0
    for w, pins in sub.cut_edges.values():
        sides = {side[v] for v in pins}
        if len(sides) == 2:
            cut += w
    s = [0.0, 0.0]
    for w, pins in sub.outer_edges.values():
        sides = {side[v] for v in pins}
        for k in sides:
            s[k] += w
    return cut + lam * abs(s[0] - s[1])


def _exhaustive(sub: _SubProblem, eps: float, lam: float,
                rng: random.Random) -> tuple[tuple[int, ...], tuple[int, ...]]:
    verts = sub.vertices
    k = len(verts)
    cap = math.ceil((1 + eps) * k / 2)
    best: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    best_obj = math.inf
    for mask in range(1, 1 << (k - 1)):
        part1 = tuple(verts[i + 1] for i in range(k - 1) if mask >> i & 1)
        if not (k - len(part1) <= cap and len(part1) <= cap):
            continue
        part0 = tuple(v for v in verts if v not in part1)
        side = {v: 0 for v in part0}
        side.update({v: 1 for v in part1})
        obj = _objective(sub, side, lam)
        if obj < best_obj - 1e-12:
            best_obj, best = obj, [(part0, part1)]
        elif obj <= best_obj + 1e-12:
            best.append((part0, part1))
    return best[rng.randrange(len(best))] if len(best) > 1 else best[0]


# --- multilevel path ---

@dataclass
class _Level:
    verts: list[int]                    # 0..m-1
    weight: list[int]                   # original vertex count per supervertex
    edges: list[tuple[float, tuple[int, ...], bool]]   # (weight, pins, outer)
    members: list[list[int]]            # supervertex -> original vertices


def _build_level(sub: _SubProblem) -> _Level:
    index = {v: i for i, v in enumerate(sub.vertices)}
    edges = []
    outer_ids = set(sub.outer_edges)
    seen = set()
    for eid, (w, pins) in sub.cut_edges.items():
        edges.append((w, tuple(index[v] for v in pins), eid in outer_ids))
        seen.add(eid)
    for eid, (w, pins) in sub.outer_edges.items():
        if eid not in seen:
            edges.append((w, tuple(index[v] for v in pins), True))
    n = len(sub.vertices)
    return _Level(list(range(n)), [1] * n, edges,
                  [[v] for v in sub.vertices])


def _coarsen(level: _Level, rng: random.Random) -> _Level | None:
    n = len(level.verts)
    score: dict[int, dict[int, float]] = {v: {} for v in level.verts}
    for w, pins, _ in level.edges:
        if len(pins) < 2:
            continue
        share = w / (len(pins) - 1)
        for i, u in enumerate(pins):
            for v in pins[i + 1:]:
                score[u][v] = score[u].get(v, 0.0) + share
                score[v][u] = score[v].get(u, 0.0) + share
    order = list(level.verts)
    rng.shuffle(order)
    match: dict[int, int] = {}
    for v in order:
        if v in match:
            continue
        cands = [(s, u) for u, s in score[v].items() if u not in match]
        if not cands:
            continue
        best = max(cands, key=lambda t: (t[0], -t[1]))[1]
        match[v] = best
        match[best] = v
    merged = len(match) // 2
    if merged < max(1, n // 20):
        return None
    remap: dict[int, int] = {}
    weight: list[int] = []
    members: list[list[int]] = []
    for v in level.verts:
        if v in remap:
            continue
        new = len(weight)
        remap[v] = new
        group = [v] + ([match[v]] if v in match else [])
        if v in match:
            remap[match[v]] = new
        weight.append(sum(level.weight[g] for g in group))
        members.append([m for g in group for m in level.members[g]])
    edges = []
    for w, pins, outer in level.edges:
        new_pins = tuple(sorted({remap[p] for p in pins}))
        if len(new_pins) >= 2 or outer:
            edges.append((w, new_pins, outer))
    return _Level(list(range(len(weight))), weight, edges, members)


class _FMState:
    def __init__(self, level: _Level, side: list[int], cap: int, lam: float):
        self.level = level
        self.side = side
        self.cap = cap
        self.lam = lam
        self.part_weight = [0, 0]
        for v in level.verts:
            self.part_weight[side[v]] += level.weight[v]
        self.counts = []            # per edge: [pins on side 0, pins on side 1]
        self.vertex_edges: list[list[int]] = [[] for _ in level.verts]
        for ei, (w, pins, outer) in enumerate(level.edges):
            c = [0, 0]
            for p in pins:
                c[side[p]] += 1
                self.vertex_edges[p].append(ei)
            self.counts.append(c)
        self.cut = sum(w for (w, pins, _), c in zip(level.edges, self.counts)
                       if c[0] > 0 and c[1] > 0)
        self.s = [0.0, 0.0]
        for (w, pins, outer), c in zip(level.edges, self.counts):
            if outer:
                for k in (0, 1):
                    if c[k] > 0:
                        self.s[k] += w

    def objective(self) -> float:
        return self.cut + self.lam * abs(self.s[0] - self.s[1])

    def move_delta(self, v: int) -> float:
        """Objective change if v switches sides (negative = improvement)."""
        a = self.side[v]
        b = 1 - a
        d_cut = 0.0
        s0, s1 = self.s
        for ei in self.vertex_edges[v]:
            w, pins, outer = self.level.edges[ei]
            c = self.counts[ei]
            was_cut = c[0] > 0 and c[1] > 0
            ca, cb = c[a] - 1, c[b] + 1
            now_cut = ca > 0 and cb > 0
            if len(pins) >= 2:
                d_cut += (w if now_cut else 0.0) - (w if was_cut else 0.0)
            if outer:
                if c[a] == 1:          # presence on side a disappears
                    if a == 0:
                        s0 -= w
                    else:
                        s1 -= w
                if c[b] == 0:          # presence on side b appears
                    if b == 0:
                        s0 += w
                    else:
                        s1 += w
        d_bal = self.lam * (abs(s0 - s1) - abs(self.s[0] - self.s[1]))
        return d_cut + d_bal

    def apply(self, v: int) -> None:
        a = self.side[v]
        b = 1 - a
        for ei in self.vertex_edges[v]:
            w, pins, outer = self.level.edges[ei]
            c = self.counts[ei]
            was_cut = c[0] > 0 and c[1] > 0
            if outer and c[a] == 1:
                self.s[a] -= w
            if outer and c[b] == 0:
                self.s[b] += w
            c[a] -= 1
            c[b] += 1
            if len(pins) >= 2:
                now_cut = c[0] > 0 and c[1] > 0
                if was_cut != now_cut:
                    self.cut += w if now_cut else -w
        self.side[v] = b
        self.part_weight[a] -= self.level.weight[v]
        self.part_weight[b] += self.level.weight[v]

    def can_move(self, v: int) -> bool:
        b = 1 - self.side[v]
        return self.part_weight[b] + self.level.weight[v] <= self.cap


def _fm_refine(level: _Level, side: list[int], cap: int, lam: float,
               max_passes: int = 4) -> None:
    state = _FMState(level, side, cap, lam)
    for _ in range(max_passes):
        locked: set[int] = set()
        trail: list[int] = []
        obj = state.objective()
        best_obj = obj
        best_len = 0
        while True:
            best_v, best_d = None, math.inf
            for v in level.verts:
                if v in locked or not state.can_move(v):
                    continue
                d = state.move_delta(v)
                if d < best_d - 1e-12 or (abs(d - best_d) <= 1e-12
                                          and (best_v is None or v < best_v)):
                    best_v, best_d = v, d
            if best_v is None:
                break
            state.apply(best_v)
            locked.add(best_v)
            trail.append(best_v)
            obj += best_d
            if obj < best_obj - 1e-12:
                best_obj = obj
                best_len = len(trail)
        for v in reversed(trail[best_len:]):
            state.apply(v)  # roll back past the best prefix
        if best_len == 0:
            break


def _initial_partition(level: _Level, cap: int, rng: random.Random) -> list[int]:
    order = sorted(level.verts, key=lambda v: (-level.weight[v], v))
    side = [0] * len(level.verts)
    weights = [0, 0]
    for v in order:
        prefer = 0 if weights[0] < weights[1] else 1 if weights[1] < weights[0] \
            else rng.randrange(2)
        if weights[prefer] + level.weight[v] > cap:
            prefer = 1 - prefer
        side[v] = prefer
        weights[prefer] += level.weight[v]
    return side


def _multilevel(sub: _SubProblem, eps: float, lam: float,
                rng: random.Random) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = len(sub.vertices)
    cap = math.ceil((1 + eps) * n / 2)
    levels = [_build_level(sub)]
    while len(levels[-1].verts) > _COARSEST_SIZE:
        nxt = _coarsen(levels[-1], rng)
        if nxt is None:
            break
        levels.append(nxt)

    side = _initial_partition(levels[-1], cap, rng)
    _fm_refine(levels[-1], side, cap, lam)
    for fine, coarse in zip(reversed(levels[:-1]), reversed(levels[1:])):
        back = {v: i for i, group in enumerate(coarse.members) for v in group}
        side = [side[back[group[0]]] for group in fine.members]
        _fm_refine(fine, side, cap, lam)

    part0 = tuple(v for i, v in enumerate(sub.vertices) if side[i] == 0)
    part1 = tuple(v for i, v in enumerate(sub.vertices) if side[i] == 1)
    if not part0 or not part1:
        # balance cap always permits 1/(n-1); force the lightest vertex over
        verts = sorted(sub.vertices)
        return (verts[:1], tuple(verts[1:])) if not part0 else \
            (tuple(verts[:-1]), verts[-1:])
    return part0, part1


def bipartition(h: Hypergraph, vertices=None, parent_outer=None,
                eps: float = 0.03, lam: float = 1.0,
                rng: random.Random | int = 0):
    """Split a vertex subset into two non-empty, balanced parts minimizing
    cut weight plus the parent-outer-index imbalance."""
    if vertices is None:
        vertices = h.vertices
    if parent_outer is None:
        parent_outer = h.open_edges()
    if isinstance(rng, int):
        rng = random.Random(rng)
    vertices = tuple(sorted(vertices))
    if len(vertices) < 2:
        raise ValueError("need at least 2 vertices to bipartition")
    if len(vertices) == 2:
        return (vertices[0],), (vertices[1],)
    sub = _restrict(h, vertices, set(parent_outer))
    if len(vertices) <= _EXHAUSTIVE_LIMIT:
        return _exhaustive(sub, eps, lam, rng)
    return _multilevel(sub, eps, lam, rng)
