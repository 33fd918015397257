"""Degree-preserving edge switches and paths between realizations."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation
from .graphkit import Graph

Pair = tuple[int, int]


@dataclass(frozen=True)
class Switch:
    """Remove the edges in ``remove`` and add the non-edges in ``add``."""

    remove: tuple[Pair, ...]
    add: tuple[Pair, ...]

    def inverse(self) -> "Switch":
        return Switch(self.add, self.remove)


def apply_switch_rows(rows: list[int], sw: Switch, check: bool = True) -> None:
    if check:
        touched = {}
        for a, b in sw.remove:
            if not rows[a] >> b & 1:
                raise ContractViolation(f"switch removes non-edge {a}-{b}")
            touched[a] = touched.get(a, 0) - 1
            touched[b] = touched.get(b, 0) - 1
        for a, b in sw.add:
            if a == b or rows[a] >> b & 1:
                raise ContractViolation(f"switch adds existing edge or loop {a}-{b}")
            touched[a] = touched.get(a, 0) + 1
            touched[b] = touched.get(b, 0) + 1
        if any(touched.values()):
            raise ContractViolation(f"switch {sw} changes degrees")
        keys = [tuple(sorted(p)) for p in sw.remove + sw.add]
        if len(set(keys)) != len(keys):
            raise ContractViolation(f"switch {sw} repeats a pair")
    for a, b in sw.remove:
        rows[a] &= ~(1 << b)
        rows[b] &= ~(1 << a)
    for a, b in sw.add:
        rows[a] |= 1 << b
        rows[b] |= 1 << a


def apply_switches(g: Graph, switches: list[Switch]) -> Graph:
    rows = list(g.adj)
    for sw in switches:
        apply_switch_rows(rows, sw)
    return Graph(g.n, tuple(rows), g.label)


def _canonical_switches(g: Graph) -> list[Switch]:
    """2-switches taking ``g`` to a canonical realization of its degree list.

    Vertices are processed by decreasing degree; each is made adjacent to the
    remaining vertices of largest residual degree. Two graphs with the same
    degree list reach the same canonical graph.
    """
    n = g.n
    rows = list(g.adj)
    deg = g.degrees()
    order = sorted(range(n), key=lambda v: (-deg[v], v))
    rank = {v: i for i, v in enumerate(order)}
    out: list[Switch] = []
    alive = (1 << n) - 1
    for v in order:
        # residual degrees count edges to v as well; they agree across realizations
        res = {u: (rows[u] & alive).bit_count() for u in order if alive >> u & 1}
        alive &= ~(1 << v)
        rest = [u for u in order if alive >> u & 1]
        want_n = (rows[v] & alive).bit_count()
        want = sorted(rest, key=lambda u: (-res[u], rank[u]))[:want_n]
        want_mask = 0
        for u in want:
            want_mask |= 1 << u
        while True:
            extra = rows[v] & alive & ~want_mask
            if not extra:
                break
            y = (extra & -extra).bit_length() - 1
            lacking = want_mask & ~rows[v]
            x = (lacking & -lacking).bit_length() - 1
            cand = rows[x] & alive & ~rows[y] & ~(1 << y)
            if not cand:  # pragma: no cover - excluded by the counting argument
                raise ContractViolation("no exchange partner while canonicalizing")
            z = (cand & -cand).bit_length() - 1
            sw = Switch(((v, y), (x, z)), ((v, x), (y, z)))
            apply_switch_rows(rows, sw)
            out.append(sw)
    return out


def two_switch_path(g: Graph, target: Graph) -> list[Switch]:
    """2-switches transforming ``g`` into ``target`` (same labeled degrees required)."""
    if g.n != target.n or g.degrees() != target.degrees():
        raise ContractViolation("graphs do not share a labeled degree list")
    forward = _canonical_switches(g)
    back = _canonical_switches(target)
    return forward + [sw.inverse() for sw in reversed(back)]


def random_switches(g: Graph, rng, count: int) -> Graph:
    """Apply up to ``count`` uniformly drawn valid 2-switches (a degree-preserving shuffle)."""
    rows = list(g.adj)
    edges = g.edges()
    if len(edges) < 2:
        return g
    done = 0
    for _ in range(20 * count):
        if done == count:
            break
        i, j = rng.sample(range(len(edges)), 2)
        (a, b), (c, d) = edges[i], edges[j]
        if rng.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4 or rows[a] >> c & 1 or rows[b] >> d & 1:
            continue
        apply_switch_rows(rows, Switch(((a, b), (c, d)), ((a, c), (b, d))), check=False)
        edges[i], edges[j] = (min(a, c), max(a, c)), (min(b, d), max(b, d))
        done += 1
    return Graph(g.n, tuple(rows), g.label)
