"""Small-graph kernel.

A :class:`Graph` stores one neighbor bitmask per vertex. Python integers are
unbounded, so the same representation serves 5-vertex patterns and
100-vertex hosts.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import ContractViolation, OrderTooLarge, ParseError


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ContractViolation("adjacency length differs from n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full or row >> v & 1:
                raise ContractViolation(f"bad adjacency row for vertex {v}")
            for u in _bits(row):
                if not self.adj[u] >> v & 1:
                    raise ContractViolation(f"asymmetric edge {v}-{u}")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], label: str | None = None) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ContractViolation(f"bad edge ({u}, {v}) for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), label)

    @classmethod
    def from_rows(cls, rows: Sequence[int], label: str | None = None) -> "Graph":
        return cls(len(rows), tuple(rows), label)

    @classmethod
    def _trusted(cls, rows: Sequence[int], label: str | None = None) -> "Graph":
        # skips validation; callers guarantee symmetric loop-free rows
        g = object.__new__(cls)
        object.__setattr__(g, "n", len(rows))
        object.__setattr__(g, "adj", tuple(rows))
        object.__setattr__(g, "label", label)
        return g

    @classmethod
    def _trusted_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls._trusted(rows)

    # -- queries -----------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def degree_sequence(self):
        from .seqcore import GraphicSequence

        return GraphicSequence.sorted_from(self.degrees())

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; vertex ``vertices[j]`` becomes ``j``."""
        pos = {v: j for j, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            row = 0
            for u in _bits(self.adj[v]):
                j = pos.get(u)
                if j is not None:
                    row |= 1 << j
            rows.append(row)
        return Graph(len(vertices), tuple(rows))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with old vertex ``v`` renamed ``perm[v]``."""
        rows = [0] * self.n
        for v in range(self.n):
            row = 0
            for u in _bits(self.adj[v]):
                row |= 1 << perm[u]
            rows[perm[v]] = row
        return Graph(self.n, tuple(rows), self.label)

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(self.adj)))

    def with_label(self, label: str | None) -> "Graph":
        return Graph(self.n, self.adj, label)

    def __str__(self) -> str:
        name = self.label or to_graph6(self)
        return f"Graph({name}, n={self.n}, m={self.edge_count()})"


# -- catalog -----------------------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n, f"E{n}")


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)), f"K{n}")


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"P{n}")


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}")


def star_graph(t: int) -> Graph:
    """``K_{1,t}`` with center 0."""
    return Graph.from_edges(t + 1, [(0, i) for i in range(1, t + 1)], f"K1,{t}")


def subdivided_star(t: int) -> Graph:
    """``K_{1,t}`` with the edge ``0-t`` subdivided by the new vertex ``t+1``."""
    edges = [(0, i) for i in range(1, t)] + [(0, t + 1), (t, t + 1)]
    return Graph.from_edges(t + 2, edges, f"K1,{t}+sub")


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)], f"K{a},{b}")


def paw() -> Graph:
    """Triangle with a pendant edge."""
    return Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)], "paw")


def disjoint_union(a: Graph, b: Graph) -> Graph:
    rows = list(a.adj) + [row << a.n for row in b.adj]
    return Graph(a.n + b.n, tuple(rows))


def join(a: Graph, b: Graph) -> Graph:
    """Disjoint union of ``a`` and ``b`` plus every edge between them."""
    amask = (1 << a.n) - 1
    bmask = ((1 << b.n) - 1) << a.n
    rows = [row | bmask for row in a.adj] + [(row << a.n) | amask for row in b.adj]
    return Graph(a.n + b.n, tuple(rows))


_NAMED = re.compile(r"^(?:(\d+))?([KPCE])(\d+)(?:,(\d+))?$")


def named_graph(name: str) -> Graph:
    """Build ``K4``, ``P4``, ``C5``, ``E3`` (edgeless), ``K1,3``, ``2K2`` or ``paw``."""
    if name.lower() == "paw":
        return paw()
    m = _NAMED.match(name.strip())
    if m is None:
        raise ContractViolation(f"unknown graph name {name!r}")
    copies, kind, a, b = m.group(1), m.group(2), int(m.group(3)), m.group(4)
    if b is not None:
        if kind != "K":
            raise ContractViolation(f"unknown graph name {name!r}")
        g = complete_bipartite(a, int(b))
    else:
        g = {"K": complete_graph, "P": path_graph, "C": cycle_graph, "E": empty_graph}[kind](a)
    if copies:
        base = g
        for _ in range(int(copies) - 1):
            g = disjoint_union(g, base)
    return g.with_label(name)


# -- graph6 and edge lists ---------------------------------------------------


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: Graph) -> str:
    bits = [g.adj[i] >> j & 1 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[p : p + 6])), 2)) for p in range(0, len(bits), 6)
    )
    return _encode_n(g.n) + body


def from_graph6(text: str) -> Graph:
    data = text.strip()
    base = 0
    if data.startswith(">>graph6<<"):
        data = data[10:]
        base = 10
    if not data:
        raise ParseError("empty graph6 string", base)
    for off, ch in enumerate(data):
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"invalid graph6 byte {ch!r}", base + off)
    vals = [ord(ch) - 63 for ch in data]
    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] < 63:
        if len(vals) < 4:
            raise ParseError("truncated graph6 order", base + len(vals))
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
    else:
        if len(vals) < 8:
            raise ParseError("truncated graph6 order", base + len(vals))
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
    nbits = n * (n - 1) // 2
    need = -(-nbits // 6)
    body = vals[pos:]
    if len(body) != need:
        raise ParseError(f"expected {need} data bytes for n={n}, found {len(body)}", base + pos + min(len(body), need))
    rows = [0] * n
    bit = 0
    for j in range(1, n):
        for i in range(j):
            if body[bit // 6] >> (5 - bit % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            bit += 1
    padding = body[-1] & ((1 << (-nbits % 6)) - 1) if body and nbits % 6 else 0
    if padding:
        raise ParseError("nonzero padding bits", base + len(data) - 1)
    return Graph(n, tuple(rows))


def to_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def _parse_edge_list(text: str) -> Graph:
    n = None
    edges = []
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.split("#", 1)[0].strip()
        if line:
            parts = line.split()
            if n is None:
                if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
                    raise ParseError("expected header 'n <count>'", offset)
                n = int(parts[1])
            else:
                if len(parts) != 2 or not all(p.isdigit() for p in parts):
                    raise ParseError(f"expected 'u v', got {line!r}", offset)
                u, v = int(parts[0]), int(parts[1])
                if u == v or u >= n or v >= n:
                    raise ParseError(f"edge ({u}, {v}) invalid for n={n}", offset)
                edges.append((u, v))
        offset += len(raw.encode())
    if n is None:
        raise ParseError("missing header 'n <count>'", 0)
    return Graph.from_edges(n, edges)


def parse(text: str) -> Graph:
    """Read a graph from graph6 text or an edge list with an ``n <count>`` header."""
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty input", 0)
    first = stripped.splitlines()[0].strip()
    if first.startswith("n") and (len(first) == 1 or first[1].isspace()) or "\n" in stripped:
        return _parse_edge_list(text)
    return from_graph6(stripped)


def emit(g: Graph, fmt: str = "graph6") -> str:
    if fmt == "graph6":
        return to_graph6(g)
    if fmt == "edges":
        return to_edge_list(g)
    raise ContractViolation(f"unknown graph format {fmt!r}")


# -- independence number -----------------------------------------------------


def _max_clique(adj: Sequence[int], candidates: int) -> int:
    """Maximum clique (as a bitmask) within ``candidates``; greedy-coloring bound."""
    best = 0
    best_size = 0

    def color_order(cand: int) -> list[tuple[int, int]]:
        # sequential greedy coloring; returns (vertex, color) in increasing color
        out = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~low & ~adj[v]
                rest &= ~low
                out.append((v, color))
        return out

    def expand(clique: int, size: int, cand: int):
        nonlocal best, best_size
        order = color_order(cand)
        for v, color in reversed(order):
            if size + color <= best_size:
                return
            new_cand = cand & adj[v]
            if new_cand:
                expand(clique | 1 << v, size + 1, new_cand)
            elif size + 1 > best_size:
                best, best_size = clique | 1 << v, size + 1
            cand &= ~(1 << v)

    if candidates:
        expand(0, 0, candidates)
    return best


def max_independent_set(g: Graph) -> list[int]:
    comp = g.complement()
    return list(_bits(_max_clique(comp.adj, (1 << g.n) - 1)))


def independence_number(g: Graph) -> int:
    """Exact ``alpha(g)`` via branch and bound over cliques of the complement."""
    return len(max_independent_set(g))


# -- subgraph containment ----------------------------------------------------


def _pattern_order(p: Graph) -> list[int]:
    deg = p.degrees()
    order: list[int] = []
    placed = 0
    remaining = set(range(p.n))
    while remaining:
        v = min(remaining, key=lambda u: (-(p.adj[u] & placed).bit_count(), -deg[u], u))
        order.append(v)
        placed |= 1 << v
        remaining.remove(v)
    return order


def contains_subgraph(host: Graph, pattern: Graph) -> dict[int, int] | None:
    """An injective map carrying every pattern edge onto a host edge, or None.

    Containment is not induced. Pattern vertices are matched in decreasing
    degree order (preferring vertices adjacent to those already placed);
    candidates are filtered by degree and by the neighborhoods of the images
    of placed neighbors.
    """
    if pattern.n > host.n or pattern.edge_count() > host.edge_count():
        return None
    pdeg = pattern.degrees()
    hdeg = host.degrees()
    for a, b in zip(sorted(pdeg, reverse=True), sorted(hdeg, reverse=True)):
        if a > b:
            return None
    at_least = {}
    for d in set(pdeg):
        mask = 0
        for v in range(host.n):
            if hdeg[v] >= d:
                mask |= 1 << v
        at_least[d] = mask
    order = _pattern_order(pattern)
    back = [[u for u in order[:i] if pattern.adj[order[i]] >> u & 1] for i in range(len(order))]
    image = [0] * pattern.n

    def rec(i: int, used: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        cand = at_least[pdeg[u]] & ~used
        for w in back[i]:
            cand &= host.adj[image[w]]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            image[u] = v
            if rec(i + 1, used | low):
                return True
            cand ^= low
        return False

    if rec(0, 0):
        return {u: image[u] for u in range(pattern.n)}
    return None


def is_embedding(host: Graph, pattern: Graph, mapping: dict[int, int]) -> bool:
    if len(set(mapping.values())) != pattern.n or len(mapping) != pattern.n:
        return False
    return all(host.has_edge(mapping[u], mapping[v]) for u, v in pattern.edges())


def induced_subgraphs(g: Graph, order: int) -> Iterator[Graph]:
    """One induced subgraph per vertex subset of size ``order`` (labeled, no dedup)."""
    if not 0 <= order <= g.n:
        raise ContractViolation(f"order {order} outside 0..{g.n}")
    for subset in itertools.combinations(range(g.n), order):
        yield g.induced(subset)


# -- canonical form ----------------------------------------------------------


def _refine(g: Graph, colors: list[int]) -> list[int]:
    """Color refinement to a stable partition; colors renumbered canonically."""
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in _bits(g.adj[v])))) for v in range(g.n)
        ]
        table = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(table) == len(set(colors)):
            return new
        colors = new


def _leaf_code(g: Graph, colors: list[int]) -> tuple[tuple[int, ...], list[int]]:
    order = sorted(range(g.n), key=lambda v: colors[v])
    pos = {v: i for i, v in enumerate(order)}
    code = tuple(
        int(g.adj[order[i]] >> order[j] & 1) for j in range(1, g.n) for i in range(j)
    )
    return code, [pos[v] for v in range(g.n)]


def canonical_labeling(g: Graph) -> list[int]:
    """A permutation ``perm`` such that ``g.relabel(perm)`` is canonical.

    Individualization-refinement with twin pruning; exact for all inputs,
    fast for the small graphs used here.
    """
    best: list = [None, None]

    def search(colors: list[int]):
        colors = _refine(g, colors)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        nontrivial = [c for c in sorted(cells) if len(cells[c]) > 1]
        if not nontrivial:
            code, perm = _leaf_code(g, colors)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, perm
            return
        target = min(nontrivial, key=lambda c: (len(cells[c]), c))
        seen_twins: list[int] = []
        for v in cells[target]:
            if any(_twins(g, v, u) for u in seen_twins):
                continue
            seen_twins.append(v)
            split = [2 * c + (1 if c == target and u != v else 0) for u, c in enumerate(colors)]
            search(split)

    search([g.degree(v) for v in range(g.n)])
    return best[1] if best[1] is not None else []


def _twins(g: Graph, u: int, v: int) -> bool:
    mask = ~((1 << u) | (1 << v))
    return g.adj[u] & mask == g.adj[v] & mask


def canonical_form(g: Graph) -> Graph:
    if g.n == 0:
        return g
    return g.relabel(canonical_labeling(g)).with_label(None)


def canonical_key(g: Graph) -> str:
    """graph6 text of the canonical form; equal iff isomorphic."""
    return to_graph6(canonical_form(g))


def automorphisms(g: Graph, limit: int = 5040) -> list[tuple[int, ...]] | None:
    """All automorphisms as tuples ``perm[v]``, or None if there are more than ``limit``."""
    colors = _refine(g, [g.degree(v) for v in range(g.n)])
    order = sorted(range(g.n), key=lambda v: (colors[v], v))
    found: list[tuple[int, ...]] = []
    image = [-1] * g.n

    def rec(i: int, used: int) -> bool:
        if i == g.n:
            found.append(tuple(image))
            return len(found) <= limit
        v = order[i]
        for w in range(g.n):
            if used >> w & 1 or colors[w] != colors[v]:
                continue
            if all(g.has_edge(image[u], w) == g.has_edge(u, v) for u in order[:i]):
                image[v] = w
                if not rec(i + 1, used | 1 << w):
                    return False
        image[v] = -1
        return True

    if not rec(0, 0):
        return None
    return found


# -- subgraph universe -------------------------------------------------------

MAX_SUBGRAPH_ORDER = 10


def _strip_isolated(g: Graph) -> Graph:
    keep = [v for v in range(g.n) if g.adj[v]]
    return g.induced(keep)


def enumerate_subgraphs_up_to_iso(g: Graph, max_order: int | None = None) -> Iterator[Graph]:
    """Every subgraph of ``g`` with at least one edge, one per isomorphism class.

    Graphs without isolated vertices are grown edge by edge (each kept only if
    it still embeds in ``g``); each is then also emitted padded with isolated
    vertices up to ``max_order``. Output is ordered by edge count, then order,
    then canonical code.
    """
    if max_order is None:
        max_order = g.n
    if g.n > MAX_SUBGRAPH_ORDER:
        raise OrderTooLarge(f"subgraph enumeration is capped at {MAX_SUBGRAPH_ORDER} vertices")
    if max_order > g.n:
        raise ContractViolation(f"max_order {max_order} exceeds n = {g.n}")
    if g.edge_count() == 0 or max_order < 2:
        return
    level = {canonical_key(complete_graph(2)): complete_graph(2).with_label(None)}
    while level:
        for key in sorted(level, key=lambda s: (level[s].n, s)):
            base = level[key]
            yield base
            for extra in range(1, max_order - base.n + 1):
                yield disjoint_union(base, empty_graph(extra)).with_label(None)
        nxt: dict[str, Graph] = {}
        for base in level.values():
            for grown in _grow(base, max_order):
                key = canonical_key(grown)
                if key in nxt:
                    continue
                if contains_subgraph(g, grown) is not None:
                    nxt[key] = canonical_form(grown)
        level = nxt


def _grow(f: Graph, max_order: int) -> Iterator[Graph]:
    n = f.n
    for u in range(n):
        for v in range(u + 1, n):
            if not f.has_edge(u, v):
                yield Graph.from_edges(n, f.edges() + [(u, v)])
    if n + 1 <= max_order:
        for u in range(n):
            yield Graph.from_edges(n + 1, f.edges() + [(u, n)])
    if n + 2 <= max_order:
        yield Graph.from_edges(n + 2, f.edges() + [(n, n + 1)])


def graphs_up_to_iso(n: int) -> list[Graph]:
    """One canonical graph per isomorphism class on ``n`` vertices (``n <= 7``)."""
    if n > 7:
        raise OrderTooLarge("exhaustive graph enumeration is capped at 7 vertices")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    seen: dict[str, Graph] = {}
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        for e, (u, v) in enumerate(pairs):
            if mask >> e & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        g = Graph._trusted(rows)
        key = canonical_key(g)
        if key not in seen:
            seen[key] = from_graph6(key)
    return [seen[k] for k in sorted(seen, key=lambda s: (seen[s].edge_count(), s))]
