"""The ∇/σ̃ profile of a pattern graph and its extremal lower-bound sequences."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    ContractViolation,
    EmptyPattern,
    IndexOutOfRange,
    NotPotentially,
    NTooSmall,
)
from .graphkit import Graph, complete_graph, contains_subgraph, empty_graph, independence_number, join
from .seqcore import GraphicSequence, SequenceLike, as_sequence, havel_hakimi_edges, is_graphic


@dataclass(frozen=True)
class HProfile:
    """Per-pattern table.

    ``nabla[i]`` is the least maximum degree over ``i``-vertex induced
    subgraphs, ``sigma_tilde_i[i] = 2(k-i) + nabla[i] - 1``, and
    ``sigma_tilde`` is the largest of those over ``alpha+1 <= i <= k``.
    ``witness[i]`` is a vertex subset achieving ``nabla[i]``.
    """

    k: int
    alpha: int
    nabla: dict[int, int]
    sigma_tilde_i: dict[int, int]
    sigma_tilde: int
    argmax_i: tuple[int, ...]
    witness: dict[int, tuple[int, ...]]

    @property
    def indices(self) -> range:
        return range(self.alpha + 1, self.k + 1)

    def rows(self) -> list[tuple[int, int, int]]:
        return [(i, self.nabla[i], self.sigma_tilde_i[i]) for i in self.indices]


def profile(h: Graph) -> HProfile:
    """Exact profile of ``h`` by exhausting induced subgraphs of each order."""
    if h.edge_count() == 0:
        raise EmptyPattern("the pattern needs at least one edge")
    k = h.n
    alpha = independence_number(h)
    nabla: dict[int, int] = {}
    witness: dict[int, tuple[int, ...]] = {}
    for i in range(alpha + 1, k + 1):
        best = None
        for subset in itertools.combinations(range(k), i):
            d = h.induced(subset).max_degree()
            if best is None or d < best:
                best, witness[i] = d, subset
        nabla[i] = best
    st = {i: 2 * (k - i) + nabla[i] - 1 for i in nabla}
    top = max(st.values())
    return HProfile(k, alpha, nabla, st, top, tuple(i for i in st if st[i] == top), witness)


@dataclass(frozen=True)
class ExtremalSpec:
    """``((n-1)^{k-i}, (k-i+nabla_i-1)^{n-k+i})``, last term lowered by one if ``parity_adjusted``."""

    i: int
    n: int
    sequence: GraphicSequence
    parity_adjusted: bool
    clique_part: int
    regular_degree: int


def extremal_sequence(h: Graph, i: int, n: int, prof: HProfile | None = None) -> ExtremalSpec:
    prof = prof or profile(h)
    if i not in prof.nabla:
        raise IndexOutOfRange(f"i={i} outside {prof.alpha + 1}..{prof.k}")
    k = prof.k
    nab = prof.nabla[i]
    clique = k - i
    tail = n - k + i
    if tail < nab:
        raise NTooSmall(f"need n - k + i >= nabla_i = {nab}, got {tail}")
    value = clique + nab - 1
    adjusted = tail % 2 == 1 and (nab - 1) % 2 == 1
    terms = [n - 1] * clique + [value] * tail
    if adjusted:
        if value < 1:
            raise NTooSmall("parity fix would produce a negative term")
        terms[-1] -= 1
    seq = GraphicSequence(tuple(terms))
    if not is_graphic(seq):  # pragma: no cover - guaranteed by construction
        raise ContractViolation(f"extremal sequence {seq} is not graphic")
    return ExtremalSpec(i, n, seq, adjusted, clique, nab - 1)


def circulant_regular(m: int, r: int) -> Graph:
    """An ``r``-regular circulant on ``m`` vertices (needs ``m > r`` and ``m*r`` even)."""
    if r >= m or (m * r) % 2:
        raise ContractViolation(f"no {r}-regular graph on {m} vertices")
    edges = set()
    for v in range(m):
        for s in range(1, r // 2 + 1):
            u = (v + s) % m
            edges.add((min(u, v), max(u, v)))
        if r % 2:
            u = (v + m // 2) % m
            edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(m, sorted(edges))


def extremal_realization(spec: ExtremalSpec, h: Graph | None = None) -> Graph:
    """``K_{k-i}`` joined to a graph of maximum degree ``nabla_i - 1``.

    The clique occupies vertices ``0..k-i-1``. The second part is a circulant
    regular graph, or a Havel–Hakimi realization of the near-regular sequence
    when the parity fix applies. ``h`` is accepted for symmetry with the other
    constructions and is not needed.
    """
    m = spec.n - spec.clique_part
    r = spec.regular_degree
    if spec.parity_adjusted:
        demand = [r] * (m - 1) + [r - 1]
        low = Graph.from_edges(m, havel_hakimi_edges(demand))
    else:
        low = circulant_regular(m, r)
    g = join(complete_graph(spec.clique_part), low)
    return g.with_label(f"extremal_i{spec.i}_n{spec.n}")


def valid_indices(h: Graph, n: int, prof: HProfile | None = None) -> list[int]:
    prof = prof or profile(h)
    out = []
    for i in prof.indices:
        try:
            extremal_sequence(h, i, n, prof)
        except NTooSmall:
            continue
        out.append(i)
    return out


def lower_bound(h: Graph, n: int, prof: HProfile | None = None) -> int:
    """``max_i sigma(pi_i(H, n)) + 2`` over the indices valid at this ``n``."""
    prof = prof or profile(h)
    idx = valid_indices(h, n, prof)
    if not idx:
        raise NTooSmall(f"no extremal sequence is defined at n={n}")
    return max(extremal_sequence(h, i, n, prof).sequence.total for i in idx) + 2


def yin_li_check(seq: SequenceLike, k: int) -> bool:
    """``d_k >= k-1`` and ``d_i >= 2(k-1)-i`` for ``i < k``.

    A sufficient certificate that a graphic sequence is potentially
    ``K_k``-graphic.
    """
    s = as_sequence(seq)
    if s.n < k:
        raise ContractViolation(f"need n >= k, got n={s.n}, k={k}")
    if s.terms[k - 1] < k - 1:
        return False
    return all(s.terms[i - 1] >= 2 * (k - 1) - i for i in range(1, k))


# -- split-graph canonicalization ---------------------------------------------


def split_target_edges(r: int, s: int) -> list[tuple[int, int]]:
    pairs = [(a, b) for a in range(r) for b in range(a + 1, r)]
    pairs += [(a, b) for a in range(r) for b in range(r, r + s)]
    return pairs


def degree_order(g: Graph) -> list[int]:
    """Vertices by decreasing degree, ties by index."""
    deg = g.degrees()
    return sorted(range(g.n), key=lambda v: (-deg[v], v))


def is_split_canonical(g: Graph, r: int, s: int) -> bool:
    order = degree_order(g)
    return all(g.has_edge(order[a], order[b]) for a, b in split_target_edges(r, s))


def _try_add_edge(rows: list[int], u: int, v: int, locked: set[tuple[int, int]]) -> bool:
    """Insert ``uv`` by one 2-switch ``ux, vy -> uv, xy`` avoiding locked edges."""
    for x in _iter_bits(rows[u] & ~(1 << v)):
        if (min(u, x), max(u, x)) in locked:
            continue
        for y in _iter_bits(rows[v] & ~(1 << u) & ~(1 << x) & ~rows[x]):
            if (min(v, y), max(v, y)) in locked:
                continue
            _switch(rows, [(u, x), (v, y)], [(u, v), (x, y)])
            return True
    return False


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _switch(rows: list[int], remove, add) -> None:
    for a, b in remove:
        rows[a] &= ~(1 << b)
        rows[b] &= ~(1 << a)
    for a, b in add:
        rows[a] |= 1 << b
        rows[b] |= 1 << a


def split_canonicalize(g: Graph, r: int, s: int, max_iter: int | None = None) -> Graph:
    """Move a ``K_r ∨ co-K_s`` onto the ``r`` highest-degree and next ``s`` vertices.

    Works by 2-switches that create a missing target edge without touching
    target edges already present. If that greedy loop stalls, a realization
    with the split graph in place is built directly and ``g`` is walked to it
    along a 2-switch path, so the result is always reachable from ``g`` by
    degree-preserving switches. Raises :class:`NotPotentially` if ``g`` has no
    ``K_r ∨ co-K_s`` subgraph.
    """
    pattern = join(complete_graph(r), empty_graph(s))
    if contains_subgraph(g, pattern) is None:
        raise NotPotentially(f"graph has no K_{r} v co-K_{s} subgraph")
    order = degree_order(g)
    targets = [(order[a], order[b]) for a, b in split_target_edges(r, s)]
    rows = list(g.adj)
    locked: set[tuple[int, int]] = set()
    limit = max_iter if max_iter is not None else 4 * len(targets) + 4
    steps = 0
    stalled = False
    while steps < limit:
        missing = [(u, v) for u, v in targets if not rows[u] >> v & 1]
        locked = {(min(u, v), max(u, v)) for u, v in targets if rows[u] >> v & 1}
        if not missing:
            break
        if not any(_try_add_edge(rows, u, v, locked) for u, v in missing):
            stalled = True
            break
        steps += 1
    else:
        stalled = any(not rows[u] >> v & 1 for u, v in targets)
    out = Graph(g.n, tuple(rows), g.label)
    if not stalled:
        return out
    from .oracle import realize_with_placement
    from .switches import two_switch_path, apply_switches

    placement = {j: order[j] for j in range(r + s)}
    target = realize_with_placement(g.degrees(), pattern, placement)
    if target is None:  # pragma: no cover - a split subgraph can always be moved to the top vertices
        raise NotPotentially("no realization with the split graph on the top vertices")
    return apply_switches(g, two_switch_path(g, target)).with_label(g.label)
