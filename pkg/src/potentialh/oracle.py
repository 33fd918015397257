"""Exact desk-scale decisions: is a sequence potentially H-graphic, and sigma(H, n)."""

from __future__ import annotations

import json
import os
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CapExceeded, EmptyPattern, NonGraphic, TimeBudgetExceeded
from .graphkit import Graph, canonical_key, from_graph6, to_graph6
from .seqcore import (
    GraphicSequence,
    SequenceLike,
    as_sequence,
    degree_sufficient,
    enumerate_graphic,
    format_terms,
    graphic_terms,
    havel_hakimi_edges,
    is_graphic,
    realize,
)

DEFAULT_CAP = 12


@dataclass(frozen=True)
class PotentialVerdict:
    decision: bool
    witness: Graph | None = None
    nodes_explored: int = 0
    note: str = ""


class _Counter:
    __slots__ = ("nodes",)

    def __init__(self):
        self.nodes = 0


class _Pattern:
    """Per-pattern data reused across many decisions."""

    def __init__(self, h: Graph):
        self.graph = h
        self.edges = h.edges()
        self.degrees = h.degrees()
        self.order = sorted(range(h.n), key=lambda u: (-self.degrees[u], u))
        self.prev_twin = _twin_groups(h, self.order)


_PATTERNS: dict[Graph, _Pattern] = {}


def _pattern(h: Graph) -> _Pattern:
    pat = _PATTERNS.get(h)
    if pat is None:
        if len(_PATTERNS) > 256:
            _PATTERNS.clear()
        pat = _PATTERNS[h] = _Pattern(h)
    return pat


def _solve(
    demand: Sequence[int],
    pat: _Pattern,
    placement: dict[int, int],
    counter: _Counter | None,
    build: bool,
) -> list[tuple[int, int]] | bool | None:
    n = len(demand)
    rem = list(demand)
    placed_set = set(placement.values())
    if len(placed_set) != len(placement):
        raise ValueError("placement is not injective")
    fixed_edges = []
    forbidden = set()
    for a, b in pat.edges:
        pa, pb = placement[a], placement[b]
        rem[pa] -= 1
        rem[pb] -= 1
        fixed_edges.append((pa, pb))
        forbidden.add((pa, pb) if pa < pb else (pb, pa))
    if min(rem) < 0:
        return None
    placed = sorted(placed_set, key=lambda p: (-rem[p], p))
    free = [p for p in range(n) if p not in placed_set]
    chosen: list[tuple[int, int]] = []

    def rec(j: int):
        if counter is not None:
            counter.nodes += 1
        if j == len(placed):
            tail = [rem[p] for p in free]
            if not graphic_terms(tail):
                return None
            if not build:
                return True
            return [(free[a], free[b]) for a, b in havel_hakimi_edges(tail)]
        p = placed[j]
        later = [
            q for q in placed[j + 1 :] if rem[q] > 0 and ((p, q) if p < q else (q, p)) not in forbidden
        ]
        need = rem[p]
        pool = sorted((q for q in free if rem[q] > 0), key=lambda q: (-rem[q], q))
        for size in range(min(need, len(later)), -1, -1):
            c = need - size
            if len(pool) < c:
                break
            for subset in combinations(later, size):
                partners = list(subset) + pool[:c]
                for q in partners:
                    rem[q] -= 1
                rem[p] = 0
                ok = j + 1 == len(placed) or graphic_terms(
                    [rem[q] for q in placed[j + 1 :]] + [rem[q] for q in free]
                )
                if ok:
                    chosen.extend((p, q) for q in partners)
                    out = rec(j + 1)
                    if out is not None:
                        return out
                    del chosen[len(chosen) - len(partners) :]
                for q in partners:
                    rem[q] += 1
                rem[p] = need
        return None

    tail = rec(0)
    if tail is None or not build:
        return tail
    return fixed_edges + chosen + tail


def realize_with_placement(
    demand: Sequence[int],
    pattern: Graph,
    placement: dict[int, int],
    counter: _Counter | None = None,
) -> Graph | None:
    """A realization of ``demand`` containing ``pattern`` at the given positions.

    ``demand[p]`` is the degree wanted at position ``p`` (any order) and
    ``placement`` maps pattern vertices to distinct positions. Returns None
    when no such realization exists. Exact.

    Placed vertices are handled one at a time: the branch is over which later
    placed vertices (pattern non-neighbors) to join; the rest of the demand
    goes to the unplaced vertices of largest remaining demand, which loses
    nothing because unplaced vertices carry no forbidden pairs. Once every
    placed vertex is settled the remainder is an unconstrained degree list,
    decided by Erdős–Gallai.
    """
    edges = _solve(demand, _pattern(pattern), placement, counter, build=True)
    if edges is None:
        return None
    return Graph._trusted_edges(len(demand), edges)


def _twin_groups(h: Graph, order: list[int]) -> dict[int, int]:
    """Map each vertex to the previous member of its twin group in ``order`` (if any)."""
    prev: dict[int, int] = {}
    groups: list[list[int]] = []
    for v in order:
        for grp in groups:
            if all(_twins(h, v, u) for u in grp):
                prev[v] = grp[-1]
                grp.append(v)
                break
        else:
            groups.append([v])
    return prev


def _twins(h: Graph, u: int, v: int) -> bool:
    mask = ~((1 << u) | (1 << v))
    return h.adj[u] & mask == h.adj[v] & mask


def placements(seq: GraphicSequence, h: Graph) -> Iterable[dict[int, int]]:
    """Placements of ``h`` onto positions, one per class assignment up to twin symmetry.

    Positions with equal degree are interchangeable, so a placement is fixed
    by the degree value assigned to each pattern vertex. Larger degrees are
    tried first.
    """
    pat = _pattern(h)
    values = sorted(set(seq.terms), reverse=True)
    positions = {v: [p for p, t in enumerate(seq.terms) if t == v] for v in values}
    hdeg = pat.degrees
    order = pat.order
    prev_twin = pat.prev_twin
    cls: dict[int, int] = {}
    used = {v: 0 for v in values}

    def rec(i: int):
        if i == len(order):
            taken = {v: 0 for v in values}
            out = {}
            for u in order:
                v = values[cls[u]]
                out[u] = positions[v][taken[v]]
                taken[v] += 1
            yield out
            return
        u = order[i]
        start = cls[prev_twin[u]] if u in prev_twin else 0
        for c in range(start, len(values)):
            v = values[c]
            if v < hdeg[u]:
                break
            if used[v] == len(positions[v]):
                continue
            cls[u] = c
            used[v] += 1
            yield from rec(i + 1)
            used[v] -= 1
        cls.pop(u, None)

    yield from rec(0)


def _check_inputs(s: GraphicSequence, h: Graph, cap: int) -> PotentialVerdict | None:
    if s.n > cap:
        raise CapExceeded(f"n={s.n} exceeds the oracle cap {cap}")
    if not is_graphic(s):
        raise NonGraphic(f"{s} is not graphic")
    if h.n > s.n:
        return PotentialVerdict(False, note="pattern larger than sequence")
    if h.edge_count() == 0:
        return PotentialVerdict(True, realize(s), 0, "edgeless pattern")
    if not degree_sufficient(s, h) or s.total < 2 * h.edge_count():
        return PotentialVerdict(False, note="not degree sufficient")
    return None


def is_potentially_h_graphic(seq: SequenceLike, h: Graph, cap: int = DEFAULT_CAP) -> PotentialVerdict:
    """Exact decision with a witness realization when the answer is yes."""
    s = as_sequence(seq)
    early = _check_inputs(s, h, cap)
    if early is not None:
        return early
    pat = _pattern(h)
    counter = _Counter()
    tried = 0
    for place in placements(s, h):
        tried += 1
        edges = _solve(s.terms, pat, place, counter, build=True)
        if edges is not None:
            return PotentialVerdict(True, Graph._trusted_edges(s.n, edges), counter.nodes, f"placement {tried}")
    return PotentialVerdict(False, None, counter.nodes, f"exhausted {tried} placements")


def decide(seq: SequenceLike, h: Graph, cap: int = DEFAULT_CAP) -> bool:
    """The decision of :func:`is_potentially_h_graphic` without building a witness."""
    s = as_sequence(seq)
    early = _check_inputs(s, h, cap)
    if early is not None:
        return early.decision
    pat = _pattern(h)
    return any(_solve(s.terms, pat, place, None, build=False) for place in placements(s, h))


# -- cache -------------------------------------------------------------------


class VerdictCache:
    """Append-only JSON-lines store of ``(h canonical graph6, sequence, verdict)``."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else None
        self._data: dict[tuple[str, str], bool] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            with open(self.path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        rec = json.loads(line)
                    except json.JSONDecodeError:
                        continue  # torn final line from an interrupted run
                    self._data[(rec["h"], rec["sequence"])] = bool(rec["verdict"])

    def __len__(self) -> int:
        return len(self._data)

    def get(self, hkey: str, seq: GraphicSequence) -> bool | None:
        return self._data.get((hkey, format_terms(seq.terms)))

    def put(self, hkey: str, seq: GraphicSequence, verdict: bool) -> None:
        key = (hkey, format_terms(seq.terms))
        with self._lock:
            if self._data.get(key) == verdict:
                return
            self._data[key] = verdict
            if self.path is not None:
                with open(self.path, "a") as fh:
                    fh.write(json.dumps({"h": hkey, "sequence": key[1], "verdict": verdict}) + "\n")


# -- sigma -------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaResult:
    sigma: int
    witness: GraphicSequence | None
    sequences_checked: int


def _decide_worker(args) -> bool:
    terms, g6, cap = args
    return decide(GraphicSequence(terms), from_graph6(g6), cap)


def _decisions(
    seqs: list[GraphicSequence],
    h: Graph,
    cap: int,
    cache: VerdictCache | None,
    hkey: str,
    pool: ProcessPoolExecutor | None,
) -> Iterable[tuple[GraphicSequence, bool]]:
    todo = []
    known: dict[int, bool] = {}
    for idx, s in enumerate(seqs):
        hit = cache.get(hkey, s) if cache is not None else None
        if hit is None:
            todo.append(idx)
        else:
            known[idx] = hit
    if pool is not None and len(todo) > 1:
        g6 = to_graph6(h)
        results = pool.map(_decide_worker, [(seqs[i].terms, g6, cap) for i in todo], chunksize=16)
        computed = dict(zip(todo, results))
    else:
        computed = None
    for idx, s in enumerate(seqs):
        if idx in known:
            yield s, known[idx]
            continue
        if computed is not None:
            verdict = computed[idx]
        else:
            verdict = decide(s, h, cap)
        if cache is not None:
            cache.put(hkey, s, verdict)
        yield s, verdict


def sigma_exact(
    h: Graph,
    n: int,
    cap: int = DEFAULT_CAP,
    cache: VerdictCache | None = None,
    workers: int = 1,
    time_budget: float | None = None,
    positive: bool = False,
) -> SigmaResult:
    """Exact ``sigma(h, n)``: 2 plus the largest sum of a non-potential sequence.

    Sums are scanned downward from ``n(n-1)``; the first sum hosting a
    sequence that is not potentially ``h``-graphic gives the answer and the
    first such sequence (lexicographically largest) is the witness.
    With ``positive`` only sequences without zero terms are considered.
    """
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the oracle cap {cap}")
    if h.edge_count() == 0:
        raise EmptyPattern("sigma is only defined for patterns with an edge")
    hkey = canonical_key(h)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    checked = 0
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for s in range(n * (n - 1), -1, -2):
            seqs = list(enumerate_graphic(n, s, positive))
            for seq, verdict in _decisions(seqs, h, cap, cache, hkey, pool):
                checked += 1
                if not verdict:
                    return SigmaResult(s + 2, seq, checked)
            if deadline is not None and time.monotonic() > deadline:
                raise TimeBudgetExceeded(f"time budget exhausted at sum {s}")
    finally:
        if pool is not None:
            pool.shutdown()
    # only reachable with ``positive`` when every zero-free sequence qualifies
    raise AssertionError("no non-potential sequence found")  # pragma: no cover


def max_nonpotential_at_sum(h: Graph, n: int, s: int, cap: int = DEFAULT_CAP) -> list[GraphicSequence]:
    """Every graphic sequence of length ``n`` and sum ``s`` that is not potentially ``h``-graphic."""
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the oracle cap {cap}")
    return [seq for seq in enumerate_graphic(n, s) if not decide(seq, h, cap)]
