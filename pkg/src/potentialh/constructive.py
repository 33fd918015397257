"""Constructive embeddings: bounded-degree repair by switches and the two-stage reduction."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import (
    CliqueShortCircuit,
    ContractViolation,
    NonGraphic,
    NotPotentially,
    PreconditionSumTooSmall,
    PreconditionViolated,
    RepairStalled,
    SlackInsufficient,
    TraceMismatch,
)
from .graphkit import (
    Graph,
    complete_graph,
    empty_graph,
    from_graph6,
    independence_number,
    is_embedding,
    join,
    max_independent_set,
    to_graph6,
)
from .oracle import realize_with_placement
from .potential import HProfile, degree_order, profile, split_canonicalize, yin_li_check
from .seqcore import (
    GraphicSequence,
    LabeledSequence,
    LayoffStep,
    SequenceLike,
    SlackFunction,
    _min_layoff_labeled,
    as_sequence,
    degree_sufficient,
    havel_hakimi_edges,
    is_graphic,
    realize,
)
from .switches import Switch, apply_switch_rows


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- constants ---------------------------------------------------------------


def g_value(alpha: int, k: int) -> int:
    """Bound on vertices outside the top ``k`` whose neighbors all lie inside it."""
    return math.comb(k, k - alpha) * (2 * math.comb(k - alpha, 2) + alpha - 1)


def f_value(alpha: int, k: int) -> int:
    """Room needed below ``n`` for the maximum degree: ``g + 4k^2 + k + 1``."""
    return g_value(alpha, k) + 4 * k * k + k + 1


@dataclass(frozen=True)
class BmdtConstants:
    alpha: int
    k: int
    g_value: int
    f_value: int

    @classmethod
    def of(cls, alpha: int, k: int) -> "BmdtConstants":
        return cls(alpha, k, g_value(alpha, k), f_value(alpha, k))


def claim11_bound(h: Graph) -> BmdtConstants:
    """The constants for pattern ``h``."""
    if h.n < 1:
        raise ContractViolation("the pattern needs at least one vertex")
    return BmdtConstants.of(independence_number(h), h.n)


def count_confined(g: Graph, top: Sequence[int]) -> int:
    """Vertices outside ``top`` all of whose neighbors are in ``top``."""
    inside = 0
    for v in top:
        inside |= 1 << v
    return sum(1 for w in range(g.n) if not inside >> w & 1 and g.adj[w] & ~inside == 0)


def bmdt_min_order(h: Graph) -> int:
    """Smallest ``n`` at which the maximum-degree hypothesis can hold together with degree sufficiency."""
    return f_value(independence_number(h), h.n) + h.max_degree() + 1


# -- bounded-degree embedding ------------------------------------------------


@dataclass(frozen=True)
class BmdtReport:
    """Result of :func:`bmdt_repair`.

    ``embedding`` maps pattern vertices to graph vertices. ``exchanges`` lists
    ``(|X_i|, |X_j|)`` for each four-edge exchange, for comparison with the
    counting bound ``4k^2``.
    """

    graph: Graph
    embedding: dict[int, int]
    switches: tuple[Switch, ...]
    constants: BmdtConstants
    confined_before: int
    exchanges: tuple[tuple[int, int], ...] = ()


def check_bmdt_preconditions(seq: GraphicSequence, h: Graph) -> BmdtConstants:
    """Raise :class:`PreconditionViolated` naming the first hypothesis that fails."""
    consts = claim11_bound(h)
    if not is_graphic(seq):
        raise PreconditionViolated("graphic", f"{seq} is not graphic")
    if not degree_sufficient(seq, h):
        raise PreconditionViolated("degree_sufficient", f"{seq} is not degree sufficient for the pattern")
    need = consts.k - consts.alpha
    if seq.terms[-1] < need:
        raise PreconditionViolated("min_degree", f"minimum term {seq.terms[-1]} < k - alpha = {need}")
    if seq.terms[0] >= seq.n - consts.f_value:
        raise PreconditionViolated(
            "max_degree", f"d_1 = {seq.terms[0]} is not below n - f = {seq.n} - {consts.f_value}"
        )
    floor = bmdt_min_order(h)
    if seq.n < floor:  # pragma: no cover - implied by the two checks above
        raise PreconditionViolated("order", f"n = {seq.n} below the reported threshold {floor}")
    return consts


def _switch_ok(rows: list[int], sw: Switch) -> bool:
    keys = [(min(a, b), max(a, b)) for a, b in sw.remove + sw.add]
    if len(set(keys)) != len(keys):
        return False
    if any(not rows[a] >> b & 1 for a, b in sw.remove):
        return False
    return all(a != b and not rows[a] >> b & 1 for a, b in sw.add)


def _find_repair(
    rows: list[int], vi: int, vj: int, hs_adj: list[int], inside: int, full: int
) -> tuple[Switch, tuple[int, int] | None] | None:
    """An improving switch inserting ``vi vj``, lowest indices first."""
    cand_i = list(_iter_bits(rows[vi] & ~hs_adj[vi]))
    cand_j = list(_iter_bits(rows[vj] & ~hs_adj[vj]))
    for ai in cand_i:
        for aj in cand_j:
            if ai != aj and not rows[ai] >> aj & 1:
                return Switch(((vi, ai), (vj, aj)), ((vi, vj), (ai, aj))), None
    outside = full & ~inside
    busy = 0  # outside vertices with a neighbor outside
    for v in _iter_bits(outside):
        if rows[v] & outside:
            busy |= 1 << v
    for ai in cand_i:
        xs_i = busy & ~rows[ai] & ~(1 << ai)
        for aj in cand_j:
            xs_j = busy & ~rows[aj] & ~(1 << aj)
            for xi in _iter_bits(xs_i):
                for yi in _iter_bits(rows[xi] & outside):
                    for xj in _iter_bits(xs_j):
                        for yj in _iter_bits(rows[xj] & outside & ~(1 << yi) & ~rows[yi]):
                            sw = Switch(
                                ((vi, ai), (vj, aj), (xi, yi), (xj, yj)),
                                ((vi, vj), (ai, xi), (aj, xj), (yi, yj)),
                            )
                            if _switch_ok(rows, sw):
                                return sw, (xs_i.bit_count(), xs_j.bit_count())
    return None


def bmdt_repair(
    seq: SequenceLike,
    h: Graph,
    check_bounds: bool = True,
    start: Graph | None = None,
    debug: bool = False,
) -> BmdtReport:
    """Realize ``seq`` with ``h`` on its ``k`` highest-degree positions.

    Pattern vertices sorted by degree (ties by index) are assigned to
    positions ``0..k-1``. Starting from ``start`` (default: the Havel–Hakimi
    realization), each missing pattern edge ``v_i v_j`` is inserted either by
    the 2-switch ``v_i a_i, v_j a_j -> v_i v_j, a_i a_j`` or by the four-edge
    exchange through an edge ``x_i y_i`` and ``x_j y_j`` outside the top set.
    Edges of the placed pattern are never removed, so each step makes
    progress. With ``check_bounds`` the hypotheses are verified first.
    """
    s = as_sequence(seq)
    if check_bounds:
        consts = check_bmdt_preconditions(s, h)
    else:
        consts = claim11_bound(h)
        if not is_graphic(s):
            raise PreconditionViolated("graphic", f"{s} is not graphic")
        if not degree_sufficient(s, h):
            raise PreconditionViolated("degree_sufficient", f"{s} is not degree sufficient for the pattern")
    k = h.n
    hdeg = h.degrees()
    order = sorted(range(k), key=lambda u: (-hdeg[u], u))
    embedding = {u: pos for pos, u in enumerate(order)}
    if start is None:
        g0 = realize(s)
    else:
        if list(start.degrees()) != list(s.terms):
            raise ContractViolation("start graph must give vertex p the degree seq[p]")
        g0 = start
    rows = list(g0.adj)
    hs_adj = [0] * s.n
    targets = []
    for a, b in h.edges():
        pa, pb = sorted((embedding[a], embedding[b]))
        hs_adj[pa] |= 1 << pb
        hs_adj[pb] |= 1 << pa
        targets.append((pa, pb))
    targets.sort()
    inside = (1 << k) - 1
    full = (1 << s.n) - 1
    confined = count_confined(g0, range(k))
    switches: list[Switch] = []
    audit: list[tuple[int, int]] = []
    while True:
        missing = [(a, b) for a, b in targets if not rows[a] >> b & 1]
        if not missing:
            break
        for a, b in missing:
            found = _find_repair(rows, a, b, hs_adj, inside, full)
            if found is not None:
                sw, sizes = found
                apply_switch_rows(rows, sw)
                switches.append(sw)
                if sizes is not None:
                    audit.append(sizes)
                if debug and [r.bit_count() for r in rows] != list(s.terms):  # pragma: no cover
                    raise ContractViolation("a switch changed the degree sequence")
                break
        else:
            raise RepairStalled(
                f"no improving switch for missing edge {missing[0]}",
                graph=Graph._trusted(rows),
                missing=missing,
            )
    out = Graph(s.n, tuple(rows))
    if out.degrees() != list(s.terms) or not is_embedding(out, h, embedding):  # pragma: no cover
        raise ContractViolation("repair produced an invalid realization")
    return BmdtReport(out, embedding, tuple(switches), consts, confined, tuple(audit))


def bmdt_embed(seq: SequenceLike, h: Graph, check_bounds: bool = True) -> Graph:
    """A realization of ``seq`` containing ``h`` on the top ``k`` positions (see :func:`bmdt_repair`)."""
    return bmdt_repair(seq, h, check_bounds).graph


def embed_clique(seq: SequenceLike, k: int) -> Graph:
    """A realization with ``K_k`` on the ``k`` highest-degree positions.

    Exact: if some realization contains ``K_k`` then one has it on the top
    positions, and the placement solver finds it.
    """
    s = as_sequence(seq)
    if k > s.n:
        raise NotPotentially(f"K_{k} does not fit in {s.n} vertices")
    g = realize_with_placement(s.terms, complete_graph(k), {j: j for j in range(k)})
    if g is None:
        raise NotPotentially(f"{s} is not potentially K_{k}-graphic")
    return g


# -- reduction trace ---------------------------------------------------------


class Termination(str, Enum):
    INDEX_LIMIT = "IndexLimit"
    MAX_DEGREE_SMALL = "MaxDegreeSmall"
    # the per-stage sum bound would fail at the next stage (desk-scale slack)
    SLACK_EXHAUSTED = "SlackExhausted"


def _pairs(edges) -> tuple[tuple[int, int], ...]:
    return tuple((int(a), int(b)) for a, b in edges)


@dataclass(frozen=True)
class Stage:
    """One reduction stage.

    ``sequence`` is the stage sequence with vertex ``ids`` (ids are positions
    in the original input). The remaining fields are empty on the final
    stage: ``top`` is the id of the top vertex, ``deleted`` its non-neighbors
    in the stage realization with ``deleted_edges`` every edge touching them,
    ``layoffs`` the minimum-term layoffs applied afterwards, and
    ``top_layoff`` the final removal of the largest term.
    """

    sequence: GraphicSequence
    ids: tuple[int, ...]
    top: int | None = None
    deleted: tuple[int, ...] = ()
    deleted_edges: tuple[tuple[int, int], ...] = ()
    layoffs: tuple[LayoffStep, ...] = ()
    top_layoff: LayoffStep | None = None

    @property
    def n(self) -> int:
        return self.sequence.n

    def to_dict(self) -> dict:
        return {
            "sequence": list(self.sequence.terms),
            "ids": list(self.ids),
            "top": self.top,
            "deleted": list(self.deleted),
            "deleted_edges": [list(e) for e in self.deleted_edges],
            "layoffs": [st.to_dict() for st in self.layoffs],
            "top_layoff": None if self.top_layoff is None else self.top_layoff.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Stage":
        top_layoff = data.get("top_layoff")
        return cls(
            GraphicSequence(tuple(data["sequence"])),
            tuple(data["ids"]),
            data.get("top"),
            tuple(data.get("deleted", ())),
            _pairs(data.get("deleted_edges", ())),
            tuple(LayoffStep.from_dict(st) for st in data.get("layoffs", ())),
            None if top_layoff is None else LayoffStep.from_dict(top_layoff),
        )


@dataclass(frozen=True)
class ReductionTrace:
    """Everything needed to replay and reverse :func:`reduce`."""

    original: GraphicSequence
    pattern: str  # graph6
    k: int
    alpha: int
    sigma_tilde: int
    slack: SlackFunction
    initial_layoffs: tuple[LayoffStep, ...]
    stages: tuple[Stage, ...]
    reason: Termination
    t_value: int
    big_m: int
    note: str = ""

    @property
    def ell(self) -> int:
        return len(self.stages) - 1

    @property
    def residual(self) -> GraphicSequence:
        return self.stages[-1].sequence

    @property
    def residual_ids(self) -> tuple[int, ...]:
        return self.stages[-1].ids

    @property
    def clique_ids(self) -> tuple[int, ...]:
        return tuple(st.top_layoff.removed for st in self.stages[:-1])

    def sum_bound(self, i: int) -> Fraction:
        n_i = self.stages[i].n
        return (self.sigma_tilde - 2 * i) * n_i + Fraction(self.slack(n_i)) / 2**i

    def slack_share(self, i: int) -> Fraction:
        """``slack(n_i)/2^i``; the argument needs this to be at least ``2M``."""
        return Fraction(self.slack(self.stages[i].n)) / 2**i

    def check_invariants(self) -> list[str]:
        """Problems found by re-checking the stored stages; empty when all hold."""
        bad = []
        if self.ell > self.k - self.alpha:
            bad.append(f"ell={self.ell} exceeds k - alpha = {self.k - self.alpha}")
        for i, st in enumerate(self.stages):
            if st.sequence.total < self.sum_bound(i):
                bad.append(f"stage {i}: sum {st.sequence.total} < {self.sum_bound(i)}")
            if st.n and Fraction(st.sequence.terms[-1]) < Fraction(self.sigma_tilde, 2) - i:
                bad.append(f"stage {i}: minimum term {st.sequence.terms[-1]} < sigma_tilde/2 - {i}")
        bad.extend(self.replay())
        return bad

    def replay(self) -> list[str]:
        """Re-run every logged step and compare with the stored stage sequences."""
        bad = []
        lab = LabeledSequence.from_sequence(self.original)
        for step in self.initial_layoffs:
            if lab.lay_off(len(lab.degrees)) != step:
                return ["initial layoff log does not replay"]
        if (tuple(lab.degrees), tuple(lab.ids)) != (self.stages[0].sequence.terms, self.stages[0].ids):
            return ["stage 0 does not follow from the initial layoffs"]
        for i, st in enumerate(self.stages[:-1]):
            deg = dict(zip(st.ids, st.sequence.terms))
            gone = set(st.deleted)
            if not gone <= deg.keys() or st.top in gone or st.top not in deg:
                bad.append(f"stage {i}: deleted vertices are not stage vertices")
                break
            for a, b in st.deleted_edges:
                if a not in gone and b not in gone:
                    bad.append(f"stage {i}: logged edge {a}-{b} misses the deleted set")
                for v in (a, b):
                    if v not in gone:
                        deg[v] -= 1
            kept = [v for v in st.ids if v not in gone]
            if deg[st.top] != len(kept) - 1:
                bad.append(f"stage {i}: top vertex does not dominate the kept set")
            lab = LabeledSequence([deg[v] for v in kept], kept)
            lab.normalize()
            for step in st.layoffs:
                if lab.lay_off(len(lab.degrees)) != step:
                    bad.append(f"stage {i}: layoff log does not replay")
                    break
            if lab.lay_off(1) != st.top_layoff:
                bad.append(f"stage {i}: top layoff does not replay")
            nxt = self.stages[i + 1]
            if (tuple(lab.degrees), tuple(lab.ids)) != (nxt.sequence.terms, nxt.ids):
                bad.append(f"stage {i + 1} does not follow from stage {i}")
        return bad

    def to_dict(self) -> dict:
        return {
            "original": list(self.original.terms),
            "pattern": self.pattern,
            "k": self.k,
            "alpha": self.alpha,
            "sigma_tilde": self.sigma_tilde,
            "slack": self.slack.to_dict(),
            "initial_layoffs": [st.to_dict() for st in self.initial_layoffs],
            "stages": [st.to_dict() for st in self.stages],
            "ell": self.ell,
            "reason": self.reason.value,
            "t_value": self.t_value,
            "big_m": self.big_m,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReductionTrace":
        return cls(
            GraphicSequence(tuple(data["original"])),
            data["pattern"],
            data["k"],
            data["alpha"],
            data["sigma_tilde"],
            SlackFunction.from_dict(data["slack"]),
            tuple(LayoffStep.from_dict(st) for st in data["initial_layoffs"]),
            tuple(Stage.from_dict(st) for st in data["stages"]),
            Termination(data["reason"]),
            data["t_value"],
            data["big_m"],
            data.get("note", ""),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ReductionTrace":
        return cls.from_dict(json.loads(text))


def big_m(alpha: int, k: int) -> int:
    """``max over 0 <= i <= k-alpha-1`` of ``2 f(alpha, k-i) (2k-4)``."""
    return max(2 * f_value(alpha, k - i) * (2 * k - 4) for i in range(k - alpha))


def t_value(seq: GraphicSequence, threshold: int) -> int:
    """Number of leading terms at least ``threshold``."""
    return sum(1 for d in seq.terms if d >= threshold)


def reduce(
    seq: SequenceLike,
    h: Graph,
    slack: SlackFunction,
    prof: HProfile | None = None,
) -> ReductionTrace:
    """Reduce ``seq`` to a residual sequence, logging every step for reversal.

    Stage ``i`` realizes the current sequence with its top vertex joined to
    the next-highest vertices, deletes the top vertex's non-neighbors, lays
    off minimum terms while they are at most ``(sigma_tilde - 2i)/2``, then
    lays off the (dominating) top term. The loop stops when ``i = k - alpha``
    or ``d_1 < n_i - f(alpha, k-i)``. It also stops early, with reason
    ``SlackExhausted``, when the next stage would break the per-stage sum
    bound, which happens whenever the slack is small compared with the
    constants.

    Raises :class:`CliqueShortCircuit` when the input is shown potentially
    ``K_k``-graphic along the way (Yin–Li on a stage sequence, or the clique
    sum threshold during minimum-term layoffs).
    """
    s = as_sequence(seq)
    if not is_graphic(s):
        raise NonGraphic(f"{s} is not graphic")
    prof = prof or profile(h)
    k, alpha, st = prof.k, prof.alpha, prof.sigma_tilde
    n = s.n
    need = st * n + Fraction(slack(n))
    if s.total < need:
        raise PreconditionSumTooSmall(f"sum {s.total} < sigma_tilde*n + slack(n) = {need}")
    if n >= k and yin_li_check(s, k):
        raise CliqueShortCircuit("yin-li", 0, s)
    lab = LabeledSequence.from_sequence(s)
    init_log, cert = _min_layoff_labeled(lab, st, Fraction(slack(n)), k)
    if cert is not None:
        raise CliqueShortCircuit("clique-sum", 0, cert.sequence, cert)
    stages: list[Stage] = []
    note = ""
    i = 0
    while True:
        cur = lab.sequence() if lab.degrees else None
        if cur is None:  # pragma: no cover - the minimum-term bound keeps terms
            raise ContractViolation("reduction emptied the sequence")
        ids = tuple(lab.ids)
        if cur.n >= k and yin_li_check(cur, k):
            raise CliqueShortCircuit("yin-li", i, cur)
        if i == k - alpha:
            reason = Termination.INDEX_LIMIT
            break
        if cur.terms[0] < cur.n - f_value(alpha, k - i):
            reason = Termination.MAX_DEGREE_SMALL
            break
        built = _reduce_stage(cur, ids, i, st, slack, k)
        if isinstance(built, str):
            reason, note = Termination.SLACK_EXHAUSTED, built
            break
        stage, nxt, cert = built
        if cert is not None:
            raise CliqueShortCircuit("clique-sum", i, cert.sequence, cert)
        stages.append(stage)
        lab = nxt
        i += 1
    stages.append(Stage(cur, ids))
    return ReductionTrace(
        s,
        to_graph6(h),
        k,
        alpha,
        st,
        slack,
        tuple(init_log),
        tuple(stages),
        reason,
        t_value(cur, k - i - 1),
        big_m(alpha, k),
        note,
    )


def _reduce_stage(cur: GraphicSequence, ids: tuple[int, ...], i: int, st: int, slack: SlackFunction, k: int):
    """One stage; returns ``(stage, next labeled sequence, certificate)`` or a reason string to stop."""
    n_i = cur.n
    edges = havel_hakimi_edges(cur.terms)
    rows = [0] * n_i
    for a, b in edges:
        rows[a] |= 1 << b
        rows[b] |= 1 << a
    # position 0 has the largest demand and is joined to the next-highest vertices
    keep_mask = rows[0] | 1
    deleted_pos = [p for p in range(n_i) if not keep_mask >> p & 1]
    deleted = tuple(ids[p] for p in deleted_pos)
    deleted_edges = tuple(
        (ids[a], ids[b]) for a, b in edges if not (keep_mask >> a & 1 and keep_mask >> b & 1)
    )
    kept_pos = [p for p in range(n_i) if keep_mask >> p & 1]
    lab = LabeledSequence([(rows[p] & keep_mask).bit_count() for p in kept_pos], [ids[p] for p in kept_pos])
    lab.normalize()
    m = st - 2 * i
    share = Fraction(slack(len(lab.degrees))) / 2 ** (i + 1)
    if sum(lab.degrees) < m * len(lab.degrees) + share:
        return f"stage {i}: sum after deleting non-neighbors is below (sigma_tilde-2i)n' + slack/2^(i+1)"
    log, cert = _min_layoff_labeled(lab, m, share, k)
    if cert is not None:
        return None, None, cert
    if len(lab.degrees) < 2:
        return f"stage {i}: minimum-term layoffs left fewer than two terms"
    top = lab.lay_off(1)
    nxt_bound = (st - 2 * (i + 1)) * len(lab.degrees) + Fraction(slack(len(lab.degrees))) / 2 ** (i + 1)
    if sum(lab.degrees) < nxt_bound:
        return f"stage {i + 1}: sum {sum(lab.degrees)} would fall below the stage bound {nxt_bound}"
    stage = Stage(cur, ids, ids[0], deleted, deleted_edges, tuple(log), top)
    return stage, lab, None


# -- reconstruction ----------------------------------------------------------


@dataclass(frozen=True)
class Reconstruction:
    """Output of :func:`reconstruct_detailed`.

    ``graph`` realizes the original sequence (vertex ``p`` has degree
    ``original[p]``); ``residual_map`` sends each vertex of the residual
    realization to its vertex in ``graph``; ``clique`` lists the vertices
    that form a clique dominating that residual copy.
    """

    graph: Graph
    residual_map: dict[int, int]
    clique: tuple[int, ...]


def _add_star(rows: list[int], center: int, others: Sequence[int]) -> None:
    for v in others:
        if rows[center] >> v & 1 or v == center:
            raise TraceMismatch(f"reversing a layoff would repeat edge {center}-{v}")
        rows[center] |= 1 << v
        rows[v] |= 1 << center


def reconstruct_detailed(trace: ReductionTrace, g_ell: Graph) -> Reconstruction:
    """Reverse every logged step of ``trace`` starting from a realization of the residual."""
    res = trace.residual
    if g_ell.n != res.n or sorted(g_ell.degrees(), reverse=True) != list(res.terms):
        raise TraceMismatch(f"graph degrees {g_ell.degree_sequence()} do not realize {res}")
    deg = g_ell.degrees()
    order = sorted(range(g_ell.n), key=lambda v: (-deg[v], v))
    vmap = {v: trace.residual_ids[p] for p, v in enumerate(order)}
    rows = [0] * trace.original.n
    for a, b in g_ell.edges():
        x, y = vmap[a], vmap[b]
        rows[x] |= 1 << y
        rows[y] |= 1 << x
    for st in reversed(trace.stages[:-1]):
        _add_star(rows, st.top_layoff.removed, st.top_layoff.reduced)
        for step in reversed(st.layoffs):
            _add_star(rows, step.removed, step.reduced)
        for a, b in st.deleted_edges:
            rows[a] |= 1 << b
            rows[b] |= 1 << a
    for step in reversed(trace.initial_layoffs):
        _add_star(rows, step.removed, step.reduced)
    g = Graph(len(rows), tuple(rows))
    if g.degrees() != list(trace.original.terms):
        raise TraceMismatch("reversed trace does not realize the original sequence")
    return Reconstruction(g, vmap, trace.clique_ids)


def reconstruct(trace: ReductionTrace, g_ell: Graph) -> Graph:
    """A realization of the original sequence containing ``g_ell`` induced under an ``ell``-clique."""
    return reconstruct_detailed(trace, g_ell).graph


# -- final stage -------------------------------------------------------------


@dataclass(frozen=True)
class FinalStage:
    """A realization of the residual sequence prepared for the pattern.

    ``graph`` gives vertex ``p`` the degree ``residual[p]``. ``residual_map``
    sends some pattern vertices to vertices of ``graph``; the pattern
    vertices in ``clique_slots`` go to the reconstruction clique, in order.
    ``branch`` is ``"A"`` (``t >= k - ell - alpha``) or ``"B"``; in branch B
    ``f_vertices`` is the pattern vertex set of the placed subgraph.
    """

    graph: Graph
    branch: str
    t: int
    residual_map: dict[int, int]
    clique_slots: tuple[int, ...]
    f_vertices: tuple[int, ...] = ()
    switches: int = 0


def _bmdt_or_slack(seq: GraphicSequence, target: Graph) -> BmdtReport:
    try:
        return bmdt_repair(seq, target)
    except PreconditionViolated as exc:
        raise SlackInsufficient(f"embedding hypothesis fails on the residual ({exc})") from exc


def final_stage(trace: ReductionTrace, h: Graph, prof: HProfile | None = None) -> FinalStage:
    """Embed the part of ``h`` left after the ``ell`` reconstruction clique vertices."""
    prof = prof or profile(h)
    if to_graph6(h) != trace.pattern:
        raise ContractViolation("pattern differs from the one the trace was built for")
    k, alpha, ell = prof.k, prof.alpha, trace.ell
    res = trace.residual
    rest = k - ell
    t = trace.t_value
    if res.n < rest:
        raise SlackInsufficient(f"residual has {res.n} terms, fewer than k - ell = {rest}")
    if t >= rest - alpha:
        return _final_a(res, h, prof, ell, t)
    return _final_b(res, h, prof, ell, t)


def _final_a(res: GraphicSequence, h: Graph, prof: HProfile, ell: int, t: int) -> FinalStage:
    k, alpha = prof.k, prof.alpha
    r = k - alpha - ell
    indep = max_independent_set(h)
    others = [u for u in range(k) if u not in indep]
    target = join(complete_graph(r), empty_graph(alpha))
    if r == 0:
        g = realize(res)
        place = {j: j for j in range(alpha)}
        n_sw = 0
    else:
        rep = _bmdt_or_slack(res, target)
        g, place, n_sw = rep.graph, rep.embedding, len(rep.switches)
    rmap = {u: place[r + j] for j, u in enumerate(indep)}
    rmap.update({u: place[j] for j, u in enumerate(others[ell:])})
    return FinalStage(g, "A", t, rmap, tuple(others[:ell]), (), n_sw)


def _final_b(res: GraphicSequence, h: Graph, prof: HProfile, ell: int, t: int) -> FinalStage:
    k = prof.k
    size = k - ell - t
    f_set = prof.witness[size]
    f_graph = h.induced(f_set)
    if f_graph.max_degree() != prof.nabla[size]:  # pragma: no cover - profile guarantees it
        raise ContractViolation("witness subgraph does not attain nabla")
    if not degree_sufficient(res, join(complete_graph(t), f_graph)):
        raise SlackInsufficient(f"residual is not degree sufficient for K_{t} v F_{size}")
    n_sw = 0
    if t == 0:
        g = realize(res)
    else:
        rep = _bmdt_or_slack(res, join(complete_graph(t), empty_graph(size)))
        n_sw = len(rep.switches)
        g = split_canonicalize(rep.graph, t, size)
    order = degree_order(g)
    top, mid = order[:t], order[t : t + size]
    top_mask = 0
    for v in top:
        top_mask |= 1 << v
    remaining = [v for v in range(g.n) if not top_mask >> v & 1]
    local = {v: j for j, v in enumerate(remaining)}
    demand = [(g.adj[v] & ~top_mask).bit_count() for v in remaining]
    fdeg = f_graph.degrees()
    f_order = sorted(range(size), key=lambda u: (-fdeg[u], u))
    sub = None
    for perm in itertools.chain([tuple(mid)], itertools.permutations(mid)):
        placement = {f_order[j]: local[perm[j]] for j in range(size)}
        sub = realize_with_placement(demand, f_graph, placement)
        if sub is not None:
            break
    if sub is None:
        raise SlackInsufficient(f"no realization of the residual places F_{size} on the next vertices")
    # keep every edge at the top vertices; the rest comes from the new realization
    rows = [g.adj[v] if top_mask >> v & 1 else g.adj[v] & top_mask for v in range(g.n)]
    for a, b in sub.edges():
        x, y = remaining[a], remaining[b]
        rows[x] |= 1 << y
        rows[y] |= 1 << x
    out = Graph(g.n, tuple(rows))
    if out.degrees() != list(res.terms):  # pragma: no cover - guarded by construction
        raise ContractViolation("final-stage reassembly changed degrees")
    rmap = {f_set[u]: remaining[placement[u]] for u in range(size)}
    outside = [u for u in range(k) if u not in set(f_set)]
    rmap.update({u: top[j] for j, u in enumerate(outside[ell:])})
    return FinalStage(out, "B", t, rmap, tuple(outside[:ell]), tuple(f_set), n_sw)


def final_stage_embed(trace: ReductionTrace, h: Graph) -> Graph:
    """A realization of the residual sequence prepared to host ``h`` after reconstruction."""
    return final_stage(trace, h).graph


# -- full pipeline -----------------------------------------------------------


@dataclass(frozen=True)
class PipelineResult:
    """``outcome`` is ``"embedded"``, ``"clique"`` (short circuit) or ``"slack-insufficient"``.

    ``graph`` always realizes the input; ``embedding`` maps ``h`` into it
    unless the outcome is ``"slack-insufficient"``.
    """

    outcome: str
    graph: Graph
    embedding: dict[int, int] | None
    trace: ReductionTrace | None = None
    final: FinalStage | None = None
    detail: str = ""
    extra: dict = field(default_factory=dict)


def pipeline(seq: SequenceLike, h: Graph, slack: SlackFunction) -> PipelineResult:
    """Reduce, embed at the residual, and reconstruct; every success is verified."""
    s = as_sequence(seq)
    prof = profile(h)
    try:
        trace = reduce(s, h, slack, prof)
    except CliqueShortCircuit as exc:
        g = embed_clique(s, h.n)
        emb = {u: u for u in range(h.n)}
        if not is_embedding(g, h, emb):  # pragma: no cover
            raise ContractViolation("clique embedding failed verification")
        return PipelineResult("clique", g, emb, detail=f"{exc.reason} at stage {exc.stage}")
    try:
        fin = final_stage(trace, h, prof)
    except SlackInsufficient as exc:
        rec = reconstruct(trace, realize(trace.residual))
        return PipelineResult("slack-insufficient", rec, None, trace, None, str(exc))
    rec = reconstruct_detailed(trace, fin.graph)
    emb = {u: rec.residual_map[v] for u, v in fin.residual_map.items()}
    emb.update({u: rec.clique[j] for j, u in enumerate(fin.clique_slots)})
    if not is_embedding(rec.graph, h, emb):  # pragma: no cover - a defect if reached
        raise ContractViolation("pipeline embedding failed verification")
    return PipelineResult("embedded", rec.graph, emb, trace, fin)


def pattern_of(trace: ReductionTrace) -> Graph:
    return from_graph6(trace.pattern)
