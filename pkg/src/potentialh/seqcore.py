"""Degree-sequence primitives.

Sequences are nonincreasing tuples of nonnegative integers. Zero terms are
allowed everywhere (isolated vertices).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import ContractViolation, NonGraphic, PreconditionSumTooSmall


@dataclass(frozen=True)
class GraphicSequence:
    """A nonincreasing sequence of vertex degrees.

    The name follows usage: the value may or may not be graphic; call
    :func:`is_graphic` to find out.
    """

    terms: tuple[int, ...]

    def __post_init__(self):
        terms = tuple(int(t) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        n = len(terms)
        if n == 0:
            raise ContractViolation("a degree sequence needs at least one term")
        for a, b in zip(terms, terms[1:]):
            if a < b:
                raise ContractViolation(f"terms not nonincreasing: {terms}")
        if terms[-1] < 0:
            raise ContractViolation(f"negative term in {terms}")
        if terms[0] > n - 1:
            raise ContractViolation(f"term {terms[0]} exceeds n - 1 = {n - 1}")

    @classmethod
    def sorted_from(cls, values: Iterable[int]) -> "GraphicSequence":
        return cls(tuple(sorted(values, reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "GraphicSequence":
        return cls.sorted_from(parse_terms(text))

    @property
    def n(self) -> int:
        return len(self.terms)

    @property
    def total(self) -> int:
        return sum(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def __str__(self) -> str:
        return format_terms(self.terms)


SequenceLike = Union[GraphicSequence, Sequence[int]]

_TOKEN = re.compile(r"^(\d+)(?:\^(\d+))?$")


def parse_terms(text: str) -> list[int]:
    """Parse ``7,2^6,1`` style text into a flat list of integers."""
    compact = re.sub(r"\s+", "", text).strip("()[]")
    if not compact:
        raise ContractViolation("empty sequence text")
    out: list[int] = []
    for pos, token in enumerate(compact.split(",")):
        m = _TOKEN.match(token)
        if m is None:
            raise ContractViolation(f"bad sequence token {token!r} at item {pos}")
        value, mult = int(m.group(1)), int(m.group(2) or 1)
        out.extend([value] * mult)
    return out


def format_terms(terms: Iterable[int]) -> str:
    """Inverse of :func:`parse_terms`, grouping runs as ``d^m``."""
    parts = []
    terms = list(terms)
    i = 0
    while i < len(terms):
        j = i
        while j < len(terms) and terms[j] == terms[i]:
            j += 1
        run = j - i
        parts.append(str(terms[i]) if run == 1 else f"{terms[i]}^{run}")
        i = j
    return ",".join(parts)


def as_sequence(seq: SequenceLike) -> GraphicSequence:
    if isinstance(seq, GraphicSequence):
        return seq
    return GraphicSequence(tuple(seq))


def _erdos_gallai(terms: Sequence[int]) -> bool:
    # terms nonincreasing and nonnegative
    n = len(terms)
    if sum(terms) % 2:
        return False
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + terms[i]
    lhs = 0
    q = n  # number of terms >= k; only shrinks as k grows
    for k in range(1, n + 1):
        lhs += terms[k - 1]
        while q > 0 and terms[q - 1] < k:
            q -= 1
        if q > k:
            rhs = k * (k - 1) + k * (q - k) + suffix[q]
        else:
            rhs = k * (k - 1) + suffix[k]
        if lhs > rhs:
            return False
    return True


def is_graphic(seq: SequenceLike) -> bool:
    """Erdős–Gallai test: even sum and every prefix inequality.

    Raises :class:`ContractViolation` for unsorted or out-of-range input.
    """
    return _erdos_gallai(as_sequence(seq).terms)


def graphic_terms(terms: Sequence[int]) -> bool:
    """Graphicality of an arbitrary list of integers (any order, may be negative)."""
    if any(t < 0 for t in terms):
        return False
    ordered = sorted(terms, reverse=True)
    if ordered and ordered[0] > len(ordered) - 1:
        return False
    return _erdos_gallai(ordered)


def havel_hakimi_edges(demand: Sequence[int]) -> list[tuple[int, int]]:
    """Edges of a Havel–Hakimi realization of ``demand`` (positions in any order).

    The vertex of largest remaining demand (lowest index on ties) is joined to
    the next vertices of largest remaining demand. Raises :class:`NonGraphic`
    when the process gets stuck.
    """
    rem = list(demand)
    if any(r < 0 for r in rem):
        raise NonGraphic(f"negative demand in {list(demand)}")
    edges = []
    alive = [v for v in range(len(rem)) if rem[v] > 0]
    while alive:
        alive.sort(key=lambda v: (-rem[v], v))
        v = alive[0]
        d = rem[v]
        targets = alive[1 : d + 1]
        if len(targets) < d:
            raise NonGraphic(f"sequence {list(demand)} is not graphic")
        rem[v] = 0
        for u in targets:
            rem[u] -= 1
            edges.append((v, u) if v < u else (u, v))
        alive = [u for u in alive if rem[u] > 0]
    return edges


def realize(seq: SequenceLike):
    """Havel–Hakimi realization; vertex ``p`` receives degree ``seq[p]``."""
    from .graphkit import Graph

    s = as_sequence(seq)
    if not is_graphic(s):
        raise NonGraphic(f"{s} is not graphic")
    return Graph.from_edges(s.n, havel_hakimi_edges(s.terms))


def layoff_positions(terms: Sequence[int], index: int) -> tuple[list[int], list[int]]:
    """Positions hit by laying off ``terms[index - 1]``.

    Returns ``(kept, reduced)``: the positions that survive, in order, and the
    ones among them whose term drops by one. Both branches of the
    Kleitman–Wang rule reduce the first ``d_index`` surviving positions.
    """
    n = len(terms)
    if not 1 <= index <= n:
        raise ContractViolation(f"layoff index {index} outside 1..{n}")
    d = terms[index - 1]
    kept = [p for p in range(n) if p != index - 1]
    return kept, kept[:d]


def layoff(seq: SequenceLike, index: int) -> GraphicSequence:
    """Lay off the term at 1-based ``index`` and re-sort.

    Raises :class:`NonGraphic` when a term would go negative (the input is then
    not graphic either).
    """
    s = as_sequence(seq)
    kept, reduced = layoff_positions(s.terms, index)
    d = s.terms[index - 1]
    if len(reduced) < d:
        raise NonGraphic(f"cannot lay off {d} from {s}: too few terms")
    hit = set(reduced)
    values = [s.terms[p] - (p in hit) for p in kept]
    if any(v < 0 for v in values):
        raise NonGraphic(f"laying off position {index} of {s} leaves a negative term")
    if not values:
        raise ContractViolation("cannot lay off the only term")
    if max(values) > len(values) - 1:
        raise NonGraphic(f"laying off position {index} of {s} leaves a term above n - 1")
    return GraphicSequence.sorted_from(values)


# --- slack functions --------------------------------------------------------


@dataclass(frozen=True)
class SlackFunction:
    """An increasing slack term ``omega(n)`` used by the sum bounds.

    ``kind`` is ``"constant"`` (value ``c``) or ``"sqrt"`` (``c * sqrt(n)``,
    rounded down to three decimals so values stay exact fractions).
    """

    kind: str = "constant"
    c: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in ("constant", "sqrt"):
            raise ContractViolation(f"unknown slack kind {self.kind!r}")
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c < 0:
            raise ContractViolation("slack coefficient must be nonnegative")

    def __call__(self, n: int) -> Fraction:
        if self.kind == "constant":
            return self.c
        # floor(sqrt(n) * 1000) / 1000 keeps the value exact and monotone
        return self.c * Fraction(math.isqrt(n * 10**6), 1000)

    @classmethod
    def constant(cls, c) -> "SlackFunction":
        return cls("constant", Fraction(c))

    @classmethod
    def sqrt(cls, c) -> "SlackFunction":
        return cls("sqrt", Fraction(c))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "c": str(self.c)}

    @classmethod
    def from_dict(cls, data: dict) -> "SlackFunction":
        return cls(data["kind"], Fraction(data["c"]))


def clique_potential(k: int, n: int) -> int:
    """The known clique value ``(k-2)(2n-k+1)+2`` (valid for ``n >= C(k,2)+3``)."""
    return (k - 2) * (2 * n - k + 1) + 2


# --- iterated minimum layoff ------------------------------------------------


@dataclass(frozen=True)
class LayoffStep:
    """One logged layoff: the removed vertex id, its degree, and the ids reduced."""

    removed: int
    degree: int
    reduced: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"removed": self.removed, "degree": self.degree, "reduced": list(self.reduced)}

    @classmethod
    def from_dict(cls, data: dict) -> "LayoffStep":
        return cls(data["removed"], data["degree"], tuple(data["reduced"]))


@dataclass(frozen=True)
class CliqueCertificate:
    """The sum threshold for ``K_k`` was crossed at ``stage``.

    ``sequence`` is the sequence at that stage and ``threshold`` the value of
    :func:`clique_potential` at its length.
    """

    k: int
    stage: int
    sequence: GraphicSequence
    threshold: int


@dataclass(frozen=True)
class LayoffOutcome:
    """Residual of :func:`iterated_min_layoff`; ``sequence`` is None only if every term was laid off."""

    sequence: GraphicSequence | None
    ids: tuple[int, ...]
    log: tuple[LayoffStep, ...]
    initial_length: int
    initial_slack: Fraction


@dataclass
class LabeledSequence:
    """Degrees carrying vertex ids; kept sorted nonincreasing (stable)."""

    degrees: list[int]
    ids: list[int]

    @classmethod
    def from_sequence(cls, seq: GraphicSequence, ids: Sequence[int] | None = None):
        return cls(list(seq.terms), list(ids) if ids is not None else list(range(seq.n)))

    def sequence(self) -> GraphicSequence:
        return GraphicSequence(tuple(self.degrees))

    def normalize(self) -> None:
        order = sorted(range(len(self.degrees)), key=lambda p: -self.degrees[p])
        self.degrees = [self.degrees[p] for p in order]
        self.ids = [self.ids[p] for p in order]

    def lay_off(self, index: int) -> LayoffStep:
        kept, reduced = layoff_positions(self.degrees, index)
        d = self.degrees[index - 1]
        if len(reduced) < d:
            raise NonGraphic("too few terms to lay off")
        hit = set(reduced)
        step = LayoffStep(self.ids[index - 1], d, tuple(self.ids[p] for p in reduced))
        new_deg = [self.degrees[p] - (p in hit) for p in kept]
        if any(v < 0 for v in new_deg):
            raise NonGraphic("layoff leaves a negative term")
        self.degrees = new_deg
        self.ids = [self.ids[p] for p in kept]
        self.normalize()
        return step


def _min_layoff_labeled(
    lab: LabeledSequence,
    m: int,
    slack_value: Fraction,
    k: int,
) -> tuple[list[LayoffStep], CliqueCertificate | None]:
    """Shared loop for :func:`iterated_min_layoff` and the reduction pipeline."""
    log: list[LayoffStep] = []
    clique_min_len = math.comb(k, 2) + 3
    stage = 0
    while True:
        length = len(lab.degrees)
        total = sum(lab.degrees)
        if k <= 2:
            if k <= 1 or total > 0:
                return log, CliqueCertificate(k, stage, lab.sequence(), 0 if k <= 1 else 2)
        elif length >= clique_min_len and total >= clique_potential(k, length):
            return log, CliqueCertificate(k, stage, lab.sequence(), clique_potential(k, length))
        if length == 0 or 2 * lab.degrees[-1] > m:
            return log, None
        if 2 * (k - 2) <= m:
            raise ContractViolation(
                f"slope m={m} must be below 2(k-2)={2 * (k - 2)} once no clique certificate applies"
            )
        # minimum term, last position on ties
        log.append(lab.lay_off(length))
        stage += 1


def iterated_min_layoff(
    seq: SequenceLike,
    m: int,
    slack: SlackFunction | Callable[[int], Fraction],
    k: int,
) -> CliqueCertificate | LayoffOutcome:
    """Repeatedly lay off a minimum term until every term exceeds ``m/2``.

    Returns a :class:`CliqueCertificate` if at some stage the sum reaches the
    clique threshold for ``K_k`` (only claimed when the current length is at
    least ``C(k,2)+3``); otherwise a :class:`LayoffOutcome` with the residual
    sequence and the ordered layoff log. Vertex ids in the log are positions in
    ``seq``.
    """
    s = as_sequence(seq)
    n = s.n
    need = m * n + Fraction(slack(n))
    if s.total < need:
        raise PreconditionSumTooSmall(f"sum {s.total} < m*n + slack(n) = {need}")
    lab = LabeledSequence.from_sequence(s)
    log, cert = _min_layoff_labeled(lab, m, Fraction(slack(n)), k)
    if cert is not None:
        return cert
    return LayoffOutcome(lab.sequence() if lab.degrees else None, tuple(lab.ids), tuple(log), n, Fraction(slack(n)))


def degree_sufficient(seq: SequenceLike, h) -> bool:
    """True iff ``d_i >= h_i`` for the top ``k`` terms (``h_i`` = sorted degrees of ``h``)."""
    s = as_sequence(seq)
    hdeg = sorted(h.degrees(), reverse=True)
    if s.n < len(hdeg):
        return False
    return all(d >= e for d, e in zip(s.terms, hdeg))


# --- enumeration ------------------------------------------------------------


def _nonincreasing(n: int, cap: int, total: int | None, floor: int = 0) -> Iterator[tuple[int, ...]]:
    prefix: list[int] = []

    def rec(slots: int, cap: int, remaining: int | None):
        if slots == 0:
            if remaining in (None, 0):
                yield tuple(prefix)
            return
        hi = cap
        lo = floor
        if remaining is not None:
            # the other slots-1 parts are each between floor and the current part
            hi = min(hi, remaining - floor * (slots - 1))
            lo = max(floor, -(-remaining // slots))
        for v in range(hi, lo - 1, -1):
            prefix.append(v)
            yield from rec(slots - 1, v, None if remaining is None else remaining - v)
            prefix.pop()

    yield from rec(n, cap, total)


def enumerate_graphic(
    n: int, sum_filter: int | None = None, positive: bool = False
) -> Iterator[GraphicSequence]:
    """Every graphic sequence of length ``n``, lexicographically decreasing.

    With ``sum_filter`` only sequences of that (even) sum are produced; this is
    the unit of partitioned iteration. ``positive`` drops sequences with a zero
    term.
    """
    if n < 1:
        raise ContractViolation("n must be positive")
    if sum_filter is not None:
        if sum_filter % 2 or sum_filter < 0:
            raise ContractViolation("sum_filter must be a nonnegative even integer")
        if sum_filter > n * (n - 1):
            return
    for terms in _nonincreasing(n, n - 1, sum_filter, 1 if positive else 0):
        if _erdos_gallai(terms):
            yield GraphicSequence(terms)
