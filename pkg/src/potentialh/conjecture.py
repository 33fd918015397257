"""Compare the profile slope with its best value over subgraphs."""

from __future__ import annotations

from dataclasses import dataclass

from .graphkit import Graph, enumerate_subgraphs_up_to_iso, independence_number
from .potential import profile


@dataclass(frozen=True)
class ConjectureGap:
    sigma_tilde: int
    subgraph_max: int
    gap: int
    witness: Graph


def first_index_value(h: Graph) -> int:
    """``sigma_tilde_i`` of ``h`` at ``i = alpha(h) + 1``."""
    return profile(h).sigma_tilde_i[independence_number(h) + 1]


def conjecture_gap(h: Graph) -> ConjectureGap:
    """``max over subgraphs H'`` of ``sigma_tilde_{alpha(H')+1}(H')`` minus ``sigma_tilde(h)``.

    Subgraphs are taken up to isomorphism, including ones padded with isolated
    vertices. Among subgraphs reaching the maximum the witness is one with the
    most edges. The sign of the gap is kept; nothing is asserted about it.
    """
    st = profile(h).sigma_tilde
    best = None
    witness = None
    for sub in enumerate_subgraphs_up_to_iso(h):
        value = first_index_value(sub)
        if best is None or value > best or (value == best and sub.edge_count() > witness.edge_count()):
            best, witness = value, sub
    return ConjectureGap(st, best, best - st, witness)
