"""Degree sequences that force or permit a fixed subgraph.

Modules: ``seqcore`` (sequences, layoffs), ``graphkit`` (small graphs),
``potential`` (profiles and lower bounds), ``oracle`` (exact small-n
decisions), ``constructive`` (switch-based embeddings and the reduction
pipeline), ``conjecture`` and ``cli``.
"""

from .constructive import bmdt_embed, claim11_bound, final_stage_embed, pipeline, reconstruct, reduce
from .graphkit import Graph, contains_subgraph, from_graph6, named_graph, to_graph6
from .oracle import is_potentially_h_graphic, sigma_exact
from .potential import extremal_sequence, lower_bound, profile
from .seqcore import GraphicSequence, SlackFunction, is_graphic, iterated_min_layoff, layoff, realize

__all__ = [
    "Graph",
    "GraphicSequence",
    "SlackFunction",
    "bmdt_embed",
    "claim11_bound",
    "contains_subgraph",
    "extremal_sequence",
    "final_stage_embed",
    "from_graph6",
    "is_graphic",
    "is_potentially_h_graphic",
    "iterated_min_layoff",
    "layoff",
    "lower_bound",
    "named_graph",
    "pipeline",
    "profile",
    "realize",
    "reconstruct",
    "reduce",
    "sigma_exact",
    "to_graph6",
]
