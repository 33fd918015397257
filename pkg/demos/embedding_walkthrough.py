"""
Embedding a pattern by switches and by reduction
================================================

First a bounded-degree sequence gets a triangle placed on its top vertices
by degree-preserving switches. Then a sequence with a few hubs goes through
the reduce / embed / reconstruct pipeline for P4, and the trace is shown
stage by stage.
"""

import random

from potentialh.constructive import bmdt_repair, pipeline
from potentialh.graphkit import complete_graph, named_graph
from potentialh.seqcore import SlackFunction, format_terms, parse_terms, realize
from potentialh.switches import random_switches

# a 4-regular sequence on 60 vertices, repaired from a shuffled realization
seq = [4] * 60
start = random_switches(realize(seq), random.Random(0), 200)
rep = bmdt_repair(seq, complete_graph(3), start=start)
print(f"g={rep.constants.g_value} f={rep.constants.f_value}")
print(f"switches used: {len(rep.switches)} ({len(rep.exchanges)} four-edge exchanges)")
print(f"triangle on vertices {sorted(rep.embedding.values())}")

# the pipeline on a sequence with two hubs
terms = parse_terms("69,48,2^39,1^55")
res = pipeline(terms, named_graph("P4"), SlackFunction.constant(2))
trace = res.trace
print(f"\noutcome {res.outcome}, ell={trace.ell}, stop reason {trace.reason.value}")
print(f"initial layoffs: {len(trace.initial_layoffs)}")
for i, stage in enumerate(trace.stages):
    line = f"stage {i}: n={stage.n} top term {stage.sequence.terms[0]}"
    if stage.top is not None:
        line += f", deleted {len(stage.deleted)}, layoffs {len(stage.layoffs)}"
    print(line)
print(f"residual {format_terms(trace.residual.terms)}")
print(f"final branch {res.final.branch}, embedding {res.embedding}")
assert res.graph.degrees() == terms
