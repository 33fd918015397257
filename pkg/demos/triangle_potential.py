"""
Exact potential numbers for the triangle
========================================

Compares the exact value of sigma(K3, n) with the extremal lower bound and
the linear slope sigma_tilde * n, for the orders the exact oracle handles
quickly.
"""

from potentialh.graphkit import complete_graph
from potentialh.oracle import sigma_exact
from potentialh.potential import extremal_realization, extremal_sequence, lower_bound, profile
from potentialh.seqcore import format_terms

triangle = complete_graph(3)

# the profile: nabla_i is the least maximum degree of an i-vertex induced subgraph
prof = profile(triangle)
print(f"alpha={prof.alpha} sigma_tilde={prof.sigma_tilde}")
for i, nabla, st in prof.rows():
    print(f"  i={i} nabla={nabla} sigma_tilde_i={st}")

# exact values against the lower bound; the witness is a largest non-potential sequence
print("\n n  exact  lower  slope*n  witness")
for n in range(4, 10):
    res = sigma_exact(triangle, n)
    print(f"{n:2d}  {res.sigma:5d}  {lower_bound(triangle, n):5d}  {prof.sigma_tilde * n:7d}  {format_terms(res.witness.terms)}")

# the extremal sequence at i = 2 is a star: one dominating vertex and nothing else
spec = extremal_sequence(triangle, 2, 9)
g = extremal_realization(spec)
print(f"\nextremal sequence {format_terms(spec.sequence.terms)}, realization edges {g.edge_count()}")
