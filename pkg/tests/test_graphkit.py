import itertools
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import brute_independence, nx_contains, to_nx
from potentialh.errors import ContractViolation, OrderTooLarge, ParseError
from potentialh.graphkit import (
    Graph,
    automorphisms,
    canonical_form,
    canonical_key,
    complete_bipartite,
    complete_graph,
    contains_subgraph,
    cycle_graph,
    disjoint_union,
    emit,
    empty_graph,
    enumerate_subgraphs_up_to_iso,
    from_graph6,
    graphs_up_to_iso,
    independence_number,
    is_embedding,
    join,
    max_independent_set,
    named_graph,
    parse,
    paw,
    path_graph,
    star_graph,
    to_edge_list,
    to_graph6,
)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, c in zip(pairs, chosen) if c])


class TestGraph:
    def test_validation(self):
        with pytest.raises(ContractViolation):
            Graph(2, (0b10, 0))  # asymmetric
        with pytest.raises(ContractViolation):
            Graph(1, (1,))  # loop
        with pytest.raises(ContractViolation):
            Graph.from_edges(3, [(0, 3)])

    def test_basic_queries(self):
        g = path_graph(4)
        assert g.edges() == [(0, 1), (1, 2), (2, 3)]
        assert g.degrees() == [1, 2, 2, 1]
        assert g.max_degree() == 2 and g.edge_count() == 3
        assert g.induced([1, 2, 3]).edges() == [(0, 1), (1, 2)]
        assert g.complement().edge_count() == 3

    def test_catalog(self):
        assert star_graph(3).degrees() == [3, 1, 1, 1]
        assert paw().degrees() == [3, 2, 2, 1]
        assert complete_bipartite(2, 3).edge_count() == 6
        assert named_graph("2K2").edges() == [(0, 1), (2, 3)]
        assert named_graph("K1,3") == star_graph(3)
        assert named_graph("E3").edge_count() == 0
        assert join(complete_graph(2), empty_graph(3)).edge_count() == 1 + 6
        assert disjoint_union(complete_graph(3), complete_graph(2)).edge_count() == 4
        with pytest.raises(ContractViolation):
            named_graph("Q7")

    def test_label_does_not_affect_equality(self):
        assert complete_graph(3) == complete_graph(3).with_label("other")


class TestGraph6:
    def test_known_codes(self):
        assert to_graph6(complete_graph(3)) == "Bw"
        assert to_graph6(path_graph(4)) == "Ch"
        assert to_graph6(complete_graph(2)) == "A_"
        assert from_graph6("B_") == Graph.from_edges(3, [(0, 1)])

    def test_header(self):
        assert from_graph6(">>graph6<<Bw") == complete_graph(3)

    def test_matches_networkx(self):
        rng = random.Random(7)
        for _ in range(40):
            n = rng.randint(1, 70)
            g = nx.gnp_random_graph(n, 0.3, seed=rng.randint(0, 10**6))
            ours = Graph.from_edges(n, g.edges())
            assert to_graph6(ours) == nx.to_graph6_bytes(g, header=False).decode().strip()

    def test_large_order_prefix(self):
        g = path_graph(70)
        assert to_graph6(g)[0] == "~"
        assert from_graph6(to_graph6(g)) == g

    @given(graphs(12))
    def test_round_trip(self, g):
        assert from_graph6(to_graph6(g)) == g
        assert parse(to_edge_list(g)) == g
        assert parse(emit(g, "edges")) == parse(emit(g, "graph6"))

    def test_errors_carry_offsets(self):
        with pytest.raises(ParseError) as exc:
            from_graph6("B\x01")
        assert exc.value.offset == 1
        with pytest.raises(ParseError):
            from_graph6("Bww")  # too long
        with pytest.raises(ParseError):
            from_graph6("Bx")  # padding bits set
        with pytest.raises(ParseError):
            parse("n 3\n0 5\n")
        with pytest.raises(ParseError):
            parse("")


class TestIndependence:
    @pytest.mark.parametrize("g,alpha", [(complete_graph(5), 1), (path_graph(4), 2), (cycle_graph(5), 2), (empty_graph(4), 4)])
    def test_examples(self, g, alpha):
        assert independence_number(g) == alpha

    @given(graphs(9))
    def test_matches_brute_force(self, g):
        assert independence_number(g) == brute_independence(g.n, g.edges())
        s = max_independent_set(g)
        assert all(not g.has_edge(a, b) for a, b in itertools.combinations(s, 2))


class TestContainment:
    def test_examples(self):
        assert contains_subgraph(cycle_graph(5), path_graph(4)) is not None
        assert contains_subgraph(star_graph(4), complete_graph(3)) is None
        m = contains_subgraph(complete_graph(4), cycle_graph(4))
        assert m is not None and is_embedding(complete_graph(4), cycle_graph(4), m)

    @given(graphs(8), graphs(5))
    def test_matches_networkx(self, host, pattern):
        found = contains_subgraph(host, pattern)
        assert (found is not None) == nx_contains(to_nx(host.n, host.edges()), to_nx(pattern.n, pattern.edges()))
        if found is not None:
            assert is_embedding(host, pattern, found)


class TestCanonical:
    @given(graphs(8), st.data())
    def test_invariant_under_relabeling(self, g, data):
        perm = data.draw(st.permutations(list(range(g.n))))
        assert canonical_key(g.relabel(perm)) == canonical_key(g)

    def test_distinguishes(self):
        assert canonical_key(path_graph(4)) != canonical_key(star_graph(3))
        assert canonical_key(cycle_graph(6)) != canonical_key(disjoint_union(complete_graph(3), complete_graph(3)))

    def test_form_is_isomorphic(self):
        g = paw()
        assert contains_subgraph(canonical_form(g), g) is not None

    def test_automorphism_counts(self):
        assert len(automorphisms(cycle_graph(5))) == 10
        assert len(automorphisms(complete_graph(4))) == 24
        assert len(automorphisms(path_graph(4))) == 2

    @pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)])
    def test_class_counts(self, n, count):
        assert len(graphs_up_to_iso(n)) == count

    def test_class_count_cap(self):
        with pytest.raises(OrderTooLarge):
            graphs_up_to_iso(8)


class TestSubgraphUniverse:
    def _brute(self, g):
        keys = set()
        for r in range(1, g.edge_count() + 1):
            for edges in itertools.combinations(g.edges(), r):
                for keep in range(2, g.n + 1):
                    used = sorted({v for e in edges for v in e})
                    if len(used) > keep:
                        continue
                    idx = {v: i for i, v in enumerate(used)}
                    sub = Graph.from_edges(keep, [(idx[a], idx[b]) for a, b in edges])
                    keys.add(canonical_key(sub))
        return keys

    @pytest.mark.parametrize("g", [complete_graph(3), path_graph(4), paw(), cycle_graph(5), complete_graph(4)])
    def test_matches_edge_subsets(self, g):
        got = [canonical_key(s) for s in enumerate_subgraphs_up_to_iso(g)]
        assert len(got) == len(set(got))
        assert set(got) == self._brute(g)

    def test_triangle(self):
        got = {canonical_key(s) for s in enumerate_subgraphs_up_to_iso(complete_graph(3))}
        expected = {canonical_key(x) for x in [complete_graph(2), Graph.from_edges(3, [(0, 1)]), path_graph(3), complete_graph(3)]}
        assert got == expected

    def test_cap(self):
        with pytest.raises(OrderTooLarge):
            list(enumerate_subgraphs_up_to_iso(path_graph(11)))
