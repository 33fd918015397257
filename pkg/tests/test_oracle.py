import json

import pytest

from brute import atlas_potential_table, atlas_sigma, nx_contains, to_nx
from potentialh.errors import CapExceeded, EmptyPattern, NonGraphic
from potentialh.graphkit import complete_graph, empty_graph, is_embedding, named_graph, path_graph
from potentialh.oracle import (
    VerdictCache,
    decide,
    is_potentially_h_graphic,
    max_nonpotential_at_sum,
    placements,
    realize_with_placement,
    sigma_exact,
)
from potentialh.graphkit import canonical_key
from potentialh.seqcore import GraphicSequence, enumerate_graphic

PATTERNS = ["K3", "K4", "P4", "C4", "C5", "2K2", "paw", "K1,3"]

# independently computed from the graph atlas (tests/brute.py), n starting at max(k, 3)
ATLAS_SIGMA = {
    "K3": [6, 10, 12, 12, 14],
    "K4": [12, 18, 26, 30],
    "P4": [8, 10, 12, 14],
    "C4": [10, 14, 16, 20],
    "C5": [16, 20, 24],
    "2K2": [8, 10, 12, 14],
    "paw": [10, 12, 14, 16],
    "K1,3": [10, 12, 14, 16],
}


@pytest.mark.parametrize("name", PATTERNS)
@pytest.mark.parametrize("n", range(3, 7))
def test_decisions_match_atlas(name, n):
    h = named_graph(name)
    table = atlas_potential_table(n, h.edges(), h.n)
    assert len(table) == sum(1 for _ in enumerate_graphic(n))
    for terms, expected in table.items():
        verdict = is_potentially_h_graphic(terms, h)
        assert verdict.decision == expected, terms
        assert decide(terms, h) == expected
        if expected:
            w = verdict.witness
            assert sorted(w.degrees(), reverse=True) == list(terms)
            assert nx_contains(to_nx(w.n, w.edges()), to_nx(h.n, h.edges()))


@pytest.mark.parametrize("name", PATTERNS)
def test_sigma_matches_atlas(name):
    h = named_graph(name)
    start = max(h.n, 3)
    got = [sigma_exact(h, n).sigma for n in range(start, 8)]
    assert got == ATLAS_SIGMA[name]
    assert got == [atlas_sigma(n, h.edges(), h.n) for n in range(start, 8)]


def test_sigma_witness():
    res = sigma_exact(complete_graph(3), 6)
    assert res.sigma == 12 and res.witness.terms == (5, 1, 1, 1, 1, 1)
    assert not decide(res.witness, complete_graph(3))


def test_k4_sigma_at_eight():
    # the zero term matters: (7^4, 0) beats every zero-free candidate
    assert sigma_exact(complete_graph(4), 8).sigma == 30
    assert sigma_exact(complete_graph(4), 8, positive=True).sigma == 28


def test_errors():
    with pytest.raises(CapExceeded):
        decide([1] * 14, complete_graph(3))
    with pytest.raises(CapExceeded):
        sigma_exact(complete_graph(3), 13)
    with pytest.raises(NonGraphic):
        decide((3, 3, 1, 1), complete_graph(3))
    with pytest.raises(EmptyPattern):
        sigma_exact(empty_graph(2), 5)
    assert decide((1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1), complete_graph(3), cap=14) is False


def test_trivial_cases():
    assert not decide((1, 1), complete_graph(3))
    v = is_potentially_h_graphic((2, 2, 1, 1), empty_graph(3))
    assert v.decision and v.witness.degrees() == [2, 2, 1, 1]


def test_realize_with_placement():
    h = path_graph(3)
    g = realize_with_placement([2, 2, 2, 2], h, {0: 3, 1: 0, 2: 1})
    assert g.degrees() == [2, 2, 2, 2] and is_embedding(g, h, {0: 3, 1: 0, 2: 1})
    assert realize_with_placement([1, 1, 1, 1], h, {0: 0, 1: 1, 2: 2}) is None


def test_placements_respect_degrees():
    seq = GraphicSequence((4, 3, 3, 2, 2, 1, 1))
    h = named_graph("paw")
    for place in placements(seq, h):
        assert len(set(place.values())) == h.n
        assert all(seq.terms[p] >= h.degree(u) for u, p in place.items())


def test_max_nonpotential_at_sum():
    seqs = max_nonpotential_at_sum(complete_graph(3), 6, 10)
    assert GraphicSequence((5, 1, 1, 1, 1, 1)) in seqs
    assert all(not decide(s, complete_graph(3)) for s in seqs)
    assert max_nonpotential_at_sum(complete_graph(3), 6, 12) == []


class TestCache:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        h = complete_graph(3)
        first = sigma_exact(h, 6, cache=VerdictCache(path))
        reloaded = VerdictCache(path)
        assert len(reloaded) == first.sequences_checked
        again = sigma_exact(h, 6, cache=reloaded)
        assert again == first
        assert len(path.read_text().splitlines()) == first.sequences_checked

    def test_torn_line_is_ignored(self, tmp_path):
        path = tmp_path / "cache.jsonl"
        key = canonical_key(complete_graph(3))
        path.write_text(json.dumps({"h": key, "sequence": "2^3", "verdict": True}) + '\n{"h": "Bw", "seq')
        cache = VerdictCache(path)
        assert len(cache) == 1 and cache.get(key, GraphicSequence((2, 2, 2))) is True

    def test_cached_answers_are_used(self, tmp_path):
        h = complete_graph(3)
        cache = VerdictCache()
        # a deliberately wrong entry proves the cache is consulted
        cache.put(canonical_key(h), GraphicSequence((5,) * 6), False)
        assert sigma_exact(h, 6, cache=cache).sigma == 32
