import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import brute_nabla
from potentialh.errors import ContractViolation, EmptyPattern, IndexOutOfRange, NotPotentially, NTooSmall
from potentialh.graphkit import (
    Graph,
    complete_graph,
    contains_subgraph,
    cycle_graph,
    empty_graph,
    graphs_up_to_iso,
    join,
    named_graph,
    path_graph,
    star_graph,
    subdivided_star,
)
from potentialh.oracle import decide
from potentialh.potential import (
    circulant_regular,
    extremal_realization,
    extremal_sequence,
    is_split_canonical,
    lower_bound,
    profile,
    split_canonicalize,
    valid_indices,
    yin_li_check,
)
from potentialh.seqcore import enumerate_graphic, realize
from potentialh.switches import random_switches

PATTERNS = ["K3", "K4", "P4", "C4", "C5", "2K2", "paw", "K1,3"]


class TestProfile:
    @pytest.mark.parametrize(
        "name,alpha,nabla,sigma",
        [
            ("K3", 1, {2: 1, 3: 2}, 2),
            ("K4", 1, {2: 1, 3: 2, 4: 3}, 4),
            ("P4", 2, {3: 1, 4: 2}, 2),
            ("C4", 2, {3: 2, 4: 2}, 3),
            ("K1,3", 3, {4: 3}, 2),
        ],
    )
    def test_frozen(self, name, alpha, nabla, sigma):
        prof = profile(named_graph(name))
        assert prof.alpha == alpha and prof.nabla == nabla and prof.sigma_tilde == sigma

    def test_empty_pattern(self):
        with pytest.raises(EmptyPattern):
            profile(empty_graph(3))

    @pytest.mark.parametrize("name", PATTERNS)
    def test_nabla_matches_brute_force(self, name):
        h = named_graph(name)
        prof = profile(h)
        for i in prof.indices:
            assert prof.nabla[i] == brute_nabla(h.n, h.edges(), i)
            assert h.induced(prof.witness[i]).max_degree() == prof.nabla[i]
            assert prof.sigma_tilde_i[i] == 2 * (h.n - i) + prof.nabla[i] - 1
        assert prof.sigma_tilde == max(prof.sigma_tilde_i.values())
        assert all(prof.sigma_tilde_i[i] == prof.sigma_tilde for i in prof.argmax_i)

    def test_nabla_positive_above_independence(self):
        for g in graphs_up_to_iso(6):
            if g.edge_count() == 0:
                continue
            prof = profile(g)
            assert all(prof.nabla[i] >= 1 for i in prof.indices)


@pytest.mark.parametrize("t", range(3, 8))
def test_subdivided_star_first_index(t):
    # both graphs have independence number t; compare sigma_tilde at i = t + 1
    sub, star = profile(subdivided_star(t)), profile(star_graph(t))
    assert sub.alpha == star.alpha == t
    assert contains_subgraph(subdivided_star(t), star_graph(t)) is not None
    assert (sub.sigma_tilde_i[t + 1], star.sigma_tilde_i[t + 1]) == (2, t - 1)
    # strict only from t = 4 on; at t = 3 the two values coincide
    assert (sub.sigma_tilde_i[t + 1] < star.sigma_tilde_i[t + 1]) == (t >= 4)


class TestExtremal:
    def test_k3_shape(self):
        spec = extremal_sequence(complete_graph(3), 2, 7)
        assert spec.sequence.terms == (6,) + (1,) * 6 and not spec.parity_adjusted
        spec = extremal_sequence(complete_graph(3), 3, 7)
        assert spec.parity_adjusted and spec.sequence.terms == (1,) * 6 + (0,)

    def test_errors(self):
        with pytest.raises(IndexOutOfRange):
            extremal_sequence(complete_graph(3), 1, 6)
        with pytest.raises(NTooSmall):
            extremal_sequence(complete_graph(4), 4, 2)

    @pytest.mark.parametrize("name", PATTERNS)
    @pytest.mark.parametrize("n", [6, 9, 12, 17])
    def test_realizations_avoid_pattern(self, name, n):
        h = named_graph(name)
        for i in valid_indices(h, n):
            spec = extremal_sequence(h, i, n)
            g = extremal_realization(spec)
            assert sorted(g.degrees(), reverse=True) == list(spec.sequence.terms)
            assert contains_subgraph(g, h) is None

    @pytest.mark.parametrize("name", ["K3", "P4", "C4", "paw"])
    @pytest.mark.parametrize("n", [6, 7, 8])
    def test_extremal_not_potential(self, name, n):
        h = named_graph(name)
        for i in valid_indices(h, n):
            assert not decide(extremal_sequence(h, i, n).sequence, h)

    def test_circulant(self):
        for m, r in [(7, 2), (8, 3), (9, 4), (10, 5)]:
            assert circulant_regular(m, r).degrees() == [r] * m
        with pytest.raises(ContractViolation):
            circulant_regular(7, 3)

    @pytest.mark.parametrize("n", range(4, 20))
    def test_k3_lower_bound(self, n):
        assert lower_bound(complete_graph(3), n) == 2 * n

    def test_k4_lower_bound(self):
        # (n-1)^2 joined to an independent set of size n-2
        assert [lower_bound(complete_graph(4), n) for n in (8, 9, 10, 11)] == [4 * n - 4 for n in (8, 9, 10, 11)]


class TestYinLi:
    def test_examples(self):
        assert yin_li_check((3, 2, 2, 1), 3)
        assert not yin_li_check((2, 2, 2, 2), 3)
        assert not yin_li_check((3, 3, 3, 3), 4)
        with pytest.raises(ContractViolation):
            yin_li_check((1, 1), 3)

    @pytest.mark.parametrize("k", [3, 4])
    def test_certificate_is_sound(self, k):
        h = complete_graph(k)
        for n in range(k, 8):
            for seq in enumerate_graphic(n):
                if yin_li_check(seq, k):
                    assert decide(seq, h), seq


class TestSplitCanonicalize:
    @given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
    def test_places_split_graph_on_top_vertices(self, seed, r, s):
        rng = random.Random(seed)
        n = rng.randint(r + s + 2, 14)
        base = join(complete_graph(r), empty_graph(s))
        edges = set(base.edges())
        for a, b in itertools.combinations(range(n), 2):
            if rng.random() < 0.3:
                edges.add((a, b))
        g = random_switches(Graph.from_edges(n, sorted(edges)), rng, 30)
        if contains_subgraph(g, base) is None:
            return
        out = split_canonicalize(g, r, s)
        assert out.degrees() == g.degrees()
        assert is_split_canonical(out, r, s)

    def test_absent_split_graph(self):
        with pytest.raises(NotPotentially):
            split_canonicalize(cycle_graph(6), 3, 0)

    def test_already_canonical(self):
        g = join(complete_graph(2), empty_graph(3))
        assert split_canonicalize(g, 2, 3) == g
