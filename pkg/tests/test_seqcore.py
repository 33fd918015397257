import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import brute_graphic
from potentialh.errors import ContractViolation, NonGraphic, PreconditionSumTooSmall
from potentialh.seqcore import (
    CliqueCertificate,
    GraphicSequence,
    LayoffOutcome,
    SlackFunction,
    clique_potential,
    degree_sufficient,
    enumerate_graphic,
    format_terms,
    graphic_terms,
    havel_hakimi_edges,
    is_graphic,
    iterated_min_layoff,
    layoff,
    parse_terms,
    realize,
)
from potentialh.graphkit import complete_graph, path_graph


def nonincreasing(n_max=9):
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n).map(lambda t: tuple(sorted(t, reverse=True)))
    )


class TestParsing:
    def test_multiplicity(self):
        assert parse_terms("7,2^6,1") == [7, 2, 2, 2, 2, 2, 2, 1]
        assert parse_terms(" ( 3 , 3 ^2 ) ") == [3, 3, 3]

    def test_format_round_trip(self):
        assert format_terms([5, 1, 1, 1, 1, 1]) == "5,1^5"
        assert parse_terms(format_terms([4, 4, 3, 0])) == [4, 4, 3, 0]

    def test_bad_token(self):
        with pytest.raises(ContractViolation):
            parse_terms("3,x")
        with pytest.raises(ContractViolation):
            parse_terms("")

    @given(st.lists(st.integers(0, 9), min_size=1, max_size=20))
    def test_format_inverse(self, terms):
        assert parse_terms(format_terms(terms)) == terms

    def test_sequence_validation(self):
        with pytest.raises(ContractViolation):
            GraphicSequence((1, 2))
        with pytest.raises(ContractViolation):
            GraphicSequence((3, 1, 1))  # term exceeds n-1
        with pytest.raises(ContractViolation):
            GraphicSequence(())
        assert str(GraphicSequence.parse("1,2,2")) == "2^2,1"


class TestGraphicality:
    def test_examples(self):
        assert is_graphic((2, 2, 2, 2, 2))
        assert not is_graphic((3, 3, 1, 1))
        assert not is_graphic((1,) * 3)
        assert is_graphic((0,))

    def test_graphic_terms_any_order(self):
        assert graphic_terms([1, 2, 1])
        assert not graphic_terms([-1, 1])

    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_labeled_enumeration(self, n):
        for terms in itertools.combinations_with_replacement(range(n - 1, -1, -1), n):
            assert is_graphic(terms) == brute_graphic(terms), terms

    @given(nonincreasing())
    def test_realization_degrees(self, terms):
        if is_graphic(terms):
            g = realize(terms)
            assert g.degrees() == list(terms)
        else:
            with pytest.raises(NonGraphic):
                havel_hakimi_edges(terms)


class TestLayoff:
    def test_examples(self):
        assert layoff((3, 3, 2, 2, 2), 1).terms == (2, 2, 1, 1)
        assert layoff((2, 2, 2, 2, 2), 5).terms == (2, 2, 1, 1)
        assert layoff((1, 1), 1).terms == (0,)
        assert layoff((3, 3, 2, 2, 2), 5).terms == (2, 2, 2, 2)
        assert layoff((2, 2, 2), 1).terms == (1, 1)
        assert layoff((0, 0), 2).terms == (0,)

    def test_second_branch(self):
        # d_i >= i: the term at position 2 skips itself and hits positions 1,3,4
        assert layoff((3, 3, 2, 2), 2).terms == (2, 1, 1)

    def test_errors(self):
        with pytest.raises(NonGraphic):
            layoff((2, 0, 0), 1)
        with pytest.raises(ContractViolation):
            layoff((0,), 1)
        with pytest.raises(ContractViolation):
            layoff((1, 1), 3)

    @given(nonincreasing(10), st.data())
    def test_preserves_graphicality(self, terms, data):
        if len(terms) < 2:
            return
        i = data.draw(st.integers(1, len(terms)))
        try:
            out = layoff(terms, i)
        except NonGraphic:
            assert not is_graphic(terms)
            return
        assert is_graphic(out) == is_graphic(terms)
        assert out.total == sum(terms) - 2 * terms[i - 1]


class TestSlack:
    def test_values(self):
        assert SlackFunction.constant(5)(100) == 5
        assert SlackFunction.sqrt(2)(100) == 20
        assert SlackFunction.sqrt(1)(2) == Fraction(1414, 1000)

    def test_round_trip(self):
        s = SlackFunction.sqrt(Fraction(3, 2))
        assert SlackFunction.from_dict(s.to_dict()) == s

    def test_rejects_negative(self):
        with pytest.raises(ContractViolation):
            SlackFunction.constant(-1)


class TestIteratedMinLayoff:
    def test_precondition(self):
        with pytest.raises(PreconditionSumTooSmall):
            iterated_min_layoff((1, 1, 1, 1), 2, SlackFunction.constant(0), 4)

    def test_nothing_to_do(self):
        out = iterated_min_layoff((3, 3, 3, 3, 3, 3, 3, 3, 3, 3), 2, SlackFunction.constant(0), 5)
        assert isinstance(out, LayoffOutcome) and out.log == () and out.sequence.terms == (3,) * 10

    def test_clique_certificate(self):
        # sum 2n reaches the triangle threshold once n >= 6
        out = iterated_min_layoff((2,) * 8, 1, SlackFunction.constant(0), 3)
        assert isinstance(out, CliqueCertificate) and out.threshold == clique_potential(3, 8) == 16

    def test_slope_too_large_without_certificate(self):
        with pytest.raises(ContractViolation):
            iterated_min_layoff((5, 5, 5, 5, 4, 2), 4, SlackFunction.constant(0), 4)

    def test_log_replays(self):
        rng = random.Random(3)
        for _ in range(50):
            n = rng.randint(20, 40)
            terms = sorted([rng.randint(0, 6) for _ in range(n - 2)] + [rng.randint(10, n - 1) for _ in range(2)], reverse=True)
            if sum(terms) % 2:
                terms[-1] += 1
                terms.sort(reverse=True)
            if not is_graphic(terms) or sum(terms) < 2 * n:
                continue
            out = iterated_min_layoff(terms, 2, SlackFunction.constant(0), 5)
            if isinstance(out, CliqueCertificate):
                continue
            assert out.sequence is None or min(out.sequence.terms) > 1
            removed = {st.removed for st in out.log}
            assert removed.isdisjoint(out.ids)
            assert sorted(removed | set(out.ids)) == list(range(n))


class TestEnumeration:
    def test_small(self):
        assert [s.terms for s in enumerate_graphic(3)] == [(2, 2, 2), (2, 1, 1), (1, 1, 0), (0, 0, 0)]

    @pytest.mark.parametrize("n,count", [(1, 1), (4, 11), (6, 102), (7, 342), (8, 1213)])
    def test_counts(self, n, count):
        assert sum(1 for _ in enumerate_graphic(n)) == count

    def test_positive_counts(self):
        # degree sequences without isolated vertices
        assert [sum(1 for _ in enumerate_graphic(n, positive=True)) for n in range(2, 8)] == [1, 2, 7, 20, 71, 240]

    def test_sum_filter(self):
        by_sum = sum(sum(1 for _ in enumerate_graphic(7, s)) for s in range(0, 43, 2))
        assert by_sum == 342
        assert list(enumerate_graphic(3, 8)) == []
        assert [x.terms for x in enumerate_graphic(2, 2)] == [(1, 1)]
        with pytest.raises(ContractViolation):
            list(enumerate_graphic(3, 3))

    def test_order_is_lexicographically_decreasing(self):
        seqs = [s.terms for s in enumerate_graphic(6)]
        assert seqs == sorted(seqs, reverse=True)


def test_degree_sufficient():
    assert degree_sufficient((3, 3, 3, 3, 0), complete_graph(4))
    assert not degree_sufficient((3, 3, 3, 2, 1), complete_graph(4))
    assert degree_sufficient((2, 2, 1, 1), path_graph(4))
    assert not degree_sufficient((1, 1), path_graph(4))
