import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from potentialh.errors import ContractViolation
from potentialh.graphkit import Graph, path_graph
from potentialh.seqcore import realize
from potentialh.switches import Switch, apply_switches, random_switches, two_switch_path


def test_apply_and_inverse():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    sw = Switch(((0, 1), (2, 3)), ((0, 2), (1, 3)))
    h = apply_switches(g, [sw])
    assert h.edges() == [(0, 2), (1, 3)]
    assert apply_switches(h, [sw.inverse()]) == g


def test_invalid_switches():
    g = path_graph(4)
    with pytest.raises(ContractViolation):
        apply_switches(g, [Switch(((0, 2),), ((0, 3),))])
    with pytest.raises(ContractViolation):
        apply_switches(g, [Switch(((0, 1),), ((0, 3),))])
    with pytest.raises(ContractViolation):
        two_switch_path(g, Graph.from_edges(4, [(0, 1)]))


@given(st.integers(0, 10**6))
def test_path_between_realizations(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 16)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.4]
    g = Graph.from_edges(n, edges)
    target = random_switches(g, rng, 40)
    assert target.degrees() == g.degrees()
    assert apply_switches(g, two_switch_path(g, target)) == target


def test_random_switches_moves():
    g = realize([3] * 10)
    out = random_switches(g, random.Random(1), 25)
    assert out.degrees() == g.degrees() and out != g
