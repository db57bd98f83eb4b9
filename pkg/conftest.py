"""Shared fixtures: the finite test graphs and tree balls used across the suite"""

import pytest

from graph_core import (build_graph, generate_complete, generate_complete_bipartite, generate_cycle,
                        generate_subdivision, generate_tree_ball)


@pytest.fixture
def single_edge():
    return build_graph([[0, 1]], side=['U', 'W'])


@pytest.fixture
def k4():
    return generate_complete(4)


@pytest.fixture
def k23():
    return generate_complete_bipartite(2, 3)


@pytest.fixture
def k34():
    return generate_complete_bipartite(3, 4)


@pytest.fixture
def sub_k4():
    return generate_subdivision(generate_complete(4))


@pytest.fixture
def c6():
    return generate_cycle(6)


@pytest.fixture
def ball33():
    return generate_tree_ball(3, 3, 6)


@pytest.fixture
def ball34():
    return generate_tree_ball(3, 4, 6)


@pytest.fixture
def small_graphs(k23, k34, sub_k4, c6):
    return [k23, k34, sub_k4, c6]
