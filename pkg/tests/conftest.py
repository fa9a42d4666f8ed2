from __future__ import annotations

import pytest

from oddkh.corpus import corpus_names, load_diagram
from oddkh.diagram import parse_pd

TREFOIL_LEFT = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
FIGURE_EIGHT = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"
KINK = "X(1,1,2,2)"
HOPF = "X(4,1,3,2) X(2,3,1,4)"


@pytest.fixture(scope="session")
def kink():
    return parse_pd(KINK)


@pytest.fixture(scope="session")
def trefoil():
    return parse_pd(TREFOIL_LEFT)


@pytest.fixture(scope="session")
def figure_eight():
    return parse_pd(FIGURE_EIGHT)


@pytest.fixture(scope="session")
def hopf():
    return parse_pd(HOPF)


def small_corpus(max_crossings=6):
    return [(name, load_diagram(name)) for name in corpus_names(max_crossings=max_crossings)]
