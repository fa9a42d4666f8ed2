"""Bundled diagram corpus and reference tables."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .diagram import LinkDiagram, parse_pd

__all__ = ["corpus_names", "load_diagram", "load_corpus", "goldens"]


@lru_cache(maxsize=None)
def _entries() -> dict[str, str]:
    text = resources.files("oddkh.data").joinpath("corpus.txt").read_text()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, pd = line.split(None, 1)
        out[name] = pd
    return out


def corpus_names(max_crossings: int | None = None, knots_only: bool = False) -> list[str]:
    """Corpus names in file order, optionally filtered."""
    names = []
    for name in _entries():
        d = load_diagram(name)
        if max_crossings is not None and d.n > max_crossings:
            continue
        if knots_only and d.component_count != 1:
            continue
        names.append(name)
    return names


@lru_cache(maxsize=None)
def load_diagram(name: str) -> LinkDiagram:
    try:
        return parse_pd(_entries()[name])
    except KeyError:
        raise KeyError(f"no corpus entry {name!r}") from None


def load_corpus(names=None) -> dict[str, LinkDiagram]:
    return {n: load_diagram(n) for n in (names or _entries())}


@lru_cache(maxsize=None)
def goldens() -> dict:
    """Reduced odd Khovanov tables, Jones polynomials (in ``t``) and determinants from KnotInfo."""
    return json.loads(resources.files("oddkh.data").joinpath("knotinfo_goldens.json").read_text())
