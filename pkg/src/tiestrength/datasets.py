"""Bundled example graphs."""

from __future__ import annotations

from importlib import resources

from .graph import EdgeList, load_edge_list

BUILTIN = ("toy", "lesmis")
PREFIX = "builtin:"


def load(name: str, weighted: bool = False) -> EdgeList:
    if name not in BUILTIN:
        raise KeyError(f"no bundled graph named {name!r}; choose from {', '.join(BUILTIN)}")
    text = resources.files(__package__).joinpath("data", f"{name}.tsv").read_text(encoding="utf-8")
    return load_edge_list(text, weighted=weighted)


def toy() -> EdgeList:
    """Eight nodes in two communities joined by one bridge."""
    return load("toy")


def lesmis(weighted: bool = True) -> EdgeList:
    """Character co-appearances in Les Miserables, weighted by chapter count."""
    return load("lesmis", weighted)
