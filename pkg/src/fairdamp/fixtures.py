"""Bundled example graphs."""

from importlib import resources

from .graph import WebGraph, ingest_edge_list


def example_graph() -> WebGraph:
    """The reconstructed 12-node example (IN, SCC, OUT, one dangling node)."""
    with resources.files("fairdamp").joinpath("data/example12.txt").open("rb") as fh:
        return ingest_edge_list(fh)


def example_graph_path():
    return resources.files("fairdamp").joinpath("data/example12.txt")
