"""Directed web graph storage and the PageRank transition operator.

The hyperlink matrix ``P`` is never formed. Rows of dangling nodes (uniform
``1/n``) and the teleportation term of the Google matrix are applied as
rank-one corrections on top of a sparse matrix holding only real links.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import DimensionError, GraphFormatError, NodeRangeError


class WebGraph:
    """Immutable directed graph on nodes ``0..n-1`` in CSR layout.

    Parallel edges are collapsed on construction; self-loops are kept and
    count toward the out-degree. A node is dangling iff its successor list
    is empty.

    Parameters
    ----------
    n : int
        Number of nodes.
    src, dst : array_like of int
        Edge endpoints. Duplicates are allowed and removed.
    """

    def __init__(self, n, src=(), dst=()):
        n = int(n)
        if n <= 0:
            raise ValueError("node count must be positive")
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise DimensionError("src and dst must have the same length")
        if src.size:
            lo = min(src.min(), dst.min())
            hi = max(src.max(), dst.max())
            if lo < 0 or hi >= n:
                raise NodeRangeError(f"edge endpoint outside [0, {n})")
        keys = np.unique(src * n + dst)
        src, dst = np.divmod(keys, n)
        self._n = n
        self._indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=self._indptr[1:])
        self._indices = dst
        self._indptr.flags.writeable = False
        self._indices.flags.writeable = False

    @property
    def n(self) -> int:
        return self._n

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def edge_count(self) -> int:
        return int(self._indices.size)

    @cached_property
    def out_degree(self) -> np.ndarray:
        deg = np.diff(self._indptr)
        deg.flags.writeable = False
        return deg

    @cached_property
    def is_dangling(self) -> np.ndarray:
        mask = self.out_degree == 0
        mask.flags.writeable = False
        return mask

    @cached_property
    def dangling(self) -> np.ndarray:
        """Sorted ids of dangling nodes."""
        ids = np.flatnonzero(self.is_dangling)
        ids.flags.writeable = False
        return ids

    def successors(self, i) -> np.ndarray:
        return self._indices[self._indptr[i]:self._indptr[i + 1]]

    def edges(self):
        """Return ``(src, dst)`` arrays, sorted by source then target."""
        src = np.repeat(np.arange(self._n, dtype=np.int64), self.out_degree)
        return src, self._indices.copy()

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """0/1 adjacency matrix of the real links (no dangling augmentation)."""
        data = np.ones(self._indices.size, dtype=np.int8)
        return sp.csr_matrix((data, self._indices, self._indptr), shape=(self._n, self._n))

    @cached_property
    def _link_transpose(self) -> sp.csr_matrix:
        # (P_links)^T: entry [j, i] = 1/d_i for every link i -> j
        src, dst = self.edges()
        w = 1.0 / self.out_degree[src]
        return sp.csr_matrix((w, (dst, src)), shape=(self._n, self._n))

    @cached_property
    def _link_matrix(self) -> sp.csr_matrix:
        # P restricted to real links: entry [i, j] = 1/d_i
        deg = self.out_degree
        w = np.repeat(np.divide(1.0, deg, out=np.zeros(self._n), where=deg > 0), deg)
        return sp.csr_matrix((w, self._indices, self._indptr), shape=(self._n, self._n))

    def dense_P(self) -> np.ndarray:
        """Materialize the full hyperlink matrix. Small graphs only."""
        P = self._link_matrix.toarray()
        P[self.is_dangling, :] = 1.0 / self._n
        return P

    def __repr__(self):
        return f"WebGraph(n={self._n}, edges={self.edge_count}, dangling={self.dangling.size})"


def _check_length(graph, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (graph.n,):
        raise DimensionError(f"vector of shape {x.shape} does not match n={graph.n}")
    return x


def apply_P(graph: WebGraph, x) -> np.ndarray:
    """Row-vector product ``x P`` with dangling rows spread uniformly."""
    x = _check_length(graph, x)
    out = graph._link_transpose @ x
    leaked = x[graph.is_dangling].sum()
    if leaked:
        out += leaked / graph.n
    return out


def apply_P_column(graph: WebGraph, y) -> np.ndarray:
    """Column-vector product ``P y``."""
    y = _check_length(graph, y)
    out = graph._link_matrix @ y
    if graph.dangling.size:
        out[graph.is_dangling] = y.sum() / graph.n
    return out


@dataclass(frozen=True)
class TransitionOperator:
    """Google matrix ``G = c P + (1 - c)/n E`` applied matrix-free."""

    graph: WebGraph
    damping: float

    def __post_init__(self):
        if not 0.0 <= self.damping <= 1.0:
            raise ValueError(f"damping factor must lie in [0, 1], got {self.damping}")

    def apply(self, x) -> np.ndarray:
        return apply_G(self, x)

    def dense(self) -> np.ndarray:
        n = self.graph.n
        return self.damping * self.graph.dense_P() + (1.0 - self.damping) / n


def apply_G(op: TransitionOperator, x) -> np.ndarray:
    """Row-vector product ``x G``."""
    c = op.damping
    x = _check_length(op.graph, x)
    out = apply_P(op.graph, x)
    if c == 1.0:
        return out
    out *= c
    out += (1.0 - c) * x.sum() / op.graph.n
    return out


class PrincipalBlock:
    """Principal submatrix of ``P`` on a node subset, applied matrix-free.

    Entries are ``1/d_i`` for links inside the subset; a dangling row holds
    ``1/n`` in every column of the subset. For the ESCC this is the
    substochastic block ``T``.
    """

    def __init__(self, graph: WebGraph, nodes):
        self.graph = graph
        self.nodes = np.asarray(nodes, dtype=np.int64)
        self.size = self.nodes.size
        self._T = graph._link_matrix[self.nodes][:, self.nodes].tocsr()
        self._TT = self._T.T.tocsr()
        self._dangling = graph.is_dangling[self.nodes]
        self._any_dangling = bool(self._dangling.any())
        self._inv_n = 1.0 / graph.n

    def apply_column(self, y):
        """``B y``."""
        out = self._T @ y
        if self._any_dangling:
            out[self._dangling] = y.sum(axis=0) * self._inv_n
        return out

    def apply_row(self, x):
        """``x B``."""
        out = self._TT @ x
        if self._any_dangling:
            out += x[self._dangling].sum(axis=0) * self._inv_n
        return out

    def row_sums(self):
        return self.apply_column(np.ones(self.size))

    def dense(self):
        B = self._T.toarray()
        B[self._dangling, :] = self._inv_n
        return B


def _text_lines(source):
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    for raw in source:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        yield raw.rstrip("\r\n")


def ingest_edge_list(source) -> WebGraph:
    """Parse the edge-list text format into a :class:`WebGraph`.

    The first non-comment, non-blank line holds the node count. Every later
    non-blank line is ``src dst``. Lines starting with ``#`` are comments.
    ``source`` may be a binary or text stream, ``bytes`` or ``str``.
    """
    n = None
    src, dst = [], []
    for lineno, line in enumerate(_text_lines(source), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if n is None:
            if len(parts) != 1:
                raise GraphFormatError("expected node count header", lineno)
            try:
                n = int(parts[0])
            except ValueError:
                raise GraphFormatError(f"node count is not an integer: {parts[0]!r}", lineno) from None
            if n <= 0:
                raise GraphFormatError("node count must be positive", lineno)
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'src dst', got {s!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer endpoint in {s!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise NodeRangeError(f"edge {u} -> {v} outside [0, {n})", lineno)
        src.append(u)
        dst.append(v)
    if n is None:
        raise GraphFormatError("missing node count header")
    return WebGraph(n, src, dst)


def load_graph(path) -> WebGraph:
    with open(os.fspath(path), "rb") as fh:
        return ingest_edge_list(fh)


def write_edge_list(graph: WebGraph, fh) -> None:
    fh.write(f"{graph.n}\n")
    src, dst = graph.edges()
    for u, v in zip(src.tolist(), dst.tolist()):
        fh.write(f"{u} {v}\n")
