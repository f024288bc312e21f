"""Ergodic structure of the PageRank walk: bow-tie, extended SCC, Pure OUT.

Under the PageRank hyperlink matrix a dangling node links to every node.
Rather than materializing those ``n`` links per dangling node, the augmented
graph gets one virtual hub ``h``: every dangling ``d`` links to ``h`` and
``h`` links to every real node. A path ``x -> ... -> d -> h -> y`` exists
exactly when the augmented path ``x -> ... -> d -> y`` does, so strongly
connected components among real nodes are unchanged.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import breadth_first_order

from .graph import WebGraph


def _tarjan(indptr, indices, n):
    """Iterative Tarjan on a CSR graph.

    Returns ``(labels, count)``. Component labels are issued in reverse
    topological order of the condensation: label 0 is a sink component.
    """
    ptr = indptr.tolist()
    succ = indices.tolist()
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    label = [-1] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        call = [[root, ptr[root]]]
        while call:
            frame = call[-1]
            v, pos = frame
            end = ptr[v + 1]
            lv = low[v]
            descended = False
            while pos < end:
                w = succ[pos]
                pos += 1
                iw = index[w]
                if iw == -1:
                    frame[1] = pos
                    low[v] = lv
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    call.append([w, ptr[w]])
                    descended = True
                    break
                if onstack[w] and iw < lv:
                    lv = iw
            if descended:
                continue
            low[v] = lv
            call.pop()
            if lv == index[v]:
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    label[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if call:
                u = call[-1][0]
                if lv < low[u]:
                    low[u] = lv
    return np.asarray(label, dtype=np.int64), ncomp


def _augmented_csr(graph: WebGraph):
    n = graph.n
    hub = n
    indices = np.insert(graph.indices, graph.indptr[graph.dangling], hub)
    indices = np.concatenate([indices, np.arange(n, dtype=np.int64)])
    deg = graph.out_degree + graph.is_dangling
    indptr = np.zeros(n + 2, dtype=np.int64)
    np.cumsum(np.append(deg, n), out=indptr[1:])
    return indptr, indices


def scc_labels(graph: WebGraph, augmented=False):
    """SCC label per node, labels in reverse topological order.

    With ``augmented=True`` every dangling node is treated as linking to all
    nodes. Returns ``(labels, count)`` over the ``n`` real nodes.
    """
    if augmented and graph.dangling.size:
        indptr, indices = _augmented_csr(graph)
        labels, count = _tarjan(indptr, indices, graph.n + 1)
        # the hub shares a component with every dangling node, so dropping
        # it leaves no gap in the label numbering
        return labels[:graph.n], count
    return _tarjan(graph.indptr, graph.indices, graph.n)


def _groups(labels, count):
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(count + 1))
    return [order[bounds[k]:bounds[k + 1]] for k in range(count)]


def strongly_connected_components(graph: WebGraph, augmented=False):
    """Strongly connected components as sorted node arrays.

    Components come in reverse topological order of the condensation (every
    component precedes the components that can reach it).
    """
    labels, count = scc_labels(graph, augmented)
    return _groups(labels, count)


def _pick_largest(graph: WebGraph, labels, count):
    n = graph.n
    sizes = np.bincount(labels, minlength=count)
    min_id = np.full(count, n, dtype=np.int64)
    np.minimum.at(min_id, labels, np.arange(n))
    # a singleton only carries a cycle through a self-loop
    cyclic = sizes > 1
    src, dst = graph.edges()
    cyclic[labels[src[src == dst]]] = True
    # larger size first, then cyclic, then smaller minimum node id
    return int(np.lexsort((min_id, ~cyclic, -sizes))[0])


def _reach(matrix, start, n):
    mask = np.zeros(n, dtype=bool)
    mask[breadth_first_order(matrix, int(start), directed=True, return_predecessors=False)] = True
    return mask


@dataclass(frozen=True)
class BowTie:
    giant_scc: np.ndarray
    in_component: np.ndarray
    out_component: np.ndarray
    other: np.ndarray


def bow_tie(graph: WebGraph, labels=None) -> BowTie:
    """Classify nodes into giant SCC, IN, OUT and the rest (original links only)."""
    n = graph.n
    if labels is None:
        labels, count = scc_labels(graph)
    else:
        count = int(labels.max()) + 1
    giant = _pick_largest(graph, labels, count)
    core = labels == giant
    seed = int(np.flatnonzero(core)[0])
    A = graph.adjacency
    downstream = _reach(A, seed, n)
    upstream = _reach(A.T.tocsr(), seed, n)
    in_mask = upstream & ~core
    out_mask = downstream & ~core
    other = ~(core | in_mask | out_mask)
    return BowTie(
        giant_scc=np.flatnonzero(core),
        in_component=np.flatnonzero(in_mask),
        out_component=np.flatnonzero(out_mask),
        other=np.flatnonzero(other),
    )


@dataclass(frozen=True)
class StructureDecomposition:
    """Partition of the nodes into ESCC, ergodic Pure-OUT classes and the rest.

    ``ordering`` lists the ergodic classes first, then the transient Pure-OUT
    nodes, then the ESCC. Under that permutation the hyperlink matrix is
    block lower triangular with the ergodic classes as closed diagonal blocks.

    ``leaky`` is false when part of the ESCC is itself closed under the
    undamped walk (empty Pure OUT, or a closed largest SCC in a graph without
    dangling nodes). The ESCC block is then not strictly substochastic and
    the c -> 1 analysis does not apply.
    """

    n: int
    escc: np.ndarray
    ergodic_classes: list
    transient_out: np.ndarray
    ordering: np.ndarray
    labels: np.ndarray = field(repr=False)
    leaky: bool = True

    @property
    def m(self) -> int:
        return len(self.ergodic_classes)

    @property
    def n_escc(self) -> int:
        return int(self.escc.size)

    @property
    def alpha(self) -> float:
        return self.escc.size / self.n

    @property
    def pure_out(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.n), self.escc, assume_unique=True)

    @property
    def transient(self) -> np.ndarray:
        """Transient states of the undamped chain: transient Pure OUT, then ESCC."""
        return np.concatenate([self.transient_out, self.escc])

    def escc_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[self.escc] = True
        return mask

    def class_index(self) -> np.ndarray:
        """Ergodic class index per node, -1 outside the classes."""
        idx = np.full(self.n, -1, dtype=np.int64)
        for k, q in enumerate(self.ergodic_classes):
            idx[q] = k
        return idx

    def block_labels(self):
        """Per-node block name: ``ESCC``, ``S`` or ``Q<k>`` (1-based)."""
        names = np.full(self.n, "S", dtype=object)
        names[self.escc] = "ESCC"
        for k, q in enumerate(self.ergodic_classes, start=1):
            names[q] = f"Q{k}"
        return names.tolist()


def decompose(graph: WebGraph) -> StructureDecomposition:
    """Split the graph along the ergodic structure of the hyperlink walk.

    With dangling nodes present the ESCC is the augmented component holding
    them, i.e. every node that can reach a dangling node. Without dangling
    nodes the ESCC is the largest SCC together with all of its ancestors, so
    that no link enters it from outside.
    """
    n = graph.n
    src, dst = graph.edges()
    if graph.dangling.size:
        labels, count = scc_labels(graph, augmented=True)
        escc_mask = labels == labels[graph.dangling[0]]
        leaky = not escc_mask.all()
    else:
        labels, count = scc_labels(graph)
        core_label = _pick_largest(graph, labels, count)
        core = labels == core_label
        seed = int(np.flatnonzero(core)[0])
        escc_mask = _reach(graph.adjacency.T.tocsr(), seed, n)
        from_core = labels[src] == core_label
        leaky = bool(np.any(from_core & (labels[dst] != core_label)))

    pure_src = ~escc_mask[src]
    leaving = pure_src & (labels[src] != labels[dst])
    open_labels = np.zeros(count, dtype=bool)
    open_labels[labels[src[leaving]]] = True

    pure = np.flatnonzero(~escc_mask)
    classes = [c for c in _groups(labels[pure], count) if c.size]
    classes = [pure[c] for c in classes]
    ergodic = [c for c in classes if not open_labels[labels[c[0]]]]
    ergodic.sort(key=lambda c: (-c.size, int(c[0])))
    in_class = np.zeros(n, dtype=bool)
    for c in ergodic:
        in_class[c] = True
    transient_out = np.flatnonzero(~escc_mask & ~in_class)
    escc = np.flatnonzero(escc_mask)
    ordering = np.concatenate(ergodic + [transient_out, escc]).astype(np.int64)
    return StructureDecomposition(
        n=n,
        escc=escc,
        ergodic_classes=ergodic,
        transient_out=transient_out,
        ordering=ordering,
        labels=labels,
        leaky=leaky,
    )


CENSUS_ROWS = (
    ("total", "Total size"),
    ("scc", "Number of nodes in SCC"),
    ("in", "Number of nodes in IN"),
    ("out", "Number of nodes in OUT"),
    ("escc", "Number of nodes in ESCC"),
    ("pure_out", "Number of nodes in Pure OUT"),
    ("sccs_in_out", "Number of SCCs in OUT"),
    ("sccs_in_pure_out", "Number of SCCs in Pure OUT"),
)


@dataclass(frozen=True)
class Census:
    counts: dict
    pure_out_histogram: dict
    bowtie: BowTie
    decomposition: StructureDecomposition

    def __getitem__(self, key):
        return self.counts[key]

    def rows(self):
        return [(key, title, self.counts[key]) for key, title in CENSUS_ROWS]


def census(graph: WebGraph) -> Census:
    """Component sizes of the bow-tie and of the ergodic decomposition.

    ``pure_out_histogram`` maps SCC size to the number of SCCs of that size
    inside Pure OUT.
    """
    labels, _ = scc_labels(graph)
    bt = bow_tie(graph, labels)
    dec = decompose(graph)
    pure = dec.pure_out
    pure_sizes = Counter(np.unique(labels[pure], return_counts=True)[1].tolist())
    counts = {
        "total": graph.n,
        "scc": int(bt.giant_scc.size),
        "in": int(bt.in_component.size),
        "out": int(bt.out_component.size),
        "escc": dec.n_escc,
        "pure_out": int(pure.size),
        "sccs_in_out": int(np.unique(labels[bt.out_component]).size),
        "sccs_in_pure_out": int(sum(pure_sizes.values())),
    }
    return Census(
        counts=counts,
        pure_out_histogram=dict(sorted(pure_sizes.items())),
        bowtie=bt,
        decomposition=dec,
    )
