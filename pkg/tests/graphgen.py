"""Random directed graphs with web-like ergodic structure."""

import numpy as np

from fairdamp.graph import WebGraph


def random_graph(rng, n=None, mean_degree=None, dangling_frac=None, sink_groups=None):
    """Random graph, optionally with planted dead-end groups.

    Planted groups only link among themselves, so they end up as ergodic
    classes of Pure OUT unless they contain a dangling node.
    """
    if n is None:
        n = int(rng.integers(5, 101))
    if mean_degree is None:
        mean_degree = float(rng.uniform(0.8, 6.0))
    if dangling_frac is None:
        dangling_frac = float(rng.choice([0.0, 0.05, 0.15, 0.3]))
    if sink_groups is None:
        sink_groups = int(rng.integers(0, 5))

    perm = rng.permutation(n)
    group_of = np.full(n, -1)
    start = 0
    groups = []
    for g in range(sink_groups):
        size = int(rng.integers(1, 5))
        if start + size > n // 2:
            break
        members = perm[start:start + size]
        group_of[members] = g
        groups.append(members)
        start += size
    free = perm[start:]
    n_dangling = int(round(dangling_frac * free.size))
    dangling = set(free[:n_dangling].tolist())

    src, dst = [], []
    for u in range(n):
        if u in dangling:
            continue
        g = group_of[u]
        if g >= 0:
            members = groups[g]
            k = int(rng.integers(1, members.size + 1))
            targets = rng.choice(members, size=k, replace=True)
        else:
            k = max(1, int(rng.poisson(mean_degree)))
            targets = rng.integers(0, n, size=k)
        src.extend([u] * len(targets))
        dst.extend(int(t) for t in targets)
    return WebGraph(n, src, dst)


def graph_corpus(seed, count):
    rng = np.random.default_rng(seed)
    return [random_graph(rng) for _ in range(count)]
