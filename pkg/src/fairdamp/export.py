"""CSV and text renderings of the analysis results.

All CSV output uses ``,`` separators, ``.`` decimals, a header row and LF
line endings, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile

import numpy as np

from .damping import bound_curve, r_of_c
from .pagerank import evaluate_mass
from .perturbation import class_entropy


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".15g")


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def write_atomic(path, text) -> None:
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fairdamp-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def census_csv(cen) -> str:
    return to_csv(["component", "size"], [(key, value) for key, _, value in cen.rows()])


def histogram_csv(histogram) -> str:
    return to_csv(["scc_size", "count"], sorted(histogram.items()))


def decomposition_csv(dec) -> str:
    return to_csv(["node_id", "block_label"], enumerate(dec.block_labels()))


def pagerank_csv(pr) -> str:
    return to_csv(["node_id", "pagerank"], enumerate(pr.values.tolist()))


def mass_curve_rows(curve, summary, grid):
    alpha = curve.alpha
    for c in grid:
        lower = bound_curve(alpha, summary.p1, c)
        upper = bound_curve(alpha, summary.lambda1, c)
        yield (c, evaluate_mass(curve, c), lower, upper, curve.truncation_bound(c),
               r_of_c(alpha, c))


def mass_curve_csv(curve, summary, grid) -> str:
    return to_csv(["c", "mass", "lower", "upper", "truncation", "r_of_c"],
                  mass_curve_rows(curve, summary, grid))


def coefficients_csv(curve, summary) -> str:
    a = curve.coefficients
    seq = summary.lambda_seq
    rows = [(0, a[0], "")]
    rows += [(k, a[k], seq[k - 1]) for k in range(1, a.size)]
    return to_csv(["k", "a_k", "lambda1_k"], rows)


def class_csv(graph, dec, limit, mus) -> str:
    rows = []
    for i, nodes in enumerate(dec.ergodic_classes):
        share = nodes.size / graph.n
        mass = limit.per_class_mass[i]
        rows.append((f"Q{i + 1}", nodes.size, class_entropy(mus[i]), mass, share, mass / share))
    return to_csv(["class_id", "size", "mu_entropy", "limit_mass", "fair_share", "ratio"], rows)


def _report_rows(reports):
    for rep in reports:
        yield rep.choice, rep.bound_names[0], rep.lower_bound
        yield rep.choice, rep.bound_names[1], rep.upper_bound
        if rep.c_star is not None:
            yield rep.choice, "c*", rep.c_star


def damping_csv(reports) -> str:
    return to_csv(["v", "bound", "value"], _report_rows(reports))


def damping_table(reports, alpha=None, p1=None, lambda1=None) -> str:
    lines = []
    if alpha is not None:
        lines.append(f"alpha = {alpha:.6f}   p1 = {p1:.6f}   lambda1 = {lambda1:.6f}")
    lines.append(f"{'v':<22}{'c':<16}{'value':>10}")
    lines.append("-" * 48)
    for rep in reports:
        first = True
        for choice, name, value in _report_rows([rep]):
            label = choice if first else ""
            lines.append(f"{label:<22}{name:<16}{value:>10.4f}")
            first = False
        if rep.hypotheses is not None:
            h = rep.hypotheses
            lower = "undecided" if h.lower is None else str(h.lower)
            lines.append(f"{'':<22}bounds valid: upper={h.upper} lower={lower}")
    return "\n".join(lines) + "\n"
