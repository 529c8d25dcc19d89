"""Exact minimum-cost bipartite matching of a prescribed size.

Dense successive-shortest-augmenting-path solver with dual potentials.
Costs may be negative and the matrix rectangular; the match count is fixed
by the caller, which is exactly what the placement problem needs (a set
number of units in service) and what the trajectory step needs (a full
permutation). With the count fixed, shifting all costs by a constant never
changes the argmin, so negative costs are handled by a one-off shift.
"""

import numpy as np

__all__ = ["min_cost_matching"]


def min_cost_matching(cost, size: int) -> tuple[list[tuple[int, int]], float]:
    """Minimum-total-cost matching with exactly `size` row/column pairs.

    Returns (pairs sorted by row, total cost of the original matrix).
    Deterministic: every argmin prefers the lowest index, so fully tied
    inputs select the diagonal prefix (lowest row/column pairs first).

    Raises ValueError for a non-matrix, non-finite entries, or
    size > min(shape).
    """
    c_in = np.asarray(cost, dtype=float)
    if c_in.ndim != 2:
        raise ValueError("cost must be a 2-D matrix")
    n_rows, n_cols = c_in.shape
    if not 0 <= size <= min(n_rows, n_cols):
        raise ValueError(f"match size {size} infeasible for {n_rows}x{n_cols} costs")
    if size == 0:
        return [], 0.0
    if not np.isfinite(c_in).all():
        raise ValueError("cost entries must be finite")

    c = c_in - min(float(c_in.min()), 0.0)

    u = np.zeros(n_rows)
    v = np.zeros(n_cols)
    row_match = np.full(n_rows, -1, dtype=int)
    col_match = np.full(n_cols, -1, dtype=int)
    columns = np.arange(n_cols)

    for _ in range(size):
        # Multi-source shortest path over columns: any free row is a source.
        free_rows = np.flatnonzero(row_match < 0)
        reduced = c[free_rows] - u[free_rows][:, None] - v[None, :]
        best = reduced.argmin(axis=0)
        dist = reduced[best, columns]
        parent = free_rows[best]
        row_dist = np.full(n_rows, np.inf)
        row_dist[free_rows] = 0.0
        scanned = np.zeros(n_cols, dtype=bool)

        while True:
            masked = np.where(scanned, np.inf, dist)
            j = int(masked.argmin())
            path_len = float(masked[j])
            scanned[j] = True
            i = int(col_match[j])
            if i < 0:
                end_col = j
                break
            # Matched column: continue through its row (tight back edge).
            row_dist[i] = path_len
            relaxed = path_len + c[i] - u[i] - v
            improve = ~scanned & (relaxed < dist)
            dist[improve] = relaxed[improve]
            parent[improve] = i

        # Potential update capped at the path length keeps every residual
        # reduced cost nonnegative and the matched edges tight.
        v += np.minimum(dist, path_len)
        u -= np.minimum(row_dist, path_len)

        j = end_col
        while True:
            i = int(parent[j])
            previous = int(row_match[i])
            row_match[i] = j
            col_match[j] = i
            if previous < 0:
                break
            j = previous

    rows = np.flatnonzero(row_match >= 0)
    pairs = [(int(i), int(row_match[i])) for i in rows]
    total = float(c_in[rows, row_match[rows]].sum())
    return pairs, total
