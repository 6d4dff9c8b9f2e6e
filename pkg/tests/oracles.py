"""Independent reference implementations, deliberately loop-based and free
of anything imported from mgc."""

import numpy as np


def brute_distances(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = len(x)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            s = 0.0
            for c in range(x.shape[1]):
                s += (x[i, c] - x[j, c]) ** 2
            d[i, j] = np.sqrt(s)
    return d


def brute_column_ranks(d, descending=False):
    """Rank of row i within column j: self 0, then by value, ties by index."""
    n = d.shape[0]
    r = np.zeros((n, n), dtype=int)
    for j in range(n):
        others = [i for i in range(n) if i != j]
        sign = -1 if descending else 1
        others.sort(key=lambda i: (sign * d[i, j], i))
        for pos, i in enumerate(others, start=1):
            r[i, j] = pos
    return r


def brute_double_center(m):
    n = m.shape[0]
    out = np.zeros((n, n))
    grand = sum(m[s, t] for s in range(n) for t in range(n)) / n**2
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            row = sum(m[i, t] for t in range(n)) / n
            col = sum(m[s, j] for s in range(n)) / n
            out[i, j] = m[i, j] - row - col + grand
    return out


def brute_unbiased_center(m):
    n = m.shape[0]
    out = np.zeros((n, n))
    total = sum(m[s, t] for s in range(n) for t in range(n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            col = sum(m[t, j] for t in range(n))
            row = sum(m[i, s] for s in range(n))
            out[i, j] = m[i, j] - col / (n - 2) - row / (n - 2) + total / ((n - 1) * (n - 2))
    return out


def textbook_corr(u, v):
    """Pearson correlation of two flattened arrays, 0 if either is constant."""
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if np.ptp(u) == 0 or np.ptp(v) == 0:
        return 0.0
    return float(np.corrcoef(u, v)[0, 1])


def flood_fill_components(mask):
    """Components of an 8-connected boolean grid, via iterative DFS."""
    mask = np.asarray(mask, dtype=bool)
    seen = np.zeros_like(mask)
    comps = []
    rows, cols = mask.shape
    for i in range(rows):
        for j in range(cols):
            if mask[i, j] and not seen[i, j]:
                stack, cells = [(i, j)], []
                seen[i, j] = True
                while stack:
                    a, b = stack.pop()
                    cells.append((a, b))
                    for da in (-1, 0, 1):
                        for db in (-1, 0, 1):
                            u, v = a + da, b + db
                            if 0 <= u < rows and 0 <= v < cols and mask[u, v] and not seen[u, v]:
                                seen[u, v] = True
                                stack.append((u, v))
                comps.append(sorted(cells))
    return comps


def union_find_components(mask):
    mask = np.asarray(mask, dtype=bool)
    rows, cols = mask.shape
    parent = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(rows):
        for j in range(cols):
            if mask[i, j]:
                parent[(i, j)] = (i, j)
    for i in range(rows):
        for j in range(cols):
            if not mask[i, j]:
                continue
            for da, db in ((0, 1), (1, -1), (1, 0), (1, 1)):
                u, v = i + da, j + db
                if 0 <= u < rows and 0 <= v < cols and mask[u, v]:
                    ra, rb = find((i, j)), find((u, v))
                    if ra != rb:
                        parent[rb] = ra
    groups = {}
    for cell in parent:
        groups.setdefault(find(cell), []).append(cell)
    return [sorted(g) for g in groups.values()]


def reference_largest(comps, shape):
    """Largest component; ties go to the one with the smallest cell."""
    out = np.zeros(shape, dtype=bool)
    if not comps:
        return out
    best = min(comps, key=lambda c: (-len(c), c[0]))
    for a, b in best:
        out[a, b] = True
    return out
