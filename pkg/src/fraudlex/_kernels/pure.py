"""Pure-Python kernels, the fallback when the compiled extension is absent.

Both backends implement the same two hot loops with the same operation
order, so they produce bit-identical results; the compiled one is just
faster.  Keep any change here in lockstep with ``_native.pyx``.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"


def count_category(ids, child_start, child_count, edge_token, edge_child, term_len) -> int:
    """Count non-overlapping longest matches of one category's trie.

    ``ids`` holds token ids (-1 for tokens outside the pattern vocabulary);
    the remaining arrays are the flattened trie (see markers._flatten_trie).
    """
    n = len(ids)
    count = 0
    i = 0
    while i < n:
        node = 0
        best = 0
        j = i
        while j < n:
            t = ids[j]
            if t < 0:
                break
            lo = child_start[node]
            hi = lo + child_count[node]
            nxt = -1
            for k in range(lo, hi):
                if edge_token[k] == t:
                    nxt = edge_child[k]
                    break
            if nxt < 0:
                break
            node = nxt
            j += 1
            if term_len[node] > 0:
                best = term_len[node]
        if best > 0:
            count += 1
            i += best
        else:
            i += 1
    return count


def dual_cd(X, y, C: float, tol: float, max_epochs: int):
    """Dual coordinate descent for the L1-loss linear SVM.

    Solves min_a 1/2 aQa - sum(a) s.t. 0 <= a_i <= C with
    Q_ij = y_i y_j x_i.x_j, sweeping variables in a fixed 0..n-1 order.
    The bias is the last column of ``X`` (a constant 1 appended by the
    caller), so no equality constraint is needed.

    Returns (w, alpha, epochs_run, max_violation) where ``max_violation``
    is the largest projected-gradient magnitude seen in the final epoch.
    """
    n, d = X.shape
    w = np.zeros(d)
    alpha = np.zeros(n)
    qii = [sum(X[i, k] * X[i, k] for k in range(d)) for i in range(n)]
    max_pg = 0.0
    epoch = 0
    while epoch < max_epochs:
        epoch += 1
        max_pg = 0.0
        for i in range(n):
            g = 0.0
            for k in range(d):
                g += w[k] * X[i, k]
            g = y[i] * g - 1.0
            a = alpha[i]
            if a == 0.0:
                pg = g if g < 0.0 else 0.0
            elif a == C:
                pg = g if g > 0.0 else 0.0
            else:
                pg = g
            if abs(pg) > max_pg:
                max_pg = abs(pg)
            if pg != 0.0:
                a_new = a - g / qii[i]
                if a_new < 0.0:
                    a_new = 0.0
                elif a_new > C:
                    a_new = C
                if a_new != a:
                    alpha[i] = a_new
                    coef = (a_new - a) * y[i]
                    for k in range(d):
                        w[k] += coef * X[i, k]
        if max_pg <= tol:
            break
    return w, alpha, epoch, max_pg
