"""Pure-Python allocation enumeration (fallback for the compiled kernel).

Allocations are bitmasks over bid indices. ``A_flat`` is the J×K bundle
matrix in row-major order.
"""


def enumerate_allocations(A_flat, J, K, supply, owner, n_bidders, maximal_only=True):
    """Feasible (optionally set-wise maximal) allocations as bitmasks.

    Include-first depth-first order, so masks come out sorted by their
    selected-index tuples.
    """
    cols = [[A_flat[j * K + k] for j in range(J)] for k in range(K)]
    rem = list(supply)
    used = [False] * n_bidders
    out = []
    chosen = []

    def fits(k):
        if used[owner[k]]:
            return False
        col = cols[k]
        for j in range(J):
            if col[j] > rem[j]:
                return False
        return True

    def rec(k, mask):
        if k == K:
            if maximal_only:
                for q in range(K):
                    if not (mask >> q) & 1 and fits(q):
                        return
            out.append(mask)
            return
        if fits(k):
            col = cols[k]
            used[owner[k]] = True
            for j in range(J):
                rem[j] -= col[j]
            rec(k + 1, mask | (1 << k))
            for j in range(J):
                rem[j] += col[j]
            used[owner[k]] = False
        rec(k + 1, mask)

    rec(0, 0)
    return out
