# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled allocation enumeration; same contract as ``_enum_py``."""

from libc.stdlib cimport malloc, free


cdef inline bint _fits(int k, long *A, long *rem, char *used, int *owner, int J, int K) nogil:
    cdef int j
    if used[owner[k]]:
        return 0
    for j in range(J):
        if A[j * K + k] > rem[j]:
            return 0
    return 1


def enumerate_allocations(A_flat, int J, int K, supply, owner, int n_bidders, bint maximal_only=True):
    if K > 63:
        raise ValueError("bitmask kernel supports at most 63 bids")
    cdef long *A = <long *> malloc(max(1, J * K) * sizeof(long))
    cdef long *rem = <long *> malloc(max(1, J) * sizeof(long))
    cdef int *own = <int *> malloc(max(1, K) * sizeof(int))
    cdef char *used = <char *> malloc(max(1, n_bidders) * sizeof(char))
    cdef char *state = <char *> malloc((K + 1) * sizeof(char))
    cdef int j, k, q
    cdef unsigned long long mask = 0
    cdef bint ok
    out = []
    try:
        for j in range(J * K):
            A[j] = A_flat[j]
        for j in range(J):
            rem[j] = supply[j]
        for k in range(K):
            own[k] = owner[k]
        for j in range(n_bidders):
            used[j] = 0
        # state[k]: 0 = not visited, 1 = took bid k, 2 = skipped bid k
        for k in range(K + 1):
            state[k] = 0
        k = 0
        while k >= 0:
            if k == K:
                ok = 1
                if maximal_only:
                    for q in range(K):
                        if not ((mask >> q) & 1) and _fits(q, A, rem, used, own, J, K):
                            ok = 0
                            break
                if ok:
                    out.append(mask)
                k -= 1
                continue
            if state[k] == 0:
                if _fits(k, A, rem, used, own, J, K):
                    state[k] = 1
                    used[own[k]] = 1
                    for j in range(J):
                        rem[j] -= A[j * K + k]
                    mask |= (<unsigned long long> 1) << k
                else:
                    state[k] = 2
                k += 1
                if k < K:
                    state[k] = 0
            elif state[k] == 1:
                used[own[k]] = 0
                for j in range(J):
                    rem[j] += A[j * K + k]
                mask &= ~((<unsigned long long> 1) << k)
                state[k] = 2
                k += 1
                if k < K:
                    state[k] = 0
            else:
                state[k] = 0
                k -= 1
        return out
    finally:
        free(A)
        free(rem)
        free(own)
        free(used)
        free(state)
