# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the integer series kernels (see _pykernel)."""


def convolve(list xe, list xc, list ye, list yc, long long cap):
    cdef Py_ssize_t i, j, nx = len(xe), ny = len(ye)
    cdef long long a, e
    cdef dict acc = {}
    cdef object ca
    if nx == 0 or ny == 0:
        return []
    cdef long long y0 = ye[0]
    for i in range(nx):
        a = xe[i]
        if a + y0 >= cap:
            break
        ca = xc[i]
        for j in range(ny):
            e = a + <long long>ye[j]
            if e >= cap:
                break
            if e in acc:
                acc[e] = acc[e] + ca * yc[j]
            else:
                acc[e] = ca * yc[j]
    return sorted([(k, v) for k, v in acc.items() if v])


def inverse_monic(list idx, list alpha, object den, Py_ssize_t size):
    cdef Py_ssize_t k, p, i, nz = len(idx)
    cdef list weights = [alpha[p] * den ** (idx[p] - 1) for p in range(nz)]
    cdef list beta = [0] * size
    cdef object s, b
    beta[0] = 1
    for k in range(1, size):
        s = 0
        for p in range(nz):
            i = idx[p]
            if i > k:
                break
            b = beta[k - i]
            if b:
                s = s + weights[p] * b
        beta[k] = -s
    return [(k, beta[k]) for k in range(size) if beta[k]]
