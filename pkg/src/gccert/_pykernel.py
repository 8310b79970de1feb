"""Pure-Python integer kernels for truncated series products and inverses.

Both kernels work on an integer exponent grid with integer coefficients;
the caller supplies the common denominators and rebuilds fractions once per
output term.
"""

from __future__ import annotations


def convolve(xe, xc, ye, yc, cap):
    """Sparse product of two sorted term lists, dropping exponents ``>= cap``.

    Returns a sorted list of ``(exponent, coefficient)`` with nonzero
    coefficients.
    """
    acc = {}
    ny = len(ye)
    for i in range(len(xe)):
        a = xe[i]
        if a + ye[0] >= cap:
            break
        ca = xc[i]
        for j in range(ny):
            e = a + ye[j]
            if e >= cap:
                break
            acc[e] = acc.get(e, 0) + ca * yc[j]
    return sorted((e, c) for e, c in acc.items() if c)


def inverse_monic(idx, alpha, den, size):
    """Inverse of ``1 + sum alpha_i/den T^idx_i`` on the grid ``0..size-1``.

    The k-th coefficient of the inverse is ``beta_k / den**k``; the integer
    recurrence is ``beta_k = -sum_i alpha_i den**(i-1) beta_{k-i}``.
    """
    weights = [a * den ** (i - 1) for i, a in zip(idx, alpha)]
    beta = [0] * size
    beta[0] = 1
    nz = len(idx)
    for k in range(1, size):
        s = 0
        for p in range(nz):
            i = idx[p]
            if i > k:
                break
            b = beta[k - i]
            if b:
                s += weights[p] * b
        beta[k] = -s
    return [(k, b) for k, b in enumerate(beta) if b]
