"""Independent reference computations used by the tests.

Deliberately plain Python (no numpy linear algebra) so they do not share a
code path with the implementation they check.
"""

import math


def normal_equations_ols(y, columns):
    """Solve (A'A) b = A'y for A = [1, columns...] by Gauss-Jordan elimination."""
    n = len(y)
    A = [[1.0] + [float(c[i]) for c in columns] for i in range(n)]
    k = len(A[0])
    M = [[math.fsum(A[r][i] * A[r][j] for r in range(n)) for j in range(k)] for i in range(k)]
    v = [math.fsum(A[r][i] * y[r] for r in range(n)) for i in range(k)]
    aug = [row + [rhs] for row, rhs in zip(M, v)]
    for col in range(k):
        piv = max(range(col, k), key=lambda r: abs(aug[r][col]))
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(k):
            if r != col:
                f = aug[r][col]
                aug[r] = [x - f * pc for x, pc in zip(aug[r], aug[col])]
    return [aug[i][k] for i in range(k)]


def log_diffs(values, scale=100.0):
    return [scale * (math.log(b) - math.log(a)) for a, b in zip(values, values[1:])]


def aic_bic(sse, n, k):
    base = n * math.log(sse / n)
    return base + 2 * k, base + k * math.log(n)
