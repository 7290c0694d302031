"""Exact rational feasibility for {A x = b, x >= 0} via phase-1 simplex.

All arithmetic is in Fraction; Bland's rule guarantees termination. Redundant
equations are fine (artificials absorb rank deficiency).
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def feasible_nonnegative(rows, rhs):
    """Return some x >= 0 with A x = b exactly, or None if infeasible.

    rows: sequence of coefficient sequences (one per equation).
    rhs: sequence of right-hand sides.
    """
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])

    # tableau: n original columns, m artificial columns, rhs; flip rows so b >= 0
    T = []
    for row, b in zip(rows, rhs):
        r = [Fraction(v) for v in row]
        b = Fraction(b)
        if b < 0:
            r = [-v for v in r]
            b = -b
        T.append(r + [_ZERO] * m + [b])
    for i in range(m):
        T[i][n + i] = _ONE
    basis = list(range(n, n + m))

    # phase-1 cost: minimize the sum of artificials. bottom row holds the
    # reduced costs c_j - z_j and, in its rhs cell, minus the objective value.
    bottom = [_ZERO] * (n + m + 1)
    for j in range(n + m + 1):
        s = _ZERO
        for i in range(m):
            s += T[i][j]
        cj = _ZERO if j < n else _ONE
        bottom[j] = (cj - s) if j < n + m else -s

    width = n + m + 1
    for _ in range(100000):
        enter = -1
        for j in range(n + m):
            if bottom[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width - 1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return None  # unbounded; cannot happen in phase 1, defensive only
        piv = T[leave][enter]
        if piv != _ONE:
            T[leave] = [v / piv for v in T[leave]]
        prow = T[leave]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [v - f * w for v, w in zip(T[i], prow)]
        f = bottom[enter]
        if f != 0:
            bottom = [v - f * w for v, w in zip(bottom, prow)]
        basis[leave] = enter
    else:
        raise RuntimeError("simplex pivot limit reached")

    if bottom[width - 1] != 0:
        return None
    x = [_ZERO] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = T[i][width - 1]
    return x
