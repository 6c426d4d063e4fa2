"""Pure-Python integer linear algebra kernels.

Reference implementation of the two hot loops (Smith reduction and the
Bareiss determinant).  cuntzmc._kernels_cy is a compiled twin with
identical semantics; cuntzmc.kernels picks one at import time.

All arithmetic is on Python ints, so results are exact at any size.
Matrices are row-major lists of lists and are modified in place.
"""

__all__ = ["snf_kernel", "det_kernel"]


def snf_kernel(a, nrows, ncols, keep_u, keep_v):
    """Reduce `a` to Smith normal form in place.

    Returns (d, u, v, u_sign, v_sign) where d is the full diagonal
    (length min(nrows, ncols), nonnegative, divisibility chain, zeros
    trailing), u and v are the accumulated row/column transforms (or
    None when not requested) satisfying u*a_in*v = diag(d), and
    u_sign/v_sign are det(u), det(v) in {1, -1}.

    Pivot rule: smallest nonzero magnitude in the working submatrix,
    ties broken by lowest (row, col).  Deterministic for fixed input.
    """
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)] if keep_u else None
    v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)] if keep_v else None
    u_sign = 1
    v_sign = 1
    ndiag = nrows if nrows < ncols else ncols

    t = 0
    while t < ndiag:
        # Select the pivot: smallest |entry| != 0, lowest (row, col) on ties.
        bi = -1
        bj = -1
        best = 0
        for i in range(t, nrows):
            ai = a[i]
            for j in range(t, ncols):
                e = ai[j]
                if e:
                    if e < 0:
                        e = -e
                    if best == 0 or e < best:
                        best = e
                        bi = i
                        bj = j
                        if best == 1:
                            break
            if best == 1:
                break
        if best == 0:
            break  # working submatrix is zero; remaining diagonal stays 0

        if bi != t:
            a[t], a[bi] = a[bi], a[t]
            u_sign = -u_sign
            if keep_u:
                u[t], u[bi] = u[bi], u[t]
        if bj != t:
            for row in a:
                row[t], row[bj] = row[bj], row[t]
            v_sign = -v_sign
            if keep_v:
                for row in v:
                    row[t], row[bj] = row[bj], row[t]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u_sign = -u_sign
            if keep_u:
                u[t] = [-x for x in u[t]]

        p = a[t][t]
        at = a[t]
        dirty = False

        # Clear column t below the pivot.
        for i in range(t + 1, nrows):
            ai = a[i]
            e = ai[t]
            if e:
                q = e // p
                if q:
                    for j in range(t, ncols):
                        ai[j] -= q * at[j]
                    if keep_u:
                        ui = u[i]
                        ut = u[t]
                        for j in range(nrows):
                            ui[j] -= q * ut[j]
                if ai[t]:
                    dirty = True  # nonzero remainder < p survives

        # Clear row t right of the pivot.
        for j in range(t + 1, ncols):
            e = at[j]
            if e:
                q = e // p
                if q:
                    for i in range(t, nrows):
                        a[i][j] -= q * a[i][t]
                    if keep_v:
                        for i in range(ncols):
                            v[i][j] -= q * v[i][t]
                if at[j]:
                    dirty = True

        if dirty:
            continue  # a remainder < p exists; reselect a smaller pivot

        # Pivot must divide every remaining entry; if not, fold the
        # offending row into row t and resume reduction.
        bad = -1
        for i in range(t + 1, nrows):
            ai = a[i]
            for j in range(t + 1, ncols):
                if ai[j] % p:
                    bad = i
                    break
            if bad >= 0:
                break
        if bad >= 0:
            ab = a[bad]
            for j in range(t, ncols):
                at[j] += ab[j]
            if keep_u:
                ut = u[t]
                ub = u[bad]
                for j in range(nrows):
                    ut[j] += ub[j]
            continue

        t += 1

    d = [a[i][i] for i in range(ndiag)]
    return d, u, v, u_sign, v_sign


def det_kernel(a, n):
    """Exact determinant of the n x n matrix `a` (destroyed) by
    Bareiss fraction-free elimination.  All divisions are exact."""
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = -1
            for i in range(k + 1, n):
                if a[i][k]:
                    piv = i
                    break
            if piv < 0:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        ak = a[k]
        akk = ak[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * ak[j]) // prev
            ai[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]
