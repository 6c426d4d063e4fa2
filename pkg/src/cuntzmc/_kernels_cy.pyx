# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer linear algebra kernels.

Twin of cuntzmc._kernels_py with identical semantics and outputs.
Entries stay Python ints (arbitrary precision); Cython removes the
interpreter overhead of the index loops.
"""

__all__ = ["snf_kernel", "det_kernel"]


def snf_kernel(list a, Py_ssize_t nrows, Py_ssize_t ncols, bint keep_u, bint keep_v):
    """See cuntzmc._kernels_py.snf_kernel."""
    cdef list u = None
    cdef list v = None
    cdef list ai, at, ut, ui, ab, ub, row
    cdef Py_ssize_t i, j, t, bi, bj, bad, ndiag
    cdef int u_sign = 1
    cdef int v_sign = 1
    cdef bint dirty
    cdef object e, best, p, q

    if keep_u:
        u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    if keep_v:
        v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    ndiag = nrows if nrows < ncols else ncols

    t = 0
    while t < ndiag:
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
            break

        if bi != t:
            a[t], a[bi] = a[bi], a[t]
            u_sign = -u_sign
            if keep_u:
                u[t], u[bi] = u[bi], u[t]
        if bj != t:
            for i in range(nrows):
                row = a[i]
                row[t], row[bj] = row[bj], row[t]
            v_sign = -v_sign
            if keep_v:
                for i in range(ncols):
                    row = v[i]
                    row[t], row[bj] = row[bj], row[t]
        at = a[t]
        if at[t] < 0:
            a[t] = at = [-x for x in at]
            u_sign = -u_sign
            if keep_u:
                u[t] = [-x for x in u[t]]

        p = at[t]
        dirty = False

        for i in range(t + 1, nrows):
            ai = a[i]
            e = ai[t]
            if e:
                q = e // p
                if q:
                    for j in range(t, ncols):
                        ai[j] = ai[j] - q * at[j]
                    if keep_u:
                        ui = u[i]
                        ut = u[t]
                        for j in range(nrows):
                            ui[j] = ui[j] - q * ut[j]
                if ai[t]:
                    dirty = True

        for j in range(t + 1, ncols):
            e = at[j]
            if e:
                q = e // p
                if q:
                    for i in range(t, nrows):
                        ai = a[i]
                        ai[j] = ai[j] - q * ai[t]
                    if keep_v:
                        for i in range(ncols):
                            ai = v[i]
                            ai[j] = ai[j] - q * ai[t]
                if at[j]:
                    dirty = True

        if dirty:
            continue

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
                at[j] = at[j] + ab[j]
            if keep_u:
                ut = u[t]
                ub = u[bad]
                for j in range(nrows):
                    ut[j] = ut[j] + ub[j]
            continue

        t += 1

    d = [a[i][i] for i in range(ndiag)]
    return d, u, v, u_sign, v_sign


def det_kernel(list a, Py_ssize_t n):
    """See cuntzmc._kernels_py.det_kernel."""
    cdef Py_ssize_t i, j, k, piv
    cdef int sign = 1
    cdef object prev = 1
    cdef object akk, aik
    cdef list ai, ak

    if n == 0:
        return 1
    for k in range(n - 1):
        ak = a[k]
        if ak[k] == 0:
            piv = -1
            for i in range(k + 1, n):
                ai = a[i]
                if ai[k]:
                    piv = i
                    break
            if piv < 0:
                return 0
            a[k], a[piv] = a[piv], a[k]
            ak = a[k]
            sign = -sign
        akk = ak[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * ak[j]) // prev
            ai[k] = 0
        prev = akk
    ak = a[n - 1]
    if sign > 0:
        return ak[n - 1]
    return -ak[n - 1]
