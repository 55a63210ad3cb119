# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_pykernels`` function for function."""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, fabs, sqrt, copysign, isfinite, INFINITY

cnp.import_array()

cdef enum:
    RESYNC_EVERY = 64


cdef extern from *:
    int __builtin_clzl(unsigned long)
    int __builtin_ctzl(unsigned long)


def subset_costs_diameter(D):
    cdef double[:, ::1] Dv = np.ascontiguousarray(D, dtype=np.float64)
    cdef Py_ssize_t n = Dv.shape[0]
    cost_arr = np.zeros(1 << n)
    cdef double[::1] cost = cost_arr
    cdef long S, rest, j, b
    cdef int i, jb
    cdef double best, d
    for S in range(1, 1 << n):
        i = 63 - __builtin_clzl(S)
        rest = S & ~(1L << i)
        best = cost[rest]
        j = rest
        while j:
            b = j & -j
            jb = __builtin_ctzl(b)
            d = Dv[i, jb]
            if d > best:
                best = d
            j ^= b
        cost[S] = best
    return cost_arr


def partition_minmax(cost, int n, int k):
    cdef double[::1] c = np.ascontiguousarray(cost, dtype=np.float64)
    cdef long full = (1L << n) - 1
    levels = np.empty((k, full + 1))
    choice = np.zeros((k, full + 1), dtype=np.int64)
    cdef double[:, ::1] lv = levels
    cdef long[:, ::1] ch = choice
    cdef long S, low, rest, sub, T, arg
    cdef double best, a, b, v
    cdef int L
    lv[0, :] = c
    for L in range(1, k):
        for S in range(full + 1):
            lv[L, S] = lv[L - 1, S]
        for S in range(1, full + 1):
            low = S & -S
            rest = S ^ low
            best = lv[L, S]
            arg = 0
            if rest:
                sub = (rest - 1) & rest
                while True:
                    T = low | sub
                    a = c[T]
                    b = lv[L - 1, S ^ T]
                    v = a if a > b else b
                    if v < best:
                        best = v
                        arg = T
                    if sub == 0:
                        break
                    sub = (sub - 1) & rest
            lv[L, S] = best
            ch[L, S] = arg
    blocks = []
    S = full
    L = k - 1
    while S:
        while L > 0 and ch[L, S] == 0:
            L -= 1
        if L == 0:
            blocks.append(S)
            break
        T = ch[L, S]
        blocks.append(T)
        S ^= T
        L -= 1
    return float(lv[k - 1, full]), sorted(blocks)


cdef void _disp_rec(double[:, ::1] D, int n, int m, int start, double cur,
                    int* chosen, int depth, double* best, int* best_set) nogil:
    cdef int i, j, need
    cdef double c
    if depth == m:
        if cur > best[0]:
            best[0] = cur
            for j in range(m):
                best_set[j] = chosen[j]
        return
    need = m - depth
    for i in range(start, n - need + 1):
        c = cur
        for j in range(depth):
            if D[i, chosen[j]] < c:
                c = D[i, chosen[j]]
        if c <= best[0]:
            continue
        chosen[depth] = i
        _disp_rec(D, n, m, i + 1, c, chosen, depth + 1, best, best_set)


def max_min_dispersion(D, int m):
    cdef double[:, ::1] Dv = np.ascontiguousarray(D, dtype=np.float64)
    cdef int n = Dv.shape[0]
    chosen = np.zeros(max(m, 1), dtype=np.intc)
    best_set = np.zeros(max(m, 1), dtype=np.intc)
    cdef int[::1] cv = chosen
    cdef int[::1] bv = best_set
    cdef double best = -1.0
    _disp_rec(Dv, n, m, 0, INFINITY, &cv[0], 0, &best, &bv[0])
    return float(best), tuple(int(x) for x in best_set[:m])


cdef inline double _spow(double z, double e) nogil:
    if z == 0.0:
        return 0.0
    return copysign(pow(fabs(z), e), z)


cdef double _pnorm(double[::1] y, double p) nogil:
    cdef Py_ssize_t j, d = y.shape[0]
    cdef double m = 0.0, s = 0.0
    for j in range(d):
        if fabs(y[j]) > m:
            m = fabs(y[j])
    if m == 0.0:
        return 0.0
    for j in range(d):
        s += pow(fabs(y[j]) / m, p)
    return m * pow(s, 1.0 / p)


cdef double _ls_deriv(double[::1] y, double[::1] dy, double p, double g) nogil:
    cdef Py_ssize_t j
    cdef double s = 0.0
    for j in range(y.shape[0]):
        s += _spow(y[j] + g * dy[j], p - 1.0) * dy[j]
    return s


cdef double _line_search(double[::1] y, double[::1] dy, double p, double gmax) nogil:
    cdef Py_ssize_t j, d = y.shape[0]
    cdef double dd = 0.0, yd = 0.0, g, lo, hi, f1, f2, z, az, nxt, scale
    cdef int it
    if p == 2.0:
        for j in range(d):
            dd += dy[j] * dy[j]
            yd += y[j] * dy[j]
        if dd == 0.0:
            return 0.0
        g = -yd / dd
        if g < 0.0:
            g = 0.0
        if g > gmax:
            g = gmax
        return g
    if _ls_deriv(y, dy, p, 0.0) >= 0.0:
        return 0.0
    if _ls_deriv(y, dy, p, gmax) <= 0.0:
        return gmax
    lo = 0.0
    hi = gmax
    g = 0.5 * gmax
    scale = gmax if gmax > 1.0 else 1.0
    for it in range(200):
        f1 = 0.0
        f2 = 0.0
        for j in range(d):
            z = y[j] + g * dy[j]
            az = fabs(z)
            f1 += _spow(z, p - 1.0) * dy[j]
            f2 += pow(az, p - 2.0) * dy[j] * dy[j]
        f2 *= (p - 1.0)
        if f1 > 0:
            hi = g
        else:
            lo = g
        if f2 > 0 and isfinite(f2):
            nxt = g - f1 / f2
        else:
            nxt = -1.0
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if fabs(nxt - g) <= 1e-16 * scale or hi - lo <= 1e-16 * scale:
            return nxt
        g = nxt
    return g


def hull_fw(X, double p, double tol, long max_iter, lam0=None):
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1], i, j
    lam_arr = np.full(n, 1.0 / n) if lam0 is None else np.array(lam0, dtype=np.float64)
    y_arr = np.zeros(d)
    cdef double[::1] lam = lam_arr
    cdef double[::1] y = y_arr
    cdef double[::1] f = np.zeros(d)
    cdef double[::1] s = np.zeros(n)
    cdef double[::1] dy = np.zeros(d)
    cdef double ny, gap = INFINITY, away, g, gmax, smin, smax, acc
    cdef long it
    cdef Py_ssize_t i_fw, i_aw
    with nogil:
        for it in range(max_iter + 1):
            if it % RESYNC_EVERY == 0:
                for j in range(d):
                    y[j] = 0.0
                for i in range(n):
                    if lam[i] != 0.0:
                        for j in range(d):
                            y[j] += lam[i] * Xv[i, j]
            ny = _pnorm(y, p)
            if ny <= tol:
                with gil:
                    return lam_arr, y_arr, ny, int(it), True
            for j in range(d):
                f[j] = _spow(y[j] / ny, p - 1.0)
            i_fw = 0
            i_aw = -1
            smin = INFINITY
            smax = -INFINITY
            for i in range(n):
                acc = 0.0
                for j in range(d):
                    acc += Xv[i, j] * f[j]
                s[i] = acc
                if acc < smin:
                    smin = acc
                    i_fw = i
                if lam[i] > 0 and acc > smax:
                    smax = acc
                    i_aw = i
            gap = ny - smin
            if gap <= tol:
                if gap < 0:
                    gap = 0.0
                with gil:
                    return lam_arr, y_arr, gap, int(it), True
            if it == max_iter:
                break
            away = smax - ny
            if gap >= away or lam[i_aw] >= 1.0:
                for j in range(d):
                    dy[j] = Xv[i_fw, j] - y[j]
                g = _line_search(y, dy, p, 1.0)
                for i in range(n):
                    lam[i] *= 1.0 - g
                lam[i_fw] += g
            else:
                gmax = lam[i_aw] / (1.0 - lam[i_aw])
                for j in range(d):
                    dy[j] = y[j] - Xv[i_aw, j]
                g = _line_search(y, dy, p, gmax)
                for i in range(n):
                    lam[i] *= 1.0 + g
                lam[i_aw] -= g
                if g >= gmax:
                    lam[i_aw] = 0.0
            for i in range(n):
                if lam[i] < 0.0:
                    lam[i] = 0.0
            for j in range(d):
                y[j] += g * dy[j]
    return lam_arr, y_arr, gap, int(max_iter), False


cdef void _coord_center(double[:, ::1] X, double[::1] lam, double p, double[::1] c) nogil:
    cdef Py_ssize_t m = X.shape[0], d = X.shape[1], i, j
    cdef double lo, hi, cj, psi, dpsi, diff, wsum, nxt, scale
    cdef int it
    for j in range(d):
        wsum = 0.0
        cj = 0.0
        lo = INFINITY
        hi = -INFINITY
        for i in range(m):
            if lam[i] > 0:
                cj += lam[i] * X[i, j]
                wsum += lam[i]
                if X[i, j] < lo:
                    lo = X[i, j]
                if X[i, j] > hi:
                    hi = X[i, j]
        if p == 2.0:
            c[j] = cj
            continue
        cj /= wsum
        for it in range(200):
            psi = 0.0
            dpsi = 0.0
            for i in range(m):
                if lam[i] > 0:
                    diff = cj - X[i, j]
                    psi += lam[i] * _spow(diff, p - 1.0)
                    dpsi += lam[i] * pow(fabs(diff), p - 2.0)
            dpsi *= (p - 1.0)
            if psi == 0.0:
                break
            if psi > 0:
                hi = cj
            else:
                lo = cj
            nxt = cj - psi / dpsi
            if not isfinite(nxt) or nxt <= lo or nxt >= hi:
                nxt = 0.5 * (lo + hi)
            scale = fabs(cj) if fabs(cj) > 1.0 else 1.0
            if fabs(nxt - cj) <= 1e-16 * scale or hi - lo <= 1e-15:
                cj = nxt
                break
            cj = nxt
        c[j] = cj


def coord_center(X, lam, double p):
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[::1] lv = np.ascontiguousarray(lam, dtype=np.float64)
    out = np.zeros(Xv.shape[1])
    _coord_center(Xv, lv, p, out)
    return out


cdef void _powers(double[:, ::1] X, double[::1] c, double p, double[::1] G) nogil:
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(X.shape[0]):
        acc = 0.0
        for j in range(X.shape[1]):
            acc += pow(fabs(X[i, j] - c[j]), p)
        G[i] = acc


cdef double _slope(double[:, ::1] X, double[::1] lam, double[::1] d, double g, double p,
                   double[::1] lg, double[::1] cg, double[::1] Gg) nogil:
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(lam.shape[0]):
        lg[i] = lam[i] + g * d[i]
        if lg[i] < 0.0:
            lg[i] = 0.0
    _coord_center(X, lg, p, cg)
    _powers(X, cg, p, Gg)
    for i in range(lam.shape[0]):
        s += Gg[i] * d[i]
    return s


cdef double _dual_step(double[:, ::1] X, double[::1] lam, double[::1] d, double[::1] G,
                       double p, double gmax, double[::1] lg, double[::1] cg,
                       double[::1] Gg) nogil:
    cdef Py_ssize_t i, j, m = X.shape[0], dim = X.shape[1]
    cdef double slope0 = 0.0, curv = 0.0, xd, a, fa, b, fb, g, fg, s_hi
    cdef int side = 0, it
    for i in range(m):
        slope0 += G[i] * d[i]
    if slope0 <= 0.0:
        return 0.0
    if p == 2.0:
        for j in range(dim):
            xd = 0.0
            for i in range(m):
                xd += d[i] * X[i, j]
            curv += xd * xd
        if curv == 0.0:
            return gmax
        g = slope0 / (2.0 * curv)
        return g if g < gmax else gmax
    s_hi = _slope(X, lam, d, gmax, p, lg, cg, Gg)
    if s_hi >= 0.0:
        return gmax
    a = 0.0
    fa = slope0
    b = gmax
    fb = s_hi
    g = b
    for it in range(60):
        g = (a * fb - b * fa) / (fb - fa)
        fg = _slope(X, lam, d, g, p, lg, cg, Gg)
        if fg > 0:
            a = g
            fa = fg
            if side == 1:
                fb *= 0.5
            side = 1
        else:
            b = g
            fb = fg
            if side == -1:
                fa *= 0.5
            side = -1
        if b - a <= 1e-14 * gmax or fabs(fg) <= 1e-15 * slope0:
            break
    return g


def cheb_dual_fw(X, double p, double tol, long max_iter):
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t m = Xv.shape[0], dim = Xv.shape[1], i
    cdef double[::1] lam = np.full(m, 1.0 / m)
    c_arr = np.zeros(dim)
    cdef double[::1] c = c_arr
    cdef double[::1] G = np.zeros(m)
    cdef double[::1] d = np.zeros(m)
    cdef double[::1] lg = np.zeros(m)
    cdef double[::1] cg = np.zeros(dim)
    cdef double[::1] Gg = np.zeros(m)
    cdef double inv = 1.0 / p, U, h, upper = 0.0, lower = 0.0, gmax, g, gmin, tot
    cdef Py_ssize_t i_fw, i_aw
    cdef long it
    cdef bint away
    with nogil:
        for it in range(max_iter + 1):
            _coord_center(Xv, lam, p, c)
            _powers(Xv, c, p, G)
            i_fw = 0
            i_aw = -1
            U = -INFINITY
            gmin = INFINITY
            h = 0.0
            for i in range(m):
                h += lam[i] * G[i]
                if G[i] > U:
                    U = G[i]
                    i_fw = i
                if lam[i] > 0 and G[i] < gmin:
                    gmin = G[i]
                    i_aw = i
            upper = pow(U, inv)
            lower = pow(h if h > 0.0 else 0.0, inv)
            if upper - lower <= tol:
                with gil:
                    return c_arr, upper, lower, int(it), True
            if it == max_iter:
                break
            away = not (U - h >= h - G[i_aw] or lam[i_aw] >= 1.0)
            if away:
                for i in range(m):
                    d[i] = lam[i]
                d[i_aw] -= 1.0
                gmax = lam[i_aw] / (1.0 - lam[i_aw])
            else:
                for i in range(m):
                    d[i] = -lam[i]
                d[i_fw] += 1.0
                gmax = 1.0
            g = _dual_step(Xv, lam, d, G, p, gmax, lg, cg, Gg)
            for i in range(m):
                lam[i] += g * d[i]
            if away and g >= gmax:
                lam[i_aw] = 0.0
            tot = 0.0
            for i in range(m):
                if lam[i] < 0.0:
                    lam[i] = 0.0
                tot += lam[i]
            for i in range(m):
                lam[i] /= tot
    return c_arr, upper, lower, int(max_iter), False


def uniform_bounds(X, double p):
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], dim = Xv.shape[1], i, r, cnt
    lower_arr = np.zeros(1 << n)
    upper_arr = np.zeros(1 << n)
    cdef double[::1] lower = lower_arr
    cdef double[::1] upper = upper_arr
    cdef double[:, ::1] buf = np.zeros((n, dim))
    cdef double[::1] w = np.zeros(n)
    cdef double[::1] c = np.zeros(dim)
    cdef double[::1] G = np.zeros(n)
    cdef double inv = 1.0 / p, mean, mx
    cdef long S
    with nogil:
        for S in range(1, 1 << n):
            cnt = 0
            for i in range(n):
                if (S >> i) & 1:
                    buf[cnt, :] = Xv[i, :]
                    cnt += 1
            if cnt == 1:
                continue
            for r in range(n):
                w[r] = 1.0 / cnt if r < cnt else 0.0
            _coord_center(buf[:cnt, :], w[:cnt], p, c)
            _powers(buf[:cnt, :], c, p, G[:cnt])
            mean = 0.0
            mx = 0.0
            for r in range(cnt):
                mean += G[r]
                if G[r] > mx:
                    mx = G[r]
            mean /= cnt
            lower[S] = pow(mean if mean > 0 else 0.0, inv)
            upper[S] = pow(mx, inv)
    return lower_arr, upper_arr
