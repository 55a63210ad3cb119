"""Pure-Python/numpy kernels; reference twin of ``_ckernels.pyx``.

Both modules expose the same functions with the same iteration order, so
results agree to rounding. This one is selected when the compiled
extension is missing or ``NONCOMPACT_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import math

import numpy as np

RESYNC_EVERY = 64


def subset_costs_diameter(D):
    """Diameter of every subset of ``n`` points, indexed by bitmask."""
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    cost = np.zeros(1 << n)
    for S in range(1, 1 << n):
        i = S.bit_length() - 1
        rest = S & ~(1 << i)
        best = cost[rest]
        j = rest
        while j:
            b = j & -j
            d = D[i, b.bit_length() - 1]
            if d > best:
                best = d
            j ^= b
        cost[S] = best
    return cost


def partition_minmax(cost, n, k):
    """Minimise the largest block cost over partitions into at most ``k`` blocks.

    Exact dynamic programme over subsets; submasks are scanned in
    decreasing order and only strict improvements are kept, so ties
    resolve identically in both backends.
    Returns ``(value, blocks)`` with blocks as bitmasks.
    """
    cost = np.asarray(cost, dtype=float).tolist()
    full = (1 << n) - 1
    levels = [cost]
    choice = [None]
    for _ in range(1, k):
        prev = levels[-1]
        cur = list(prev)
        ch = [0] * (full + 1)
        for S in range(1, full + 1):
            low = S & -S
            rest = S ^ low
            best = cur[S]
            arg = 0
            # T = low | sub, sub a proper submask of rest
            sub = (rest - 1) & rest if rest else -1
            while sub >= 0:
                T = low | sub
                a = cost[T]
                b = prev[S ^ T]
                v = a if a > b else b
                if v < best:
                    best = v
                    arg = T
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            cur[S] = best
            ch[S] = arg
        levels.append(cur)
        choice.append(ch)
    blocks = []
    S = full
    lvl = k - 1
    while S:
        while lvl > 0 and choice[lvl][S] == 0:
            lvl -= 1
        if lvl == 0:
            blocks.append(S)
            break
        T = choice[lvl][S]
        blocks.append(T)
        S ^= T
        lvl -= 1
    return float(levels[k - 1][full]), sorted(blocks)


def max_min_dispersion(D, m):
    """Best ``m``-subset by smallest pairwise distance (branch and bound)."""
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    best = [-1.0, ()]
    chosen: list[int] = []

    def rec(start, cur):
        if len(chosen) == m:
            if cur > best[0]:
                best[0] = cur
                best[1] = tuple(chosen)
            return
        need = m - len(chosen)
        for i in range(start, n - need + 1):
            c = cur
            for j in chosen:
                if D[i, j] < c:
                    c = D[i, j]
            if c <= best[0]:
                continue
            chosen.append(i)
            rec(i + 1, c)
            chosen.pop()

    rec(0, math.inf)
    return float(best[0]), best[1]


def _pnorm(y, p):
    m = np.max(np.abs(y)) if y.size else 0.0
    if m == 0.0:
        return 0.0
    return float(m * np.sum((np.abs(y) / m) ** p) ** (1.0 / p))


def _line_search(y, dy, p, gmax):
    """argmin of sum |y + g*dy|^p over g in [0, gmax]."""
    if p == 2.0:
        dd = float(dy @ dy)
        if dd == 0.0:
            return 0.0
        g = -float(y @ dy) / dd
        return min(max(g, 0.0), gmax)

    def deriv(g):
        z = y + g * dy
        return float(np.sum(np.sign(z) * np.abs(z) ** (p - 1.0) * dy))

    if deriv(0.0) >= 0.0:
        return 0.0
    if deriv(gmax) <= 0.0:
        return gmax
    lo, hi = 0.0, gmax
    g = 0.5 * gmax
    for _ in range(200):
        z = y + g * dy
        az = np.abs(z)
        f1 = float(np.sum(np.sign(z) * az ** (p - 1.0) * dy))
        if f1 > 0:
            hi = g
        else:
            lo = g
        with np.errstate(divide="ignore", invalid="ignore"):
            f2 = float((p - 1.0) * np.sum(az ** (p - 2.0) * dy * dy))
        nxt = g - f1 / f2 if f2 > 0 and math.isfinite(f2) else -1.0
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if abs(nxt - g) <= 1e-16 * max(1.0, gmax) or hi - lo <= 1e-16 * max(1.0, gmax):
            return nxt
        g = nxt
    return g


def hull_fw(X, p, tol, max_iter, lam0=None):
    """Away-step Frank-Wolfe for the minimum-p-norm point of ``conv(rows of X)``.

    Returns ``(lam, y, gap, iters, converged)``; ``gap`` is the norm value
    minus the dual bound of the normalised gradient functional.
    """
    X = np.ascontiguousarray(X, dtype=float)
    n = X.shape[0]
    lam = np.full(n, 1.0 / n) if lam0 is None else np.array(lam0, dtype=float)
    y = lam @ X
    gap = math.inf
    for it in range(max_iter + 1):
        if it % RESYNC_EVERY == 0:
            y = lam @ X
        ny = _pnorm(y, p)
        if ny <= tol:
            return lam, y, ny, it, True
        f = np.sign(y) * (np.abs(y) / ny) ** (p - 1.0)
        s = X @ f
        i_fw = int(np.argmin(s))
        gap = ny - float(s[i_fw])
        if gap <= tol:
            return lam, y, max(gap, 0.0), it, True
        if it == max_iter:
            break
        masked = np.where(lam > 0, s, -np.inf)
        i_aw = int(np.argmax(masked))
        away = float(s[i_aw]) - ny
        if gap >= away or lam[i_aw] >= 1.0:
            dy = X[i_fw] - y
            g = _line_search(y, dy, p, 1.0)
            lam *= 1.0 - g
            lam[i_fw] += g
        else:
            gmax = lam[i_aw] / (1.0 - lam[i_aw])
            dy = y - X[i_aw]
            g = _line_search(y, dy, p, gmax)
            lam *= 1.0 + g
            lam[i_aw] -= g
            if g >= gmax:
                lam[i_aw] = 0.0
        np.clip(lam, 0.0, None, out=lam)
        y = y + g * dy
    return lam, y, gap, max_iter, False


def coord_center(X, lam, p):
    """Per-coordinate minimiser of ``sum_i lam_i |x_ij - c_j|^p``."""
    X = np.asarray(X, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if p == 2.0:
        return lam @ X
    act = lam > 0
    Xa = X[act]
    w = lam[act][:, None]
    lo = Xa.min(axis=0)
    hi = Xa.max(axis=0)
    c = (lam[act] @ Xa) / lam[act].sum()
    for _ in range(200):
        diff = c[None, :] - Xa
        ad = np.abs(diff)
        psi = np.sum(w * np.sign(diff) * ad ** (p - 1.0), axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            dpsi = (p - 1.0) * np.sum(w * ad ** (p - 2.0), axis=0)
        hi = np.where(psi > 0, c, hi)
        lo = np.where(psi < 0, c, lo)
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = c - psi / dpsi
        bad = ~np.isfinite(nxt) | (nxt <= lo) | (nxt >= hi)
        nxt = np.where(bad, 0.5 * (lo + hi), nxt)
        nxt = np.where(psi == 0, c, nxt)
        done = np.max(np.abs(nxt - c)) <= 1e-16 * max(1.0, float(np.max(np.abs(c))))
        c = nxt
        if done or np.all(hi - lo <= 1e-15):
            break
    return c


def _powers(X, c, p):
    return np.sum(np.abs(X - c[None, :]) ** p, axis=1)


def cheb_dual_fw(X, p, tol, max_iter):
    """Chebyshev centre of the rows of ``X`` by Frank-Wolfe on the dual.

    The dual maximises ``h(lam) = min_c sum_i lam_i ||x_i - c||_p^p`` over
    the simplex; its gradient is the vector of p-th power distances from
    the inner minimiser, so ``max(G)`` and ``lam.G`` bracket the optimum.
    Returns ``(c, upper, lower, iters, converged)`` in radius units.
    """
    X = np.ascontiguousarray(X, dtype=float)
    m = X.shape[0]
    lam = np.full(m, 1.0 / m)
    inv = 1.0 / p
    upper = lower = 0.0
    c = X[0].copy()
    for it in range(max_iter + 1):
        c = coord_center(X, lam, p)
        G = _powers(X, c, p)
        i_fw = int(np.argmax(G))
        U = float(G[i_fw])
        h = float(lam @ G)
        upper = U**inv
        lower = max(h, 0.0) ** inv
        if upper - lower <= tol:
            return c, upper, lower, it, True
        if it == max_iter:
            break
        masked = np.where(lam > 0, G, np.inf)
        i_aw = int(np.argmin(masked))
        away = not (U - h >= h - float(G[i_aw]) or lam[i_aw] >= 1.0)
        if away:
            d = lam.copy()
            d[i_aw] -= 1.0
            gmax = lam[i_aw] / (1.0 - lam[i_aw])
        else:
            d = -lam.copy()
            d[i_fw] += 1.0
            gmax = 1.0
        g = _dual_step(X, lam, d, G, p, gmax)
        lam = lam + g * d
        if away and g >= gmax:
            lam[i_aw] = 0.0
        np.clip(lam, 0.0, None, out=lam)
        lam /= lam.sum()
    return c, upper, lower, max_iter, False


def _dual_step(X, lam, d, G, p, gmax):
    slope0 = float(G @ d)
    if slope0 <= 0.0:
        return 0.0
    if p == 2.0:
        Xd = d @ X
        curv = float(Xd @ Xd)
        if curv == 0.0:
            return gmax
        return min(slope0 / (2.0 * curv), gmax)

    def slope(g):
        lg = lam + g * d
        np.clip(lg, 0.0, None, out=lg)
        cg = coord_center(X, lg, p)
        return float(_powers(X, cg, p) @ d)

    s_hi = slope(gmax)
    if s_hi >= 0.0:
        return gmax
    # Illinois false position on the decreasing slope
    a, fa, b, fb = 0.0, slope0, gmax, s_hi
    side = 0
    g = b
    for _ in range(60):
        g = (a * fb - b * fa) / (fb - fa)
        fg = slope(g)
        if fg > 0:
            a, fa = g, fg
            if side == 1:
                fb *= 0.5
            side = 1
        else:
            b, fb = g, fg
            if side == -1:
                fa *= 0.5
            side = -1
        if b - a <= 1e-14 * gmax or abs(fg) <= 1e-15 * slope0:
            break
    return g


def uniform_bounds(X, p):
    """Radius bracket for every subset from the uniform dual point.

    ``lower[S]`` is a certified lower bound on the Chebyshev radius of the
    rows in ``S`` and ``upper[S]`` the radius around the matching centre.
    """
    X = np.ascontiguousarray(X, dtype=float)
    n = X.shape[0]
    lower = np.zeros(1 << n)
    upper = np.zeros(1 << n)
    inv = 1.0 / p
    for S in range(1, 1 << n):
        rows = [i for i in range(n) if S >> i & 1]
        if len(rows) == 1:
            continue
        Xs = X[rows]
        lam = np.full(len(rows), 1.0 / len(rows))
        c = coord_center(Xs, lam, p)
        G = _powers(Xs, c, p)
        lower[S] = max(float(G.mean()), 0.0) ** inv
        upper[S] = float(G.max()) ** inv
    return lower, upper
