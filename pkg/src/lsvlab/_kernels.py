"""Jitted inner loops: map iteration, branch inverses, excursion sums.

Everything here is a pure function of its arguments, so results are
bit-identical regardless of how callers partition work across threads.
"""

import numpy as np
from numba import njit, prange

# map variant codes
V_LSV = 0
V_NEUTRAL_LOG = 1
V_TOY = 2

# left-branch normalization for the logarithmic variant: T(1/2) = 1
NEUTRAL_LOG_COEFF = 2.0 / np.log(2.0) ** 2

# observable family codes
F_ZERO = 0
F_HOLDER_POLY = 1
F_BUMP_PAIR = 2
F_INVERSE_POWER = 3
F_COBOUNDARY = 4
F_RADEMACHER = 5

BISECT_ITERS = 60


@njit(cache=True, inline="always")
def map_apply(x, variant, alpha):
    if x <= 0.5:
        if variant == V_LSV:
            y = x * (1.0 + (2.0 * x) ** alpha)
        elif variant == V_NEUTRAL_LOG:
            if x <= 0.0:
                return 0.0
            lx = np.log(x)
            y = x * (1.0 + NEUTRAL_LOG_COEFF * x * lx * lx)
        else:
            y = 2.0 * x
    else:
        y = 2.0 * x - 1.0
    if y < 0.0:
        y = 0.0
    elif y > 1.0:
        y = 1.0
    return y


@njit(cache=True)
def left_inverse_scalar(y, variant, alpha):
    # bracketed bisection on [0, 1/2]; the left branch is strictly increasing
    lo = 0.0
    hi = 0.5
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if map_apply(mid, variant, alpha) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@njit(cache=True)
def left_inverse_arr(ys, variant, alpha):
    out = np.empty_like(ys)
    for i in range(ys.size):
        out[i] = left_inverse_scalar(ys[i], variant, alpha)
    return out


@njit(cache=True)
def ladder_points(variant, alpha, K):
    """Backward orbit of 1 along the left branch: x_0=1, T(x_{k+1}) = x_k."""
    xs = np.empty(K + 1)
    xs[0] = 1.0
    if K >= 1:
        xs[1] = 0.5
    for k in range(1, K):
        xs[k + 1] = left_inverse_scalar(xs[k], variant, alpha)
    return xs


@njit(cache=True)
def orbit_fill(x0, n, variant, alpha):
    out = np.empty(n)
    x = x0
    for i in range(n):
        out[i] = x
        x = map_apply(x, variant, alpha)
    return out


@njit(cache=True, inline="always")
def obs_eval(x, fam, par, variant, alpha):
    if fam == F_ZERO:
        return 0.0
    if fam == F_HOLDER_POLY:
        # par = (f0, gamma, c1, c2, c3)
        if x <= 0.0:
            return par[0]
        return par[0] + x ** par[1] * (par[2] + x * (par[3] + x * par[4]))
    if fam == F_BUMP_PAIR:
        # par = (l1, w1, l2, w2, s, amp); smooth bumps, zero near 0
        v = 0.0
        u = (x - par[0]) / par[1]
        if 0.0 < u < 1.0:
            v += np.exp(4.0 - 1.0 / (u * (1.0 - u)))
        u = (x - par[2]) / par[3]
        if 0.0 < u < 1.0:
            v -= par[4] * np.exp(4.0 - 1.0 / (u * (1.0 - u)))
        return par[5] * v
    if fam == F_INVERSE_POWER:
        # par = (beta,)
        if x < 1e-300:
            x = 1e-300
        return x ** (-par[0])
    if fam == F_COBOUNDARY:
        # par = (a,); chi(x) = a sin(2 pi x), f = chi o T - chi
        tx = map_apply(x, variant, alpha)
        return par[0] * (np.sin(2.0 * np.pi * tx) - np.sin(2.0 * np.pi * x))
    if fam == F_RADEMACHER:
        return 1.0 if x < 0.5 else -1.0
    return 0.0


@njit(cache=True, parallel=True)
def birkhoff_checkpoint_sums(x0s, checks, variant, alpha, fam, par, c0):
    """Orbit sums of f - c0 recorded at the given (ascending) checkpoints.

    Kahan-compensated accumulation: heavy-tail regimes mix O(n^a) spikes
    with O(1) terms.
    """
    ns = x0s.shape[0]
    nc = checks.shape[0]
    n_max = checks[nc - 1]
    out = np.empty((ns, nc))
    for i in prange(ns):
        x = x0s[i]
        s = 0.0
        comp = 0.0
        ci = 0
        for step in range(n_max):
            v = obs_eval(x, fam, par, variant, alpha) - c0
            yv = v - comp
            t = s + yv
            comp = (t - s) - yv
            s = t
            x = map_apply(x, variant, alpha)
            if step + 1 == checks[ci]:
                out[i, ci] = s
                ci += 1
    return out


@njit(cache=True, parallel=True)
def return_times(xs, variant, alpha, threshold, cap):
    """First n >= 1 with T^n x > threshold; -1 when the cap is hit (censored)."""
    out = np.empty(xs.shape[0], dtype=np.int64)
    for i in prange(xs.shape[0]):
        x = xs[i]
        phi = -1
        for k in range(1, cap + 1):
            x = map_apply(x, variant, alpha)
            if x > threshold:
                phi = k
                break
        out[i] = phi
    return out


@njit(cache=True, parallel=True)
def entry_times(xs, variant, alpha, threshold, cap):
    """First n >= 0 with T^n x > threshold; -1 when censored."""
    out = np.empty(xs.shape[0], dtype=np.int64)
    for i in prange(xs.shape[0]):
        x = xs[i]
        e = -1
        for k in range(cap + 1):
            if x > threshold:
                e = k
                break
            x = map_apply(x, variant, alpha)
        out[i] = e
    return out


@njit(cache=True, parallel=True)
def induced_sums(xs, variant, alpha, threshold, cap, fam, par, c0):
    """Return times to (threshold, 1] and the excursion sums of f - c0."""
    n = xs.shape[0]
    phis = np.empty(n, dtype=np.int64)
    vals = np.empty(n)
    for i in prange(n):
        x = xs[i]
        s = 0.0
        comp = 0.0
        phi = -1
        for k in range(1, cap + 1):
            v = obs_eval(x, fam, par, variant, alpha) - c0
            yv = v - comp
            t = s + yv
            comp = (t - s) - yv
            s = t
            x = map_apply(x, variant, alpha)
            if x > threshold:
                phi = k
                break
        phis[i] = phi
        vals[i] = s
    return phis, vals


@njit(cache=True, parallel=True)
def local_char_sums(x0s, n, variant, alpha, threshold, fam, par, c0):
    """Birkhoff sums over n steps plus membership flags for the slice.

    survive[i] is true when both x0 and T^n x0 lie in (threshold, 1].
    """
    ns = x0s.shape[0]
    sums = np.empty(ns)
    survive = np.zeros(ns, dtype=np.bool_)
    for i in prange(ns):
        x = x0s[i]
        if x <= threshold:
            sums[i] = 0.0
            continue
        s = 0.0
        comp = 0.0
        for _ in range(n):
            v = obs_eval(x, fam, par, variant, alpha) - c0
            yv = v - comp
            t = s + yv
            comp = (t - s) - yv
            s = t
            x = map_apply(x, variant, alpha)
        sums[i] = s
        survive[i] = x > threshold
    return sums, survive


@njit(cache=True)
def branch_overlap_entries(src, pre, rows, cols, wts):
    """Ulam overlap weights for one monotone branch.

    src: source-cell breakpoints (ascending).  pre: preimages of the target
    breakpoints under the branch inverse (ascending, same orientation).
    Emits Leb(src_cell_i  ∩  preimage of target_cell_j) into COO triplets;
    returns the number of entries written.
    """
    m_src = src.shape[0] - 1
    n_tgt = pre.shape[0] - 1
    cnt = 0
    i = np.searchsorted(src, pre[0], side="right") - 1
    if i < 0:
        i = 0
    for j in range(n_tgt):
        a = pre[j]
        b = pre[j + 1]
        if b <= a:
            continue
        while i < m_src - 1 and src[i + 1] <= a:
            i += 1
        k = i
        while k < m_src and src[k] < b:
            lo = a if a > src[k] else src[k]
            hi = b if b < src[k + 1] else src[k + 1]
            if hi > lo:
                rows[cnt] = k
                cols[cnt] = j
                wts[cnt] = hi - lo
                cnt += 1
            k += 1
    return cnt


@njit(cache=True)
def mc_transition_counts(breaks, variant, alpha, u, counts):
    """Stratified Monte Carlo estimate of the cell transition matrix.

    u: (M, mc) uniforms; counts: (M, M) int64 output, landing tallies.
    """
    M = breaks.shape[0] - 1
    mc = u.shape[1]
    for i in range(M):
        w = breaks[i + 1] - breaks[i]
        for k in range(mc):
            x = breaks[i] + w * (k + u[i, k]) / mc
            y = map_apply(x, variant, alpha)
            j = np.searchsorted(breaks, y, side="right") - 1
            if j < 0:
                j = 0
            elif j >= M:
                j = M - 1
            counts[i, j] += 1
