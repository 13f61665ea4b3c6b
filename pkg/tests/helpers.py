"""Independent oracle implementations used to pin expected values.

Everything here is written with explicit index loops or closed forms so the
fast reshape/einsum paths in the package are checked against slow but
obviously-correct code.
"""

import numpy as np

PX = np.array([[0, 1], [1, 0]], dtype=complex)
PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
PZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def oracle_partial_trace(m, da, db, traced):
    m = np.asarray(m)
    if traced == "B":
        out = np.zeros((da, da), dtype=complex)
        for i in range(da):
            for j in range(da):
                for k in range(db):
                    out[i, j] += m[i * db + k, j * db + k]
    else:
        out = np.zeros((db, db), dtype=complex)
        for i in range(db):
            for j in range(db):
                for k in range(da):
                    out[i, j] += m[k * db + i, k * db + j]
    return out


def oracle_partial_transpose(m, da, db, transposed):
    m = np.asarray(m)
    out = np.zeros_like(np.asarray(m, dtype=complex))
    for ia in range(da):
        for ib in range(db):
            for ja in range(da):
                for jb in range(db):
                    if transposed == "B":
                        out[ia * db + jb, ja * db + ib] = m[ia * db + ib, ja * db + jb]
                    else:
                        out[ja * db + ib, ia * db + jb] = m[ia * db + ib, ja * db + jb]
    return out


def oracle_realign(m, da, db):
    m = np.asarray(m)
    out = np.zeros((da * da, db * db), dtype=complex)
    for i in range(da):
        for j in range(da):
            for k in range(db):
                for l in range(db):
                    out[i * da + j, k * db + l] = m[i * db + k, j * db + l]
    return out


def random_herm(dim, rng, scale=1.0):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (g + g.conj().T) / 2.0


def random_dm_array(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real


# closed forms for the noisy-singlet witnesses, derived by hand from the
# state's correlation data (basis {00,01,10,11}):
#   T_xx = T_yy = -p,  T_zz = -p + (1-p)/3,
#   bloch_A = (0,0,1-p),  bloch_B = (0,0,(1-p)/3),
#   purity_A = 1 - p + p^2/2,  purity_B = (10 - 2p + p^2)/18.
def witness_closed(p):
    return 1.0 - (5.0 * p + 1.0) / 3.0 - 4.0 * (1.0 - p) ** 2 / 9.0


def corollary1_closed(p):
    pa = 1.0 - p + p * p / 2.0
    pb = (10.0 - 2.0 * p + p * p) / 18.0
    return witness_closed(p) - 0.5 * (np.sqrt(1.0 - pa) - np.sqrt(1.0 - pb)) ** 2


def bisect_root(fn, lo, hi, tol=1e-12):
    flo = fn(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol:
            return mid
        if (fn(mid) > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
