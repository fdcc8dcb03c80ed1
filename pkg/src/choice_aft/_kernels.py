"""Bitmask kernels behind the operators.

Two interchangeable backends with identical results:

* ``NUMBA``: loops compiled with ``numba.njit``.
* ``NUMPY``: vectorized numpy code.

The numba backend is the default when numba imports. Setting the
environment variable ``CHOICE_AFT_NUMBA=0`` selects numpy at import time;
``set_backend`` switches at runtime (benchmarks and tests use it).

Masks are int64, so signatures are limited to 62 atoms.

Compiled atom tables
--------------------
A sequence of choice atoms is flattened into arrays:

``doms[j]``      domain mask of atom j
``modes[j]``     0 = satisfaction decided by the count |v ∩ dom|, 1 = explicit list
``cnt_off[j]``   offset of atom j's row in ``cnt_tab`` (row length |dom|+1)
``ext_off``      atom j's satisfiers are ``ext_masks[ext_off[j]:ext_off[j+1]]``, sorted
"""
import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

MAX_SIGNATURE = 62


def _flag_enabled():
    raw = os.environ.get("CHOICE_AFT_NUMBA", "1").strip().lower()
    return raw not in ("0", "false", "no", "off")


# ---------------------------------------------------------------- numpy

def _bits_of(mask):
    return [i for i in range(int(mask).bit_length()) if mask >> i & 1]


def np_submasks(universe):
    """All submasks of ``universe`` in ascending numeric order."""
    bits = _bits_of(universe)
    idx = np.arange(1 << len(bits), dtype=np.int64)
    out = np.zeros_like(idx)
    for j, b in enumerate(bits):
        out |= ((idx >> j) & 1) << b
    return out


def np_filter_all(cands, which, doms, modes, cnt_off, cnt_tab, ext_off, ext_masks):
    keep = np.ones(cands.shape[0], dtype=np.bool_)
    for j in which:
        v = cands & doms[j]
        if modes[j] == 0:
            keep &= cnt_tab[cnt_off[j] + np.bitwise_count(v).astype(np.int64)]
        else:
            keep &= np.isin(v, ext_masks[ext_off[j]:ext_off[j + 1]])
    return keep


def _covers(X, Y):
    # C[i, j] is true iff X[i] ⊆ Y[j]
    return (X[:, None] & ~Y[None, :]) == 0


def np_smyth(X, Y):
    if Y.shape[0] == 0:
        return True
    if X.shape[0] == 0:
        return False
    return bool(_covers(X, Y).any(axis=0).all())


def np_hoare(X, Y):
    if X.shape[0] == 0:
        return True
    if Y.shape[0] == 0:
        return False
    return bool(_covers(X, Y).any(axis=1).all())


def _np_matrix(flat, off, rel):
    n = off.shape[0] - 1
    fams = [flat[off[i]:off[i + 1]] for i in range(n)]
    out = np.empty((n, n), dtype=np.bool_)
    for i in range(n):
        for j in range(n):
            out[i, j] = rel(fams[i], fams[j])
    return out


def np_smyth_matrix(flat, off):
    return _np_matrix(flat, off, np_smyth)


def np_hoare_matrix(flat, off):
    return _np_matrix(flat, off, np_hoare)


def np_hitting(cands, deltas):
    keep = np.ones(cands.shape[0], dtype=np.bool_)
    for d in deltas:
        keep &= (cands & d) != 0
    return keep


NUMPY = SimpleNamespace(
    name="numpy",
    submasks=np_submasks,
    filter_all=np_filter_all,
    smyth=np_smyth,
    hoare=np_hoare,
    smyth_matrix=np_smyth_matrix,
    hoare_matrix=np_hoare_matrix,
    hitting=np_hitting,
)

# ---------------------------------------------------------------- numba

NUMBA = None

if numba is not None:
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def _popcount(v):
        c = 0
        while v:
            v &= v - 1
            c += 1
        return c

    @njit
    def _holds(c, j, doms, modes, cnt_off, cnt_tab, ext_off, ext_masks):
        w = c & doms[j]
        if modes[j] == 0:
            return cnt_tab[cnt_off[j] + _popcount(w)]
        lo = ext_off[j]
        hi = ext_off[j + 1]
        while lo < hi:
            mid = (lo + hi) >> 1
            m = ext_masks[mid]
            if m < w:
                lo = mid + 1
            elif m > w:
                hi = mid
            else:
                return True
        return False

    @njit
    def nb_submasks(universe):
        out = np.empty(1 << _popcount(universe), dtype=np.int64)
        s = 0
        i = 0
        while True:
            out[i] = s
            i += 1
            s = (s - universe) & universe
            if s == 0:
                break
        return out

    @njit
    def nb_filter_all(cands, which, doms, modes, cnt_off, cnt_tab, ext_off, ext_masks):
        out = np.empty(cands.shape[0], dtype=np.bool_)
        for i in range(cands.shape[0]):
            ok = True
            for t in range(which.shape[0]):
                if not _holds(cands[i], which[t], doms, modes, cnt_off,
                              cnt_tab, ext_off, ext_masks):
                    ok = False
                    break
            out[i] = ok
        return out

    @njit
    def nb_smyth(X, Y):
        for j in range(Y.shape[0]):
            found = False
            for i in range(X.shape[0]):
                if X[i] & ~Y[j] == 0:
                    found = True
                    break
            if not found:
                return False
        return True

    @njit
    def nb_hoare(X, Y):
        for i in range(X.shape[0]):
            found = False
            for j in range(Y.shape[0]):
                if X[i] & ~Y[j] == 0:
                    found = True
                    break
            if not found:
                return False
        return True

    @njit
    def nb_smyth_matrix(flat, off):
        n = off.shape[0] - 1
        out = np.empty((n, n), dtype=np.bool_)
        for a in range(n):
            for b in range(n):
                out[a, b] = nb_smyth(flat[off[a]:off[a + 1]], flat[off[b]:off[b + 1]])
        return out

    @njit
    def nb_hoare_matrix(flat, off):
        n = off.shape[0] - 1
        out = np.empty((n, n), dtype=np.bool_)
        for a in range(n):
            for b in range(n):
                out[a, b] = nb_hoare(flat[off[a]:off[a + 1]], flat[off[b]:off[b + 1]])
        return out

    @njit
    def nb_hitting(cands, deltas):
        out = np.empty(cands.shape[0], dtype=np.bool_)
        for i in range(cands.shape[0]):
            ok = True
            for d in range(deltas.shape[0]):
                if cands[i] & deltas[d] == 0:
                    ok = False
                    break
            out[i] = ok
        return out

    def _nb_submasks(universe):
        return nb_submasks(np.int64(universe))

    NUMBA = SimpleNamespace(
        name="numba",
        submasks=_nb_submasks,
        filter_all=nb_filter_all,
        smyth=nb_smyth,
        hoare=nb_hoare,
        smyth_matrix=nb_smyth_matrix,
        hoare_matrix=nb_hoare_matrix,
        hitting=nb_hitting,
    )

BACKENDS = {"numpy": NUMPY}
if NUMBA is not None:
    BACKENDS["numba"] = NUMBA

active = NUMBA if (NUMBA is not None and _flag_enabled()) else NUMPY


def set_backend(name):
    """Select ``"numba"`` or ``"numpy"``; returns the previous backend name."""
    global active
    prev = active.name
    active = BACKENDS[name]
    return prev


def pack_families(families):
    """Flatten a list of mask sequences into ``(flat, offsets)``."""
    off = np.zeros(len(families) + 1, dtype=np.int64)
    for i, f in enumerate(families):
        off[i + 1] = off[i] + len(f)
    flat = np.fromiter((m for f in families for m in f), dtype=np.int64, count=int(off[-1]))
    return flat, off
