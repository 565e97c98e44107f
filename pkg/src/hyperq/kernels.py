"""Hot integer-table kernels with a numba fast path and a pure-numpy fallback.

Three kernels do essentially all the numeric work in the package:

* ``compose_batch`` -- one closure round of clone generation: apply a basic
  operation table to many tuples of already-known operation tables at once.
* ``horn_scan`` -- find the first assignment (row-major) where every premise
  equation holds and the conclusion fails.
* ``tc_scan`` -- find the first violation of the term condition
  f(u,xs) = f(u,ys) <=> f(v,xs) = f(v,ys) for an m-ary operation table.

The backend is chosen once at import time from the ``HYPERQ_BACKEND``
environment variable: ``numba`` (default when importable) or ``numpy``.
Both backends return bit-identical results; ``benchmarks/bench_kernels.py``
compares their speed.
"""

import os

import numpy as np

_VALID_BACKENDS = ("numba", "numpy")


# ---------------------------------------------------------------------------
# pure-numpy implementations

def _compose_batch_np(f_table, ops, combos, n):
    if combos.shape[1] == 0:
        return np.broadcast_to(f_table[:1], (combos.shape[0], ops.shape[1])).copy()
    idx = ops[combos[:, 0]].copy()
    for j in range(1, combos.shape[1]):
        idx *= n
        idx += ops[combos[:, j]]
    return f_table[idx]


def _horn_scan_np(prem_l, prem_r, conc_l, conc_r):
    mask = (conc_l != conc_r)
    if prem_l.shape[0]:
        mask &= np.all(prem_l == prem_r, axis=0)
    if not mask.any():
        return -1
    return int(np.argmax(mask))


def _tc_scan_np(table, n, m):
    q = n ** (m - 1)
    mat = table.reshape(n, q)
    # eq[u, x, y]: whether f(u, decode(x)) == f(u, decode(y))
    eq = mat[:, :, None] == mat[:, None, :]
    fwd = eq[:, None, :, :] & ~eq[None, :, :, :]
    rev = ~eq[:, None, :, :] & eq[None, :, :, :]
    both = fwd | rev
    if not both.any():
        return (-1, -1, -1, -1, -1)
    flat = int(np.argmax(both))
    u, v, x, y = np.unravel_index(flat, (n, n, q, q))
    return (int(u), int(v), int(x), int(y), 1 if fwd[u, v, x, y] else 0)


_IMPL_NUMPY = {
    "compose_batch": _compose_batch_np,
    "horn_scan": _horn_scan_np,
    "tc_scan": _tc_scan_np,
}


# ---------------------------------------------------------------------------
# numba implementations (explicit loops, early exit)

def _build_numba_impl():
    from numba import njit

    @njit(cache=True)
    def compose_batch(f_table, ops, combos, n):
        c = combos.shape[0]
        k = combos.shape[1]
        L = ops.shape[1]
        out = np.empty((c, L), dtype=np.int64)
        for r in range(c):
            for i in range(L):
                idx = 0
                for j in range(k):
                    idx = idx * n + ops[combos[r, j], i]
                out[r, i] = f_table[idx]
        return out

    @njit(cache=True)
    def horn_scan(prem_l, prem_r, conc_l, conc_r):
        p = prem_l.shape[0]
        for i in range(conc_l.shape[0]):
            if conc_l[i] == conc_r[i]:
                continue
            ok = True
            for j in range(p):
                if prem_l[j, i] != prem_r[j, i]:
                    ok = False
                    break
            if ok:
                return i
        return -1

    @njit(cache=True)
    def tc_scan(table, n, m):
        q = 1
        for _ in range(m - 1):
            q *= n
        for u in range(n):
            for v in range(n):
                for x in range(q):
                    for y in range(q):
                        a = table[u * q + x] == table[u * q + y]
                        b = table[v * q + x] == table[v * q + y]
                        if a and not b:
                            return (u, v, x, y, 1)
                        if b and not a:
                            return (u, v, x, y, 0)
        return (-1, -1, -1, -1, -1)

    return {
        "compose_batch": compose_batch,
        "horn_scan": horn_scan,
        "tc_scan": tc_scan,
    }


def _resolve_backend():
    want = os.environ.get("HYPERQ_BACKEND", "").strip().lower()
    if want and want not in _VALID_BACKENDS:
        raise ValueError(
            "HYPERQ_BACKEND must be one of %r, got %r" % (_VALID_BACKENDS, want)
        )
    if want == "numpy":
        return "numpy", _IMPL_NUMPY
    try:
        impl = _build_numba_impl()
        return "numba", impl
    except ImportError:
        if want == "numba":
            raise
        return "numpy", _IMPL_NUMPY


BACKEND, _ACTIVE = _resolve_backend()


def active_backend():
    return BACKEND


def compose_batch(f_table, ops, combos, n):
    """Compose ``f_table`` with rows of ``ops`` selected by ``combos``.

    ops has shape (m, L); combos has shape (c, arity of f); result (c, L).
    """
    return _ACTIVE["compose_batch"](f_table, ops, combos, n)


def horn_scan(prem_l, prem_r, conc_l, conc_r):
    """First flat assignment index where premises hold and conclusion fails.

    prem_l/prem_r have shape (p, N) (p may be 0); conc_l/conc_r shape (N,).
    Returns -1 when the implication holds everywhere.
    """
    return int(_ACTIVE["horn_scan"](prem_l, prem_r, conc_l, conc_r))


def tc_scan(table, n, m):
    """First term-condition violation of an m-ary table over n elements.

    Scans (u, v, xs, ys) in row-major order, forward direction first.
    Returns (u, v, xs_flat, ys_flat, forward) or None when the condition
    holds; xs_flat/ys_flat are row-major codes of the (m-1)-tuples.
    """
    u, v, x, y, d = _ACTIVE["tc_scan"](table, n, m)
    if u < 0:
        return None
    return (int(u), int(v), int(x), int(y), bool(d))
