"""Optional numba-accelerated kernels for the hot simulation loops.

Importing this module never fails: when numba is unavailable (or the
``DENSELAB_NO_NUMBA`` environment variable is set to ``1``) the exported
``HAVE_NUMBA`` flag is False and callers fall back to the pure-Python
integer paths, which compute bit-identical results.
"""

import os

import numpy as np

HAVE_NUMBA = False

if os.environ.get("DENSELAB_NO_NUMBA", "") != "1":
    try:
        import numba
    except ImportError:  # pragma: no cover
        numba = None
    if numba is not None:
        HAVE_NUMBA = True

        @numba.njit(cache=True)
        def ranks_of_rows(rows, out):  # pragma: no cover (compiled)
            """GF(2) ranks of a batch of matrices, one per row-set of ``rows``.

            rows: (trials, nrows) uint64, each entry a bit-packed matrix row
            (at most 64 columns).  out: (trials,) int64.
            """
            trials, nrows = rows.shape
            piv = np.zeros(64, dtype=np.uint64)
            for t in range(trials):
                for i in range(64):
                    piv[i] = np.uint64(0)
                rk = 0
                for i in range(nrows):
                    v = rows[t, i]
                    while v != np.uint64(0):
                        p = 63
                        while (v >> np.uint64(p)) & np.uint64(1) == np.uint64(0):
                            p -= 1
                        if piv[p] == np.uint64(0):
                            piv[p] = v
                            rk += 1
                            break
                        v ^= piv[p]
                out[t] = rk

        @numba.njit(cache=True)
        def xor_select(buf, mask_bytes, m, out):  # pragma: no cover (compiled)
            """XOR of the first-``m`` rows of ``buf`` selected by mask bits.

            buf: (capacity, words) uint64; mask_bytes: uint8 with bit ``i``
            (little-endian within bytes) selecting row ``i``; out: (words,).
            """
            words = out.shape[0]
            for w in range(words):
                out[w] = np.uint64(0)
            for i in range(m):
                if (mask_bytes[i >> 3] >> np.uint64(i & 7)) & np.uint64(1):
                    for w in range(words):
                        out[w] ^= buf[i, w]

        @numba.njit(cache=True)
        def basis_insert(basis, present, v):  # pragma: no cover (compiled)
            """Insert ``v`` into a triangular GF(2) basis keyed by top set bit.

            basis: (dimension, words) uint64; present: (dimension,) bool.
            Returns the new pivot index, or -1 when ``v`` lies in the span.
            ``v`` is clobbered.
            """
            words = basis.shape[1]
            while True:
                p = -1
                for w in range(words - 1, -1, -1):
                    if v[w] != np.uint64(0):
                        x = v[w]
                        b = 63
                        while (x >> np.uint64(b)) & np.uint64(1) == np.uint64(0):
                            b -= 1
                        p = (w << 6) + b
                        break
                if p < 0:
                    return -1
                if present[p]:
                    for w in range(words):
                        v[w] ^= basis[p, w]
                else:
                    for w in range(words):
                        basis[p, w] = v[w]
                    present[p] = True
                    return p


def ranks_of_rows_py(rows: np.ndarray, out: np.ndarray) -> None:
    """Pure-Python twin of :func:`ranks_of_rows` (same inputs and results)."""
    trials, nrows = rows.shape
    for t in range(trials):
        piv: dict[int, int] = {}
        rk = 0
        for i in range(nrows):
            v = int(rows[t, i])
            while v:
                p = v.bit_length() - 1
                row = piv.get(p)
                if row is None:
                    piv[p] = v
                    rk += 1
                    break
                v ^= row
        out[t] = rk
