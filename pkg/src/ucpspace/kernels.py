"""Matrix arithmetic over the coordinate algebras: the hot numeric path.

Everything here works on coordinate arrays of shape (n, n, k) or batched
(B, n, n, k).  The default path compiles the inner loops with numba; set

    UCPSPACE_NO_NUMBA=1

to force the pure-numpy einsum fallback (same contractions, same results up to
float addition order).  `benchmarks/bench_kernels.py` compares the two.
"""

import os

import numpy as np

from . import cayley

USE_NUMBA = os.environ.get("UCPSPACE_NO_NUMBA", "") != "1"
if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba = None
        USE_NUMBA = False


def matmul_numpy(a, b):
    """Batched matrix product with coordinate-algebra entries, einsum path."""
    k = a.shape[-1]
    t = cayley.structure_tensor(k)
    return np.einsum("...ijp,...jmq,pqr->...imr", a, b, t)


if USE_NUMBA:

    @numba.njit(cache=True)
    def _matmul_loops(a, b, idx, sgn, out):
        bb, n, _, k = a.shape
        for t in range(bb):
            for i in range(n):
                for j in range(n):
                    for p in range(k):
                        x = a[t, i, j, p]
                        if x == 0.0:
                            continue
                        for m in range(n):
                            for q in range(k):
                                y = b[t, j, m, q]
                                if y == 0.0:
                                    continue
                                out[t, i, m, idx[p, q]] += sgn[p, q] * x * y
        return out

    def matmul_numba(a, b):
        """Batched matrix product, compiled-loop path."""
        k = a.shape[-1]
        idx, sgn = cayley.mul_tables(k)
        squeeze = a.ndim == 3
        if squeeze:
            a = a[None]
            b = b[None]
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
        a, b = np.broadcast_arrays(a, b)
        _matmul_loops(np.ascontiguousarray(a), np.ascontiguousarray(b), idx, sgn, out)
        return out[0] if squeeze else out

    matmul = matmul_numba
else:
    matmul_numba = None
    matmul = matmul_numpy


def jordan_mul(a, b):
    """Jordan product (ab + ba) / 2 on coordinate arrays."""
    ab = matmul(a, b)
    ba = matmul(b, a)
    return 0.5 * (ab + ba)


def triple(a, b, c):
    """Jordan triple {a, b, c} = a o (b o c) - b o (c o a) + c o (a o b)."""
    return jordan_mul(a, jordan_mul(b, c)) - jordan_mul(b, jordan_mul(c, a)) + jordan_mul(c, jordan_mul(a, b))


def embed_real(a):
    """Real symmetric embedding of hermitian coordinate matrices.

    Each entry becomes its left-multiplication block, so an (n, n, k) hermitian
    element maps to a symmetric (n k, n k) real matrix whose eigenvalues are the
    element's eigenvalues with multiplicity k.  Only valid for the associative
    tags (k <= 4); octonion left multiplication is not a representation.
    """
    k = a.shape[-1]
    if k > 4:
        raise ValueError("real embedding requires an associative coordinate algebra")
    mats = cayley.left_mult_mats(k)
    blocks = np.einsum("...ijc,cpq->...ipjq", a, mats)
    return blocks.reshape(a.shape[:-3] + (a.shape[-3] * k, a.shape[-2] * k))


def extract_from_real(m, n, k):
    """Inverse of `embed_real` on matrices that lie in the embedded image.

    Reads each block's first column (left multiplication by q sends e_0 to q).
    """
    blocks = m.reshape(m.shape[:-2] + (n, k, n, k))
    return np.ascontiguousarray(np.swapaxes(blocks[..., :, :, :, 0], -1, -2))


def hermitize(a):
    """Symmetrize an arbitrary coordinate matrix into its hermitian part."""
    at = np.swapaxes(a, -2, -3).copy()
    at[..., 1:] = -at[..., 1:]
    return 0.5 * (a + at)
