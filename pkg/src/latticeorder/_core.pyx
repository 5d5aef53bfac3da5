# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Kruskal MST deaths and dimension-1 Rips pairing.

Algorithms and outputs are identical to latticeorder._pycore (the pure-Python
twin); this module only removes interpreter overhead from the hot loops.
"""

from libc.stdlib cimport free, malloc, realloc

import numpy as np


# ---------------------------------------------------------------------------
# binary min-heap over (value, rank) pairs; rank determines value, so equal
# ranks are always equal keys and cancel mod 2

cdef struct Heap:
    double* val
    long long* rank
    Py_ssize_t size
    Py_ssize_t cap


cdef inline bint _less(double v1, long long r1, double v2, long long r2) noexcept nogil:
    return v1 < v2 or (v1 == v2 and r1 < r2)


cdef int _heap_reserve(Heap* h, Py_ssize_t need) except -1:
    cdef Py_ssize_t cap = h.cap
    cdef double* nv
    cdef long long* nr
    if need <= cap:
        return 0
    if cap == 0:
        cap = 1024
    while cap < need:
        cap *= 2
    nv = <double*> realloc(h.val, cap * sizeof(double))
    if nv == NULL:
        raise MemoryError()
    h.val = nv
    nr = <long long*> realloc(h.rank, cap * sizeof(long long))
    if nr == NULL:
        raise MemoryError()
    h.rank = nr
    h.cap = cap
    return 0


cdef void _sift_down(Heap* h, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t sz = h.size
    cdef Py_ssize_t child
    cdef double v = h.val[i]
    cdef long long r = h.rank[i]
    while True:
        child = 2 * i + 1
        if child >= sz:
            break
        if child + 1 < sz and _less(h.val[child + 1], h.rank[child + 1],
                                    h.val[child], h.rank[child]):
            child += 1
        if _less(h.val[child], h.rank[child], v, r):
            h.val[i] = h.val[child]
            h.rank[i] = h.rank[child]
            i = child
        else:
            break
    h.val[i] = v
    h.rank[i] = r


cdef void _heap_build(Heap* h) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(h.size // 2 - 1, -1, -1):
        _sift_down(h, i)


cdef int _heap_push(Heap* h, double v, long long r) except -1:
    _heap_reserve(h, h.size + 1)
    cdef Py_ssize_t i = h.size
    cdef Py_ssize_t up
    h.size += 1
    while i > 0:
        up = (i - 1) // 2
        if _less(v, r, h.val[up], h.rank[up]):
            h.val[i] = h.val[up]
            h.rank[i] = h.rank[up]
            i = up
        else:
            break
    h.val[i] = v
    h.rank[i] = r
    return 0


cdef inline int _heap_pop(Heap* h, double* v, long long* r) noexcept nogil:
    if h.size == 0:
        return 0
    v[0] = h.val[0]
    r[0] = h.rank[0]
    h.size -= 1
    if h.size:
        h.val[0] = h.val[h.size]
        h.rank[0] = h.rank[h.size]
        _sift_down(h, 0)
    return 1


cdef int _pop_pivot(Heap* h, double* pv, long long* pr) noexcept nogil:
    """Pop the minimum entry with mod-2 cancellation of duplicates."""
    cdef double v, dv
    cdef long long r, dr
    cdef Py_ssize_t count
    while _heap_pop(h, &v, &r):
        count = 1
        while h.size and h.rank[0] == r:
            _heap_pop(h, &dv, &dr)
            count += 1
        if count & 1:
            pv[0] = v
            pr[0] = r
            return 1
    return 0


cdef int _append_cofacets(Heap* h, double[:, ::1] dist, Py_ssize_t a, Py_ssize_t b,
                          double wab, double thr, bint sift) except -1:
    """Add (value, rank) of every triangle cofacet of edge (a, b) at <= thr.

    With sift=False entries are appended raw and the caller rebuilds the heap;
    with sift=True each entry is pushed into a valid heap.
    """
    cdef Py_ssize_t n = dist.shape[0]
    cdef long long nn = <long long> n
    cdef Py_ssize_t k
    cdef double da, db, v
    cdef long long x, y, z
    cdef const double* ra = &dist[a, 0]
    cdef const double* rb = &dist[b, 0]
    _heap_reserve(h, h.size + n)
    for k in range(n):
        if k == a or k == b:
            continue
        da = ra[k]
        if da > thr:
            continue
        db = rb[k]
        if db > thr:
            continue
        v = wab
        if da > v:
            v = da
        if db > v:
            v = db
        if k < a:
            x = k; y = a; z = b
        elif k < b:
            x = a; y = k; z = b
        else:
            x = a; y = b; z = k
        if sift:
            _heap_push(h, v, (x * nn + y) * nn + z)
        else:
            h.val[h.size] = v
            h.rank[h.size] = (x * nn + y) * nn + z
            h.size += 1
    return 0


# ---------------------------------------------------------------------------


cdef inline int _find(int* parent, int a) noexcept nogil:
    while parent[a] != a:
        parent[a] = parent[parent[a]]  # path halving
        a = parent[a]
    return a


def _merge_edge_mask(const int[::1] ei, const int[::1] ej, int n):
    """Boolean mask of the edges that merge components (Kruskal order)."""
    cdef Py_ssize_t n_edges = ei.shape[0]
    parent_arr = np.arange(n, dtype=np.int32)
    mask = np.zeros(n_edges, dtype=np.uint8)
    cdef int[::1] parent = parent_arr
    cdef unsigned char[::1] mk = mask
    cdef int* par = NULL
    cdef Py_ssize_t e
    cdef int ri, rj
    if n > 0:
        par = &parent[0]
    for e in range(n_edges):
        ri = _find(par, ei[e])
        rj = _find(par, ej[e])
        if ri != rj:
            par[ri] = rj
            mk[e] = 1
    return mask


def mst_deaths(const int[::1] ei, const int[::1] ej, const double[::1] ew, int n):
    """Kruskal over edges pre-sorted by filtration order.

    Returns (deaths, n_components): merge-edge weights in ascending filtration
    order and the number of components left at the threshold.
    """
    mask = _merge_edge_mask(ei, ej, n)
    deaths = np.ascontiguousarray(np.asarray(ew)[mask.view(bool)], dtype=np.float64)
    return deaths, n - len(deaths)


cdef Py_ssize_t _parity_compress(int[::1] a) noexcept nogil:
    """In-place mod-2 support of a sorted array; returns the compressed size."""
    cdef Py_ssize_t k = 0, run, m = 0
    cdef Py_ssize_t length = a.shape[0]
    while k < length:
        run = k + 1
        while run < length and a[run] == a[k]:
            run += 1
        if (run - k) & 1:
            a[m] = a[k]
            m += 1
        k = run
    return m


def h1_pairs(double[:, ::1] dist, const int[::1] ei, const int[::1] ej,
             const double[::1] ew, double threshold):
    """Dimension-1 Rips persistence pairs via anti-transpose reduction.

    Edge columns are processed in reverse filtration order; entries are the
    edge's triangle cofacets keyed by (filtration value, lexicographic rank).
    Component-merging edges never pair with a triangle, so they are cleared
    without reduction. Claimed columns store only the canonical list of
    generating edge positions and are rebuilt by re-enumerating cofacets on
    collision, keeping memory linear in the edge count. Zero-persistence pairs
    are dropped.

    Returns (births, deaths, n_zero_columns).
    """
    cdef Py_ssize_t n_edges = ew.shape[0]
    cdef Heap h
    h.val = NULL
    h.rank = NULL
    h.size = 0
    h.cap = 0

    cleared = _merge_edge_mask(ei, ej, <int> dist.shape[0])
    cdef const unsigned char[::1] clr = cleared

    cdef Py_ssize_t v_cap = 1024
    cdef int* vbuf = <int*> malloc(v_cap * sizeof(int))
    if vbuf == NULL:
        raise MemoryError()
    cdef Py_ssize_t v_len
    cdef int* ngrow

    claimed = {}
    births = []
    deaths = []
    cdef Py_ssize_t zero_cols = 0

    cdef Py_ssize_t pos, t
    cdef double w, pv
    cdef long long pr
    cdef object hit
    cdef const int[::1] hv
    cdef int[::1] wv
    cdef Py_ssize_t f
    column_arr = None

    for pos in range(n_edges):
        if clr[pos]:
            zero_cols += 1

    try:
        for pos in range(n_edges - 1, -1, -1):
            if clr[pos]:
                continue
            h.size = 0
            w = ew[pos]
            _append_cofacets(&h, dist, ei[pos], ej[pos], w, threshold, 0)
            _heap_build(&h)
            vbuf[0] = <int> pos
            v_len = 1
            while True:
                if not _pop_pivot(&h, &pv, &pr):
                    zero_cols += 1  # essential 1-cycle at a truncated threshold
                    break
                hit = claimed.get(pr)
                if hit is None:
                    column_arr = np.empty(v_len, dtype=np.int32)
                    wv = column_arr
                    for t in range(v_len):
                        wv[t] = vbuf[t]
                    column_arr.sort()
                    claimed[pr] = column_arr[: _parity_compress(wv)]
                    if pv != w:  # equal values mean zero persistence
                        births.append(w)
                        deaths.append(pv)
                    break
                # pivot collision: add the stored column (sum of coboundaries)
                _heap_push(&h, pv, pr)
                hv = hit
                if v_len + hv.shape[0] > v_cap:
                    while v_cap < v_len + hv.shape[0]:
                        v_cap *= 2
                    ngrow = <int*> realloc(vbuf, v_cap * sizeof(int))
                    if ngrow == NULL:
                        raise MemoryError()
                    vbuf = ngrow
                for t in range(hv.shape[0]):
                    f = hv[t]
                    _append_cofacets(&h, dist, ei[f], ej[f], ew[f], threshold, 1)
                    vbuf[v_len] = <int> f
                    v_len += 1
    finally:
        free(vbuf)
        free(h.val)
        free(h.rank)

    return (
        np.asarray(births, dtype=np.float64),
        np.asarray(deaths, dtype=np.float64),
        zero_cols,
    )
