# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels over multiword bitset adjacency.

Same contract as :mod:`plab._pykernels`; adjacency arrives as a sequence of
Python ints and is unpacked into ``uint64`` words once per call.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _popcount(const uint64_t* s, int W) noexcept nogil:
    cdef int c = 0, i
    for i in range(W):
        c += __builtin_popcountll(s[i])
    return c


cdef inline int _lowest(const uint64_t* s, int W) noexcept nogil:
    cdef int i
    for i in range(W):
        if s[i]:
            return i * 64 + __builtin_ctzll(s[i])
    return -1


cdef inline bint _empty(const uint64_t* s, int W) noexcept nogil:
    cdef int i
    for i in range(W):
        if s[i]:
            return False
    return True


cdef inline void _clear(uint64_t* s, int v) noexcept nogil:
    s[v >> 6] &= ~((<uint64_t>1) << (v & 63))


cdef inline void _set(uint64_t* s, int v) noexcept nogil:
    s[v >> 6] |= (<uint64_t>1) << (v & 63)


cdef inline void _and(uint64_t* out, const uint64_t* a, const uint64_t* b, int W) noexcept nogil:
    cdef int i
    for i in range(W):
        out[i] = a[i] & b[i]


cdef uint64_t* _unpack(adj, int n, int W) except NULL:
    cdef uint64_t* words = <uint64_t*>calloc(n * W + 1, sizeof(uint64_t))
    cdef int v, w
    if words == NULL:
        raise MemoryError()
    mask = (1 << 64) - 1
    for v in range(n):
        row = int(adj[v])
        for w in range(W):
            words[v * W + w] = <uint64_t>((row >> (64 * w)) & mask)
    return words


cdef void _fill(uint64_t* s, int n, int W) noexcept nogil:
    cdef int i
    for i in range(W):
        s[i] = 0
    for i in range(n):
        _set(s, i)


# ---------------------------------------------------------------- max clique

cdef struct CliqueCtx:
    int n
    int W
    uint64_t* adj
    uint64_t* buf      # (n + 1) levels of W words
    int* order         # (n + 1) levels of n vertices
    int* colors        # (n + 1) levels of n colors
    int best


cdef void _bb_expand(CliqueCtx* c, int depth, int size) noexcept nogil:
    cdef int W = c.W, n = c.n
    cdef uint64_t* cands = c.buf + depth * W
    cdef uint64_t* nxt = c.buf + (depth + 1) * W
    cdef int* order = c.order + depth * n
    cdef int* colors = c.colors + depth * n
    cdef uint64_t* unc = <uint64_t*>malloc(2 * W * sizeof(uint64_t))
    cdef uint64_t* q = unc + W
    cdef int m = 0, color = 0, v, k, i
    memcpy(unc, cands, W * sizeof(uint64_t))
    while not _empty(unc, W):
        color += 1
        memcpy(q, unc, W * sizeof(uint64_t))
        while not _empty(q, W):
            v = _lowest(q, W)
            _clear(q, v)
            _clear(unc, v)
            for i in range(W):
                q[i] &= ~c.adj[v * W + i]
            order[m] = v
            colors[m] = color
            m += 1
    free(unc)
    for k in range(m - 1, -1, -1):
        if size + colors[k] <= c.best:
            return
        v = order[k]
        _and(nxt, cands, c.adj + v * W, W)
        if _empty(nxt, W):
            if size + 1 > c.best:
                c.best = size + 1
        else:
            _bb_expand(c, depth + 1, size + 1)
        _clear(cands, v)


def max_clique(adj):
    """Largest clique size by branch and bound with a coloring bound."""
    cdef int n = len(adj)
    cdef int W = (n + 63) // 64 if n else 1
    cdef CliqueCtx c
    if n == 0:
        return 0
    c.n = n
    c.W = W
    c.best = 0
    c.adj = _unpack(adj, n, W)
    c.buf = <uint64_t*>calloc((n + 2) * W, sizeof(uint64_t))
    c.order = <int*>malloc((n + 1) * n * sizeof(int))
    c.colors = <int*>malloc((n + 1) * n * sizeof(int))
    try:
        if c.buf == NULL or c.order == NULL or c.colors == NULL:
            raise MemoryError()
        _fill(c.buf, n, W)
        with nogil:
            _bb_expand(&c, 0, 0)
        return c.best
    finally:
        free(c.adj)
        free(c.buf)
        free(c.order)
        free(c.colors)


cdef void _ex_expand(CliqueCtx* c, int depth, int size) noexcept nogil:
    cdef int W = c.W, v
    cdef uint64_t* cands = c.buf + depth * W
    cdef uint64_t* nxt = c.buf + (depth + 1) * W
    if _empty(cands, W):
        if size > c.best:
            c.best = size
        return
    while not _empty(cands, W):
        if size + _popcount(cands, W) <= c.best:
            return
        v = _lowest(cands, W)
        _clear(cands, v)
        _and(nxt, cands, c.adj + v * W, W)
        _ex_expand(c, depth + 1, size + 1)


def max_clique_exhaustive(adj):
    """Largest clique size by plain recursion with a size bound."""
    cdef int n = len(adj)
    cdef int W = (n + 63) // 64 if n else 1
    cdef CliqueCtx c
    if n == 0:
        return 0
    c.n = n
    c.W = W
    c.best = 0
    c.adj = _unpack(adj, n, W)
    c.buf = <uint64_t*>calloc((n + 2) * W, sizeof(uint64_t))
    c.order = NULL
    c.colors = NULL
    try:
        if c.buf == NULL:
            raise MemoryError()
        _fill(c.buf, n, W)
        with nogil:
            _ex_expand(&c, 0, 0)
        return c.best
    finally:
        free(c.adj)
        free(c.buf)


# ------------------------------------------------------- clique extensions

cdef struct ScanCtx:
    int W
    int k
    uint64_t* adj
    uint64_t* cands    # (k + 1) levels
    uint64_t* common   # (k + 1) levels
    int* members
    int* witness
    long long count
    int max_ext


cdef void _scan(ScanCtx* s, int depth) noexcept nogil:
    cdef int W = s.W, v, ext, i
    cdef uint64_t* cands = s.cands + depth * W
    cdef uint64_t* common = s.common + depth * W
    if depth == s.k:
        s.count += 1
        ext = _popcount(common, W)
        if ext > s.max_ext:
            s.max_ext = ext
            if ext > 1:
                for i in range(s.k):
                    s.witness[i] = s.members[i]
        return
    while not _empty(cands, W):
        if _popcount(cands, W) < s.k - depth:
            return
        v = _lowest(cands, W)
        _clear(cands, v)
        s.members[depth] = v
        _and(s.cands + (depth + 1) * W, cands, s.adj + v * W, W)
        _and(s.common + (depth + 1) * W, common, s.adj + v * W, W)
        _scan(s, depth + 1)


def scan_clique_extensions(adj, int k):
    """Enumerate every k-clique and measure its common neighbourhood.

    Returns ``(count, max_ext, witness)``; see the pure-Python twin.
    """
    cdef int n = len(adj)
    cdef int W = (n + 63) // 64 if n else 1
    cdef ScanCtx s
    if k == 0:
        return 1, n, None
    s.W = W
    s.k = k
    s.count = 0
    s.max_ext = 0
    s.adj = _unpack(adj, n, W)
    s.cands = <uint64_t*>calloc((k + 1) * W, sizeof(uint64_t))
    s.common = <uint64_t*>calloc((k + 1) * W, sizeof(uint64_t))
    s.members = <int*>calloc(k, sizeof(int))
    s.witness = <int*>calloc(k, sizeof(int))
    try:
        if s.cands == NULL or s.common == NULL or s.members == NULL or s.witness == NULL:
            raise MemoryError()
        _fill(s.cands, n, W)
        _fill(s.common, n, W)
        with nogil:
            _scan(&s, 0)
        witness = None
        if s.max_ext > 1:
            witness = tuple(s.witness[i] for i in range(k))
        return s.count, s.max_ext, witness
    finally:
        free(s.adj)
        free(s.cands)
        free(s.common)
        free(s.members)
        free(s.witness)


# ------------------------------------------------- injective homomorphisms

cdef class _HomIterator:
    cdef int n, W, v
    cdef uint64_t* adj
    cdef uint64_t* cands   # n levels
    cdef uint64_t* used
    cdef int* img
    cdef int* back         # n * n, -1 terminated rows
    cdef bint done

    def __cinit__(self, adj):
        cdef int n = len(adj)
        cdef int W = (n + 63) // 64 if n else 1
        cdef int v, u, m
        self.n = n
        self.W = W
        self.adj = _unpack(adj, n, W)
        self.cands = <uint64_t*>calloc(n * W + 1, sizeof(uint64_t))
        self.used = <uint64_t*>calloc(W, sizeof(uint64_t))
        self.img = <int*>calloc(n + 1, sizeof(int))
        self.back = <int*>malloc((n * (n + 1) + 1) * sizeof(int))
        if self.cands == NULL or self.used == NULL or self.img == NULL or self.back == NULL:
            raise MemoryError()
        for v in range(n):
            m = 0
            for u in range(v):
                if (self.adj[v * W + (u >> 6)] >> (u & 63)) & 1:
                    self.back[v * (n + 1) + m] = u
                    m += 1
            self.back[v * (n + 1) + m] = -1
        self.done = n == 0
        self.v = 0
        if not self.done:
            self._prepare(0)

    def __dealloc__(self):
        free(self.adj)
        free(self.cands)
        free(self.used)
        free(self.img)
        free(self.back)

    cdef void _prepare(self, int v) noexcept nogil:
        cdef int W = self.W, i, j, u
        cdef uint64_t* c = self.cands + v * W
        _fill(c, self.n, W)
        for i in range(W):
            c[i] &= ~self.used[i]
        j = 0
        while True:
            u = self.back[v * (self.n + 1) + j]
            if u < 0:
                break
            _and(c, c, self.adj + self.img[u] * W, W)
            j += 1

    cdef bint _advance(self) noexcept nogil:
        # leaves a complete assignment in img and returns True, or False when exhausted
        cdef int W = self.W, w
        cdef uint64_t* c
        while True:
            c = self.cands + self.v * W
            if _empty(c, W):
                self.v -= 1
                if self.v < 0:
                    return False
                _clear(self.used, self.img[self.v])
                continue
            w = _lowest(c, W)
            _clear(c, w)
            self.img[self.v] = w
            if self.v == self.n - 1:
                return True
            _set(self.used, w)
            self.v += 1
            self._prepare(self.v)

    def __iter__(self):
        return self

    def __next__(self):
        cdef bint ok
        if self.done:
            raise StopIteration
        with nogil:
            ok = self._advance()
        if not ok:
            self.done = True
            raise StopIteration
        return tuple(self.img[i] for i in range(self.n))


def injective_homomorphisms(adj):
    """Iterate every injective edge-preserving self-map as a tuple of images."""
    return _HomIterator(adj)


def count_injective_homomorphisms(adj):
    cdef _HomIterator it = _HomIterator(adj)
    cdef long long count = 0
    if it.done:
        return 0
    with nogil:
        while it._advance():
            count += 1
    return count
