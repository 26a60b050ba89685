# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) kernels; exact semantic mirror of ddlab._kernels._pure."""

from libc.stdlib cimport calloc, free, malloc


cdef int MAX_WIDTH = 24


cdef int _rref(object vectors, unsigned int* basis) except -1:
    """Reduced row-echelon basis into `basis` (caller provides >= 32 slots).

    Returns the rank; basis is left sorted ascending.
    """
    cdef int rank = 0, i, j
    cdef unsigned int v, b, tmp
    for obj in vectors:
        v = obj
        if v >> MAX_WIDTH:
            raise ValueError("vector exceeds the 24-bit width cap")
        for i in range(rank):
            b = basis[i]
            if (v ^ b) < v:
                v ^= b
        if v:
            for i in range(rank):
                b = basis[i]
                if (b ^ v) < b:
                    basis[i] = b ^ v
            basis[rank] = v
            rank += 1
    # insertion sort; rank <= 24
    for i in range(1, rank):
        tmp = basis[i]
        j = i
        while j > 0 and basis[j - 1] > tmp:
            basis[j] = basis[j - 1]
            j -= 1
        basis[j] = tmp
    return rank


def rref_basis(vectors):
    """Reduced row-echelon basis of the span, as an ascending tuple."""
    cdef unsigned int basis[32]
    cdef int rank = _rref(vectors, basis)
    return tuple([basis[i] for i in range(rank)])


def gf2_rank(vectors):
    """Rank of a collection of d-bit vectors over GF(2)."""
    cdef unsigned int basis[32]
    return _rref(vectors, basis)


def span_members(vectors):
    """All 2^rank elements of the span, as a sorted tuple."""
    cdef unsigned int basis[32]
    cdef int rank = _rref(vectors, basis)
    cdef size_t size = (<size_t> 1) << rank
    cdef unsigned int* buf = <unsigned int*> malloc(size * sizeof(unsigned int))
    if buf == NULL:
        raise MemoryError()
    cdef size_t n = 1, i
    cdef int k
    buf[0] = 0
    # ascending RREF basis keeps the doubling order sorted: two span
    # elements always differ first at a leading bit, which no other
    # basis vector carries
    for k in range(rank):
        for i in range(n):
            buf[n + i] = buf[i] ^ basis[k]
        n <<= 1
    try:
        return tuple([buf[i] for i in range(n)])
    finally:
        free(buf)


cdef struct _Search:
    unsigned char* member     # value-space membership flags
    unsigned char* in_span
    unsigned int* nonzero
    int n_nonzero
    unsigned int* span        # current span, capacity = |members|
    unsigned int* scratch


cdef int _grow_collect(_Search* s, int span_len, unsigned int last,
                       list out) except -1:
    cdef int i, j, k
    cdef unsigned int v, c, mn, tmp
    for i in range(span_len):
        s.scratch[i] = s.span[i]
    for i in range(1, span_len):
        tmp = s.scratch[i]
        j = i
        while j > 0 and s.scratch[j - 1] > tmp:
            s.scratch[j] = s.scratch[j - 1]
            j -= 1
        s.scratch[j] = tmp
    out.append(tuple([s.scratch[i] for i in range(span_len)]))
    for k in range(s.n_nonzero):
        v = s.nonzero[k]
        if v <= last or s.in_span[v]:
            continue
        mn = v
        for i in range(span_len):
            c = v ^ s.span[i]
            if not s.member[c]:
                mn = 0
                break
            if c < mn:
                mn = c
        if mn != v:
            continue
        for i in range(span_len):
            c = v ^ s.span[i]
            s.span[span_len + i] = c
            s.in_span[c] = 1
        _grow_collect(s, span_len * 2, v, out)
        for i in range(span_len):
            s.in_span[s.span[span_len + i]] = 0
    return 0


cdef int _grow_max(_Search* s, int span_len, unsigned int last,
                   unsigned char* best, int* best_card,
                   size_t table_size) except -1:
    cdef int i, k
    cdef unsigned int v, c, mn
    if span_len > best_card[0]:
        best_card[0] = span_len
        for i in range(<int> table_size):
            best[i] = 0
        for i in range(span_len):
            best[s.span[i]] = 1
    elif span_len == best_card[0]:
        for i in range(span_len):
            best[s.span[i]] = 1
    for k in range(s.n_nonzero):
        v = s.nonzero[k]
        if v <= last or s.in_span[v]:
            continue
        mn = v
        for i in range(span_len):
            c = v ^ s.span[i]
            if not s.member[c]:
                mn = 0
                break
            if c < mn:
                mn = c
        if mn != v:
            continue
        for i in range(span_len):
            c = v ^ s.span[i]
            s.span[span_len + i] = c
            s.in_span[c] = 1
        _grow_max(s, span_len * 2, v, best, best_card, table_size)
        for i in range(span_len):
            s.in_span[s.span[span_len + i]] = 0
    return 0


cdef size_t _setup(object members, _Search* s, object sorted_members) except 0:
    """Allocate tables for a subspace search; returns value-table size."""
    cdef int n = len(sorted_members)
    cdef unsigned int top = sorted_members[n - 1]
    if top >> MAX_WIDTH:
        raise ValueError("vector exceeds the 24-bit width cap")
    cdef size_t table_size = 1
    while table_size <= <size_t> top:
        table_size <<= 1
    s.member = <unsigned char*> calloc(table_size, 1)
    s.in_span = <unsigned char*> calloc(table_size, 1)
    s.nonzero = <unsigned int*> malloc(n * sizeof(unsigned int))
    s.span = <unsigned int*> malloc(n * sizeof(unsigned int))
    s.scratch = <unsigned int*> malloc(n * sizeof(unsigned int))
    if (s.member == NULL or s.in_span == NULL or s.nonzero == NULL
            or s.span == NULL or s.scratch == NULL):
        _teardown(s)
        raise MemoryError()
    cdef unsigned int v
    cdef int i = 0
    for obj in sorted_members:
        v = obj
        s.member[v] = 1
        if v:
            s.nonzero[i] = v
            i += 1
    s.n_nonzero = i
    s.span[0] = 0
    s.in_span[0] = 1
    return table_size


cdef void _teardown(_Search* s) noexcept:
    free(s.member)
    free(s.in_span)
    free(s.nonzero)
    free(s.span)
    free(s.scratch)


def subspaces_within(members):
    """Every GF(2)-subspace contained in the given set, each exactly once.

    Returns a list of sorted member tuples; empty if 0 is missing.
    """
    sorted_members = sorted(set(members))
    if not sorted_members or sorted_members[0] != 0:
        return []
    cdef _Search s
    _setup(members, &s, sorted_members)
    out = []
    try:
        _grow_collect(&s, 1, 0, out)
    finally:
        _teardown(&s)
    return out


def union_of_max_subspaces(members):
    """Union of all maximum-cardinality subspaces inside the set.

    Requires 0 in members. Returns (max_cardinality, sorted union tuple).
    """
    sorted_members = sorted(set(members))
    if not sorted_members or sorted_members[0] != 0:
        raise ValueError("union_of_max_subspaces needs 0 in the set")
    cdef _Search s
    cdef size_t table_size = _setup(members, &s, sorted_members)
    cdef unsigned char* best = <unsigned char*> calloc(table_size, 1)
    cdef int best_card = 0
    cdef size_t i
    if best == NULL:
        _teardown(&s)
        raise MemoryError()
    try:
        _grow_max(&s, 1, 0, best, &best_card, table_size)
        union_members = []
        for i in range(table_size):
            if best[i]:
                union_members.append(i)
        return best_card, tuple(union_members)
    finally:
        free(best)
        _teardown(&s)
