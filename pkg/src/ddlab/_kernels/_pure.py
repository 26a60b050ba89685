"""Pure-Python GF(2) kernels.

Reference implementations of the hot inner loops; the compiled extension
(_gf2ext) mirrors these semantics exactly. Vectors are d-bit ints
(coordinate i = bit i), subsets of GF(2)^d are plain collections of ints.
"""


def rref_basis(vectors):
    """Reduced row-echelon basis of the span, as an ascending tuple.

    Every basis vector owns its leading bit exclusively, which makes the
    result canonical for a given span.
    """
    basis = []
    for v in vectors:
        for b in basis:
            if v ^ b < v:
                v ^= b
        if v:
            basis = [b ^ v if b ^ v < b else b for b in basis]
            basis.append(v)
    basis.sort()
    return tuple(basis)


def gf2_rank(vectors):
    """Rank of a collection of d-bit vectors over GF(2)."""
    return len(rref_basis(vectors))


def span_members(vectors):
    """All 2^rank elements of the span, as a sorted tuple."""
    members = [0]
    for b in rref_basis(vectors):
        members += [m ^ b for m in members]
    members.sort()
    return tuple(members)


def _grow_subspaces(mset, nonzero, span, last, visit):
    visit(span)
    for v in nonzero:
        if v <= last or v in span:
            continue
        coset = [v ^ w for w in span]
        # canonical generator: v must be the least element of its coset
        if min(coset) != v:
            continue
        if all(c in mset for c in coset):
            _grow_subspaces(mset, nonzero, span | set(coset), v, visit)


def subspaces_within(members):
    """Every GF(2)-subspace contained in the given set, each exactly once.

    Returns a list of sorted member tuples; empty if 0 is missing.
    """
    mset = set(members)
    if 0 not in mset:
        return []
    nonzero = sorted(v for v in mset if v)
    found = []
    _grow_subspaces(mset, nonzero, {0}, 0,
                    lambda span: found.append(tuple(sorted(span))))
    return found


def union_of_max_subspaces(members):
    """Union of all maximum-cardinality subspaces inside the set.

    Requires 0 in members. Returns (max_cardinality, sorted union tuple).
    """
    mset = set(members)
    if 0 not in mset:
        raise ValueError("union_of_max_subspaces needs 0 in the set")
    nonzero = sorted(v for v in mset if v)
    state = {"card": 1, "union": {0}}

    def visit(span):
        if len(span) > state["card"]:
            state["card"] = len(span)
            state["union"] = set(span)
        elif len(span) == state["card"]:
            state["union"] |= span

    _grow_subspaces(mset, nonzero, {0}, 0, visit)
    return state["card"], tuple(sorted(state["union"]))
