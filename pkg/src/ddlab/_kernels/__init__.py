"""Kernel backend selection: compiled extension with pure-Python fallback.

Set DDLAB_PURE=1 in the environment to force the pure backend.
"""

import os

if os.environ.get("DDLAB_PURE"):
    from . import _pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _gf2ext as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _pure as _impl

        BACKEND = "pure"

gf2_rank = _impl.gf2_rank
rref_basis = _impl.rref_basis
span_members = _impl.span_members
subspaces_within = _impl.subspaces_within
union_of_max_subspaces = _impl.union_of_max_subspaces

__all__ = [
    "BACKEND",
    "gf2_rank",
    "rref_basis",
    "span_members",
    "subspaces_within",
    "union_of_max_subspaces",
]
