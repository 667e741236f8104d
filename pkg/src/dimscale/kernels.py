"""Backend selection for the exhaustive-search kernels.

The compiled ``_ckernels`` module is used when it was built; otherwise, or
when ``DIMSCALE_PURE=1`` is set, the pure-Python ``_pykernels`` module is
used.  ``BACKEND`` names the module in use.
"""

import os

from dimscale import _pykernels

pure = _pykernels

if os.environ.get("DIMSCALE_PURE") == "1":
    compiled = None
else:
    try:
        from dimscale import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

first_zero_law_violation = _impl.first_zero_law_violation
first_noncommuting = _impl.first_noncommuting
first_nonassociative = _impl.first_nonassociative
leq_matrix = _impl.leq_matrix
refinement_matrix = _impl.refinement_matrix
first_refinement_failure = _impl.first_refinement_failure
first_n1_failure = _impl.first_n1_failure
first_n3_failure = _impl.first_n3_failure
meet_table = _impl.meet_table
