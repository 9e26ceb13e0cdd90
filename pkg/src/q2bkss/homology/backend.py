"""Select the elimination kernels: compiled extension if built, else pure Python.

Set ``Q2BKSS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _elim_py

NAME = "python"
snf_exponents = _elim_py.snf_exponents
column_echelon = _elim_py.column_echelon

if not os.environ.get("Q2BKSS_PURE_PYTHON"):
    try:
        from . import _elim as _compiled
    except ImportError:
        pass
    else:
        NAME = "cython"
        snf_exponents = _compiled.snf_exponents
        column_echelon = _compiled.column_echelon
