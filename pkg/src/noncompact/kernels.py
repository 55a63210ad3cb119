"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting the environment
variable ``NONCOMPACT_PURE_PYTHON=1`` forces the numpy fallback.
"""

from __future__ import annotations

import os

if os.environ.get("NONCOMPACT_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as backend
else:
    try:
        from . import _ckernels as backend
    except ImportError:  # extension not built
        from . import _pykernels as backend

BACKEND = "compiled" if backend.__name__.endswith("_ckernels") else "python"

subset_costs_diameter = backend.subset_costs_diameter
partition_minmax = backend.partition_minmax
max_min_dispersion = backend.max_min_dispersion
hull_fw = backend.hull_fw
coord_center = backend.coord_center
cheb_dual_fw = backend.cheb_dual_fw
uniform_bounds = backend.uniform_bounds
