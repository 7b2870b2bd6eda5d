"""f-divergences between density matrices on direct sums of weighted matrix blocks.

The heavy lifting lives in the C++ extension ``qfdiv._core``: states are
lists of complex numpy matrices (one per algebra block), and every divergence
is computed by two independent routes whose agreement can be checked with
:func:`verify`.
"""

from qfdiv._core import (
    AlgebraSpec,
    QfdivError,
    State,
    catalog_names,
    f_divergence,
    inequalities,
    inner,
    ns_atoms,
    random_state,
    support_defects,
    trace,
    validate_state,
    verify,
    __version__,
)

__all__ = [
    "AlgebraSpec",
    "QfdivError",
    "State",
    "catalog_names",
    "f_divergence",
    "inequalities",
    "inner",
    "ns_atoms",
    "random_state",
    "support_defects",
    "trace",
    "validate_state",
    "verify",
    "__version__",
]
