"""Hole probabilities and energy problems for Mittag-Leffler ensembles."""
import os as _os

# HOLEPROB_THREADS caps BLAS threads; it has to be applied before numpy loads
_threads = _os.environ.get("HOLEPROB_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"

from .regions import Region  # noqa: E402
from .radial import EnsembleSpec, hole_prob_disk, hole_prob_annulus  # noqa: E402
from .potential import power_field, equilibrium, r_hole_closed_form, decay_constant  # noqa: E402
from .gram import GramSpec, gram_matrix, hole_prob_gram, fredholm_hole_oracle  # noqa: E402
from .fekete import optimize_fekete  # noqa: E402
from .fluctuations import variance_count, variance_linear, mean_count  # noqa: E402

__all__ = [
    "Region", "EnsembleSpec", "hole_prob_disk", "hole_prob_annulus", "power_field",
    "equilibrium", "r_hole_closed_form", "decay_constant", "GramSpec", "gram_matrix",
    "hole_prob_gram", "fredholm_hole_oracle", "optimize_fekete", "variance_count",
    "variance_linear", "mean_count",
]
