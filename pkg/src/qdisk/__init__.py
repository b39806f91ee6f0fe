"""qdisk: two-valued Dirichlet minimizers on the planar unit disk.

Subpackages cover the unordered-pair value algebra (qpoint), the exact
catalog of homogeneous conformal sheet pairs and their seam matching
(forms), discrete disk fields with frequency-function analytics (field),
spectral and relaxation minimizers for circle boundary data (minimizer),
blow-up extraction and catalog identification (blowup), and a CLI (cli).
"""

from .errors import (
    AmbiguousClass,
    DegenerateField,
    DegeneratePair,
    GridTooCoarse,
    NoCatalogMatch,
    NoConvergence,
    QdiskError,
    ZeroBoundaryMass,
    ZeroEnergy,
    ZeroSpectrum,
)
from .qpoint import QPoint, dist_to_zero_sq, eta, pair_distance, support_card

__version__ = "0.1.0"

__all__ = [
    "AmbiguousClass",
    "DegenerateField",
    "DegeneratePair",
    "GridTooCoarse",
    "NoCatalogMatch",
    "NoConvergence",
    "QdiskError",
    "QPoint",
    "ZeroBoundaryMass",
    "ZeroEnergy",
    "ZeroSpectrum",
    "dist_to_zero_sq",
    "eta",
    "pair_distance",
    "support_card",
]
