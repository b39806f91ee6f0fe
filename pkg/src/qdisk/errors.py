"""Exception types shared across the toolkit."""


class QdiskError(Exception):
    """Base class for all toolkit errors."""


class GridTooCoarse(QdiskError):
    """Requested radius or grid resolution below the supported minimum."""


class ZeroBoundaryMass(QdiskError):
    """The function vanishes on the requested circle; frequency undefined."""


class DegeneratePair(QdiskError):
    """Both sheets are the zero form; the function is identically 2[[0]]."""


class AmbiguousClass(QdiskError):
    """Sheet values collide; the continuation class is not determined."""


class ZeroSpectrum(QdiskError):
    """All spectral coefficients are below threshold."""


class ZeroEnergy(QdiskError):
    """Dirichlet energy too small to normalize against."""


class DegenerateField(QdiskError):
    """All sampled pair distances vanish; no exponent can be fitted."""


class NoCatalogMatch(QdiskError):
    """The field does not fit any admissible homogeneous catalog entry."""


class NoConvergence(QdiskError):
    """Relaxation hit the sweep budget before meeting the stopping rule.

    Carries the last iterate so callers can inspect how far it got.
    """

    def __init__(self, message, field=None, residual=None, sweeps=None):
        super().__init__(message)
        self.field = field
        self.residual = residual
        self.sweeps = sweeps
