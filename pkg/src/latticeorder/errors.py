"""Exception hierarchy. Every error carries the CLI exit code it maps to."""


class LatticeOrderError(Exception):
    """Base class for all package errors (CLI exit code 4: computation)."""

    exit_code = 4


class InvalidSpecError(LatticeOrderError):
    """A spec object (lattice, grid, perturbation, crop ...) is out of range."""


class InvalidThresholdError(LatticeOrderError):
    """Negative filtration threshold."""


class DegenerateExtentError(LatticeOrderError):
    """Cloud has no extent along one axis; cannot scale to the unit box."""


class DuplicatePointsError(LatticeOrderError):
    """Two normalized points closer than the 1e-12 duplicate guard."""


class InsufficientDataError(LatticeOrderError):
    """Too few finite 0D pairs to form a variance."""


class SizeGuardError(LatticeOrderError):
    """Oracle input exceeds the brute-force size cap."""


class BoundsError(LatticeOrderError):
    """Pixel coordinates or crop window outside the image."""


class EmptyResultError(LatticeOrderError):
    """Every region-growing seed failed."""


class UnitMismatchError(LatticeOrderError):
    """Operands carry different unit tags."""


class FileFormatError(LatticeOrderError):
    """Malformed input file (CSV/JSON/PGM/PNG). CLI exit code 3."""

    exit_code = 3


class InternalConsistencyError(LatticeOrderError):
    """A 'must be impossible' state was reached. CLI exit code 5."""

    exit_code = 5
