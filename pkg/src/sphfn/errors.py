"""Typed errors raised by the public API.

Everything inherits from SphfnError so callers can catch the library
as a whole; the CLI maps these onto exit codes.
"""


class SphfnError(Exception):
    """Base class for all library errors."""


class ConfigError(SphfnError):
    """Malformed or inconsistent configuration input."""


class DimensionMismatch(SphfnError):
    """Vector or matrix shapes do not match the ambient dimension."""


class NonOrthogonalGenerator(SphfnError):
    """A finite-group generator fails the orthogonality check."""


class NonUnitaryInput(SphfnError):
    """Realification input fails the unitarity check."""


class GroupTooLarge(SphfnError):
    """Closure of the generators exceeded the element cap."""


class UnsupportedSampler(SphfnError):
    """The group kind has no Haar sampler (and no element list)."""


class OrbitTestUnsupported(SphfnError):
    """Real-orbit membership is not decidable for this group kind or input."""


class OverflowRisk(SphfnError):
    """An exponent magnitude above 700 would overflow double precision."""


class SeriesNotConverged(SphfnError):
    """Power series failed to converge within the term cap."""


class ProbeAtZero(SphfnError):
    """The probe point has |value| too small for a stable ratio estimate."""


class DegenerateBasis(SphfnError):
    """Lattice basis vectors are linearly dependent."""


class NotFinite(SphfnError):
    """Operation requires a finite group with an explicit element list."""


class DegreeCapExceeded(SphfnError):
    """Requested polynomial degree needs more monomials than the cap allows."""


class FingerprintUnsupported(SphfnError):
    """No invariant fingerprint rule exists for this group kind."""


class BasisMismatch(SphfnError):
    """Quotient points were computed against different invariant bases."""


class GridTooCoarse(SphfnError):
    """Quadrature grid failed its refinement agreement check."""
