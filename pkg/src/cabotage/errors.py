"""Exception hierarchy shared across the package.

Geometry errors signal recoverable conditions (callers widen detours or
escalate parameters); data errors signal unusable input and abort the load.
"""


class CabotageError(Exception):
    """Base class for all package errors."""


# -- geometry / routing ----------------------------------------------------

class NoSeaFound(CabotageError):
    """No sea point could be located within the retry budget."""


class NoDetourFound(CabotageError):
    """The buffered coast section yielded no usable sea points."""


class NoRouteFound(CabotageError):
    """Recursion and escalation budgets exhausted without a land-free path."""


class InvalidEndpoint(CabotageError):
    """A route endpoint could not be projected offshore."""


class UnknownPlace(CabotageError):
    """A gazetteer identifier did not resolve."""


# -- dates -----------------------------------------------------------------

class MalformedDate(CabotageError):
    """Date text does not follow the flexible date micro-format."""


class UnknownDate(CabotageError):
    """A comparison was requested on an unknown (empty) date."""


# -- ingest ----------------------------------------------------------------

class UnsupportedGeometry(CabotageError):
    """Coastline input contains a non-polygon geometry."""


class CorruptFile(CabotageError):
    """Input file could not be decoded."""


class DuplicateId(CabotageError):
    """Two gazetteer rows share the same identifier."""


class BadCoordinates(CabotageError):
    """Longitude/latitude outside valid WGS84 ranges."""


class SchemaMismatch(CabotageError):
    """CSV header differs from the expected schema."""


# -- service ---------------------------------------------------------------

class UnknownShip(CabotageError):
    """Requested ship identifier is absent from the corpus."""


class EmptyCriteria(CabotageError):
    """An itinerary query carried no identity criterion."""


class TooManyItineraries(CabotageError):
    """More than two itineraries requested for comparison."""
