"""Exception types shared across the package."""


class LocalPIRError(Exception):
    """Base class for every error this package raises on purpose."""


# --- field ---------------------------------------------------------------

class CompositeModulus(LocalPIRError):
    """The requested modulus is not a prime number."""


class ModulusMismatch(LocalPIRError):
    """Arithmetic attempted between elements of different fields."""


# --- graphs --------------------------------------------------------------

class SelfLoop(LocalPIRError):
    """An edge joins a vertex to itself."""


class DuplicateEdge(LocalPIRError):
    """The same unordered vertex pair appears twice in the edge list."""


class VertexOutOfRange(LocalPIRError):
    """An edge references a vertex outside 1..n."""


class InvalidFamilyParams(LocalPIRError):
    """Parameters do not describe a member of the requested graph family."""


class IndexOutOfRange(LocalPIRError):
    """A message or server index is outside its valid range."""


class TooLarge(LocalPIRError):
    """The instance exceeds the brute-force size cap."""


# --- scheme --------------------------------------------------------------

class TOutOfRange(LocalPIRError):
    """A per-server subset size t lies outside 1..degree."""


class RoleConflict(LocalPIRError):
    """The role rule cannot assign consistent endpoint roles."""


class ElementAbsent(LocalPIRError):
    """The element is not a member of the subset at the given position."""


class NotBipartite(LocalPIRError):
    """The graph (or the supplied partition) is not two-colorable."""


class EndpointAmbiguity(LocalPIRError):
    """Both endpoints of the desired edge fall in the covering part."""


class MissingComponentConfig(LocalPIRError):
    """A connected component has no scheme configuration."""


class UnresolvableRef(LocalPIRError):
    """A query atom references a message the server does not store."""


class IncompleteAnswers(LocalPIRError):
    """Decoding was attempted with answers missing for some atoms."""


class UndecodablePlan(LocalPIRError):
    """A plan's queries cannot recover every symbol of the desired message."""


# --- verify / capacity ---------------------------------------------------

class EnumerationTooLarge(LocalPIRError):
    """Exact enumeration would exceed the configured cap."""


class EmptyInput(LocalPIRError):
    """An aggregate was requested over zero parts."""


class UnsupportedFamily(LocalPIRError):
    """No closed-form bounds are on record for this family."""
