"""Exception taxonomy for the engine.

Every error raised on purpose derives from ZigzagError, so callers (and the
CLI) can catch one base class.  Names state the violated precondition.
"""


class ZigzagError(Exception):
    pass


# --- field / chain / complex layer ---

class ZeroInverse(ZigzagError):
    """Multiplicative inverse of 0 requested."""


class MissingFacet(ZigzagError):
    """A cell insertion references a facet that is not in the complex."""


class MissingFace(MissingFacet):
    """A simplex list is not closed under taking faces."""


class BrokenBoundary(ZigzagError):
    """The provided boundary chain is not a cycle (d(d(cell)) != 0)."""


class NotMaximal(ZigzagError):
    """Removal requested for a cell that still has cofacets."""


class UnknownCell(ZigzagError):
    """CellId not present in the complex."""


class EmptyDims(ZigzagError):
    """Cubical grid with a non-positive extent."""


# --- Morse engine ---

class NotCritical(ZigzagError):
    """Morse (co)boundary queried at a non-critical cell."""


class CyclicMatching(ZigzagError):
    """The oriented Hasse diagram of a matching has a directed cycle."""


class NotRemovable(ZigzagError):
    """Backward block whose complement is not a subcomplex."""


class InvalidOp(ZigzagError):
    """Atomic operation inconsistent with the current state."""


# --- zigzag kernel ---

class InconsistentBoundary(ZigzagError):
    """A boundary chain references rows unknown to the homology matrix."""


class UnknownRow(ZigzagError):
    """Removal of a cell that is not a row of the homology matrix."""


class ZeroPairIncidence(ZigzagError):
    """Unpairing a Morse pair whose incidence vanishes mod p."""


# --- validation mode ---

class BrokenInvariant(ZigzagError):
    """A validate-mode audit found an internal inconsistency."""


# --- oracle ---

class TooLarge(ZigzagError):
    """Instance exceeds the oracle's brute-force size bound."""


# --- generators ---

class EmptyCloud(ZigzagError):
    """Point cloud with no points."""


class BadParameters(ZigzagError):
    """Invalid generator parameters (e.g. mu > nu)."""


class NonMonotoneLevels(ZigzagError):
    """Levelset values not strictly increasing."""


# --- file formats ---

class RaggedRow(ZigzagError):
    """Point file rows with inconsistent arity."""


class EmptyFile(ZigzagError):
    """Input file contains no data."""


class BadHeader(ZigzagError):
    """Image file header malformed."""


class CountMismatch(ZigzagError):
    """Image file value count does not match the header dims."""


class BadStreamLine(ZigzagError):
    """Stream file line malformed."""
