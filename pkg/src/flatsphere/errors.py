"""Exception types shared across the package.

Every message that involves a metric comparison states the tolerance used,
so failed builds are reproducible from the log alone.
"""


class FlatSphereError(Exception):
    """Base class for all package errors."""


class NonMatchingGluing(FlatSphereError):
    """Glued edges differ in length beyond tolerance."""


class NotASphere(FlatSphereError):
    """The face complex is not a connected genus-0 closed surface."""


class DegenerateFace(FlatSphereError):
    """A triangle has non-positive signed area or a zero-length edge."""


class BrokenCorridor(FlatSphereError):
    """Consecutive faces of a corridor do not share the declared edge."""


class VertexGrazing(FlatSphereError):
    """A traced segment passes within tolerance of a cone point."""


class DegenerateStart(FlatSphereError):
    """Trace start is ambiguous (on a vertex, or tangent to an edge)."""


class TangentialOverlap(FlatSphereError):
    """Two threads overlap along a sub-segment; the intersection count is undefined."""


class ContainedInEdge(FlatSphereError):
    """Trajectory lies inside a triangulation edge; thread decomposition is undefined."""


class NotEnoughVertices(FlatSphereError):
    """Delaunay triangulation needs at least 3 cone points."""


class FlipNonTermination(FlatSphereError):
    """Edge-flip loop hit its iteration cap."""


class DeltaOutOfRange(FlatSphereError):
    """Curvature gap outside (0, 1/3]."""


class CurvatureTooLarge(FlatSphereError):
    """Surgery endpoints have curvature sum >= 1."""


class NotSimple(FlatSphereError):
    """Saddle connection is not simple / endpoints not distinct."""


class NoHull(FlatSphereError):
    """The shortest enclosing loop is pinned at a singularity outside the cluster."""


class OverlappingHulls(FlatSphereError):
    """Hulls passed to a generalized surgery are not pairwise disjoint."""


class NonSimplePolygon(FlatSphereError):
    """Polygon is self-intersecting or degenerate."""


class InvalidReflection(FlatSphereError):
    """Billiard path violates the reflection law."""


class ParamOutOfRange(FlatSphereError):
    """Example-family parameter outside its documented range."""


class CapExceeded(FlatSphereError):
    """An iteration cap was hit (numeric pathology)."""
