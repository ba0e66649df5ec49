"""Flat cone spheres as glued Euclidean triangles: geodesic tracing, saddle
connection and cylinder enumeration, Thurston surgeries, and the explicit
length-vs-self-intersection bounds."""

from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .bounds import (
    BoundReport,
    ConstantSet,
    constant_set,
    constants_individual,
    constants_uniform,
    constants_upper,
    m0_constant,
    sigma_constants,
    verify_bounds,
)
from .builders import (
    doubled_30_60_90,
    doubled_equilateral,
    doubled_square,
    double_polygon_surface,
    glue_polygon,
    random_doubled_polygon,
)
from .delaunay import Triangulation, delaunay_triangulation, edge_width
from .enumerator import (
    CylinderFamily,
    SaddleConnection,
    counting_functions,
    enumerate_cylinders,
    enumerate_saddle_connections,
    relative_systole,
)
from .examples import ExampleFamily, build_example, designated_trajectory
from .surface import (
    EdgeGluing,
    EuclideanTriangle,
    FlatDomain,
    InfiniteFlatSphere,
    Surface,
    curvature_gap,
)
from .surgery import (
    ConvexHull,
    SurgeryResult,
    convex_hull,
    core_of_infinite_sphere,
    count_saddle_connections_infinite,
    epsilon_geometric_forests,
    generalized_surgery,
    hull_existence_condition,
    surgery_along_saddle_connection,
)
from .tracer import (
    ConePointStart,
    SurfacePoint,
    Thread,
    Trajectory,
    corner_switches,
    decompose_threads,
    self_intersection_number,
    trace,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_IMPLEMENTATION",
    "BoundReport",
    "ConstantSet",
    "ConePointStart",
    "ConvexHull",
    "CylinderFamily",
    "EdgeGluing",
    "EuclideanTriangle",
    "ExampleFamily",
    "FlatDomain",
    "InfiniteFlatSphere",
    "SaddleConnection",
    "Surface",
    "SurfacePoint",
    "SurgeryResult",
    "Thread",
    "Trajectory",
    "Triangulation",
    "build_example",
    "constant_set",
    "constants_individual",
    "constants_uniform",
    "constants_upper",
    "convex_hull",
    "core_of_infinite_sphere",
    "corner_switches",
    "count_saddle_connections_infinite",
    "counting_functions",
    "curvature_gap",
    "decompose_threads",
    "delaunay_triangulation",
    "designated_trajectory",
    "double_polygon_surface",
    "doubled_30_60_90",
    "doubled_equilateral",
    "doubled_square",
    "edge_width",
    "enumerate_cylinders",
    "enumerate_saddle_connections",
    "epsilon_geometric_forests",
    "generalized_surgery",
    "glue_polygon",
    "hull_existence_condition",
    "m0_constant",
    "random_doubled_polygon",
    "relative_systole",
    "self_intersection_number",
    "sigma_constants",
    "surgery_along_saddle_connection",
    "trace",
    "verify_bounds",
]
