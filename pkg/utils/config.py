import os
import sys
from dotenv import load_dotenv

# Load environment variables
load_dotenv(override=True)

# Constants
FORMAT_VERSION = 1

# Representations
SUPPORTED_CHARACTERISTICS = (2, 3)
FIELD_CHARACTERISTIC = int(os.getenv("STABLAB_FIELD_CHARACTERISTIC", "2"))
assert FIELD_CHARACTERISTIC in SUPPORTED_CHARACTERISTICS, "STABLAB_FIELD_CHARACTERISTIC must be 2 or 3"
ENUMERATION_BOUND = int(os.getenv("STABLAB_ENUMERATION_BOUND", "8"))

# Numerics
FLOAT_TOLERANCE = float(os.getenv("STABLAB_FLOAT_TOLERANCE", "1e-12"))
MIN_TOLERANCE = sys.float_info.epsilon * 1e3
QUADRATURE_NODES = int(os.getenv("STABLAB_QUADRATURE_NODES", "32"))
QUADRATURE_MAX_NODES = int(os.getenv("STABLAB_QUADRATURE_MAX_NODES", "2048"))
QUADRATURE_TOLERANCE = float(os.getenv("STABLAB_QUADRATURE_TOLERANCE", "1e-10"))
GENERICITY_TOLERANCE = float(os.getenv("STABLAB_GENERICITY_TOLERANCE", "1e-9"))

# Mutation and tilting
MAX_REDUCTION_ROUNDS = int(os.getenv("STABLAB_MAX_REDUCTION_ROUNDS", "100"))
MAX_TILT_STEPS = int(os.getenv("STABLAB_MAX_TILT_STEPS", "64"))

# Surfaces
MAX_POLYGON_VERTICES = 12
MAX_FLIP_GRAPH_VERTICES = 10

# Worker pool
WORKER_THREADS = int(os.getenv("STABLAB_WORKER_THREADS", "1"))

LOG_LEVEL = os.getenv("STABLAB_LOG_LEVEL", "WARNING").upper()

# Error Messages
ERROR_MESSAGES = {
    "invalid_quiver": "Invalid quiver: {detail}",
    "unknown_vertex": "Vertex {vertex} is not a vertex of the quiver.",
    "unknown_arrow": "Arrow {arrow} is not an arrow of the quiver.",
    "non_reducible": "Mutation produced a non-reducible 2-cycle: {detail}",
    "ginzburg_precondition": "Ginzburg quiver not defined: {detail}",
    "invalid_representation": "Invalid representation: {detail}",
    "enumeration_bound": "Representation too large: total dimension {total} exceeds the enumeration bound {bound}.",
    "invalid_central_charge": "Invalid central charge: {detail}",
    "zero_class": "Class {cls} is zero or has mixed signs.",
    "proportional_classes": "Classes {alpha} and {beta} are proportional or zero.",
    "invalid_heart": "Invalid heart: {detail}",
    "invalid_triangulation": "Invalid triangulation: {detail}",
    "out_of_range": "{name}={value} is outside the supported range {low}..{high}.",
    "degenerate_differential": "Degenerate differential: the zeroes are not simple (discriminant {value}).",
    "collinear_zero": "The segment between zeroes {i} and {j} passes through zero {k}; supply a detour path.",
    "quadrature": "Quadrature did not converge within {nodes} nodes (last change {change:.3e}).",
    "hn_uniqueness": "Expected exactly one Harder-Narasimhan chain, found {count}.",
    "format": "Could not read {path}: {detail}",
    "usage": "{detail}",
    "general": "An error occurred while processing the request.",
}
