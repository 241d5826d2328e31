"""Exhaustive and sampled checks over product ball graphs and l_p sum spaces."""

from plab.ball_graph import ComponentGraph, ProductShape, VertexClass
from plab.banach_geometry import LpComponent, SumSpace
from plab.factorizer import Factorization, Homomorphism, factor, build_from_factors
from plab.kernels import BACKEND
from plab.runner import RunConfig, Report, catalog_shapes, run_suite

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ComponentGraph",
    "Factorization",
    "Homomorphism",
    "LpComponent",
    "ProductShape",
    "Report",
    "RunConfig",
    "SumSpace",
    "VertexClass",
    "build_from_factors",
    "catalog_shapes",
    "factor",
    "run_suite",
]
