"""Fractal dimension and fractal curvature estimation from binary images."""

from .ifs import IteratedFunctionSystem, Similarity, catalog, chaos_game, render, similarity_dimension
from .raster import default_radii, dilate, distance_transform, load_pbm, optimal_area_radii, save_pbm
from .minkowski import FunctionalProfile, measure_profile
from .estimators import gamma_estimates, joint_regression, sausage_dimension
from .theory import reference_curvatures, triangle_curvatures

__all__ = [
    "IteratedFunctionSystem", "Similarity", "catalog", "chaos_game", "render",
    "similarity_dimension", "default_radii", "dilate", "distance_transform", "load_pbm",
    "optimal_area_radii", "save_pbm", "FunctionalProfile", "measure_profile",
    "gamma_estimates", "joint_regression", "sausage_dimension", "reference_curvatures",
    "triangle_curvatures",
]
__version__ = "0.1.0"
