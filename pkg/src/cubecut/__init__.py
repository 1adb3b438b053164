"""Planted coordinate-cut recovery on subsampled hypercubes and k-distance hypercubes."""
from ._errors import CubeCutError, ScaleError
from .bitcube import Component, CubeParams, Edge, VertexSet, coordinate_cut, cut_size
from .experiment import ExperimentSpec, TrialRecord, run_concentration, run_recovery
from .fourier import WalshHadamardTransformer, cut_size_via_fourier, inverse_wht, laplacian_eigenvalues, wht
from .recover import CutFamily, PlantedCutRecovery, SolverConfig, Strategy, solve, solve_exact, solve_local
from .sample import SampledGraph, SampleParams, subsample
from .verify import LemmaReport, verify_all

__version__ = "0.1.0"

__all__ = [
    "Component", "CubeCutError", "CubeParams", "CutFamily", "Edge", "ExperimentSpec",
    "LemmaReport", "PlantedCutRecovery", "SampleParams", "SampledGraph", "ScaleError",
    "SolverConfig", "Strategy", "TrialRecord", "VertexSet", "WalshHadamardTransformer",
    "coordinate_cut", "cut_size", "cut_size_via_fourier", "inverse_wht", "laplacian_eigenvalues",
    "run_concentration", "run_recovery", "solve", "solve_exact", "solve_local", "subsample",
    "verify_all", "wht",
]
