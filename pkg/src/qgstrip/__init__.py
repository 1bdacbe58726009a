"""Band structure and edge/bulk localization on quantum-graph lattice strips
with the preferred-orientation (cyclic) vertex coupling."""
from .analysis import (DecayReport, boundary_ratio, boundary_suppression, column_decay,
                       decay_report, edge_quantities, probability_current)
from .bands import BandDataset, dispersion, find_roots, flag_flat_bands, follow_band
from .coupling import cyclic_matrix, scattering, transmission_probabilities
from .model import KIRCHHOFF, StripModel, build_brick, build_rectangular, validate
from .secular import BlochMode, assemble, assemble_via_scattering, edge_norm_sq, extract_modes

__version__ = "0.1.0"

__all__ = [
    "BandDataset", "BlochMode", "DecayReport", "KIRCHHOFF", "StripModel", "assemble",
    "assemble_via_scattering", "boundary_ratio", "boundary_suppression", "build_brick",
    "build_rectangular", "column_decay", "cyclic_matrix", "decay_report", "dispersion",
    "edge_norm_sq", "edge_quantities", "extract_modes", "find_roots", "flag_flat_bands",
    "follow_band", "probability_current", "scattering", "transmission_probabilities", "validate",
]
