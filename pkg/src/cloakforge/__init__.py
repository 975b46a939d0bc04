"""Layered Neumann-core cylinders whose low-frequency scattering vanishes to high order."""

from .errors import CloakforgeError
from .layered import (LayeredStructure, Medium, NeumannCore, PenetrableCore, bare_neumann_disk,
                      matched_structure, neumann_coated, scale_structure, scattering_coefficient,
                      spectrum)
from .lowfreq import ExpansionTable, extract_expansion

__all__ = [
    "CloakforgeError", "ExpansionTable", "LayeredStructure", "Medium", "NeumannCore", "PenetrableCore",
    "bare_neumann_disk", "extract_expansion", "matched_structure", "neumann_coated", "scale_structure",
    "scattering_coefficient", "spectrum",
]
