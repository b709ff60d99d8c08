"""Commuting graphs of finite groups: Laplacian spectra and graph invariants."""

from .catalog import BUILTIN, catalog
from .graph import CommutingGraph, build, export_dot, export_json
from .groups import GroupTable, Permutation, Subset, from_cayley, from_generators, satisfies_con
from .invariants import full_report, isoperimetric_exact
from .spectrum import (
    closed_form_spectrum,
    laplacian,
    numeric_report,
    spectrum_certificates,
    spectrum_verdict,
)

__all__ = [
    "BUILTIN", "catalog", "CommutingGraph", "build", "export_dot", "export_json",
    "GroupTable", "Permutation", "Subset", "from_cayley", "from_generators", "satisfies_con",
    "full_report", "isoperimetric_exact", "closed_form_spectrum", "laplacian",
    "numeric_report", "spectrum_certificates", "spectrum_verdict",
]
