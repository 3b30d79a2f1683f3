"""Spectra of the curved-space oscillator from its quadratic Casimir algebra,
with exact polynomial arithmetic and an independent numerical eigensolver."""

__version__ = "0.1.0"

from .exactnum import Surd, exact, to_float
from .mpoly import MultiPoly, UniPoly, real_roots, resultant
from .params import ModelParams
from .qalgebra import (
    build_ladder,
    build_structure_function,
    factorized_phi,
    model_quantum_spec,
    verify_phi_identity,
)
from .spectrum import closed_form_u, energy_closed_form, ladder_amplitudes, solve_spectrum
from .classical import verify_quadratic_poisson
from .oracle import GridSpec, adjudicate, oracle_spectrum

__all__ = [
    "GridSpec",
    "ModelParams",
    "MultiPoly",
    "Surd",
    "UniPoly",
    "adjudicate",
    "build_ladder",
    "build_structure_function",
    "closed_form_u",
    "energy_closed_form",
    "exact",
    "factorized_phi",
    "ladder_amplitudes",
    "model_quantum_spec",
    "oracle_spectrum",
    "real_roots",
    "resultant",
    "solve_spectrum",
    "to_float",
    "verify_phi_identity",
    "verify_quadratic_poisson",
]
