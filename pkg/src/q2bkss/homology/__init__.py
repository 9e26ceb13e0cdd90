"""Exact linear algebra over Z_(3): Smith normal form, kernels, cokernels, cohomology."""

from .linalg import (
    ExactnessError,
    SNFResult,
    SplittingError,
    check_composite_zero,
    cokernel,
    complex_cohomology,
    in_span,
    kernel,
    kernel_cokernel,
    kernel_lattice,
    les_assemble,
    quotient,
    smith_normal_form,
)
from .presentation import FREE, LabeledMatrix, ModulePresentation, ThreeTermComplex, diagonal

__all__ = [
    "ExactnessError",
    "FREE",
    "LabeledMatrix",
    "ModulePresentation",
    "SNFResult",
    "SplittingError",
    "ThreeTermComplex",
    "check_composite_zero",
    "cokernel",
    "complex_cohomology",
    "diagonal",
    "in_span",
    "kernel",
    "kernel_cokernel",
    "kernel_lattice",
    "les_assemble",
    "quotient",
    "smith_normal_form",
]
