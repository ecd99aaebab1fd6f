"""
Representations of the fractional p-Laplacian

This package provides the four equivalent evaluators of (-Delta)_p^s u (x):
- DirectRepresentation: principal-value singular integral
- SemigroupRepresentation: heat-semigroup subordination
- ExtensionRepresentation: limit of the weighted fractional extension
- BalakrishnanRepresentation: resolvent integral
together with their kernels, limit experiments, pointwise bounds and
Fourier-side oracles.
"""

from typing import Dict, Type

from fracplap.reps.balakrishnan import BalakrishnanRepresentation, eval_balakrishnan
from fracplap.reps.base import DifferenceFunctor, Representation
from fracplap.reps.direct import DirectRepresentation, eval_direct
from fracplap.reps.extension import (
    ExtensionRepresentation,
    eval_extension,
    extension_derivative_check,
)
from fracplap.reps.kernels import (
    KernelSet,
    extension_apply,
    kernel_set,
    poisson_kernel,
    resolvent_kernel,
)
from fracplap.reps.semigroup import SemigroupRepresentation, eval_semigroup

REPRESENTATIONS: Dict[str, Type[Representation]] = {
    "direct": DirectRepresentation,
    "semigroup": SemigroupRepresentation,
    "extension": ExtensionRepresentation,
    "balakrishnan": BalakrishnanRepresentation,
}

__all__ = [
    "Representation",
    "DifferenceFunctor",
    "DirectRepresentation",
    "SemigroupRepresentation",
    "ExtensionRepresentation",
    "BalakrishnanRepresentation",
    "KernelSet",
    "REPRESENTATIONS",
    "eval_direct",
    "eval_semigroup",
    "eval_extension",
    "eval_balakrishnan",
    "extension_apply",
    "extension_derivative_check",
    "kernel_set",
    "poisson_kernel",
    "resolvent_kernel",
]
