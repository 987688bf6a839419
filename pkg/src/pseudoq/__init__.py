"""Numerical toolkit for unitary designs, random-circuit moments, tensor
product expanders, concentration bounds and Clifford learning."""

__version__ = "0.1.0"

from . import (  # noqa: F401
    chains,
    clifford,
    concentration,
    haar_moments,
    learning,
    partitions,
    pauli,
    random_circuit,
    tpe,
)
from .pauli import PauliString  # noqa: F401
from .clifford import CliffordTableau  # noqa: F401
