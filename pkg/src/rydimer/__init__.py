"""Simulator of two microwave-dressed, vdW-interacting Rydberg atoms.

Subpackages cover the dressed pair potentials and their binding wells,
Franck-Condon physics of the trapped pair, a Lindblad master-equation
engine with a compiled propagation kernel, Rydberg excitation spectra,
and the CPHASE interaction gate built on the Rydberg-dimer resonance.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND

__all__ = ["KERNEL_BACKEND", "__version__"]
