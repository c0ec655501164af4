"""Gaussian localizable entanglement toolkit.

Finds the local Gaussian measurements on all but two modes of a multimode
Gaussian state that maximise the entanglement left between the remaining
pair, and compares against photon counting for a three-mode example.
"""

from .conditioning import GaussianProjector, Homodyne, condition_gaussian, condition_sequence
from .entanglement import (
    EntanglementResult, Measure, entropy_of_entanglement, log_negativity, pt_min_eig_product,
)
from .errors import (
    DimensionError, DomainError, GaussLocError, GridSizeError, NumericalRankError,
    PhysicalityError, PurityError,
)
from .gaussian_core import (
    GaussianState, ModePartition, SymplecticTransform, apply, beamsplitter, reduce, rotation,
    squeezer, symplectic_eigenvalues, tmsv_split_state, two_mode_squeezed, vacuum,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .localize import (
    LocalizationResult, Method, SymmetricStateSpec, ThreeModeReduction, decompose_three_mode,
    grid_oracle, optimize_multimode_pure, optimize_symmetric, optimize_three_mode,
    reduce_symmetric,
)

__version__ = "0.1.0"
