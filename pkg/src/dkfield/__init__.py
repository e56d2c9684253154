"""Dirac-Kaehler bispinor/tensor fields and two-potential electrodynamics."""

from .bispinor import Bispinor, Sector, TensorMultiplet, blocks, check_block_constraints, compose, decompose, project_sector
from .clifford import gamma, gamma5, levi_civita, metric_spinor, sigma_ab, verify_sigma_triple_products, verify_trace_identities
from .lorentz import SL2CElement, discrete_transform, sl2c_boost, sl2c_rotation, transform_bispinor, verify_intertwiner, vector_rep

__version__ = "0.1.0"
