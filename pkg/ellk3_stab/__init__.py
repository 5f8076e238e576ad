"""
ellk3-stab - exact Bridgeland stability computations for line bundles on
Weierstraß elliptic surfaces and elliptic K3 surfaces
Covers Chern-lattice arithmetic, central charges, the cohomological
Fourier-Mukai transform, stability regions, walls and certificates
"""

__version__ = "1.0.0"
__author__ = "ellk3-stab Team"

from .errors import ParseError, StabilityError
from .lattice import K3, ChernVector, DivisorClass, OmegaClass, RdvCoords, SurfaceParams
from .charges import ChargeSpec, eval_charge, phase, compare_phase
from .fmt import LatticeMap, phi, phi_hat, psi, psi_prime, upsilon, upsilon_prime
from .cce import TransitionData, solve_simple, solve_todd, psi_z, check_g, check_h
from .regions import RegionQuery, RegionLabel, classify, raster, tangency_data, witness_stable_not_twisted_ample
from .walls import (
    WallFrame,
    WallRecord,
    wall_quadric,
    slice_circle,
    mini_walls_on_ray,
    rank_bound,
    enumerate_destabilizers,
    stability_certificate,
)
from .profiles import Config, load_config
from .verify import VerificationRunner

__all__ = [
    'ParseError',
    'StabilityError',
    'K3',
    'ChernVector',
    'DivisorClass',
    'OmegaClass',
    'RdvCoords',
    'SurfaceParams',
    'ChargeSpec',
    'eval_charge',
    'phase',
    'compare_phase',
    'LatticeMap',
    'phi',
    'phi_hat',
    'psi',
    'psi_prime',
    'upsilon',
    'upsilon_prime',
    'TransitionData',
    'solve_simple',
    'solve_todd',
    'psi_z',
    'check_g',
    'check_h',
    'RegionQuery',
    'RegionLabel',
    'classify',
    'raster',
    'tangency_data',
    'witness_stable_not_twisted_ample',
    'WallFrame',
    'WallRecord',
    'wall_quadric',
    'slice_circle',
    'mini_walls_on_ray',
    'rank_bound',
    'enumerate_destabilizers',
    'stability_certificate',
    'Config',
    'load_config',
    'VerificationRunner',
]
