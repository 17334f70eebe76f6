"""Harmonic maps into the 3-sphere: adapted frames, eps-transforms, Bonnet-type
reconstruction and the associated H-surfaces in R^3, on uniform grids."""
from .bonnet import BonnetData, Seed, integrate_frame, path_independence_check, reconstruct
from .congruence import O4Fit, procrustes_o4
from .errors import RankDeficientWarning, S3HError
from .family import (CliffordMap, CliffordParams, clifford_map, clifford_params,
                     clifford_params_from_mu, sinh_gordon_profile)
from .frame import AdaptedFrameField, build_frame, verify_frame
from .grid import Grid, GridField, integrate_potential, jet_from_samples
from .hsurface import (HSurfaceField, NKPoint, NKTangent, dilate, h_eps_transform,
                       h_from_harmonic, harmonic_from_h, holo_differential, nk_structure)
from .jet import Jet
from .quat import CQuaternion, ImQuaternion, Quaternion
from .report import ResidualReport
from .transform import Eps, eps_transform, involution_check, sequence, transform_coeffs

__version__ = "0.1.0"
