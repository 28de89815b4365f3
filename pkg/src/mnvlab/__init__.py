"""Blow-up solutions of the modified Novikov-Veselov equation built from
minimal-surface data, with numerical verification tools."""

from .algebra import EPS_DET, GAMMA, HMatrix, hmat_inv, hmat_mul
from .errors import (BlowUpPoint, BranchPoint, DegenerateMatrix, MnvError,
                     QuadratureFailure, SingularFrame, StencilCollision,
                     ToleranceNotMet)
from .fields import FieldEvaluator, FieldGrid, default_u0
from .inversion import (InvertedSample, invert_point, invert_surface_matrix,
                        inverted_spinor, sample_inverted_surface)
from .kernels import BACKEND
from .moutard import (MoutardFrame, MoutardScalars, enneper_closed_form,
                      enneper_closed_form_polar, enneper_scalars,
                      moutard_frame, moutard_scalars, one_form_integral,
                      potential_u, potential_v, s_tilde, tau_matrix,
                      vw_coefficients)
from .quadrature import PlaneIntegralResult, conservation_scan, l2_integral
from .spinor import (ENNEPER, HoloPoly, SpinorPair, poly_derivative,
                     spinor_eval, spinor_evolve)
from .verify import (ResidualReport, SpaceTimePoint, Stencil,
                     constraint_residual, decay_report, estimate_order,
                     mnv_residual, singular_limit_report, verify_points)
from .weierstrass import (SurfacePoint, decode_surface_matrix, induced_metric,
                          normal_vector, surface_matrix, surface_point)

__version__ = "0.1.0"
