"""Hyperkähler geometry of quiver varieties, involutions and branes, and
ADHM data on the projective plane."""
from .quiver import (Arrow, DimensionData, FrameElement, GaugeElement, Quiver, Representation,
                     act, jordan_quiver, random_representation, validate_representation)
from .hyperkahler import LevelSpec, MomentValues, gamma, metric, moment_maps, omega
from .involutions import (DeltaAssignment, GammaAssignment, InvolutionSpec, apply, brane_type,
                          descent_report, is_involution, signature)
from .stability import is_costable, is_regular, is_stable, stable_closure
from .orbits import intertwiner_space, is_moduli_fixed, orbit_witness
from .monad import P2Involution, P2Point, adhm_residual, fiber_dim, monad_at
from .tangent import fixed_subspace, fixed_subspace_dim, orbit_directions, quotient_tangent
from .flow import flow_to_level

__version__ = "0.1.0"
