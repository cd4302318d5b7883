"""Riemannian L^p centers of mass on constant-curvature manifolds.

Constant step-size gradient descent for the weighted Fréchet mean, with
the step-size policies, convergence monitors, and geometric verification
oracles that justify them.
"""

from .errors import (CutLocusError, DegenerateSecantError, DomainError,
                     GeomeanError, PreconditionError)
from .kernels import b_lower, c_upper, ct, secant_euclid, secant_sphere, sn
from .manifolds import (Circle, Euclidean, Hyperbolic, ManifoldSpace,
                        RealProjective, SO3, SpaceConstants, Sphere,
                        make_space, space_from_json)
from .frechet import (WeightedDataset, cost, dataset_from_json,
                      fd_hessian_quadratic_form, gradient, grad_norm,
                      hessian_radial_bounds, make_dataset,
                      uniform_hessian_bound)
from .stepsize import (RateEstimate, SpreadStep, StepPolicy, exit_time,
                       exit_time_bounds, rate_estimate, resolve_conjecture,
                       resolve_exit_compromise, resolve_exit_compromise_bounds,
                       resolve_spread_compromise)
from .solver import (SolverConfig, Trace, descend, fit_tail_rate,
                     minimal_ball_estimate, multistart_uniqueness, one_step)
from .geocheck import (Chart, comparison_check, convex_combination,
                       hull_membership, secant_by_intersection,
                       tethering_check)

__version__ = "0.1.0"
