"""Numerical laboratory for fluid antenna multiple access performance:
correlated-port channel simulation, exact and bounded SIR outage
probability, network outage capacity and multiplexing gain, and the
inverse design equations (minimum ports, width, critical correlation).
"""

from ._backend import BACKEND
from .analytic import (ClosedBound, QuadratureSettings, capacity_lower_bound,
                       mg_approx_equal_corr, mg_approx_general,
                       more_users_capacity_ratio, multiplexing_gain,
                       outage_exact, outage_ub_closed,
                       outage_ub_closed_detailed, outage_ub_integral,
                       outage_ub_integral_equal_mu)
from .channel import (ChannelDraw, DrawStream, FamaScenario, PortGeometry,
                      identical_users_scenario, make_geometry,
                      sample_draw, sample_draws, sample_per_interferer)
from .design import (CriticalMu, DesignTarget, critical_mu,
                     min_ports_equal_corr, min_ports_general, min_width)
from .errors import (DomainError, ExactCapError, FamaLabError,
                     InfeasibleDesignError, PrecisionLossError,
                     QuadratureError, ResolutionExceededError,
                     SingularCorrelationError)
from .montecarlo import (OutageEstimate, estimate_network_metrics,
                         estimate_outage, network_metrics_from_outage,
                         select_port)
from .specfun import (EnvelopeTable, bessel_i0, bessel_i0_scaled, bessel_j0,
                      expint_en, expint_en_scaled, j0_envelope_inverse,
                      j0_envelope_table, marcum_q1)

__version__ = "1.0.0"
