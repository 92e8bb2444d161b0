"""Vacuum squeezing by polarization self-rotation in atomic media."""

__version__ = "0.1.0"

from .errors import (ConfigError, ConvergenceError, DomainError, DopplerConvergenceError,
                     RegimeWarning, SteadyStateError, UsageError)
from .polarization import (ComplexFieldEnvelope, PolarizationState, ellipticity_exact,
                           ellipticity_small, polarization_state, propagate_sr,
                           stokes_parameters)
from .quadrature import (QuadratureGeometry, SqueezingResult, min_variance,
                         monte_carlo_variance, optimal_length, optimal_phase,
                         squeezing_parameter, uncertainty_product, variance)
from .transitions import (MediumResponse, SaturationPoint, System, TransitionSpec,
                          asymptotic_squeezing, optimal_detuning, optimal_thickness,
                          response, response_x, saturation_kappa, squeezing_profile,
                          unsaturated_alpha0)
from .media import (BufferGasSpec, EffectiveRates, buffer_rates, optimize_buffer_density,
                    required_density)
