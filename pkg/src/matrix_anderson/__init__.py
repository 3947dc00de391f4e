"""Transfer matrices, Lie generation and Lyapunov separability for a
matrix-valued random Schrödinger operator on the line."""

from .errors import (ClosureError, ConfigParseError, ConfigValidationError,
                     EmptyIntervalError, InvalidArgumentError,
                     InvalidDimensionError, NumericalFailureError,
                     ResourceLimitError)
from .interval import (ContainmentReport, EnergyInterval, containment_ratio,
                       critical_length, energy_interval, extremal_eigenvalues,
                       verify_containment)
from .lie import (GenerationReport, MatrixSpan, bracket, lie_span_dimension,
                  sp_dimension, verify_sp_generation)
from .lyapunov import (LyapunovEstimate, ScanReport, combine_estimates,
                       lyapunov_spectrum, sample_omega, separability_scan)
from .model import (ModelConfig, SiteLaw, build_m, build_v0, build_x,
                    spectrum_m, x_norm)
from .propagator import (check_symplectic, symplectic_form, transfer_matrices,
                         transfer_matrix, transfer_matrix_oracle)

__version__ = "0.1.0"
