"""Two-cell UAV two-way TDD communication model.

Analytical Skellam-weighted throughput of two co-channel UAV base stations
serving two cells, the joint optimization of transmission direction
(relative spin) and the two-level UAV altitudes, and a frame-level Monte
Carlo simulator that validates the closed form.
"""

from .errors import (ConfigError, GeometryError, GuardViolationError,
                     InvalidAltitudePairError, MissingKeyError,
                     NonPositiveRateError, OutOfRangeError,
                     RateExceedsPopulationError)
from .montecarlo import (ActivationModel, FrameRealization, SimResult, UserLayout,
                         draw_activation, run_frame, sample_layout, simulate,
                         simulate_exhaustive)
from .pairing import (AccountingMode, PairCounts, ServiceUnit, pair_counts,
                      schedule_frame, unit_counts)
from .params import (DerivedConstants, SystemParams, default_config,
                     load_params, validate_and_derive)
from .rates import (RateSet, rate_cochannel_diff, rate_cochannel_same,
                    rate_individual, rate_set)
from .sinr import (Configuration, all_configurations, altitude_indicator,
                   candidate_configurations, config_label, sinr_dl_diff,
                   sinr_dl_same, sinr_ul_diff, sinr_ul_same, snr_individual)
from .throughput import (LoadDistribution, ThroughputBreakdown,
                         average_throughput, conditional_throughput,
                         exhaustive_throughput, optimal_configuration,
                         skellam_pmf)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
