"""Dynamic channel borrowing in a reuse-3 cellular cluster.

Analytic Erlang-B tools, a channel-borrowing state machine, an event-driven
call simulator, and Okumura-Hata SINR profiles.
"""

from .borrowing import (Assignment, BorrowOutcome, BorrowRequest, ChannelLedger, admit_call, execute_borrow,
                        lendable_channels, make_ledgers, release_call, select_donor)
from .config import Config, load_config, parse_config
from .erlang import (OfferedLoad, StateDistribution, adjusted_capacities, erlang_b, erlang_b_curve,
                     erlang_b_recursive, overall_blocking_paper, overall_blocking_weighted, state_distribution)
from .errors import ConfigurationError, DomainError, InsufficientDataError, StateError
from .propagation import (RadioEnvironment, SinrSample, mobile_antenna_correction, path_loss_db,
                          received_power_dbm, sinr_db, sinr_profile)
from .simulator import (MetricsReport, Scenario, SweepPoint, TrafficProfile, empirical_state_distribution,
                        hot_cell_scenario, run_scenario, single_cell_scenario, sweep)
from .topology import (ClusterLayout, FrequencyGroup, InterfererSet, build_cluster, co_channel_interferers,
                       donor_search_order)

__version__ = "0.1.0"
