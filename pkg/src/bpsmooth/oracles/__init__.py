from .matching import (GapReport, RateBounds, batch_matching_delta, batch_decrease_rate, enumerate_matchings,
                       matching_delta, matching_table, mwm, rate_bounds, decrease_rate)
from .flow import ResidualNetwork, cheapest_residual_cycle, flow_delta_enumeration, min_cost_flow, residual
