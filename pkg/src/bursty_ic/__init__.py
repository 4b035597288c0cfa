"""
Opportunistic interference management on parallel two-user linear
deterministic interference channels.

Linear coding schemes for every achievable corner point, exact rank-based
decodability certification over all receiver configurations, and exact
rational inner/outer rate regions.
"""

from .channel import ChannelParams, IntegralityError, ReceiverConfig, all_configs, circulant_configs
from .entropy_tools import JointPMF, random_pmf, sliding_window_check, window_entropy_sum
from .field import GF2m, FieldElem, FieldMismatchError, get_field, rank, solve_unique_block
from .region import (HalfPlane, RatePoint, RateRegion2D, Status, Verdict, classify_regime,
                     conjecture_gap, dominance_check, hull, inner_corners, intersect,
                     outer_halfplanes, region_equal, tightness_report)
from .schemes import (CornerId, LinearScheme, Msg, RegimeError, Setup, build_corner_scheme,
                      mds_generator, split_scheme)
from .verifier import DecodeClass, VerifyReport, max_rate_search, toy_oracle, verify

__version__ = "0.1.0"
