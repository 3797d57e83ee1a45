"""Randomness tests built on random interval graphs."""

__version__ = "0.1.0"

from rigtest.baselines import BaselineReport, bds_test, correlation_integral, correlation_integrals, runs_test
from rigtest.datagen import ProcessSpec, generate, iid, permute
from rigtest.dd import (
    DdReport,
    ThresholdEntry,
    ThresholdStore,
    calibrate_threshold,
    dd_statistic,
    dd_test,
)
from rigtest.degree import (
    DegreeCdfPair,
    dd_distance,
    empirical_degree_cdf,
    theoretical_degree_cdf,
)
from rigtest.ep import EpReport, ExactTestRegion, bh_adjust, ep_pvalue, ep_statistic, ep_test, exact_region
from rigtest.graph import (
    Interval,
    IntervalGraph,
    Pairing,
    build_intervals,
    conditional_edge_probability,
    degree_sequence,
    intervals_intersect,
    random_disjoint_pairing,
)
