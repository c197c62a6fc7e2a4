"""latsketch: compact upper-approximation of lattice-valued functions.

A fixed-size randomized structure in the Bloom-filter family: writes
spread each value over d hashed buckets merging with the lattice join,
reads take the meet, so reads never fall below the stored value. The
flagship use is storing bad-character shift tables for Boyer-Moore /
QuickSearch text search over alphabets far too large for dense tables.
"""

from .analysis import (
    MonteCarloReport,
    ValueDistribution,
    measure_bottom_error,
    measure_value_error,
    min_phi,
    phi_approx,
    phi_exact,
    psi_exponential,
    psi_general,
    psi_uniform,
    summand_uniform,
)
from .approximator import BuildParams, CompactApproximator, build, choose_params, optimal_d
from .cardinality import DistinctEstimate, estimate_distinct, exact_distinct
from .hashing import FixedFamily, HashFamily, IndependentFamily, derive_seed
from .lattices import BOOL, NAT, Lattice, check_lattice_laws, resolve_lattice
from .search import (
    ApproxShiftOracle,
    BackingUnsupportedError,
    DirectShiftOracle,
    MapShiftOracle,
    RatioRow,
    SearchStats,
    build_approx_oracle,
    build_exact_oracle,
    pattern_from_corpus,
    ratio_experiment,
    search,
    search_brute,
    shift_bm,
    shift_qs,
)

__version__ = "0.1.0"

__all__ = [
    "BOOL",
    "NAT",
    "ApproxShiftOracle",
    "BackingUnsupportedError",
    "BuildParams",
    "CompactApproximator",
    "DirectShiftOracle",
    "DistinctEstimate",
    "FixedFamily",
    "HashFamily",
    "IndependentFamily",
    "Lattice",
    "MapShiftOracle",
    "MonteCarloReport",
    "RatioRow",
    "SearchStats",
    "ValueDistribution",
    "build",
    "build_approx_oracle",
    "build_exact_oracle",
    "check_lattice_laws",
    "choose_params",
    "derive_seed",
    "estimate_distinct",
    "exact_distinct",
    "measure_bottom_error",
    "measure_value_error",
    "min_phi",
    "optimal_d",
    "pattern_from_corpus",
    "phi_approx",
    "phi_exact",
    "psi_exponential",
    "psi_general",
    "psi_uniform",
    "ratio_experiment",
    "resolve_lattice",
    "search",
    "search_brute",
    "shift_bm",
    "shift_qs",
    "summand_uniform",
]
