from rfnode.clamping.scan import (
    NOTHING_FOUND,
    RegionScanState,
    ScanConfig,
    SearchResult,
    TrichotomicRefineState,
    region_scan,
    run_search,
    trichotomic_refine,
)
from rfnode.clamping.bitrate import (
    COUNT_ALL_ONES,
    COUNT_INTERIOR_BOTH,
    BitrateEstimatorConfig,
    RunLengthSummary,
    SymbolAccumulator,
    estimate_bitrate,
)
from rfnode.clamping.guessing import GuessingModule

__all__ = [
    "NOTHING_FOUND", "RegionScanState", "ScanConfig", "SearchResult",
    "TrichotomicRefineState", "region_scan", "run_search", "trichotomic_refine",
    "COUNT_ALL_ONES", "COUNT_INTERIOR_BOTH", "BitrateEstimatorConfig",
    "RunLengthSummary", "SymbolAccumulator", "estimate_bitrate",
    "GuessingModule",
]
