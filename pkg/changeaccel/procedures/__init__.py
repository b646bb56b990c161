"""Two-stage and static procedures, treatment quality and threshold calibration."""

from changeaccel.procedures.quality import (
    TreatmentMetrics,
    TreatmentQuality,
    fastest_treatment,
    most_informative_treatment,
    quality_metrics,
)
from changeaccel.procedures.runners import run_proposed, run_static
from changeaccel.procedures.specs import (
    DPSpec,
    ProcedureSpec,
    ProposedSpec,
    StaticSpec,
    parse_procedure,
    spec_from_entry,
)
from changeaccel.procedures.thresholds import (
    Thresholds,
    asymptotic_upper_value,
    calibrate_thresholds,
    cycle_bound,
    expected_cycles_bound,
    lower_bound_value,
    static_thresholds,
    upper_bound_value,
)

__all__ = [
    "DPSpec",
    "ProcedureSpec",
    "ProposedSpec",
    "StaticSpec",
    "Thresholds",
    "TreatmentMetrics",
    "TreatmentQuality",
    "asymptotic_upper_value",
    "calibrate_thresholds",
    "cycle_bound",
    "expected_cycles_bound",
    "fastest_treatment",
    "lower_bound_value",
    "most_informative_treatment",
    "parse_procedure",
    "quality_metrics",
    "run_proposed",
    "run_static",
    "spec_from_entry",
    "static_thresholds",
    "upper_bound_value",
]
