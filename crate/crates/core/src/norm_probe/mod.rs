//! Counterexample families f_δ with witness sets on which M_E f_δ is
//! bounded below, exponent fits of the resulting norm ratios, and the
//! logarithmic experiments.

mod experiments;
mod families;

pub use experiments::{
    domination_constant, endpoint_log_probe, log_thinned_set, lorentz_log_probe, stein_probe,
    DominationKind, DominationReport, EndpointRow, LorentzRow, SteinRow,
};
pub use families::{
    build_probe, evaluate_probe, measure_probe, run_probe, ProbeInstance, ProbeKind, ProbeMeasurement,
    ProbeParams, ProbeResult, ProbeRow, Verdict, Witness, GAP_BAND, RESIDUAL_LIMIT,
};
