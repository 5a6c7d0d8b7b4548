//! Parameter arithmetic for the configurations G_1, …, G_t and toy-scale assembly of
//! G = K³_n ∖ (H(D) ∪ S) with its structural checks.

mod assemble;
mod observation;
mod params;

pub use assemble::{assemble_gi, closed_form_edge_count, AssemblyLimits, AssemblySummary, GiAssembly};
pub use observation::{verify_observation, CheckOutcome, ObservationLimits, ObservationReport};
pub use params::{
    clique_gap_holds, congruence_holds, construct_params, derive_s_sequence, design_lagrangians, lambda_interval_check,
    lambda_t, scan_q, small, solve_q, verify_divisibility, DivisibilityReport, DivisibilityRow, FamilyParams,
    LambdaCheck,
};
