//! Closed-form predictions for `D_{S(n)*}` and `C_{S(n)*}`, the extremal
//! sequences behind the lower bounds, and computational checks of the
//! supporting lemmas.

mod checks;
mod constructions;
mod prediction;
mod report;

pub use checks::{
    check_crt_membership, check_sampled_consecutive_bound, check_size_formula, check_square_lift,
    check_square_partition, coverage_holds, u25_adversarial_sequences, verify_coverage_lemma,
    CoverageVariant, LiftCheck,
};
pub use constructions::{
    construct_consecutive_witness, construct_even_square_witness, construct_even_v2_pair_witness,
    construct_nonsquare_odd_witness, construct_odd_square_d_witness, crt_weight_lift,
    find_non_qp_pair,
};
pub use prediction::{predicted_constants, Bound, CaseTag, Prediction};
pub use report::{
    verify_many, verify_results, ConstructionCheck, Effort, LemmaCheck, ReportRecord, Status,
    VerificationReport, VerifyConfig,
};
