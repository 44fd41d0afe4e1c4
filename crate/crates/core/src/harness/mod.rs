//! Executable versions of the structural results: width certificates,
//! greedy generation and the check batteries run by the command line tool.

mod batteries;
mod greedy;
mod report;
mod staged;

pub use batteries::{
    abelian_battery, decomposition, derived, is_nilpotent, is_solvable, lemma, lower_central, normalizing_pairs, run_checks,
    run_one, CheckConfig, Decomposition, Lemma, LEMMAS,
};
pub use greedy::{greedy_generate, Generation};
pub use report::LemmaReport;
pub use staged::{staged_width, CentralCommutator, StagedPlan, WidthCertificate};
