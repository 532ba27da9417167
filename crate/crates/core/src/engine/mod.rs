//! Predicted reductions: the zig-zag parameters, the chotomy of cases, the
//! choice of regime, and consistency checks against other results.

pub mod branch;
pub mod breuil;
pub mod consistency;
pub mod params;
pub mod regime;

pub use branch::{branch_of, branch_rep, chotomy, lambda_value, zigzag_branch, Branch};
pub use breuil::{berger_bound_holds, breuil_weight_reduction, in_breuil_table};
pub use consistency::{
    blz_consistency, caveat_zone, irreducibility_conjecture_scan, local_constancy_conflict,
    theta_compatibility, BlzReport, LocalConstancyReport, Verdict, Violation,
};
pub use params::{compute_c, exceptional_class, v_bounds, zigzag_params, ZigzagParams};
pub use regime::{classify_regime, predict, EngineConfig, ExcludedAp, Prediction, Provenance};
