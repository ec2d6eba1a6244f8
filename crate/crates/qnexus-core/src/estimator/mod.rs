//! Workload-level aggregation: architecture comparisons and the RSA-2048
//! subroutine-repetition model.

pub mod compare;
pub mod rsa;

pub use compare::{compare_architectures, evaluate, fill_ratios, sized_for_width, CompareCell, CompareMetrics};
pub use rsa::{
    compile_rsa_profiles, rsa_estimate, rsa_fidelity, rsa_runtime, rsa_shot_time, tabulated_profiles, EstimatorError,
    RsaCosts, RsaEstimate, SubroutineKind, SubroutineProfile, TABULATED_FIDELITY,
};
