//! RSA-2048 runtime from three repeated subroutines.
//!
//! One shot runs the adder, lookup and phase-up subroutines a fixed number
//! of times each. The runtime multiplies the shot time by the expected
//! number of shots and a fixed overhead, and divides by the program fidelity.

use crate::arch::{ArchError, ArchShape, ArchitectureSpec, ModuleKind};
use crate::circuit::{generate_rsa_subroutine, RsaSubroutine};
use crate::compiler::{compile, CompileError};
use crate::resources::{count_architecture, space_cost, CostWeights, ResourceCounts};

/// Expected number of shots until a successful factorization.
pub const SHOTS_FOR_SUCCESS: f64 = 9.2;
/// Multiplicative overhead on top of the subroutine time.
pub const RUNTIME_OVERHEAD: f64 = 1.14;

const SECONDS_PER_DAY: f64 = 86_400.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubroutineKind {
    Adder,
    Lookup,
    Phaseup,
}

impl SubroutineKind {
    pub const ALL: [SubroutineKind; 3] = [SubroutineKind::Adder, SubroutineKind::Lookup, SubroutineKind::Phaseup];

    /// Repetitions per shot.
    pub fn occurrences(&self) -> u64 {
        match self {
            SubroutineKind::Adder => 10_621_207,
            SubroutineKind::Lookup => 7_646_081,
            SubroutineKind::Phaseup => 1_581_186,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SubroutineKind::Adder => "adder",
            SubroutineKind::Lookup => "lookup",
            SubroutineKind::Phaseup => "phaseup",
        }
    }

    pub fn circuit_kind(&self) -> RsaSubroutine {
        match self {
            SubroutineKind::Adder => RsaSubroutine::Adder33,
            SubroutineKind::Lookup => RsaSubroutine::Lookup6,
            SubroutineKind::Phaseup => RsaSubroutine::Phaseup6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubroutineProfile {
    pub kind: SubroutineKind,
    /// Duration of one run.
    pub tau_s: f64,
    pub occurrences: u64,
    /// Failure probability of one run.
    pub error: f64,
}

impl SubroutineProfile {
    pub fn new(kind: SubroutineKind, tau_s: f64, error: f64) -> SubroutineProfile {
        SubroutineProfile { kind, tau_s, occurrences: kind.occurrences(), error }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EstimatorError {
    #[error("subroutine `{0}` appears more than once")]
    DuplicateKind(&'static str),
    #[error("negative or non-finite duration for `{0}`")]
    InvalidTau(&'static str),
    #[error("program fidelity must lie in (0, 1], got {0}")]
    InvalidFidelity(f64),
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// Total time of one shot.
pub fn rsa_shot_time(profiles: &[SubroutineProfile; 3]) -> Result<f64, EstimatorError> {
    for (i, p) in profiles.iter().enumerate() {
        if profiles[..i].iter().any(|o| o.kind == p.kind) {
            return Err(EstimatorError::DuplicateKind(p.kind.name()));
        }
        if !(p.tau_s >= 0.0 && p.tau_s.is_finite()) {
            return Err(EstimatorError::InvalidTau(p.kind.name()));
        }
    }
    Ok(profiles.iter().map(|p| p.occurrences as f64 * p.tau_s).sum())
}

/// Expected runtime in days.
pub fn rsa_runtime(shot_time_s: f64, fidelity: f64) -> Result<f64, EstimatorError> {
    if !(fidelity > 0.0 && fidelity <= 1.0) {
        return Err(EstimatorError::InvalidFidelity(fidelity));
    }
    Ok(shot_time_s / fidelity * SHOTS_FOR_SUCCESS * RUNTIME_OVERHEAD / SECONDS_PER_DAY)
}

/// Program fidelity when every run of every subroutine must succeed.
pub fn rsa_fidelity(profiles: &[SubroutineProfile; 3]) -> f64 {
    let log: f64 = profiles.iter().map(|p| p.occurrences as f64 * libm::log1p(-p.error.min(1.0))).sum();
    libm::exp(log)
}

/// Space-time costs in qubit-days and weighted-connection-days.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RsaCosts {
    pub qubit_days: f64,
    pub coupler_days: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RsaEstimate {
    pub arch: alloc::string::String,
    pub profiles: [SubroutineProfile; 3],
    pub shot_time_s: f64,
    pub fidelity: f64,
    pub runtime_days: f64,
    pub resources: ResourceCounts,
    pub costs: RsaCosts,
}

/// Program fidelity used with [`tabulated_profiles`].
pub const TABULATED_FIDELITY: f64 = 0.954;

/// Reference subroutine durations for an architecture, with zero error.
///
/// A monolithic processor runs every subroutine in 2 ms except phase-up at
/// 1 ms. With a memory tier the adder takes 5.2 ms, lookup 2.2 ms and
/// phase-up 0.15 ms; an adder accelerator brings the adder down to 2 ms.
pub fn tabulated_profiles(spec: &ArchitectureSpec) -> [SubroutineProfile; 3] {
    let ms = |kind, tau: f64| SubroutineProfile::new(kind, tau * 1e-3, 0.0);
    let (adder, lookup, phaseup) = if spec.shape() == ArchShape::Homogeneous {
        (2.0, 2.0, 1.0)
    } else if spec.first_of(ModuleKind::Asqpu).is_some() {
        (2.0, 2.2, 0.15)
    } else {
        (5.2, 2.2, 0.15)
    };
    [ms(SubroutineKind::Adder, adder), ms(SubroutineKind::Lookup, lookup), ms(SubroutineKind::Phaseup, phaseup)]
}

/// Combines shot time, runtime and resource counts for an architecture.
/// `fidelity` overrides the value derived from the profiles.
pub fn rsa_estimate(
    spec: &ArchitectureSpec,
    profiles: [SubroutineProfile; 3],
    fidelity: Option<f64>,
) -> Result<RsaEstimate, EstimatorError> {
    let resources = count_architecture(spec)?;
    let shot_time_s = rsa_shot_time(&profiles)?;
    let fidelity = fidelity.unwrap_or_else(|| rsa_fidelity(&profiles));
    let runtime_days = rsa_runtime(shot_time_s, fidelity)?;
    let costs = RsaCosts {
        qubit_days: space_cost(&resources, &CostWeights::QUBITS) * runtime_days,
        coupler_days: space_cost(&resources, &CostWeights::CONNECTIONS) * runtime_days,
    };
    Ok(RsaEstimate { arch: spec.name.clone(), profiles, shot_time_s, fidelity, runtime_days, resources, costs })
}

/// Compiles the three subroutines on `spec` and profiles their makespan and
/// total error.
pub fn compile_rsa_profiles(spec: &ArchitectureSpec) -> Result<[SubroutineProfile; 3], EstimatorError> {
    let mut out = [SubroutineProfile::new(SubroutineKind::Adder, 0.0, 0.0); 3];
    for (slot, kind) in out.iter_mut().zip(SubroutineKind::ALL) {
        let program = compile(&generate_rsa_subroutine(kind.circuit_kind()), spec)?;
        *slot = SubroutineProfile::new(kind, program.makespan_s(), program.total_error());
    }
    Ok(out)
}
