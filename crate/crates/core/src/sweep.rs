//! Batch verification of generated systems.
//!
//! Large correctness sweeps (hundreds of generate-and-solve rounds) are
//! embarrassingly parallel, and none of them are timed, so they may fan out
//! across threads without touching the measurement methodology: wall-clock
//! timing always goes through [`crate::bench::time_run`], which stays
//! strictly sequential. The `parallel` feature (on by default) enables the
//! work-stealing path; [`verify_specs_sequential`] is always available and
//! is the fallback when the feature is off.

use crate::bench::{generate_system, BenchError, GenSpec, Generated};
use crate::solvers::{solve, solve_float};

/// A failed round, identified by its position in the input batch.
#[derive(Debug, thiserror::Error)]
#[error("spec {index} failed: {error}")]
pub struct SweepFailure {
    pub index: usize,
    #[source]
    pub error: BenchError,
}

fn verify_one(spec: &GenSpec) -> Result<(), BenchError> {
    match generate_system(spec)? {
        Generated::Exact {
            system,
            planted,
        } => {
            let result = solve(&mut system.clone())?;
            if result.solution != planted {
                return Err(BenchError::PlantedMismatch);
            }
        }
        Generated::Float {
            system,
            planted,
        } => {
            let result = solve_float(&mut system.clone())?;
            if result.solution != planted {
                return Err(BenchError::PlantedMismatch);
            }
        }
    }
    Ok(())
}

/// Generates and solves every spec, checking each solution against its
/// planted vector; returns the number of verified systems or the first
/// failure in index order.
pub fn verify_specs_sequential(specs: &[GenSpec]) -> Result<usize, SweepFailure> {
    for (index, spec) in specs.iter().enumerate() {
        verify_one(spec).map_err(|error| SweepFailure { index, error })?;
    }
    Ok(specs.len())
}

/// [`verify_specs_sequential`] fanned out over the rayon thread pool.
///
/// The reported failure is the smallest failing index, matching the
/// sequential version, so the two entry points are observationally
/// equivalent.
#[cfg(feature = "parallel")]
pub fn verify_specs(specs: &[GenSpec]) -> Result<usize, SweepFailure> {
    use rayon::prelude::*;
    let failure = specs
        .par_iter()
        .enumerate()
        .filter_map(|(index, spec)| {
            verify_one(spec)
                .err()
                .map(|error| SweepFailure { index, error })
        })
        .min_by_key(|f| f.index);
    match failure {
        Some(f) => Err(f),
        None => Ok(specs.len()),
    }
}

/// Sequential stand-in used when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn verify_specs(specs: &[GenSpec]) -> Result<usize, SweepFailure> {
    verify_specs_sequential(specs)
}
