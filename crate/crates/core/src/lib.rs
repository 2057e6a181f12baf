//! Exact band linear-system solvers with a storage-cost benchmark harness.
//!
//! The crate solves `A·z = b` for band matrices of half-bandwidth 1, 2, or 3
//! in exact rational arithmetic. Elimination uses no row exchanges: a pivot
//! that is exactly zero is replaced by an indeterminate, the solve continues
//! over the field of rational functions, and results are specialized at zero
//! afterwards. Alongside the solvers sit a band-reduction transform with an
//! exact operation counter and a benchmark layer that times solves under two
//! storage cost models (constant-cost indexed access versus linked-list
//! traversal) and estimates the resulting orders of growth.

pub mod band;
pub mod bench;
pub mod reduce;
pub mod scalar;
pub mod solvers;
pub mod sweep;

pub use band::{
    build_system, Backend, BandError, BandSystem, IndexOutOfRange, ParseError, SolutionDocument,
    StorageKind, Store,
};
pub use bench::{
    alpha_table, append_csv, estimate_alpha, generate_system, mean_table, ratio_table, read_csv,
    time_run, write_csv, AlphaEstimate, AlphaRow, AnalysisError, BenchError, BenchRecord, GenSpec,
    Generated, MeanRow, RatioRow, SplitMix64,
};
pub use reduce::{reduce_band, reduce_chain, ReduceError, ReductionReport};
pub use scalar::{Poly, RatFunc, Rational, Scalar, ScalarError};
pub use solvers::{
    band_lu_symbolic, shdm, solve, solve_float, solve_with, spdm, stdm, substitute_solve,
    Algorithm, BandFactors, FloatSolveResult, SolveError, SolveResult,
};
pub use sweep::{verify_specs, verify_specs_sequential, SweepFailure};
