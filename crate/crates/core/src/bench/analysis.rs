//! Order-of-growth estimation and cross-algorithm comparison tables.
//!
//! Timing data is modelled as t = k * n^alpha. Two measurements at different
//! sizes pin the exponent: alpha = ln(t2/t1) / ln(n2/n1). The quotient form
//! keeps the estimate invariant under rescaling both times by an exact
//! power of two, since the scale factor cancels before any rounding.

use std::collections::BTreeMap;

use crate::band::{Backend, StorageKind};
use crate::solvers::Algorithm;

use super::BenchRecord;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AnalysisError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("missing {missing} series for storage {storage}, backend {backend}, n = {n}")]
    MissingSeries {
        storage: StorageKind,
        backend: Backend,
        n: usize,
        missing: Algorithm,
    },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

/// Two-point fit of t = k * n^alpha.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimate {
    pub n1: usize,
    pub n2: usize,
    pub t1: f64,
    pub t2: f64,
    pub alpha: f64,
    /// Proportionality constant t1 / n1^alpha.
    pub k_fit: f64,
}

pub fn estimate_alpha(
    t1: f64,
    t2: f64,
    n1: usize,
    n2: usize,
) -> Result<AlphaEstimate, AnalysisError> {
    if !(t1 > 0.0) || !(t2 > 0.0) {
        return Err(AnalysisError::Domain(format!(
            "times must be positive, got t1 = {t1}, t2 = {t2}"
        )));
    }
    if n1 == 0 || n2 == 0 {
        return Err(AnalysisError::Domain("sizes must be positive".into()));
    }
    if n1 == n2 {
        return Err(AnalysisError::Domain(format!(
            "sizes must differ, got n1 = n2 = {n1}"
        )));
    }
    let alpha = (t2 / t1).ln() / (n2 as f64 / n1 as f64).ln();
    let k_fit = t1 / (n1 as f64).powf(alpha);
    Ok(AlphaEstimate {
        n1,
        n2,
        t1,
        t2,
        alpha,
        k_fit,
    })
}

/// Mean seconds over repetitions for one measured cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanRow {
    pub algorithm: Algorithm,
    pub storage: StorageKind,
    pub backend: Backend,
    pub n: usize,
    pub mean_seconds: f64,
    pub reps: usize,
}

/// Per-run records averaged into one row per (algorithm, storage, backend, n),
/// sorted by that key.
pub fn mean_table(records: &[BenchRecord]) -> Vec<MeanRow> {
    let mut cells: BTreeMap<(StorageKind, Backend, usize, Algorithm), (f64, usize)> =
        BTreeMap::new();
    for r in records {
        let cell = cells
            .entry((r.storage, r.backend, r.n, r.algorithm))
            .or_insert((0.0, 0));
        cell.0 += r.seconds;
        cell.1 += 1;
    }
    cells
        .into_iter()
        .map(|((storage, backend, n, algorithm), (sum, reps))| MeanRow {
            algorithm,
            storage,
            backend,
            n,
            mean_seconds: sum / reps as f64,
            reps,
        })
        .collect()
}

/// Mean-time ratios of the wider-band algorithms over STDM at one size.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub storage: StorageKind,
    pub backend: Backend,
    pub n: usize,
    /// mean(SPDM) / mean(STDM).
    pub pd_over_td: f64,
    /// mean(SHDM) / mean(STDM).
    pub hd_over_td: f64,
}

/// Ratio rows per (storage, backend, n); every group must contain all three
/// algorithms. The STDM:STDM ratio is identically 1 and is not repeated.
pub fn ratio_table(records: &[BenchRecord]) -> Result<Vec<RatioRow>, AnalysisError> {
    let means = mean_table(records);
    let mut groups: BTreeMap<(StorageKind, Backend, usize), BTreeMap<Algorithm, f64>> =
        BTreeMap::new();
    for row in means {
        groups
            .entry((row.storage, row.backend, row.n))
            .or_default()
            .insert(row.algorithm, row.mean_seconds);
    }
    let mut out = Vec::new();
    for ((storage, backend, n), by_alg) in groups {
        let fetch = |a: Algorithm| {
            by_alg
                .get(&a)
                .copied()
                .ok_or(AnalysisError::MissingSeries {
                    storage,
                    backend,
                    n,
                    missing: a,
                })
        };
        let td = fetch(Algorithm::Stdm)?;
        let pd = fetch(Algorithm::Spdm)?;
        let hd = fetch(Algorithm::Shdm)?;
        out.push(RatioRow {
            storage,
            backend,
            n,
            pd_over_td: pd / td,
            hd_over_td: hd / td,
        });
    }
    Ok(out)
}

/// Alpha estimate for one (algorithm, storage, backend) series.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaRow {
    pub algorithm: Algorithm,
    pub storage: StorageKind,
    pub backend: Backend,
    pub estimate: AlphaEstimate,
}

/// Two-point alpha per series, using the two largest measured sizes.
///
/// Series with fewer than two sizes are skipped; an empty result means no
/// series had enough data for an estimate.
pub fn alpha_table(records: &[BenchRecord]) -> Result<Vec<AlphaRow>, AnalysisError> {
    let means = mean_table(records);
    let mut series: BTreeMap<(StorageKind, Backend, Algorithm), Vec<(usize, f64)>> =
        BTreeMap::new();
    for row in means {
        series
            .entry((row.storage, row.backend, row.algorithm))
            .or_default()
            .push((row.n, row.mean_seconds));
    }
    let mut out = Vec::new();
    for ((storage, backend, algorithm), mut sizes) in series {
        sizes.sort_by_key(|&(n, _)| n);
        if sizes.len() < 2 {
            continue;
        }
        let (n1, t1) = sizes[sizes.len() - 2];
        let (n2, t2) = sizes[sizes.len() - 1];
        out.push(AlphaRow {
            algorithm,
            storage,
            backend,
            estimate: estimate_alpha(t1, t2, n1, n2)?,
        });
    }
    Ok(out)
}
