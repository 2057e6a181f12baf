//! Band reduction by Gaussian elimination: heptadiagonal to pentadiagonal to
//! tridiagonal, counting every executed rational operation.
//!
//! Two fill-free sweeps clear the outermost diagonals. The backward sweep
//! clears offset `+w`: row `i` gets `m = a[i][i+w] / a[i+1][i+w]` subtracted
//! times row `i+1`, whose own `+w` entry is already zero, so the update stays
//! inside row `i`'s band. The forward sweep then clears offset `-w` the same
//! way against row `i-1`. The right-hand side rides along in both sweeps, so
//! the solution set is preserved exactly.
//!
//! Counting convention: one count per rational `+`, `-`, `*`, `/` actually
//! executed. A row step whose target entry is already zero is skipped at zero
//! cost. Reduction stays in plain rational arithmetic; a zero divisor is a
//! hard error rather than a substitution, which keeps the count well defined.

use num_traits::Zero;
use serde_json::json;
use thiserror::Error;

use crate::band::{build_system, BandSystem};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("zero divisor in row {row} while clearing offset {offset}")]
    ReductionPivotZero { row: usize, offset: isize },
    #[error("system size {n} too small to reduce from half-bandwidth {w} (need n >= {min})")]
    Size { n: usize, w: usize, min: usize },
    #[error("system is already tridiagonal")]
    AlreadyTridiagonal,
    #[error("target half-bandwidth {target} invalid from {current} (need 1 <= target <= current)")]
    BadTarget { current: usize, target: usize },
}

/// Reference operation count for one reduction step, reported next to the
/// measured count: `35n - 122` from half-bandwidth 3 and `23n - 52` from
/// half-bandwidth 2. These describe a differently structured elimination, so
/// the measured count shares their slope-in-`n` shape but not the constants.
pub fn reference_ops(w_from: usize, n: usize) -> i64 {
    let n = n as i64;
    match w_from {
        3 => 35 * n - 122,
        2 => 23 * n - 52,
        other => panic!("no reference count for half-bandwidth {other}"),
    }
}

/// One or more reduction steps: the reduced system plus the operation counts.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub reduced: BandSystem<Rational>,
    pub w_from: usize,
    pub w_to: usize,
    pub ops_counted: u64,
    pub reference_ops: i64,
    pub n: usize,
}

impl ReductionReport {
    /// Metadata document; the reduced system itself is written separately.
    pub fn to_json(&self) -> String {
        let doc = json!({
            "w_from": self.w_from,
            "w_to": self.w_to,
            "ops_counted": self.ops_counted,
            "reference_ops": self.reference_ops,
            "n": self.n,
        });
        format!("{:#}\n", doc)
    }
}

/// Eliminates the outermost diagonal pair, lowering the half-bandwidth by 1.
pub fn reduce_band(sys: &BandSystem<Rational>) -> Result<ReductionReport, ReduceError> {
    let n = sys.n();
    let w = sys.w();
    if w == 1 {
        return Err(ReduceError::AlreadyTridiagonal);
    }
    let min = 2 * w + 2;
    if n < min {
        return Err(ReduceError::Size { n, w, min });
    }

    let mut work = sys.clone();
    work.reset_steps();
    let mut ops: u64 = 0;

    // Backward sweep: clear offset +w against the already-cleared row below.
    for i in (0..n - w).rev() {
        let target = work.entry(i, i + w).clone();
        if target.is_zero() {
            continue;
        }
        let divisor = work.entry(i + 1, i + w).clone();
        if divisor.is_zero() {
            return Err(ReduceError::ReductionPivotZero {
                row: i + 2,
                offset: w as isize,
            });
        }
        let m = &target / &divisor;
        ops += 1;
        let bi = work.rhs(i).clone();
        let below = work.rhs(i + 1).clone();
        work.set_rhs(i, &bi - &(&m * &below));
        ops += 2;
        for c in (i + 1).saturating_sub(w)..i + w {
            let own = work.entry(i, c).clone();
            let other = work.entry(i + 1, c).clone();
            work.set_entry(i, c, &own - &(&m * &other));
            ops += 2;
        }
        work.set_entry(i, i + w, Rational::zero());
    }

    // Forward sweep: clear offset -w against the row above, which now spans
    // offsets -(w-1)..+(w-1) only.
    for i in w..n {
        let target = work.entry(i, i - w).clone();
        if target.is_zero() {
            continue;
        }
        let divisor = work.entry(i - 1, i - w).clone();
        if divisor.is_zero() {
            return Err(ReduceError::ReductionPivotZero {
                row: i,
                offset: -(w as isize),
            });
        }
        let m = &target / &divisor;
        ops += 1;
        let bi = work.rhs(i).clone();
        let above = work.rhs(i - 1).clone();
        work.set_rhs(i, &bi - &(&m * &above));
        ops += 2;
        for c in i - w + 1..=(i + w - 2).min(n - 1) {
            let own = work.entry(i, c).clone();
            let other = work.entry(i - 1, c).clone();
            work.set_entry(i, c, &own - &(&m * &other));
            ops += 2;
        }
        work.set_entry(i, i - w, Rational::zero());
    }

    let w_to = w - 1;
    let inner = (-(w_to as isize)..=w_to as isize)
        .map(|o| work.diagonal(o))
        .collect();
    let reduced = build_system(n, w_to, inner, work.rhs_vec(), work.storage())
        .expect("inner band of a valid system is a valid system");
    Ok(ReductionReport {
        reduced,
        w_from: w,
        w_to,
        ops_counted: ops,
        reference_ops: reference_ops(w, n),
        n,
    })
}

/// Repeated [`reduce_band`] down to `target_w`, with counts summed.
/// `target_w` equal to the current half-bandwidth yields an identity report.
pub fn reduce_chain(
    sys: &BandSystem<Rational>,
    target_w: usize,
) -> Result<ReductionReport, ReduceError> {
    let w_from = sys.w();
    if target_w < 1 || target_w > w_from {
        return Err(ReduceError::BadTarget {
            current: w_from,
            target: target_w,
        });
    }
    let mut report = ReductionReport {
        reduced: sys.clone(),
        w_from,
        w_to: w_from,
        ops_counted: 0,
        reference_ops: 0,
        n: sys.n(),
    };
    while report.w_to > target_w {
        let step = reduce_band(&report.reduced)?;
        report = ReductionReport {
            reduced: step.reduced,
            w_from,
            w_to: step.w_to,
            ops_counted: report.ops_counted + step.ops_counted,
            reference_ops: report.reference_ops + step.reference_ops,
            n: report.n,
        };
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::StorageKind;
    use crate::solvers::{shdm, solve, spdm};

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn rv(ns: &[i64]) -> Vec<Rational> {
        ns.iter().map(|&n| r(n)).collect()
    }

    /// Dense band with every entry nonzero: targets are original entries in
    /// both sweeps, so no zero-target skips occur and the operation count
    /// follows the closed form exactly. Entries come from an aperiodic
    /// generator; salts where a mid-sweep divisor happens to cancel to zero
    /// are skipped, which cannot change the count because skips depend only
    /// on the (all nonzero) original entries.
    fn dominant_system(n: usize, w: usize) -> BandSystem<Rational> {
        for salt in 0u64..64 {
            let mut state: u64 =
                0x853C49E6748FEA9B ^ (n as u64) << 16 ^ (w as u64) << 8 ^ salt;
            let mut next = move || {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                state >> 33
            };
            let mut diagonals = Vec::new();
            for o in -(w as isize)..=w as isize {
                let len = n - o.unsigned_abs();
                let seq: Vec<Rational> = (0..len)
                    .map(|_| {
                        if o == 0 {
                            r(100 + (next() % 7) as i64)
                        } else {
                            r(1 + (next() % 5) as i64)
                        }
                    })
                    .collect();
                diagonals.push(seq);
            }
            let rhs = (0..n).map(|_| r((next() % 11) as i64 + 1)).collect();
            let sys = build_system(n, w, diagonals, rhs, StorageKind::Fixed).unwrap();
            match reduce_chain(&sys, 1) {
                Err(ReduceError::ReductionPivotZero { .. }) => continue,
                _ => return sys,
            }
        }
        panic!("no divisor-safe fixture for n = {n}, w = {w} within 64 salts");
    }

    #[test]
    fn zero_outer_band_reduces_for_free() {
        let sys = build_system(
            6,
            2,
            vec![
                rv(&[0, 0, 0, 0]),
                rv(&[1, 1, 1, 1, 1]),
                rv(&[5, 5, 5, 5, 5, 5]),
                rv(&[2, 2, 2, 2, 2]),
                rv(&[0, 0, 0, 0]),
            ],
            rv(&[1, 2, 3, 4, 5, 6]),
            StorageKind::Fixed,
        )
        .unwrap();
        let report = reduce_band(&sys).unwrap();
        assert_eq!(report.ops_counted, 0);
        assert_eq!(report.reduced.w(), 1);
        assert_eq!(report.reduced.diagonal(0), sys.diagonal(0));
        assert_eq!(report.reduced.diagonal(-1), sys.diagonal(-1));
        assert_eq!(report.reduced.diagonal(1), sys.diagonal(1));
        assert_eq!(report.reduced.rhs_vec(), sys.rhs_vec());
    }

    #[test]
    fn reduction_preserves_the_solution_exactly() {
        let sys = dominant_system(12, 3);
        let original = solve(&mut sys.clone()).unwrap();
        let report = reduce_band(&sys).unwrap();
        let reduced = solve(&mut report.reduced.clone()).unwrap();
        assert_eq!(original.solution, reduced.solution);
    }

    #[test]
    fn operation_count_matches_the_derived_closed_form() {
        // Expanding the two sweeps over a band with no zero entries gives
        // 24n - 80 from w = 3 and 16n - 34 from w = 2.
        for (w, slope, intercept) in [(3usize, 24u64, 80u64), (2, 16, 34)] {
            for n in [10u64, 50, 100] {
                let report = reduce_band(&dominant_system(n as usize, w)).unwrap();
                assert_eq!(report.ops_counted, slope * n - intercept, "w = {w}, n = {n}");
            }
        }
    }

    #[test]
    fn operation_count_is_affine_in_n() {
        for w in [2usize, 3] {
            let counts: Vec<u64> = (20..24)
                .map(|n| reduce_band(&dominant_system(n, w)).unwrap().ops_counted)
                .collect();
            let slope = counts[1] - counts[0];
            assert!(counts.windows(2).all(|p| p[1] - p[0] == slope));
        }
    }

    #[test]
    fn reference_counts_are_reported_alongside() {
        let report = reduce_band(&dominant_system(10, 3)).unwrap();
        assert_eq!(report.reference_ops, 35 * 10 - 122);
        let report = reduce_band(&dominant_system(10, 2)).unwrap();
        assert_eq!(report.reference_ops, 23 * 10 - 52);
    }

    #[test]
    fn chain_to_tridiagonal_sums_both_steps() {
        let sys = dominant_system(14, 3);
        let original = shdm(&mut sys.clone()).unwrap();
        let chain = reduce_chain(&sys, 1).unwrap();
        assert_eq!(chain.w_from, 3);
        assert_eq!(chain.w_to, 1);
        let step1 = reduce_band(&sys).unwrap();
        let step2 = reduce_band(&step1.reduced).unwrap();
        assert_eq!(chain.ops_counted, step1.ops_counted + step2.ops_counted);
        assert_eq!(chain.reference_ops, step1.reference_ops + step2.reference_ops);
        let via_chain = solve(&mut chain.reduced.clone()).unwrap();
        assert_eq!(original.solution, via_chain.solution);
    }

    #[test]
    fn chain_to_same_width_is_identity() {
        let sys = dominant_system(9, 2);
        let report = reduce_chain(&sys, 2).unwrap();
        assert_eq!(report.ops_counted, 0);
        assert_eq!(report.reference_ops, 0);
        assert_eq!(report.w_from, 2);
        assert_eq!(report.w_to, 2);
        assert_eq!(report.reduced.diagonal(0), sys.diagonal(0));
        let a = solve(&mut report.reduced.clone()).unwrap();
        let b = spdm(&mut sys.clone()).unwrap();
        assert_eq!(a.solution, b.solution);
    }

    #[test]
    fn zero_divisor_is_a_hard_error() {
        // Target a[3][5] nonzero but divisor a[4][5] zero (0-based).
        let sys = build_system(
            6,
            2,
            vec![
                rv(&[1, 1, 1, 1]),
                rv(&[1, 1, 1, 1, 1]),
                rv(&[9, 9, 9, 9, 9, 9]),
                rv(&[1, 1, 1, 1, 0]),
                rv(&[1, 1, 1, 1]),
            ],
            rv(&[1, 2, 3, 4, 5, 6]),
            StorageKind::Fixed,
        )
        .unwrap();
        assert_eq!(
            reduce_band(&sys).unwrap_err(),
            ReduceError::ReductionPivotZero { row: 5, offset: 2 }
        );
    }

    #[test]
    fn size_and_width_gates() {
        assert_eq!(
            reduce_band(&dominant_system(7, 3)).unwrap_err(),
            ReduceError::Size { n: 7, w: 3, min: 8 }
        );
        let tri = dominant_system(8, 1);
        assert_eq!(reduce_band(&tri).unwrap_err(), ReduceError::AlreadyTridiagonal);
        assert_eq!(
            reduce_chain(&dominant_system(8, 2), 3).unwrap_err(),
            ReduceError::BadTarget { current: 2, target: 3 }
        );
    }

    #[test]
    fn report_serializes_its_metadata() {
        let report = reduce_band(&dominant_system(10, 3)).unwrap();
        let text = report.to_json();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["w_from"], 3);
        assert_eq!(value["w_to"], 2);
        assert_eq!(value["n"], 10);
        assert_eq!(value["ops_counted"], 24 * 10 - 80);
        assert_eq!(value["reference_ops"], 35 * 10 - 122);
    }
}
