//! Band linear systems stored diagonal by diagonal.
//!
//! A system holds the coefficient matrix of `A·z = rhs` as its `2w + 1`
//! diagonals (half-bandwidth `w` of 1, 2, or 3) plus the right-hand side.
//! Each diagonal and the right-hand side live in a [`Store`], so every
//! counted entry access goes through the storage cost model. Diagonal-wise
//! layout makes the length constraints self-checking and matches the access
//! pattern of band LU.

mod json;
mod store;

use std::fmt;
use std::ops::{AddAssign, Mul};
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

pub use json::{
    parse_solution, parse_system, parse_system_f64, write_float_solution, write_solution,
    write_system, ParseError, SolutionDocument,
};
pub use store::{IndexOutOfRange, StorageKind, Store, StoreIter};

/// Number representation used by a run: exact rationals or 64-bit floats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Exact, Backend::Float];

    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend {other:?} (expected exact or float)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BandError {
    #[error("half-bandwidth {w} is unsupported (expected 1, 2, or 3)")]
    Bandwidth { w: usize },
    #[error("system size {n} is below the minimum 2w+1 = {min} for half-bandwidth {w}")]
    Size { n: usize, w: usize, min: usize },
    #[error("diagonal at offset {offset} has length {got}, expected {expected}")]
    Shape {
        offset: isize,
        expected: usize,
        got: usize,
    },
    #[error("right-hand side has length {got}, expected {expected}")]
    RhsShape { expected: usize, got: usize },
    #[error("expected {expected} diagonals, got {got}")]
    DiagonalCount { expected: usize, got: usize },
}

/// Band system of `n` equations with half-bandwidth `w`.
///
/// Diagonal `o` (offset in `-w..=w`) has length `n - |o|`; its element `k`
/// is the matrix entry at `(k + |o|, k)` for `o < 0` and `(k, k + o)` for
/// `o >= 0` (0-based). At rest the entries are plain values; the symbolic
/// indeterminate appears only inside a solve.
#[derive(Debug, Clone)]
pub struct BandSystem<T> {
    n: usize,
    w: usize,
    diagonals: Vec<Store<T>>,
    rhs: Store<T>,
}

/// Validates shapes and moves the data into the requested storage backend.
/// `diagonals` are ordered by offset from `-w` to `+w`.
pub fn build_system<T>(
    n: usize,
    w: usize,
    diagonals: Vec<Vec<T>>,
    rhs: Vec<T>,
    storage: StorageKind,
) -> Result<BandSystem<T>, BandError> {
    if !(1..=3).contains(&w) {
        return Err(BandError::Bandwidth { w });
    }
    let min = 2 * w + 1;
    if n < min {
        return Err(BandError::Size { n, w, min });
    }
    if diagonals.len() != 2 * w + 1 {
        return Err(BandError::DiagonalCount {
            expected: 2 * w + 1,
            got: diagonals.len(),
        });
    }
    for (d, seq) in diagonals.iter().enumerate() {
        let offset = d as isize - w as isize;
        let expected = n - offset.unsigned_abs();
        if seq.len() != expected {
            return Err(BandError::Shape {
                offset,
                expected,
                got: seq.len(),
            });
        }
    }
    if rhs.len() != n {
        return Err(BandError::RhsShape {
            expected: n,
            got: rhs.len(),
        });
    }
    Ok(BandSystem {
        n,
        w,
        diagonals: diagonals
            .into_iter()
            .map(|seq| Store::from_vec(storage, seq))
            .collect(),
        rhs: Store::from_vec(storage, rhs),
    })
}

impl<T> BandSystem<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn storage(&self) -> StorageKind {
        self.rhs.kind()
    }

    fn diag_slot(&self, offset: isize) -> usize {
        let w = self.w as isize;
        assert!(
            (-w..=w).contains(&offset),
            "offset {offset} outside band of half-width {w}"
        );
        (offset + w) as usize
    }

    /// Position of matrix entry `(row, col)` inside its diagonal store.
    fn diag_position(row: usize, col: usize) -> usize {
        row.min(col)
    }

    /// Counted read of matrix entry `(row, col)`; 0-based, must lie in band.
    pub fn entry(&mut self, row: usize, col: usize) -> &T {
        assert!(row < self.n && col < self.n, "entry ({row},{col}) outside matrix");
        let offset = col as isize - row as isize;
        let slot = self.diag_slot(offset);
        self.diagonals[slot].get(Self::diag_position(row, col))
    }

    /// Counted write of matrix entry `(row, col)`.
    pub fn set_entry(&mut self, row: usize, col: usize, value: T) {
        assert!(row < self.n && col < self.n, "entry ({row},{col}) outside matrix");
        let offset = col as isize - row as isize;
        let slot = self.diag_slot(offset);
        self.diagonals[slot].set(Self::diag_position(row, col), value);
    }

    /// Counted read of the right-hand side.
    pub fn rhs(&mut self, i: usize) -> &T {
        self.rhs.get(i)
    }

    /// Counted write of the right-hand side.
    pub fn set_rhs(&mut self, i: usize, value: T) {
        self.rhs.set(i, value)
    }

    /// Access steps accumulated across all stores.
    pub fn total_steps(&self) -> u64 {
        self.diagonals.iter().map(Store::steps).sum::<u64>() + self.rhs.steps()
    }

    pub fn reset_steps(&mut self) {
        for d in &mut self.diagonals {
            d.reset_steps();
        }
        self.rhs.reset_steps();
    }
}

impl<T: Clone> BandSystem<T> {
    /// Uncounted copy of one diagonal, for serialization and tests.
    pub fn diagonal(&self, offset: isize) -> Vec<T> {
        self.diagonals[self.diag_slot(offset)].to_vec()
    }

    /// Uncounted copy of the right-hand side.
    pub fn rhs_vec(&self) -> Vec<T> {
        self.rhs.to_vec()
    }

    /// Rebuilds the same system under a different storage backend.
    pub fn with_storage(&self, storage: StorageKind) -> BandSystem<T> {
        let w = self.w as isize;
        let diagonals = (-w..=w).map(|o| self.diagonal(o)).collect();
        build_system(self.n, self.w, diagonals, self.rhs_vec(), storage)
            .expect("shape of an existing system is valid")
    }
}

impl<T> BandSystem<T>
where
    T: Clone + Zero + AddAssign<T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// `A·x`, computed diagonal-wise without touching the step counters.
    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n, "vector length must match system size");
        let mut y = vec![T::zero(); self.n];
        let w = self.w as isize;
        for offset in -w..=w {
            let slot = self.diag_slot(offset);
            for (k, value) in self.diagonals[slot].iter().enumerate() {
                let (row, col) = if offset >= 0 {
                    (k, k + offset as usize)
                } else {
                    (k + offset.unsigned_abs(), k)
                };
                y[row] += value * &x[col];
            }
        }
        y
    }
}
