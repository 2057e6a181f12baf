//! Indexed storage backends with an explicit access-cost model.
//!
//! The solvers read and write every matrix, factor, and work-vector entry
//! through a [`Store`], so the choice of backend decides how indexed access
//! scales. `Fixed` is a flat vector: one step per access. `List` is a real
//! singly-linked chain of heap nodes that is walked from the head on every
//! access, with no cached cursor: index `i` costs `i + 1` steps, and the walk
//! physically happens so wall-clock time scales the same way the step counter
//! does.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Checked-access failure: `index` is past the end of a store of length `len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("index {index} out of range for store of length {len}")]
pub struct IndexOutOfRange {
    pub index: usize,
    pub len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StorageKind {
    Fixed,
    List,
}

impl StorageKind {
    pub const ALL: [StorageKind; 2] = [StorageKind::Fixed, StorageKind::List];

    pub fn as_str(self) -> &'static str {
        match self {
            StorageKind::Fixed => "fixed",
            StorageKind::List => "list",
        }
    }
}

impl fmt::Display for StorageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StorageKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(StorageKind::Fixed),
            "list" => Ok(StorageKind::List),
            other => Err(format!("unknown storage kind {other:?} (expected fixed or list)")),
        }
    }
}

struct Node<T> {
    value: T,
    next: Option<Box<Node<T>>>,
}

enum Repr<T> {
    Fixed(Vec<T>),
    List { head: Option<Box<Node<T>>> },
}

/// Indexed sequence that counts access steps under its backend's cost model.
pub struct Store<T> {
    repr: Repr<T>,
    len: usize,
    steps: u64,
}

impl<T> Store<T> {
    pub fn from_vec(kind: StorageKind, values: Vec<T>) -> Self {
        let len = values.len();
        let repr = match kind {
            StorageKind::Fixed => Repr::Fixed(values),
            StorageKind::List => {
                let mut head = None;
                for value in values.into_iter().rev() {
                    head = Some(Box::new(Node { value, next: head }));
                }
                Repr::List { head }
            }
        };
        Store { repr, len, steps: 0 }
    }

    pub fn kind(&self) -> StorageKind {
        match self.repr {
            Repr::Fixed(_) => StorageKind::Fixed,
            Repr::List { .. } => StorageKind::List,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Access steps accumulated so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn reset_steps(&mut self) {
        self.steps = 0;
    }

    fn count(&mut self, index: usize) {
        self.steps += match self.repr {
            Repr::Fixed(_) => 1,
            Repr::List { .. } => index as u64 + 1,
        };
    }

    fn walk(head: &Option<Box<Node<T>>>, index: usize) -> &Node<T> {
        let mut node = head.as_deref().expect("index within store length");
        for _ in 0..index {
            node = node.next.as_deref().expect("index within store length");
        }
        node
    }

    fn walk_mut(head: &mut Option<Box<Node<T>>>, index: usize) -> &mut Node<T> {
        let mut node = head.as_deref_mut().expect("index within store length");
        for _ in 0..index {
            node = node.next.as_deref_mut().expect("index within store length");
        }
        node
    }

    /// Counted read with bounds checking.
    pub fn try_get(&mut self, index: usize) -> Result<&T, IndexOutOfRange> {
        if index >= self.len {
            return Err(IndexOutOfRange { index, len: self.len });
        }
        self.count(index);
        Ok(match &self.repr {
            Repr::Fixed(v) => &v[index],
            Repr::List { head } => &Self::walk(head, index).value,
        })
    }

    /// Counted write with bounds checking.
    pub fn try_set(&mut self, index: usize, value: T) -> Result<(), IndexOutOfRange> {
        if index >= self.len {
            return Err(IndexOutOfRange { index, len: self.len });
        }
        self.count(index);
        match &mut self.repr {
            Repr::Fixed(v) => v[index] = value,
            Repr::List { head } => Self::walk_mut(head, index).value = value,
        }
        Ok(())
    }

    /// Counted read; panics when out of bounds. Solver loops use this with
    /// indices already confined to the band.
    pub fn get(&mut self, index: usize) -> &T {
        self.try_get(index).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Counted write; panics when out of bounds.
    pub fn set(&mut self, index: usize, value: T) {
        self.try_set(index, value).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Uncounted sequential read, for extraction and serialization.
    pub fn iter(&self) -> StoreIter<'_, T> {
        StoreIter {
            inner: match &self.repr {
                Repr::Fixed(v) => IterInner::Fixed(v.iter()),
                Repr::List { head } => IterInner::List(head.as_deref()),
            },
        }
    }
}

impl<T: Clone> Store<T> {
    pub fn filled(kind: StorageKind, len: usize, value: T) -> Self {
        Store::from_vec(kind, vec![value; len])
    }

    /// Uncounted copy of the contents in index order.
    pub fn to_vec(&self) -> Vec<T> {
        self.iter().cloned().collect()
    }
}

pub struct StoreIter<'a, T> {
    inner: IterInner<'a, T>,
}

enum IterInner<'a, T> {
    Fixed(std::slice::Iter<'a, T>),
    List(Option<&'a Node<T>>),
}

impl<'a, T> Iterator for StoreIter<'a, T> {
    type Item = &'a T;
    fn next(&mut self) -> Option<&'a T> {
        match &mut self.inner {
            IterInner::Fixed(it) => it.next(),
            IterInner::List(cur) => {
                let node = (*cur)?;
                *cur = node.next.as_deref();
                Some(&node.value)
            }
        }
    }
}

// The chain is dropped iteratively; the derived drop would recurse once per
// node and overflow the stack on long lists.
impl<T> Drop for Store<T> {
    fn drop(&mut self) {
        if let Repr::List { head } = &mut self.repr {
            let mut next = head.take();
            while let Some(mut node) = next {
                next = node.next.take();
            }
        }
    }
}

impl<T: Clone> Clone for Store<T> {
    fn clone(&self) -> Self {
        let mut copy = Store::from_vec(self.kind(), self.to_vec());
        copy.steps = self.steps;
        copy
    }
}

impl<T: fmt::Debug> fmt::Debug for Store<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Store")
            .field("kind", &self.kind())
            .field("len", &self.len)
            .field("steps", &self.steps)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_access_costs_one_step_each() {
        let mut s = Store::from_vec(StorageKind::Fixed, vec![10, 20, 30]);
        assert_eq!(*s.get(0), 10);
        assert_eq!(*s.get(2), 30);
        s.set(1, 25);
        assert_eq!(s.steps(), 3);
        assert_eq!(s.to_vec(), vec![10, 25, 30]);
    }

    #[test]
    fn list_access_costs_index_plus_one() {
        let mut s = Store::from_vec(StorageKind::List, vec![10, 20, 30, 40, 50]);
        assert_eq!(*s.get(0), 10);
        assert_eq!(s.steps(), 1);
        assert_eq!(*s.get(4), 50);
        assert_eq!(s.steps(), 6);
        s.set(2, 35);
        assert_eq!(s.steps(), 9);
        assert_eq!(s.to_vec(), vec![10, 20, 35, 40, 50]);
    }

    #[test]
    fn extraction_and_iteration_are_uncounted() {
        let s = Store::from_vec(StorageKind::List, vec![1, 2, 3]);
        assert_eq!(s.to_vec(), vec![1, 2, 3]);
        assert_eq!(s.iter().count(), 3);
        assert_eq!(s.steps(), 0);
    }

    #[test]
    fn round_trip_preserves_order_for_both_kinds() {
        for kind in StorageKind::ALL {
            let values: Vec<i32> = (0..100).collect();
            let s = Store::from_vec(kind, values.clone());
            assert_eq!(s.len(), 100);
            assert_eq!(s.to_vec(), values);
        }
    }

    #[test]
    fn reset_clears_the_counter() {
        let mut s = Store::filled(StorageKind::List, 4, 0);
        s.get(3);
        assert_eq!(s.steps(), 4);
        s.reset_steps();
        assert_eq!(s.steps(), 0);
    }

    #[test]
    fn clone_copies_values_and_counter() {
        let mut s = Store::from_vec(StorageKind::List, vec![1, 2, 3]);
        s.get(2);
        let c = s.clone();
        assert_eq!(c.to_vec(), vec![1, 2, 3]);
        assert_eq!(c.steps(), 3);
        assert_eq!(c.kind(), StorageKind::List);
    }

    #[test]
    fn long_lists_drop_without_recursion() {
        let s = Store::filled(StorageKind::List, 200_000, 0u8);
        assert_eq!(s.len(), 200_000);
        drop(s);
        let s = Store::filled(StorageKind::List, 200_000, 0u8);
        let _ = s.clone();
    }

    #[test]
    fn storage_kind_parses_and_displays() {
        assert_eq!("fixed".parse::<StorageKind>().unwrap(), StorageKind::Fixed);
        assert_eq!("list".parse::<StorageKind>().unwrap(), StorageKind::List);
        assert!("heap".parse::<StorageKind>().is_err());
        assert_eq!(StorageKind::List.to_string(), "list");
    }

    #[test]
    fn full_sweep_totals_are_linear_vs_quadratic() {
        let len = 10u64;
        let mut fixed = Store::from_vec(StorageKind::Fixed, (0..len).collect::<Vec<_>>());
        let mut list = Store::from_vec(StorageKind::List, (0..len).collect::<Vec<_>>());
        for i in 0..len as usize {
            fixed.get(i);
            list.get(i);
        }
        assert_eq!(fixed.steps(), len);
        assert_eq!(list.steps(), len * (len + 1) / 2);
    }

    #[test]
    fn backends_agree_on_any_access_sequence() {
        let mut fixed = Store::filled(StorageKind::Fixed, 16, 0u64);
        let mut list = Store::filled(StorageKind::List, 16, 0u64);
        // Deterministic scramble of reads and writes.
        let mut state = 0x2545F4914F6CDD1Du64;
        for _ in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let i = (state >> 33) as usize % 16;
            if state & 1 == 0 {
                fixed.set(i, state);
                list.set(i, state);
            } else {
                assert_eq!(fixed.get(i), list.get(i));
            }
        }
        assert_eq!(fixed.to_vec(), list.to_vec());
    }

    #[test]
    fn checked_access_reports_out_of_range() {
        let mut s = Store::from_vec(StorageKind::List, vec![1, 2, 3, 4]);
        assert_eq!(
            s.try_get(4),
            Err(IndexOutOfRange { index: 4, len: 4 })
        );
        assert!(s.try_set(7, 9).is_err());
        // Failed accesses charge no steps.
        assert_eq!(s.steps(), 0);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn unchecked_access_panics_past_the_end() {
        let mut s = Store::from_vec(StorageKind::Fixed, vec![1]);
        s.get(1);
    }
}
