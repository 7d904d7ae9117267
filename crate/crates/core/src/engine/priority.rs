use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("priority arity mismatch: {left} vs {right}")]
pub struct ArityMismatch {
    pub left: usize,
    pub right: usize,
}

/// A fixed-arity numeric vector compared lexicographically.
///
/// The `Ord` impl uses `f64::total_cmp` per component and is only meaningful
/// between priorities of the same arity with finite values; the engine
/// enforces both before anything reaches a queue.
#[derive(Clone, Debug, Default)]
pub struct Priority(Vec<f64>);

impl Priority {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        let mut values = values.into();
        for x in &mut values {
            // -0.0 and 0.0 must compare equal under total_cmp
            if *x == 0.0 {
                *x = 0.0;
            }
        }
        Priority(values)
    }

    /// The priority of computations that do not rank their subgraphs.
    pub fn none() -> Self {
        Priority(Vec::new())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Lexicographic comparison that rejects mismatched arities.
    pub fn compare(&self, other: &Priority) -> Result<Ordering, ArityMismatch> {
        if self.arity() != other.arity() {
            return Err(ArityMismatch {
                left: self.arity(),
                right: other.arity(),
            });
        }
        Ok(self.cmp(other))
    }
}

impl<const N: usize> From<[f64; N]> for Priority {
    fn from(values: [f64; N]) -> Self {
        Priority::new(values.to_vec())
    }
}

impl Ord for Priority {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Priority {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Priority {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Priority {}

impl fmt::Display for Priority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}
