use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Counts indexed by size `m = 0, 1, 2, ...`.
///
/// Trailing zero entries are trimmed, so two distributions compare equal iff
/// they agree at every size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct SizeDistribution {
    counts: Vec<BigUint>,
}

impl SizeDistribution {
    pub fn new(counts: Vec<BigUint>) -> Self {
        let mut d = SizeDistribution { counts };
        d.trim();
        d
    }

    pub fn zero() -> Self {
        SizeDistribution::default()
    }

    /// The distribution `[1]` (a single empty object).
    pub fn one() -> Self {
        SizeDistribution::new(vec![BigUint::from(1u32)])
    }

    pub fn from_u64s(counts: &[u64]) -> Self {
        SizeDistribution::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn from_u128s(counts: &[u128]) -> Self {
        SizeDistribution::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.counts.last().is_some_and(|c| c.is_zero()) {
            self.counts.pop();
        }
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Count at size `m` (zero beyond the stored range).
    pub fn get(&self, m: usize) -> BigUint {
        self.counts.get(m).cloned().unwrap_or_default()
    }

    pub fn get_u64(&self, m: usize) -> Option<u64> {
        self.get(m).to_u64()
    }

    /// Largest size with a nonzero count, `None` for the zero distribution.
    pub fn max_size(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Multiplication by `t^k`.
    pub fn shifted(&self, k: usize) -> Self {
        if self.counts.is_empty() {
            return self.clone();
        }
        let mut counts = vec![BigUint::zero(); k];
        counts.extend(self.counts.iter().cloned());
        SizeDistribution { counts }
    }

    pub fn scaled(&self, factor: &BigUint) -> Self {
        SizeDistribution::new(self.counts.iter().map(|c| c * factor).collect())
    }

    /// Drops every entry above size `max`.
    pub fn truncated(&self, max: usize) -> Self {
        SizeDistribution::new(self.counts.iter().take(max + 1).cloned().collect())
    }

    pub fn add_at(&mut self, m: usize, value: &BigUint) {
        if value.is_zero() {
            return;
        }
        if self.counts.len() <= m {
            self.counts.resize(m + 1, BigUint::zero());
        }
        self.counts[m] += value;
    }
}

impl AddAssign<&SizeDistribution> for SizeDistribution {
    fn add_assign(&mut self, rhs: &SizeDistribution) {
        if self.counts.len() < rhs.counts.len() {
            self.counts.resize(rhs.counts.len(), BigUint::zero());
        }
        for (a, b) in self.counts.iter_mut().zip(&rhs.counts) {
            *a += b;
        }
        self.trim();
    }
}

impl Add for SizeDistribution {
    type Output = SizeDistribution;

    fn add(mut self, rhs: SizeDistribution) -> SizeDistribution {
        self += &rhs;
        self
    }
}

impl std::iter::Sum for SizeDistribution {
    fn sum<I: Iterator<Item = SizeDistribution>>(iter: I) -> Self {
        iter.fold(SizeDistribution::zero(), |a, b| a + b)
    }
}

impl fmt::Display for SizeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl From<SizeDistribution> for Vec<String> {
    fn from(d: SizeDistribution) -> Vec<String> {
        d.counts.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for SizeDistribution {
    type Error = String;

    fn try_from(v: Vec<String>) -> Result<Self, String> {
        let counts = v
            .iter()
            .map(|s| s.parse::<BigUint>().map_err(|e| format!("{s:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SizeDistribution::new(counts))
    }
}
