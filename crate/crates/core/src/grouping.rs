//! Partitions of the cells `1..=M` into consecutive groups.

use std::ops::Range;

use crate::error::{Error, Result};

/// Group boundaries `0 = k_0 < k_1 < ... < k_m = M`.
///
/// Group `j` (1-based) holds the cells `k_{j-1} + 1 ..= k_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupingScheme {
    breaks: Vec<usize>,
}

impl GroupingScheme {
    pub fn new(breaks: Vec<usize>) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::InvalidArgument("a grouping needs at least one group".into()));
        }
        if breaks[0] != 0 {
            return Err(Error::InvalidArgument(format!("grouping must start at 0, got {}", breaks[0])));
        }
        if let Some(w) = breaks.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "grouping breaks must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(GroupingScheme { breaks })
    }

    /// Groups of `size` consecutive cells. When `size` does not divide `M` the
    /// leftover cells join the final group.
    pub fn equal_size(m: usize, size: usize) -> Result<Self> {
        if size == 0 || size > m {
            return Err(Error::InvalidArgument(format!("group size {size} must lie in 1..={m}")));
        }
        let full = m / size;
        let mut breaks: Vec<usize> = (0..full).map(|j| j * size).collect();
        breaks.push(m);
        Self::new(breaks)
    }

    /// One cell per group.
    pub fn unit(m: usize) -> Result<Self> {
        Self::equal_size(m, 1)
    }

    /// All cells in a single group.
    pub fn single(m: usize) -> Result<Self> {
        Self::new(vec![0, m])
    }

    pub fn breaks(&self) -> &[usize] {
        &self.breaks
    }

    /// Total number of cells `M = k_m`.
    pub fn cell_count(&self) -> usize {
        *self.breaks.last().unwrap()
    }

    /// Number of groups `m`.
    pub fn group_count(&self) -> usize {
        self.breaks.len() - 1
    }

    /// Group sizes `k_j - k_{j-1}`.
    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.breaks.windows(2).map(|w| w[1] - w[0])
    }

    pub fn max_size(&self) -> usize {
        self.sizes().max().unwrap()
    }

    /// Zero-based cell index ranges of each group.
    pub fn ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.breaks.windows(2).map(|w| w[0]..w[1])
    }

    pub(crate) fn check_cells(&self, m: usize) -> Result<()> {
        if self.cell_count() != m {
            return Err(Error::InvalidArgument(format!(
                "grouping ends at {} but there are {m} cells",
                self.cell_count()
            )));
        }
        Ok(())
    }
}
