//! Built-in kernel densities for discrete smoothing of cell counts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability densities with bounded support used as smoothing kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// Uniform density on `(-1/2, 1/2]`.
    Box,
    /// `1 - |x|` on `[-1, 1]`.
    Triangular,
    /// `3/4 (1 - x^2)` on `[-1, 1]`.
    Epanechnikov,
}

impl Kernel {
    pub const ALL: [Kernel; 3] = [Kernel::Box, Kernel::Triangular, Kernel::Epanechnikov];

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Kernel::Box => {
                if x > -0.5 && x <= 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            Kernel::Triangular => (1.0 - x.abs()).max(0.0),
            Kernel::Epanechnikov => {
                if x.abs() <= 1.0 {
                    0.75 * (1.0 - x * x)
                } else {
                    0.0
                }
            }
        }
    }

    /// Half-width of the support.
    pub fn support_radius(self) -> f64 {
        match self {
            Kernel::Box => 0.5,
            Kernel::Triangular | Kernel::Epanechnikov => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Box => "box",
            Kernel::Triangular => "triangular",
            Kernel::Epanechnikov => "epanechnikov",
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A kernel together with an integer bandwidth `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    kernel: Kernel,
    bandwidth: usize,
}

impl KernelSpec {
    pub fn new(kernel: Kernel, bandwidth: usize) -> Result<Self> {
        if bandwidth == 0 {
            return Err(Error::InvalidArgument("kernel bandwidth must be at least 1".into()));
        }
        Ok(KernelSpec { kernel, bandwidth })
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Largest `|l|` for which `w(l / k)` can be nonzero.
    pub(crate) fn reach(&self) -> usize {
        (self.kernel.support_radius() * self.bandwidth as f64).ceil() as usize
    }

    /// Weights `w(l / k)` for offsets `l = -reach ..= reach`, indexed by
    /// `l + reach`.
    pub(crate) fn offset_weights(&self) -> Vec<f64> {
        let reach = self.reach() as i64;
        let k = self.bandwidth as f64;
        (-reach..=reach).map(|l| self.kernel.eval(l as f64 / k)).collect()
    }

    /// Riemann sum `sum_l (1/k) w(l/k)` over all integers `l`; tends to 1 as
    /// `k` grows.
    pub fn riemann_mass(&self) -> f64 {
        let k = self.bandwidth as f64;
        self.offset_weights().iter().map(|w| w / k).sum()
    }
}
