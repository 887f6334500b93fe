//! Spectral grids and power spectrum estimates.

use crate::error::{Error, Result};
use crate::index::for_each_multi;

/// A uniform grid over `[0, 1)^d` in normalized frequency: point `m_i` of
/// dimension `i` sits at `m_i / C_i` cycles/sample, or `2π m_i / C_i` rad.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpectralGridSpec {
    counts: Vec<usize>,
}

impl SpectralGridSpec {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() || counts.contains(&0) {
            return Err(Error::InvalidSpec(format!("grid counts {counts:?} must all be >= 1")));
        }
        Ok(Self { counts })
    }

    /// The same count along each of `d` dimensions.
    pub fn uniform(d: usize, count: usize) -> Result<Self> {
        Self::new(vec![count; d])
    }

    pub fn d(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn frequency(&self, dim: usize, m: usize) -> f64 {
        m as f64 / self.counts[dim] as f64
    }

    pub fn angular(&self, dim: usize, m: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency(dim, m)
    }

    /// Flat position of a grid multi-index (dimension 0 fastest).
    pub fn flat(&self, multi: &[usize]) -> usize {
        let mut flat = 0;
        let mut stride = 1;
        for (&m, &c) in multi.iter().zip(&self.counts) {
            flat += m * stride;
            stride *= c;
        }
        flat
    }

    pub fn multi(&self, mut flat: usize) -> Vec<usize> {
        self.counts
            .iter()
            .map(|&c| {
                let m = flat % c;
                flat /= c;
                m
            })
            .collect()
    }

    /// Every grid multi-index in flat order.
    pub fn points(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.len());
        for_each_multi(&self.counts, |m| out.push(m.to_vec()));
        out
    }
}

/// Strictly positive power values on every point of a spectral grid, stored
/// in flat grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    grid: SpectralGridSpec,
    power: Vec<f64>,
}

impl SpectrumEstimate {
    /// Rejects wrong lengths and any value that is not finite and positive.
    pub fn new(grid: SpectralGridSpec, power: Vec<f64>) -> Result<Self> {
        if power.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                found: power.len(),
            });
        }
        if let Some(pos) = power.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InvalidSpec(format!(
                "power at grid point {:?} is {}, expected a finite positive value",
                grid.multi(pos),
                power[pos]
            )));
        }
        Ok(Self { grid, power })
    }

    pub fn grid(&self) -> &SpectralGridSpec {
        &self.grid
    }

    pub fn power(&self) -> &[f64] {
        &self.power
    }

    pub fn at(&self, multi: &[usize]) -> f64 {
        self.power[self.grid.flat(multi)]
    }

    pub fn argmax(&self) -> Vec<usize> {
        let (pos, _) = self
            .power
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best });
        self.grid.multi(pos)
    }
}
