//! Correlation-matching accuracy: lags reconstructed from a spectrum estimate
//! by a discrete inverse transform, compared against the given correlation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::correlation::CorrelationSignal;
use crate::error::{Error, Result};
use crate::spectrum::SpectrumEstimate;

/// Below this modulus a lag is compared by absolute rather than relative error.
pub const NEAR_ZERO_LAG: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMode {
    Relative,
    Absolute,
}

impl ErrorMode {
    pub fn label(self) -> &'static str {
        match self {
            ErrorMode::Relative => "rel",
            ErrorMode::Absolute => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagMatch {
    pub lag: Vec<isize>,
    pub original: Complex64,
    pub reconstructed: Complex64,
    pub error: f64,
    pub mode: ErrorMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub per_lag: Vec<LagMatch>,
    /// Set when some grid count is below `2 γ_i - 1`, so reconstructed lags
    /// alias onto each other.
    pub aliasing_warning: bool,
}

impl MatchReport {
    pub fn max_error(&self) -> f64 {
        self.per_lag.iter().map(|l| l.error).fold(0.0, f64::max)
    }

    pub fn max_relative_error(&self) -> f64 {
        self.per_lag
            .iter()
            .filter(|l| l.mode == ErrorMode::Relative)
            .map(|l| l.error)
            .fold(0.0, f64::max)
    }
}

/// `r̂(t) = (1/Π C) Σ_m S(w_m) e^{-j w_m·t}` for every lag of `c`.
pub fn correlation_match(s: &SpectrumEstimate, c: &CorrelationSignal) -> Result<MatchReport> {
    let grid = s.grid();
    if grid.d() != c.d() {
        return Err(Error::DimensionMismatch {
            expected: c.d(),
            found: grid.d(),
        });
    }
    let aliasing_warning = grid.counts().iter().zip(c.gamma()).any(|(&n, &g)| n < 2 * g - 1);
    let points = grid.points();
    let norm = 1.0 / grid.len() as f64;
    let per_lag = c
        .lags()
        .into_iter()
        .zip(c.values())
        .map(|(lag, &original)| {
            // Per-dimension phase tables e^{-j 2π m t / C}.
            let tables: Vec<Vec<Complex64>> = grid
                .counts()
                .iter()
                .zip(&lag)
                .map(|(&n, &t)| {
                    (0..n)
                        .map(|m| Complex64::from_polar(1.0, -2.0 * PI * ((m as i64 * t as i64).rem_euclid(n as i64)) as f64 / n as f64))
                        .collect()
                })
                .collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for (point, &p) in points.iter().zip(s.power()) {
                let phase: Complex64 = point.iter().zip(&tables).map(|(&m, tab)| tab[m]).product();
                acc += phase * p;
            }
            let reconstructed = acc * norm;
            let diff = (reconstructed - original).norm();
            let (error, mode) = if original.norm() < NEAR_ZERO_LAG {
                (diff, ErrorMode::Absolute)
            } else {
                (diff / original.norm(), ErrorMode::Relative)
            };
            LagMatch {
                lag,
                original,
                reconstructed,
                error,
                mode,
            }
        })
        .collect();
    Ok(MatchReport {
        per_lag,
        aliasing_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{synth_correlation, SpectralComposition};
    use crate::spectrum::SpectralGridSpec;

    #[test]
    fn flat_spectrum_matches_white_noise() {
        let c = synth_correlation(
            &SpectralComposition {
                noise_var: 0.4,
                ..Default::default()
            },
            &[3, 2],
        )
        .unwrap();
        let grid = SpectralGridSpec::new(vec![8, 6]).unwrap();
        let s = SpectrumEstimate::new(grid.clone(), vec![0.4; grid.len()]).unwrap();
        let rep = correlation_match(&s, &c).unwrap();
        assert!(!rep.aliasing_warning);
        assert_eq!(rep.per_lag.len(), 15);
        for l in &rep.per_lag {
            assert!(l.error < 1e-15, "{l:?}");
            let zero = l.lag.iter().all(|&t| t == 0);
            assert_eq!(l.mode, if zero { ErrorMode::Relative } else { ErrorMode::Absolute });
        }
    }

    #[test]
    fn delta_spectrum_round_trips_a_peak() {
        let comp = SpectralComposition {
            peaks: vec![crate::correlation::Peak {
                freq: vec![0.25],
                power: 1.0,
            }],
            ..Default::default()
        };
        let c = synth_correlation(&comp, &[3]).unwrap();
        let grid = SpectralGridSpec::new(vec![8]).unwrap();
        let mut power = vec![1e-300; 8];
        power[2] = 8.0;
        let s = SpectrumEstimate::new(grid, power).unwrap();
        let rep = correlation_match(&s, &c).unwrap();
        assert!(rep.max_error() < 1e-15);
    }

    #[test]
    fn aliasing_is_flagged() {
        let c = synth_correlation(
            &SpectralComposition {
                noise_var: 1.0,
                ..Default::default()
            },
            &[3],
        )
        .unwrap();
        let s = SpectrumEstimate::new(SpectralGridSpec::new(vec![4]).unwrap(), vec![1.0; 4]).unwrap();
        assert!(correlation_match(&s, &c).unwrap().aliasing_warning);
    }

    #[test]
    fn dimension_mismatch() {
        let c = synth_correlation(&SpectralComposition { noise_var: 1.0, ..Default::default() }, &[2]).unwrap();
        let s = SpectrumEstimate::new(SpectralGridSpec::new(vec![4, 4]).unwrap(), vec![1.0; 16]).unwrap();
        assert!(matches!(correlation_match(&s, &c), Err(Error::DimensionMismatch { .. })));
    }
}
