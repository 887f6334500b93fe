//! Sequential multidimensional spectral estimation.
//!
//! Starting from the inverse of the d-time Toeplitz correlation matrix
//! (identity nesting, dimension `d-1` outermost), each stage takes the first
//! block column `G(k)` along the outermost remaining dimension, forms the
//! block Fourier sum `M(w) = Σ_k G(k) e^{jkw}` and replaces the block field by
//! `G'(w) = M(w) G(0)^{-1} M(w)^H`. The leading block column of `G'` feeds the
//! next stage. After `d` stages the field is scalar; its reciprocal is the
//! power spectrum.
//!
//! For `d = 1` this is exactly the autoregressive (maximum entropy) spectrum
//! `ρ / |P(w)|²` built from the Levinson prediction polynomial, which
//! [`levinson_1d`] and [`ar_spectrum_1d`] compute independently.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::correlation::{assemble, CorrelationSignal};
use crate::error::{Error, Result};
use crate::index::{apply_walking, walking_map, DimSpec, Nesting};
use crate::linalg::{invert_pd, sandwich, ComplexMatrix, HermitianMatrix};
use crate::spectrum::{SpectralGridSpec, SpectrumEstimate};

/// Relative bound on the imaginary part of the final scalar field.
pub const FINAL_IMAG_TOL: f64 = 1e-10;

/// Normalized prediction polynomial of a 1D Toeplitz system
/// `R p = ρ e_0`, `p_0 = 1`, with its reflection coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LevinsonResult {
    pub p: Vec<Complex64>,
    pub rho: f64,
    pub sigmas: Vec<Complex64>,
}

/// Levinson recursion for `R[i][j] = c(i - j)`.
///
/// Each order extends `p` by `σ` times the reversed conjugate of itself;
/// `σ = -Δ/ρ` where `Δ` is the residual of the extended system in its new
/// last row, and `ρ` shrinks by `1 - |σ|²`.
pub fn levinson_1d(c: &CorrelationSignal) -> Result<LevinsonResult> {
    if c.d() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: c.d(),
        });
    }
    let order = c.gamma()[0];
    let lag = |t: isize| c.get(&[t]).expect("lag inside the stored box");
    let mut rho = c.zero_lag();
    if !(rho > 0.0) {
        return Err(Error::not_pd(0).with_context("c(0) must be positive"));
    }
    let mut p = vec![Complex64::new(1.0, 0.0)];
    let mut sigmas = Vec::with_capacity(order.saturating_sub(1));
    for n in 1..order {
        let delta: Complex64 = (0..n).map(|k| lag((n - k) as isize) * p[k]).sum();
        let sigma = -delta / rho;
        if sigma.norm() >= 1.0 {
            return Err(Error::not_pd(n).with_context(format!("reflection coefficient |σ_{n}| >= 1")));
        }
        let mut next = p.clone();
        next.push(Complex64::new(0.0, 0.0));
        for k in 1..=n {
            next[k] += sigma * p[n - k].conj();
        }
        p = next;
        rho *= 1.0 - sigma.norm_sqr();
        sigmas.push(sigma);
    }
    Ok(LevinsonResult { p, rho, sigmas })
}

/// `S(w) = ρ / |Σ_k p_k e^{jwk}|²` on a 1D grid.
pub fn ar_spectrum_1d(res: &LevinsonResult, grid: &SpectralGridSpec) -> Result<SpectrumEstimate> {
    if grid.d() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: grid.d(),
        });
    }
    let power = (0..grid.counts()[0])
        .map(|m| {
            let w = grid.angular(0, m);
            let poly: Complex64 = res
                .p
                .iter()
                .enumerate()
                .map(|(k, pk)| pk * Complex64::from_polar(1.0, w * k as f64))
                .sum();
            res.rho / poly.norm_sqr()
        })
        .collect();
    SpectrumEstimate::new(grid.clone(), power)
}

/// The block field carried between stages.
///
/// At stage `x` (1-based) the field describes dimension `d - x`: every point
/// of the already-processed frequency grid (dimensions `d-1` down to
/// `d-x+1`, stored in flat grid order with the lowest dimension fastest)
/// holds `γ_{d-x}` blocks `G(k)` of size `q_{d-x} x q_{d-x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageField {
    spec: DimSpec,
    stage: usize,
    points: Vec<Vec<ComplexMatrix>>,
}

impl StageField {
    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn spec(&self) -> &DimSpec {
        &self.spec
    }

    /// Dimension whose frequency the next update introduces.
    pub fn dimension(&self) -> usize {
        self.spec.d() - self.stage
    }

    /// Block size `h = q_{d-x}`.
    pub fn block_size(&self) -> usize {
        self.spec.gamma()[..self.dimension()].iter().product()
    }

    /// Already-processed dimension labels, from `d-1` downwards.
    pub fn processed(&self) -> Vec<usize> {
        ((self.dimension() + 1)..self.spec.d()).rev().collect()
    }

    pub fn points(&self) -> &[Vec<ComplexMatrix>] {
        &self.points
    }
}

/// Stage-1 field: the blocks `G(k) = R^{-1}[k h .. (k+1) h][0 .. h]` of the
/// first block column along the outermost dimension, `h = q_{d-1}`.
pub fn init_stage(r_inv: &HermitianMatrix, spec: &DimSpec) -> Result<StageField> {
    let q = spec.q();
    if r_inv.n() != q {
        return Err(Error::SizeMismatch {
            expected: q,
            found: r_inv.n(),
        });
    }
    let d = spec.d();
    let h = q / spec.gamma()[d - 1];
    let blocks = (0..spec.gamma()[d - 1])
        .map(|k| r_inv.matrix().block(k * h, 0, h, h))
        .collect();
    Ok(StageField {
        spec: spec.clone(),
        stage: 1,
        points: vec![blocks],
    })
}

/// Stage-1 field obtained by first walking `R^{-1}` to the nesting that puts
/// dimension `d-1` in the fastest slot and reading the blocks with unit
/// stride there. Agrees entry for entry with [`init_stage`].
pub fn init_stage_walked(r_inv: &HermitianMatrix, spec: &DimSpec) -> Result<StageField> {
    let q = spec.q();
    if r_inv.n() != q {
        return Err(Error::SizeMismatch {
            expected: q,
            found: r_inv.n(),
        });
    }
    let d = spec.d();
    let outer = d - 1;
    let mut omega = vec![outer];
    omega.extend(0..outer);
    let target = Nesting::new(omega)?;
    let perm = walking_map(spec, &Nesting::identity(d), &target)?;
    let walked = apply_walking(r_inv.matrix(), &perm)?;
    let g = spec.gamma()[outer];
    let h = q / g;
    let blocks = (0..g)
        .map(|k| ComplexMatrix::from_fn(h, h, |a, b| walked[(k + g * a, g * b)]))
        .collect();
    Ok(StageField {
        spec: spec.clone(),
        stage: 1,
        points: vec![blocks],
    })
}

fn block_sum(blocks: &[ComplexMatrix], w: f64) -> ComplexMatrix {
    let h = blocks[0].rows();
    let mut acc = ComplexMatrix::zeros(h, h);
    for (k, g) in blocks.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, w * k as f64);
        for i in 0..h {
            for j in 0..h {
                acc[(i, j)] += g[(i, j)] * phase;
            }
        }
    }
    acc
}

/// `M = Σ_k G(k) e^{j k 2π m / count}` at every processed point of `field`.
pub fn fourier_block_sum(field: &StageField, m: usize, count: usize) -> Vec<ComplexMatrix> {
    let w = 2.0 * PI * m as f64 / count as f64;
    field.points.iter().map(|blocks| block_sum(blocks, w)).collect()
}

fn check_grid(field: &StageField, grid: &SpectralGridSpec) -> Result<()> {
    if grid.d() != field.spec.d() {
        return Err(Error::DimensionMismatch {
            expected: field.spec.d(),
            found: grid.d(),
        });
    }
    Ok(())
}

/// Describes processed point `index` of `field` as a frequency tuple.
fn describe_point(field: &StageField, grid: &SpectralGridSpec, index: usize) -> String {
    let mut rest = index;
    let mut parts = Vec::new();
    for dim in (field.dimension() + 1)..field.spec.d() {
        let c = grid.counts()[dim];
        parts.push(format!("f_{dim}={}", grid.frequency(dim, rest % c)));
        rest /= c;
    }
    parts.reverse();
    if parts.is_empty() {
        format!("stage {}", field.stage)
    } else {
        format!("stage {} at {}", field.stage, parts.join(", "))
    }
}

/// Runs steps 2 and 3 of a stage at every processed point and every grid
/// index of the current dimension. The outer vector follows the processed
/// points, the inner one the new frequency index.
fn stage_products(field: &StageField, grid: &SpectralGridSpec) -> Result<Vec<Vec<HermitianMatrix>>> {
    check_grid(field, grid)?;
    let count = grid.counts()[field.dimension()];
    field
        .points
        .par_iter()
        .enumerate()
        .map(|(index, blocks)| {
            let g0 = HermitianMatrix::symmetrize(&blocks[0])?;
            let g0_inv = invert_pd(&g0).map_err(|e| e.with_context(describe_point(field, grid, index)))?;
            (0..count)
                .map(|m| {
                    let w = 2.0 * PI * m as f64 / count as f64;
                    sandwich(&block_sum(blocks, w), &g0_inv)
                })
                .collect()
        })
        .collect()
}

/// One full stage for `x < d`: forms `G'` at every new grid point and
/// extracts the next field's blocks from its first block column along
/// stride `q_{d-x-1}`.
pub fn stage_update(field: &StageField, grid: &SpectralGridSpec) -> Result<StageField> {
    if field.dimension() == 0 {
        return Err(Error::InvalidSpec(
            "stage_update needs a remaining dimension; use final_stage at the last stage".into(),
        ));
    }
    let products = stage_products(field, grid)?;
    let next_dim = field.dimension() - 1;
    let g = field.spec.gamma()[next_dim];
    let h = field.block_size() / g;
    let points = products
        .into_iter()
        .flatten()
        .map(|gp| {
            (0..g)
                .map(|k| gp.matrix().block(k * h, 0, h, h))
                .collect()
        })
        .collect();
    Ok(StageField {
        spec: field.spec.clone(),
        stage: field.stage + 1,
        points,
    })
}

/// The last stage (`x = d`): returns the scalar spectral inverse `G'(w)` at
/// every point of the full grid in flat order.
pub fn final_stage(field: &StageField, grid: &SpectralGridSpec) -> Result<Vec<Complex64>> {
    if field.dimension() != 0 {
        return Err(Error::InvalidSpec(format!(
            "final_stage called at stage {} of {}",
            field.stage,
            field.spec.d()
        )));
    }
    Ok(stage_products(field, grid)?
        .into_iter()
        .flatten()
        .map(|gp| gp[(0, 0)])
        .collect())
}

/// Options for [`SequentialEstimator`].
#[derive(Debug, Clone, Default)]
pub struct SequentialEstimator {
    cross_check_walking: bool,
}

impl SequentialEstimator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Also builds the first stage through an explicit walking permutation
    /// and fails if the two constructions disagree.
    pub fn cross_check_walking(mut self, on: bool) -> Self {
        self.cross_check_walking = on;
        self
    }

    pub fn estimate(&self, c: &CorrelationSignal, grid: &SpectralGridSpec) -> Result<SpectrumEstimate> {
        let spec = c.spec();
        if grid.d() != spec.d() {
            return Err(Error::DimensionMismatch {
                expected: spec.d(),
                found: grid.d(),
            });
        }
        let r = assemble(c, &Nesting::identity(spec.d()))?;
        let r_inv = invert_pd(r.matrix()).map_err(|e| e.with_context("correlation matrix"))?;
        let mut field = init_stage(&r_inv, spec)?;
        if self.cross_check_walking {
            let walked = init_stage_walked(&r_inv, spec)?;
            if walked != field {
                return Err(Error::CrossCheck("stage-1 blocks differ between direct and walked extraction".into()));
            }
        }
        while field.dimension() > 0 {
            field = stage_update(&field, grid)?;
        }
        let inverse = final_stage(&field, grid)?;
        let mut power = Vec::with_capacity(inverse.len());
        for (pos, g) in inverse.iter().enumerate() {
            let value = 1.0 / g.re;
            if !(g.re > 0.0) || !value.is_finite() || g.im.abs() > FINAL_IMAG_TOL * g.re.abs() {
                return Err(Error::not_pd(0).with_context(format!(
                    "spectral inverse {g} at grid point {:?}",
                    grid.multi(pos)
                )));
            }
            power.push(value);
        }
        SpectrumEstimate::new(grid.clone(), power)
    }
}

/// Sequential spectrum estimate `S(w) = 1 / G'_final(w)` with default options.
pub fn sequential_spectrum(c: &CorrelationSignal, grid: &SpectralGridSpec) -> Result<SpectrumEstimate> {
    SequentialEstimator::new().estimate(c, grid)
}
