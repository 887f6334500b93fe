//! Analytic operation counts for the sequential estimator and the Capon
//! baseline.
//!
//! Stage `t = d - x + 1` of the sequential estimator costs
//! `[3/2 q_{t-1}^3 + q_{t-1} q_t] · Π_{f=0}^{d-t} C_{d-f-1}` operations, with
//! `q_t = Π_{i<t} γ_i`; Capon costs `q_d^2 · Π_f C_f`. Stage-1 inversion of
//! the correlation matrix is excluded from both.

use crate::error::{Error, Result};
use crate::index::DimSpec;
use crate::spectrum::SpectralGridSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct StageCost {
    /// Stage label `t`, running from `d` (first processed) down to 1.
    pub stage: usize,
    pub operations: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequentialCost {
    pub per_stage: Vec<StageCost>,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub gamma: Vec<usize>,
    pub counts: Vec<usize>,
    pub per_stage: Vec<StageCost>,
    pub sequential_total: f64,
    pub capon_total: f64,
}

fn check(spec: &DimSpec, grid: &SpectralGridSpec) -> Result<()> {
    if spec.d() != grid.d() {
        return Err(Error::DimensionMismatch {
            expected: spec.d(),
            found: grid.d(),
        });
    }
    Ok(())
}

fn block_sizes(spec: &DimSpec) -> Vec<f64> {
    let mut q = vec![1.0];
    for &g in spec.gamma() {
        q.push(q.last().unwrap() * g as f64);
    }
    q
}

pub fn sequential_cost(spec: &DimSpec, grid: &SpectralGridSpec) -> Result<SequentialCost> {
    check(spec, grid)?;
    let d = spec.d();
    let q = block_sizes(spec);
    let counts = grid.counts();
    let per_stage: Vec<StageCost> = (1..=d)
        .rev()
        .map(|t| {
            let points: f64 = counts[t - 1..].iter().map(|&c| c as f64).product();
            let qa = q[t - 1];
            StageCost {
                stage: t,
                operations: (1.5 * qa * qa * qa + qa * q[t]) * points,
            }
        })
        .collect();
    let total = per_stage.iter().map(|s| s.operations).sum();
    Ok(SequentialCost { per_stage, total })
}

pub fn capon_cost(spec: &DimSpec, grid: &SpectralGridSpec) -> Result<f64> {
    check(spec, grid)?;
    let qd = spec.q() as f64;
    Ok(qd * qd * grid.counts().iter().map(|&c| c as f64).product::<f64>())
}

pub fn cost_report(spec: &DimSpec, grid: &SpectralGridSpec) -> Result<CostReport> {
    let seq = sequential_cost(spec, grid)?;
    Ok(CostReport {
        gamma: spec.gamma().to_vec(),
        counts: grid.counts().to_vec(),
        per_stage: seq.per_stage,
        sequential_total: seq.total,
        capon_total: capon_cost(spec, grid)?,
    })
}
