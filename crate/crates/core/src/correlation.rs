//! Correlation signals `c(t)` over the lag box `Π [-(γ_i - 1), γ_i - 1]`,
//! their empirical estimation and closed-form synthesis, and assembly into
//! d-time Toeplitz correlation matrices.
//!
//! Lag and sample boxes are always enumerated with dimension 0 varying
//! fastest, the same order as flat indices under the identity nesting.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::index::{for_each_multi, multi_of_flat, strides, DimSpec, Nesting};
use crate::linalg::{cholesky, ComplexMatrix, HermitianMatrix};

/// Relative tolerance for the Hermitian check applied when loading files.
pub const LOAD_HERMITIAN_TOL: f64 = 1e-9;

/// A d-dimensional block of complex samples, dimension 0 fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalTensor {
    dims: Vec<usize>,
    samples: Vec<Complex64>,
}

impl SignalTensor {
    pub fn new(dims: Vec<usize>, samples: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidSpec(format!("invalid sample dims {dims:?}")));
        }
        let n: usize = dims.iter().product();
        if samples.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: samples.len(),
            });
        }
        Ok(Self { dims, samples })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }
}

/// The correlation lag function of a d-dimensional stationary field.
///
/// Stored lags are exactly Hermitian: `c(-t)` is bitwise `conj(c(t))` and
/// `c(0)` is real.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSignal {
    spec: DimSpec,
    values: Vec<Complex64>,
}

impl CorrelationSignal {
    /// Builds a signal from a lag function evaluated on the canonical half of
    /// the box; the other half is filled with conjugates.
    pub fn from_fn(gamma: Vec<usize>, mut f: impl FnMut(&[isize]) -> Complex64) -> Result<Self> {
        let spec = DimSpec::new(gamma)?;
        let extents = lag_extents(&spec);
        let len: usize = extents.iter().product();
        let mut values = vec![Complex64::new(0.0, 0.0); len];
        let mut flat = 0;
        // The box is point-symmetric about its centre, so flat index k mirrors to len-1-k.
        for_each_multi(&extents, |m| {
            let mirror = len - 1 - flat;
            if flat <= mirror {
                let t = to_lag(&spec, m);
                let v = f(&t);
                if flat == mirror {
                    values[flat] = Complex64::new(v.re, 0.0);
                } else {
                    values[flat] = v;
                    values[mirror] = v.conj();
                }
            }
            flat += 1;
        });
        let out = Self { spec, values };
        if !(out.zero_lag() >= 0.0) {
            return Err(Error::InvalidSpec("c(0) must be real and non-negative".into()));
        }
        Ok(out)
    }

    /// Builds a signal from values over the full lag box (dimension 0
    /// fastest), validating Hermitian symmetry to `rel_tol` relative to the
    /// largest lag modulus, then symmetrizing exactly.
    pub fn from_values(gamma: Vec<usize>, values: Vec<Complex64>, rel_tol: f64) -> Result<Self> {
        let spec = DimSpec::new(gamma)?;
        let extents = lag_extents(&spec);
        let len: usize = extents.iter().product();
        if values.len() != len {
            return Err(Error::SizeMismatch {
                expected: len,
                found: values.len(),
            });
        }
        let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = rel_tol * scale;
        let mut out = values.clone();
        let mut flat = 0;
        let mut bad = None;
        for_each_multi(&extents, |m| {
            let mirror = len - 1 - flat;
            if flat <= mirror && bad.is_none() {
                let a = values[flat];
                let b = values[mirror].conj();
                if (a - b).norm() > tol {
                    bad = Some(to_lag(&spec, m));
                }
                let avg = (a + b) * 0.5;
                if flat == mirror {
                    out[flat] = Complex64::new(avg.re, 0.0);
                } else {
                    out[flat] = avg;
                    out[mirror] = avg.conj();
                }
            }
            flat += 1;
        });
        if let Some(lag) = bad {
            return Err(Error::NotHermitian { lag });
        }
        let out = Self { spec, values: out };
        if !(out.zero_lag() >= 0.0) {
            return Err(Error::InvalidSpec("c(0) must be real and non-negative".into()));
        }
        Ok(out)
    }

    pub fn spec(&self) -> &DimSpec {
        &self.spec
    }

    pub fn gamma(&self) -> &[usize] {
        self.spec.gamma()
    }

    pub fn d(&self) -> usize {
        self.spec.d()
    }

    /// Lag values over the full box, dimension 0 fastest.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// All lag tuples in storage order.
    pub fn lags(&self) -> Vec<Vec<isize>> {
        let mut out = Vec::with_capacity(self.values.len());
        for_each_multi(&lag_extents(&self.spec), |m| out.push(to_lag(&self.spec, m)));
        out
    }

    /// `c(t)`, or `None` outside the stored box.
    pub fn get(&self, lag: &[isize]) -> Option<Complex64> {
        if lag.len() != self.d() {
            return None;
        }
        let mut flat = 0usize;
        let mut stride = 1usize;
        for (&t, &g) in lag.iter().zip(self.gamma()) {
            let off = g as isize - 1;
            if t < -off || t > off {
                return None;
            }
            flat += (t + off) as usize * stride;
            stride *= 2 * g - 1;
        }
        Some(self.values[flat])
    }

    pub fn zero_lag(&self) -> f64 {
        self.values[self.values.len() / 2].re
    }

    /// Multiplies every lag by `alpha > 0`.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            spec: self.spec.clone(),
            values: self.values.iter().map(|z| z * alpha).collect(),
        }
    }

    /// Adds `eps * c(0)` to the zero lag, i.e. `eps * c(0) * I` to the
    /// assembled matrix.
    pub fn with_diagonal_loading(&self, eps: f64) -> Self {
        let mut out = self.clone();
        let mid = out.values.len() / 2;
        out.values[mid].re += eps * self.zero_lag();
        out
    }

    /// Lag-wise sum of two signals with the same orders.
    pub fn add(&self, other: &CorrelationSignal) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: other.d(),
            });
        }
        Ok(Self {
            spec: self.spec.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }
}

fn lag_extents(spec: &DimSpec) -> Vec<usize> {
    spec.gamma().iter().map(|&g| 2 * g - 1).collect()
}

fn to_lag(spec: &DimSpec, m: &[usize]) -> Vec<isize> {
    m.iter()
        .zip(spec.gamma())
        .map(|(&i, &g)| i as isize - (g as isize - 1))
        .collect()
}

/// Biased correlation estimate `c(t) = (1/N) Σ_n x(n+t) conj(x(n))` over all
/// `n` with both `n` and `n + t` inside the sample box, `N = Π n_i`.
pub fn estimate_correlation(x: &SignalTensor, gamma: &[usize]) -> Result<CorrelationSignal> {
    if gamma.len() != x.dims.len() {
        return Err(Error::DimensionMismatch {
            expected: x.dims.len(),
            found: gamma.len(),
        });
    }
    for (dim, (&g, &n)) in gamma.iter().zip(&x.dims).enumerate() {
        if g > n {
            return Err(Error::InsufficientData {
                dim,
                order: g,
                samples: n,
            });
        }
    }
    let total: usize = x.dims.iter().product();
    let norm = 1.0 / total as f64;
    let sample_strides: Vec<usize> = x
        .dims
        .iter()
        .scan(1usize, |acc, &n| {
            let s = *acc;
            *acc *= n;
            Some(s)
        })
        .collect();
    CorrelationSignal::from_fn(gamma.to_vec(), |t| {
        // n ranges over max(0, -t_i) <= n_i < n_i - max(0, t_i)
        let lo: Vec<usize> = t.iter().map(|&ti| (-ti).max(0) as usize).collect();
        let extents: Vec<usize> = x
            .dims
            .iter()
            .zip(t)
            .zip(&lo)
            .map(|((&n, &ti), &l)| n - ti.max(0) as usize - l)
            .collect();
        let shift: isize = t
            .iter()
            .zip(&sample_strides)
            .map(|(&ti, &s)| ti * s as isize)
            .sum();
        let mut acc = Complex64::new(0.0, 0.0);
        for_each_multi(&extents, |m| {
            let base: usize = m
                .iter()
                .zip(&lo)
                .zip(&sample_strides)
                .map(|((&i, &l), &s)| (i + l) * s)
                .sum();
            let shifted = (base as isize + shift) as usize;
            acc += x.samples[shifted] * x.samples[base].conj();
        });
        acc * norm
    })
}

/// A spectral point mass at normalized frequency `freq` (cycles/sample).
#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub freq: Vec<f64>,
    pub power: f64,
}

/// Uniform unit-density spectral plane orthogonal to `axis`, located at
/// frequency `freq` along that axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub axis: usize,
    pub freq: f64,
    pub power: f64,
}

/// A spectrum made of point masses, coordinate planes and white noise.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralComposition {
    pub peaks: Vec<Peak>,
    pub planes: Vec<Plane>,
    pub noise_var: f64,
}

impl SpectralComposition {
    pub fn validate(&self, d: usize) -> Result<()> {
        let freq_ok = |f: f64| (0.0..1.0).contains(&f);
        for p in &self.peaks {
            if p.freq.len() != d {
                return Err(Error::InvalidComposition(format!(
                    "peak {:?} has {} components, expected {d}",
                    p.freq,
                    p.freq.len()
                )));
            }
            if !p.freq.iter().all(|&f| freq_ok(f)) {
                return Err(Error::InvalidComposition(format!("peak frequency {:?} outside [0, 1)", p.freq)));
            }
            if !(p.power > 0.0) || !p.power.is_finite() {
                return Err(Error::InvalidComposition(format!("peak power {} must be > 0", p.power)));
            }
        }
        for p in &self.planes {
            if p.axis >= d {
                return Err(Error::InvalidComposition(format!("plane axis {} >= {d}", p.axis)));
            }
            if !freq_ok(p.freq) {
                return Err(Error::InvalidComposition(format!("plane frequency {} outside [0, 1)", p.freq)));
            }
            if !(p.power > 0.0) || !p.power.is_finite() {
                return Err(Error::InvalidComposition(format!("plane power {} must be > 0", p.power)));
            }
        }
        if !(self.noise_var >= 0.0) || !self.noise_var.is_finite() {
            return Err(Error::InvalidComposition(format!("noise variance {} must be >= 0", self.noise_var)));
        }
        Ok(())
    }

    /// Adds the mirror component at `-f` (mod 1) for every peak and plane,
    /// giving a real-valued field.
    pub fn symmetrized(&self) -> Self {
        let mirror = |f: f64| if f == 0.0 { 0.0 } else { 1.0 - f };
        let mut out = self.clone();
        for p in &self.peaks {
            out.peaks.push(Peak {
                freq: p.freq.iter().map(|&f| mirror(f)).collect(),
                power: p.power,
            });
        }
        for p in &self.planes {
            out.planes.push(Plane {
                axis: p.axis,
                freq: mirror(p.freq),
                power: p.power,
            });
        }
        out
    }

    /// Concatenates the components of two compositions.
    pub fn union(&self, other: &SpectralComposition) -> Self {
        let mut out = self.clone();
        out.peaks.extend(other.peaks.iter().cloned());
        out.planes.extend(other.planes.iter().cloned());
        out.noise_var += other.noise_var;
        out
    }
}

/// Closed-form correlation of a spectral composition. A component at
/// frequency `f` contributes `P e^{-j2π f·t}`, so it appears at grid index
/// `f · C` in the spectral estimates of this crate.
pub fn synth_correlation(comp: &SpectralComposition, gamma: &[usize]) -> Result<CorrelationSignal> {
    comp.validate(gamma.len())?;
    CorrelationSignal::from_fn(gamma.to_vec(), |t| {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &comp.peaks {
            let phase: f64 = p.freq.iter().zip(t).map(|(&f, &ti)| f * ti as f64).sum();
            acc += Complex64::from_polar(p.power, -2.0 * PI * phase);
        }
        for p in &comp.planes {
            let on_axis = t.iter().enumerate().all(|(l, &ti)| l == p.axis || ti == 0);
            if on_axis {
                acc += Complex64::from_polar(p.power, -2.0 * PI * p.freq * t[p.axis] as f64);
            }
        }
        if t.iter().all(|&ti| ti == 0) {
            acc += comp.noise_var;
        }
        acc
    })
}

/// A d-time Toeplitz correlation matrix `R(c(γ))` under a given nesting.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockToeplitzMatrix {
    spec: DimSpec,
    nesting: Nesting,
    matrix: HermitianMatrix,
}

impl BlockToeplitzMatrix {
    pub fn spec(&self) -> &DimSpec {
        &self.spec
    }

    pub fn nesting(&self) -> &Nesting {
        &self.nesting
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }
}

/// `R[i][j] = c(m(i) - m(j))`, with `m` the per-dimension index of a flat
/// position under `nesting`.
pub fn assemble(c: &CorrelationSignal, nesting: &Nesting) -> Result<BlockToeplitzMatrix> {
    let spec = c.spec().clone();
    let st = strides(&spec, nesting)?;
    let q = spec.q();
    let d = spec.d();
    let positions: Vec<Vec<isize>> = (0..q)
        .map(|flat| {
            let slots = multi_of_flat(flat, &st)?;
            let mut by_dim = vec![0isize; d];
            for (slot, &i) in slots.iter().enumerate() {
                by_dim[nesting.dim_at(slot)] = i as isize;
            }
            Ok(by_dim)
        })
        .collect::<Result<_>>()?;
    let mut lag = vec![0isize; d];
    let m = ComplexMatrix::from_fn(q, q, |i, j| {
        for (l, slot) in lag.iter_mut().enumerate() {
            *slot = positions[i][l] - positions[j][l];
        }
        c.get(&lag).expect("lag inside the stored box")
    });
    // Entries already satisfy the Hermitian identity bitwise.
    let matrix = HermitianMatrix::symmetrize(&m)?;
    Ok(BlockToeplitzMatrix {
        spec,
        nesting: nesting.clone(),
        matrix,
    })
}

/// True iff the Cholesky factorization of `r` succeeds.
pub fn check_positive_definite(r: &BlockToeplitzMatrix) -> bool {
    cholesky(&r.matrix).is_ok()
}

/// Serializes a signal in the `ndcorr 1` text format.
pub fn write_ndcorr(c: &CorrelationSignal) -> String {
    let mut out = String::new();
    out.push_str("ndcorr 1\n");
    out.push_str("gamma:");
    for g in c.gamma() {
        let _ = write!(out, " {g}");
    }
    out.push('\n');
    for (lag, v) in c.lags().iter().zip(c.values()) {
        for t in lag {
            let _ = write!(out, "{t} ");
        }
        let _ = writeln!(out, "{} {}", fmt_float(v.re), fmt_float(v.im));
    }
    out
}

/// Shortest round-trip decimal, with negative zero printed as `0.0`.
pub fn fmt_float(x: f64) -> String {
    format!("{:?}", x + 0.0)
}

/// Parses the `ndcorr 1` text format, rejecting non-Hermitian content.
pub fn read_ndcorr(text: &str) -> Result<CorrelationSignal> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let fmt_err = |line: usize, message: &str| Error::Format {
        line: line + 1,
        message: message.to_string(),
    };
    let (n, header) = lines.next().ok_or_else(|| fmt_err(0, "empty input"))?;
    if header.trim() != "ndcorr 1" {
        return Err(fmt_err(n, "expected header `ndcorr 1`"));
    }
    let (n, gline) = lines.next().ok_or_else(|| fmt_err(1, "missing gamma line"))?;
    let rest = gline
        .trim()
        .strip_prefix("gamma:")
        .ok_or_else(|| fmt_err(n, "expected `gamma:` line"))?;
    let gamma: Vec<usize> = rest
        .split_whitespace()
        .map(|s| s.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| fmt_err(n, "gamma entries must be positive integers"))?;
    let spec = DimSpec::new(gamma.clone()).map_err(|e| fmt_err(n, &e.to_string()))?;
    let d = spec.d();
    let extents = lag_extents(&spec);
    let mut expected = Vec::new();
    for_each_multi(&extents, |m| expected.push(to_lag(&spec, m)));

    let mut values = Vec::with_capacity(expected.len());
    for want in &expected {
        let (n, line) = lines
            .next()
            .ok_or_else(|| fmt_err(text.lines().count(), &format!("missing line for lag {want:?}")))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != d + 2 {
            return Err(fmt_err(n, &format!("expected {} fields", d + 2)));
        }
        let lag: Vec<isize> = fields[..d]
            .iter()
            .map(|s| s.parse::<isize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| fmt_err(n, "lag entries must be integers"))?;
        if &lag != want {
            return Err(fmt_err(n, &format!("expected lag {want:?}, found {lag:?}")));
        }
        let re: f64 = fields[d].parse().map_err(|_| fmt_err(n, "bad real part"))?;
        let im: f64 = fields[d + 1].parse().map_err(|_| fmt_err(n, "bad imaginary part"))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(fmt_err(n, "non-finite value"));
        }
        values.push(Complex64::new(re, im));
    }
    if let Some((n, _)) = lines.next() {
        return Err(fmt_err(n, "trailing content after the lag box"));
    }
    CorrelationSignal::from_values(gamma, values, LOAD_HERMITIAN_TOL)
}
