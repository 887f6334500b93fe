//! Capon (minimum variance) baseline estimator.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::{multi_of_flat, strides, DimSpec, Nesting};
use crate::linalg::HermitianMatrix;
use crate::spectrum::{SpectralGridSpec, SpectrumEstimate};

/// `S(w) = 1 / (a(w)^H R^{-1} a(w))` with the unit-modulus steering vector
/// `a(w)[i] = e^{-j w·m(i)}`, `m(i)` the per-dimension position of flat
/// index `i` in the sample stacking (identity nesting).
pub fn capon_spectrum(r_inv: &HermitianMatrix, spec: &DimSpec, grid: &SpectralGridSpec) -> Result<SpectrumEstimate> {
    if grid.d() != spec.d() {
        return Err(Error::DimensionMismatch {
            expected: spec.d(),
            found: grid.d(),
        });
    }
    let q = spec.q();
    if r_inv.n() != q {
        return Err(Error::SizeMismatch {
            expected: q,
            found: r_inv.n(),
        });
    }
    let st = strides(spec, &Nesting::identity(spec.d()))?;
    let positions: Vec<Vec<usize>> = (0..q).map(|i| multi_of_flat(i, &st)).collect::<Result<_>>()?;
    let power = grid
        .points()
        .par_iter()
        .map(|point| {
            let steering: Vec<Complex64> = positions
                .iter()
                .map(|m| {
                    let phase: f64 = m
                        .iter()
                        .zip(point)
                        .enumerate()
                        .map(|(dim, (&mi, &pi))| grid.angular(dim, pi) * mi as f64)
                        .sum();
                    Complex64::from_polar(1.0, -phase)
                })
                .collect();
            let mut quad = 0.0;
            for i in 0..q {
                let mut row = Complex64::new(0.0, 0.0);
                for j in 0..q {
                    row += r_inv[(i, j)] * steering[j];
                }
                quad += (steering[i].conj() * row).re;
            }
            1.0 / quad
        })
        .collect();
    SpectrumEstimate::new(grid.clone(), power)
}
