#![allow(dead_code)]

use ndspec::{estimate_correlation, synth_correlation, ComplexMatrix, CorrelationSignal, Peak, SignalTensor, SpectralComposition};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Random line spectrum plus white noise; positive definite for every order.
pub fn random_composition(rng: &mut ChaCha8Rng, d: usize, peaks: usize) -> SpectralComposition {
    SpectralComposition {
        peaks: (0..peaks)
            .map(|_| Peak {
                freq: (0..d).map(|_| rng.gen_range(0.0..1.0)).collect(),
                power: rng.gen_range(0.2..2.0),
            })
            .collect(),
        planes: vec![],
        noise_var: rng.gen_range(0.05..0.5),
    }
}

pub fn random_pd_correlation(rng: &mut ChaCha8Rng, gamma: &[usize]) -> CorrelationSignal {
    let peaks = rng.gen_range(1..4);
    synth_correlation(&random_composition(rng, gamma.len(), peaks), gamma).unwrap()
}

/// Biased estimate from a seeded complex Gaussian-ish field.
pub fn estimated_correlation(rng: &mut ChaCha8Rng, dims: &[usize], gamma: &[usize]) -> CorrelationSignal {
    let n: usize = dims.iter().product();
    let samples = (0..n)
        .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    estimate_correlation(&SignalTensor::new(dims.to_vec(), samples).unwrap(), gamma).unwrap()
}

/// Product correlation c(t) = Π_i c_i(t_i).
pub fn separable(factors: &[CorrelationSignal]) -> CorrelationSignal {
    let gamma: Vec<usize> = factors.iter().map(|f| f.gamma()[0]).collect();
    CorrelationSignal::from_fn(gamma, |t| {
        factors
            .iter()
            .zip(t)
            .map(|(f, &ti)| f.get(&[ti]).unwrap())
            .product()
    })
    .unwrap()
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn gauss_inverse(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut inv: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap()).unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for i in 0..n {
            if i != col {
                let f = a[i][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[i][j] -= f * ac;
                    inv[i][j] -= f * ic;
                }
            }
        }
    }
    ComplexMatrix::from_rows(&inv).unwrap()
}

pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut det = c64(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap()).unwrap();
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for i in (col + 1)..n {
            let f = a[i][col] / p;
            for j in col..n {
                let v = a[col][j];
                a[i][j] -= f * v;
            }
        }
    }
    det
}

/// 1D AR spectrum from a dense solve of the Toeplitz normal equations:
/// S(w) = 1 / (a_0 |Σ_k (a_k / a_0) e^{jwk}|² ... ) with a = R^{-1} e_0.
pub fn brute_ar_spectrum(c: &CorrelationSignal, count: usize) -> Vec<f64> {
    let g = c.gamma()[0];
    let r = ComplexMatrix::from_fn(g, g, |i, j| c.get(&[i as isize - j as isize]).unwrap());
    let inv = gauss_inverse(&r);
    let a: Vec<Complex64> = (0..g).map(|k| inv[(k, 0)]).collect();
    let rho = 1.0 / a[0].re;
    (0..count)
        .map(|m| {
            let w = 2.0 * std::f64::consts::PI * m as f64 / count as f64;
            let poly: Complex64 = a.iter().enumerate().map(|(k, ak)| ak * rho * Complex64::from_polar(1.0, w * k as f64)).sum();
            rho / poly.norm_sqr()
        })
        .collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// A A^H + n I: comfortably positive definite.
pub fn random_pd_matrix(rng: &mut ChaCha8Rng, n: usize) -> ndspec::HermitianMatrix {
    let a = random_matrix(rng, n);
    let mut h = a.matmul(&a.adjoint()).unwrap();
    for i in 0..n {
        h[(i, i)] += c64(n as f64 * 0.1, 0.0);
    }
    ndspec::HermitianMatrix::symmetrize(&h).unwrap()
}
