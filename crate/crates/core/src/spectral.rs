//! Fourier analysis on `C_n`.
//!
//! Characters are `chi^(k)_j = exp(2 pi i k j / n)` and coefficients are
//! averages, `x^_k = <conj(chi^(k)) x>`, so Parseval reads
//! `sum_k |x^_k|^2 = <x^2>`. Eigenvalues of the graph Laplacian are
//! `mu_k = 2 (1 - cos(2 pi k / n))`; the first nonzero one is `2 lambda_n`.
//!
//! Closed forms are evaluated through `sin^2` (`1 - cos 2u = 2 sin^2 u`),
//! which avoids cancellation when `n` is large.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::cycle::{
    average, compensated_sum, d_quantity, dirichlet, mean_square, norm2, sup_norm, variance,
    CycleFunction,
};
use crate::error::{Error, Result};

/// Default residual band for orthogonality preconditions.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;

/// Sizes at or below this use the direct `O(n^2)` transform.
pub const DIRECT_DFT_MAX: usize = 64;

/// `(cos, sin)` of `2 pi m / n`, with `m` reduced modulo `n` first so large
/// products `k j` keep full accuracy.
pub fn unit_root(m: usize, n: usize) -> (f64, f64) {
    let m = m % n;
    let angle = 2.0 * PI * m as f64 / n as f64;
    (angle.cos(), angle.sin())
}

/// Fourier coefficients `x^_k`, `k = 0..n-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    coefficients: Vec<Complex64>,
}

impl SpectralDecomposition {
    pub fn from_coefficients(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::TooFewSites(coefficients.len()));
        }
        Ok(Self { coefficients })
    }

    pub fn n(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    /// `sum_k |x^_k|^2`, equal to `<x^2>` by Parseval.
    pub fn parseval_total(&self) -> f64 {
        compensated_sum(self.coefficients.iter().map(|c| c.norm_sqr()))
    }

    /// `sum_k mu_k |x^_k|^2`, equal to `D(x)`.
    pub fn energy(&self) -> f64 {
        let n = self.n();
        compensated_sum(
            self.coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| mu_unchecked(k, n) * c.norm_sqr()),
        )
    }

    /// Fourier inversion `x = sum_k x^_k chi^(k)`; imaginary parts are dropped.
    pub fn inverse(&self) -> CycleFunction {
        let n = self.n();
        let values = if n <= DIRECT_DFT_MAX {
            (0..n)
                .map(|j| {
                    compensated_sum(self.coefficients.iter().enumerate().map(|(k, c)| {
                        let (cs, sn) = unit_root(k * j, n);
                        c.re * cs - c.im * sn
                    }))
                })
                .collect()
        } else {
            let mut buf = self.coefficients.clone();
            FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
            buf.into_iter().map(|c| c.re).collect()
        };
        CycleFunction::new(values).expect("inverse transform of finite data is finite")
    }
}

/// Direct `O(n^2)` transform, the reference implementation.
pub fn dft_direct(x: &CycleFunction) -> SpectralDecomposition {
    let n = x.n();
    let table: Vec<(f64, f64)> = (0..n).map(|m| unit_root(m, n)).collect();
    let coefficients = (0..n)
        .map(|k| {
            let re = compensated_sum(x.iter().enumerate().map(|(j, v)| v * table[(k * j) % n].0));
            let im = compensated_sum(x.iter().enumerate().map(|(j, v)| -v * table[(k * j) % n].1));
            Complex64::new(re / n as f64, im / n as f64)
        })
        .collect();
    SpectralDecomposition { coefficients }
}

/// `O(n log n)` transform.
pub fn dft_fast(x: &CycleFunction) -> SpectralDecomposition {
    let n = x.n();
    let mut buf: Vec<Complex64> = x.iter().map(|v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    SpectralDecomposition { coefficients: buf }
}

/// Fourier coefficients of `x`; direct for `n <= 64`, FFT above.
pub fn dft(x: &CycleFunction) -> SpectralDecomposition {
    if x.n() <= DIRECT_DFT_MAX {
        dft_direct(x)
    } else {
        dft_fast(x)
    }
}

fn mu_unchecked(k: usize, n: usize) -> f64 {
    // mu_k = mu_{n-k}; folding keeps the sine argument in [0, pi/2]
    let k = k % n;
    let k = k.min(n - k);
    let s = (PI * k as f64 / n as f64).sin();
    4.0 * s * s
}

/// Laplacian eigenvalue `mu_k = 2 (1 - cos(2 pi k / n))`.
pub fn mu(k: usize, n: usize) -> Result<f64> {
    if k >= n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    Ok(mu_unchecked(k, n))
}

/// Spectral gap `lambda_n = 1 - cos(2 pi / n)`; equals `mu(1, n) / 2` exactly.
pub fn lambda(n: usize) -> f64 {
    mu_unchecked(1, n) / 2.0
}

/// Outcome of the iterative gap computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub value: f64,
    pub iterations: usize,
    /// Relative change of the Rayleigh quotient in the last step.
    pub last_change: f64,
}

/// Solves `L y = b` on `C_n` for `b` orthogonal to constants, returning the
/// mean-zero solution. `O(n)`: the differences `d_j = y_{j+1} - y_j` satisfy
/// `d_j = d_{j-1} - b_j`, and periodicity fixes `d_0`.
fn solve_laplacian(b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut partial = Vec::with_capacity(n);
    let mut acc = 0.0;
    partial.push(0.0);
    for &bj in &b[1..] {
        acc += bj;
        partial.push(acc);
    }
    let d0 = compensated_sum(partial.iter().copied()) / n as f64;
    let mut y = Vec::with_capacity(n);
    let mut cur = 0.0;
    for s in &partial {
        y.push(cur);
        cur += d0 - s;
    }
    let m = compensated_sum(y.iter().copied()) / n as f64;
    y.iter_mut().for_each(|v| *v -= m);
    y
}

/// Spectral gap `inf E_n(f,f) / Var(f)` by deflated inverse iteration: the
/// iterate is kept orthogonal to constants and multiplied by `L^{-1}` until
/// the Rayleigh quotient `E_n / Var` settles.
pub fn spectral_gap_numeric(n: usize) -> Result<GapEstimate> {
    const MAX_ITERS: usize = 500;
    const REL_TOL: f64 = 1e-14;
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + n as u64);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut prev = f64::INFINITY;
    let mut change = f64::INFINITY;
    for it in 1..=MAX_ITERS {
        let m = compensated_sum(x.iter().copied()) / n as f64;
        x.iter_mut().for_each(|v| *v -= m);
        let y = solve_laplacian(&x);
        let scale = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::NonConvergence { iterations: it, residual: f64::NAN });
        }
        x = y.into_iter().map(|v| v / scale).collect();
        let f = CycleFunction::new(x.clone())?;
        let rq = dirichlet(&f) / variance(&f);
        change = ((rq - prev) / rq).abs();
        prev = rq;
        if change <= REL_TOL && it > 2 {
            return Ok(GapEstimate { value: rq, iterations: it, last_change: change });
        }
    }
    Err(Error::NonConvergence { iterations: MAX_ITERS, residual: change })
}

/// The split `x = a + v + z` with `v` in `V1` and `z` orthogonal to `1` and `V1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition3 {
    pub a: f64,
    pub v: CycleFunction,
    pub z: CycleFunction,
    pub r: f64,
    pub t: f64,
    pub q: f64,
}

/// First Fourier coefficient `x^_1`, computed directly.
fn first_coefficient(x: &CycleFunction) -> Complex64 {
    let n = x.n();
    let re = compensated_sum(x.iter().enumerate().map(|(j, v)| v * unit_root(j, n).0));
    let im = compensated_sum(x.iter().enumerate().map(|(j, v)| -v * unit_root(j, n).1));
    Complex64::new(re, im) / n as f64
}

/// Projection onto `V1 = span{cos(2 pi j/n), sin(2 pi j/n)}` via the
/// coefficients of modes `1` and `n - 1`.
pub fn project_v1(x: &CycleFunction) -> CycleFunction {
    let n = x.n();
    let c1 = first_coefficient(x);
    CycleFunction::from_fn(n, |j| {
        let (cs, sn) = unit_root(j, n);
        2.0 * (c1.re * cs - c1.im * sn)
    })
    .expect("projection of finite data is finite")
}

/// Orthogonal decomposition of `x` into mean, `V1` part and high-frequency part.
pub fn decompose(x: &CycleFunction) -> Result<Decomposition3> {
    let n = x.n();
    if n < 4 {
        return Err(Error::UnsupportedN { n, min: 4 });
    }
    let a = average(x);
    let v = project_v1(x);
    let z = CycleFunction::new(x.iter().zip(v.iter()).map(|(xj, vj)| xj - a - vj).collect())?;
    Ok(Decomposition3 { a, r: norm2(&v), t: norm2(&z), q: q_form(&z), v, z })
}

/// `Q(x) = D(x) / lambda_n - 2 <x^2>`.
pub fn q_form(x: &CycleFunction) -> f64 {
    d_quantity(x) / lambda(x.n()) - 2.0 * mean_square(x)
}

fn require_n4(n: usize) -> Result<()> {
    if n < 4 {
        Err(Error::UnsupportedN { n, min: 4 })
    } else {
        Ok(())
    }
}

/// `sigma_n = 3/4 - tan^2(pi/n) / 4`.
pub fn sigma_closed(n: usize) -> Result<f64> {
    require_n4(n)?;
    let t = (PI / n as f64).tan();
    Ok(0.75 - 0.25 * t * t)
}

/// `sum_{k=2}^{n-2} 1 / (mu_k / lambda_n - 2)`.
pub fn sigma_sum(n: usize) -> Result<f64> {
    require_n4(n)?;
    let lam = lambda(n);
    Ok(compensated_sum((2..=n - 2).map(|k| 1.0 / (mu_unchecked(k, n) / lam - 2.0))))
}

/// `kappa_n = 8 cos^2(pi/n) - 2`.
pub fn kappa_closed(n: usize) -> Result<f64> {
    require_n4(n)?;
    let c = (PI / n as f64).cos();
    Ok(8.0 * c * c - 2.0)
}

/// `min_{2 <= k <= n-2} (mu_k / lambda_n - 2)`.
pub fn kappa_direct(n: usize) -> Result<f64> {
    require_n4(n)?;
    let lam = lambda(n);
    Ok((2..=n - 2)
        .map(|k| mu_unchecked(k, n) / lam - 2.0)
        .fold(f64::INFINITY, f64::min))
}

/// `lambda_n`, `sigma_n` and `kappa_n` for one `n >= 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighFreqConstants {
    pub n: usize,
    pub lambda: f64,
    pub sigma: f64,
    pub kappa: f64,
}

impl HighFreqConstants {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self { n, lambda: lambda(n), sigma: sigma_closed(n)?, kappa: kappa_closed(n)? })
    }
}

fn check_high_frequency(z: &CycleFunction, tol: f64) -> Result<()> {
    let scale = norm2(z).max(1.0);
    let mean = average(z);
    let v1_norm = norm2(&project_v1(z));
    if mean.abs() >= tol * scale || v1_norm >= tol * scale {
        return Err(Error::NotHighFrequency { mean, v1_norm });
    }
    Ok(())
}

/// Sup-norm coercivity of `Q`: returns `(Q(z), ||z||_inf^2 / sigma_n)`.
/// The first entry dominates the second for every `z` orthogonal to `1` and `V1`.
pub fn linf_bound_check(z: &CycleFunction) -> Result<(f64, f64)> {
    linf_bound_check_tol(z, DEFAULT_RESIDUAL_TOL)
}

pub fn linf_bound_check_tol(z: &CycleFunction, tol: f64) -> Result<(f64, f64)> {
    let sigma = sigma_closed(z.n())?;
    check_high_frequency(z, tol)?;
    let sup = sup_norm(z);
    Ok((q_form(z), sup * sup / sigma))
}

/// Properties of a first-frequency function `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct V1Properties {
    /// `<v^3>`.
    pub cube_mean: f64,
    /// `||v||_inf / ||v||_2`, at most `sqrt 2`.
    pub sup_ratio: f64,
    /// `||v^2 - <v^2>||_2 / ||v||_2^2`, equal to `1/sqrt 2` for `n >= 5`.
    pub fluct_norm_ratio: f64,
}

/// Evaluates `<v^3>`, `||v||_inf / r` and `||v^2 - <v^2>||_2 / r^2`.
///
/// On `C_4` the square of a `V1` function has a Nyquist component whose size
/// depends on the phase, so the last ratio is only constant for `n >= 5`.
pub fn v1_properties(v: &CycleFunction) -> Result<V1Properties> {
    v1_properties_tol(v, DEFAULT_RESIDUAL_TOL)
}

pub fn v1_properties_tol(v: &CycleFunction, tol: f64) -> Result<V1Properties> {
    require_n4(v.n())?;
    let mean = average(v);
    let proj = project_v1(v);
    let residual = norm2(&(v - &proj));
    let r = norm2(v);
    let scale = r.max(1.0);
    if mean.abs() >= tol * scale || residual >= tol * scale {
        return Err(Error::NotInV1 { mean, residual });
    }
    if r == 0.0 {
        return Err(Error::InvalidArgument("v1_properties needs v != 0".into()));
    }
    let sq = v * v;
    let msq = average(&sq);
    let fluct = norm2(&sq.map(|s| s - msq));
    Ok(V1Properties {
        cube_mean: average(&(&sq * v)),
        sup_ratio: sup_norm(v) / r,
        fluct_norm_ratio: fluct / (r * r),
    })
}
