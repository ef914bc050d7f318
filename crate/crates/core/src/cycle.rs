//! Functions on the n-cycle `Z/nZ` and the basic functionals built on the
//! normalized counting measure: average, variance, relative entropy, the
//! Dirichlet form and the cubic nonlinearity `<(x-1)^2 (x+2)>`.
//!
//! Every average is taken with `1/n` weights. Sums are compensated so the
//! quadratic-form identities survive at `n` in the millions.

use std::ops::{Add, Index, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values in `[-ENTROPY_CLAMP, 0)` are treated as zero by [`entropy`].
pub const ENTROPY_CLAMP: f64 = 1e-12;

/// Neumaier compensated sum.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in iter {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn compensated_mean<I>(iter: I, n: usize) -> f64
where
    I: IntoIterator<Item = f64>,
{
    compensated_sum(iter) / n as f64
}

/// A real-valued function on `C_n`. Indexing wraps modulo `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CycleFunction {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for CycleFunction {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<CycleFunction> for Vec<f64> {
    fn from(f: CycleFunction) -> Self {
        f.values
    }
}

impl CycleFunction {
    /// Wraps `values`; requires `n >= 2` and finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewSites(values.len()));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Result<Self> {
        Self::new((0..n).map(f).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::constant(n, 0.0)
    }

    /// `cos(2 pi k j / n)`.
    pub fn cos_mode(n: usize, k: usize) -> Result<Self> {
        Self::from_fn(n, |j| crate::spectral::unit_root(k * j, n).0)
    }

    /// `sin(2 pi k j / n)`.
    pub fn sin_mode(n: usize, k: usize) -> Result<Self> {
        Self::from_fn(n, |j| crate::spectral::unit_root(k * j, n).1)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at site `i mod n`, accepting negative offsets.
    pub fn at(&self, i: isize) -> f64 {
        let n = self.n() as isize;
        self.values[i.rem_euclid(n) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }

    /// Pointwise map. Panics if `f` produces a non-finite value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(self.values.iter().map(|&v| f(v)).collect())
            .expect("pointwise map produced a non-finite value")
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    /// Rescales to `<f^2> = 1`. Returns `None` for the zero function.
    pub fn normalized(&self) -> Option<Self> {
        let ms = mean_square(self);
        if ms > 0.0 && ms.is_finite() {
            Some(self.scale(1.0 / ms.sqrt()))
        } else {
            None
        }
    }
}

impl Index<usize> for CycleFunction {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i % self.values.len()]
    }
}

fn zip_with(a: &CycleFunction, b: &CycleFunction, op: impl Fn(f64, f64) -> f64) -> CycleFunction {
    assert_eq!(a.n(), b.n(), "functions live on different cycles");
    CycleFunction::new(a.iter().zip(b.iter()).map(|(x, y)| op(x, y)).collect())
        .expect("pointwise operation produced a non-finite value")
}

impl Add for &CycleFunction {
    type Output = CycleFunction;

    fn add(self, rhs: &CycleFunction) -> CycleFunction {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &CycleFunction {
    type Output = CycleFunction;

    fn sub(self, rhs: &CycleFunction) -> CycleFunction {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Mul for &CycleFunction {
    type Output = CycleFunction;

    fn mul(self, rhs: &CycleFunction) -> CycleFunction {
        zip_with(self, rhs, |x, y| x * y)
    }
}

/// `<f> = (1/n) sum f_i`.
pub fn average(f: &CycleFunction) -> f64 {
    compensated_mean(f.iter(), f.n())
}

/// `<f g>`.
pub fn inner(f: &CycleFunction, g: &CycleFunction) -> f64 {
    assert_eq!(f.n(), g.n(), "functions live on different cycles");
    compensated_mean(f.iter().zip(g.iter()).map(|(a, b)| a * b), f.n())
}

/// `<f^2>`.
pub fn mean_square(f: &CycleFunction) -> f64 {
    compensated_mean(f.iter().map(|v| v * v), f.n())
}

/// `||f||_2 = <f^2>^{1/2}`.
pub fn norm2(f: &CycleFunction) -> f64 {
    mean_square(f).sqrt()
}

/// `max_i |f_i|`.
pub fn sup_norm(f: &CycleFunction) -> f64 {
    f.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `Var(f) = <f^2> - <f>^2`, evaluated in two passes as `<(f - <f>)^2>` so it
/// is never negative.
pub fn variance(f: &CycleFunction) -> f64 {
    let m = average(f);
    compensated_mean(f.iter().map(|v| (v - m) * (v - m)), f.n())
}

/// Relative entropy `Ent(g) = <g log g> - <g> log <g>` with `0 log 0 = 0`.
///
/// Evaluated as the average of `g log(g/m) - g + m`, `m = <g>`, whose terms
/// are all nonnegative; this keeps the result accurate for nearly constant
/// `g` and makes `Ent(g) >= 0` hold exactly.
pub fn entropy(g: &CycleFunction) -> Result<f64> {
    if let Some((index, &value)) = g
        .values()
        .iter()
        .enumerate()
        .find(|(_, &v)| v < -ENTROPY_CLAMP)
    {
        return Err(Error::NegativeInput { index, value });
    }
    let clamped = || g.iter().map(|v| v.max(0.0));
    let m = compensated_mean(clamped(), g.n());
    if m <= 0.0 {
        return Ok(0.0);
    }
    Ok(compensated_mean(clamped().map(|v| entropy_term(v, m)), g.n()))
}

/// `v log(v/m) - v + m` with the zero convention.
pub(crate) fn entropy_term(v: f64, m: f64) -> f64 {
    if v == 0.0 {
        return m;
    }
    let u = (v - m) / m;
    let term = m * ((1.0 + u) * u.ln_1p() - u);
    term.max(0.0)
}

fn squared_gap_sum(f: &CycleFunction) -> f64 {
    let n = f.n();
    compensated_sum((0..n).map(|i| {
        let d = f.values[i] - f.values[(i + 1) % n];
        d * d
    }))
}

/// Dirichlet form `E_n(f,f) = (1/2n) sum_i (f_i - f_{i+1})^2`.
///
/// On `C_2` the sum runs over both `i = 0` and `i = 1`, so the single edge is
/// counted twice.
pub fn dirichlet(f: &CycleFunction) -> f64 {
    squared_gap_sum(f) / (2 * f.n()) as f64
}

/// `D(x) = <(x_j - x_{j+1})^2> = 2 E_n(x,x)`, bitwise equal to `2 * dirichlet(x)`.
pub fn d_quantity(x: &CycleFunction) -> f64 {
    squared_gap_sum(x) / x.n() as f64
}

/// Graph Laplacian `(Lf)_j = 2 f_j - f_{j-1} - f_{j+1}`.
pub fn laplacian_apply(f: &CycleFunction) -> CycleFunction {
    let n = f.n();
    let v = &f.values;
    let out = (0..n)
        .map(|j| 2.0 * v[j] - v[(j + n - 1) % n] - v[(j + 1) % n])
        .collect();
    CycleFunction { values: out }
}

/// `<(x - 1)^2 (x + 2)>`, the right-hand side of the cubic Sobolev inequality.
pub fn nonlinear_term(x: &CycleFunction) -> f64 {
    compensated_mean(x.iter().map(cubic_density), x.n())
}

pub(crate) fn cubic_density(v: f64) -> f64 {
    let d = v - 1.0;
    d * d * (v + 2.0)
}

/// All basic functionals of one function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub average: f64,
    pub variance: f64,
    /// `Ent(f)`, present only when `f` is (numerically) nonnegative.
    pub entropy: Option<f64>,
    pub dirichlet: f64,
    pub d_quantity: f64,
}

impl FunctionalReport {
    pub fn of(f: &CycleFunction) -> Self {
        let sum = squared_gap_sum(f);
        Self {
            average: average(f),
            variance: variance(f),
            entropy: entropy(f).ok(),
            dirichlet: sum / (2 * f.n()) as f64,
            d_quantity: sum / f.n() as f64,
        }
    }
}
