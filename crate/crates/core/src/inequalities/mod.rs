//! Deterministic verifiers for the inequalities and identities behind the
//! sharp log-Sobolev constant of the cycle.
//!
//! Every `*_deficit` is oriented so that a nonnegative value means the
//! inequality holds, with the magnitude being the slack.

mod cases;
pub mod scan;

pub use cases::{
    case4_verify, case5_cube_bound_slack, case5_identity, case6_bounds, final_q_inequality_check,
    Case4Report, Case6Report,
};

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::cycle::{d_quantity, entropy, mean_square, nonlinear_term, CycleFunction};
use crate::error::{Error, Result};
use crate::spectral::{decompose, lambda};

/// Golden ratio, the maximizer of `s(s+2)/(s^2+1)`.
pub const PHI: f64 = 1.618_033_988_749_895;
/// Silver ratio `1 + sqrt 2`, the maximizer of `s(s+1)/(s^2+1)`.
pub const SILVER: f64 = 1.0 + SQRT_2;

/// Tolerance for the unit-sphere constraint `<x^2> = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// A point `(a, r, t)` of the closed positive octant of the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarTriple {
    a: f64,
    r: f64,
    t: f64,
}

impl ScalarTriple {
    pub fn new(a: f64, r: f64, t: f64) -> Result<Self> {
        if !(a >= 0.0 && r >= 0.0 && t >= 0.0) {
            return Err(Error::InvalidTriple(format!("negative or NaN entry in ({a}, {r}, {t})")));
        }
        let s = a * a + r * r + t * t;
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidTriple(format!("a^2 + r^2 + t^2 = {s}")));
        }
        Ok(Self { a, r, t })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    fn base(&self) -> f64 {
        let d = 1.0 - self.a;
        d * d * (1.0 + 2.0 * self.a)
    }
}

/// `(1-a)^2(1+2a) + 4t^2 - (3/sqrt2) r^2 t - 3 sqrt2 r t^2`.
pub fn scalar1_deficit(p: &ScalarTriple) -> f64 {
    let (r, t) = (p.r, p.t);
    p.base() + 4.0 * t * t - (3.0 / SQRT_2) * r * r * t - 3.0 * SQRT_2 * r * t * t
}

/// `(1-a)^2(1+2a) + (5/2)t^2 - (3/sqrt2)(r^2 t + r t^2)`.
pub fn scalar2_deficit(p: &ScalarTriple) -> f64 {
    let (r, t) = (p.r, p.t);
    p.base() + 2.5 * t * t - (3.0 / SQRT_2) * (r * r * t + r * t * t)
}

/// `(1-a)^2(1+2a) + 3t^2 - 3 r^2 t`.
pub fn scalar3_deficit(p: &ScalarTriple) -> f64 {
    let (r, t) = (p.r, p.t);
    p.base() + 3.0 * t * t - 3.0 * r * r * t
}

/// Which of the three scalar inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarCase {
    One,
    Two,
    Three,
}

impl ScalarCase {
    pub const ALL: [ScalarCase; 3] = [ScalarCase::One, ScalarCase::Two, ScalarCase::Three];

    pub fn deficit(self, p: &ScalarTriple) -> f64 {
        match self {
            ScalarCase::One => scalar1_deficit(p),
            ScalarCase::Two => scalar2_deficit(p),
            ScalarCase::Three => scalar3_deficit(p),
        }
    }
}

/// Discriminant in `t` of the quadratic obtained after substituting `s = r/t`
/// and dividing by `t^2`. Negative for every `s >= 0`.
pub fn scalar_discriminant(case: ScalarCase, s: f64) -> f64 {
    let s2p1 = s * s + 1.0;
    match case {
        ScalarCase::One => 4.5 * s * s * (s + 2.0).powi(2) - 12.0 * s2p1 * s2p1,
        ScalarCase::Two => 4.5 * s * s * (s + 1.0).powi(2) - 7.5 * s2p1 * s2p1,
        ScalarCase::Three => 9.0 * s.powi(4) - 9.0 * s2p1 * s2p1,
    }
}

/// Residuals of the two completed-square identities
/// `phi(s^2+1) - s(s+2) = (s-phi)^2 / phi` and
/// `(sigma/2)(s^2+1) - s(s+1) = (s-sigma)^2 / (2 sigma)`.
pub fn extremal_identities(s: f64) -> (f64, f64) {
    let g1 = PHI * (s * s + 1.0) - s * (s + 2.0) - (s - PHI).powi(2) / PHI;
    let g2 = 0.5 * SILVER * (s * s + 1.0) - s * (s + 1.0) - (s - SILVER).powi(2) / (2.0 * SILVER);
    (g1, g2)
}

/// `P_3(t) = 2(t-1) + 3(t-1)^2 + (2/3)(t-1)^3`.
pub fn p3(t: f64) -> f64 {
    let u = t - 1.0;
    u * (2.0 + u * (3.0 + u * (2.0 / 3.0)))
}

/// `H(t) = P_3(t) - 2 t^2 log t`; nonnegative on `t > 0` and `H(0+) = 1/3`.
pub fn majorant_deficit(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("majorant needs finite t > 0, got {t}")));
    }
    Ok(p3(t) - 2.0 * t * t * t.ln())
}

fn h(t: f64) -> f64 {
    p3(t) - 2.0 * t * t * t.ln()
}

/// Central five-point approximation of `H''''(t)` with step `h`.
pub fn majorant_fourth_derivative_fd(t: f64, step: f64) -> f64 {
    let s = step;
    (h(t - 2.0 * s) - 4.0 * h(t - s) + 6.0 * h(t) - 4.0 * h(t + s) + h(t + 2.0 * s)) / s.powi(4)
}

/// Relative residual `|FD - 4/t^2| / (4/t^2)` of the fourth derivative of `H`.
///
/// The five-point stencil alone carries a relative truncation error of
/// `(h/t)^2`, so it is combined with the same stencil at `2h` (one Richardson
/// step) to cancel that term.
pub fn majorant_fourth_derivative_check(t: f64, step: f64) -> Result<f64> {
    if !(t > 0.0) || !(step > 0.0) || t - 4.0 * step <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "stencil at t = {t} with h = {step} leaves (0, inf)"
        )));
    }
    let fine = majorant_fourth_derivative_fd(t, step);
    let coarse = majorant_fourth_derivative_fd(t, 2.0 * step);
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    let exact = 4.0 / (t * t);
    Ok((extrapolated - exact).abs() / exact)
}

/// `P_3(t) - [(2/3)(t-1)^2 (t+2) + (t^2 - 1)]`, zero for all real `t`.
pub fn p3_identity_residual(t: f64) -> f64 {
    let u = t - 1.0;
    p3(t) - ((2.0 / 3.0) * u * u * (t + 2.0) + (t * t - 1.0))
}

/// Left side, right side and slack of an inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficitReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub deficit: f64,
    pub location: Vec<f64>,
}

impl DeficitReport {
    pub fn new(lhs: f64, rhs: f64, location: Vec<f64>) -> Self {
        Self { lhs, rhs, deficit: rhs - lhs, location }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.deficit >= -tol
    }
}

fn check_admissible(x: &CycleFunction) -> Result<()> {
    let n = x.n();
    if n < 4 {
        return Err(Error::UnsupportedN { n, min: 4 });
    }
    if let Some((index, &value)) = x.values().iter().enumerate().find(|(_, &v)| v < 0.0) {
        return Err(Error::NegativeEntries { index, value });
    }
    let ms = mean_square(x);
    if (ms - 1.0).abs() >= NORMALIZATION_TOL {
        return Err(Error::NotNormalized { mean_square: ms });
    }
    Ok(())
}

/// Cubic Sobolev inequality `D(x) >= (2 lambda_n / 3) <(x-1)^2 (x+2)>` for
/// `x >= 0` with `<x^2> = 1`.
pub fn cubic_deficit(x: &CycleFunction) -> Result<DeficitReport> {
    check_admissible(x)?;
    Ok(cubic_report(x))
}

pub(crate) fn cubic_report(x: &CycleFunction) -> DeficitReport {
    let lhs = 2.0 * lambda(x.n()) / 3.0 * nonlinear_term(x);
    DeficitReport::new(lhs, d_quantity(x), x.values().to_vec())
}

/// `(Ent(x^2), (2/3) <(x-1)^2 (x+2)>)`; the first never exceeds the second.
pub fn entropy_majorization_check(x: &CycleFunction) -> Result<(f64, f64)> {
    if let Some((index, &value)) = x.values().iter().enumerate().find(|(_, &v)| v < 0.0) {
        return Err(Error::NegativeEntries { index, value });
    }
    let ms = mean_square(x);
    if (ms - 1.0).abs() >= NORMALIZATION_TOL {
        return Err(Error::NotNormalized { mean_square: ms });
    }
    let ent = entropy(&x.map(|v| v * v))?;
    Ok((ent, 2.0 / 3.0 * nonlinear_term(x)))
}

/// The cubic deficit reassembled from the orthogonal split:
/// `lambda_n [Q - (2/3)(<(v+z)^3> - (1-a)^2 (1+2a))]`.
pub fn chain_deficit(x: &CycleFunction) -> Result<f64> {
    check_admissible(x)?;
    let d = decompose(x)?;
    let w = &d.v + &d.z;
    let cube = crate::cycle::average(&w.map(|s| s * s * s));
    let base = (1.0 - d.a).powi(2) * (1.0 + 2.0 * d.a);
    Ok(lambda(x.n()) * (d.q - 2.0 / 3.0 * (cube - base)))
}
