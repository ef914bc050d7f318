//! Cross-term bounds for the cubic nonlinearity `<(v+z)^3>`, one verifier per
//! cycle length regime (`n = 4`, `n = 5`, `n >= 6`). Cube averages are always
//! computed by summing over sites, never through the expanded identities.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cycle::{average, compensated_mean, norm2, sup_norm, CycleFunction};
use crate::error::{Error, Result};
use crate::spectral::{
    decompose, kappa_closed, project_v1, q_form, sigma_closed, unit_root, DEFAULT_RESIDUAL_TOL,
};

fn mean_of(f: impl Fn(usize) -> f64, n: usize) -> f64 {
    compensated_mean((0..n).map(f), n)
}

/// Cross terms on `C_4` for `v = (p, q, -p, -q)` and `z = c (-1)^j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case4Report {
    pub v_cube: f64,
    pub v_z_sq: f64,
    pub z_cube: f64,
    pub v_sq_z: f64,
    /// `(c/2)(p^2 - q^2)`.
    pub v_sq_z_formula: f64,
    /// `||v||_2^2` from the spectral decomposition of `v + z`.
    pub r_sq: f64,
    /// `(p^2 + q^2) / 2`.
    pub r_sq_formula: f64,
    pub t: f64,
    /// `t r^2 - |<v^2 z>|`.
    pub bound_slack: f64,
}

impl Case4Report {
    /// Largest deviation among the vanishing cross terms and the two closed forms.
    pub fn max_residual(&self) -> f64 {
        [
            self.v_cube.abs(),
            self.v_z_sq.abs(),
            self.z_cube.abs(),
            (self.v_sq_z - self.v_sq_z_formula).abs(),
            (self.r_sq - self.r_sq_formula).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual() <= tol && self.bound_slack >= -tol
    }
}

pub fn case4_verify(p: f64, q: f64, c: f64) -> Result<Case4Report> {
    let v = CycleFunction::new(vec![p, q, -p, -q])?;
    let z = CycleFunction::new(vec![c, -c, c, -c])?;
    let d = decompose(&(&v + &z))?;
    let t = norm2(&z);
    let v_sq_z = mean_of(|j| v[j] * v[j] * z[j], 4);
    let r_sq = d.r * d.r;
    Ok(Case4Report {
        v_cube: mean_of(|j| v[j].powi(3), 4),
        v_z_sq: mean_of(|j| v[j] * z[j] * z[j], 4),
        z_cube: mean_of(|j| z[j].powi(3), 4),
        v_sq_z,
        v_sq_z_formula: 0.5 * c * (p * p - q * q),
        r_sq,
        r_sq_formula: 0.5 * (p * p + q * q),
        t,
        bound_slack: t * r_sq - v_sq_z.abs(),
    })
}

fn case5_parts(a: Complex64, b: Complex64) -> (Vec<f64>, Vec<f64>) {
    let mode = |coef: Complex64, k: usize| -> Vec<f64> {
        (0..5)
            .map(|j| {
                let (cs, sn) = unit_root(k * j, 5);
                2.0 * (coef.re * cs - coef.im * sn)
            })
            .collect()
    };
    (mode(a, 1), mode(b, 2))
}

fn case5_cube(a: Complex64, b: Complex64) -> f64 {
    let (v, z) = case5_parts(a, b);
    mean_of(|j| (v[j] + z[j]).powi(3), 5)
}

/// `|<(v+z)^3> - 6 Re(A^2 conj(B) + A B^2)|` on `C_5` with
/// `v = A chi + conj(A) chi^-1`, `z = B chi^2 + conj(B) chi^-2`.
pub fn case5_identity(a: Complex64, b: Complex64) -> f64 {
    let formula = 6.0 * (a * a * b.conj() + a * b * b).re;
    (case5_cube(a, b) - formula).abs()
}

/// `(3/sqrt2)(r^2 t + r t^2) - <(v+z)^3>` on `C_5`, with `r^2 = 2|A|^2`,
/// `t^2 = 2|B|^2`.
pub fn case5_cube_bound_slack(a: Complex64, b: Complex64) -> f64 {
    let r = (2.0 * a.norm_sqr()).sqrt();
    let t = (2.0 * b.norm_sqr()).sqrt();
    3.0 / SQRT_2 * (r * r * t + r * t * t) - case5_cube(a, b)
}

/// Cross-term bounds for `n >= 6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case6Report {
    pub r: f64,
    pub t: f64,
    pub q: f64,
    pub v_sq_z: f64,
    /// `r^2 t / sqrt2`.
    pub v_sq_z_bound: f64,
    pub v_z_sq: f64,
    /// `sqrt2 r t^2`.
    pub v_z_sq_bound: f64,
    pub z_cube: f64,
    /// `||z||_inf t^2`.
    pub z_cube_bound: f64,
    /// `sqrt(sigma_n) sqrt(Q) t^2`.
    pub z_cube_chain_bound: f64,
}

impl Case6Report {
    pub fn slacks(&self) -> [f64; 4] {
        [
            self.v_sq_z_bound - self.v_sq_z.abs(),
            self.v_z_sq_bound - self.v_z_sq.abs(),
            self.z_cube_bound - self.z_cube.abs(),
            self.z_cube_chain_bound - self.z_cube.abs(),
        ]
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.min_slack() >= -tol
    }
}

pub fn case6_bounds(v: &CycleFunction, z: &CycleFunction) -> Result<Case6Report> {
    let n = v.n();
    if n < 6 {
        return Err(Error::UnsupportedN { n, min: 6 });
    }
    if z.n() != n {
        return Err(Error::InvalidArgument(format!("v has {n} sites, z has {}", z.n())));
    }
    let tol = DEFAULT_RESIDUAL_TOL;
    let v_mean = average(v);
    let v_off = norm2(&(v - &project_v1(v)));
    let v_scale = norm2(v).max(1.0);
    if v_mean.abs() >= tol * v_scale || v_off >= tol * v_scale {
        return Err(Error::NotInV1 { mean: v_mean, residual: v_off });
    }
    let z_mean = average(z);
    let z_v1 = norm2(&project_v1(z));
    let z_scale = norm2(z).max(1.0);
    if z_mean.abs() >= tol * z_scale || z_v1 >= tol * z_scale {
        return Err(Error::NotHighFrequency { mean: z_mean, v1_norm: z_v1 });
    }

    let sigma = sigma_closed(n)?;
    let r = norm2(v);
    let t = norm2(z);
    let q = q_form(z).max(0.0);
    let v_sq_z = mean_of(|j| v[j] * v[j] * z[j], n);
    let v_z_sq = mean_of(|j| v[j] * z[j] * z[j], n);
    let z_cube = mean_of(|j| z[j].powi(3), n);
    Ok(Case6Report {
        r,
        t,
        q,
        v_sq_z,
        v_sq_z_bound: r * r * t / SQRT_2,
        v_z_sq,
        v_z_sq_bound: SQRT_2 * r * t * t,
        z_cube,
        z_cube_bound: sup_norm(z) * t * t,
        z_cube_chain_bound: sigma.sqrt() * q.sqrt() * t * t,
    })
}

/// `Q - (8/3) t^2 - (2/3) sqrt(sigma_n) sqrt(Q) t^2`, valid whenever
/// `Q >= kappa_n t^2` and `0 <= t <= 1`.
pub fn final_q_inequality_check(q: f64, t: f64, n: usize) -> Result<f64> {
    if n < 6 {
        return Err(Error::UnsupportedN { n, min: 6 });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, 1]")));
    }
    let kappa = kappa_closed(n)?;
    if !(q >= 0.0) || q < kappa * t * t * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "Q = {q} violates Q >= kappa_n t^2 = {}",
            kappa * t * t
        )));
    }
    let sigma = sigma_closed(n)?;
    Ok(q - 8.0 / 3.0 * t * t - 2.0 / 3.0 * sigma.sqrt() * q.sqrt() * t * t)
}
