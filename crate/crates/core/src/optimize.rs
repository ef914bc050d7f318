//! Constrained ratio minimization.
//!
//! Both problems have the form `min num(x) / den(x)` over `x >= 0`,
//! `<x^2> = 1`, `den(x) >= floor`:
//!
//! * log-Sobolev: `E(x) / Ent(x^2)`, infimum `alpha`;
//! * cubic Sobolev: `D(x) / <(x-1)^2 (x+2)>`.
//!
//! In both, nearly constant functions drive the ratio towards a known value
//! (`lambda/2`, resp. `2 lambda/3`) while the denominator vanishes, so a
//! search limited to `den >= floor` approaches it from above without reaching
//! it. The reported estimate is therefore the smaller of the best interior
//! value and that degenerate value; the interior value is kept separately.
//!
//! Each restart is an independent projected-gradient descent with Armijo
//! backtracking on the ratio. Restarts run in parallel and are reduced in
//! index order, so a given seed always produces the same result.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{
    compensated_mean, compensated_sum, cubic_density, entropy_term, CycleFunction,
};
use crate::error::{Error, Result};
use crate::inequalities::cubic_report;
use crate::inequalities::scan::stream_rng;
use crate::spectral::lambda;

/// How the constraint `x >= 0` is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    /// Clamp negative entries to zero, then rescale to the unit sphere.
    #[default]
    ClampRenormalize,
    /// Optimize over `y` with `x = y^2 / ||y^2||_2`.
    SquareReparam,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub armijo_shrink: f64,
    pub grad_tol: f64,
    /// Lower bound on the denominator (entropy, or the cubic term).
    pub entropy_floor: f64,
    pub projection: Projection,
    /// Keep `(iteration, value)` samples of the winning restart.
    pub record_history: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 64,
            max_iters: 20_000,
            step_init: 0.1,
            armijo_shrink: 0.5,
            grad_tol: 1e-10,
            entropy_floor: 1e-8,
            projection: Projection::ClampRenormalize,
            record_history: false,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("optimizer config: {what}")));
        if self.restarts == 0 {
            return bad("restarts must be >= 1");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be >= 1");
        }
        if !(self.step_init > 0.0) {
            return bad("step_init must be > 0");
        }
        if !(self.armijo_shrink > 0.0 && self.armijo_shrink < 1.0) {
            return bad("armijo_shrink must lie in (0, 1)");
        }
        if !(self.grad_tol > 0.0) || !(self.entropy_floor > 0.0) {
            return bad("tolerances must be > 0");
        }
        Ok(())
    }
}

/// Outcome of a multi-start ratio minimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioMinResult<A = CycleFunction> {
    /// `min(interior_value, degenerate_value)`.
    pub value: f64,
    /// Best ratio attained by a feasible point; the ratio at `argmin`.
    pub interior_value: f64,
    /// Limit of the ratio along nearly constant functions.
    pub degenerate_value: f64,
    /// Whether `value` comes from the degenerate limit rather than `argmin`.
    pub degenerate_active: bool,
    pub argmin: A,
    pub restarts_used: usize,
    /// The winning restart met the gradient tolerance, stagnated, or could not
    /// descend further; `false` means it stopped at `max_iters`.
    pub converged: bool,
    /// Iterations of the winning restart.
    pub iterations: usize,
    pub history: Option<Vec<(usize, f64)>>,
}

impl<A> RatioMinResult<A> {
    pub fn map_argmin<B>(self, f: impl FnOnce(A) -> B) -> RatioMinResult<B> {
        RatioMinResult {
            value: self.value,
            interior_value: self.interior_value,
            degenerate_value: self.degenerate_value,
            degenerate_active: self.degenerate_active,
            argmin: f(self.argmin),
            restarts_used: self.restarts_used,
            converged: self.converged,
            iterations: self.iterations,
            history: self.history,
        }
    }
}

/// A nonnegative quadratic energy on a finite state space with the uniform
/// measure.
pub trait Energy: Sync {
    fn dim(&self) -> usize;
    fn energy(&self, x: &[f64]) -> f64;
    /// Euclidean gradient `d energy / d x_i`.
    fn energy_grad(&self, x: &[f64], out: &mut [f64]);
    /// Lowest nonconstant eigenfunctions, used to seed restarts.
    fn low_modes(&self) -> Vec<Vec<f64>>;
}

/// Dirichlet form of `C_n`.
#[derive(Debug, Clone, Copy)]
pub struct CycleEnergy {
    pub n: usize,
}

impl Energy for CycleEnergy {
    fn dim(&self) -> usize {
        self.n
    }

    fn energy(&self, x: &[f64]) -> f64 {
        let n = self.n;
        compensated_sum((0..n).map(|i| (x[i] - x[(i + 1) % n]).powi(2))) / (2 * n) as f64
    }

    fn energy_grad(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            out[i] = (2.0 * x[i] - x[(i + n - 1) % n] - x[(i + 1) % n]) / n as f64;
        }
    }

    fn low_modes(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let c: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).cos()).collect();
        let s: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).sin()).collect();
        [c, s].into_iter().filter(|m| m.iter().any(|v| v.abs() > 1e-12)).collect()
    }
}

/// `Ent(x^2)` and its Euclidean gradient `(2 x_i / N) log(x_i^2 / <x^2>)`.
fn entropy_of_square(x: &[f64]) -> f64 {
    let n = x.len();
    let m = compensated_mean(x.iter().map(|v| v * v), n);
    if m <= 0.0 {
        return 0.0;
    }
    compensated_mean(x.iter().map(|v| entropy_term(v * v, m)), n)
}

fn entropy_of_square_grad(x: &[f64], out: &mut [f64]) {
    let n = x.len();
    let m = compensated_mean(x.iter().map(|v| v * v), n);
    for (o, &v) in out.iter_mut().zip(x) {
        *o = if v == 0.0 { 0.0 } else { 2.0 * v / n as f64 * (v * v / m).ln() };
    }
}

trait RatioProblem: Sync {
    fn dim(&self) -> usize;
    /// `(numerator, denominator)`.
    fn parts(&self, x: &[f64]) -> (f64, f64);
    /// Euclidean gradient of the ratio.
    fn grad(&self, x: &[f64], out: &mut [f64]);
    fn low_modes(&self) -> Vec<Vec<f64>>;
}

struct AlphaProblem<'a, E: Energy> {
    energy: &'a E,
}

impl<E: Energy> RatioProblem for AlphaProblem<'_, E> {
    fn dim(&self) -> usize {
        self.energy.dim()
    }

    fn parts(&self, x: &[f64]) -> (f64, f64) {
        (self.energy.energy(x), entropy_of_square(x))
    }

    fn grad(&self, x: &[f64], out: &mut [f64]) {
        let (e, ent) = self.parts(x);
        let mut ge = vec![0.0; x.len()];
        self.energy.energy_grad(x, &mut ge);
        entropy_of_square_grad(x, out);
        for (o, g) in out.iter_mut().zip(&ge) {
            *o = (g * ent - e * *o) / (ent * ent);
        }
    }

    fn low_modes(&self) -> Vec<Vec<f64>> {
        self.energy.low_modes()
    }
}

struct CubicProblem {
    n: usize,
}

impl RatioProblem for CubicProblem {
    fn dim(&self) -> usize {
        self.n
    }

    fn parts(&self, x: &[f64]) -> (f64, f64) {
        let n = self.n;
        let d = compensated_sum((0..n).map(|i| (x[i] - x[(i + 1) % n]).powi(2))) / n as f64;
        (d, compensated_mean(x.iter().copied().map(cubic_density), n))
    }

    fn grad(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        let (d, c) = self.parts(x);
        for i in 0..n {
            let gd = 2.0 * (2.0 * x[i] - x[(i + n - 1) % n] - x[(i + 1) % n]) / n as f64;
            let gc = 3.0 * (x[i] * x[i] - 1.0) / n as f64;
            out[i] = (gd * c - d * gc) / (c * c);
        }
    }

    fn low_modes(&self) -> Vec<Vec<f64>> {
        CycleEnergy { n: self.n }.low_modes()
    }
}

fn avg_dot(a: &[f64], b: &[f64]) -> f64 {
    compensated_mean(a.iter().zip(b).map(|(x, y)| x * y), a.len())
}

fn normalize_in_place(x: &mut [f64]) -> bool {
    let ms = avg_dot(x, x);
    if !(ms > 0.0) || !ms.is_finite() {
        return false;
    }
    let s = 1.0 / ms.sqrt();
    x.iter_mut().for_each(|v| *v *= s);
    true
}

struct Restart {
    value: f64,
    x: Vec<f64>,
    converged: bool,
    iterations: usize,
    history: Vec<(usize, f64)>,
}

const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-18;
const MAX_STEP: f64 = 1e6;
const HISTORY_STRIDE: usize = 100;
/// A restart has converged once the ratio drops by less than `STALL_RTOL`
/// (relative) over `STALL_WINDOW` iterations.
const STALL_WINDOW: usize = 200;
const STALL_RTOL: f64 = 1e-13;

/// Ratio at `x` if `x` is feasible.
fn feasible_ratio<P: RatioProblem>(p: &P, x: &[f64], floor: f64) -> Option<f64> {
    let (num, den) = p.parts(x);
    let r = num / den;
    (den >= floor && r.is_finite()).then_some(r)
}

/// Gradient of the ratio restricted to the sphere, in average coordinates.
fn sphere_gradient<P: RatioProblem>(p: &P, x: &[f64], g: &mut [f64]) {
    let n = x.len() as f64;
    p.grad(x, g);
    g.iter_mut().for_each(|v| *v *= n);
    let radial = avg_dot(g, x);
    g.iter_mut().zip(x).for_each(|(gi, xi)| *gi -= radial * xi);
}

fn descend_clamp<P: RatioProblem>(p: &P, x0: Vec<f64>, cfg: &OptimizerConfig, floor: f64) -> Option<Restart> {
    let mut x = x0;
    x.iter_mut().for_each(|v| *v = v.max(0.0));
    if !normalize_in_place(&mut x) {
        return None;
    }
    let mut value = feasible_ratio(p, &x, floor)?;
    let dim = x.len();
    let mut g = vec![0.0; dim];
    let mut y = vec![0.0; dim];
    let mut step = cfg.step_init;
    let mut history = Vec::new();
    let mut checkpoint = value;
    for it in 0..cfg.max_iters {
        if cfg.record_history && it % HISTORY_STRIDE == 0 {
            history.push((it, value));
        }
        if it > 0 && it % STALL_WINDOW == 0 {
            if checkpoint - value <= STALL_RTOL * value.abs() {
                return Some(Restart { value, x, converged: true, iterations: it, history });
            }
            checkpoint = value;
        }
        sphere_gradient(p, &x, &mut g);
        let pg = compensated_mean(
            g.iter().zip(&x).map(|(gi, xi)| if *xi == 0.0 && *gi > 0.0 { 0.0 } else { gi * gi }),
            dim,
        )
        .sqrt();
        if pg <= cfg.grad_tol {
            return Some(Restart { value, x, converged: true, iterations: it, history });
        }
        loop {
            for i in 0..dim {
                y[i] = (x[i] - step * g[i]).max(0.0);
            }
            let accepted = normalize_in_place(&mut y)
                && match feasible_ratio(p, &y, floor) {
                    Some(r) => {
                        let moved: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
                        if r <= value - ARMIJO_C * avg_dot(&g, &moved) && r <= value {
                            value = r;
                            true
                        } else {
                            false
                        }
                    }
                    None => false,
                };
            if accepted {
                std::mem::swap(&mut x, &mut y);
                step = (step * 2.0).min(MAX_STEP);
                break;
            }
            step *= cfg.armijo_shrink;
            if step < MIN_STEP {
                return Some(Restart { value, x, converged: true, iterations: it, history });
            }
        }
    }
    Some(Restart { value, x, converged: false, iterations: cfg.max_iters, history })
}

fn square_to_x(y: &[f64]) -> Option<Vec<f64>> {
    let mut x: Vec<f64> = y.iter().map(|v| v * v).collect();
    normalize_in_place(&mut x).then_some(x)
}

fn descend_square<P: RatioProblem>(p: &P, x0: Vec<f64>, cfg: &OptimizerConfig, floor: f64) -> Option<Restart> {
    let mut y: Vec<f64> = x0.iter().map(|v| v.max(0.0).sqrt()).collect();
    let mut x = square_to_x(&y)?;
    let mut value = feasible_ratio(p, &x, floor)?;
    let dim = x.len();
    let mut g = vec![0.0; dim];
    let mut gy = vec![0.0; dim];
    let mut step = cfg.step_init;
    let mut history = Vec::new();
    let mut checkpoint = value;
    for it in 0..cfg.max_iters {
        if cfg.record_history && it % HISTORY_STRIDE == 0 {
            history.push((it, value));
        }
        if it > 0 && it % STALL_WINDOW == 0 {
            if checkpoint - value <= STALL_RTOL * value.abs() {
                return Some(Restart { value, x, converged: true, iterations: it, history });
            }
            checkpoint = value;
        }
        // keep ||y^2||_2 = 1 so that x = y^2 exactly
        let ynorm = compensated_mean(y.iter().map(|v| v.powi(4)), dim).sqrt().sqrt();
        if ynorm > 0.0 {
            y.iter_mut().for_each(|v| *v /= ynorm);
        }
        sphere_gradient(p, &x, &mut g);
        for i in 0..dim {
            gy[i] = 2.0 * y[i] * g[i];
        }
        let norm = avg_dot(&gy, &gy).sqrt();
        if norm <= cfg.grad_tol {
            return Some(Restart { value, x, converged: true, iterations: it, history });
        }
        loop {
            let cand: Vec<f64> = y.iter().zip(&gy).map(|(a, b)| a - step * b).collect();
            let accepted = square_to_x(&cand).and_then(|cx| {
                let r = feasible_ratio(p, &cx, floor)?;
                (r <= value - ARMIJO_C * step * norm * norm && r <= value).then_some((r, cx))
            });
            if let Some((r, cx)) = accepted {
                value = r;
                y = cand;
                x = cx;
                step = (step * 2.0).min(MAX_STEP);
                break;
            }
            step *= cfg.armijo_shrink;
            if step < MIN_STEP {
                return Some(Restart { value, x, converged: true, iterations: it, history });
            }
        }
    }
    Some(Restart { value, x, converged: false, iterations: cfg.max_iters, history })
}

/// Starting point for restart `index`: cycles through uniform noise around
/// the constant, first-mode perturbations, spikes and two-level steps.
fn initial_point(modes: &[Vec<f64>], dim: usize, index: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mode = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        let mut m = vec![0.0; dim];
        for b in modes {
            let w: f64 = rng.random_range(-1.0..1.0);
            m.iter_mut().zip(b).for_each(|(mi, bi)| *mi += w * bi);
        }
        m
    };
    match index % 4 {
        0 => {
            let amp = 10f64.powf(rng.random_range(-3.0..0.0));
            (0..dim).map(|_| 1.0 + amp * rng.random_range(-1.0..1.0)).collect()
        }
        1 => {
            let amps = [0.5, 0.2, 0.05, 0.01, 1e-3];
            let amp = amps[(index / 4) % amps.len()];
            let m = mode(rng);
            let sup = m.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
            m.iter().map(|v| 1.0 + amp * v / sup).collect()
        }
        2 => {
            let base = 10f64.powf(rng.random_range(-2.0..1.0));
            let site = rng.random_range(0..dim);
            (0..dim).map(|i| if i == site { base + 1.0 } else { base }).collect()
        }
        _ => {
            let m = mode(rng);
            let (hi, lo) = (rng.random_range(0.5..2.0), rng.random_range(0.0..1.0));
            m.iter().map(|&v| if v > 0.0 { hi } else { lo }).collect()
        }
    }
}

fn minimize<P: RatioProblem>(
    problem: &P,
    cfg: &OptimizerConfig,
    degenerate_value: f64,
    extra_starts: &[Vec<f64>],
) -> Result<RatioMinResult<Vec<f64>>> {
    cfg.validate()?;
    let dim = problem.dim();
    let modes = problem.low_modes();
    let floor = cfg.entropy_floor;
    let total = cfg.restarts + extra_starts.len();
    let runs: Vec<Option<Restart>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let x0 = if i < extra_starts.len() {
                extra_starts[i].clone()
            } else {
                let mut rng = stream_rng(cfg.seed, i as u64);
                initial_point(&modes, dim, i - extra_starts.len(), &mut rng)
            };
            match cfg.projection {
                Projection::ClampRenormalize => descend_clamp(problem, x0, cfg, floor),
                Projection::SquareReparam => descend_square(problem, x0, cfg, floor),
            }
        })
        .collect();
    let restarts_used = runs.iter().filter(|r| r.is_some()).count();
    let best = runs
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .ok_or(Error::NonConvergence { iterations: 0, residual: f64::NAN })?;
    let degenerate_active = degenerate_value < best.value;
    Ok(RatioMinResult {
        value: best.value.min(degenerate_value),
        interior_value: best.value,
        degenerate_value,
        degenerate_active,
        argmin: best.x,
        restarts_used,
        converged: best.converged,
        iterations: best.iterations,
        history: cfg.record_history.then_some(best.history),
    })
}

/// Multi-start minimization of `energy(f) / Ent(f^2)` for a general energy,
/// with `degenerate_value` the limit along nearly constant functions.
pub fn minimize_entropy_ratio<E: Energy>(
    energy: &E,
    cfg: &OptimizerConfig,
    degenerate_value: f64,
) -> Result<RatioMinResult<Vec<f64>>> {
    minimize(&AlphaProblem { energy }, cfg, degenerate_value, &[])
}

/// Numerical log-Sobolev constant `alpha_n = inf E_n(f,f) / Ent(f^2)`.
pub fn estimate_alpha(n: usize, cfg: &OptimizerConfig) -> Result<RatioMinResult> {
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    let res = minimize_entropy_ratio(&CycleEnergy { n }, cfg, lambda(n) / 2.0)?;
    Ok(res.map_argmin(|v| CycleFunction::new(v).expect("optimizer iterates are finite")))
}

/// Numerical optimal constant of the cubic Sobolev inequality,
/// `inf D(x) / <(x-1)^2 (x+2)>` over nonnegative unit vectors.
pub fn estimate_cubic_constant(n: usize, cfg: &OptimizerConfig) -> Result<RatioMinResult> {
    if n < 4 {
        return Err(Error::UnsupportedN { n, min: 4 });
    }
    let res = minimize(&CubicProblem { n }, cfg, 2.0 * lambda(n) / 3.0, &[])?;
    Ok(res.map_argmin(|v| CycleFunction::new(v).expect("optimizer iterates are finite")))
}

/// Cubic deficit `D(x) - (2 lambda_n / 3) <(x-1)^2 (x+2)>` posed as a ratio
/// with unit denominator, so the same descent minimizes it directly.
struct CubicDeficitProblem {
    n: usize,
}

impl RatioProblem for CubicDeficitProblem {
    fn dim(&self) -> usize {
        self.n
    }

    fn parts(&self, x: &[f64]) -> (f64, f64) {
        let (d, c) = CubicProblem { n: self.n }.parts(x);
        (d - 2.0 * lambda(self.n) / 3.0 * c, 1.0)
    }

    fn grad(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        let k = 2.0 * lambda(n) / 3.0;
        for i in 0..n {
            let gd = 2.0 * (2.0 * x[i] - x[(i + n - 1) % n] - x[(i + 1) % n]) / n as f64;
            let gc = 3.0 * (x[i] * x[i] - 1.0) / n as f64;
            out[i] = gd - k * gc;
        }
    }

    fn low_modes(&self) -> Vec<Vec<f64>> {
        CycleEnergy { n: self.n }.low_modes()
    }
}

/// Local minimization of the cubic deficit from one starting point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficitRefinement {
    pub start_deficit: f64,
    /// Smallest deficit reached; a negative value would be a violation.
    pub deficit: f64,
    pub argmin: CycleFunction,
    pub converged: bool,
    pub iterations: usize,
}

/// Projected-gradient descent of the cubic deficit over `x >= 0`,
/// `<x^2> = 1`, starting from `start`.
pub fn refine_cubic(start: &CycleFunction, cfg: &OptimizerConfig) -> Result<DeficitRefinement> {
    let n = start.n();
    if n < 4 {
        return Err(Error::UnsupportedN { n, min: 4 });
    }
    cfg.validate()?;
    let problem = CubicDeficitProblem { n };
    let x0 = start.values().to_vec();
    let run = match cfg.projection {
        Projection::ClampRenormalize => descend_clamp(&problem, x0, cfg, 0.5),
        Projection::SquareReparam => descend_square(&problem, x0, cfg, 0.5),
    }
    .ok_or_else(|| Error::InvalidArgument("refinement start has no positive entry".into()))?;
    let start_deficit = start
        .normalized()
        .map(|x| problem.parts(x.map(|v| v.max(0.0)).values()).0)
        .unwrap_or(f64::NAN);
    Ok(DeficitRefinement {
        start_deficit,
        deficit: run.value,
        argmin: CycleFunction::new(run.x)?,
        converged: run.converged,
        iterations: run.iterations,
    })
}

/// Cubic deficit along `x_eps = (1 + eps v) / sqrt(1 + eps^2 <v^2>)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationPoint {
    pub eps: f64,
    pub deficit: f64,
    /// `deficit / eps^2`, zero at `eps = 0`.
    pub scaled: f64,
}

/// Evaluates the cubic deficit along the normalized perturbation of the
/// constant in direction `v`. For `v` in `V1` the scaled deficit tends to 0;
/// for higher modes it tends to `lambda_n (mu_k/lambda_n - 2) <v^2>`.
/// `v` must be orthogonal to constants for the normalization to be exact.
pub fn perturbation_scan(v: &CycleFunction, eps_list: &[f64]) -> Result<Vec<PerturbationPoint>> {
    let n = v.n();
    if n < 4 {
        return Err(Error::UnsupportedN { n, min: 4 });
    }
    let vv = crate::cycle::mean_square(v);
    if vv == 0.0 {
        return Err(Error::InvalidArgument("perturbation direction is zero".into()));
    }
    eps_list
        .iter()
        .map(|&eps| {
            if eps == 0.0 {
                return Ok(PerturbationPoint { eps, deficit: 0.0, scaled: 0.0 });
            }
            let norm = (1.0 + eps * eps * vv).sqrt();
            let x = CycleFunction::from_fn(n, |j| (1.0 + eps * v[j]) / norm)?;
            if !x.is_nonnegative() {
                return Err(Error::NegativePerturbation { eps });
            }
            let deficit = cubic_report(&x).deficit;
            Ok(PerturbationPoint { eps, deficit, scaled: deficit / (eps * eps) })
        })
        .collect()
}

/// Euclidean gradient of `E_n(f,f) / Ent(f^2)` in the value coordinates.
pub fn alpha_ratio_gradient(f: &CycleFunction, entropy_floor: f64) -> Result<CycleFunction> {
    if let Some((index, &value)) = f.values().iter().enumerate().find(|(_, &v)| v < 0.0) {
        return Err(Error::NegativeEntries { index, value });
    }
    let ent = entropy_of_square(f.values());
    if ent < entropy_floor {
        return Err(Error::DegenerateEntropy { entropy: ent, floor: entropy_floor });
    }
    let energy = CycleEnergy { n: f.n() };
    let mut out = vec![0.0; f.n()];
    AlphaProblem { energy: &energy }.grad(f.values(), &mut out);
    CycleFunction::new(out)
}

/// `E_n(f,f) / Ent(f^2)`.
pub fn alpha_ratio(f: &CycleFunction) -> f64 {
    let (e, ent) = AlphaProblem { energy: &CycleEnergy { n: f.n() } }.parts(f.values());
    e / ent
}

/// `D(x) / <(x-1)^2 (x+2)>`.
pub fn cubic_ratio(x: &CycleFunction) -> f64 {
    let (d, c) = CubicProblem { n: x.n() }.parts(x.values());
    d / c
}
