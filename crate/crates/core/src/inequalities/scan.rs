//! Grid and randomized falsification scans.
//!
//! A scan never proves anything; it looks for the worst deficit over a
//! deterministic set of inputs and reports where it was found. Parallel scans
//! collect per-partition results and reduce them in partition order, so the
//! outcome does not depend on thread scheduling.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    case4_verify, case5_identity, case6_bounds, chain_deficit, cubic_report, extremal_identities,
    final_q_inequality_check, majorant_deficit, p3_identity_residual, scalar_discriminant,
    ScalarCase, ScalarTriple, PHI, SILVER,
};
use crate::cycle::{average, CycleFunction};
use crate::error::Result;
use crate::spectral::{
    kappa_closed, kappa_direct, linf_bound_check, project_v1, q_form, sigma_closed, sigma_sum,
};

/// Worst value of one checked quantity over a scan. `worst` is oriented like
/// a deficit: the check passes when `worst >= -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub name: String,
    pub checks: usize,
    pub worst: f64,
    pub location: Vec<f64>,
    pub tolerance: f64,
}

impl ScanSummary {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self { name: name.into(), checks: 0, worst: f64::INFINITY, location: Vec::new(), tolerance }
    }

    fn record(&mut self, value: f64, location: impl FnOnce() -> Vec<f64>) {
        self.checks += 1;
        if value < self.worst || value.is_nan() {
            self.worst = value;
            self.location = location();
        }
    }

    fn merge(mut self, other: ScanSummary) -> Self {
        self.checks += other.checks;
        if other.worst < self.worst || other.worst.is_nan() {
            self.worst = other.worst;
            self.location = other.location;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.worst >= -self.tolerance
    }
}

/// Seeded generator for stream `stream` of a run with seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Quasi-uniform points on the closed positive octant of the unit sphere: a
/// Fibonacci lattice folded into the octant by absolute values, plus the
/// three boundary arcs (`a = 0`, `r = 0`, `t = 0`) and the vertices.
pub fn octant_grid(points: usize) -> Vec<ScalarTriple> {
    let arc = (points / 1000).max(16);
    let bulk = points.saturating_sub(3 * arc + 3).max(1);
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut out = Vec::with_capacity(bulk + 3 * arc + 3);
    let mut push = |a: f64, r: f64, t: f64| {
        let s = (a * a + r * r + t * t).sqrt();
        out.push(
            ScalarTriple::new(a / s, r / s, t / s).expect("normalized octant point is valid"),
        );
    };
    for i in 0..bulk {
        let z = 1.0 - (2 * i + 1) as f64 / bulk as f64;
        let rad = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden * i as f64;
        push((rad * phi.cos()).abs(), (rad * phi.sin()).abs(), z.abs());
    }
    for i in 1..arc {
        let th = 0.5 * PI * i as f64 / arc as f64;
        let (c, s) = (th.cos(), th.sin());
        push(0.0, c, s);
        push(c, 0.0, s);
        push(c, s, 0.0);
    }
    push(1.0, 0.0, 0.0);
    push(0.0, 1.0, 0.0);
    push(0.0, 0.0, 1.0);
    out
}

/// The three scalar inequalities over [`octant_grid`].
pub fn scan_scalar(points: usize) -> Vec<ScanSummary> {
    let grid = octant_grid(points);
    ScalarCase::ALL
        .iter()
        .map(|&case| {
            let chunks: Vec<ScanSummary> = grid
                .par_chunks(4096)
                .map(|chunk| {
                    let mut s = ScanSummary::new(format!("scalar{}", case as u8 + 1), 1e-12);
                    for p in chunk {
                        s.record(case.deficit(p), || vec![p.a(), p.r(), p.t()]);
                    }
                    s
                })
                .collect();
            chunks.into_iter().reduce(ScanSummary::merge).expect("grid is not empty")
        })
        .collect()
}

/// Discriminants on a log grid over `[0, s_max]` (plus `s = 0` and the two
/// near-tight neighbourhoods of `phi` and `1 + sqrt 2`). Reported as `-Delta`,
/// so passing means `Delta < 0`.
pub fn scan_discriminants(points: usize, s_max: f64) -> Vec<ScanSummary> {
    let mut grid = vec![0.0];
    let lo = -8.0f64;
    let hi = s_max.log10();
    for i in 0..points {
        grid.push(10f64.powf(lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64));
    }
    for center in [PHI, SILVER] {
        for i in -1000..=1000 {
            grid.push(center * (1.0 + i as f64 * 1e-6));
        }
    }
    ScalarCase::ALL
        .iter()
        .map(|&case| {
            let mut s = ScanSummary::new(format!("discriminant{}", case as u8 + 1), 0.0);
            for &x in &grid {
                let d = scalar_discriminant(case, x);
                // strict: a zero discriminant counts as a failure
                let oriented = if d < 0.0 { -d } else { -d - f64::MIN_POSITIVE };
                s.record(oriented, || vec![x]);
            }
            s
        })
        .collect()
}

/// Completed-square identities on `[0, s_max]`, reported as `-|residual|`.
pub fn scan_extremal(points: usize, s_max: f64) -> Vec<ScanSummary> {
    let mut g1 = ScanSummary::new("identity_phi", 1e-12);
    let mut g2 = ScanSummary::new("identity_silver", 1e-12);
    for i in 0..points {
        let s = s_max * i as f64 / (points - 1).max(1) as f64;
        let (a, b) = extremal_identities(s);
        g1.record(-a.abs(), || vec![s]);
        g2.record(-b.abs(), || vec![s]);
    }
    vec![g1, g2]
}

/// `H(t)` on a log grid over `[t_min, t_max]`.
pub fn scan_majorant(points: usize, t_min: f64, t_max: f64) -> Result<ScanSummary> {
    let mut s = ScanSummary::new("majorant", 1e-12);
    let (lo, hi) = (t_min.log10(), t_max.log10());
    for i in 0..points {
        let t = 10f64.powf(lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64);
        s.record(majorant_deficit(t)?, || vec![t]);
    }
    // the touching point
    s.record(majorant_deficit(1.0)?, || vec![1.0]);
    Ok(s)
}

/// `P_3` identity on a uniform grid, residual scaled by `max(1, |t|^3)` and
/// reported as `-|scaled residual|`.
pub fn scan_p3_identity(points: usize, t_min: f64, t_max: f64) -> ScanSummary {
    let mut s = ScanSummary::new("p3_identity", 1e-12);
    for i in 0..points {
        let t = t_min + (t_max - t_min) * i as f64 / (points - 1).max(1) as f64;
        let scaled = p3_identity_residual(t).abs() / t.abs().powi(3).max(1.0);
        s.record(-scaled, || vec![t]);
    }
    s
}

/// A random function `z` orthogonal to constants and `V1`.
pub fn random_high_frequency(rng: &mut ChaCha8Rng, n: usize) -> CycleFunction {
    let x = CycleFunction::from_fn(n, |_| rng.random_range(-1.0..1.0)).unwrap();
    let v = project_v1(&x);
    let a = average(&x);
    CycleFunction::from_fn(n, |j| x[j] - a - v[j]).unwrap()
}

/// A random nonzero element of `V1`.
pub fn random_v1(rng: &mut ChaCha8Rng, n: usize) -> CycleFunction {
    let (p, q): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let (p, q) = if p == 0.0 && q == 0.0 { (1.0, 0.0) } else { (p, q) };
    let c = CycleFunction::cos_mode(n, 1).unwrap();
    let s = CycleFunction::sin_mode(n, 1).unwrap();
    CycleFunction::from_fn(n, |j| p * c[j] + q * s[j]).unwrap()
}

/// Constant identities of the high-frequency lemma for each `n`, then the
/// two coercivity bounds on random high-frequency functions.
pub fn scan_highfreq(ns: &[usize], trials: usize, seed: u64) -> Result<Vec<ScanSummary>> {
    let mut sig = ScanSummary::new("sigma_closed_vs_sum", 1e-10);
    let mut kap = ScanSummary::new("kappa_closed_vs_direct", 1e-12);
    let mut linf = ScanSummary::new("linf_bound", 1e-10);
    let mut gap = ScanSummary::new("gap_bound", 1e-12);
    for &n in ns {
        let sc = sigma_closed(n)?;
        let ss = sigma_sum(n)?;
        sig.record(-((sc - ss) / sc).abs(), || vec![n as f64]);
        kap.record(-(kappa_closed(n)? - kappa_direct(n)?).abs(), || vec![n as f64]);
        let mut rng = stream_rng(seed, n as u64);
        let k = kappa_closed(n)?;
        for _ in 0..trials {
            let z = random_high_frequency(&mut rng, n);
            let (lhs, rhs) = linf_bound_check(&z)?;
            linf.record(lhs - rhs, || z.values().to_vec());
            let ms = crate::cycle::mean_square(&z);
            gap.record(q_form(&z) - k * ms, || z.values().to_vec());
        }
    }
    Ok(vec![sig, kap, linf, gap])
}

/// Random nonnegative function with `<x^2> = 1`, drawn from a mixture of
/// uniform, near-constant, sparse, first-frequency and heavy-tailed shapes.
pub fn sample_admissible(rng: &mut ChaCha8Rng, n: usize) -> CycleFunction {
    loop {
        let kind = rng.random_range(0..5u8);
        let vals: Vec<f64> = match kind {
            0 => (0..n).map(|_| rng.random::<f64>()).collect(),
            1 => {
                let eps = 10f64.powf(rng.random_range(-4.0..-0.3));
                (0..n).map(|_| (1.0 + eps * rng.random_range(-1.0..1.0)).max(0.0)).collect()
            }
            2 => {
                let p = rng.random_range(0.1..0.9);
                (0..n)
                    .map(|_| if rng.random::<f64>() < p { rng.random::<f64>() } else { 0.0 })
                    .collect()
            }
            3 => {
                let eps = 10f64.powf(rng.random_range(-3.0..0.0));
                let noise = 10f64.powf(rng.random_range(-6.0..-1.0));
                let ph = rng.random_range(0.0..2.0 * PI);
                (0..n)
                    .map(|j| {
                        let th = 2.0 * PI * j as f64 / n as f64 + ph;
                        (1.0 + eps * th.cos() + noise * rng.random_range(-1.0..1.0)).max(0.0)
                    })
                    .collect()
            }
            _ => {
                let k = rng.random_range(1..6);
                (0..n).map(|_| rng.random::<f64>().powi(k)).collect()
            }
        };
        if let Some(x) = CycleFunction::new(vals).ok().and_then(|f| f.normalized()) {
            // renormalization can leave exact zeros negative-signed; keep them at +0
            return x.map(|v| v.max(0.0));
        }
    }
}

/// Random search for violations of the cubic inequality on one cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicSearch {
    pub n: usize,
    pub summary: ScanSummary,
    /// The `keep` samples with the smallest deficit, ascending.
    pub worst: Vec<(f64, CycleFunction)>,
}

pub fn cubic_random_search(n: usize, trials: usize, seed: u64, keep: usize) -> CubicSearch {
    let mut rng = stream_rng(seed, n as u64);
    let mut summary = ScanSummary::new(format!("cubic_n{n}"), 1e-10);
    let mut worst: Vec<(f64, CycleFunction)> = Vec::with_capacity(keep + 1);
    for _ in 0..trials {
        let x = sample_admissible(&mut rng, n);
        let d = cubic_report(&x).deficit;
        summary.record(d, || x.values().to_vec());
        if keep > 0 && (worst.len() < keep || d < worst[worst.len() - 1].0) {
            let pos = worst.partition_point(|(w, _)| *w <= d);
            worst.insert(pos, (d, x));
            worst.truncate(keep);
        }
    }
    CubicSearch { n, summary, worst }
}

/// [`cubic_random_search`] for several `n` in parallel, results in input order.
pub fn scan_cubic(ns: &[usize], trials: usize, seed: u64, keep: usize) -> Vec<CubicSearch> {
    ns.par_iter().map(|&n| cubic_random_search(n, trials, seed, keep)).collect()
}

/// Proof-case verifiers on random inputs.
pub fn scan_cases(trials: usize, seed: u64, n_max: usize) -> Result<Vec<ScanSummary>> {
    let mut c4 = ScanSummary::new("case4", 1e-12);
    let mut c5 = ScanSummary::new("case5", 1e-12);
    let mut c6 = ScanSummary::new("case6", 1e-10);
    let mut rng = stream_rng(seed, 4);
    for _ in 0..trials {
        let (p, q, c) = (
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let r = case4_verify(p, q, c)?;
        c4.record((-r.max_residual()).min(r.bound_slack), || vec![p, q, c]);
    }

    let mut rng = stream_rng(seed, 5);
    for _ in 0..trials {
        let a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let b = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let scale = (a.norm() + b.norm()).powi(3).max(1.0);
        c5.record(-case5_identity(a, b) / scale, || vec![a.re, a.im, b.re, b.im]);
    }

    let mut rng = stream_rng(seed, 6);
    for i in 0..trials {
        let n = 6 + i % (n_max - 5);
        let amp_v = 10f64.powf(rng.random_range(-2.0..0.5));
        let amp_z = 10f64.powf(rng.random_range(-2.0..0.5));
        let v = random_v1(&mut rng, n).scale(amp_v);
        let z = random_high_frequency(&mut rng, n).scale(amp_z);
        let r = case6_bounds(&v, &z)?;
        c6.record(r.min_slack(), || {
            let mut loc = vec![n as f64];
            loc.extend(v.iter().chain(z.iter()));
            loc
        });
    }

    Ok(vec![c4, c5, c6, scan_final_q(n_max)?])
}

/// The final quadratic inequality on the grid `t in [0, 1]`,
/// `Q in [kappa_n t^2, 10]`, `n in 6..=n_max`.
pub fn scan_final_q(n_max: usize) -> Result<ScanSummary> {
    let mut fq = ScanSummary::new("final_q", 1e-12);
    for n in 6..=n_max.max(6) {
        let kappa = kappa_closed(n)?;
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let q_lo = kappa * t * t;
            for j in 0..=100 {
                let q = q_lo + (10.0 - q_lo).max(0.0) * j as f64 / 100.0;
                let d = final_q_inequality_check(q, t, n)?;
                fq.record(d, || vec![q, t, n as f64]);
            }
        }
    }
    Ok(fq)
}

/// Agreement between the direct cubic deficit and the one reassembled from
/// the orthogonal split, reported as `-|difference|`.
pub fn scan_chain(ns: &[usize], trials: usize, seed: u64) -> Result<ScanSummary> {
    let mut s = ScanSummary::new("chain", 1e-10);
    for &n in ns {
        let mut rng = stream_rng(seed, 1000 + n as u64);
        for _ in 0..trials {
            let x = sample_admissible(&mut rng, n);
            let direct = cubic_report(&x).deficit;
            let chained = chain_deficit(&x)?;
            s.record(-(direct - chained).abs(), || x.values().to_vec());
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::mean_square;

    #[test]
    fn octant_grid_covers_edges() {
        let g = octant_grid(20_000);
        assert!(g.len() >= 20_000 - 10);
        assert!(g.iter().any(|p| p.a() == 1.0));
        assert!(g.iter().filter(|p| p.t() == 0.0).count() >= 16);
        assert!(g.iter().all(|p| p.a() >= 0.0 && p.r() >= 0.0 && p.t() >= 0.0));
    }

    #[test]
    fn small_scans_pass() {
        assert!(scan_scalar(20_000).iter().all(ScanSummary::passed));
        assert!(scan_discriminants(2_000, 1e6).iter().all(ScanSummary::passed));
        assert!(scan_extremal(2_000, 10.0).iter().all(ScanSummary::passed));
        assert!(scan_majorant(2_000, 1e-8, 1e8).unwrap().passed());
        assert!(scan_p3_identity(2_000, -1e3, 1e3).passed());
        assert!(scan_highfreq(&[4, 5, 6, 9, 16], 50, 1).unwrap().iter().all(ScanSummary::passed));
        assert!(scan_cases(300, 2, 16).unwrap().iter().all(ScanSummary::passed));
        assert!(scan_chain(&[4, 5, 7, 12], 200, 3).unwrap().passed());
    }

    #[test]
    fn samples_are_admissible() {
        let mut rng = stream_rng(9, 0);
        for n in [4, 7, 32] {
            for _ in 0..500 {
                let x = sample_admissible(&mut rng, n);
                assert!(x.is_nonnegative());
                assert!((mean_square(&x) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cubic_search_keeps_sorted_worst() {
        let s = cubic_random_search(6, 2_000, 4, 10);
        assert_eq!(s.worst.len(), 10);
        assert!(s.worst.windows(2).all(|w| w[0].0 <= w[1].0));
        assert_eq!(s.worst[0].0, s.summary.worst);
        assert!(s.summary.passed());
    }

    #[test]
    fn scans_are_deterministic() {
        let a = scan_cubic(&[4, 9], 500, 11, 3);
        let b = scan_cubic(&[4, 9], 500, 11, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn violations_are_reported() {
        let mut s = ScanSummary::new("x", 1e-12);
        s.record(1.0, || vec![1.0]);
        s.record(-1.0, || vec![2.0]);
        assert!(!s.passed());
        assert_eq!(s.location, vec![2.0]);
    }
}
