//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.
//!
//! Reference values are computed here from scratch (dense eigensolves,
//! literal trigonometric formulas) rather than taken from the library.

use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use cycle_lsi::inequalities::scan::{
    random_v1, scan_cases, scan_cubic, scan_discriminants, scan_extremal, scan_final_q,
    scan_majorant, scan_p3_identity, scan_scalar, stream_rng, ScanSummary,
};
use cycle_lsi::inequalities::{cubic_deficit, p3_identity_residual};
use cycle_lsi::optimize::{perturbation_scan, refine_cubic};
use cycle_lsi::products::{estimate_alpha_product, ProductSpace};
use cycle_lsi::semigroup::{heat_apply, hypercontractivity_check, min_admissible_time, SemigroupQuery};
use cycle_lsi::spectral::{kappa_closed, kappa_direct, sigma_closed, sigma_sum, spectral_gap_numeric};
use cycle_lsi::{
    estimate_alpha, estimate_cubic_constant, lambda, mean_square, variance, CycleFunction,
    OptimizerConfig, Projection,
};

const SEED: u64 = 42;

/// `1 - cos(2 pi / n)` written as `2 sin^2(pi / n)`, evaluated independently
/// of the library.
fn gap_formula(n: usize) -> f64 {
    2.0 * (PI / n as f64).sin().powi(2)
}

/// Second smallest eigenvalue of the dense matrix `I - K`.
fn dense_gap(n: usize) -> f64 {
    let mut m = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        m[(i, (i + 1) % n)] -= 0.5;
        m[(i, (i + n - 1) % n)] -= 0.5;
    }
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev[1]
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(checks: &[(bool, String)]) -> Self {
        let pass = checks.iter().all(|c| c.0);
        let detail = checks
            .iter()
            .map(|(ok, s)| if *ok { s.clone() } else { format!("[violated] {s}") })
            .collect::<Vec<_>>()
            .join("; ");
        Self { pass, detail }
    }
}

fn summary_line(s: &ScanSummary) -> (bool, String) {
    (s.passed(), format!("{} worst {:.3e} over {} checks (tol {:.0e})", s.name, s.worst, s.checks, s.tolerance))
}

fn constants_table() -> Outcome {
    let gaps: Vec<(usize, f64, f64)> = (4..=512usize)
        .into_par_iter()
        .map(|n| {
            let numeric = spectral_gap_numeric(n).unwrap().value;
            (n, (numeric - gap_formula(n)).abs(), (lambda(n) - gap_formula(n)).abs())
        })
        .collect();
    let worst_iter = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    let worst_closed = gaps.iter().map(|g| g.2).fold(0.0, f64::max);
    let dense_ns: Vec<usize> = (4..=64).chain([100, 128, 256, 383, 512]).collect();
    let worst_dense = dense_ns
        .par_iter()
        .map(|&n| (dense_gap(n) - lambda(n)).abs())
        .reduce(|| 0.0, f64::max);

    let mut worst_sigma = 0.0f64;
    let mut worst_kappa = 0.0f64;
    let mut worst_kappa_oracle = 0.0f64;
    let mut worst_lambda_big = 0.0f64;
    for n in 4..=2048usize {
        let sc = sigma_closed(n).unwrap();
        worst_sigma = worst_sigma.max(((sc - sigma_sum(n).unwrap()) / sc).abs());
        let kc = kappa_closed(n).unwrap();
        worst_kappa = worst_kappa.max((kc - kappa_direct(n).unwrap()).abs());
        let lam = gap_formula(n);
        let oracle = (2..=n - 2)
            .map(|k| 4.0 * (PI * k.min(n - k) as f64 / n as f64).sin().powi(2) / lam - 2.0)
            .fold(f64::INFINITY, f64::min);
        worst_kappa_oracle = worst_kappa_oracle.max((kc - oracle).abs());
        worst_lambda_big = worst_lambda_big.max((lambda(n) - lam).abs());
    }
    Outcome::new(&[
        (worst_iter <= 1e-9, format!("inverse-iteration gap vs formula, n=4..512: {worst_iter:.2e}")),
        (worst_closed <= 1e-9, format!("closed form vs formula, n=4..512: {worst_closed:.2e}")),
        (worst_dense <= 1e-9, format!("dense eigensolve vs closed form, {} sizes: {worst_dense:.2e}", dense_ns.len())),
        (worst_lambda_big <= 1e-12, format!("closed form vs formula, n=4..2048: {worst_lambda_big:.2e}")),
        (worst_sigma <= 1e-10, format!("sigma closed vs sum (rel), n=4..2048: {worst_sigma:.2e}")),
        (worst_kappa <= 1e-12, format!("kappa closed vs direct, n=4..2048: {worst_kappa:.2e}")),
        (worst_kappa_oracle <= 1e-12, format!("kappa closed vs independent minimum: {worst_kappa_oracle:.2e}")),
    ])
}

fn log_sobolev_constant() -> Outcome {
    let cfg = OptimizerConfig::default();
    let sq = OptimizerConfig { projection: Projection::SquareReparam, ..cfg.clone() };
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    let mut worst_interior = 0.0f64;
    let mut worst_proj = 0.0f64;
    for n in 4..=16usize {
        let target = gap_formula(n) / 2.0;
        let r = estimate_alpha(n, &cfg).unwrap();
        worst = worst.max((r.value - target).abs());
        worst_interior = worst_interior.max((r.interior_value - target).abs());
        let s = estimate_alpha(n, &sq).unwrap();
        worst_proj = worst_proj.max((s.value - r.value).abs());
    }
    checks.push((worst <= 1e-6, format!("n=4..16 |alpha - lambda/2| max {worst:.2e}")));
    checks.push((
        worst_interior <= 1e-6,
        format!("n=4..16 interior search alone within {worst_interior:.2e}"),
    ));

    let a2 = estimate_alpha(2, &cfg).unwrap();
    checks.push(((a2.value - 1.0).abs() <= 1e-6, format!("alpha_2 = {:.10}", a2.value)));

    let a3 = estimate_alpha(3, &cfg).unwrap();
    let oracle = 1.0 / (2.0 * LN_2);
    checks.push((a3.value < 0.75 - 1e-3, format!("alpha_3 = {:.12} < 0.749", a3.value)));
    checks.push((
        (a3.interior_value - oracle).abs() <= 1e-9,
        format!("alpha_3 vs frozen brute-force value 1/(2 ln 2): {:.2e}", (a3.interior_value - oracle).abs()),
    ));
    for n in [2, 3] {
        let r = estimate_alpha(n, &cfg).unwrap().value;
        let s = estimate_alpha(n, &sq).unwrap().value;
        worst_proj = worst_proj.max((r - s).abs());
    }
    checks.push((worst_proj <= 1e-6, format!("projection modes agree within {worst_proj:.2e}")));

    let mut worst_floor = 0.0f64;
    for n in [2, 3, 4, 5, 9, 16] {
        let base = estimate_alpha(n, &cfg).unwrap().value;
        for floor in [1e-7, 1e-9] {
            let r = estimate_alpha(n, &OptimizerConfig { entropy_floor: floor, ..cfg.clone() }).unwrap();
            worst_floor = worst_floor.max((r.value - base).abs());
        }
    }
    checks.push((worst_floor <= 1e-7, format!("entropy floor x10 sensitivity {worst_floor:.2e}")));
    Outcome::new(&checks)
}

fn cubic_inequality() -> Outcome {
    let ns: Vec<usize> = (4..=32).collect();
    let searches = scan_cubic(&ns, 100_000, SEED, 100);
    let mut checks = Vec::new();
    let worst_random = searches.iter().map(|s| s.summary.worst).fold(f64::INFINITY, f64::min);
    let all_pass = searches.iter().all(|s| s.summary.passed());
    let total: usize = searches.iter().map(|s| s.summary.checks).sum();
    checks.push((all_pass, format!("{total} random samples, min deficit {worst_random:.3e}")));

    let cfg = OptimizerConfig::default();
    let seeds: Vec<&CycleFunction> = searches.iter().flat_map(|s| s.worst.iter().map(|w| &w.1)).collect();
    let refined: Vec<f64> = seeds
        .par_iter()
        .map(|x| {
            let r = refine_cubic(x, &cfg).unwrap();
            r.deficit.min(cubic_deficit(&r.argmin).unwrap().deficit)
        })
        .collect();
    let worst_refined = refined.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push((
        worst_refined >= -1e-8,
        format!("{} refined seeds, min deficit {worst_refined:.3e}", refined.len()),
    ));

    for n in [4usize, 5, 6, 8, 12, 32, 64] {
        let target = 2.0 * gap_formula(n) / 3.0;
        let r = estimate_cubic_constant(n, &cfg).unwrap();
        let ok = r.value >= target - 1e-8
            && r.value <= target + 1e-6
            && r.interior_value >= target - 1e-8;
        checks.push((
            ok,
            format!("n={n} estimate {:.10} (interior {:+.1e} from 2lambda/3)", r.value, r.interior_value - target),
        ));
    }
    Outcome::new(&checks)
}

fn saturation() -> Outcome {
    let eps: Vec<f64> = (0..=6).map(|k| 0.2 * 0.5f64.powi(k)).collect();
    let mut checks = Vec::new();
    for n in [4usize, 5, 8, 16] {
        let mut rng = stream_rng(SEED, 4000 + n as u64);
        let v = random_v1(&mut rng, n);
        let v = v.scale(1.0 / cycle_lsi::sup_norm(&v));
        let pts = perturbation_scan(&v, &eps).unwrap();
        let monotone = pts.windows(2).all(|w| w[1].scaled < w[0].scaled);
        let drop = pts[6].scaled / pts[0].scaled;
        checks.push((monotone && drop < 1e-3, format!("n={n} V1: ratio k=6/k=0 {drop:.2e}")));

        let w = CycleFunction::from_fn(n, |j| (4.0 * PI * j as f64 / n as f64).cos()).unwrap();
        let pts = perturbation_scan(&w, &eps).unwrap();
        // second-order limit lambda_n (mu_2/lambda_n - 2) <w^2>
        let mu2 = 4.0 * (2.0 * PI / n as f64).sin().powi(2);
        let limit = (mu2 - 2.0 * gap_formula(n)) * mean_square(&w);
        let last = pts[6].scaled;
        let settling = pts.windows(3).all(|t| (t[2].scaled - t[1].scaled).abs() <= (t[1].scaled - t[0].scaled).abs());
        checks.push((
            last > 1e-3 && (last - limit).abs() < 1e-2 * limit && settling,
            format!("n={n} k=2: {last:.5} (limit {limit:.5})"),
        ));
    }
    Outcome::new(&checks)
}

fn lemma_suite() -> Outcome {
    let mut checks: Vec<(bool, String)> = Vec::new();
    checks.extend(scan_scalar(1_000_000).iter().map(summary_line));
    checks.extend(scan_discriminants(1_000_000, 1e6).iter().map(summary_line));
    checks.extend(scan_extremal(1_000_000, 10.0).iter().map(summary_line));
    checks.push(summary_line(&scan_majorant(1_000_000, 1e-8, 1e8).unwrap()));
    checks.push(summary_line(&scan_p3_identity(1_000_000, -1e3, 1e3)));
    let raw = (0..=200_000)
        .map(|i| -1.0 + 2.0 * i as f64 / 200_000.0)
        .map(|t| p3_identity_residual(t).abs())
        .fold(0.0, f64::max);
    checks.push((raw < 1e-12, format!("p3 identity unscaled on [-1, 1]: {raw:.2e}")));
    Outcome::new(&checks)
}

fn proof_cases() -> Outcome {
    // the final quadratic inequality is scanned separately up to n = 100
    let mut checks: Vec<(bool, String)> = scan_cases(10_000, SEED, 64)
        .unwrap()
        .iter()
        .filter(|s| s.name != "final_q")
        .map(summary_line)
        .collect();
    checks.push(summary_line(&scan_final_q(100).unwrap()));
    Outcome::new(&checks)
}

fn tensorization() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut checks = Vec::new();
    for (factors, sharp) in [
        (vec![(4usize, 1.0), (4, 1.0)], gap_formula(4) / 2.0),
        (vec![(4, 1.0), (6, 1.0)], (gap_formula(4) / 2.0).min(gap_formula(6) / 2.0)),
    ] {
        let start = Instant::now();
        let space = ProductSpace::new(&factors).unwrap();
        let r = estimate_alpha_product(&space, &cfg).unwrap();
        checks.push((
            (r.value - sharp).abs() <= 1e-5,
            format!(
                "{factors:?}: {:.8} vs {sharp:.8} (interior {:+.1e}, {:.1?})",
                r.value,
                r.interior_value - sharp,
                start.elapsed()
            ),
        ));
    }
    Outcome::new(&checks)
}

fn hypercontractivity() -> Outcome {
    let mut checks = Vec::new();
    let mut worst = f64::INFINITY;
    let mut worst_boundary = f64::INFINITY;
    let mut worst_law = 0.0f64;
    let mut worst_decay = f64::INFINITY;
    let mut trials = 0;
    for n in [4usize, 8, 16, 32] {
        let mut rng = stream_rng(SEED, 8000 + n as u64);
        for i in 0..10_000 {
            let spread = 10f64.powf(rng.random_range(-3.0..0.5));
            let f = CycleFunction::from_fn(n, |_| (1.0 + spread * rng.random_range(-1.0..1.0)).abs()).unwrap();
            let p = 1.0 + 10f64.powf(rng.random_range(-2.0..1.0));
            let q = 1.0 + 10f64.powf(rng.random_range(-2.0..1.5));
            let boundary = i % 4 == 0;
            let t0 = min_admissible_time(n, p, q);
            let t = if boundary { t0 } else { t0 + rng.random_range(0.0..3.0) / lambda(n) };
            let query = SemigroupQuery::new(n, t, p, q).unwrap();
            let d = hypercontractivity_check(&f, &query).unwrap().deficit;
            worst = worst.min(d);
            if boundary {
                worst_boundary = worst_boundary.min(d);
            }
            trials += 1;

            let (s, u) = (rng.random_range(0.0..5.0), rng.random_range(0.0..5.0));
            let g = CycleFunction::from_fn(n, |_| rng.random_range(-2.0..2.0)).unwrap();
            let two = heat_apply(&heat_apply(&g, s).unwrap(), u).unwrap();
            let one = heat_apply(&g, s + u).unwrap();
            worst_law = worst_law.max((0..n).map(|j| (two[j] - one[j]).abs()).fold(0.0, f64::max));
            let bound = (-2.0 * gap_formula(n) * u).exp() * variance(&g);
            worst_decay = worst_decay.min(bound + 1e-12 - variance(&heat_apply(&g, u).unwrap()));
        }
    }
    checks.push((worst >= -1e-10, format!("{trials} admissible trials, min deficit {worst:.3e}")));
    checks.push((worst_boundary >= -1e-10, format!("boundary-time trials min deficit {worst_boundary:.3e}")));
    checks.push((worst_law <= 1e-11, format!("semigroup law max error {worst_law:.2e}")));
    checks.push((worst_decay >= 0.0, format!("variance decay min slack {worst_decay:.2e}")));
    Outcome::new(&checks)
}

fn continuum_scaling() -> Outcome {
    let target = 2.0 * PI * PI;
    let errs: Vec<(usize, f64)> = [100usize, 1_000, 10_000, 100_000]
        .iter()
        .map(|&n| (n, ((n * n) as f64 * lambda(n) - target).abs()))
        .collect();
    let monotone = errs.windows(2).all(|w| w[1].1 < w[0].1);
    let last = errs[3].1;
    let numeric = spectral_gap_numeric(100_000).unwrap().value;
    let rel = (numeric - lambda(100_000)).abs() / lambda(100_000);
    Outcome::new(&[
        (monotone, format!("errors {:?}", errs.iter().map(|e| format!("{:.2e}", e.1)).collect::<Vec<_>>())),
        (last < 1e-5, format!("n=1e5 error {last:.2e}")),
        (rel < 1e-9, format!("n=1e5 inverse-iteration gap relative error {rel:.2e}")),
    ])
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("constants table", constants_table),
        ("log-Sobolev constant", log_sobolev_constant),
        ("cubic Sobolev inequality", cubic_inequality),
        ("saturation", saturation),
        ("lemma suite", lemma_suite),
        ("proof-case identities", proof_cases),
        ("tensorization", tensorization),
        ("hypercontractivity", hypercontractivity),
        ("continuum scaling", continuum_scaling),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("{status} {} {name} ({:.1?}): {}", i + 1, start.elapsed(), out.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
