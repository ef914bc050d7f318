//! Command implementations. Each returns the rows of its report and whether
//! any check was violated or any optimization failed to converge.

use std::fmt;
use std::ops::RangeInclusive;

use rand::Rng;
use serde_json::Value;

use cycle_lsi::inequalities::scan::{
    scan_cases, scan_chain, scan_cubic, scan_discriminants, scan_extremal, scan_highfreq,
    scan_majorant, scan_p3_identity, scan_scalar, stream_rng, ScanSummary,
};
use cycle_lsi::inequalities::cubic_deficit;
use cycle_lsi::optimize::refine_cubic;
use cycle_lsi::products::{estimate_alpha_product, sharp_constant, ProductSpace};
use cycle_lsi::semigroup::{hypercontractivity_deficit, SemigroupQuery};
use cycle_lsi::spectral::{kappa_closed, kappa_direct, sigma_closed, sigma_sum, spectral_gap_numeric};
use cycle_lsi::{estimate_alpha, estimate_cubic_constant, lambda, CycleFunction, Error, OptimizerConfig};

use crate::report::{Row, RunManifest};
use crate::{EstimateArgs, EstimateTarget, HyperArgs, VerifyArgs, VerifyTarget};

/// Invalid input that the argument parser could not catch.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

pub struct Outcome {
    pub command: String,
    pub parameters: Row,
    pub results: Vec<Row>,
    pub violation: bool,
    pub nonconverged: bool,
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(command: &str, parameters: Row) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            results: Vec::new(),
            violation: false,
            nonconverged: false,
            notes: Vec::new(),
        }
    }

    pub fn manifest(&self, seed: u64) -> RunManifest {
        RunManifest::new(&self.command, self.parameters.clone(), seed, self.results.clone())
    }

    fn push_summary(&mut self, s: &ScanSummary) {
        self.violation |= !s.passed();
        self.results.push(
            Row::new()
                .with("check", s.name.as_str())
                .with("checks", s.checks)
                .num("worst", s.worst)
                .num("tolerance", s.tolerance)
                .with("passed", s.passed())
                .with("location", s.location.clone()),
        );
    }
}

fn range_str(r: &RangeInclusive<usize>) -> String {
    format!("{}..{}", r.start(), r.end())
}

fn require_min(r: &RangeInclusive<usize>, min: usize, what: &str) -> Result<(), UsageError> {
    if *r.start() < min {
        return Err(UsageError(format!("{what} requires n >= {min}, got {}", r.start())));
    }
    Ok(())
}

fn optimizer_params(row: Row, cfg: &OptimizerConfig) -> Row {
    row.with("restarts", cfg.restarts)
        .with("max_iters", cfg.max_iters)
        .num("step_init", cfg.step_init)
        .num("armijo_shrink", cfg.armijo_shrink)
        .num("grad_tol", cfg.grad_tol)
        .num("entropy_floor", cfg.entropy_floor)
        .with("projection", serde_json::to_value(cfg.projection).unwrap_or(Value::Null))
}

const SIGMA_RTOL: f64 = 1e-10;
const KAPPA_TOL: f64 = 1e-12;

pub fn constants(n: RangeInclusive<usize>) -> Result<Outcome, UsageError> {
    require_min(&n, 2, "constants")?;
    let mut out = Outcome::new("constants", Row::new().with("n", range_str(&n)));
    for k in n {
        let lam = lambda(k);
        let mut row = Row::new()
            .with("n", k)
            .num("lambda", lam)
            .num("alpha", lam / 2.0)
            .num("cubic", 2.0 * lam / 3.0);
        if k >= 4 {
            let (sc, ss) = (sigma_closed(k)?, sigma_sum(k)?);
            let (kc, kd) = (kappa_closed(k)?, kappa_direct(k)?);
            let (rs, rk) = (((sc - ss) / sc).abs(), (kc - kd).abs());
            out.violation |= rs > SIGMA_RTOL || rk > KAPPA_TOL;
            row = row
                .num("sigma_closed", sc)
                .num("sigma_sum", ss)
                .num("sigma_residual", rs)
                .num("kappa_closed", kc)
                .num("kappa_direct", kd)
                .num("kappa_residual", rk)
                .with("flag", "");
        } else {
            row = row
                .opt("sigma_closed", None)
                .opt("sigma_sum", None)
                .opt("sigma_residual", None)
                .opt("kappa_closed", None)
                .opt("kappa_direct", None)
                .opt("kappa_residual", None)
                .with("flag", "outside n >= 4");
        }
        out.results.push(row);
    }
    Ok(out)
}

pub fn verify(args: &VerifyArgs, seed: u64) -> Result<Outcome, UsageError> {
    let name = format!("verify {}", format!("{:?}", args.target).to_lowercase());
    let mut params = Row::new();
    let summaries: Vec<ScanSummary> = match args.target {
        VerifyTarget::Scalar => {
            params = params.with("grid", args.grid);
            let mut s = scan_scalar(args.grid);
            s.extend(scan_discriminants(args.grid, 1e6));
            s.extend(scan_extremal(args.grid, 10.0));
            s
        }
        VerifyTarget::Majorant => {
            if !(args.t_min > 0.0 && args.t_min < args.t_max) {
                return Err(UsageError(format!("need 0 < t-min < t-max, got {} and {}", args.t_min, args.t_max)));
            }
            params = params.with("grid", args.grid).num("t_min", args.t_min).num("t_max", args.t_max);
            vec![scan_majorant(args.grid, args.t_min, args.t_max)?, scan_p3_identity(args.grid, -1e3, 1e3)]
        }
        VerifyTarget::Highfreq => {
            require_min(&args.n, 4, "verify highfreq")?;
            params = params.with("n", range_str(&args.n)).with("trials", args.trials);
            let ns: Vec<usize> = args.n.clone().collect();
            scan_highfreq(&ns, args.trials, seed)?
        }
        VerifyTarget::Cubic => {
            require_min(&args.n, 4, "verify cubic")?;
            params = params
                .with("n", range_str(&args.n))
                .with("trials", args.trials)
                .with("refine", args.refine);
            let ns: Vec<usize> = args.n.clone().collect();
            let searches = scan_cubic(&ns, args.trials, seed, args.refine);
            let cfg = OptimizerConfig { seed, ..OptimizerConfig::default() };
            let mut out = Vec::new();
            for search in searches {
                out.push(search.summary.clone());
                if args.refine > 0 {
                    let mut worst = f64::INFINITY;
                    let mut location = Vec::new();
                    for (_, x) in &search.worst {
                        let r = refine_cubic(x, &cfg)?;
                        let d = r.deficit.min(cubic_deficit(&r.argmin)?.deficit);
                        if d < worst {
                            worst = d;
                            location = r.argmin.values().to_vec();
                        }
                    }
                    out.push(ScanSummary {
                        name: format!("refined_n{}", search.n),
                        checks: search.worst.len(),
                        worst,
                        location,
                        tolerance: 1e-8,
                    });
                }
            }
            out
        }
        VerifyTarget::Cases => {
            if args.n_max < 6 {
                return Err(UsageError("--n-max must be at least 6".into()));
            }
            params = params.with("trials", args.trials).with("n_max", args.n_max);
            scan_cases(args.trials, seed, args.n_max)?
        }
        VerifyTarget::Chain => {
            require_min(&args.n, 4, "verify chain")?;
            params = params.with("n", range_str(&args.n)).with("trials", args.trials);
            let ns: Vec<usize> = args.n.clone().collect();
            vec![scan_chain(&ns, args.trials, seed)?]
        }
    };
    let mut out = Outcome::new(&name, params);
    for s in &summaries {
        out.push_summary(s);
    }
    Ok(out)
}

pub fn estimate(args: &EstimateArgs, seed: u64) -> Result<Outcome, UsageError> {
    let cfg = args.opt.config(seed);
    cfg.validate()?;
    let base = Row::new().with("n", range_str(&args.n));
    match args.target {
        EstimateTarget::Alpha => {
            require_min(&args.n, 2, "estimate alpha")?;
            let mut out = Outcome::new("estimate alpha", optimizer_params(base, &cfg));
            for n in args.n.clone() {
                let r = estimate_alpha(n, &cfg)?;
                let reference = lambda(n) / 2.0;
                let flag = match n {
                    3 if r.value < reference => "strict inequality alpha_3 < lambda_3/2",
                    3 => "expected alpha_3 < lambda_3/2",
                    _ if !r.converged => "not converged",
                    _ => "",
                };
                if n != 3 {
                    out.violation |= r.value > reference + 1e-9;
                }
                out.nonconverged |= !r.converged;
                out.results.push(ratio_row(n, r.value, r.interior_value, reference, r.restarts_used, r.converged, r.iterations, flag));
            }
            Ok(out)
        }
        EstimateTarget::CubicConstant => {
            require_min(&args.n, 4, "estimate cubic-constant")?;
            let mut out = Outcome::new("estimate cubic-constant", optimizer_params(base, &cfg));
            for n in args.n.clone() {
                let r = estimate_cubic_constant(n, &cfg)?;
                let reference = 2.0 * lambda(n) / 3.0;
                let below = r.interior_value < reference - 1e-8;
                out.violation |= below;
                out.nonconverged |= !r.converged;
                let flag = if below {
                    "interior value below 2 lambda/3"
                } else if !r.converged {
                    "not converged"
                } else {
                    ""
                };
                out.results.push(ratio_row(n, r.value, r.interior_value, reference, r.restarts_used, r.converged, r.iterations, flag));
            }
            Ok(out)
        }
        EstimateTarget::Gap => {
            require_min(&args.n, 2, "estimate gap")?;
            let mut out = Outcome::new("estimate gap", base);
            for n in args.n.clone() {
                let reference = lambda(n);
                let (value, iterations, converged) = match spectral_gap_numeric(n) {
                    Ok(g) => (g.value, g.iterations, true),
                    Err(Error::NonConvergence { iterations, .. }) => (f64::NAN, iterations, false),
                    Err(e) => return Err(e.into()),
                };
                let rel = ((value - reference) / reference).abs();
                out.violation |= converged && !(rel <= 1e-9);
                out.nonconverged |= !converged;
                out.results.push(
                    Row::new()
                        .with("n", n)
                        .num("estimate", value)
                        .num("reference", reference)
                        .num("relative_gap", rel)
                        .with("iterations", iterations)
                        .with("converged", converged),
                );
            }
            Ok(out)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn ratio_row(
    n: usize,
    value: f64,
    interior: f64,
    reference: f64,
    restarts: usize,
    converged: bool,
    iterations: usize,
    flag: &str,
) -> Row {
    Row::new()
        .with("n", n)
        .num("estimate", value)
        .num("interior", interior)
        .num("reference", reference)
        .num("abs_gap", (value - reference).abs())
        .with("restarts", restarts)
        .with("converged", converged)
        .with("iterations", iterations)
        .with("flag", flag)
}

pub fn product(spec: &str, factors: &[(usize, f64)], numeric: bool, cfg: &OptimizerConfig) -> Result<Outcome, UsageError> {
    cfg.validate()?;
    let space = ProductSpace::new(factors)?;
    let params = optimizer_params(Row::new().with("spec", spec).with("estimate", numeric), cfg);
    let mut out = Outcome::new("product", params);
    let sharp = match sharp_constant(&space) {
        Ok(v) => Some(v),
        Err(Error::UnsupportedFactor { n }) => {
            out.notes.push(format!("factor C_{n} is outside the tensorization hypothesis; no closed form"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let mut row = Row::new().with("spec", spec).with("states", space.states()).opt("sharp", sharp);
    let mut flag = if sharp.is_none() { "n = 3 factor: numeric only".to_string() } else { String::new() };
    if numeric && space.states() <= space.state_limit() {
        let r = estimate_alpha_product(&space, cfg)?;
        let residual = sharp.map(|s| (r.value - s).abs());
        if let Some(res) = residual {
            out.violation |= res > 1e-5;
        }
        out.nonconverged |= !r.converged;
        row = row
            .num("estimate", r.value)
            .num("interior", r.interior_value)
            .opt("residual", residual)
            .with("converged", r.converged);
    } else {
        if numeric {
            flag = format!("{} states exceed the limit {}; formula only", space.states(), space.state_limit());
            out.notes.push(flag.clone());
        }
        row = row.opt("estimate", None).opt("interior", None).opt("residual", None).with("converged", Value::Null);
    }
    out.results.push(row.with("flag", flag));
    Ok(out)
}

/// Positive test functions: `|1 + s u|` with `u` uniform on `[-1, 1]` and
/// the spread `s` log-uniform.
fn random_positive(rng: &mut impl Rng, n: usize) -> CycleFunction {
    let spread = 10f64.powf(rng.random_range(-3.0..0.5));
    CycleFunction::from_fn(n, |_| (1.0 + spread * rng.random_range(-1.0..1.0)).abs())
        .expect("finite samples")
}

pub fn hypercontract(args: &HyperArgs, seed: u64) -> Result<Outcome, UsageError> {
    let boundary = SemigroupQuery::new(args.n, 0.0, args.p, args.q)?.at_boundary();
    let t = args.t.unwrap_or(boundary.t);
    let query = SemigroupQuery::new(args.n, t, args.p, args.q)?;
    if !query.is_admissible() {
        return Err(UsageError(format!(
            "time {t} is not admissible for p = {}, q = {}; the smallest admissible time is {}",
            args.p,
            args.q,
            query.min_time()
        )));
    }
    let params = Row::new()
        .with("n", args.n)
        .num("p", args.p)
        .num("q", args.q)
        .num("t", t)
        .with("trials", args.trials);
    let mut out = Outcome::new("hypercontract", params);
    let flag = if args.n < 4 {
        out.notes.push(format!("n = {} is outside the hypothesis n >= 4", args.n));
        "outside n >= 4"
    } else {
        ""
    };
    let tol = 1e-10;

    let mut rng = stream_rng(seed, args.n as u64);
    let mut worst = f64::INFINITY;
    for _ in 0..args.trials {
        let f = random_positive(&mut rng, args.n);
        worst = worst.min(hypercontractivity_deficit(&f, &query)?.deficit);
    }
    if args.trials > 0 {
        out.violation |= args.n >= 4 && worst < -tol;
        out.results.push(
            Row::new()
                .with("case", "random")
                .num("t", t)
                .with("trials", args.trials)
                .num("worst_deficit", worst)
                .with("flag", flag),
        );
    }

    // near-tight function at the boundary time
    let c = CycleFunction::cos_mode(args.n, 1)?;
    let f = CycleFunction::from_fn(args.n, |j| 1.0 + 0.01 * c[j])?;
    let d = hypercontractivity_deficit(&f, &boundary)?.deficit;
    out.violation |= args.n >= 4 && d < -tol;
    out.results.push(
        Row::new()
            .with("case", "boundary")
            .num("t", boundary.t)
            .with("trials", 1)
            .num("worst_deficit", d)
            .with("flag", flag),
    );
    Ok(out)
}
