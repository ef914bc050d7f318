//! Simple random walk on `C_n` and its continuous-time heat semigroup
//! `P_t = exp(-t (I - K))`.
//!
//! `K` itself is exposed as a one-step operator; hypercontractivity is only
//! checked for the continuous-time semigroup, whose generator has gap
//! `lambda_n` and Dirichlet form `E_n`.

use serde::{Deserialize, Serialize};

use crate::cycle::{compensated_mean, sup_norm, CycleFunction};
use crate::error::{Error, Result};
use crate::inequalities::DeficitReport;
use crate::spectral::{dft, lambda, mu};

/// Slack allowed in the admissibility condition.
pub const ADMISSIBILITY_SLACK: f64 = 1e-14;

/// `(Kf)_i = (f_{i-1} + f_{i+1}) / 2`.
pub fn kernel_apply(f: &CycleFunction) -> CycleFunction {
    CycleFunction::from_fn(f.n(), |i| 0.5 * (f.at(i as isize - 1) + f.at(i as isize + 1)))
        .expect("averages of finite values are finite")
}

/// `P_t f`, computed mode by mode with multiplier `exp(-t mu_k / 2)`.
pub fn heat_apply(f: &CycleFunction, t: f64) -> Result<CycleFunction> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    let n = f.n();
    let mut spec = dft(f);
    for (k, c) in spec.coefficients_mut().iter_mut().enumerate() {
        *c *= (-t * mu(k, n)? / 2.0).exp();
    }
    Ok(spec.inverse())
}

/// `<|f|^p>^(1/p)` under the normalized counting measure.
pub fn lp_norm(f: &CycleFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) || p.is_infinite() {
        return Err(Error::InvalidArgument(format!("norm exponent {p} must lie in [1, inf)")));
    }
    let s = sup_norm(f);
    if s == 0.0 {
        return Ok(0.0);
    }
    let m = compensated_mean(f.iter().map(|v| (v.abs() / s).powf(p)), f.n());
    Ok(s * m.powf(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemigroupQuery {
    pub n: usize,
    pub t: f64,
    pub p: f64,
    pub q: f64,
}

impl SemigroupQuery {
    pub fn new(n: usize, t: f64, p: f64, q: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewSites(n));
        }
        if !(t >= 0.0) || t.is_infinite() {
            return Err(Error::NegativeTime(t));
        }
        if !(p > 1.0 && q > 1.0) || p.is_infinite() || q.is_infinite() {
            return Err(Error::InvalidArgument(format!("exponents must exceed 1, got p = {p}, q = {q}")));
        }
        Ok(Self { n, t, p, q })
    }

    /// Smallest `t` with `exp(-2 lambda_n t) <= (p-1)/(q-1)`.
    pub fn min_time(&self) -> f64 {
        min_admissible_time(self.n, self.p, self.q)
    }

    pub fn is_admissible(&self) -> bool {
        (-2.0 * lambda(self.n) * self.t).exp() <= (self.p - 1.0) / (self.q - 1.0) + ADMISSIBILITY_SLACK
    }

    /// The query with `t` moved to the admissibility boundary.
    pub fn at_boundary(self) -> Self {
        Self { t: self.min_time(), ..self }
    }
}

pub fn min_admissible_time(n: usize, p: f64, q: f64) -> f64 {
    (((q - 1.0) / (p - 1.0)).ln() / (2.0 * lambda(n))).max(0.0)
}

/// `||f||_p - ||P_t f||_q`, without checking that the cycle satisfies the
/// hypothesis `n >= 4`. Admissibility of the query is still required.
pub fn hypercontractivity_deficit(f: &CycleFunction, query: &SemigroupQuery) -> Result<DeficitReport> {
    if f.n() != query.n {
        return Err(Error::InvalidArgument(format!("function has {} sites, query has n = {}", f.n(), query.n)));
    }
    if !query.is_admissible() {
        return Err(Error::InadmissibleQuery { min_time: query.min_time() });
    }
    let lhs = lp_norm(&heat_apply(f, query.t)?, query.q)?;
    let rhs = lp_norm(f, query.p)?;
    Ok(DeficitReport::new(lhs, rhs, vec![query.t, query.p, query.q]))
}

/// `||P_t f||_q <= ||f||_p` for admissible queries on `C_n`, `n >= 4`.
pub fn hypercontractivity_check(f: &CycleFunction, query: &SemigroupQuery) -> Result<DeficitReport> {
    if query.n < 4 {
        return Err(Error::UnsupportedN { n: query.n, min: 4 });
    }
    hypercontractivity_deficit(f, query)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{average, dirichlet, inner, variance};
    use crate::inequalities::scan::stream_rng;
    use proptest::prelude::*;
    use rand::Rng;

    fn cf(v: &[f64]) -> CycleFunction {
        CycleFunction::new(v.to_vec()).unwrap()
    }

    /// Dense `exp(-t (I - K))` by a truncated Taylor series with scaling and
    /// squaring.
    fn dense_heat(n: usize, t: f64) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] -= 1.0;
            a[i][(i + 1) % n] += 0.5;
            a[i][(i + n - 1) % n] += 0.5;
        }
        let squarings = 10;
        let s = t / f64::from(1 << squarings);
        let matmul = |x: &Vec<Vec<f64>>, y: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect())
                .collect()
        };
        let mut result: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(i == j)).collect()).collect();
        let mut term = result.clone();
        for k in 1..20 {
            term = matmul(&term, &a);
            term.iter_mut().flatten().for_each(|v| *v *= s / k as f64);
            result.iter_mut().flatten().zip(term.iter().flatten()).for_each(|(r, t)| *r += t);
        }
        for _ in 0..squarings {
            result = matmul(&result, &result);
        }
        result
    }

    #[test]
    fn kernel_examples() {
        let c = CycleFunction::constant(7, 2.5).unwrap();
        assert_eq!(kernel_apply(&c), c);
        assert_eq!(kernel_apply(&cf(&[1.0, 0.0, 0.0, 0.0])).values(), &[0.0, 0.5, 0.0, 0.5]);
        for n in [3, 5, 8, 13] {
            let m = CycleFunction::cos_mode(n, 1).unwrap();
            let km = kernel_apply(&m);
            let ev = (2.0 * std::f64::consts::PI / n as f64).cos();
            for j in 0..n {
                assert!((km[j] - ev * m[j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn heat_examples() {
        let f = cf(&[0.3, -1.0, 2.0, 0.5, 4.0]);
        assert_eq!(heat_apply(&f, 0.0).unwrap(), f);
        assert!(matches!(heat_apply(&f, -1.0), Err(Error::NegativeTime(_))));

        for n in [4, 6, 9] {
            let m = CycleFunction::cos_mode(n, 1).unwrap();
            let t = 0.7;
            let h = heat_apply(&m, t).unwrap();
            let decay = (-lambda(n) * t).exp();
            for j in 0..n {
                assert!((h[j] - decay * m[j]).abs() < 1e-14);
            }
        }

        let t = 40.0;
        let h = heat_apply(&f, t).unwrap();
        let envelope = (-lambda(5) * t).exp() * crate::cycle::norm2(&f);
        let mean = average(&f);
        assert!(h.iter().all(|v| (v - mean).abs() <= envelope + 1e-13));
    }

    #[test]
    fn heat_matches_dense_exponential() {
        for n in [2, 3, 4, 7, 10] {
            let f = CycleFunction::from_fn(n, |j| ((j * j) as f64).cos()).unwrap();
            let t = 1.3;
            let m = dense_heat(n, t);
            let h = heat_apply(&f, t).unwrap();
            for i in 0..n {
                let want: f64 = (0..n).map(|j| m[i][j] * f[j]).sum();
                assert!((h[i] - want).abs() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn lp_norm_examples() {
        assert!((lp_norm(&CycleFunction::constant(4, -3.0).unwrap(), 2.7).unwrap() - 3.0).abs() < 1e-15);
        assert!((lp_norm(&cf(&[1.0, 0.0, 0.0, 0.0]), 2.0).unwrap() - 0.5).abs() < 1e-16);
        assert_eq!(lp_norm(&CycleFunction::zeros(3).unwrap(), 3.0).unwrap(), 0.0);
        assert!(lp_norm(&cf(&[1.0, 2.0]), 0.5).is_err());
    }

    #[test]
    fn query_admissibility() {
        let q = SemigroupQuery::new(4, 0.0, 2.0, 4.0).unwrap();
        assert!(!q.is_admissible());
        let b = q.at_boundary();
        assert!((b.t - 3f64.ln() / 2.0).abs() < 1e-15);
        assert!(b.is_admissible());
        assert!(SemigroupQuery::new(4, -1.0, 2.0, 4.0).is_err());
        assert!(SemigroupQuery::new(4, 1.0, 1.0, 4.0).is_err());
        let f = CycleFunction::constant(4, 1.0).unwrap();
        match hypercontractivity_check(&f, &q) {
            Err(Error::InadmissibleQuery { min_time }) => assert!((min_time - b.t).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        let q3 = SemigroupQuery::new(3, 5.0, 2.0, 4.0).unwrap();
        let f3 = CycleFunction::constant(3, 1.0).unwrap();
        assert!(matches!(hypercontractivity_check(&f3, &q3), Err(Error::UnsupportedN { n: 3, .. })));
        assert!(hypercontractivity_deficit(&f3, &q3).is_ok());
    }

    #[test]
    fn hypercontractivity_examples() {
        let f = cf(&[0.2, 1.0, 3.0, 0.7, 1.1, 0.0]);
        for t in [0.0, 0.3, 2.0] {
            let q = SemigroupQuery::new(6, t, 2.0, 2.0).unwrap();
            assert!(hypercontractivity_check(&f, &q).unwrap().deficit >= 0.0);
        }

        let c = CycleFunction::cos_mode(4, 1).unwrap();
        let f = CycleFunction::from_fn(4, |j| 1.0 + 0.01 * c[j]).unwrap();
        let q = SemigroupQuery::new(4, 0.0, 2.0, 4.0).unwrap().at_boundary();
        let r = hypercontractivity_check(&f, &q).unwrap();
        assert!(r.deficit >= 0.0 && r.deficit < 1e-4, "{r:?}");
    }

    #[test]
    fn generator_matches_dirichlet_form() {
        let mut rng = stream_rng(3, 0);
        for _ in 0..200 {
            let n = rng.random_range(2..40);
            let f = CycleFunction::from_fn(n, |_| rng.random_range(-2.0..2.0)).unwrap();
            let lhs = inner(&f, &(&f - &kernel_apply(&f)));
            assert!((lhs - dirichlet(&f)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn semigroup_law(vals in prop::collection::vec(-3.0f64..3.0, 2..64), s in 0.0f64..5.0, t in 0.0f64..5.0) {
            let f = cf(&vals);
            let two = heat_apply(&heat_apply(&f, s).unwrap(), t).unwrap();
            let one = heat_apply(&f, s + t).unwrap();
            for j in 0..f.n() {
                prop_assert!((two[j] - one[j]).abs() < 1e-11);
            }
        }

        #[test]
        fn average_positivity_and_variance_decay(vals in prop::collection::vec(0.0f64..3.0, 2..64), t in 0.0f64..10.0) {
            let f = cf(&vals);
            let h = heat_apply(&f, t).unwrap();
            prop_assert!((average(&h) - average(&f)).abs() < 1e-13);
            prop_assert!(h.iter().all(|v| v >= -1e-12));
            let bound = (-2.0 * lambda(f.n()) * t).exp() * variance(&f) + 1e-12;
            prop_assert!(variance(&h) <= bound);
        }

        #[test]
        fn norms_increase_with_exponent(vals in prop::collection::vec(-3.0f64..3.0, 2..32), p in 1.0f64..6.0, dp in 0.0f64..6.0) {
            let f = cf(&vals);
            prop_assert!(lp_norm(&f, p).unwrap() <= lp_norm(&f, p + dp).unwrap() * (1.0 + 1e-14));
        }
    }
}
