//! Weighted products of cycles `C_{n_1} x ... x C_{n_L}` with the Dirichlet
//! form `sum_l c_l E^{(n_l)}`, where `E^{(n_l)}` acts on the `l`-th coordinate.
//! The measure is the uniform product measure.

use serde::{Deserialize, Serialize};

use crate::cycle::compensated_sum;
use crate::error::{Error, Result};
use crate::optimize::{minimize_entropy_ratio, Energy, OptimizerConfig, RatioMinResult};
use crate::spectral::{lambda, unit_root};

pub const DEFAULT_STATE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub n: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSpace {
    factors: Vec<Factor>,
    states: usize,
    state_limit: usize,
}

impl ProductSpace {
    pub fn new(factors: &[(usize, f64)]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("a product needs at least one factor".into()));
        }
        let mut states = 1usize;
        for &(n, c) in factors {
            if n < 2 {
                return Err(Error::TooFewSites(n));
            }
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidArgument(format!("weight {c} of C_{n} must be positive")));
            }
            states = states.checked_mul(n).ok_or(Error::StateSpaceTooLarge {
                states: usize::MAX,
                limit: DEFAULT_STATE_LIMIT,
            })?;
        }
        Ok(Self {
            factors: factors.iter().map(|&(n, weight)| Factor { n, weight }).collect(),
            states,
            state_limit: DEFAULT_STATE_LIMIT,
        })
    }

    pub fn with_state_limit(mut self, limit: usize) -> Self {
        self.state_limit = limit;
        self
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn state_limit(&self) -> usize {
        self.state_limit
    }

    /// Every factor has `n >= 4` or `n = 2`, so the sharp constant is known.
    pub fn within_hypothesis(&self) -> bool {
        self.factors.iter().all(|f| f.n != 3)
    }

    /// Row-major stride of axis `l`.
    fn stride(&self, l: usize) -> usize {
        self.factors[l + 1..].iter().map(|f| f.n).product()
    }

    /// Flat index of the neighbour of `flat` one step forward (`+1`) or
    /// back (`-1`) along axis `l`.
    fn shift(&self, flat: usize, l: usize, forward: bool) -> usize {
        let n = self.factors[l].n;
        let stride = self.stride(l);
        let coord = (flat / stride) % n;
        let next = if forward { (coord + 1) % n } else { (coord + n - 1) % n };
        flat - coord * stride + next * stride
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.factors.len()];
        for l in (0..self.factors.len()).rev() {
            let n = self.factors[l].n;
            idx[l] = flat % n;
            flat /= n;
        }
        idx
    }

    /// Flat index of a multi-index, each coordinate taken modulo its `n_l`.
    pub fn flat_index(&self, idx: &[isize]) -> usize {
        assert_eq!(idx.len(), self.factors.len(), "multi-index length mismatch");
        idx.iter().zip(&self.factors).fold(0, |acc, (&i, f)| {
            acc * f.n + i.rem_euclid(f.n as isize) as usize
        })
    }
}

/// A real function on a product space, stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductFunction {
    space: ProductSpace,
    values: Vec<f64>,
}

impl ProductFunction {
    pub fn new(space: ProductSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.states() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a space with {} states",
                values.len(),
                space.states()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { space, values })
    }

    pub fn from_fn(space: &ProductSpace, f: impl Fn(&[usize]) -> f64) -> Result<Self> {
        let values = (0..space.states()).map(|i| f(&space.multi_index(i))).collect();
        Self::new(space.clone(), values)
    }

    /// `F(x) = g(x_l)`.
    pub fn lift(space: &ProductSpace, axis: usize, g: &[f64]) -> Result<Self> {
        let n = space.factors().get(axis).map(|f| f.n);
        if n != Some(g.len()) {
            return Err(Error::InvalidArgument(format!("axis {axis} does not have {} sites", g.len())));
        }
        Self::from_fn(space, |idx| g[idx[axis]])
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, idx: &[isize]) -> f64 {
        self.values[self.space.flat_index(idx)]
    }
}

fn dirichlet_values(space: &ProductSpace, x: &[f64]) -> f64 {
    let states = space.states() as f64;
    let per_axis = space.factors().iter().enumerate().map(|(l, f)| {
        let s = compensated_sum((0..x.len()).map(|i| (x[i] - x[space.shift(i, l, true)]).powi(2)));
        f.weight * s / (2.0 * states)
    });
    compensated_sum(per_axis)
}

/// `sum_l c_l E^{(n_l)}(F, F)` under the uniform product measure.
pub fn product_dirichlet(f: &ProductFunction) -> f64 {
    dirichlet_values(f.space(), f.values())
}

impl Energy for ProductSpace {
    fn dim(&self) -> usize {
        self.states
    }

    fn energy(&self, x: &[f64]) -> f64 {
        dirichlet_values(self, x)
    }

    fn energy_grad(&self, x: &[f64], out: &mut [f64]) {
        let states = self.states as f64;
        out.iter_mut().for_each(|o| *o = 0.0);
        for (l, f) in self.factors.iter().enumerate() {
            for i in 0..x.len() {
                let lap = 2.0 * x[i] - x[self.shift(i, l, true)] - x[self.shift(i, l, false)];
                out[i] += f.weight * lap / states;
            }
        }
    }

    fn low_modes(&self) -> Vec<Vec<f64>> {
        let mut modes = Vec::new();
        for (l, f) in self.factors.iter().enumerate() {
            let stride = self.stride(l);
            let coord = |i: usize| (i / stride) % f.n;
            let c: Vec<f64> = (0..self.states).map(|i| unit_root(coord(i), f.n).0).collect();
            modes.push(c);
            if f.n > 2 {
                modes.push((0..self.states).map(|i| unit_root(coord(i), f.n).1).collect());
            }
        }
        modes
    }
}

/// `min_l c_l lambda_{n_l} / 2`.
pub fn sharp_constant(space: &ProductSpace) -> Result<f64> {
    if let Some(f) = space.factors().iter().find(|f| f.n == 3) {
        return Err(Error::UnsupportedFactor { n: f.n });
    }
    Ok(degenerate_value(space))
}

fn degenerate_value(space: &ProductSpace) -> f64 {
    space
        .factors()
        .iter()
        .map(|f| f.weight * lambda(f.n) / 2.0)
        .fold(f64::INFINITY, f64::min)
}

/// Numerical log-Sobolev constant of the product. Factors with `n = 3` are
/// accepted; check [`ProductSpace::within_hypothesis`] before comparing the
/// result with [`sharp_constant`].
pub fn estimate_alpha_product(
    space: &ProductSpace,
    cfg: &OptimizerConfig,
) -> Result<RatioMinResult<ProductFunction>> {
    if space.states() > space.state_limit() {
        return Err(Error::StateSpaceTooLarge { states: space.states(), limit: space.state_limit() });
    }
    let res = minimize_entropy_ratio(space, cfg, degenerate_value(space))?;
    let space = space.clone();
    Ok(res.map_argmin(|values| ProductFunction { space, values }))
}
