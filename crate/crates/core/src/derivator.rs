//! Derivator fits: the degree-k polynomial through a function at a point.
//!
//! Two constructions are provided. [`fd_coefficients`] interpolates the
//! function exactly at the forward nodes `x, x+Δ, ..., x+kΔ`.
//! [`analytic_coefficients`] takes the `Δ → 0` limit of that fit, which is the
//! osculating polynomial `Σ y⁽ʲ⁾(x)/j! · (t−x)ʲ`.
//!
//! Both solve in the shifted variable `s = t − x` first and keep that local
//! form alongside the power-basis expansion `Σ a_k t^k`.

use serde::Serialize;

use crate::target::TargetFunction;
use crate::{Error, Result};

/// Where derivator coefficients come from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, serde::Deserialize)]
pub enum Backend {
    /// Exact limits from the function's derivative tower.
    #[default]
    Analytic,
    /// Forward-node interpolation; `None` picks [`default_delta`].
    FiniteDifference(Option<f64>),
}

/// Power-basis coefficients `a_0..a_k` of a degree-k derivator fitted at `anchor`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivatorCoefficients {
    degree: usize,
    coeffs: Vec<f64>,
    anchor: f64,
    #[serde(skip)]
    local: Vec<f64>,
}

impl DerivatorCoefficients {
    /// Builds the fit from its Taylor-form coefficients around `anchor`.
    fn from_local(anchor: f64, local: Vec<f64>) -> Result<Self> {
        let degree = local.len() - 1;
        let coeffs = rebase(&local, anchor);
        if local.iter().chain(&coeffs).any(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite derivator coefficients at x = {anchor}")));
        }
        Ok(Self { degree, coeffs, anchor, local })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `a_0, a_1, ..., a_degree`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    /// Coefficients of the same polynomial in powers of `(t − anchor)`.
    pub fn local(&self) -> &[f64] {
        &self.local
    }

    pub fn eval(&self, t: f64) -> f64 {
        evaluate_derivator(self, t)
    }
}

/// Horner evaluation of the power-basis form at `t`.
pub fn evaluate_derivator(c: &DerivatorCoefficients, t: f64) -> f64 {
    c.coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn check_degree(degree: usize) -> Result<()> {
    if (1..=3).contains(&degree) {
        Ok(())
    } else {
        Err(Error::InvalidDegree(degree))
    }
}

/// Forward-node step used when none is given: `h_k · max(1, |x|)` with
/// `h = 1e-6, 1e-5, 1e-4` for degrees 1, 2, 3.
pub fn default_delta(x: f64, degree: usize) -> f64 {
    let h = match degree {
        1 => 1e-6,
        2 => 1e-5,
        _ => 1e-4,
    };
    h * x.abs().max(1.0)
}

/// Exact interpolation of `f` at `x, x+Δ, ..., x+degree·Δ`.
pub fn fd_coefficients<F>(f: &F, x: f64, delta: f64, degree: usize) -> Result<DerivatorCoefficients>
where
    F: TargetFunction + ?Sized,
{
    check_degree(degree)?;
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::InvalidDelta(delta));
    }
    let n = degree + 1;
    let mut nodes = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let t = x + j as f64 * delta;
        // scaled offsets are ~j; using the representable node keeps the fit exact there
        nodes.push((t - x) / delta);
        values.push(f.eval(t)?);
    }
    let scaled = solve_vandermonde(&nodes, &values).ok_or(Error::SingularSystem { x, delta })?;
    // p(t) = Σ b_m ((t−x)/Δ)^m
    let mut scale = 1.0;
    let local = scaled
        .iter()
        .map(|b| {
            let c = b / scale;
            scale *= delta;
            c
        })
        .collect();
    DerivatorCoefficients::from_local(x, local)
}

/// The `Δ → 0` limit of [`fd_coefficients`]: the degree-k osculating polynomial.
pub fn analytic_coefficients<F>(f: &F, x: f64, degree: usize) -> Result<DerivatorCoefficients>
where
    F: TargetFunction + ?Sized,
{
    check_degree(degree)?;
    let j = f.tower(x)?;
    let taylor = [j.v, j.d1, j.d2 / 2.0, j.d3 / 6.0];
    DerivatorCoefficients::from_local(x, taylor[..=degree].to_vec())
}

/// Fits a derivator with the requested backend.
pub fn fit<F>(f: &F, x: f64, degree: usize, backend: Backend) -> Result<DerivatorCoefficients>
where
    F: TargetFunction + ?Sized,
{
    match backend {
        Backend::Analytic => analytic_coefficients(f, x, degree),
        Backend::FiniteDifference(delta) => {
            let delta = delta.unwrap_or_else(|| default_delta(x, degree));
            fd_coefficients(f, x, delta, degree)
        }
    }
}

/// Re-expands `Σ c_k (t − x)^k` into `Σ a_m t^m`.
fn rebase(local: &[f64], x: f64) -> Vec<f64> {
    let n = local.len();
    let mut out = vec![0.0; n];
    for (k, &ck) in local.iter().enumerate() {
        // (t − x)^k = Σ_m C(k,m) t^m (−x)^(k−m)
        let mut binom = 1.0;
        for m in (0..=k).rev() {
            out[m] += ck * binom * (-x).powi((k - m) as i32);
            binom = binom * m as f64 / (k - m + 1) as f64;
        }
    }
    out
}

/// Solves `Σ_m b_m u_j^m = y_j` by Gaussian elimination with partial pivoting.
/// `None` when a pivot falls below `1e-12` (coincident nodes).
fn solve_vandermonde(nodes: &[f64], values: &[f64]) -> Option<Vec<f64>> {
    let n = nodes.len();
    let mut m: Vec<Vec<f64>> = nodes
        .iter()
        .zip(values)
        .map(|(&u, &y)| {
            let mut row: Vec<f64> = (0..n).map(|p| u.powi(p as i32)).collect();
            row.push(y);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest {
            let factor = row[col] / pivot_row[col];
            for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= factor * p;
            }
        }
    }
    let mut b = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| m[r][c] * b[c]).sum();
        b[r] = (m[r][n] - tail) / m[r][r];
    }
    Some(b)
}
