//! Scalar functions the derivators and solvers operate on.

use crate::expr::{self, Expr, Jet3};
use crate::{Error, Result};

/// A real function of one variable, optionally with its derivative tower.
pub trait TargetFunction: Send + Sync {
    fn eval(&self, x: f64) -> Result<f64>;

    /// `(y, y', y'', y''')` at `x`.
    fn tower(&self, _x: f64) -> Result<Jet3> {
        Err(Error::MissingTower)
    }

    fn has_tower(&self) -> bool {
        false
    }
}

impl<T: TargetFunction + ?Sized> TargetFunction for &T {
    fn eval(&self, x: f64) -> Result<f64> {
        (**self).eval(x)
    }
    fn tower(&self, x: f64) -> Result<Jet3> {
        (**self).tower(x)
    }
    fn has_tower(&self) -> bool {
        (**self).has_tower()
    }
}

impl<T: TargetFunction + ?Sized> TargetFunction for Box<T> {
    fn eval(&self, x: f64) -> Result<f64> {
        (**self).eval(x)
    }
    fn tower(&self, x: f64) -> Result<Jet3> {
        (**self).tower(x)
    }
    fn has_tower(&self) -> bool {
        (**self).has_tower()
    }
}

/// Polynomial in the power basis, `coeffs[k]` multiplying `x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// Monic polynomial with the given roots, scaled by `lead`.
    pub fn from_roots(lead: f64, roots: &[f64]) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= r * ck;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }
}

impl TargetFunction for Polynomial {
    fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.value(x))
    }

    fn tower(&self, x: f64) -> Result<Jet3> {
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        Ok(Jet3::new(self.value(x), d1.value(x), d2.value(x), d3.value(x)))
    }

    fn has_tower(&self) -> bool {
        true
    }
}

/// A parsed expression; its tower comes from jet arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprFunction {
    expr: Expr,
}

impl ExprFunction {
    pub fn new(expr: Expr) -> Self {
        Self { expr }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::new(expr::parse(text)?))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }
}

impl TargetFunction for ExprFunction {
    fn eval(&self, x: f64) -> Result<f64> {
        let y = self.expr.eval(x)?;
        if !y.is_finite() {
            return Err(Error::Domain(format!("non-finite value at x = {x}")));
        }
        Ok(y)
    }

    fn tower(&self, x: f64) -> Result<Jet3> {
        self.expr.eval_jet(x)
    }

    fn has_tower(&self) -> bool {
        true
    }
}

/// Point evaluation only; derivatives must come from finite differences.
pub struct EvalOnly<F>(pub F);

impl<F> TargetFunction for EvalOnly<F>
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: f64) -> Result<f64> {
        let y = (self.0)(x);
        if !y.is_finite() {
            return Err(Error::Domain(format!("non-finite value at x = {x}")));
        }
        Ok(y)
    }
}

/// `x^4 - 21x^3 + 149x^2 - 419x + 290`: roots 1 and 10, three critical points.
pub fn quartic_y() -> Polynomial {
    Polynomial::new(vec![290.0, -419.0, 149.0, -21.0, 1.0])
}

/// `x^3 - 2x - 5`, with a single real root near 2.0946.
pub fn wallis_cubic() -> Polynomial {
    Polynomial::new(vec![-5.0, -2.0, 0.0, 1.0])
}

pub const BUILTINS: &[&str] = &["quartic-y", "wallis-cubic"];

pub fn builtin(name: &str) -> Result<Polynomial> {
    match name {
        "quartic-y" => Ok(quartic_y()),
        "wallis-cubic" => Ok(wallis_cubic()),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Resolves `builtin:<name>` or an expression string.
pub fn resolve(source: &str) -> Result<Box<dyn TargetFunction>> {
    match source.trim().strip_prefix("builtin:") {
        Some(name) => Ok(Box::new(builtin(name.trim())?)),
        None => Ok(Box::new(ExprFunction::parse(source)?)),
    }
}
