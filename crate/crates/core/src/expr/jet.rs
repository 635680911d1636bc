//! Third-order truncated Taylor arithmetic.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A value together with its first three derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet3 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet3 {
    pub const fn new(v: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self { v, d1, d2, d3 }
    }

    pub const fn constant(c: f64) -> Self {
        Self::new(c, 0.0, 0.0, 0.0)
    }

    /// The independent variable at `x`.
    pub const fn variable(x: f64) -> Self {
        Self::new(x, 1.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite() && self.d3.is_finite()
    }

    fn is_constant(&self) -> bool {
        self.d1 == 0.0 && self.d2 == 0.0 && self.d3 == 0.0
    }

    /// Composes an outer function `g` with `self`, given `g` and its first
    /// three derivatives evaluated at `self.v`. The value slot is taken from
    /// `g[0]` untouched.
    pub fn compose(self, g: [f64; 4]) -> Self {
        if self.is_constant() {
            return Self::constant(g[0]);
        }
        let (u1, u2, u3) = (self.d1, self.d2, self.d3);
        Self {
            v: g[0],
            d1: g[1] * u1,
            d2: g[2] * u1 * u1 + g[1] * u2,
            d3: g[3] * u1 * u1 * u1 + 3.0 * g[2] * u1 * u2 + g[1] * u3,
        }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.v == 0.0 {
            return Err(Error::Domain("division by zero".into()));
        }
        let b = rhs.v;
        let recip = rhs.compose([1.0 / b, -1.0 / (b * b), 2.0 / (b * b * b), -6.0 / (b * b * b * b)]);
        let mut q = self * recip;
        q.v = self.v / rhs.v;
        Ok(q)
    }

    pub fn powi(self, n: i32) -> Result<Self> {
        if n < 0 && self.v == 0.0 {
            return Err(Error::Domain("negative power of zero".into()));
        }
        let a = self.v;
        let nf = f64::from(n);
        // k-th derivative of a^n is n(n-1)...(n-k+1) a^(n-k); zero falling factorials
        // are kept exactly zero so 0^(negative) never appears.
        let term = |falling: f64, k: i32| if falling == 0.0 { 0.0 } else { falling * a.powi(n - k) };
        let f1 = nf;
        let f2 = f1 * (nf - 1.0);
        let f3 = f2 * (nf - 2.0);
        Ok(self.compose([a.powi(n), term(f1, 1), term(f2, 2), term(f3, 3)]))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.compose([e; 4])
    }

    pub fn ln(self) -> Result<Self> {
        let u = self.v;
        if u <= 0.0 {
            return Err(Error::Domain(format!("log of non-positive value {u}")));
        }
        Ok(self.compose([u.ln(), 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u)]))
    }

    pub fn sqrt(self) -> Result<Self> {
        let u = self.v;
        if u < 0.0 {
            return Err(Error::Domain(format!("sqrt of negative value {u}")));
        }
        let s = u.sqrt();
        Ok(self.compose([s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u)]))
    }
}

impl Add for Jet3 {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.v + r.v, self.d1 + r.d1, self.d2 + r.d2, self.d3 + r.d3)
    }
}

impl Sub for Jet3 {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.v - r.v, self.d1 - r.d1, self.d2 - r.d2, self.d3 - r.d3)
    }
}

impl Neg for Jet3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.v, -self.d1, -self.d2, -self.d3)
    }
}

impl Mul for Jet3 {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let a = self;
        Self::new(
            a.v * r.v,
            a.d1 * r.v + a.v * r.d1,
            a.d2 * r.v + 2.0 * a.d1 * r.d1 + a.v * r.d2,
            a.d3 * r.v + 3.0 * a.d2 * r.d1 + 3.0 * a.d1 * r.d2 + a.v * r.d3,
        )
    }
}
