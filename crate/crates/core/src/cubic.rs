//! Closed-form real roots of cubic equations (Cardano).
//!
//! `a x³ + b x² + c x + d` is depressed with `x = t − b/(3a)` to `t³ + p t + q`,
//! classified by `Δ = (q/2)² + (p/3)³`, and solved by the radical formula
//! (`Δ > 0`), the repeated-root formulas (`Δ = 0`) or the trigonometric form
//! (`Δ < 0`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative size below which the leading coefficient counts as zero.
pub const DEGENERATE_EPS: f64 = 1e-12;

/// Relative size below which the discriminant counts as zero.
pub const DISCRIMINANT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cubic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Cubic {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((self.a * x + self.b) * x + self.c) * x + self.d
    }

    fn scale(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

/// `t³ + p t + q`, with `x = t − shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepressedCubic {
    pub p: f64,
    pub q: f64,
    pub shift: f64,
}

impl DepressedCubic {
    fn eval(&self, t: f64) -> f64 {
        (t * t + self.p) * t + self.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscriminantCase {
    /// One real root, two complex conjugates.
    PositiveDiscriminant,
    /// All real, at least two coincide.
    ZeroDiscriminant,
    /// Three distinct real roots.
    NegativeDiscriminant,
}

/// Distinct real roots in ascending order with their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicRoots {
    pub real_roots: Vec<f64>,
    pub multiplicities: Vec<u32>,
    pub case: DiscriminantCase,
}

impl CubicRoots {
    fn from_pairs(mut pairs: Vec<(f64, u32)>, case: DiscriminantCase) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (real_roots, multiplicities) = pairs.into_iter().unzip();
        Self { real_roots, multiplicities, case }
    }

    /// Roots repeated according to multiplicity.
    pub fn with_multiplicity(&self) -> Vec<f64> {
        self.real_roots
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&r, &m)| std::iter::repeat_n(r, m as usize))
            .collect()
    }
}

pub fn depress(c: &Cubic) -> Result<DepressedCubic> {
    let Cubic { a, b, c: cc, d } = *c;
    if ![a, b, cc, d].iter().all(|v| v.is_finite()) {
        return Err(Error::Domain("non-finite cubic coefficient".into()));
    }
    if a.abs() <= DEGENERATE_EPS * c.scale() || a == 0.0 {
        return Err(Error::DegenerateCubic);
    }
    let p = (3.0 * a * cc - b * b) / (3.0 * a * a);
    let q = (2.0 * b * b * b - 9.0 * a * b * cc + 27.0 * a * a * d) / (27.0 * a * a * a);
    Ok(DepressedCubic { p, q, shift: b / (3.0 * a) })
}

pub fn discriminant(dc: &DepressedCubic) -> f64 {
    (dc.q / 2.0).powi(2) + (dc.p / 3.0).powi(3)
}

fn classify(dc: &DepressedCubic) -> (f64, DiscriminantCase) {
    let disc = discriminant(dc);
    let tol = DISCRIMINANT_EPS * (1.0 + (dc.q / 2.0).powi(2) + (dc.p / 3.0).abs().powi(3));
    let case = if disc.abs() <= tol {
        DiscriminantCase::ZeroDiscriminant
    } else if disc > 0.0 {
        DiscriminantCase::PositiveDiscriminant
    } else {
        DiscriminantCase::NegativeDiscriminant
    };
    (disc, case)
}

/// One Newton step on `g`, kept only if it lowers the residual (double roots
/// have `g' ≈ 0` and would be thrown off).
fn polish(t: f64, g: impl Fn(f64) -> f64, dg: impl Fn(f64) -> f64) -> f64 {
    let slope = dg(t);
    if slope == 0.0 {
        return t;
    }
    let next = t - g(t) / slope;
    if next.is_finite() && g(next).abs() < g(t).abs() {
        next
    } else {
        t
    }
}

/// Real roots of `t³ + p t + q` (no shift applied).
pub fn solve_depressed(dc: &DepressedCubic) -> CubicRoots {
    let DepressedCubic { p, q, .. } = *dc;
    let (disc, case) = classify(dc);
    let refine = |t: f64| polish(t, |t| dc.eval(t), |t| 3.0 * t * t + p);
    let pairs = match case {
        DiscriminantCase::PositiveDiscriminant => {
            // u³ = −q/2 ± √Δ, choosing the sign that avoids cancellation; v = −p/(3u)
            let s = -q / 2.0;
            let w = s + s.signum() * disc.sqrt();
            let u = w.cbrt();
            let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
            vec![(refine(t), 1)]
        }
        DiscriminantCase::ZeroDiscriminant => {
            if p.abs() <= DISCRIMINANT_EPS * (1.0 + q.abs()) {
                vec![((-q).cbrt(), 3)]
            } else {
                let simple = refine(3.0 * q / p);
                let double = -3.0 * q / (2.0 * p);
                vec![(simple, 1), (double, 2)]
            }
        }
        DiscriminantCase::NegativeDiscriminant => {
            let r = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            (0..3).map(|k| (refine(r * (phi - 2.0 * PI * f64::from(k) / 3.0).cos()), 1)).collect()
        }
    };
    CubicRoots::from_pairs(pairs, case)
}

/// Real roots of `a x³ + b x² + c x + d`, ascending.
pub fn solve_cubic(c: &Cubic) -> Result<CubicRoots> {
    let dc = depress(c)?;
    let mut roots = solve_depressed(&dc);
    for r in &mut roots.real_roots {
        *r -= dc.shift;
    }
    roots.real_roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// The real root nearest `x_ref`; ties go to the smaller root.
///
/// # Panics
///
/// If `roots` holds no root.
pub fn closest_real_root(roots: &CubicRoots, x_ref: f64) -> f64 {
    closest(&roots.real_roots, x_ref).expect("cubic has at least one real root")
}

pub(crate) fn closest(candidates: &[f64], x_ref: f64) -> Option<f64> {
    candidates.iter().copied().min_by(|a, b| (a - x_ref).abs().total_cmp(&(b - x_ref).abs()).then(a.total_cmp(b)))
}

/// Real roots of `c2 s² + c1 s + c0`, ascending; `None` when the
/// discriminant is negative or the leading coefficient vanishes.
pub fn quadratic_real_roots(c0: f64, c1: f64, c2: f64) -> Option<Vec<f64>> {
    let scale = c0.abs().max(c1.abs()).max(c2.abs());
    if c2 == 0.0 || c2.abs() <= DEGENERATE_EPS * scale {
        return None;
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return None;
    }
    // Stable form: q = −(c1 + sign(c1)√disc)/2, roots q/c2 and c0/q.
    let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
    let mut roots = if q == 0.0 { vec![0.0, 0.0] } else { vec![q / c2, c0 / q] };
    roots.sort_by(f64::total_cmp);
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * (1.0 + b.abs())
    }

    #[test]
    fn depress_examples() {
        let dc = depress(&Cubic::new(1.0, -6.0, 11.0, -6.0)).unwrap();
        assert!(approx(dc.p, -1.0) && approx(dc.q, 0.0) && approx(dc.shift, -2.0), "{dc:?}");
        let dc = depress(&Cubic::new(1.0, 0.0, -3.0, 2.0)).unwrap();
        assert_eq!((dc.p, dc.q, dc.shift), (-3.0, 2.0, 0.0));
        let dc = depress(&Cubic::new(2.0, 0.0, 2.0, 0.0)).unwrap();
        assert_eq!((dc.p, dc.q), (1.0, 0.0));
    }

    #[test]
    fn degenerate_leading_coefficient() {
        assert!(matches!(solve_cubic(&Cubic::new(0.0, 1.0, 2.0, 3.0)), Err(Error::DegenerateCubic)));
        assert!(matches!(solve_cubic(&Cubic::new(1e-14, 1.0, 2.0, 3.0)), Err(Error::DegenerateCubic)));
        assert!(matches!(solve_cubic(&Cubic::new(0.0, 0.0, 0.0, 0.0)), Err(Error::DegenerateCubic)));
        assert!(solve_cubic(&Cubic::new(1e-10, 1.0, 2.0, 3.0)).is_ok());
    }

    #[test]
    fn discriminant_examples() {
        let dc = |p, q| DepressedCubic { p, q, shift: 0.0 };
        assert_eq!(discriminant(&dc(-3.0, 2.0)), 0.0);
        assert!(approx(discriminant(&dc(1.0, 0.0)), 1.0 / 27.0));
        assert!(approx(discriminant(&dc(-1.0, 0.0)), -1.0 / 27.0));
    }

    #[test]
    fn depressed_root_sets() {
        let dc = |p, q| DepressedCubic { p, q, shift: 0.0 };
        let r = solve_depressed(&dc(-3.0, 2.0));
        assert_eq!(r.case, DiscriminantCase::ZeroDiscriminant);
        assert_eq!(r.real_roots, vec![-2.0, 1.0]);
        assert_eq!(r.multiplicities, vec![1, 2]);

        let r = solve_depressed(&dc(1.0, 0.0));
        assert_eq!(r.case, DiscriminantCase::PositiveDiscriminant);
        assert_eq!(r.real_roots, vec![0.0]);

        let r = solve_depressed(&dc(-1.0, 0.0));
        assert_eq!(r.case, DiscriminantCase::NegativeDiscriminant);
        for (got, want) in r.real_roots.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-15, "{:?}", r.real_roots);
        }

        let r = solve_depressed(&dc(0.0, 0.0));
        assert_eq!((r.real_roots.as_slice(), r.multiplicities.as_slice()), (&[0.0][..], &[3][..]));
    }

    #[test]
    fn full_cubics() {
        let r = solve_cubic(&Cubic::new(1.0, -6.0, 11.0, -6.0)).unwrap();
        for (got, want) in r.real_roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!(approx(*got, want), "{:?}", r.real_roots);
        }
        let r = solve_cubic(&Cubic::new(1.0, 0.0, 0.0, -8.0)).unwrap();
        assert_eq!(r.real_roots, vec![2.0]);
        let r = solve_cubic(&Cubic::new(1.0, -3.0, 3.0, -1.0)).unwrap();
        assert_eq!(r.multiplicities, vec![3]);
        assert!(approx(r.real_roots[0], 1.0));
    }

    #[test]
    fn nearest_root_selection() {
        let roots = |v: Vec<f64>| CubicRoots {
            multiplicities: vec![1; v.len()],
            real_roots: v,
            case: DiscriminantCase::NegativeDiscriminant,
        };
        assert_eq!(closest_real_root(&roots(vec![1.0, 2.0, 3.0]), 2.4), 2.0);
        assert_eq!(closest_real_root(&roots(vec![1.0, 3.0]), 2.0), 1.0);
        assert_eq!(closest_real_root(&roots(vec![5.0]), -100.0), 5.0);
    }

    #[test]
    fn quadratic_roots() {
        assert_eq!(quadratic_real_roots(-4.0, 0.0, 1.0), Some(vec![-2.0, 2.0]));
        assert_eq!(quadratic_real_roots(1.0, 0.0, 1.0), None);
        assert_eq!(quadratic_real_roots(1.0, 2.0, 0.0), None);
        assert_eq!(quadratic_real_roots(0.0, 0.0, 3.0), Some(vec![0.0, 0.0]));
        let r = quadratic_real_roots(1.0, -1e8, 1.0).unwrap();
        assert!((r[0] - 1e-8).abs() < 1e-20);
    }
}
