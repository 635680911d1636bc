//! Reference oracles shared by the integration suites. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use gendrv_core::expr::{BinOp, Expr, Func};
use rand::Rng;

/// Bisection to `tol` on a bracketing interval.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// Distinct real roots of `a x³ + b x² + c x + d` inside `[-50, 50]`:
/// sign-change bisection on a dense grid, then deflation by the first root
/// to pick up even-multiplicity roots.
pub fn cubic_oracle(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let p = [d, c, b, a];
    let f = |x: f64| horner(&p, x);
    let n = 200_000;
    let (lo, hi) = (-50.0, 50.0);
    let h = (hi - lo) / n as f64;
    let mut found = Vec::new();
    let mut prev_x = lo;
    let mut prev = f(lo);
    for i in 1..=n {
        let x = lo + i as f64 * h;
        let y = f(x);
        if prev == 0.0 {
            found.push(prev_x);
        } else if (prev < 0.0) != (y < 0.0) && y != 0.0 {
            found.push(bisect(f, prev_x, x, 1e-14 * (1.0 + x.abs())));
        }
        prev_x = x;
        prev = y;
    }
    if prev == 0.0 {
        found.push(hi);
    }
    if let Some(&r) = found.first() {
        // synthetic division by (x − r)
        let q2 = a;
        let q1 = b + r * q2;
        let q0 = c + r * q1;
        let disc = q1 * q1 - 4.0 * q2 * q0;
        let slack = 1e-10 * (q1 * q1 + (4.0 * q2 * q0).abs());
        if disc >= -slack {
            let s = disc.max(0.0).sqrt();
            for root in [(-q1 - s) / (2.0 * q2), (-q1 + s) / (2.0 * q2)] {
                if (lo..=hi).contains(&root) {
                    found.push(root);
                }
            }
        }
    }
    found.sort_by(f64::total_cmp);
    let mut distinct: Vec<f64> = Vec::new();
    for r in found {
        match distinct.last() {
            Some(&last) if (r - last).abs() <= 1e-6 * (1.0 + r.abs()) => {}
            _ => distinct.push(r),
        }
    }
    distinct
}

/// Central differences at step `h` for the first three derivatives.
pub fn central_differences(f: impl Fn(f64) -> f64, x: f64, h: f64) -> [f64; 3] {
    let (m2, m1, z, p1, p2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    [(p1 - m1) / (2.0 * h), (p1 - 2.0 * z + m1) / (h * h), (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h)]
}

/// Random well-conditioned expression tree of bounded depth. `log`, `sqrt`
/// and `/` are guarded so their arguments stay positive.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    let leaf = |rng: &mut R| {
        if rng.gen_bool(0.6) {
            Expr::Var
        } else {
            Expr::Num((rng.gen_range(0.5..3.0f64) * 100.0).round() / 100.0)
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let sub = |rng: &mut R| Box::new(random_expr(rng, depth - 1));
    let positive = |rng: &mut R| {
        let inner = sub(rng);
        let c = Expr::Num((rng.gen_range(0.5..2.0f64) * 100.0).round() / 100.0);
        Box::new(Expr::Binary(BinOp::Add, Box::new(Expr::Pow(inner, 2)), Box::new(c)))
    };
    match rng.gen_range(0..10) {
        0 => leaf(rng),
        1 => Expr::Binary(BinOp::Add, sub(rng), sub(rng)),
        2 => Expr::Binary(BinOp::Sub, sub(rng), sub(rng)),
        3 => Expr::Binary(BinOp::Mul, sub(rng), sub(rng)),
        4 => Expr::Binary(BinOp::Div, sub(rng), positive(rng)),
        5 => Expr::Pow(sub(rng), rng.gen_range(-2..=4)),
        6 => Expr::Neg(sub(rng)),
        7 => Expr::Call(if rng.gen_bool(0.5) { Func::Sin } else { Func::Cos }, sub(rng)),
        8 => Expr::Call(Func::Exp, Box::new(Expr::Call(Func::Sin, sub(rng)))),
        _ => Expr::Call(if rng.gen_bool(0.5) { Func::Log } else { Func::Sqrt }, positive(rng)),
    }
}

/// Result of comparing one jet against central differences.
pub struct JetCheck {
    pub ok: bool,
    pub detail: String,
}

/// Compares `eval_jet` with central differences at `h = 1e-4`; relative
/// tolerances 1e-4 (d1, d2) and 1e-2 (d3). `None` when the sample is
/// rejected (undefined or badly scaled near `x`).
pub fn check_jet_against_fd(e: &Expr, x: f64) -> Option<JetCheck> {
    let h = 1e-4;
    let j = e.eval_jet(x).ok()?;
    if (-2..=2).any(|k| e.eval(x + f64::from(k) * h).is_err()) {
        return None;
    }
    if j.v.abs() > 1e3 || [j.d1, j.d2, j.d3].iter().any(|d| d.abs() > 1e4) {
        return None;
    }
    let fd = central_differences(|t| e.eval(t).unwrap(), x, h);
    let tols = [1e-4, 1e-4, 1e-2];
    let got = [j.d1, j.d2, j.d3];
    let mut ok = true;
    let mut detail = String::new();
    for k in 0..3 {
        let scale = 1.0_f64.max(got[k].abs());
        if (got[k] - fd[k]).abs() > tols[k] * scale {
            ok = false;
            detail = format!("{e} at x={x}: d{} jet={} fd={}", k + 1, got[k], fd[k]);
        }
    }
    Some(JetCheck { ok, detail })
}
