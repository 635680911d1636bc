//! Expressions in one variable `x`, evaluated with a third-order derivative tower.
//!
//! Grammar (whitespace ignored, no implicit multiplication):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' exponent)?
//! exponent:= '-'? INTEGER ('^' exponent)?
//! primary := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
//! FUNC    := sin | cos | exp | log | sqrt
//! ```

mod jet;
mod parser;

use std::fmt;

pub use jet::Jet3;
pub use parser::parse;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Plain evaluation at `x`. Uses the same floating-point operations as
    /// the value slot of [`Expr::eval_jet`].
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(c) => *c,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Binary(op, l, r) => {
                let (a, b) = (l.eval(x)?, r.eval(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Domain("division by zero".into()));
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(b, n) => {
                let a = b.eval(x)?;
                if *n < 0 && a == 0.0 {
                    return Err(Error::Domain("negative power of zero".into()));
                }
                a.powi(*n)
            }
            Expr::Call(func, arg) => {
                let u = arg.eval(x)?;
                match func {
                    Func::Sin => u.sin_cos().0,
                    Func::Cos => u.sin_cos().1,
                    Func::Exp => u.exp(),
                    Func::Log => {
                        if u <= 0.0 {
                            return Err(Error::Domain(format!("log of non-positive value {u}")));
                        }
                        u.ln()
                    }
                    Func::Sqrt => {
                        if u < 0.0 {
                            return Err(Error::Domain(format!("sqrt of negative value {u}")));
                        }
                        u.sqrt()
                    }
                }
            }
        };
        Ok(v)
    }

    /// Value and first three derivatives at `x`.
    pub fn eval_jet(&self, x: f64) -> Result<Jet3> {
        let j = self.jet(x)?;
        if !j.is_finite() {
            return Err(Error::Domain(format!("non-finite derivative tower at x = {x}")));
        }
        Ok(j)
    }

    fn jet(&self, x: f64) -> Result<Jet3> {
        Ok(match self {
            Expr::Num(c) => Jet3::constant(*c),
            Expr::Var => Jet3::variable(x),
            Expr::Neg(e) => -e.jet(x)?,
            Expr::Binary(op, l, r) => {
                let (a, b) = (l.jet(x)?, r.jet(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.checked_div(b)?,
                }
            }
            Expr::Pow(b, n) => b.jet(x)?.powi(*n)?,
            Expr::Call(func, arg) => {
                let u = arg.jet(x)?;
                match func {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Exp => u.exp(),
                    Func::Log => u.ln()?,
                    Func::Sqrt => u.sqrt()?,
                }
            }
        })
    }
}

/// Fully parenthesized rendering that [`parse`] maps back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c:?}"),
            Expr::Var => f.write_str("x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => {
                let sym = match op {
                    BinOp::Add => '+',
                    BinOp::Sub => '-',
                    BinOp::Mul => '*',
                    BinOp::Div => '/',
                };
                write!(f, "({l} {sym} {r})")
            }
            Expr::Pow(b, n) => write!(f, "({b})^{n}"),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}
