//! Evaluation of expression trees as order-3 jets.

use thiserror::Error;

use super::jet::Jet3;
use super::parser::{BinOp, Expr, Func, Var};

// |cos u| below this is treated as a pole of tan.
const TAN_POLE_EPS: f64 = 1e-12;
// Integer exponents up to this magnitude use repeated multiplication.
const MAX_INT_EXPONENT: f64 = 1024.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{func} is undefined at argument {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite result")]
    NonFinite,
}

fn checked(j: Jet3) -> Result<Jet3, EvalError> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn apply(func: Func, u: Jet3) -> Result<Jet3, EvalError> {
    let a = u.f;
    let out = match func {
        Func::Sin => {
            let (s, c) = a.sin_cos();
            u.compose([s, c, -s, -c])
        }
        Func::Cos => {
            let (s, c) = a.sin_cos();
            u.compose([c, -s, -c, s])
        }
        Func::Tan => {
            if a.cos().abs() < TAN_POLE_EPS {
                return Err(EvalError::Domain { func: "tan", arg: a });
            }
            let t = a.tan();
            let sec2 = 1.0 + t * t;
            u.compose([t, sec2, 2.0 * t * sec2, (2.0 + 6.0 * t * t) * sec2])
        }
        Func::Exp => {
            let e = a.exp();
            u.compose([e, e, e, e])
        }
        Func::Log => {
            if a <= 0.0 {
                return Err(EvalError::Domain { func: "log", arg: a });
            }
            let r = 1.0 / a;
            u.compose([a.ln(), r, -r * r, 2.0 * r * r * r])
        }
        Func::Sqrt => {
            if a <= 0.0 {
                return Err(EvalError::Domain { func: "sqrt", arg: a });
            }
            let s = a.sqrt();
            let r = 1.0 / a;
            u.compose([s, 0.5 * s * r, -0.25 * s * r * r, 0.375 * s * r * r * r])
        }
    };
    checked(out)
}

fn power(base: Jet3, p: f64) -> Result<Jet3, EvalError> {
    if p.fract() == 0.0 && p.abs() <= MAX_INT_EXPONENT {
        if p < 0.0 && base.f == 0.0 {
            return Err(EvalError::DivisionByZero);
        }
        return checked(base.powi(p as i32));
    }
    if base.f <= 0.0 {
        return Err(EvalError::Domain {
            func: "non-integer power",
            arg: base.f,
        });
    }
    let log = apply(Func::Log, base)?;
    apply(Func::Exp, log * p)
}

/// Evaluates `expr` at `(x0, y0)` as an exact order-3 jet.
pub fn eval_jet3(expr: &Expr, x0: f64, y0: f64) -> Result<Jet3, EvalError> {
    match expr {
        Expr::Num(v) => Ok(Jet3::constant(*v)),
        Expr::Const(c) => Ok(Jet3::constant(c.value())),
        Expr::Var(Var::X) => Ok(Jet3::var_x(x0)),
        Expr::Var(Var::Y) => Ok(Jet3::var_y(y0)),
        Expr::Neg(inner) => Ok(-eval_jet3(inner, x0, y0)?),
        Expr::Binary(op, l, r) => {
            let a = eval_jet3(l, x0, y0)?;
            let b = eval_jet3(r, x0, y0)?;
            match op {
                BinOp::Add => checked(a + b),
                BinOp::Sub => checked(a - b),
                BinOp::Mul => checked(a * b),
                BinOp::Div => {
                    if b.f == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    checked(a * b.recip())
                }
            }
        }
        Expr::Pow(base, p) => power(eval_jet3(base, x0, y0)?, *p),
        Expr::Call(func, arg) => apply(*func, eval_jet3(arg, x0, y0)?),
    }
}
