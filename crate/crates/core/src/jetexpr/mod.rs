//! Expression parsing and exact third-order jet evaluation.

mod eval;
mod jet;
mod parser;

pub use eval::{eval_jet3, EvalError};
pub use jet::{Jet1, Jet2, Jet3, Real};
pub use parser::{parse_expression, BinOp, Constant, Expr, Func, ParseError, Var};
