//! Univariate expressions: lexing, parsing, dual-number evaluation and
//! special-function kernels.

mod ast;
mod dual;
mod lexer;
mod oracle;
mod parser;
pub mod special;

pub use ast::{BinaryOp, ExprAst, UnaryFn};
pub use dual::Dual;
pub use lexer::{tokenize, Token, TokenKind};
pub use oracle::{eval_dual, ClosureOracle, Expression, FunctionOracle, SpecialOracle};
pub use parser::parse;
pub use special::{erf_kernel, erf_prime, gamma_kernel, gamma_prime};
