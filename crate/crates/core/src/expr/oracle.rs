use super::ast::{BinaryOp, ExprAst, UnaryFn};
use super::dual::Dual;
use super::special;
use crate::error::{Error, Result};

/// Provider of f(x) and f'(x). Implementations must be deterministic.
pub trait FunctionOracle {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.0)
    }

    fn derivative(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.1)
    }

    /// Value and derivative together.
    fn eval(&self, x: f64) -> Result<(f64, f64)>;

    /// Interval on which the oracle is known to be defined, if any.
    fn domain_hint(&self) -> Option<(f64, f64)> {
        None
    }
}

impl<T: FunctionOracle + ?Sized> FunctionOracle for &T {
    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        (**self).eval(x)
    }

    fn domain_hint(&self) -> Option<(f64, f64)> {
        (**self).domain_hint()
    }
}

/// Evaluates `ast` and its derivative at `x`.
pub fn eval_dual(ast: &ExprAst, x: f64) -> Result<Dual> {
    let d = eval_node(ast, x)?;
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFinite { x })
    }
}

fn domain_error(x: f64, function: &str) -> Error {
    Error::Domain { x, function: function.to_string() }
}

fn eval_node(ast: &ExprAst, x: f64) -> Result<Dual> {
    Ok(match ast {
        ExprAst::Constant(c) => Dual::constant(*c),
        ExprAst::Variable => Dual::variable(x),
        ExprAst::Unary(f, arg) => {
            let u = eval_node(arg, x)?;
            match f {
                UnaryFn::Neg => -u,
                UnaryFn::Sin => u.sin(),
                UnaryFn::Cos => u.cos(),
                UnaryFn::Tan => u.tan(),
                UnaryFn::Exp => u.exp(),
                UnaryFn::Abs => u.abs(),
                UnaryFn::Log => {
                    if u.val <= 0.0 {
                        return Err(domain_error(x, "log"));
                    }
                    u.ln()
                }
                UnaryFn::Sqrt => {
                    if u.val < 0.0 {
                        return Err(domain_error(x, "sqrt"));
                    }
                    u.sqrt()
                }
                UnaryFn::Erf => u.chain(special::erf_kernel(u.val)?, special::erf_prime(u.val)?),
                UnaryFn::Gamma => {
                    if u.val <= 0.0 {
                        return Err(domain_error(x, "gamma"));
                    }
                    let g = special::gamma_kernel(u.val)?;
                    u.chain(g, g * special::digamma(u.val)?)
                }
            }
        }
        ExprAst::Binary(op, lhs, rhs) => {
            let l = eval_node(lhs, x)?;
            let r = eval_node(rhs, x)?;
            match op {
                BinaryOp::Add => l + r,
                BinaryOp::Sub => l - r,
                BinaryOp::Mul => l * r,
                BinaryOp::Div => {
                    if r.val == 0.0 {
                        return Err(Error::NonFinite { x });
                    }
                    l / r
                }
                BinaryOp::Pow => {
                    let p = r.val;
                    if l.val < 0.0 && p.fract() != 0.0 {
                        return Err(domain_error(x, "^"));
                    }
                    l.powf(p)
                }
            }
        }
    })
}

/// A parsed expression together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    source: String,
    ast: ExprAst,
}

impl Expression {
    pub fn parse(source: &str) -> Result<Self> {
        let tokens = super::tokenize(source)?;
        let ast = super::parse(&tokens)?;
        Ok(Expression { source: source.to_string(), ast })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &ExprAst {
        &self.ast
    }
}

impl FunctionOracle for Expression {
    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let d = eval_dual(&self.ast, x)?;
        Ok((d.val, d.der))
    }
}

impl FunctionOracle for ExprAst {
    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let d = eval_dual(self, x)?;
        Ok((d.val, d.der))
    }
}

/// Special functions exposed directly as oracles, without going through the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialOracle {
    Erf,
    Gamma,
}

impl FunctionOracle for SpecialOracle {
    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        match self {
            SpecialOracle::Erf => Ok((special::erf_kernel(x)?, special::erf_prime(x)?)),
            SpecialOracle::Gamma => Ok((special::gamma_kernel(x)?, special::gamma_prime(x)?)),
        }
    }

    fn domain_hint(&self) -> Option<(f64, f64)> {
        match self {
            SpecialOracle::Erf => None,
            SpecialOracle::Gamma => Some((0.0, f64::INFINITY)),
        }
    }
}

/// Oracle backed by a pair of closures, e.g. tabulated or externally computed functions.
pub struct ClosureOracle<F, D> {
    value: F,
    derivative: D,
}

impl<F, D> ClosureOracle<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    pub fn new(value: F, derivative: D) -> Self {
        ClosureOracle { value, derivative }
    }
}

impl<F, D> FunctionOracle for ClosureOracle<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let v = (self.value)(x);
        let d = (self.derivative)(x);
        if v.is_finite() && d.is_finite() {
            Ok((v, d))
        } else {
            Err(Error::NonFinite { x })
        }
    }
}
