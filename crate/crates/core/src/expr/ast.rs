use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryFn {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
    Erf,
    Gamma,
    Neg,
}

impl UnaryFn {
    /// Looks up a callable function by its source name. `Neg` has no name.
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "tan" => UnaryFn::Tan,
            "exp" => UnaryFn::Exp,
            "log" => UnaryFn::Log,
            "sqrt" => UnaryFn::Sqrt,
            "abs" => UnaryFn::Abs,
            "erf" => UnaryFn::Erf,
            "gamma" => UnaryFn::Gamma,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Tan => "tan",
            UnaryFn::Exp => "exp",
            UnaryFn::Log => "log",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Abs => "abs",
            UnaryFn::Erf => "erf",
            UnaryFn::Gamma => "gamma",
            UnaryFn::Neg => "neg",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// Expression tree over the single free variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Constant(f64),
    Variable,
    Unary(UnaryFn, Box<ExprAst>),
    Binary(BinaryOp, Box<ExprAst>, Box<ExprAst>),
}

impl ExprAst {
    pub fn unary(f: UnaryFn, arg: ExprAst) -> Self {
        ExprAst::Unary(f, Box::new(arg))
    }

    pub fn binary(op: BinaryOp, lhs: ExprAst, rhs: ExprAst) -> Self {
        ExprAst::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn contains_variable(&self) -> bool {
        match self {
            ExprAst::Constant(_) => false,
            ExprAst::Variable => true,
            ExprAst::Unary(_, a) => a.contains_variable(),
            ExprAst::Binary(_, l, r) => l.contains_variable() || r.contains_variable(),
        }
    }
}

/// Fully parenthesized rendering that reparses to the same tree.
impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Constant(c) => write!(f, "{c}"),
            ExprAst::Variable => write!(f, "x"),
            ExprAst::Unary(UnaryFn::Neg, a) => write!(f, "(-{a})"),
            ExprAst::Unary(g, a) => write!(f, "{}({a})", g.name()),
            ExprAst::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
        }
    }
}
