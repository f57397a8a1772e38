use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

impl VarKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VarKind::Continuous => "continuous",
            VarKind::Binary => "binary",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDef {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub kind: VarKind,
}

impl VarDef {
    pub fn continuous(name: impl Into<String>, lower: f64, upper: f64) -> Self {
        VarDef { name: name.into(), lower, upper, kind: VarKind::Continuous }
    }

    pub fn binary(name: impl Into<String>) -> Self {
        VarDef { name: name.into(), lower: 0.0, upper: 1.0, kind: VarKind::Binary }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintSense {
    Le,
    Eq,
    Ge,
}

impl ConstraintSense {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintSense::Le => "<=",
            ConstraintSense::Eq => "=",
            ConstraintSense::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinConstraint {
    pub terms: Vec<(String, f64)>,
    pub sense: ConstraintSense,
    pub rhs: f64,
}

impl LinConstraint {
    pub fn new(terms: Vec<(String, f64)>, sense: ConstraintSense, rhs: f64) -> Self {
        LinConstraint { terms, sense, rhs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveSense {
    Min,
    Max,
}

impl ObjectiveSense {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveSense::Min => "min",
            ObjectiveSense::Max => "max",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub sense: ObjectiveSense,
    pub terms: Vec<(String, f64)>,
}

impl Objective {
    pub fn minimize(terms: Vec<(String, f64)>) -> Self {
        Objective { sense: ObjectiveSense::Min, terms }
    }

    pub fn maximize(terms: Vec<(String, f64)>) -> Self {
        Objective { sense: ObjectiveSense::Max, terms }
    }

    /// Optimize a single variable.
    pub fn single(sense: ObjectiveSense, var: &str) -> Self {
        Objective { sense, terms: vec![(var.to_string(), 1.0)] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    IncrementalMilp,
    LambdaLp,
}

impl Formulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::IncrementalMilp => "incremental-milp",
            Formulation::LambdaLp => "lambda-lp",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "incremental-milp" => Some(Formulation::IncrementalMilp),
            "lambda-lp" => Some(Formulation::LambdaLp),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub function: String,
    pub lower: f64,
    pub upper: f64,
    pub partition: Vec<f64>,
    pub strength_bound: f64,
    pub formulation: Formulation,
}

/// Variables, linear constraints and an optional objective.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub variables: Vec<VarDef>,
    pub constraints: Vec<LinConstraint>,
    pub objective: Option<Objective>,
    pub metadata: Metadata,
}

impl ConstraintSystem {
    pub fn variable(&self, name: &str) -> Option<&VarDef> {
        self.variables.iter().find(|v| v.name == name)
    }

    pub fn binaries(&self) -> impl Iterator<Item = &VarDef> {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary)
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = Some(objective);
        self
    }

    pub fn with_function(mut self, text: impl Into<String>) -> Self {
        self.metadata.function = text.into();
        self
    }

    /// Name → column index.
    pub fn index(&self) -> HashMap<&str, usize> {
        self.variables.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect()
    }

    /// Checks names, bounds and term references.
    pub fn validate(&self) -> Result<()> {
        let index = self.index();
        if index.len() != self.variables.len() {
            return Err(Error::Import("duplicate variable names".into()));
        }
        for v in &self.variables {
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(Error::Import(format!("invalid bounds on {}", v.name)));
            }
            if v.kind == VarKind::Binary && (v.lower != 0.0 || v.upper != 1.0) {
                return Err(Error::Import(format!("binary {} must have bounds [0, 1]", v.name)));
            }
        }
        let check_terms = |terms: &[(String, f64)]| -> Result<()> {
            let mut seen = std::collections::HashSet::new();
            for (name, coef) in terms {
                if !index.contains_key(name.as_str()) {
                    return Err(Error::Import(format!("undeclared variable {name}")));
                }
                if !seen.insert(name.as_str()) {
                    return Err(Error::Import(format!("variable {name} repeated in one row")));
                }
                if !coef.is_finite() {
                    return Err(Error::Import(format!("non-finite coefficient on {name}")));
                }
            }
            Ok(())
        };
        for c in &self.constraints {
            check_terms(&c.terms)?;
            if !c.rhs.is_finite() {
                return Err(Error::Import("non-finite right-hand side".into()));
            }
        }
        if let Some(obj) = &self.objective {
            check_terms(&obj.terms)?;
        }
        Ok(())
    }

    /// Largest violation of any constraint or bound at `values` (indexed like `variables`).
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let index = self.index();
        let mut worst: f64 = 0.0;
        for (v, &x) in self.variables.iter().zip(values) {
            worst = worst.max(v.lower - x).max(x - v.upper);
        }
        for c in &self.constraints {
            let lhs: f64 = c.terms.iter().map(|(n, a)| a * values[index[n.as_str()]]).sum();
            let viol = match c.sense {
                ConstraintSense::Le => lhs - c.rhs,
                ConstraintSense::Ge => c.rhs - lhs,
                ConstraintSense::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }
}
