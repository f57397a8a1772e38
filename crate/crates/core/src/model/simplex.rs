//! Dense two-phase bounded-variable primal simplex with Bland's rule.
//!
//! Intended for verification of desk-scale systems, not for speed.

use std::collections::BTreeMap;

use super::system::{ConstraintSense, ConstraintSystem, Objective, ObjectiveSense, VarKind};
use crate::error::{Error, Result};

pub const MAX_PIVOTS: usize = 100_000;

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub status: SimplexStatus,
    pub objective_value: f64,
    pub point: BTreeMap<String, f64>,
}

impl SimplexResult {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.point.get(name).copied()
    }
}

// How an original variable maps onto non-negative columns: value = offset + sum(sign * col).
struct VarMap {
    offset: f64,
    cols: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<Status>,
    upper: Vec<f64>,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn value(&self, j: usize) -> f64 {
        match self.status[j] {
            Status::AtLower => 0.0,
            Status::AtUpper => self.upper[j],
            Status::Basic => {
                let r = self.basis.iter().position(|&b| b == j).expect("basic column in basis");
                self.beta[r]
            }
        }
    }

    fn run(&mut self, cost: &[f64], allowed: &dyn Fn(usize) -> bool) -> Result<Outcome> {
        let m = self.rows.len();
        let n = cost.len();
        loop {
            // entering column: lowest index with an improving reduced cost
            let mut entering = None;
            for j in 0..n {
                if self.status[j] == Status::Basic || !allowed(j) {
                    continue;
                }
                let mut d = cost[j];
                for i in 0..m {
                    d -= cost[self.basis[i]] * self.rows[i][j];
                }
                let improving = match self.status[j] {
                    Status::AtLower => d < -COST_TOL && self.upper[j] > 0.0,
                    Status::AtUpper => d > COST_TOL,
                    Status::Basic => false,
                };
                if improving {
                    entering = Some(j);
                    break;
                }
            }
            let Some(q) = entering else {
                return Ok(Outcome::Optimal);
            };
            if self.pivots >= MAX_PIVOTS {
                return Err(Error::MaxIterations(MAX_PIVOTS));
            }
            self.pivots += 1;

            // +1 when the entering variable increases from its lower bound
            let dir = if self.status[q] == Status::AtLower { 1.0 } else { -1.0 };
            let mut step = self.upper[q];
            let mut leave: Option<(usize, Status)> = None;
            for i in 0..m {
                let alpha = dir * self.rows[i][q];
                let b = self.basis[i];
                let (limit, to) = if alpha > PIVOT_TOL {
                    (self.beta[i].max(0.0) / alpha, Status::AtLower)
                } else if alpha < -PIVOT_TOL && self.upper[b].is_finite() {
                    ((self.upper[b] - self.beta[i]).max(0.0) / -alpha, Status::AtUpper)
                } else {
                    continue;
                };
                let better = match leave {
                    None => limit < step,
                    Some((r, _)) => limit < step || (limit == step && b < self.basis[r]),
                };
                if better {
                    step = limit;
                    leave = Some((i, to));
                }
            }
            if step.is_infinite() {
                return Ok(Outcome::Unbounded);
            }

            for i in 0..m {
                self.beta[i] -= dir * self.rows[i][q] * step;
            }
            let entering_value = if dir > 0.0 { step } else { self.upper[q] - step };
            match leave {
                None => {
                    self.status[q] = if dir > 0.0 { Status::AtUpper } else { Status::AtLower };
                }
                Some((r, to)) => {
                    let old = self.basis[r];
                    self.status[old] = to;
                    self.status[q] = Status::Basic;
                    self.basis[r] = q;
                    self.beta[r] = entering_value;
                    self.pivot(r, q);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let p = self.rows[r][q];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
}

/// Optimizes `objective` over a system of continuous variables.
pub fn solve_lp(sys: &ConstraintSystem, objective: &Objective) -> Result<SimplexResult> {
    sys.validate()?;
    if let Some(v) = sys.binaries().next() {
        return Err(Error::InvalidArgument(format!("binary variable {} present; relax integrality first", v.name)));
    }
    let index = sys.index();

    // structural columns
    let mut upper: Vec<f64> = Vec::new();
    let mut maps = Vec::with_capacity(sys.variables.len());
    for v in &sys.variables {
        debug_assert_eq!(v.kind, VarKind::Continuous);
        let mut map = VarMap { offset: 0.0, cols: Vec::new() };
        if v.lower.is_finite() {
            map.offset = v.lower;
            map.cols.push((upper.len(), 1.0));
            upper.push(v.upper - v.lower);
        } else if v.upper.is_finite() {
            map.offset = v.upper;
            map.cols.push((upper.len(), -1.0));
            upper.push(f64::INFINITY);
        } else {
            map.cols.push((upper.len(), 1.0));
            upper.push(f64::INFINITY);
            map.cols.push((upper.len(), -1.0));
            upper.push(f64::INFINITY);
        }
        maps.push(map);
    }
    let structural = upper.len();

    // rows: sum a_j x_j (sense) rhs, with slacks and sign normalization
    let m = sys.constraints.len();
    let slack_count = sys.constraints.iter().filter(|c| c.sense != ConstraintSense::Eq).count();
    let mut dense: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut unit_slack: Vec<Option<usize>> = Vec::with_capacity(m);
    let mut next_slack = structural;
    for c in &sys.constraints {
        let mut row = vec![0.0; structural + slack_count];
        let mut b = c.rhs;
        for (name, a) in &c.terms {
            let map = &maps[index[name.as_str()]];
            b -= a * map.offset;
            for &(col, sign) in &map.cols {
                row[col] += a * sign;
            }
        }
        let mut slack = None;
        match c.sense {
            ConstraintSense::Le => {
                row[next_slack] = 1.0;
                slack = Some(next_slack);
                next_slack += 1;
            }
            ConstraintSense::Ge => {
                row[next_slack] = -1.0;
                slack = Some(next_slack);
                next_slack += 1;
            }
            ConstraintSense::Eq => {}
        }
        if b < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
            b = -b;
        }
        unit_slack.push(slack.filter(|&s| row[s] == 1.0));
        dense.push(row);
        rhs.push(b);
    }
    upper.extend(std::iter::repeat_n(f64::INFINITY, slack_count));

    // artificials where no slack can start in the basis
    let first_artificial = upper.len();
    let artificial_rows: Vec<usize> = (0..m).filter(|&i| unit_slack[i].is_none()).collect();
    let n = first_artificial + artificial_rows.len();
    upper.extend(std::iter::repeat_n(f64::INFINITY, artificial_rows.len()));
    let mut basis = vec![0; m];
    for (i, row) in dense.iter_mut().enumerate() {
        row.resize(n, 0.0);
        if let Some(s) = unit_slack[i] {
            basis[i] = s;
        }
    }
    for (a, &i) in artificial_rows.iter().enumerate() {
        dense[i][first_artificial + a] = 1.0;
        basis[i] = first_artificial + a;
    }
    let mut status = vec![Status::AtLower; n];
    for &b in &basis {
        status[b] = Status::Basic;
    }
    let mut tab = Tableau { rows: dense, beta: rhs, basis, status, upper, pivots: 0 };

    // phase 1
    if !artificial_rows.is_empty() {
        let mut cost = vec![0.0; n];
        cost[first_artificial..].iter_mut().for_each(|c| *c = 1.0);
        tab.run(&cost, &|_| true)?;
        let infeasibility: f64 = (first_artificial..n).map(|j| tab.value(j)).sum();
        if infeasibility > FEAS_TOL {
            return Ok(SimplexResult {
                status: SimplexStatus::Infeasible,
                objective_value: f64::NAN,
                point: BTreeMap::new(),
            });
        }
        // artificials are pinned at zero from here on
        for j in first_artificial..n {
            tab.upper[j] = 0.0;
        }
    }

    // phase 2
    let flip = if objective.sense == ObjectiveSense::Max { -1.0 } else { 1.0 };
    let mut cost = vec![0.0; n];
    for (name, c) in &objective.terms {
        let Some(&j) = index.get(name.as_str()) else {
            return Err(Error::InvalidArgument(format!("objective references unknown variable {name}")));
        };
        for &(col, sign) in &maps[j].cols {
            cost[col] += flip * c * sign;
        }
    }
    let outcome = tab.run(&cost, &|j| j < first_artificial)?;

    let mut point = BTreeMap::new();
    for (v, map) in sys.variables.iter().zip(&maps) {
        let value = map.offset + map.cols.iter().map(|&(col, sign)| sign * tab.value(col)).sum::<f64>();
        point.insert(v.name.clone(), value);
    }
    let objective_value = objective.terms.iter().map(|(name, c)| c * point[name]).sum();
    Ok(SimplexResult {
        status: match outcome {
            Outcome::Optimal => SimplexStatus::Optimal,
            Outcome::Unbounded => SimplexStatus::Unbounded,
        },
        objective_value,
        point,
    })
}
