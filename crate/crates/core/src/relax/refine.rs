use super::geometry::{build_chain, exact_strength, subinterval_bound};
use crate::error::{Error, Result};
use crate::expr::FunctionOracle;
use crate::partition::{bisect, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ToleranceMet,
    BudgetExhausted,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::ToleranceMet => "tolerance-met",
            StopReason::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RefineReport {
    pub partition: Partition,
    /// Number of bisections performed.
    pub iterations: usize,
    pub bound_strength: f64,
    pub exact_strength: f64,
    pub stop: StopReason,
    /// Largest per-piece bound before each bisection, then the final one.
    pub history: Vec<f64>,
}

/// Repeatedly bisects the piece with the largest strength bound (leftmost on
/// ties) until every bound is at most `eps` or `max_parts` points were added.
///
/// `eps = 0` disables the tolerance test; `eps = inf` stops immediately.
pub fn refine<O: FunctionOracle + ?Sized>(
    oracle: &O,
    p0: &Partition,
    eps: f64,
    max_parts: usize,
) -> Result<RefineReport> {
    refine_with(oracle, p0, eps, max_parts, |_| ())
}

/// Same loop as [`refine`], calling `visit` on every partition in the sequence,
/// starting with `p0`.
pub fn refine_with<O, F>(oracle: &O, p0: &Partition, eps: f64, max_parts: usize, visit: F) -> Result<RefineReport>
where
    O: FunctionOracle + ?Sized,
    F: FnMut(&Partition),
{
    let (partition, iterations, stop, history) = refine_trajectory(oracle, p0, eps, max_parts, visit)?;
    let chain = build_chain(&partition)?;
    Ok(RefineReport {
        bound_strength: chain.max_bound(),
        exact_strength: exact_strength(&chain),
        partition,
        iterations,
        stop,
        history,
    })
}

fn refine_trajectory<O, F>(
    oracle: &O,
    p0: &Partition,
    eps: f64,
    max_parts: usize,
    mut visit: F,
) -> Result<(Partition, usize, StopReason, Vec<f64>)>
where
    O: FunctionOracle + ?Sized,
    F: FnMut(&Partition),
{
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidArgument(format!("eps must be non-negative or inf, got {eps}")));
    }
    let mut current = p0.clone();
    let mut history = Vec::new();
    let mut added = 0;
    loop {
        visit(&current);
        let (index, worst) = worst_piece(&current);
        history.push(worst);
        if worst <= eps {
            return Ok((current, added, StopReason::ToleranceMet, history));
        }
        if added >= max_parts {
            return Ok((current, added, StopReason::BudgetExhausted, history));
        }
        current = bisect(&current, index, oracle)?;
        added += 1;
    }
}

fn worst_piece(p: &Partition) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, s) in p.subintervals().iter().enumerate() {
        let e = subinterval_bound(s);
        // strict comparison keeps the leftmost maximum
        if e > best.1 {
            best = (i, e);
        }
    }
    best
}
