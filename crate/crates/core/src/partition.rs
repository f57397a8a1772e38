//! Partitions of a closed interval: break-point detection, base partitions,
//! interval bisection and per-piece curvature labels.

use crate::error::{Error, Result};
use crate::expr::FunctionOracle;

/// Derivative-equality tolerance used when building base partitions.
pub const DEFAULT_TOL_D: f64 = 1e-8;
/// Tolerance of the curvature classifier.
pub const DEFAULT_CURVATURE_TOL: f64 = 1e-9;
/// Default grid resolution for break-point detection.
pub const DEFAULT_GRID_N: usize = 2048;

/// A closed interval `[lower, upper]` with `lower < upper`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    lower: f64,
    upper: f64,
}

impl Domain {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::InvalidDomain { lower, upper });
        }
        Ok(Domain { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Break-point localization tolerance, 1e-10 of the width.
    pub fn default_breakpoint_tol(&self) -> f64 {
        1e-10 * self.width()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curvature {
    Convex,
    Concave,
    Linear,
}

impl Curvature {
    pub fn as_str(self) -> &'static str {
        match self {
            Curvature::Convex => "convex",
            Curvature::Concave => "concave",
            Curvature::Linear => "linear",
        }
    }
}

/// `[a, b]` with cached oracle data at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubInterval {
    pub a: f64,
    pub b: f64,
    pub fa: f64,
    pub fb: f64,
    pub da: f64,
    pub db: f64,
    pub curvature: Curvature,
}

impl SubInterval {
    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Base,
    Refined,
}

/// Strictly increasing point sequence over a domain, with derived sub-intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    points: Vec<f64>,
    subintervals: Vec<SubInterval>,
    provenance: Provenance,
}

impl Partition {
    /// Builds a partition from explicit points, classifying each piece.
    ///
    /// Every piece must be strictly convex or concave; the caller is
    /// responsible for including all break points.
    pub fn from_points<O: FunctionOracle + ?Sized>(oracle: &O, points: &[f64]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("a partition needs at least two points".into()));
        }
        if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("partition points must be finite and strictly increasing".into()));
        }
        let data = points.iter().map(|&x| oracle.eval(x)).collect::<Result<Vec<_>>>()?;
        let mut subintervals = Vec::with_capacity(points.len() - 1);
        for i in 0..points.len() - 1 {
            let (a, b) = (points[i], points[i + 1]);
            let ((fa, da), (fb, db)) = (data[i], data[i + 1]);
            let curvature = classify(oracle, a, b, (fa, da), (fb, db), DEFAULT_CURVATURE_TOL)?;
            subintervals.push(SubInterval { a, b, fa, fb, da, db, curvature });
        }
        Ok(Partition { points: points.to_vec(), subintervals, provenance: Provenance::Base })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn subintervals(&self) -> &[SubInterval] {
        &self.subintervals
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Number of sub-intervals, `k = |points| - 1`.
    pub fn len(&self) -> usize {
        self.subintervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subintervals.is_empty()
    }

    pub fn lower(&self) -> f64 {
        self.points[0]
    }

    pub fn upper(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Index of the sub-interval containing `x` (the left one at shared points).
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(x >= self.lower() && x <= self.upper()) {
            return None;
        }
        let idx = self.points.partition_point(|&p| p < x);
        Some(idx.saturating_sub(1).min(self.len() - 1))
    }
}

/// Classifies `[a, b]` by the sign of `f'(b) - f'(a)`, cross-checked at the midpoint.
pub fn curvature<O: FunctionOracle + ?Sized>(oracle: &O, a: f64, b: f64, tol: f64) -> Result<Curvature> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("curvature needs a < b, got [{a}, {b}]")));
    }
    let left = oracle.eval(a)?;
    let right = oracle.eval(b)?;
    classify(oracle, a, b, left, right, tol)
}

fn classify<O: FunctionOracle + ?Sized>(
    oracle: &O,
    a: f64,
    b: f64,
    (fa, da): (f64, f64),
    (fb, db): (f64, f64),
    tol: f64,
) -> Result<Curvature> {
    let slope_change = db - da;
    if slope_change.abs() <= tol {
        return Ok(Curvature::Linear);
    }
    let m = 0.5 * a + 0.5 * b;
    let fm = oracle.value(m)?;
    let secant = 0.5 * fa + 0.5 * fb;
    let scale = 1f64.max(fa.abs()).max(fb.abs());
    if slope_change > 0.0 {
        if fm <= secant + tol * scale {
            return Ok(Curvature::Convex);
        }
    } else if fm >= secant - tol * scale {
        return Ok(Curvature::Concave);
    }
    Err(Error::InconsistentCurvature { a, b })
}

/// Finds interior points where the curvature proxy `f'(x+h) - f'(x-h)` changes sign.
///
/// Sign changes are first bracketed on a uniform grid of `grid_n` steps and
/// then bisected down to width `tol`.
pub fn detect_breakpoints<O: FunctionOracle + ?Sized>(
    oracle: &O,
    dom: Domain,
    grid_n: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if grid_n < 16 {
        return Err(Error::InvalidArgument(format!("grid_n must be at least 16, got {grid_n}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (lo, hi) = (dom.lower(), dom.upper());
    let h = dom.width() / grid_n as f64;
    let grid: Vec<f64> = (0..=grid_n).map(|j| if j == grid_n { hi } else { lo + j as f64 * h }).collect();
    let slopes = grid.iter().map(|&x| oracle.derivative(x)).collect::<Result<Vec<_>>>()?;

    let mut found: Vec<f64> = Vec::new();
    let mut last: Option<(usize, f64)> = None;
    for j in 1..grid_n {
        let sign = proxy_sign(slopes[j + 1], slopes[j - 1]);
        if sign == 0.0 {
            continue;
        }
        if let Some((i, prev)) = last {
            if prev != sign {
                found.push(localize(oracle, dom, grid[i], grid[j], prev, h, tol)?);
            }
        }
        last = Some((j, sign));
    }

    // drop points too close to the ends or to an earlier point
    let mut out: Vec<f64> = Vec::with_capacity(found.len());
    for x in found {
        if x - lo < 2.0 * h || hi - x < 2.0 * h {
            continue;
        }
        if out.last().is_some_and(|&p| x - p < 2.0 * h) {
            continue;
        }
        out.push(x);
    }
    Ok(out)
}

fn proxy_sign(right: f64, left: f64) -> f64 {
    let c = right - left;
    let noise = 64.0 * f64::EPSILON * right.abs().max(left.abs());
    if c.abs() <= noise {
        0.0
    } else {
        c.signum()
    }
}

fn localize<O: FunctionOracle + ?Sized>(
    oracle: &O,
    dom: Domain,
    mut lo: f64,
    mut hi: f64,
    lo_sign: f64,
    h: f64,
    tol: f64,
) -> Result<f64> {
    // the proxy's root drifts from the true one by O(step^2), so shrink the step with the bracket
    let h_floor = 1e-6 * dom.width();
    while hi - lo > tol {
        let mid = 0.5 * lo + 0.5 * hi;
        if mid <= lo || mid >= hi {
            break;
        }
        let step = h.min(hi - lo).max(h_floor);
        let sign = proxy_sign(oracle.derivative(mid + step)?, oracle.derivative(mid - step)?);
        if sign == 0.0 {
            return Ok(mid);
        }
        if sign == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * lo + 0.5 * hi)
}

/// Base partition: domain ends plus break points, with a midpoint added to any
/// piece whose end derivatives coincide within `tol_d`.
pub fn base_partition<O: FunctionOracle + ?Sized>(
    oracle: &O,
    dom: Domain,
    breakpoints: &[f64],
    tol_d: f64,
) -> Result<Partition> {
    if breakpoints.iter().any(|&b| !(b > dom.lower() && b < dom.upper())) {
        return Err(Error::InvalidArgument("break points must lie strictly inside the domain".into()));
    }
    if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("break points must be sorted and distinct".into()));
    }
    let mut coarse = Vec::with_capacity(breakpoints.len() + 2);
    coarse.push(dom.lower());
    coarse.extend_from_slice(breakpoints);
    coarse.push(dom.upper());
    let slopes = coarse.iter().map(|&x| oracle.derivative(x)).collect::<Result<Vec<_>>>()?;

    let mut points = vec![coarse[0]];
    for i in 0..coarse.len() - 1 {
        let (a, b) = (coarse[i], coarse[i + 1]);
        if (slopes[i] - slopes[i + 1]).abs() <= tol_d {
            let m = 0.5 * a + 0.5 * b;
            let dm = oracle.derivative(m)?;
            if (slopes[i] - dm).abs() <= tol_d || (dm - slopes[i + 1]).abs() <= tol_d {
                return Err(Error::DegenerateFunction { a, b });
            }
            points.push(m);
        }
        points.push(b);
    }
    Partition::from_points(oracle, &points)
}

/// Interval bisection of sub-interval `index`; the children keep the parent's curvature.
pub fn bisect<O: FunctionOracle + ?Sized>(p: &Partition, index: usize, oracle: &O) -> Result<Partition> {
    let Some(&parent) = p.subintervals.get(index) else {
        return Err(Error::InvalidArgument(format!("sub-interval index {index} out of range for {} pieces", p.len())));
    };
    let m = 0.5 * parent.a + 0.5 * parent.b;
    if !(m > parent.a && m < parent.b) {
        return Err(Error::NumericalCollapse { a: parent.a, b: parent.b });
    }
    let (fm, dm) = oracle.eval(m)?;
    let left = SubInterval { b: m, fb: fm, db: dm, ..parent };
    let right = SubInterval { a: m, fa: fm, da: dm, ..parent };

    let mut points = Vec::with_capacity(p.points.len() + 1);
    points.extend_from_slice(&p.points[..=index]);
    points.push(m);
    points.extend_from_slice(&p.points[index + 1..]);

    let mut subintervals = Vec::with_capacity(p.subintervals.len() + 1);
    subintervals.extend_from_slice(&p.subintervals[..index]);
    subintervals.push(left);
    subintervals.push(right);
    subintervals.extend_from_slice(&p.subintervals[index + 1..]);

    Ok(Partition { points, subintervals, provenance: Provenance::Refined })
}
