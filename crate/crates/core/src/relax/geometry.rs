use crate::error::{Error, Result};
use crate::expr::FunctionOracle;
use crate::partition::{Curvature, Partition, SubInterval, DEFAULT_TOL_D};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Tangent to the graph at `x0`.
pub fn tangent_line<O: FunctionOracle + ?Sized>(oracle: &O, x0: f64) -> Result<Line> {
    let (f, d) = oracle.eval(x0)?;
    let line = Line { slope: d, intercept: f - d * x0 };
    if line.intercept.is_finite() {
        Ok(line)
    } else {
        Err(Error::NonFinite { x: x0 })
    }
}

/// Secant through the graph points at `a` and `b`.
pub fn secant_line<O: FunctionOracle + ?Sized>(oracle: &O, a: f64, b: f64) -> Result<Line> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("secant needs a < b, got [{a}, {b}]")));
    }
    let fa = oracle.value(a)?;
    let fb = oracle.value(b)?;
    let slope = (fb - fa) / (b - a);
    if b - a == 0.0 || !slope.is_finite() {
        return Err(Error::NumericalCollapse { a, b });
    }
    Ok(Line { slope, intercept: fa - slope * a })
}

/// Intersection of the tangents at `a` and `b`.
pub fn tangent_intersection<O: FunctionOracle + ?Sized>(oracle: &O, a: f64, b: f64) -> Result<Point> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("tangent intersection needs a < b, got [{a}, {b}]")));
    }
    let (fa, da) = oracle.eval(a)?;
    let (fb, db) = oracle.eval(b)?;
    apex(a, b, fa, fb, da, db, DEFAULT_TOL_D)
}

// The apex splits [a, b] at the fraction t = (s - f'(b)) / (f'(a) - f'(b)), s the secant slope;
// by the mean value theorem t lies in [0, 1] on a convex or concave piece.
fn apex(a: f64, b: f64, fa: f64, fb: f64, da: f64, db: f64, tol: f64) -> Result<Point> {
    let gap = da - db;
    if gap.abs() <= tol || gap == 0.0 {
        return Err(Error::ParallelTangents { a, b });
    }
    let w = b - a;
    let s = (fb - fa) / w;
    let t = ((s - db) / gap).clamp(0.0, 1.0);
    if !t.is_finite() {
        return Err(Error::ParallelTangents { a, b });
    }
    let x = a + t * w;
    let y = if t <= 0.5 { fa + da * (t * w) } else { fb - db * ((1.0 - t) * w) };
    Ok(Point::new(x, y))
}

/// One piece of the relaxation: graph points at both ends and the tangent intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub v_left: Point,
    pub v_right: Point,
    pub v_apex: Point,
    pub curvature: Curvature,
}

impl Triangle {
    pub fn secant_at(&self, x: f64) -> f64 {
        interpolate(self.v_left, self.v_right, x)
    }

    /// The piecewise tangent envelope through the apex.
    pub fn tangent_at(&self, x: f64) -> f64 {
        if x <= self.v_apex.x {
            interpolate(self.v_left, self.v_apex, x)
        } else {
            interpolate(self.v_apex, self.v_right, x)
        }
    }

    pub fn lower_at(&self, x: f64) -> f64 {
        match self.curvature {
            Curvature::Convex => self.tangent_at(x),
            _ => self.secant_at(x),
        }
    }

    pub fn upper_at(&self, x: f64) -> f64 {
        match self.curvature {
            Curvature::Convex => self.secant_at(x),
            _ => self.tangent_at(x),
        }
    }

    /// Vertical distance between apex and secant, the largest gap over the triangle.
    pub fn vertical_gap(&self) -> f64 {
        (self.v_apex.y - self.secant_at(self.v_apex.x)).abs()
    }
}

fn interpolate(p: Point, q: Point, x: f64) -> f64 {
    if q.x == p.x {
        return p.y.max(q.y);
    }
    let t = (x - p.x) / (q.x - p.x);
    p.y + t * (q.y - p.y)
}

/// The chain of triangles generated by a partition, with the per-piece strength bound.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleChain {
    triangles: Vec<Triangle>,
    partition: Partition,
    bounds: Vec<f64>,
}

impl TriangleChain {
    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Per-triangle upper bounds on the vertical gap.
    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn lower(&self) -> f64 {
        self.partition.lower()
    }

    pub fn upper(&self) -> f64 {
        self.partition.upper()
    }

    pub fn max_bound(&self) -> f64 {
        self.bounds.iter().copied().fold(0.0, f64::max)
    }

    /// Graph vertices `v_0 … v_k`.
    pub fn graph_vertices(&self) -> Vec<Point> {
        let mut out: Vec<Point> = self.triangles.iter().map(|t| t.v_left).collect();
        if let Some(last) = self.triangles.last() {
            out.push(last.v_right);
        }
        out
    }

    pub fn apexes(&self) -> Vec<Point> {
        self.triangles.iter().map(|t| t.v_apex).collect()
    }

    /// Candidate extreme points of the LP hull: both end vertices and every apex.
    pub fn hull_vertices(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.triangles.len() + 2);
        if let (Some(first), Some(last)) = (self.triangles.first(), self.triangles.last()) {
            out.push(first.v_left);
            out.push(last.v_right);
        }
        out.extend(self.apexes());
        out
    }

    /// The triangle whose sub-interval contains `x`.
    pub fn triangle_at(&self, x: f64) -> Option<&Triangle> {
        self.partition.locate(x).map(|i| &self.triangles[i])
    }
}

/// Builds one triangle per sub-interval of `p`.
pub fn build_chain(p: &Partition) -> Result<TriangleChain> {
    let mut triangles = Vec::with_capacity(p.len());
    let mut bounds = Vec::with_capacity(p.len());
    for s in p.subintervals() {
        triangles.push(triangle(s)?);
        bounds.push(subinterval_bound(s));
    }
    Ok(TriangleChain { triangles, partition: p.clone(), bounds })
}

fn triangle(s: &SubInterval) -> Result<Triangle> {
    if s.curvature == Curvature::Linear {
        return Err(Error::LinearPiece { a: s.a, b: s.b });
    }
    // bisected slivers can have nearly equal end slopes; only exact parallelism is fatal here
    let v_apex = apex(s.a, s.b, s.fa, s.fb, s.da, s.db, 0.0)?;
    let tri =
        Triangle { v_left: Point::new(s.a, s.fa), v_right: Point::new(s.b, s.fb), v_apex, curvature: s.curvature };
    let below = tri.v_apex.y <= tri.secant_at(tri.v_apex.x);
    let consistent = match s.curvature {
        Curvature::Convex => below || tri.vertical_gap() <= 1e-12 * (1.0 + s.fa.abs() + s.fb.abs()),
        _ => !below || tri.vertical_gap() <= 1e-12 * (1.0 + s.fa.abs() + s.fb.abs()),
    };
    if !consistent {
        return Err(Error::InconsistentCurvature { a: s.a, b: s.b });
    }
    Ok(tri)
}

/// Largest vertical gap between tangent envelope and secant over the chain.
pub fn exact_strength(chain: &TriangleChain) -> f64 {
    chain.triangles.iter().map(Triangle::vertical_gap).fold(0.0, f64::max)
}

/// Upper bound `(b - a)·|f'(a) - f'(b)| / 4` on the gap over `[a, b]`.
pub fn bound_strength<O: FunctionOracle + ?Sized>(oracle: &O, a: f64, b: f64) -> Result<f64> {
    let da = oracle.derivative(a)?;
    let db = oracle.derivative(b)?;
    Ok(strength_bound(a, b, da, db))
}

pub(crate) fn strength_bound(a: f64, b: f64, da: f64, db: f64) -> f64 {
    (b - a) * (da - db).abs() / 4.0
}

pub(crate) fn subinterval_bound(s: &SubInterval) -> f64 {
    strength_bound(s.a, s.b, s.da, s.db)
}

/// Number of uniform refinements after which a convex or concave piece is
/// guaranteed to have strength below `delta`.
pub fn iteration_bound<O: FunctionOracle + ?Sized>(oracle: &O, a: f64, b: f64, delta: f64) -> Result<u64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let da = oracle.derivative(a)?;
    let db = oracle.derivative(b)?;
    let n = 1.5 * ((b - a) * (db - da).abs() / (2.0 * delta)).sqrt();
    Ok(n.max(2.0).ceil() as u64)
}
