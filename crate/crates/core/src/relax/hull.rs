//! Planar convex hulls and the Hausdorff distance between the LP hull of a
//! chain and the convex hull of the sampled graph.

use super::geometry::{Point, TriangleChain};
use crate::error::{Error, Result};
use crate::expr::FunctionOracle;

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Counter-clockwise convex hull (Andrew's monotone chain), collinear points removed.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0) };
    let (qx, qy) = (a.x + t * dx, a.y + t * dy);
    (p.x - qx).hypot(p.y - qy)
}

/// Euclidean distance from `p` to a counter-clockwise convex polygon; zero inside.
pub fn polygon_distance(polygon: &[Point], p: Point) -> f64 {
    let n = polygon.len();
    match n {
        0 => return f64::INFINITY,
        1 => return (p.x - polygon[0].x).hypot(p.y - polygon[0].y),
        _ => {}
    }
    let inside = n >= 3 && (0..n).all(|i| cross(polygon[i], polygon[(i + 1) % n], p) >= 0.0);
    if inside {
        return 0.0;
    }
    (0..n).map(|i| segment_distance(p, polygon[i], polygon[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Convex hull of the chain's triangles, i.e. the projected LP relaxation.
pub fn chain_hull(chain: &TriangleChain) -> Result<Vec<Point>> {
    let mut pts = chain.graph_vertices();
    pts.extend(chain.apexes());
    let hull = convex_hull(&pts);
    if hull.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    Ok(hull)
}

/// Hausdorff distance between the chain's hull and the hull of `sample_n`
/// uniform graph samples plus the partition points.
///
/// The graph hull lies inside the chain hull, so the distance is attained at
/// a vertex of the chain hull and only those vertices are scanned.
pub fn estimate_hausdorff<O: FunctionOracle + ?Sized>(
    chain: &TriangleChain,
    oracle: &O,
    sample_n: usize,
) -> Result<f64> {
    if sample_n < 64 {
        return Err(Error::InvalidArgument(format!("sample_n must be at least 64, got {sample_n}")));
    }
    let outer = chain_hull(chain)?;
    let (lo, hi) = (chain.lower(), chain.upper());
    let step = (hi - lo) / (sample_n - 1) as f64;
    let mut samples = Vec::with_capacity(sample_n + chain.len() + 1);
    for j in 0..sample_n {
        let x = if j == sample_n - 1 { hi } else { lo + j as f64 * step };
        samples.push(Point::new(x, oracle.value(x)?));
    }
    samples.extend(chain.graph_vertices());
    let inner = convex_hull(&samples);
    if inner.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    Ok(outer.iter().map(|&v| polygon_distance(&inner, v)).fold(0.0, f64::max))
}
