use super::system::{
    ConstraintSense, ConstraintSystem, Formulation, LinConstraint, Metadata, ObjectiveSense, VarDef, VarKind,
};
use crate::error::{Error, Result};
use crate::relax::{Point, TriangleChain};

fn d1(i: usize) -> String {
    format!("d1_{i}")
}

fn d2(i: usize) -> String {
    format!("d2_{i}")
}

fn z(i: usize) -> String {
    format!("z_{i}")
}

fn metadata(chain: &TriangleChain, formulation: Formulation) -> Metadata {
    Metadata {
        function: String::new(),
        lower: chain.lower(),
        upper: chain.upper(),
        partition: chain.partition().points().to_vec(),
        strength_bound: chain.max_bound(),
        formulation,
    }
}

fn push_term(terms: &mut Vec<(String, f64)>, name: String, coef: f64) {
    if coef != 0.0 {
        terms.push((name, coef));
    }
}

/// Incremental MILP over the chain: triangle `i` may only be entered once
/// triangle `i - 1` is filled.
///
/// Variables are `x, y, d1_i, d2_i (i = 1..k), z_i (i = 1..k-1)`.
pub fn build_milp(chain: &TriangleChain) -> Result<ConstraintSystem> {
    let k = chain.len();
    if k == 0 {
        return Err(Error::EmptyChain);
    }
    let tris = chain.triangles();
    let v0 = tris[0].v_left;

    let mut variables = vec![
        VarDef::continuous("x", chain.lower(), chain.upper()),
        VarDef::continuous("y", f64::NEG_INFINITY, f64::INFINITY),
    ];
    for i in 1..=k {
        variables.push(VarDef::continuous(d1(i), 0.0, 1.0));
        variables.push(VarDef::continuous(d2(i), 0.0, 1.0));
    }
    for i in 1..k {
        variables.push(VarDef::binary(z(i)));
    }

    let coordinate_row = |var: &str, coord: fn(Point) -> f64, origin: f64| {
        let mut terms = vec![(var.to_string(), 1.0)];
        for (n, t) in tris.iter().enumerate() {
            push_term(&mut terms, d1(n + 1), -(coord(t.v_apex) - coord(t.v_left)));
            push_term(&mut terms, d2(n + 1), -(coord(t.v_right) - coord(t.v_left)));
        }
        LinConstraint::new(terms, ConstraintSense::Eq, origin)
    };
    let mut constraints = vec![
        coordinate_row("y", |p| p.y, v0.y),
        coordinate_row("x", |p| p.x, v0.x),
        LinConstraint::new(vec![(d1(1), 1.0), (d2(1), 1.0)], ConstraintSense::Le, 1.0),
    ];
    for i in 2..=k {
        constraints.push(LinConstraint::new(
            vec![(d1(i), 1.0), (d2(i), 1.0), (z(i - 1), -1.0)],
            ConstraintSense::Le,
            0.0,
        ));
        constraints.push(LinConstraint::new(vec![(z(i - 1), 1.0), (d2(i - 1), -1.0)], ConstraintSense::Le, 0.0));
    }

    Ok(ConstraintSystem {
        variables,
        constraints,
        objective: None,
        metadata: metadata(chain, Formulation::IncrementalMilp),
    })
}

/// Convex-combination LP over the end vertices and all apexes.
pub fn build_lp(chain: &TriangleChain) -> Result<ConstraintSystem> {
    if chain.is_empty() {
        return Err(Error::EmptyChain);
    }
    let verts = chain.hull_vertices();
    let lam = |i: usize| format!("lam_{i}");

    let mut variables = vec![
        VarDef::continuous("x", chain.lower(), chain.upper()),
        VarDef::continuous("y", f64::NEG_INFINITY, f64::INFINITY),
    ];
    variables.extend((1..=verts.len()).map(|i| VarDef::continuous(lam(i), 0.0, 1.0)));

    let mut x_row = vec![("x".to_string(), 1.0)];
    let mut y_row = vec![("y".to_string(), 1.0)];
    for (i, w) in verts.iter().enumerate() {
        push_term(&mut x_row, lam(i + 1), -w.x);
        push_term(&mut y_row, lam(i + 1), -w.y);
    }
    let sum_row = (1..=verts.len()).map(|i| (lam(i), 1.0)).collect();
    let constraints = vec![
        LinConstraint::new(x_row, ConstraintSense::Eq, 0.0),
        LinConstraint::new(y_row, ConstraintSense::Eq, 0.0),
        LinConstraint::new(sum_row, ConstraintSense::Eq, 1.0),
    ];

    Ok(ConstraintSystem { variables, constraints, objective: None, metadata: metadata(chain, Formulation::LambdaLp) })
}

/// Re-declares every binary as continuous in `[0, 1]`.
pub fn relax_integrality(sys: &ConstraintSystem) -> ConstraintSystem {
    let mut out = sys.clone();
    for v in &mut out.variables {
        if v.kind == VarKind::Binary {
            v.kind = VarKind::Continuous;
        }
    }
    out
}

/// Extremes of `y` over the relaxation, attained at vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YBounds {
    /// Over every graph vertex and apex (projection of the MILP).
    pub milp: f64,
    /// Over the LP hull vertex set.
    pub lp: f64,
}

pub fn bound_y(chain: &TriangleChain, sense: ObjectiveSense) -> YBounds {
    let pick = |pts: &[Point]| {
        let ys = pts.iter().map(|p| p.y);
        match sense {
            ObjectiveSense::Min => ys.fold(f64::INFINITY, f64::min),
            ObjectiveSense::Max => ys.fold(f64::NEG_INFINITY, f64::max),
        }
    };
    let mut all = chain.graph_vertices();
    all.extend(chain.apexes());
    YBounds { milp: pick(&all), lp: pick(&chain.hull_vertices()) }
}

/// Values for the [`build_milp`] variables that place `(x, y)` in the
/// triangle over `x`: earlier triangles are filled, later ones empty.
pub fn incremental_fill(chain: &TriangleChain, point: Point) -> Result<Vec<f64>> {
    let k = chain.len();
    if k == 0 {
        return Err(Error::EmptyChain);
    }
    let Some(active) = chain.partition().locate(point.x) else {
        return Err(Error::InvalidArgument(format!("x = {} outside the chain", point.x)));
    };
    let t = &chain.triangles()[active];
    // barycentric weights on the edges v_left -> apex and v_left -> v_right
    let (ax, ay) = (t.v_apex.x - t.v_left.x, t.v_apex.y - t.v_left.y);
    let (bx, by) = (t.v_right.x - t.v_left.x, t.v_right.y - t.v_left.y);
    let (px, py) = (point.x - t.v_left.x, point.y - t.v_left.y);
    let det = ax * by - ay * bx;
    if det == 0.0 {
        return Err(Error::DegenerateHull);
    }
    let w1 = (px * by - py * bx) / det;
    let w2 = (ax * py - ay * px) / det;

    let mut values = vec![point.x, point.y];
    for i in 0..k {
        let (a, b) = match i.cmp(&active) {
            std::cmp::Ordering::Less => (0.0, 1.0),
            std::cmp::Ordering::Equal => (w1, w2),
            std::cmp::Ordering::Greater => (0.0, 0.0),
        };
        values.push(a);
        values.push(b);
    }
    values.extend((1..k).map(|i| if i <= active { 1.0 } else { 0.0 }));
    Ok(values)
}
