//! CPLEX LP text writer.

use std::fmt::Write as _;

use super::system::{ConstraintSystem, ObjectiveSense, VarKind};
use crate::error::{Error, Result};

const MAX_NAME_LEN: usize = 255;

fn valid_identifier(name: &str) -> bool {
    const EXTRA: &str = "!\"#$%&()/,.;?@_`'{}|~";
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if first.is_ascii_digit() || first == '.' {
        return false;
    }
    // names like e5 read as exponents
    let rest = &name[first.len_utf8()..];
    if matches!(first, 'e' | 'E') && !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
        return false;
    }
    name.len() <= MAX_NAME_LEN && name.chars().all(|c| c.is_ascii_alphanumeric() || EXTRA.contains(c))
}

fn num(v: f64) -> String {
    // shortest round-trip representation
    format!("{v:?}")
}

fn write_expr(out: &mut String, terms: &[(String, f64)]) {
    if terms.is_empty() {
        return;
    }
    for (i, (name, c)) in terms.iter().enumerate() {
        let (sign, mag) = if *c < 0.0 { ("-", -c) } else { ("+", *c) };
        if i == 0 {
            if sign == "-" {
                out.push_str("- ");
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let _ = write!(out, "{} {}", num(mag), name);
    }
}

pub fn export_lp_format(sys: &ConstraintSystem) -> Result<String> {
    sys.validate()?;
    for v in &sys.variables {
        if !valid_identifier(&v.name) {
            return Err(Error::NameClash { name: v.name.clone() });
        }
    }
    let mut out = String::new();
    let m = &sys.metadata;
    let _ = writeln!(out, "\\ {} on [{}, {}] ({})", m.function, num(m.lower), num(m.upper), m.formulation.as_str());

    let (sense, terms) = match &sys.objective {
        Some(o) => (o.sense, o.terms.clone()),
        None => (ObjectiveSense::Min, Vec::new()),
    };
    out.push_str(if sense == ObjectiveSense::Min { "Minimize\n" } else { "Maximize\n" });
    out.push_str(" obj: ");
    if terms.is_empty() {
        let name = sys.variables.first().map_or("x", |v| v.name.as_str());
        let _ = write!(out, "0 {name}");
    } else {
        write_expr(&mut out, &terms);
    }
    out.push('\n');

    out.push_str("Subject To\n");
    for (i, c) in sys.constraints.iter().enumerate() {
        let _ = write!(out, " c{}: ", i + 1);
        if c.terms.is_empty() {
            let name = sys.variables.first().map_or("x", |v| v.name.as_str());
            let _ = write!(out, "0 {name}");
        } else {
            write_expr(&mut out, &c.terms);
        }
        let _ = writeln!(out, " {} {}", c.sense.as_str(), num(c.rhs));
    }

    out.push_str("Bounds\n");
    for v in sys.variables.iter().filter(|v| v.kind == VarKind::Continuous) {
        match (v.lower.is_finite(), v.upper.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " {} free", v.name);
            }
            (true, true) => {
                let _ = writeln!(out, " {} <= {} <= {}", num(v.lower), v.name, num(v.upper));
            }
            (true, false) => {
                let _ = writeln!(out, " {} >= {}", v.name, num(v.lower));
            }
            (false, true) => {
                let _ = writeln!(out, " -inf <= {} <= {}", v.name, num(v.upper));
            }
        }
    }

    out.push_str("Binaries\n");
    for v in sys.binaries() {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("End\n");
    Ok(out)
}
