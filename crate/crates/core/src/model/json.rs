//! JSON export and import with a fixed key order.

use std::fmt::Write as _;

use serde_json::Value;

use super::system::{
    ConstraintSense, ConstraintSystem, Formulation, LinConstraint, Metadata, Objective, ObjectiveSense, VarDef, VarKind,
};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

// 17 significant digits; infinities become null.
fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

fn string(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

fn terms_json(terms: &[(String, f64)]) -> String {
    let items: Vec<String> =
        terms.iter().map(|(n, c)| format!("{{\"var\": {}, \"coef\": {}}}", string(n), real(*c))).collect();
    format!("[{}]", items.join(", "))
}

fn sense_name(s: ConstraintSense) -> &'static str {
    match s {
        ConstraintSense::Le => "le",
        ConstraintSense::Eq => "eq",
        ConstraintSense::Ge => "ge",
    }
}

pub fn export_json(sys: &ConstraintSystem) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"format_version\": {FORMAT_VERSION},");

    out.push_str("  \"variables\": [");
    for (i, v) in sys.variables.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(
            out,
            "    {{\"name\": {}, \"lb\": {}, \"ub\": {}, \"kind\": \"{}\"}}",
            string(&v.name),
            real(v.lower),
            real(v.upper),
            v.kind.as_str()
        );
    }
    out.push_str(if sys.variables.is_empty() { "],\n" } else { "\n  ],\n" });

    out.push_str("  \"constraints\": [");
    for (i, c) in sys.constraints.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let _ = write!(
            out,
            "    {{\"terms\": {}, \"sense\": \"{}\", \"rhs\": {}}}",
            terms_json(&c.terms),
            sense_name(c.sense),
            real(c.rhs)
        );
    }
    out.push_str(if sys.constraints.is_empty() { "],\n" } else { "\n  ],\n" });

    match &sys.objective {
        None => out.push_str("  \"objective\": null,\n"),
        Some(o) => {
            let _ = writeln!(
                out,
                "  \"objective\": {{\"sense\": \"{}\", \"terms\": {}}},",
                o.sense.as_str(),
                terms_json(&o.terms)
            );
        }
    }

    let m = &sys.metadata;
    let partition: Vec<String> = m.partition.iter().map(|&p| real(p)).collect();
    out.push_str("  \"metadata\": {\n");
    let _ = writeln!(out, "    \"function\": {},", string(&m.function));
    let _ = writeln!(out, "    \"lower\": {},", real(m.lower));
    let _ = writeln!(out, "    \"upper\": {},", real(m.upper));
    let _ = writeln!(out, "    \"partition\": [{}],", partition.join(", "));
    let _ = writeln!(out, "    \"strength_bound\": {},", real(m.strength_bound));
    let _ = writeln!(out, "    \"formulation\": \"{}\"", m.formulation.as_str());
    out.push_str("  }\n}\n");
    out
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Import(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(format!("missing key {key}")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn as_real(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(format!("{what} must be a number")))
}

// null means the matching infinity
fn as_bound(v: &Value, inf: f64, what: &str) -> Result<f64> {
    if v.is_null() {
        Ok(inf)
    } else {
        as_real(v, what)
    }
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn parse_terms(v: &Value) -> Result<Vec<(String, f64)>> {
    as_array(v, "terms")?
        .iter()
        .map(|t| Ok((as_str(field(t, "var")?, "var")?.to_string(), as_real(field(t, "coef")?, "coef")?)))
        .collect()
}

pub fn import_json(text: &str) -> Result<ConstraintSystem> {
    let root: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let version = field(&root, "format_version")?.as_u64();
    if version != Some(FORMAT_VERSION) {
        return Err(bad(format!("unsupported format_version {:?}", field(&root, "format_version")?)));
    }

    let mut variables = Vec::new();
    for v in as_array(field(&root, "variables")?, "variables")? {
        let kind = match as_str(field(v, "kind")?, "kind")? {
            "continuous" => VarKind::Continuous,
            "binary" => VarKind::Binary,
            other => return Err(bad(format!("unknown variable kind {other}"))),
        };
        variables.push(VarDef {
            name: as_str(field(v, "name")?, "name")?.to_string(),
            lower: as_bound(field(v, "lb")?, f64::NEG_INFINITY, "lb")?,
            upper: as_bound(field(v, "ub")?, f64::INFINITY, "ub")?,
            kind,
        });
    }

    let mut constraints = Vec::new();
    for c in as_array(field(&root, "constraints")?, "constraints")? {
        let sense = match as_str(field(c, "sense")?, "sense")? {
            "le" => ConstraintSense::Le,
            "eq" => ConstraintSense::Eq,
            "ge" => ConstraintSense::Ge,
            other => return Err(bad(format!("unknown constraint sense {other}"))),
        };
        constraints.push(LinConstraint::new(
            parse_terms(field(c, "terms")?)?,
            sense,
            as_real(field(c, "rhs")?, "rhs")?,
        ));
    }

    let obj = field(&root, "objective")?;
    let objective = if obj.is_null() {
        None
    } else {
        let sense = match as_str(field(obj, "sense")?, "objective sense")? {
            "min" => ObjectiveSense::Min,
            "max" => ObjectiveSense::Max,
            other => return Err(bad(format!("unknown objective sense {other}"))),
        };
        Some(Objective { sense, terms: parse_terms(field(obj, "terms")?)? })
    };

    let m = field(&root, "metadata")?;
    let formulation_name = as_str(field(m, "formulation")?, "formulation")?;
    let metadata = Metadata {
        function: as_str(field(m, "function")?, "function")?.to_string(),
        lower: as_real(field(m, "lower")?, "lower")?,
        upper: as_real(field(m, "upper")?, "upper")?,
        partition: as_array(field(m, "partition")?, "partition")?
            .iter()
            .map(|p| as_real(p, "partition point"))
            .collect::<Result<_>>()?,
        strength_bound: as_real(field(m, "strength_bound")?, "strength_bound")?,
        formulation: Formulation::from_name(formulation_name)
            .ok_or_else(|| bad(format!("unknown formulation {formulation_name}")))?,
    };

    let sys = ConstraintSystem { variables, constraints, objective, metadata };
    sys.validate()?;
    Ok(sys)
}
