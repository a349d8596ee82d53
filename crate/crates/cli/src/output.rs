//! Shared formatting: fixed-precision floats, CSV quoting, JSON fragments.

use expsub_core::kernel::interval::RealInterval;
use expsub_core::subdynamics::CrossingSet;
use expsub_core::{CValue, Convention, ExactLog, LabeledHyperplane, PeriodicCount, System};
use serde_json::{json, Value};

use crate::CliError;

/// Decimal places for every float written.
pub const DECIMALS: usize = 12;

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.DECIMALS$}");
    // avoid "-0.000000000000"
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        return format!("{:.DECIMALS$}", 0.0);
    }
    s
}

/// A float rounded to the fixed number of decimals, as a JSON number.
pub fn jf(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = fmt_f64(x).parse().unwrap_or(x);
    json!(r)
}

pub fn interval_json(x: &RealInterval) -> Value {
    json!({ "lo": jf(x.lo_f64()), "hi": jf(x.hi_f64()), "mid": jf(x.mid_f64()) })
}

/// RFC 4180 field quoting.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row<S: AsRef<str>>(fields: &[S]) -> String {
    let v: Vec<String> = fields.iter().map(|f| csv_field(f.as_ref())).collect();
    v.join(",") + "\n"
}

pub fn count_csv(c: &PeriodicCount) -> String {
    match c {
        PeriodicCount::Infinite => "inf".into(),
        PeriodicCount::Finite(x) => x.to_string(),
    }
}

/// Finite counts as numbers (strings past u64), infinite as null.
pub fn count_json(c: &PeriodicCount) -> Value {
    match c {
        PeriodicCount::Infinite => Value::Null,
        PeriodicCount::Finite(x) => {
            let s = x.to_string();
            match s.parse::<u64>() {
                Ok(v) => json!(v),
                Err(_) => json!(s),
            }
        }
    }
}

pub fn exact_json(e: &[ExactLog]) -> Value {
    json!(e.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

pub fn hyperplane_json(sys: &System, h: &LabeledHyperplane) -> Result<Value, CliError> {
    let normal = h.normal_f64(sys)?;
    Ok(json!({
        "label": h.label.as_str(),
        "normal": normal.iter().map(|&x| jf(x)).collect::<Vec<_>>(),
        "normal_exact": exact_json(&h.normal),
        "sources": h.sources,
        "undecided": h.undecided,
    }))
}

pub fn hyperplanes_json(sys: &System, hs: &[LabeledHyperplane]) -> Result<Value, CliError> {
    Ok(Value::Array(
        hs.iter()
            .map(|h| hyperplane_json(sys, h))
            .collect::<Result<_, _>>()?,
    ))
}

pub fn subset_label(sys: &System, l: &[usize]) -> String {
    let names: Vec<String> = l.iter().map(|&k| sys.v()[k].name()).collect();
    format!("{{{}}}", names.join(" "))
}

pub fn crossing_json(sys: &System, c: &CrossingSet) -> Result<Value, CliError> {
    Ok(json!({
        "hyperplanes": hyperplanes_json(sys, &c.hyperplanes)?,
        "coincidences": c.coincidences.iter().map(|x| json!({
            "j": subset_label(sys, &x.j),
            "l": subset_label(sys, &x.l),
        })).collect::<Vec<_>>(),
    }))
}

/// A coefficient in the requested convention: (float value, exact rational if any).
pub fn cvalue_json(c: &CValue, conv: Convention) -> (Value, Option<String>) {
    let v = match conv {
        Convention::InverseRoot => Some(c.clone()),
        Convention::RootLocation => c.recip(),
    };
    match v {
        None => (Value::Null, None),
        Some(x @ CValue::Exact(_)) => (jf(x.to_f64().0), Some(x.to_string())),
        Some(z @ CValue::Approx(_)) => {
            let (re, im) = z.to_f64();
            (json!([jf(re), jf(im)]), None)
        }
    }
}

pub fn provenance(hash: &str, conv: Convention) -> Value {
    json!({ "descriptor_hash": hash, "convention": conv.as_str() })
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub const ENTROPY_NOTE: &str =
    "directional entropy is ||n|| log max_L f_L(n/||n||); the minimal branch would give 0 on expansive directions of every bundled fixture";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_fixed() {
        assert_eq!(fmt_f64(1.0), "1.000000000000");
        assert_eq!(fmt_f64(-1e-15), "0.000000000000");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(jf(0.1 + 0.2), json!(0.3));
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_row(&["1", "x y"]), "1,x y\n");
    }
}
