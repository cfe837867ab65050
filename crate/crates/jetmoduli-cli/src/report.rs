//! Report plumbing: exact-by-default value rendering, the optional decimal
//! view, and the versioned JSON report envelope.

use jetmoduli::rational::{format_canonical, format_decimal, Rational};
use jetmoduli::strata2d::GaussRational;
use serde_json::{Map, Value};

pub const REPORT_SCHEMA: &str = "jetmoduli.report/1";

/// Render a rational for text output: exact by default, decimal on request.
pub fn fmt_rat(r: &Rational, decimal: Option<u32>) -> String {
    match decimal {
        None => format_canonical(r),
        Some(digits) => format_decimal(r, digits),
    }
}

pub fn rat_value(r: &Rational) -> Value {
    Value::String(format_canonical(r))
}

pub fn gauss_value(z: &GaussRational) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), rat_value(&z.re));
    m.insert("im".into(), rat_value(&z.im));
    Value::Object(m)
}

/// The versioned envelope every JSON report starts with.
pub fn envelope(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), Value::String(REPORT_SCHEMA.into()));
    m.insert("command".into(), Value::String(command.into()));
    m
}

pub fn print_json(map: Map<String, Value>) {
    println!(
        "{}",
        serde_json::to_string_pretty(&Value::Object(map)).expect("valid JSON")
    );
}
