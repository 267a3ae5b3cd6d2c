//! Number formatting and the JSON/CSV writers.

use serde::Serialize;
use serde_json::Value;

/// Keys whose subtrees are graphons and keep full precision.
const EXACT_KEYS: [&str; 3] = ["optimizer", "tilt", "proposal"];

/// `x` with 9 significant digits, trailing zeros trimmed. Fixed notation for
/// exponents in `-5..9`, scientific otherwise.
pub fn fmt9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.into()
    }
}

fn round9(x: f64) -> Value {
    let r: f64 = fmt9(x).parse().expect("formatted float parses");
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

fn round_tree(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => round9(n.as_f64().expect("f64 number")),
        Value::Array(a) => Value::Array(a.into_iter().map(round_tree).collect()),
        Value::Object(m) => Value::Object(
            m.into_iter()
                .map(|(k, v)| {
                    let v = if EXACT_KEYS.contains(&k.as_str()) {
                        v
                    } else {
                        round_tree(v)
                    };
                    (k, v)
                })
                .collect(),
        ),
        other => other,
    }
}

/// Pretty JSON with every float outside graphon fields rounded to 9
/// significant digits. Non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = round_tree(serde_json::to_value(value).expect("results serialise"));
    let mut s = serde_json::to_string_pretty(&v).expect("values serialise");
    s.push('\n');
    s
}

pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(schema: &str, header: &[&str]) -> Self {
        let mut out = format!("# schema: graphon-ldp/{schema}/v1\n");
        out.push_str(&header.join(","));
        out.push('\n');
        Self { out }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn comment(&mut self, text: &str) {
        self.out.push_str("# ");
        self.out.push_str(text);
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
