use serde_json::{Number, Value};

/// Rounds to 10 significant digits; non-finite values pass through.
pub fn sig10(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

/// Applies [`sig10`] to every non-integer number in a JSON tree.
pub fn round_json(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| Number::from_f64(sig10(x)))
            .map_or(Value::Number(n), Value::Number),
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect())
        }
        other => other,
    }
}
