//! Flat `path = value` rendering of a report.

use serde_json::Value;

/// One line per leaf, keyed by its JSON path. Object keys keep their
/// serialized order so the output is as deterministic as the JSON.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(x, p, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                walk(x, format!("{path}[{i}]"), out);
            }
        }
        leaf => {
            let shown = match leaf {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{path}\t{shown}\n"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_values() {
        let t = table(&json!({"a": {"b": [1, "x"]}, "c": [], "d": null}));
        assert_eq!(t, "a.b[0]\t1\na.b[1]\tx\nc\t[]\nd\tnull\n");
    }
}
