//! Plain-text rendering of a JSON report: one `key: value` per line,
//! nested objects indented. Serialized elements print in algebra notation.

use serde_json::Value;

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    write(v, 0, &mut out);
    out
}

/// `{"N": .., "terms": [{"indices": [..], "coef": ".."}]}` back to `2e1e3 - e2`.
fn element(v: &Value) -> Option<String> {
    let obj = v.as_object()?;
    if obj.len() != 2 || !obj.contains_key("N") {
        return None;
    }
    let terms = obj.get("terms")?.as_array()?;
    if terms.is_empty() {
        return Some("0".into());
    }
    let mut s = String::new();
    for (k, t) in terms.iter().enumerate() {
        let coef = t.get("coef")?.as_str()?;
        let mono: String = t.get("indices")?.as_array()?.iter().map(|i| format!("e{i}")).collect();
        let (neg, mag) = match coef.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, coef),
        };
        s.push_str(match (k, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        match (mono.is_empty(), mag) {
            (true, _) => s.push_str(mag),
            (false, "1") => s.push_str(&mono),
            (false, m) if m.contains('/') => s.push_str(&format!("{m}*{mono}")),
            (false, m) => s.push_str(&format!("{m}{mono}")),
        }
    }
    Some(s)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Object(map) if map.is_empty() => Some("{}".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        other => element(other),
    }
}

fn write(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match scalar(val) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write(val, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write(item, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
