use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// JSON report envelope. Keys serialize in sorted order.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub tool_version: String,
}

impl Report {
    /// `inputs` are hashed in order, each prefixed with its length.
    pub fn new(command: &str, inputs: &[&[u8]], results: Value) -> Self {
        let mut h = Sha256::new();
        for part in inputs {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part);
        }
        let inputs_digest = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        Report {
            command: command.to_string(),
            inputs_digest,
            results,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut s = String::new();
        render(&v, 0, &mut s);
        s.push('\n');
        s
    }

    pub fn print(&self) {
        print!("{}", self.to_json());
    }
}

/// Pretty JSON with arrays of scalars (markings, rows) kept on one line.
pub fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                render(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_separates_inputs() {
        let a = Report::new("x", &[b"ab", b"c"], Value::Null);
        let b = Report::new("x", &[b"a", b"bc"], Value::Null);
        assert_ne!(a.inputs_digest, b.inputs_digest);
        assert_eq!(a.inputs_digest.len(), 64);
    }

    #[test]
    fn render_round_trips() {
        let v = serde_json::json!({"m": [[1, 2], [3]], "e": [], "o": {}, "s": "a\"b", "n": null});
        let mut s = String::new();
        render(&v, 0, &mut s);
        assert!(s.contains("[1, 2]"));
        assert_eq!(serde_json::from_str::<Value>(&s).unwrap(), v);
    }

    #[test]
    fn keys_sorted() {
        let r = Report::new("x", &[], serde_json::json!({"b": 1, "a": 2}));
        let s = r.to_json();
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"command\"").unwrap() < s.find("\"tool_version\"").unwrap());
    }
}
