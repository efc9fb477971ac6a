//! Ordered key/value reports rendered as JSON or as a one-row CSV.

use approxhad::io::format_sig10;

#[derive(Clone, Debug)]
enum Value {
    /// Already-encoded JSON plus its CSV cell, if it has one.
    Scalar { json: String, csv: String },
    /// JSON-only value (arrays, nested objects).
    Nested(String),
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string encodes")
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn int(&mut self, key: &str, v: impl Into<i128>) -> &mut Self {
        let s = v.into().to_string();
        self.push(key, Value::Scalar { json: s.clone(), csv: s })
    }

    /// 10 significant digits; non-finite values become strings.
    pub fn real(&mut self, key: &str, v: f64) -> &mut Self {
        let s = format_sig10(v);
        let json = if v.is_finite() { s.clone() } else { json_string(&s) };
        self.push(key, Value::Scalar { json, csv: s })
    }

    pub fn text(&mut self, key: &str, v: &str) -> &mut Self {
        self.push(
            key,
            Value::Scalar {
                json: json_string(v),
                csv: csv_cell(v),
            },
        )
    }

    pub fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        let s = v.to_string();
        self.push(key, Value::Scalar { json: s.clone(), csv: s })
    }

    pub fn strings(&mut self, key: &str, items: &[String]) -> &mut Self {
        let parts: Vec<String> = items.iter().map(|s| json_string(s)).collect();
        self.push(key, Value::Nested(format!("[{}]", parts.join(","))))
    }

    pub fn nested(&mut self, key: &str, inner: &Report) -> &mut Self {
        self.push(key, Value::Nested(inner.to_json()))
    }

    /// Pre-encoded JSON.
    pub fn raw(&mut self, key: &str, json: String) -> &mut Self {
        self.push(key, Value::Nested(json))
    }

    pub fn to_json(&self) -> String {
        let parts: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| {
                let body = match v {
                    Value::Scalar { json, .. } => json,
                    Value::Nested(json) => json,
                };
                format!("{}:{}", json_string(k), body)
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Header line and one row; nested values are omitted.
    pub fn to_csv(&self) -> String {
        let scalars: Vec<(&String, &String)> = self
            .fields
            .iter()
            .filter_map(|(k, v)| match v {
                Value::Scalar { csv, .. } => Some((k, csv)),
                Value::Nested(_) => None,
            })
            .collect();
        let header: Vec<&str> = scalars.iter().map(|(k, _)| k.as_str()).collect();
        let row: Vec<&str> = scalars.iter().map(|(_, v)| v.as_str()).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }

    pub fn render(&self, csv: bool) -> String {
        if csv {
            self.to_csv()
        } else {
            let mut s = self.to_json();
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_csv() {
        let mut inner = Report::new();
        inner.int("moves", 10u64);
        let mut r = Report::new();
        r.int("n", 5u64)
            .real("kappa", 1.5)
            .real("bound", f64::INFINITY)
            .text("class", "a,b")
            .flag("ok", true)
            .strings("rows", &["+-".into()])
            .nested("effort", &inner);
        assert_eq!(
            r.to_json(),
            r#"{"n":5,"kappa":1.500000000,"bound":"inf","class":"a,b","ok":true,"rows":["+-"],"effort":{"moves":10}}"#
        );
        assert_eq!(r.to_csv(), "n,kappa,bound,class,ok\n5,1.500000000,inf,\"a,b\",true\n");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["effort"]["moves"], 10);
    }
}
