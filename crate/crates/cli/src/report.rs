use serde_json::{json, Map, Value};

use quadstat_core::distributions::ScaledChiSquare;
use quadstat_core::quadform::{FourCumSurrogate, Surrogate};

use crate::error::{CliError, Result};

/// A run's output: named fields, plus an optional table that becomes the
/// whole CSV body when present.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        Report { fields, table: None }
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.insert(key.into(), value);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut out = self.fields.clone();
        if let Some(t) = &self.table {
            let rows = t
                .rows
                .iter()
                .map(|r| Value::Object(t.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                .collect();
            out.insert(t.name.into(), Value::Array(rows));
        }
        Value::Object(out)
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut bytes = serde_json::to_vec_pretty(&self.to_json()).expect("report serializes");
                bytes.push(b'\n');
                Ok(bytes)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let written = match &self.table {
                    Some(t) => w
                        .write_record(&t.columns)
                        .and_then(|_| t.rows.iter().try_for_each(|r| w.write_record(r.iter().map(cell)))),
                    None => {
                        let mut flat = Vec::new();
                        flatten("", &Value::Object(self.fields.clone()), &mut flat);
                        w.write_record(["field", "value"]).and_then(|_| {
                            flat.iter()
                                .try_for_each(|(k, v)| w.write_record([k.as_str(), v.as_str()]))
                        })
                    }
                };
                written.map_err(|e| CliError::Usage(format!("csv output: {e}")))?;
                w.into_inner().map_err(|e| CliError::Usage(format!("csv output: {e}")))
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Dotted paths for objects, indices for arrays.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) if a.is_empty() => out.push((prefix.to_string(), String::new())),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        leaf => out.push((prefix.to_string(), cell(leaf))),
    }
}

pub fn four_cum_json(s: &FourCumSurrogate) -> Value {
    json!({
        "beta1": s.beta1,
        "beta2": s.beta2,
        "df": s.df,
        "delta": s.delta,
        "s1": s.s1,
        "s2": s.s2,
        "xi": s.xi,
    })
}

fn scaled_json(s: &ScaledChiSquare) -> Value {
    json!({ "scale": s.scale, "df": s.chi.df(), "delta": s.chi.delta() })
}

pub fn surrogate_json(s: &Surrogate) -> Value {
    match s {
        Surrogate::TwoCum(t) => json!({ "kind": "two-cum", "beta": t.beta, "df0": t.df0 }),
        Surrogate::FourCum(f) => {
            let mut m = Map::new();
            m.insert("kind".into(), json!("four-cum"));
            if let Value::Object(rest) = four_cum_json(f) {
                m.extend(rest);
            }
            Value::Object(m)
        }
        Surrogate::Difference(d) => json!({
            "kind": "diff-chisq",
            "shift": d.shift,
            "positive": scaled_json(&d.diff.pos),
            "negative": scaled_json(&d.diff.neg),
            "positive_fit": d.pos_fit.as_ref().map(four_cum_json),
            "negative_fit": d.neg_fit.as_ref().map(four_cum_json),
        }),
        Surrogate::PointMass(c) => json!({ "kind": "point-mass", "constant": c }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_flattens_nested_fields() {
        let mut r = Report::new("demo");
        r.set("result", json!({ "p": 0.5, "list": [1, 2], "none": null }));
        let text = String::from_utf8(r.render(Format::Csv).unwrap()).unwrap();
        assert_eq!(
            text,
            "field,value\ncommand,demo\nresult.p,0.5\nresult.list.0,1\nresult.list.1,2\nresult.none,\n"
        );
    }

    #[test]
    fn table_replaces_fields_in_csv() {
        let mut r = Report::new("demo");
        r.table = Some(Table {
            name: "rows",
            columns: vec!["a", "b"],
            rows: vec![vec![json!("x"), json!(1.25)]],
        });
        assert_eq!(r.render(Format::Csv).unwrap(), b"a,b\nx,1.25\n");
        assert_eq!(r.to_json()["rows"][0]["b"], json!(1.25));
    }
}
