//! Deterministic report emission.
//!
//! Reports are plain trees of values with a fixed key order, written by
//! an in-crate serializer: exact values render through the canonical
//! text forms, floats with 17 significant digits, so byte-identical
//! inputs give byte-identical reports.

use crate::exact::{render_rat, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum Val {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Rat(Rat),
    List(Vec<Val>),
    Map(Vec<(String, Val)>),
}

impl Val {
    pub fn map(entries: Vec<(&str, Val)>) -> Val {
        Val::Map(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    fn write_json(&self, out: &mut String) {
        match self {
            Val::Null => out.push_str("null"),
            Val::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Val::Int(i) => out.push_str(&i.to_string()),
            Val::Float(f) => out.push_str(&format_float(*f)),
            Val::Str(s) => {
                out.push('"');
                out.push_str(&escape(s));
                out.push('"');
            }
            Val::Rat(r) => {
                out.push('"');
                out.push_str(&render_rat(r));
                out.push('"');
            }
            Val::List(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write_json(out);
                }
                out.push(']');
            }
            Val::Map(entries) => {
                out.push('{');
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('"');
                    out.push_str(&escape(k));
                    out.push_str("\":");
                    v.write_json(out);
                }
                out.push('}');
            }
        }
    }

    fn compact(&self) -> String {
        let mut s = String::new();
        self.write_json(&mut s);
        s
    }
}

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn format_float(f: f64) -> String {
    format!("{:.16e}", f)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// One verified item inside a report.
#[derive(Clone, Debug)]
pub struct Check {
    pub id: String,
    pub inputs: Val,
    pub payload: Val,
    pub pass: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "text" => Some(Format::Text),
            _ => None,
        }
    }
}

/// A full command report with the deterministic summary envelope.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub checks: Vec<Check>,
    /// Set when floating-point results are included.
    pub floating: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), parameters: Vec::new(), checks: Vec::new(), floating: false }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn pass_count(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn fail_count(&self) -> usize {
        self.checks.len() - self.pass_count()
    }

    pub fn passed(&self) -> bool {
        self.fail_count() == 0
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\"command\":\"");
        out.push_str(&escape(&self.command));
        out.push_str("\",\"parameters\":{");
        for (i, (k, v)) in self.parameters.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('"');
            out.push_str(&escape(k));
            out.push_str("\":\"");
            out.push_str(&escape(v));
            out.push('"');
        }
        out.push_str("},\"checks\":[");
        for (i, c) in self.checks.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("{\"id\":\"");
            out.push_str(&escape(&c.id));
            out.push_str("\",\"inputs\":");
            c.inputs.write_json(&mut out);
            out.push_str(",\"payload\":");
            c.payload.write_json(&mut out);
            out.push_str(",\"pass\":");
            out.push_str(if c.pass { "true" } else { "false" });
            out.push('}');
        }
        out.push_str(&format!(
            "],\"summary\":{{\"pass\":{},\"fail\":{}}},\"tool_version\":\"{}\"",
            self.pass_count(),
            self.fail_count(),
            crate::VERSION
        ));
        if self.floating {
            out.push_str(",\"platform_note\":\"floating-point fields; reproducible on a fixed platform only\"");
        }
        out.push('}');
        out
    }

    pub fn to_csv(&self) -> String {
        // Deviation curves specialize to the two-column layout.
        if !self.checks.is_empty()
            && self.checks.iter().all(|c| matches!(&c.payload, Val::Map(m) if m.iter().any(|(k, _)| k == "curve")))
        {
            let mut out = String::from("N,value\n");
            for c in &self.checks {
                if let Val::Map(m) = &c.payload {
                    if let Some((_, Val::List(points))) = m.iter().find(|(k, _)| k == "curve") {
                        for p in points {
                            if let Val::Map(pm) = p {
                                let n = pm.iter().find(|(k, _)| k == "N");
                                let v = pm.iter().find(|(k, _)| k == "value");
                                if let (Some((_, Val::Int(n))), Some((_, Val::Float(v)))) = (n, v)
                                {
                                    out.push_str(&format!("{},{}\n", n, format_float(*v)));
                                }
                            }
                        }
                    }
                }
            }
            return out;
        }
        let mut out = String::from("id,pass,detail\n");
        for c in &self.checks {
            let detail = c.payload.compact().replace('"', "\"\"");
            out.push_str(&format!("{},{},\"{}\"\n", c.id, c.pass, detail));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.command));
        for (k, v) in &self.parameters {
            out.push_str(&format!("#   {} = {}\n", k, v));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {} {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.payload.compact()
            ));
        }
        out.push_str(&format!("summary: {} pass, {} fail\n", self.pass_count(), self.fail_count()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn empty_report_shape() {
        let r = Report::new("demo");
        let json = r.to_json();
        assert!(json.contains("\"checks\":[]"));
        assert!(json.contains("\"summary\":{\"pass\":0,\"fail\":0}"));
        assert!(json.contains("\"tool_version\""));
    }

    #[test]
    fn byte_identical_across_runs() {
        let build = || {
            let mut r = Report::new("certify");
            r.param("h", "2");
            r.push(Check {
                id: "verdict".into(),
                inputs: Val::map(vec![("op", Val::Str("f(-1)".into()))]),
                payload: Val::map(vec![
                    ("verdict", Val::Str("bounded-not-compact".into())),
                    ("value", Val::Rat(ratio(-46, 35))),
                ]),
                pass: true,
            });
            r.to_json()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn curve_csv_two_columns() {
        let mut r = Report::new("deviation");
        r.push(Check {
            id: "curve".into(),
            inputs: Val::Null,
            payload: Val::map(vec![(
                "curve",
                Val::List(vec![
                    Val::map(vec![("N", Val::Int(64)), ("value", Val::Float(0.5))]),
                    Val::map(vec![("N", Val::Int(128)), ("value", Val::Float(0.25))]),
                ]),
            )]),
            pass: true,
        });
        let csv = r.to_csv();
        assert_eq!(
            csv,
            "N,value\n64,5.0000000000000000e-1\n128,2.5000000000000000e-1\n"
        );
    }

    #[test]
    fn float_formatting_round_trips() {
        for f in [0.5, 2.0, 1.0 / 3.0, 1e-12, -7.25e8] {
            assert_eq!(format_float(f).parse::<f64>().unwrap(), f);
        }
    }
}
