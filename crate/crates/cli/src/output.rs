//! Record emitter. Text mode prints `kind key=value ...`; JSON mode prints
//! one object per line with the kind under `"kind"`.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::config::RunConfig;

pub struct Emitter<W: Write> {
    out: W,
    json: bool,
}

pub type Fields = Vec<(&'static str, Value)>;

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl<W: Write> Emitter<W> {
    pub fn new(out: W, json: bool) -> Emitter<W> {
        Emitter { out, json }
    }

    pub fn is_json(&self) -> bool {
        self.json
    }

    /// Header with the command name and every configuration value.
    pub fn header(&mut self, command: &str, cfg: &RunConfig) -> io::Result<()> {
        let pairs = cfg.pairs();
        if self.json {
            let mut m = Map::new();
            m.insert("kind".into(), "header".into());
            m.insert("command".into(), command.into());
            for (k, v) in pairs {
                m.insert(k.into(), v.into());
            }
            writeln!(self.out, "{}", Value::Object(m))
        } else {
            let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(self.out, "# drinfeld {command} {}", body.join(" "))
        }
    }

    pub fn record(&mut self, kind: &str, fields: Fields) -> io::Result<()> {
        if self.json {
            let mut m = Map::new();
            m.insert("kind".into(), kind.into());
            for (k, v) in fields {
                m.insert(k.into(), v);
            }
            writeln!(self.out, "{}", Value::Object(m))
        } else {
            let mut line = kind.to_string();
            for (k, v) in &fields {
                line.push(' ');
                line.push_str(k);
                line.push('=');
                line.push_str(&render(v));
            }
            writeln!(self.out, "{line}")
        }
    }

    /// A bare line in text mode; in JSON mode `{"kind": kind, "text": line}`.
    pub fn line(&mut self, kind: &str, text: &str) -> io::Result<()> {
        if self.json {
            self.record(kind, vec![("text", text.into())])
        } else {
            writeln!(self.out, "{text}")
        }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
