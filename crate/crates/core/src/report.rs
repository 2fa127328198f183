//! Command output: a deterministic payload plus timing and version.

use std::fmt::Write;
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    /// `key: value` lines, aligned tables and free text.
    #[default]
    Plain,
    /// Tab-separated records, one per line, each starting with its kind.
    Records,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Format::Plain),
            "records" => Ok(Format::Records),
            _ => Err(format!("unknown format `{s}` (plain|records)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandReport {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub fields: Vec<(String, String)>,
    pub tables: Vec<Table>,
    /// Free text such as a netlist or certificate.
    pub text: Vec<String>,
    pub success: bool,
    pub elapsed: Duration,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

impl CommandReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            parameters: Vec::new(),
            fields: Vec::new(),
            tables: Vec::new(),
            text: Vec::new(),
            success: true,
            elapsed: Duration::ZERO,
        }
    }

    pub fn param(&mut self, k: impl Into<String>, v: impl ToString) -> &mut Self {
        self.parameters.push((k.into(), v.to_string()));
        self
    }

    pub fn field(&mut self, k: impl Into<String>, v: impl ToString) -> &mut Self {
        self.fields.push((k.into(), v.to_string()));
        self
    }

    pub fn get(&self, k: &str) -> Option<&str> {
        self.fields.iter().find(|f| f.0 == k).map(|f| f.1.as_str())
    }

    pub fn table(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        self.tables.push(Table {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
        });
        self
    }

    pub fn text(&mut self, t: impl Into<String>) -> &mut Self {
        self.text.push(t.into());
        self
    }

    /// Everything except timing, in the chosen format.
    pub fn payload(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Plain => {
                let _ = writeln!(out, "command: {}", self.command);
                for (k, v) in &self.parameters {
                    let _ = writeln!(out, "param.{k}: {v}");
                }
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "{k}: {v}");
                }
                for t in &self.tables {
                    let _ = writeln!(out, "{}:", t.name);
                    out.push_str(&aligned(t));
                }
                for t in &self.text {
                    for l in t.lines() {
                        let _ = writeln!(out, "{}", l.trim_end());
                    }
                }
                let _ = writeln!(out, "success: {}", self.success);
            }
            Format::Records => {
                let _ = writeln!(out, "command\t{}", self.command);
                for (k, v) in &self.parameters {
                    let _ = writeln!(out, "param\t{k}\t{v}");
                }
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "field\t{k}\t{v}");
                }
                for t in &self.tables {
                    let _ = writeln!(out, "header\t{}\t{}", t.name, t.header.join("\t"));
                    for r in &t.rows {
                        let _ = writeln!(out, "row\t{}\t{}", t.name, r.join("\t"));
                    }
                }
                for t in &self.text {
                    for l in t.lines() {
                        let _ = writeln!(out, "text\t{}", l.trim_end());
                    }
                }
                let _ = writeln!(out, "success\t{}", self.success);
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = self.payload(format);
        let ms = self.elapsed.as_secs_f64() * 1000.0;
        match format {
            Format::Plain => {
                let _ = writeln!(out, "elapsed_ms: {ms:.3}");
                let _ = writeln!(out, "version: {VERSION}");
            }
            Format::Records => {
                let _ = writeln!(out, "elapsed_ms\t{ms:.3}");
                let _ = writeln!(out, "version\t{VERSION}");
            }
        }
        out
    }
}

fn aligned(t: &Table) -> String {
    let cols = t.header.len().max(t.rows.iter().map(Vec::len).max().unwrap_or(0));
    let mut width = vec![0; cols];
    for r in std::iter::once(&t.header).chain(&t.rows) {
        for (i, c) in r.iter().enumerate() {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(&t.header).chain(&t.rows) {
        let cells: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = width[i])).collect();
        let _ = writeln!(out, "  {}", cells.join("  ").trim_end());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payload_excludes_timing() {
        let mut r = CommandReport::new("census");
        r.param("k", 2).field("classes", 8).table("list", &["id", "label"], vec![vec!["2-2".into(), "x".into()]]);
        let a = r.payload(Format::Plain);
        r.elapsed = Duration::from_millis(5);
        assert_eq!(a, r.payload(Format::Plain));
        assert!(a.contains("classes: 8\n"));
        assert!(r.render(Format::Plain).contains("elapsed_ms: 5.000"));
        assert!(r.payload(Format::Records).contains("row\tlist\t2-2\tx\n"));
        assert!(a.lines().all(|l| l == l.trim_end()));
    }
}
