//! CSV report documents.
//!
//! A report is a block of `# key: value` metadata lines followed by a CSV
//! table with a header row. Floats are written in Rust's shortest
//! round-trip form, so parsing a cell gives back the exact value.

use stochastic_relaxation::optimize::{Termination, Trace};

pub const TOOL: &str = concat!("srelax ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Default)]
pub struct Report {
    meta: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

pub fn num(v: f64) -> String {
    format!("{v:?}")
}

impl Report {
    pub fn new<S: Into<String>>(
        command: &str,
        seed: u64,
        config_echo: String,
        header: impl IntoIterator<Item = S>,
    ) -> Self {
        let mut r = Self { header: header.into_iter().map(Into::into).collect(), ..Self::default() };
        r.meta("tool", TOOL);
        r.meta("command", command);
        r.meta("seed", seed.to_string());
        r.meta("config", config_echo);
        r
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str("# ");
            out.push_str(k);
            out.push_str(": ");
            out.push_str(&v.replace('\n', " "));
            out.push('\n');
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8"));
        out
    }
}

/// Column names `iter, stage_sigma, theta_1..theta_n, value, grad_norm`.
pub fn trace_header(dim: usize) -> Vec<String> {
    let mut h = vec!["iter".to_string(), "stage_sigma".to_string()];
    h.extend((1..=dim).map(|i| format!("theta_{i}")));
    h.push("value".into());
    h.push("grad_norm".into());
    h
}

pub fn trace_rows(trace: &Trace) -> Vec<Vec<String>> {
    trace
        .iterates
        .iter()
        .map(|e| {
            let mut row = vec![e.iter.to_string(), num(e.sigma)];
            row.extend(e.theta.iter().map(|v| num(*v)));
            row.push(num(e.value));
            row.push(num(e.grad_norm));
            row
        })
        .collect()
}

pub fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::GradTol => "grad_tol",
        Termination::MaxIters => "max_iters",
    }
}

/// Metadata pairs, header, and rows of a rendered report.
pub type Parsed = (Vec<(String, String)>, Vec<String>, Vec<Vec<String>>);

/// Parses a rendered report back into metadata and rows.
pub fn parse(text: &str) -> Parsed {
    let mut meta = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# ") {
            if let Some((k, v)) = rest.split_once(": ") {
                meta.push((k.to_string(), v.to_string()));
            }
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let header = rdr.headers().map(|h| h.iter().map(String::from).collect()).unwrap_or_default();
    let rows = rdr.records().filter_map(|r| r.ok()).map(|r| r.iter().map(String::from).collect()).collect();
    (meta, header, rows)
}
