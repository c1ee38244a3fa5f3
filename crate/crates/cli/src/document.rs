//! The report emitted by every command, and its JSON, CSV and Markdown renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use nlrpb::{Matrix, VerificationReport};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub command: String,
    pub timestamp: String,
    pub tolerances: BTreeMap<String, f64>,
}

/// One row of a paper-versus-recomputed comparison.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub quantity: String,
    pub paper: f64,
    pub computed: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl TableRow {
    pub fn new(quantity: impl Into<String>, paper: f64, computed: f64, tolerance: f64) -> Self {
        let deviation = (paper - computed).abs();
        Self {
            quantity: quantity.into(),
            paper,
            computed,
            deviation,
            tolerance,
            pass: deviation <= tolerance,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Content {
    Report(VerificationReport),
    Matrix(Matrix),
    Spectrum(Vec<f64>),
    Scalars(BTreeMap<String, f64>),
    Table(Vec<TableRow>),
    Document(serde_json::Value),
    Text(String),
}

#[derive(Debug, Serialize)]
pub struct Section {
    pub title: String,
    #[serde(flatten)]
    pub content: Content,
}

impl Section {
    pub fn new(title: impl Into<String>, content: Content) -> Self {
        Self {
            title: title.into(),
            content,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub metadata: Metadata,
    pub pass: bool,
    pub sections: Vec<Section>,
}

impl ReportDocument {
    pub fn new(
        command: impl Into<String>,
        tolerances: BTreeMap<String, f64>,
        sections: Vec<Section>,
    ) -> Self {
        let pass = sections.iter().all(|s| match &s.content {
            Content::Report(r) => r.pass,
            Content::Table(rows) => rows.iter().all(|r| r.pass),
            _ => true,
        });
        Self {
            metadata: Metadata {
                command: command.into(),
                timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                tolerances,
            },
            pass,
            sections,
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => self.to_csv(),
            Format::Md => Ok(self.to_markdown()),
        }
    }

    /// Every check and table row flattened to one line each.
    fn to_csv(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Row<'a> {
            section: &'a str,
            name: &'a str,
            residual: f64,
            tolerance: f64,
            pass: bool,
            paper: Option<f64>,
            computed: Option<f64>,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for s in &self.sections {
            match &s.content {
                Content::Report(r) => {
                    for c in &r.checks {
                        w.serialize(Row {
                            section: &s.title,
                            name: &c.name,
                            residual: c.residual,
                            tolerance: c.tolerance,
                            pass: c.pass,
                            paper: None,
                            computed: None,
                        })?;
                    }
                }
                Content::Table(rows) => {
                    for r in rows {
                        w.serialize(Row {
                            section: &s.title,
                            name: &r.quantity,
                            residual: r.deviation,
                            tolerance: r.tolerance,
                            pass: r.pass,
                            paper: Some(r.paper),
                            computed: Some(r.computed),
                        })?;
                    }
                }
                _ => {}
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn to_markdown(&self) -> String {
        let mut out = String::new();
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "# `nlrpb {}`: {verdict}\n", self.metadata.command);
        let _ = writeln!(out, "Generated {}.", self.metadata.timestamp);
        for (k, v) in &self.metadata.tolerances {
            let _ = writeln!(out, "Tolerance `{k}` = {v:e}.");
        }
        for s in &self.sections {
            let _ = writeln!(out, "\n## {}\n", s.title);
            match &s.content {
                Content::Report(r) => {
                    out.push_str("| check | residual | tolerance | pass |\n|---|---|---|---|\n");
                    for c in &r.checks {
                        let _ = writeln!(
                            out,
                            "| {} | {:.3e} | {:.1e} | {} |",
                            c.name, c.residual, c.tolerance, c.pass
                        );
                    }
                }
                Content::Table(rows) => {
                    out.push_str(
                        "| quantity | paper | computed | deviation | tolerance | pass |\n",
                    );
                    out.push_str("|---|---|---|---|---|---|\n");
                    for r in rows {
                        let _ = writeln!(
                            out,
                            "| {} | {:.12} | {:.12} | {:.3e} | {:.1e} | {} |",
                            r.quantity, r.paper, r.computed, r.deviation, r.tolerance, r.pass
                        );
                    }
                    let max = rows.iter().fold(0.0, |m: f64, r| m.max(r.deviation));
                    let _ = writeln!(out, "\nMax deviation: {max:.3e}");
                }
                Content::Matrix(m) => {
                    out.push_str("```text\n");
                    for i in 0..m.rows() {
                        let row: Vec<String> =
                            m.row(i).iter().map(|x| format!("{x:>16.12}")).collect();
                        let _ = writeln!(out, "{}", row.join(" "));
                    }
                    out.push_str("```\n");
                }
                Content::Spectrum(v) => {
                    for (k, x) in v.iter().enumerate() {
                        let _ = writeln!(out, "- ε_{k} = {x:.12}");
                    }
                }
                Content::Scalars(map) => {
                    for (k, x) in map {
                        let _ = writeln!(out, "- {k} = {x:.12e}");
                    }
                }
                Content::Document(v) => {
                    let _ = writeln!(
                        out,
                        "```json\n{}\n```",
                        serde_json::to_string_pretty(v).unwrap_or_default()
                    );
                }
                Content::Text(t) => {
                    let _ = writeln!(out, "{t}");
                }
            }
        }
        out
    }
}
