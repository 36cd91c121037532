use serde::Serialize;
use supercong::arith::PAdicVal;
use supercong::engine::{Cell, SweepParams};

use crate::config::{Format, SweepConfig, Target};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub target: Target,
    pub params: SweepParams,
    pub cells: usize,
    /// Smallest observed valuation minus the required one.
    pub min_margin: Option<PAdicVal>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub cell_list: Vec<Cell>,
}

impl CheckRecord {
    pub fn sort_key(&self) -> (Target, SweepParams) {
        (self.target, self.params)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TableRow {
    pub target: Target,
    pub p: u64,
    pub b: Option<u64>,
    pub n: u32,
    pub a: Option<u32>,
    pub k: Option<u32>,
    pub r: Option<u64>,
    pub i: u64,
    pub j: Option<u32>,
    pub valuation: PAdicVal,
    pub required: PAdicVal,
    pub margin: PAdicVal,
    pub pass: bool,
}

impl TableRow {
    fn new(target: Target, params: &SweepParams, c: &Cell) -> Self {
        TableRow {
            target,
            p: params.p,
            b: params.b,
            n: params.n,
            a: params.a,
            k: c.k,
            r: c.r,
            i: c.i,
            j: c.j,
            valuation: c.valuation,
            required: c.required,
            margin: c.margin(),
            pass: c.pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub failed_checks: usize,
    pub cells: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config: SweepConfig,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableRow>>,
    pub summary: Summary,
    pub elapsed_ms: u64,
    pub pass: bool,
}

impl Report {
    pub fn assemble(config: SweepConfig, mut checks: Vec<CheckRecord>, elapsed_ms: u64) -> Self {
        checks.sort_by_key(CheckRecord::sort_key);
        let table = config.table.then(|| rows(&checks));
        let summary = Summary {
            checks: checks.len(),
            failed_checks: checks.iter().filter(|c| !c.pass).count(),
            cells: checks.iter().map(|c| c.cells).sum(),
        };
        let pass = summary.failed_checks == 0;
        Report { schema_version: SCHEMA_VERSION, tool_version: env!("CARGO_PKG_VERSION"), config, checks, table, summary, elapsed_ms, pass }
    }

    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

fn rows(checks: &[CheckRecord]) -> Vec<TableRow> {
    let mut out: Vec<TableRow> = checks
        .iter()
        .flat_map(|c| c.cell_list.iter().map(move |cell| TableRow::new(c.target, &c.params, cell)))
        .collect();
    out.sort();
    out
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(report),
        Format::Text => render_text(report),
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn render_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["target", "p", "b", "n", "a", "k", "r", "i", "j", "valuation", "required", "margin", "pass"])
        .expect("in-memory write");
    for row in rows(&report.checks) {
        w.write_record([
            row.target.name().to_string(),
            row.p.to_string(),
            opt(row.b),
            row.n.to_string(),
            opt(row.a),
            opt(row.k),
            opt(row.r),
            row.i.to_string(),
            opt(row.j),
            row.valuation.to_string(),
            row.required.to_string(),
            row.margin.to_string(),
            row.pass.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn render_text(report: &Report) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let params = &c.params;
        let mut label = format!("p={}", params.p);
        if let Some(b) = params.b {
            label += &format!(" b={b}");
        }
        if c.target != Target::Granville {
            label += &format!(" n={}", params.n);
        }
        if let Some(a) = params.a {
            label += &format!(" a={a}");
        }
        let margin = c.min_margin.map_or("-".to_string(), |m| m.to_string());
        s += &format!(
            "{} {:<11} {:<20} cells={:<6} min_margin={:<4} {}ms\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.target.name(),
            label,
            c.cells,
            margin,
            c.elapsed_ms
        );
    }
    s += &format!(
        "{}: {} checks, {} failed, {} cells\n",
        if report.pass { "PASS" } else { "FAIL" },
        report.summary.checks,
        report.summary.failed_checks,
        report.summary.cells
    );
    s
}

/// Removes every `elapsed_ms` key, leaving the parts of a JSON report that
/// must not depend on scheduling.
pub fn strip_timings(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timings);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}
