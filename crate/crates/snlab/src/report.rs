//! Report assembly and deterministic serialization.
//!
//! JSON is the source of truth (floats at 17 significant digits, enough to
//! round-trip f64); CSV is a fixed-column projection at 9 significant
//! digits. Timing fields live in a single top-level `timings` object so
//! determinism checks can compare everything else byte-for-byte.

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::Result;
use crate::estimate::{Direction, Estimate};
use crate::schemes::{AxiomReport, ProfileReport};
use crate::snumbers::DualityReport;
use crate::symmetrized::NetResolution;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct SequenceEntry {
    pub n: usize,
    pub value: f64,
    pub direction: Direction,
    pub restarts: u32,
    pub certificate_digest: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub kind: String,
    pub entries: Vec<SequenceEntry>,
    /// Net resolution when the kind is net-based (tau).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub net: Option<NetResolution>,
}

impl SequenceReport {
    pub fn from_estimates(kind: &str, estimates: &[Estimate]) -> Self {
        SequenceReport {
            kind: kind.to_string(),
            entries: estimates
                .iter()
                .enumerate()
                .map(|(n, e)| SequenceEntry {
                    n,
                    value: e.value,
                    direction: e.direction,
                    restarts: e.restarts_used,
                    certificate_digest: e.certificate_digest(),
                })
                .collect(),
            net: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualitySection {
    pub theorem: String,
    pub gaps: Vec<f64>,
    pub verdicts: Vec<bool>,
    pub max_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl DualitySection {
    pub fn from_report(report: &DualityReport, tolerance: f64) -> Self {
        let gaps: Vec<f64> = report.rows.iter().map(|r| r.gap).collect();
        let verdicts: Vec<bool> = gaps.iter().map(|g| *g <= tolerance).collect();
        let pass = verdicts.iter().all(|v| *v);
        DualitySection {
            theorem: report.relation.clone(),
            gaps,
            verdicts,
            max_gap: report.max_gap,
            tolerance,
            pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub cases: Vec<CaseOutcome>,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub total_ms: u128,
}

/// One table row: a single s-number of a single operator, or the error that
/// prevented computing it.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub operator: usize,
    pub kind: String,
    pub n: usize,
    pub value: Option<f64>,
    pub direction: Option<Direction>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config: serde_json::Value,
    pub sequences: Vec<SequenceReport>,
    pub dualities: Vec<DualitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub profiles: Vec<ProfileReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub table: Vec<TableRow>,
    pub timings: Timings,
}

impl Report {
    pub fn new(config: serde_json::Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            config,
            sequences: Vec::new(),
            dualities: Vec::new(),
            suite: None,
            axioms: None,
            profiles: Vec::new(),
            table: Vec::new(),
            timings: Timings::default(),
        }
    }

    /// Deterministic JSON with floats at 17 significant digits.
    pub fn to_json(&self) -> Result<String> {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats::new());
        self.serialize(&mut ser)?;
        buf.push(b'\n');
        Ok(String::from_utf8(buf).expect("json is utf-8"))
    }

    /// CSV projection: sequences (or table rows) at 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.table.is_empty() {
            out.push_str("operator,kind,n,value,direction,error\n");
            for r in &self.table {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.operator,
                    r.kind,
                    r.n,
                    r.value.map(csv_float).unwrap_or_default(),
                    r.direction.map(direction_name).unwrap_or(""),
                    r.error.as_deref().unwrap_or("").replace(',', ";"),
                ));
            }
            return out;
        }
        out.push_str("kind,n,value,direction,restarts\n");
        for s in &self.sequences {
            for e in &s.entries {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    s.kind,
                    e.n,
                    csv_float(e.value),
                    direction_name(e.direction),
                    e.restarts
                ));
            }
        }
        for d in &self.dualities {
            out.push_str(&format!(
                "# duality {} max_gap {} pass {}\n",
                d.theorem,
                csv_float(d.max_gap),
                d.pass
            ));
        }
        out
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Exact => "exact",
        Direction::Upper => "upper",
        Direction::Heuristic => "heuristic",
    }
}

fn csv_float(v: f64) -> String {
    format!("{v:.8e}")
}

/// serde_json formatter printing every float with 17 significant digits,
/// making the byte representation independent of shortest-representation
/// heuristics.
struct FixedFloats {
    inner: serde_json::ser::CompactFormatter,
}

impl FixedFloats {
    fn new() -> Self {
        FixedFloats {
            inner: serde_json::ser::CompactFormatter,
        }
    }
}

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // JSON has no infinities; mirror serde_json's null convention
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_array(writer)
    }
    fn end_array<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array(writer)
    }
    fn begin_array_value<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }
    fn begin_object<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object(writer)
    }
    fn end_object<W: ?Sized + std::io::Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object(writer)
    }
    fn begin_object_key<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }
    fn begin_object_value<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
    ) -> std::io::Result<()> {
        self.inner.begin_object_value(writer)
    }
}

/// The report with the timings object blanked, for byte-level determinism
/// comparisons.
pub fn strip_timings(json: &str) -> String {
    match serde_json::from_str::<serde_json::Value>(json) {
        Ok(mut v) => {
            if let Some(obj) = v.as_object_mut() {
                obj.remove("timings");
            }
            v.to_string()
        }
        Err(_) => json.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_fixed_width_scientific_notation() {
        let mut r = Report::new(serde_json::json!({}));
        r.sequences.push(SequenceReport {
            kind: "alpha".into(),
            entries: vec![SequenceEntry {
                n: 0,
                value: 0.1,
                direction: Direction::Exact,
                restarts: 0,
                certificate_digest: None,
            }],
            net: None,
        });
        let s = r.to_json().unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
    }

    #[test]
    fn json_round_trips_value() {
        let mut r = Report::new(serde_json::json!({"seed": 7}));
        r.sequences.push(SequenceReport {
            kind: "alpha".into(),
            entries: vec![SequenceEntry {
                n: 0,
                value: std::f64::consts::PI,
                direction: Direction::Upper,
                restarts: 3,
                certificate_digest: Some("abc".into()),
            }],
            net: None,
        });
        let s = r.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let back = v["sequences"][0]["entries"][0]["value"].as_f64().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn csv_projection_has_nine_significant_digits() {
        let mut r = Report::new(serde_json::json!({}));
        r.sequences.push(SequenceReport {
            kind: "alpha".into(),
            entries: vec![SequenceEntry {
                n: 1,
                value: 1.0 / 3.0,
                direction: Direction::Heuristic,
                restarts: 64,
                certificate_digest: None,
            }],
            net: None,
        });
        let csv = r.to_csv();
        assert!(csv.contains("alpha,1,3.33333333e-1,heuristic,64"), "{csv}");
    }

    #[test]
    fn strip_timings_removes_only_timings() {
        let mut r = Report::new(serde_json::json!({}));
        r.timings.total_ms = 1234;
        let s = r.to_json().unwrap();
        let stripped = strip_timings(&s);
        assert!(!stripped.contains("total_ms"));
        assert!(stripped.contains("schema_version"));
    }
}
