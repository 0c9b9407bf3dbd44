//! Deterministic output assembly.
//!
//! Every subcommand builds either a [`Rows`] (uniform columns) or a
//! [`Record`] (key–value report) and serializes it in one of three formats:
//! tab-separated table, RFC-4180 CSV, or JSON with alphabetically ordered
//! keys.  All numeric rendering goes through fixed-digit decimal or `f64`
//! scientific notation so that repeated runs are byte-identical.

use rug::Float;
use whmf::classify::{JEvidence, Verdict};
use whmf::cm::CMPoint;
use whmf::hp;
use whmf::locator::ZeroRecord;

/// Output format selector shared by all subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Fractional digits used for coordinates and parameters.
const COORD_DIGITS: usize = 30;

/// Fixed-point decimal rendering of coordinates.
pub fn dec(x: &Float) -> String {
    hp::format_decimal(x, COORD_DIGITS)
}

/// Scientific rendering for residual-sized quantities.
pub fn sci(x: &Float) -> String {
    format!("{:e}", x.to_f64())
}

/// A uniform table: one header, many rows.
pub struct Rows {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Rows {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => {
                let mut out = self.header.join("\t");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join("\t"));
                    out.push('\n');
                }
                out
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory csv");
                for row in &self.rows {
                    w.write_record(row).expect("in-memory csv");
                }
                String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
            }
            Format::Json => {
                let items: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (key, value) in self.header.iter().zip(row) {
                            obj.insert((*key).to_string(), value.clone().into());
                        }
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_string_pretty(&items).expect("json rows");
                out.push('\n');
                out
            }
        }
    }
}

/// A key–value report with a stable field order.
pub struct Record {
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.fields.push((key.into(), value.into()));
    }
}

impl Record {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => {
                let mut out = String::new();
                for (key, value) in &self.fields {
                    out.push_str(key);
                    out.push('\t');
                    out.push_str(value);
                    out.push('\n');
                }
                out
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(self.fields.iter().map(|(k, _)| k.as_str()))
                    .expect("in-memory csv");
                w.write_record(self.fields.iter().map(|(_, v)| v.as_str()))
                    .expect("in-memory csv");
                String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
            }
            Format::Json => {
                let mut obj = serde_json::Map::new();
                for (key, value) in &self.fields {
                    obj.insert((*key).to_string(), value.clone().into());
                }
                let mut out =
                    serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("json");
                out.push('\n');
                out
            }
        }
    }
}

/// Table of enumerated CM points in exact surd notation.
pub fn point_rows(points: &[CMPoint]) -> Rows {
    Rows {
        header: vec!["surd", "form", "disc", "denom", "locus"],
        rows: points
            .iter()
            .map(|pt| {
                vec![
                    pt.surd(),
                    format!("({},{},{})", pt.form.a, pt.form.b, pt.form.c),
                    pt.disc.to_string(),
                    pt.denom.to_string(),
                    pt.locus.to_string(),
                ]
            })
            .collect(),
    }
}

/// One-word verdict plus discriminant, as used in zero tables.
pub fn verdict_label(v: &Verdict) -> String {
    match v {
        Verdict::Cm { disc, .. } => format!("CM({disc})"),
        Verdict::TranscendentalCandidate { .. } => "transcendental-candidate".to_string(),
        Verdict::Unresolved { .. } => "unresolved".to_string(),
    }
}

/// Human-readable evidence summary for classification reports.
pub fn evidence_label(e: &JEvidence) -> String {
    fn join(coeffs: &[num_bigint::BigInt]) -> String {
        coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    }
    match e {
        JEvidence::Integer(n) => format!("integer j-invariant {n}"),
        JEvidence::MinimalPolynomial(cs) => format!("minimal polynomial [{}]", join(cs)),
        JEvidence::ClassPolynomial(cs) => format!("class polynomial [{}]", join(cs)),
    }
}

/// Table of located and classified zeros.
pub fn zero_rows(records: &[ZeroRecord], verdicts: &[Verdict]) -> Rows {
    Rows {
        header: vec!["locus", "param", "re", "im", "residual", "verdict", "notes"],
        rows: records
            .iter()
            .zip(verdicts)
            .map(|(rec, verdict)| {
                let mut notes = Vec::new();
                if rec.endpoint {
                    notes.push("endpoint");
                }
                if rec.even_order_suspect {
                    notes.push("even-order-suspect");
                }
                vec![
                    rec.locus.clone(),
                    dec(&rec.param),
                    dec(&Float::with_val(rec.param.prec(), rec.z.real())),
                    dec(&Float::with_val(rec.param.prec(), rec.z.imag())),
                    sci(&rec.residual),
                    verdict_label(verdict),
                    notes.join(","),
                ]
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_and_csv_quote_consistently() {
        let rows = Rows {
            header: vec!["a", "b"],
            rows: vec![vec!["1".into(), "x,y".into()]],
        };
        assert_eq!(rows.render(Format::Table), "a\tb\n1\tx,y\n");
        assert_eq!(rows.render(Format::Csv), "a,b\n1,\"x,y\"\n");
        let json = rows.render(Format::Json);
        assert!(json.contains("\"b\": \"x,y\""));
    }

    #[test]
    fn point_rows_use_exact_surds() {
        let pts = whmf::cm::enumerate_arc_a();
        let rows = point_rows(&pts);
        assert_eq!(rows.rows[0][0], "i");
        assert_eq!(rows.rows[1][0], "(-1+i*sqrt(3))/2");
        assert_eq!(rows.rows[1][1], "(1,1,1)");
    }
}
