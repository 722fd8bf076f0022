use std::fmt::Write;

use serde::Serialize;

use crate::poly::Rational;

use super::closed_form::{fit_closed_form, ClosedForm};
use super::orbit::OrbitTable;
use super::recurrence::LinearRecurrence;

fn header(t: &OrbitTable) -> Vec<String> {
    let mut h = vec!["n".to_string(), "d".to_string()];
    h.extend(t.charts.iter().cloned());
    h
}

fn cells(t: &OrbitTable) -> Vec<Vec<String>> {
    t.rows
        .iter()
        .map(|r| {
            let mut c = vec![r.n.to_string(), r.degree.to_string()];
            c.extend(r.indices.iter().map(u32::to_string));
            c
        })
        .collect()
}

/// `n,d,<chart names...>` with one line per row.
pub fn to_csv(t: &OrbitTable) -> String {
    let mut out = header(t).join(",");
    out.push('\n');
    for row in cells(t) {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Markdown table with right-aligned, padded columns.
pub fn to_markdown(t: &OrbitTable) -> String {
    let head = header(t);
    let body = cells(t);
    let widths: Vec<usize> = (0..head.len())
        .map(|i| {
            body.iter()
                .map(|r| r[i].len())
                .chain([head[i].len(), 3])
                .max()
                .unwrap_or(3)
        })
        .collect();
    let line = |cols: &[String]| {
        let mut s = String::from("|");
        for (c, w) in cols.iter().zip(&widths) {
            let _ = write!(s, " {c:>w$} |");
        }
        s.push('\n');
        s
    };
    let mut out = line(&head);
    out.push('|');
    for w in &widths {
        out.push_str(&format!(" {}: |", "-".repeat(w - 1)));
    }
    out.push('\n');
    for r in &body {
        out.push_str(&line(r));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormReport {
    pub expression: String,
    pub valid_from: usize,
    pub quasi_polynomial: bool,
}

impl From<&ClosedForm> for ClosedFormReport {
    fn from(cf: &ClosedForm) -> Self {
        ClosedFormReport {
            expression: cf.to_string(),
            valid_from: cf.valid_from,
            quasi_polynomial: cf.is_quasi(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RootReport {
    pub zero: u32,
    pub one: u32,
    pub minus_one: u32,
    pub cofactor: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceReport {
    pub source: String,
    pub terms: Vec<String>,
    pub order: usize,
    pub coefficients: Vec<String>,
    pub valid_from: usize,
    pub characteristic_polynomial: String,
    pub roots: RootReport,
    pub closed_form: Option<ClosedFormReport>,
}

impl RecurrenceReport {
    pub fn new(source: impl Into<String>, seq: &[Rational], rec: &LinearRecurrence) -> Self {
        let x = ["x".to_string()];
        let roots = rec.root_profile();
        RecurrenceReport {
            source: source.into(),
            terms: seq.iter().map(ToString::to_string).collect(),
            order: rec.order(),
            coefficients: rec.coefficient_strings(),
            valid_from: rec.valid_from,
            characteristic_polynomial: rec.characteristic_polynomial().to_string_with(&x),
            roots: RootReport {
                zero: roots.zero,
                one: roots.one,
                minus_one: roots.minus_one,
                cofactor: roots.rest.to_string_with(&x),
            },
            closed_form: fit_closed_form(seq).as_ref().map(ClosedFormReport::from),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "source: {}", self.source);
        let _ = writeln!(s, "terms: {}", self.terms.join(", "));
        let _ = writeln!(
            s,
            "recurrence: order {}, coefficients ({}), valid from n = {}",
            self.order,
            self.coefficients.join(", "),
            self.valid_from
        );
        let _ = writeln!(
            s,
            "characteristic polynomial: {}  [roots: 0^{} 1^{} (-1)^{}, cofactor {}]",
            self.characteristic_polynomial,
            self.roots.zero,
            self.roots.one,
            self.roots.minus_one,
            self.roots.cofactor
        );
        match &self.closed_form {
            Some(cf) => {
                let _ = writeln!(
                    s,
                    "closed form: d(n) = {} for n >= {}",
                    cf.expression, cf.valid_from
                );
            }
            None => {
                let _ = writeln!(s, "closed form: none found");
            }
        }
        s
    }
}
