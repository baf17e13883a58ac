//! Check records, printed as text and as CSV rows
//! `name,value,tolerance,margin,verdict`.

use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported quantity without a pass/fail decision.
    Info,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub name: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub margin: Option<f64>,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub title: String,
    pub records: Vec<Record>,
}

fn num(v: f64) -> String {
    format!("{v:.12e}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            records: vec![],
        }
    }

    pub fn info(&mut self, name: impl Into<String>, value: f64, detail: impl Into<String>) {
        self.records.push(Record {
            name: name.into(),
            value,
            tolerance: None,
            margin: None,
            verdict: Verdict::Info,
            detail: detail.into(),
        });
    }

    /// A check whose margin is `tolerance − |value − target|`, or an
    /// explicit margin if the comparison is one-sided.
    pub fn check(
        &mut self,
        name: impl Into<String>,
        value: f64,
        tolerance: Option<f64>,
        margin: f64,
        detail: impl Into<String>,
    ) {
        self.records.push(Record {
            name: name.into(),
            value,
            tolerance,
            margin: Some(margin),
            verdict: Verdict::from_bool(margin >= 0.0 && !margin.is_nan()),
            detail: detail.into(),
        });
    }

    /// Boolean check; the value is 1 for pass and 0 for fail.
    pub fn flag(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.records.push(Record {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            tolerance: None,
            margin: None,
            verdict: Verdict::from_bool(ok),
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passes(&self) -> bool {
        self.records.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.title);
        let width = self.records.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.records {
            let _ = write!(out, "{:<width$}  {:>20}", r.name, num(r.value));
            if let Some(t) = r.tolerance {
                let _ = write!(out, "  tol {}", num(t));
            }
            if let Some(m) = r.margin {
                let _ = write!(out, "  margin {}", num(m));
            }
            let _ = write!(out, "  [{}]", r.verdict.as_str());
            if !r.detail.is_empty() {
                let _ = write!(out, "  {}", r.detail);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "verdict: {}",
            if self.passes() { "PASS" } else { "FAIL" }
        );
        out
    }

    pub fn csv_header() -> &'static str {
        "name,value,tolerance,margin,verdict\n"
    }

    /// Rows without header; names are prefixed with the report title.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let name = if self.title.is_empty() {
                r.name.clone()
            } else {
                format!("{}/{}", self.title, r.name)
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&name),
                num(r.value),
                r.tolerance.map(num).unwrap_or_default(),
                r.margin.map(num).unwrap_or_default(),
                r.verdict.as_str()
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}{}", Self::csv_header(), self.csv_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = Report::new("demo");
        r.check("levi, w0", -0.2, Some(1e-6), 1e-6 - 1e-9, "");
        r.info("gamma", 1.25, "");
        r.flag("generic", false, "rank 2 of 4");
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "name,value,tolerance,margin,verdict");
        assert_eq!(
            lines[1],
            "\"demo/levi, w0\",-2.000000000000e-1,1.000000000000e-6,9.990000000000e-7,pass"
        );
        assert_eq!(lines[2], "demo/gamma,1.250000000000e0,,,info");
        assert_eq!(lines[3], "demo/generic,0.000000000000e0,,,fail");
        assert!(!r.passes());
        assert!(r.to_text().contains("rank 2 of 4"));
    }

    #[test]
    fn nan_margin_fails() {
        let mut r = Report::new("");
        r.check("x", f64::NAN, None, f64::NAN, "");
        assert!(!r.passes());
    }
}
