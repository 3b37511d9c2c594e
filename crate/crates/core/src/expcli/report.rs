use std::io::Write;
use std::time::Duration;

use super::ExpError;

pub const CSV_HEADER: [&str; 5] = ["scenario", "check_id", "sample_id", "residual", "verdict"];

/// One measured residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub check_id: String,
    pub sample_id: usize,
    pub residual: f64,
    pub tolerance: f64,
}

impl Row {
    /// NaN residuals never pass.
    pub fn passed(&self) -> bool {
        self.residual < self.tolerance
    }
}

/// The outcome of one scenario: residual rows plus free-form notes.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub rows: Vec<Row>,
    /// Human-readable facts that are not residuals, e.g. the surface model.
    pub notes: Vec<String>,
    pub runtime: Duration,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            rows: Vec::new(),
            notes: Vec::new(),
            runtime: Duration::ZERO,
        }
    }

    /// Appends one row per residual, numbered from zero.
    pub fn extend(&mut self, check_id: &str, residuals: impl IntoIterator<Item = f64>, tolerance: f64) {
        self.rows
            .extend(residuals.into_iter().enumerate().map(|(sample_id, residual)| Row {
                check_id: check_id.to_owned(),
                sample_id,
                residual,
                tolerance,
            }));
    }

    pub fn push(&mut self, check_id: &str, residual: f64, tolerance: f64) {
        let sample_id = self.rows.iter().filter(|r| r.check_id == check_id).count();
        self.rows.push(Row {
            check_id: check_id.to_owned(),
            sample_id,
            residual,
            tolerance,
        });
    }

    pub fn max(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().map(|r| r.residual).sum::<f64>() / self.rows.len() as f64
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passed()).count()
    }

    /// An empty report fails: nothing was certified.
    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.failures() == 0
    }

    /// Writes the CSV; floats use a fixed exponent format so reruns are byte-identical.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ExpError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                self.scenario.as_str(),
                r.check_id.as_str(),
                &r.sample_id.to_string(),
                &format_residual(r.residual),
                if r.passed() { "pass" } else { "fail" },
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, ExpError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ASCII"))
    }

    /// One line: name, verdict, row count, max and mean residual.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} rows, {} failing, max {:.3e}, mean {:.3e})",
            self.scenario,
            if self.passed() { "PASS" } else { "FAIL" },
            self.rows.len(),
            self.failures(),
            self.max(),
            self.mean()
        )
    }
}

fn format_residual(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.9e}")
    } else {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_matches_rows() {
        let mut r = Report::new("demo");
        r.extend("jump", [1e-12, 3e-10, 2e-11], 1e-9);
        r.push("extra", 5e-9, 1e-9);
        assert_eq!(r.max(), 5e-9);
        assert_eq!(r.failures(), 1);
        assert!(!r.passed());
        assert_eq!(r.rows[3].sample_id, 0);
    }

    #[test]
    fn csv_layout_is_fixed() {
        let mut r = Report::new("demo");
        r.extend("jump", [1.5e-12, f64::NAN], 1e-9);
        let text = r.to_csv_string().unwrap();
        assert_eq!(
            text,
            "scenario,check_id,sample_id,residual,verdict\n\
             demo,jump,0,1.500000000e-12,pass\n\
             demo,jump,1,NaN,fail\n"
        );
        assert_eq!(
            Report::new("empty").to_csv_string().unwrap(),
            "scenario,check_id,sample_id,residual,verdict\n"
        );
        assert!(!Report::new("empty").passed());
    }
}
