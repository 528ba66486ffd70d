//! Verification report: a named list of measured checks plus an optional
//! convergence table. The JSON rendering has the fixed key set
//! {suite, seed, checks, table?} so downstream tooling can rely on it.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<ConvergenceTable>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    /// "le": pass iff measured ≤ threshold; "ge": pass iff measured ≥ threshold.
    pub op: String,
    pub passed: bool,
}

/// Grid levels with errors and observed orders between successive levels.
/// Only emitted when at least three levels were run.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub h: Vec<f64>,
    pub error: Vec<f64>,
    pub order: Vec<f64>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> VerificationReport {
        VerificationReport {
            suite: suite.into(),
            seed,
            checks: Vec::new(),
            table: None,
        }
    }

    pub fn check_le(&mut self, name: impl Into<String>, measured: f64, threshold: f64) {
        self.checks.push(Check {
            name: name.into(),
            measured,
            threshold,
            op: "le".into(),
            passed: measured <= threshold,
        });
    }

    pub fn check_ge(&mut self, name: impl Into<String>, measured: f64, threshold: f64) {
        self.checks.push(Check {
            name: name.into(),
            measured,
            threshold,
            op: "ge".into(),
            passed: measured >= threshold,
        });
    }

    /// A two-sided band becomes a ≥ check and a ≤ check.
    pub fn check_band(&mut self, name: impl Into<String>, measured: f64, lo: f64, hi: f64) {
        let name = name.into();
        self.check_ge(format!("{name}_lower"), measured, lo);
        self.check_le(format!("{name}_upper"), measured, hi);
    }

    pub fn set_table(&mut self, grids: &[usize], lengths: f64, errors: Vec<f64>) {
        if grids.len() < 3 {
            return;
        }
        let h: Vec<f64> = grids.iter().map(|&n| lengths / n as f64).collect();
        let order = observed_orders(&h, &errors);
        self.table = Some(ConvergenceTable {
            h,
            error: errors,
            order,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "suite: {}  (seed {})", self.suite, self.seed).unwrap();
        for c in &self.checks {
            let rel = if c.op == "le" { "<=" } else { ">=" };
            writeln!(
                out,
                "  {:<44} {:>14.6e} {} {:>10.3e}   {}",
                c.name,
                c.measured,
                rel,
                c.threshold,
                if c.passed { "PASS" } else { "FAIL" }
            )
            .unwrap();
        }
        if let Some(table) = &self.table {
            writeln!(out, "  {0:<14} {1:<14} {2}", "h", "error", "order").unwrap();
            for i in 0..table.h.len() {
                let order = if i == 0 {
                    "-".to_string()
                } else {
                    format!("{:.3}", table.order[i - 1])
                };
                writeln!(
                    out,
                    "  {:<14.6e} {:<14.6e} {}",
                    table.h[i], table.error[i], order
                )
                .unwrap();
            }
        }
        writeln!(
            out,
            "result: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
        .unwrap();
        out
    }
}

/// Orders between successive refinement levels, log(e_i/e_{i+1}) / log(h_i/h_{i+1}).
pub fn observed_orders(h: &[f64], errors: &[f64]) -> Vec<f64> {
    assert_eq!(h.len(), errors.len());
    (1..h.len())
        .map(|i| (errors[i - 1] / errors[i]).ln() / (h[i - 1] / h[i]).ln())
        .collect()
}

/// Mean of the successive observed orders.
pub fn mean_order(h: &[f64], errors: &[f64]) -> f64 {
    let orders = observed_orders(h, errors);
    orders.iter().sum::<f64>() / orders.len() as f64
}
