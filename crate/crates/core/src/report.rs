//! Check reports: every axiom checker returns the exact nonzero residuals it
//! found, keyed by the basis tuple that produced them.

use serde::Serialize;

/// One nonzero residual, rendered as canonical polynomial text.
#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    /// Which identity failed, on which basis tuple, e.g. `jacobi(a,b,a)`.
    pub label: String,
    /// The residual value as canonical text.
    pub value: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub residuals: Vec<Residual>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn push(&mut self, label: String, value: String) {
        self.residuals.push(Residual { label, value });
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.residuals.extend(other.residuals);
    }
}

/// A named sub-check inside a command report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residuals: Vec<Residual>,
}

impl Check {
    pub fn from_report(name: &str, r: CheckReport) -> Check {
        Check {
            name: name.to_string(),
            pass: r.pass(),
            residuals: r.residuals,
        }
    }

    pub fn flag(name: &str, pass: bool) -> Check {
        Check {
            name: name.to_string(),
            pass,
            residuals: Vec::new(),
        }
    }
}

/// A derived table printed by a command (structure tables, forms, witnesses).
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub lines: Vec<String>,
}

/// The single structured document a CLI run emits.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            pass: true,
            checks: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn add_check(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn add_table(&mut self, name: &str, lines: Vec<String>) {
        self.tables.push(Table {
            name: name.to_string(),
            lines,
        });
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.name
            ));
            for r in &c.residuals {
                out.push_str(&format!("      {} = {}\n", r.label, r.value));
            }
        }
        for t in &self.tables {
            out.push_str(&format!("  {}:\n", t.name));
            for l in &t.lines {
                out.push_str(&format!("      {l}\n"));
            }
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.pass { "pass" } else { "fail" }
        ));
        out
    }
}
