//! Machine-readable run reports (see schemas/report.schema.json).

use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: serde_json::Value,
    pub version: String,
    pub fixture_source: String,
    pub fixture_hashes: Vec<FixtureHash>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct FixtureHash {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

pub struct ReportBuilder {
    report: RunReport,
}

impl ReportBuilder {
    pub fn new(
        command: &str,
        parameters: serde_json::Value,
        fixtures: &f4_core::fixtures::FixtureSet,
    ) -> Self {
        Self {
            report: RunReport {
                command: command.to_string(),
                parameters,
                version: env!("CARGO_PKG_VERSION").to_string(),
                fixture_source: fixtures.source(),
                fixture_hashes: fixtures
                    .hashes()
                    .into_iter()
                    .map(|(file, sha256)| FixtureHash { file, sha256 })
                    .collect(),
                checks: Vec::new(),
                pass: true,
            },
        }
    }

    pub fn check<F: FnOnce() -> (bool, String)>(&mut self, name: &str, run: F) -> bool {
        let start = Instant::now();
        let (pass, detail) = run();
        self.report.checks.push(Check {
            name: name.to_string(),
            pass,
            detail,
            millis: start.elapsed().as_millis(),
        });
        self.report.pass &= pass;
        pass
    }

    pub fn push(&mut self, name: &str, pass: bool, detail: String, millis: u128) {
        self.report.checks.push(Check { name: name.to_string(), pass, detail, millis });
        self.report.pass &= pass;
    }

    pub fn finish(self) -> RunReport {
        self.report
    }
}

impl RunReport {
    pub fn print(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(self).expect("report serializes"));
        } else {
            for check in &self.checks {
                println!(
                    "[{}] {} ({} ms): {}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    check.millis,
                    check.detail
                );
            }
            println!("overall: {}", if self.pass { "PASS" } else { "FAIL" });
        }
    }
}
