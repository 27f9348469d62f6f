use std::io::Write;
use std::path::Path;

use masspart::randkit::reg_inc_gamma_upper;
use masspart::stattest::{CorrelationReport, KsReport, MomentReport, Z_LIMIT};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One line of a suite report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test_name: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub n: usize,
    pub passed: bool,
    pub seed_record: Option<String>,
    /// Threshold the decision was taken against: a significance level for
    /// p-values, otherwise the tolerance on the statistic.
    pub gate: f64,
}

/// Two-sided normal tail probability of `z`.
pub fn normal_two_sided_p(z: f64) -> f64 {
    if z == 0.0 {
        return 1.0;
    }
    reg_inc_gamma_upper(0.5, 0.5 * z * z).unwrap_or(0.0)
}

impl TestReport {
    pub fn ks(name: impl Into<String>, r: &KsReport, gate: f64) -> Self {
        let r = r.clone().gate(gate);
        Self {
            test_name: name.into(),
            statistic: r.statistic,
            p_value: Some(r.p_value),
            n: r.n1,
            passed: r.passed,
            seed_record: r.seed_record,
            gate,
        }
    }

    /// A z-score test. With no gate the built-in `|z| <= 5` rule applies,
    /// otherwise the two-sided p-value is compared with `gate`.
    pub fn z(name: impl Into<String>, z: f64, n: usize, gate: Option<f64>, seed_record: String) -> Self {
        let p = normal_two_sided_p(z);
        let (passed, gate) = match gate {
            Some(g) => (p >= g, g),
            None => (z.abs() <= Z_LIMIT, Z_LIMIT),
        };
        Self {
            test_name: name.into(),
            statistic: z,
            p_value: Some(p),
            n,
            passed,
            seed_record: Some(seed_record),
            gate,
        }
    }

    pub fn correlation(name: impl Into<String>, r: &CorrelationReport, gate: Option<f64>, seed: String) -> Self {
        Self::z(name, r.z, r.n, gate, seed)
    }

    pub fn moment(name: impl Into<String>, r: &MomentReport, gate: Option<f64>, seed: String) -> Self {
        Self::z(name, r.z, r.n, gate, seed)
    }

    /// A deterministic check: passes iff `statistic <= tolerance`.
    pub fn bound(name: impl Into<String>, statistic: f64, tolerance: f64, n: usize, seed_record: Option<String>) -> Self {
        Self {
            test_name: name.into(),
            statistic,
            p_value: None,
            n,
            passed: statistic <= tolerance,
            seed_record,
            gate: tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub group: u32,
    pub title: String,
    pub passed: bool,
    pub tests: Vec<TestReport>,
    pub elapsed_ms: u64,
}

impl GroupReport {
    pub fn failures(&self) -> impl Iterator<Item = &TestReport> {
        self.tests.iter().filter(|t| !t.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: String,
    pub master_seed: String,
    pub replicas: usize,
    pub significance_override: Option<f64>,
    pub passed: bool,
    pub groups: Vec<GroupReport>,
    pub elapsed_ms: u64,
}

/// Field names that carry wall-clock timing and are excluded from
/// determinism comparisons.
pub const TIMING_FIELDS: [&str; 1] = ["elapsed_ms"];

/// Removes timing fields from a JSON value, recursively.
pub fn strip_timing(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Object(map) => {
            for f in TIMING_FIELDS {
                map.remove(f);
            }
            map.values_mut().for_each(strip_timing);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_tail() {
        assert!((normal_two_sided_p(1.959_963_984_540_054) - 0.05).abs() < 1e-12);
        assert_eq!(normal_two_sided_p(0.0), 1.0);
        assert!(normal_two_sided_p(8.0) < 1e-14);
    }

    #[test]
    fn z_rule() {
        assert!(TestReport::z("t", 4.9, 100, None, String::new()).passed);
        assert!(!TestReport::z("t", -5.1, 100, None, String::new()).passed);
        assert!(!TestReport::z("t", 0.5, 100, Some(0.99), String::new()).passed);
    }

    #[test]
    fn timing_is_stripped_everywhere() {
        let mut v = serde_json::json!({"elapsed_ms": 3, "groups": [{"elapsed_ms": 1, "x": 2}]});
        strip_timing(&mut v);
        assert_eq!(v, serde_json::json!({"groups": [{"x": 2}]}));
    }
}
