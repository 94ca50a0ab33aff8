use serde::{Deserialize, Serialize};

/// One violated check inside a suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub seed: u64,
    pub description: String,
    pub violation: f64,
}

/// Outcome of a single check: how far an inequality or equality is violated
/// (0 when it holds with room to spare).
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Check {
    pub description: String,
    pub violation: f64,
}

impl Check {
    /// `lhs ≤ rhs`.
    pub fn at_most(description: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            description: description.into(),
            violation: (lhs - rhs).max(0.0),
        }
    }

    /// `lhs = rhs`.
    pub fn equal(description: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            description: description.into(),
            violation: (lhs - rhs).abs(),
        }
    }

    /// A check that could not be evaluated; `f64::MAX` keeps the report
    /// representable in JSON.
    pub fn broken(description: impl Into<String>) -> Self {
        Self {
            description: description.into(),
            violation: f64::MAX,
        }
    }
}

/// Per-trial checks, tagged with the seed that reproduces the trial.
#[derive(Debug, Clone)]
pub(crate) struct TrialOutcome {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub note: Option<String>,
}

/// Machine-readable summary of a property suite. `failures` is empty exactly
/// when `max_violation ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub max_violation: f64,
    pub seed: u64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub(crate) fn from_outcomes(
        suite: &str,
        seed: u64,
        tolerance: f64,
        dims: Option<(usize, usize)>,
        outcomes: Vec<TrialOutcome>,
    ) -> Self {
        let mut failures = Vec::new();
        let mut max_violation = 0.0f64;
        let trials = outcomes.len();
        let notes = outcomes.iter().find_map(|o| o.note.clone()).into_iter().collect();
        for outcome in outcomes {
            for check in outcome.checks {
                max_violation = max_violation.max(check.violation);
                if check.violation.is_nan() || check.violation > tolerance {
                    failures.push(Failure {
                        seed: outcome.seed,
                        description: check.description,
                        violation: check.violation,
                    });
                }
            }
        }
        Self {
            suite: suite.to_string(),
            trials,
            failures,
            max_violation,
            seed,
            tolerance,
            dims,
            notes,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_track_tolerance() {
        let outcomes = vec![
            TrialOutcome {
                seed: 1,
                checks: vec![Check::at_most("a", 0.5, 1.0), Check::equal("b", 1.0, 1.0 + 1e-9)],
                note: None,
            },
            TrialOutcome {
                seed: 2,
                checks: vec![Check::at_most("c", 1.0 + 1e-3, 1.0)],
                note: Some("first".into()),
            },
        ];
        let report = SuiteReport::from_outcomes("demo", 7, 1e-7, None, outcomes);
        assert_eq!(report.trials, 2);
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].seed, 2);
        assert!((report.max_violation - 1e-3).abs() < 1e-12);
        assert!(!report.passed());
        assert_eq!(report.notes, vec!["first".to_string()]);
    }

    #[test]
    fn json_round_trip() {
        let report = SuiteReport::from_outcomes(
            "demo",
            3,
            1e-7,
            Some((2, 3)),
            vec![TrialOutcome {
                seed: 9,
                checks: vec![Check::broken("x")],
                note: None,
            }],
        );
        let text = report.to_json();
        let back: SuiteReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["suite"], "demo");
        assert_eq!(value["seed"], 3);
        assert!(value["failures"].is_array());
    }
}
