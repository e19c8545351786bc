//! Check reports: deterministic verdicts with violation witnesses.
//!
//! Every grid or property check produces a [`CheckReport`]. Reports are
//! fully deterministic: witnesses are sorted by `(n, location)` before
//! output, rational values cross the boundary as `p/q` strings, floats as
//! shortest round-trip decimals, and the sampler (grid description, seed,
//! RNG algorithm) is recorded so a report can be reproduced bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{rat_to_f64, BigRational};

/// How a check's sample was drawn; recorded in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerInfo {
    /// Human-readable grid description.
    pub grid: String,
    /// Seed of the deterministic generator, when randomness was used.
    pub seed: Option<u64>,
    /// Name of the generator algorithm, when randomness was used.
    pub rng: Option<String>,
}

impl SamplerInfo {
    pub fn deterministic(grid: impl Into<String>) -> Self {
        SamplerInfo {
            grid: grid.into(),
            seed: None,
            rng: None,
        }
    }
}

/// A violation: the point where a relation failed, with both sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u32,
    /// `x` or `t` as an exact `p/q` string (or a coefficient label for
    /// coefficient-level checks).
    pub location: String,
    pub lhs: String,
    pub rhs: String,
    /// Which link failed, or diagnostics such as precision exhaustion.
    pub detail: String,
}

/// The smallest slack observed across all checked points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub n: u32,
    pub location: String,
    /// Exact `p/q` when the check is exact, shortest decimal otherwise.
    pub value: String,
    pub approx: f64,
}

/// Verdict of a grid/property check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub points_checked: u64,
    pub witnesses: Vec<Witness>,
    pub extremal_margin: Option<Margin>,
    pub sampler: SamplerInfo,
}

/// Full verification run: the ordered list of check reports plus the
/// parameters needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub precision: u32,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Slack of a single point: distance to the failure boundary.
///
/// Exact checks carry rational slack; floating-point confirmations carry
/// `f64` slack. A nonnegative slack means the point passed.
#[derive(Clone, Debug)]
pub enum Slack {
    Exact(BigRational),
    Approx(f64),
}

impl Slack {
    pub fn approx(&self) -> f64 {
        match self {
            Slack::Exact(q) => rat_to_f64(q),
            Slack::Approx(f) => *f,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Slack::Exact(q) => q.to_string(),
            Slack::Approx(f) => f.to_string(),
        }
    }

    fn smaller_than(&self, other: &Slack) -> bool {
        match (self, other) {
            (Slack::Exact(a), Slack::Exact(b)) => a < b,
            _ => self.approx() < other.approx(),
        }
    }
}

/// Outcome of checking one `(n, point)` pair.
#[derive(Clone, Debug)]
pub struct PointOutcome {
    pub n: u32,
    /// Sort key for deterministic witness ordering.
    pub sort_key: BigRational,
    /// Display label; defaults to the sort key as `p/q`.
    pub label: Option<String>,
    pub result: PointResult,
}

#[derive(Clone, Debug)]
pub enum PointResult {
    Pass(Slack),
    Fail {
        lhs: String,
        rhs: String,
        detail: String,
        slack: Option<Slack>,
    },
}

impl PointOutcome {
    pub fn pass(n: u32, at: &BigRational, slack: Slack) -> Self {
        PointOutcome {
            n,
            sort_key: at.clone(),
            label: None,
            result: PointResult::Pass(slack),
        }
    }

    pub fn fail(
        n: u32,
        at: &BigRational,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        detail: impl Into<String>,
        slack: Option<Slack>,
    ) -> Self {
        PointOutcome {
            n,
            sort_key: at.clone(),
            label: None,
            result: PointResult::Fail {
                lhs: lhs.into(),
                rhs: rhs.into(),
                detail: detail.into(),
                slack,
            },
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    fn location(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.sort_key.to_string())
    }
}

/// Accumulates point outcomes into a deterministic [`CheckReport`].
pub struct ReportBuilder {
    check: String,
    sampler: SamplerInfo,
    points: u64,
    witnesses: Vec<(u32, BigRational, Witness)>,
    best: Option<(Slack, u32, String)>,
}

impl ReportBuilder {
    pub fn new(check: impl Into<String>, sampler: SamplerInfo) -> Self {
        ReportBuilder {
            check: check.into(),
            sampler,
            points: 0,
            witnesses: Vec::new(),
            best: None,
        }
    }

    pub fn record(&mut self, outcome: PointOutcome) {
        self.points += 1;
        let location = outcome.location();
        match &outcome.result {
            PointResult::Pass(slack) => {
                self.update_margin(slack, outcome.n, &location);
            }
            PointResult::Fail {
                lhs,
                rhs,
                detail,
                slack,
            } => {
                if let Some(slack) = slack {
                    self.update_margin(slack, outcome.n, &location);
                }
                self.witnesses.push((
                    outcome.n,
                    outcome.sort_key.clone(),
                    Witness {
                        n: outcome.n,
                        location,
                        lhs: lhs.clone(),
                        rhs: rhs.clone(),
                        detail: detail.clone(),
                    },
                ));
            }
        }
    }

    pub fn record_all(&mut self, outcomes: impl IntoIterator<Item = PointOutcome>) {
        for o in outcomes {
            self.record(o);
        }
    }

    fn update_margin(&mut self, slack: &Slack, n: u32, location: &str) {
        let better = match &self.best {
            None => true,
            Some((cur, _, _)) => slack.smaller_than(cur),
        };
        if better {
            self.best = Some((slack.clone(), n, location.to_string()));
        }
    }

    pub fn finish(mut self) -> CheckReport {
        self.witnesses
            .sort_by(|(an, ax, _), (bn, bx, _)| an.cmp(bn).then_with(|| ax.cmp(bx)));
        let witnesses: Vec<Witness> = self.witnesses.into_iter().map(|(_, _, w)| w).collect();
        let extremal_margin = match self.best {
            Some((slack, n, location)) => Some(Margin {
                n,
                location,
                value: slack.render(),
                approx: slack.approx(),
            }),
            None if self.points > 0 => witnesses.first().map(|w| Margin {
                n: w.n,
                location: w.location.clone(),
                value: "undecided".into(),
                approx: 0.0,
            }),
            None => None,
        };
        CheckReport {
            check: self.check,
            passed: witnesses.is_empty(),
            points_checked: self.points,
            witnesses,
            extremal_margin,
            sampler: self.sampler,
        }
    }
}

/// Serialize a suite report as pretty JSON (byte-deterministic for equal
/// inputs: field order is fixed and all collections are ordered).
pub fn suite_to_json(report: &SuiteReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    s.push('\n');
    s
}

pub fn suite_from_json(text: &str) -> Result<SuiteReport> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid suite report JSON: {e}")))
}

/// Render reports as CSV with columns `check,n,x,value,margin,passed`.
///
/// A passing check contributes one row carrying its extremal margin; a
/// failing check contributes one row per violation witness, with the
/// witness' left-hand side in the `value` column.
pub fn reports_to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from("check,n,x,value,margin,passed\n");
    for report in reports {
        if report.passed {
            match &report.extremal_margin {
                Some(m) => {
                    out.push_str(&format!(
                        "{},{},{},,{},true\n",
                        report.check, m.n, m.location, m.value
                    ));
                }
                None => out.push_str(&format!("{},,,,,true\n", report.check)),
            }
        } else {
            for w in &report.witnesses {
                out.push_str(&format!(
                    "{},{},{},{},,false\n",
                    report.check, w.n, w.location, w.lhs
                ));
            }
        }
    }
    out
}
