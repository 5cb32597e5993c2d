//! Report records written by the driver: the instance echo, the verdict and
//! resource accounting, JSON-serializable with a stable field order. Timing
//! is the only field allowed to vary between identical runs.

use crate::hilb::{Verdict, VerifyStats};
use crate::instance::InstanceFile;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRecord {
    pub schema_version: u32,
    pub instance: InstanceFile,
    pub verdict: VerdictRecord,
    pub wall_ms: u64,
    pub peak_terms: u64,
    pub trace: Vec<TraceRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case", deny_unknown_fields)]
pub enum VerdictRecord {
    CertifiedZero,
    Inconclusive {
        reason: String,
        residual_terms: u64,
        sample: String,
    },
    InputError {
        message: String,
    },
}

impl VerdictRecord {
    pub fn exit_code(&self) -> i32 {
        match self {
            VerdictRecord::CertifiedZero => 0,
            VerdictRecord::Inconclusive { .. } => 1,
            VerdictRecord::InputError { .. } => 2,
        }
    }
}

impl From<&Verdict> for VerdictRecord {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::CertifiedZero => VerdictRecord::CertifiedZero,
            Verdict::Inconclusive(r) => VerdictRecord::Inconclusive {
                reason: r.reason.clone(),
                residual_terms: r.terms as u64,
                sample: r.sample.clone(),
            },
            Verdict::InputError(msg) => VerdictRecord::InputError {
                message: msg.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    pub level: u32,
    pub branch: String,
    pub terms: u64,
}

impl ReportRecord {
    pub fn new(instance: InstanceFile, verdict: &Verdict, stats: &VerifyStats) -> ReportRecord {
        ReportRecord {
            schema_version: 1,
            instance,
            verdict: verdict.into(),
            wall_ms: stats.wall_ms as u64,
            peak_terms: stats.peak_terms as u64,
            trace: stats
                .trace
                .iter()
                .map(|t| TraceRecord {
                    level: t.level,
                    branch: t.branch.clone(),
                    terms: t.terms as u64,
                })
                .collect(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Per-cycle outcome of a filtration scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationReportRecord {
    pub schema_version: u32,
    pub name: String,
    /// The least vanishing-power index when one was found within the bound.
    pub index: Option<u64>,
    pub max_checked: u64,
    /// Always "vanishing certified" or "not reduced"; nonvanishing is never
    /// claimed.
    pub status: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilb::{Residual, TraceEntry};
    use crate::instance::AlphaNode;

    fn sample_instance() -> InstanceFile {
        InstanceFile {
            schema_version: 1,
            n: 1,
            k: 0,
            l: 3,
            alpha: AlphaNode::Product(vec![]),
            omega: vec![1, 2, 3],
            theta: vec![],
            assignment: Default::default(),
            indices: vec![2, 2, 2],
        }
    }

    #[test]
    fn report_round_trip() {
        let stats = VerifyStats {
            trace: vec![TraceEntry {
                level: 1,
                branch: String::new(),
                terms: 3,
            }],
            peak_terms: 12,
            wall_ms: 7,
        };
        let record = ReportRecord::new(
            sample_instance(),
            &Verdict::Inconclusive(Residual {
                reason: "nonzero normal form at base".into(),
                terms: 2,
                sample: "(1)·c(0)".into(),
            }),
            &stats,
        );
        let json = record.to_json_pretty();
        let back: ReportRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
        assert_eq!(back.verdict.exit_code(), 1);
    }

    #[test]
    fn reports_are_deterministic_modulo_timing() {
        let stats_a = VerifyStats {
            trace: vec![],
            peak_terms: 5,
            wall_ms: 3,
        };
        let stats_b = VerifyStats {
            trace: vec![],
            peak_terms: 5,
            wall_ms: 900,
        };
        let a = ReportRecord::new(sample_instance(), &Verdict::CertifiedZero, &stats_a);
        let b = ReportRecord::new(sample_instance(), &Verdict::CertifiedZero, &stats_b);
        let strip = |r: &ReportRecord| {
            let mut r = r.clone();
            r.wall_ms = 0;
            r.to_json_pretty()
        };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.verdict.exit_code(), 0);
    }
}
