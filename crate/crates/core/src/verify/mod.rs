//! Batch verification of the algebra and coalgebra axioms on weight-truncated domains.

mod probe;
mod suites;

use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faults::Faults;
use crate::fock::Rank;

pub use probe::{evaluate, Engine, InvarianceVariant, Probe, Value};
pub use suites::{plan, Check, Task};

/// Version of the JSON report layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Default cap on the estimated number of elementary comparisons.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Voa,
    Voc,
    Adjoint,
    Virasoro,
    Preserving,
    Invariance,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Voa,
        Suite::Voc,
        Suite::Adjoint,
        Suite::Virasoro,
        Suite::Preserving,
        Suite::Invariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Voa => "voa",
            Suite::Voc => "voc",
            Suite::Adjoint => "adjoint",
            Suite::Virasoro => "virasoro",
            Suite::Preserving => "preserving",
            Suite::Invariance => "invariance",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

/// Whether a record covers every index where the identity could fail, or only a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scope {
    /// Grading forces the identity outside the checked range.
    #[serde(rename = "exhaustive-by-grading")]
    ExhaustiveByGrading,
    /// Only the configured index range or exponent window is covered.
    #[serde(rename = "windowed")]
    Windowed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationConfig {
    /// Dimension `d` of `h`.
    pub rank: u32,
    /// Largest basis weight `N` enumerated.
    pub max_weight: usize,
    /// Mode indices `k` for checks quantified over all of Z.
    pub index_range: [i64; 2],
    /// Indices `j, k` for Virasoro checks.
    pub virasoro_range: [i64; 2],
    /// Largest `m` in the creation and cocreation checks.
    pub creation_order: u32,
    /// Exponent cube for the Jacobi identities and the invariance diagnostic.
    pub window: [i64; 2],
    /// Estimated work above which a run is refused.
    pub budget: u64,
    pub suites: Vec<Suite>,
    pub faults: Faults,
}

impl VerificationConfig {
    pub fn new(rank: u32, max_weight: usize) -> Self {
        VerificationConfig {
            rank,
            max_weight,
            index_range: [-8, 8],
            virasoro_range: [-4, 4],
            creation_order: 4,
            window: [-5, 5],
            budget: DEFAULT_BUDGET,
            suites: Suite::ALL.to_vec(),
            faults: Faults::none(),
        }
    }

    pub fn with_suites(mut self, suites: &[Suite]) -> Self {
        self.suites = suites.to_vec();
        self
    }

    pub fn rank(&self) -> Result<Rank> {
        Rank::new(self.rank)
    }

    pub fn validate(&self) -> Result<()> {
        self.rank()?;
        for (name, [lo, hi]) in [
            ("index range", self.index_range),
            ("virasoro range", self.virasoro_range),
            ("window", self.window),
        ] {
            if lo > hi {
                return Err(Error::Config(format!("{name} {lo}:{hi} is empty")));
            }
        }
        if self.suites.is_empty() {
            return Err(Error::Config("no suites selected".into()));
        }
        Ok(())
    }
}

/// A failing instance together with both computed sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub probe: Probe,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub axiom: String,
    /// The identity being checked, in formula form.
    pub anchor: String,
    /// Enough of the enumeration to re-derive the checked tuples.
    pub domain: String,
    pub scope: Scope,
    pub passed: bool,
    /// Number of elementary comparisons made.
    pub checks: u64,
    /// Diagnostic records never affect the overall verdict.
    pub diagnostic: bool,
    /// First failing instance in enumeration order.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub diagnostic_failures: usize,
    pub checks: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub engine_version: String,
    /// Seconds since the Unix epoch; the only field that varies between identical runs.
    pub generated_at: u64,
    pub config: VerificationConfig,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn records_for(&self, suite: Suite) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(move |r| r.suite == suite)
    }

    pub fn record(&self, suite: Suite, axiom: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.suite == suite && r.axiom == axiom)
    }
}

/// Estimated elementary comparisons for `config`.
pub fn estimate(config: &VerificationConfig) -> Result<u64> {
    config.validate()?;
    let engine = Engine::new(config.rank()?, config.faults);
    Ok(plan(&engine, config)
        .iter()
        .map(|c| c.tasks.iter().map(Task::cost).sum::<u64>())
        .sum())
}

/// Runs every selected suite, evaluating checks on the current rayon pool.
pub fn run(config: &VerificationConfig) -> Result<VerificationReport> {
    config.validate()?;
    let engine = Engine::new(config.rank()?, config.faults);
    let checks = plan(&engine, config);
    let work: u64 = checks
        .iter()
        .map(|c| c.tasks.iter().map(Task::cost).sum::<u64>())
        .sum();
    if work > config.budget {
        return Err(Error::Infeasible {
            estimate: work,
            budget: config.budget,
        });
    }
    let mut records = Vec::with_capacity(checks.len());
    for check in &checks {
        records.push(run_check(&engine, check)?);
    }
    let mut summary = Summary {
        records: records.len(),
        ..Summary::default()
    };
    for r in &records {
        summary.checks += r.checks;
        match (r.passed, r.diagnostic) {
            (true, _) => summary.passed += 1,
            (false, false) => summary.failed += 1,
            (false, true) => summary.diagnostic_failures += 1,
        }
    }
    let generated_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        engine_version: crate::ENGINE_VERSION.to_string(),
        generated_at,
        config: config.clone(),
        records,
        summary,
    })
}

/// [`run`] on a dedicated pool of `jobs` workers.
pub fn run_with_jobs(config: &VerificationConfig, jobs: usize) -> Result<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run(config))
}

fn run_check(engine: &Engine, check: &Check) -> Result<CheckRecord> {
    let outcomes: Vec<Result<(u64, Option<Witness>)>> = check
        .tasks
        .par_iter()
        .map(|task| task.run(engine))
        .collect();
    let mut checks = 0;
    let mut witness = None;
    for outcome in outcomes {
        let (n, w) = outcome?;
        checks += n;
        if witness.is_none() {
            witness = w;
        }
    }
    Ok(CheckRecord {
        suite: check.suite,
        axiom: check.axiom.to_string(),
        anchor: check.anchor.to_string(),
        domain: check.domain.clone(),
        scope: check.scope,
        passed: witness.is_none(),
        checks,
        diagnostic: check.diagnostic,
        witness,
    })
}

/// Pretty-printed JSON form of a report.
pub fn report_json(report: &VerificationReport) -> serde_json::Result<String> {
    serde_json::to_string_pretty(report)
}

/// Single-line JSON form of a probe, as stored in report witnesses.
pub fn probe_json(probe: &Probe) -> String {
    serde_json::to_string(probe).expect("probes always serialize")
}

/// Re-evaluates a witness probe under `config`'s rank and faults.
pub fn replay(config: &VerificationConfig, probe: &Probe) -> Result<(String, String)> {
    let engine = Engine::new(config.rank()?, config.faults);
    let (lhs, rhs) = evaluate(&engine, probe)?;
    Ok((lhs.to_string(), rhs.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(faults: Faults) -> VerificationConfig {
        let mut c = VerificationConfig::new(1, 2);
        c.window = [-2, 2];
        c.index_range = [-4, 4];
        c.virasoro_range = [-3, 3];
        c.faults = faults;
        c
    }

    fn strip(mut r: VerificationReport) -> VerificationReport {
        r.generated_at = 0;
        r
    }

    #[test]
    fn clean_engine_passes_everything_but_the_diagnostic() {
        let r = run(&small(Faults::none())).unwrap();
        assert!(r.all_passed(), "{:#?}", r.records.iter().filter(|r| !r.passed).collect::<Vec<_>>());
        assert!(r.records.iter().all(|rec| rec.passed || rec.diagnostic));
        assert_eq!(r.summary.records, r.records.len());
    }

    #[test]
    fn each_fault_is_caught_and_witnesses_replay() {
        for faults in [
            Faults { flip_virasoro_sign: true, ..Faults::none() },
            Faults { drop_p_normalization: true, ..Faults::none() },
        ] {
            let config = small(faults);
            let r = run(&config).unwrap();
            assert!(r.summary.failed > 0, "{faults:?}");
            for rec in r.records.iter().filter(|r| !r.passed) {
                let w = rec.witness.as_ref().unwrap();
                let (lhs, rhs) = replay(&config, &w.probe).unwrap();
                assert_ne!(lhs, rhs);
                if !matches!(w.probe, Probe::VoaJacobi { .. } | Probe::VocJacobi { .. }) {
                    assert_eq!((lhs, rhs), (w.lhs.clone(), w.rhs.clone()));
                }
            }
        }
    }

    #[test]
    fn reports_are_deterministic_across_pools() {
        let config = small(Faults { drop_p_normalization: true, ..Faults::none() });
        let a = strip(run_with_jobs(&config, 1).unwrap());
        let b = strip(run_with_jobs(&config, 3).unwrap());
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let back: VerificationReport =
            serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn budget_is_enforced() {
        let mut config = small(Faults::none());
        config.budget = 10;
        assert!(matches!(run(&config), Err(Error::Infeasible { .. })));
        assert!(estimate(&config).unwrap() > 10);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut config = small(Faults::none());
        config.window = [3, 1];
        assert!(matches!(run(&config), Err(Error::Config(_))));
        assert!(run(&VerificationConfig::new(0, 1)).is_err());
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("voc".parse::<Suite>().unwrap(), Suite::Voc);
    }
}
