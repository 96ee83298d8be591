//! Seeded batch experiments: node-failure repair and hot-data reads.
//!
//! Every trial draws from its own random stream, derived from the
//! configured seed, the failure count and the trial index, so results do
//! not depend on how trials are spread over worker threads. Aggregates are
//! integer sums and maxima only.

use std::fmt::Write as _;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{certify_search, certify_structural, AnalysisError, AvailabilityCertificate};
use crate::codec::{encode, peel_decode, systematize, ErasurePattern, ReceivedWord};
use crate::combinatorics::{self, binomial};
use crate::constructions::{CodeFamily, ConstructionError, Generator, LinearCode};
use crate::gf2::BitVector;

/// Failure counts with at most this many patterns are enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workload {
    Repair,
    HotRead,
}

impl Workload {
    pub fn name(&self) -> &'static str {
        match self {
            Workload::Repair => "repair",
            Workload::HotRead => "hot-read",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub family: CodeFamily,
    pub trials: usize,
    pub failure_counts: Vec<usize>,
    pub seed: u64,
    pub workload: Workload,
    /// Coordinate whose read fan-out is measured.
    pub hot_coordinate: usize,
    /// Worker threads; does not affect results.
    pub jobs: usize,
}

impl ExperimentConfig {
    pub fn new(family: CodeFamily, workload: Workload) -> Self {
        ExperimentConfig {
            family,
            trials: 1000,
            failure_counts: vec![0, 1, 2],
            seed: 0,
            workload,
            hot_coordinate: 0,
            jobs: 1,
        }
    }
}

/// A code with its systematic generator and a validated certificate.
#[derive(Debug, Clone)]
pub struct CodeInstance {
    pub family: CodeFamily,
    pub code: LinearCode,
    pub generator: Generator,
    pub certificate: AvailabilityCertificate,
}

impl CodeInstance {
    pub fn new(family: CodeFamily) -> Result<Self, SimError> {
        let code = family.build()?;
        let certificate = match family {
            CodeFamily::Construction { r, t } => certify_structural(r + t, t)?,
            _ => certify_search(&code, family.locality(), family.availability())?,
        };
        certificate.validate(&code)?;
        let generator = match code.generator() {
            Some(g) => g.clone(),
            None => systematize(&code),
        };
        Ok(CodeInstance {
            family,
            code,
            generator,
            certificate,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    Exhaustive,
    Sampled,
}

/// Totals for one failure count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureCountStats {
    pub failure_count: usize,
    pub mode: SamplingMode,
    pub trials: u64,
    pub successes: u64,
    pub rounds_sum: u64,
    pub max_rounds: u64,
    /// Group reads and the coordinates they touched.
    pub group_uses: u64,
    pub degree_sum: u64,
    pub fanout_sum: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    trials: u64,
    successes: u64,
    rounds_sum: u64,
    max_rounds: u64,
    group_uses: u64,
    degree_sum: u64,
    fanout_sum: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            successes: self.successes + o.successes,
            rounds_sum: self.rounds_sum + o.rounds_sum,
            max_rounds: self.max_rounds.max(o.max_rounds),
            group_uses: self.group_uses + o.group_uses,
            degree_sum: self.degree_sum + o.degree_sum,
            fanout_sum: self.fanout_sum + o.fanout_sum,
        }
    }
}

fn ratio_f64(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl FailureCountStats {
    pub fn success_fraction(&self) -> f64 {
        ratio_f64(self.successes, self.trials)
    }

    pub fn mean_rounds(&self) -> f64 {
        ratio_f64(self.rounds_sum, self.trials)
    }

    /// Coordinates read per repair-group use.
    pub fn mean_degree(&self) -> f64 {
        ratio_f64(self.degree_sum, self.group_uses)
    }

    pub fn mean_fanout(&self) -> f64 {
        ratio_f64(self.fanout_sum, self.trials)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub t: usize,
    pub rows: Vec<FailureCountStats>,
}

pub const REPORT_CSV_HEADER: &str = "failure_count,success_fraction,mean_rounds,mean_degree,fanout";

impl ExperimentReport {
    /// CSV with `#` provenance lines ahead of the header.
    pub fn to_csv(&self) -> String {
        let cfg = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# {} n={} k={} workload={} trials={} seed={} hot={}",
            cfg.family,
            self.n,
            self.k,
            cfg.workload.name(),
            cfg.trials,
            cfg.seed,
            cfg.hot_coordinate
        );
        let modes: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                let mode = match row.mode {
                    SamplingMode::Exhaustive => "exhaustive",
                    SamplingMode::Sampled => "sampled",
                };
                format!("{}:{mode}", row.failure_count)
            })
            .collect();
        let _ = writeln!(out, "# modes={}", modes.join(","));
        let _ = writeln!(out, "{REPORT_CSV_HEADER}");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.6},{:.6},{:.6},{:.6}",
                row.failure_count,
                row.success_fraction(),
                row.mean_rounds(),
                row.mean_degree(),
                row.mean_fanout()
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} ({} workload): n={} k={} r={} t={}",
            self.config.family,
            self.config.workload.name(),
            self.n,
            self.k,
            self.r,
            self.t
        );
        for row in &self.rows {
            let mode = match row.mode {
                SamplingMode::Exhaustive => "all patterns",
                SamplingMode::Sampled => "sampled",
            };
            let _ = writeln!(
                out,
                "  {} failures, {} trials ({mode}): success {:.4}, rounds mean {:.3} max {}, degree {:.3}, fan-out {:.3}",
                row.failure_count,
                row.trials,
                row.success_fraction(),
                row.mean_rounds(),
                row.max_rounds,
                row.mean_degree(),
                row.mean_fanout()
            );
        }
        out
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream for one trial: the key mixes seed and failure count, the
/// ChaCha stream id is the trial index.
fn trial_rng(seed: u64, failure_count: usize, trial: u64) -> ChaCha8Rng {
    let key = splitmix64(seed ^ splitmix64(failure_count as u64));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(trial);
    rng
}

/// Number of read sets for `hot` (itself plus its groups) untouched by `down`.
pub fn fanout(cert: &AvailabilityCertificate, hot: usize, down: &BitVector) -> usize {
    let direct = usize::from(!down.get(hot));
    direct
        + cert
            .groups(hot)
            .iter()
            .filter(|g| g.iter().all(|&c| !down.get(c)))
            .count()
}

struct Plan {
    universe: usize,
    mode: SamplingMode,
    count: u64,
}

fn plan(universe: usize, failures: usize, trials: usize) -> Plan {
    match binomial(universe, failures) {
        Ok(c) if c <= EXHAUSTIVE_LIMIT => Plan {
            universe,
            mode: SamplingMode::Exhaustive,
            count: c,
        },
        _ => Plan {
            universe,
            mode: SamplingMode::Sampled,
            count: trials as u64,
        },
    }
}

fn failure_set(plan: &Plan, failures: usize, trial: u64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    match plan.mode {
        SamplingMode::Exhaustive => combinatorics::unrank(plan.universe, failures, trial)
            .expect("trial index below the pattern count")
            .elements()
            .iter()
            .map(|e| e - 1)
            .collect(),
        SamplingMode::Sampled => {
            let mut v = index::sample(rng, plan.universe, failures).into_vec();
            v.sort_unstable();
            v
        }
    }
}

fn repair_trial(inst: &CodeInstance, hot: usize, erased: &[usize], rng: &mut ChaCha8Rng) -> Tally {
    let n = inst.code.n();
    let k = inst.generator.matrix.rows();
    let message = BitVector::from_support(k, (0..k).filter(|_| rng.gen::<bool>()));
    let codeword = encode(&inst.generator.matrix, &message).expect("message has length k");
    let pattern = ErasurePattern::new(n, erased.iter().copied()).expect("indices below n");
    let word = ReceivedWord::erase(&codeword, &pattern).expect("lengths agree");
    let outcome = peel_decode(&inst.certificate, &word);
    let recovered = outcome.word.to_codeword();
    if let Some(c) = &recovered {
        assert_eq!(c, &codeword, "peeling produced a wrong codeword");
    }
    let down = BitVector::from_support(n, erased.iter().copied());
    Tally {
        trials: 1,
        successes: u64::from(recovered.is_some()),
        rounds_sum: outcome.rounds as u64,
        max_rounds: outcome.rounds as u64,
        group_uses: outcome.steps.len() as u64,
        degree_sum: outcome.steps.iter().map(|s| s.group.len() as u64).sum(),
        fanout_sum: fanout(&inst.certificate, hot, &down) as u64,
    }
}

fn hot_read_trial(inst: &CodeInstance, hot: usize, outages: &[usize]) -> Tally {
    let n = inst.code.n();
    // Outages are drawn from the other n - 1 coordinates.
    let down =
        BitVector::from_support(n, outages.iter().map(|&i| if i >= hot { i + 1 } else { i }));
    let usable: Vec<&Vec<usize>> = inst
        .certificate
        .groups(hot)
        .iter()
        .filter(|g| g.iter().all(|&c| !down.get(c)))
        .collect();
    let fan = 1 + usable.len();
    Tally {
        trials: 1,
        successes: u64::from(fan == inst.certificate.availability() + 1),
        rounds_sum: 0,
        max_rounds: 0,
        group_uses: usable.len() as u64,
        degree_sum: usable.iter().map(|g| g.len() as u64).sum(),
        fanout_sum: fan as u64,
    }
}

fn validate(cfg: &ExperimentConfig, inst: &CodeInstance) -> Result<(), SimError> {
    let n = inst.code.n();
    if cfg.trials == 0 {
        return Err(SimError::InvalidConfig("trials must be at least 1".into()));
    }
    if cfg.failure_counts.is_empty() {
        return Err(SimError::InvalidConfig("no failure counts given".into()));
    }
    if cfg.hot_coordinate >= n {
        return Err(SimError::InvalidConfig(format!(
            "hot coordinate {} outside code length {n}",
            cfg.hot_coordinate
        )));
    }
    let limit = match cfg.workload {
        Workload::Repair => n,
        Workload::HotRead => n - 1,
    };
    if let Some(&f) = cfg.failure_counts.iter().find(|&&f| f > limit) {
        return Err(SimError::InvalidConfig(format!(
            "failure count {f} exceeds {limit} for the {} workload",
            cfg.workload.name()
        )));
    }
    Ok(())
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, SimError> {
    let inst = CodeInstance::new(cfg.family)?;
    run_on_instance(cfg, &inst)
}

pub fn run_repair_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, SimError> {
    let mut cfg = cfg.clone();
    cfg.workload = Workload::Repair;
    run_experiment(&cfg)
}

pub fn run_hot_read_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, SimError> {
    let mut cfg = cfg.clone();
    cfg.workload = Workload::HotRead;
    run_experiment(&cfg)
}

/// Runs `cfg` against an already built instance.
pub fn run_on_instance(
    cfg: &ExperimentConfig,
    inst: &CodeInstance,
) -> Result<ExperimentReport, SimError> {
    validate(cfg, inst)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| SimError::Pool(e.to_string()))?;
    let n = inst.code.n();
    let hot = cfg.hot_coordinate;
    let rows = cfg
        .failure_counts
        .iter()
        .map(|&f| {
            let universe = match cfg.workload {
                Workload::Repair => n,
                Workload::HotRead => n - 1,
            };
            let plan = plan(universe, f, cfg.trials);
            let tally = pool.install(|| {
                (0..plan.count)
                    .into_par_iter()
                    .map(|trial| {
                        let mut rng = trial_rng(cfg.seed, f, trial);
                        let failed = failure_set(&plan, f, trial, &mut rng);
                        match cfg.workload {
                            Workload::Repair => repair_trial(inst, hot, &failed, &mut rng),
                            Workload::HotRead => hot_read_trial(inst, hot, &failed),
                        }
                    })
                    .reduce(Tally::default, Tally::merge)
            });
            FailureCountStats {
                failure_count: f,
                mode: plan.mode,
                trials: tally.trials,
                successes: tally.successes,
                rounds_sum: tally.rounds_sum,
                max_rounds: tally.max_rounds,
                group_uses: tally.group_uses,
                degree_sum: tally.degree_sum,
                fanout_sum: tally.fanout_sum,
            }
        })
        .collect();
    Ok(ExperimentReport {
        config: cfg.clone(),
        n,
        k: inst.code.k(),
        r: inst.certificate.locality(),
        t: inst.certificate.availability(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_h;

    fn cfg(family: CodeFamily, workload: Workload, counts: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            failure_counts: counts,
            trials: 200,
            seed: 11,
            ..ExperimentConfig::new(family, workload)
        }
    }

    #[test]
    fn repair_up_to_t_always_succeeds() {
        let c = cfg(
            CodeFamily::Construction { r: 2, t: 3 },
            Workload::Repair,
            vec![0, 1, 2, 3, 10],
        );
        let rep = run_repair_experiment(&c).unwrap();
        for row in &rep.rows[..4] {
            assert_eq!(
                row.successes, row.trials,
                "failure count {}",
                row.failure_count
            );
            assert_eq!(row.mode, SamplingMode::Exhaustive);
            if row.failure_count > 0 {
                assert_eq!(row.max_rounds, 1);
                assert_eq!(row.mean_degree(), 2.0);
            }
        }
        assert_eq!(rep.rows[4].successes, 0);
    }

    /// Peels with the rows of H(m, t) directly: any row with a single
    /// erased position fixes it.
    fn row_peeling_succeeds(h: &crate::gf2::BitMatrix, erased: &[usize]) -> bool {
        let mut left: Vec<usize> = erased.to_vec();
        loop {
            let before = left.len();
            for i in 0..h.rows() {
                let support = h.row_support(i);
                let hit: Vec<usize> = support
                    .iter()
                    .copied()
                    .filter(|c| left.contains(c))
                    .collect();
                if hit.len() == 1 {
                    left.retain(|&c| c != hit[0]);
                }
            }
            if left.is_empty() {
                return true;
            }
            if left.len() == before {
                return false;
            }
        }
    }

    #[test]
    fn t_plus_one_matches_row_peeling_oracle() {
        let h = build_h(5, 3).unwrap();
        let oracle = combinatorics::enumerate(10, 4)
            .iter()
            .filter(|s| {
                let erased: Vec<usize> = s.elements().iter().map(|e| e - 1).collect();
                row_peeling_succeeds(&h, &erased)
            })
            .count() as u64;
        let c = cfg(
            CodeFamily::Construction { r: 2, t: 3 },
            Workload::Repair,
            vec![4],
        );
        let rep = run_repair_experiment(&c).unwrap();
        assert_eq!(rep.rows[0].trials, 210);
        assert_eq!(rep.rows[0].successes, oracle);
        assert!(oracle < 210);
    }

    #[test]
    fn deterministic_across_runs_and_jobs() {
        let mut c = cfg(
            CodeFamily::DirectProduct { r: 3, t: 3 },
            Workload::Repair,
            vec![2, 6, 9],
        );
        c.trials = 300;
        let a = run_repair_experiment(&c).unwrap().to_csv();
        let b = run_repair_experiment(&c).unwrap().to_csv();
        c.jobs = 4;
        let d = run_repair_experiment(&c).unwrap().to_csv();
        assert_eq!(a, b);
        assert_eq!(a, d);
        assert!(a.contains("9:sampled"));
    }

    #[test]
    fn hot_read_fanout() {
        let c = cfg(
            CodeFamily::Construction { r: 2, t: 2 },
            Workload::HotRead,
            vec![0, 1],
        );
        let rep = run_hot_read_experiment(&c).unwrap();
        assert_eq!(rep.rows[0].mean_fanout(), 3.0);
        assert_eq!(rep.rows[0].success_fraction(), 1.0);
        let p = cfg(
            CodeFamily::DirectProduct { r: 2, t: 2 },
            Workload::HotRead,
            vec![0],
        );
        let rep_p = run_hot_read_experiment(&p).unwrap();
        assert_eq!(rep_p.rows[0].mean_fanout(), 3.0);
        assert_eq!((rep.n, rep_p.n), (6, 9));
    }

    #[test]
    fn adversarial_outages_leave_direct_copy_only() {
        let inst = CodeInstance::new(CodeFamily::Construction { r: 2, t: 3 }).unwrap();
        let hot = 5;
        let groups = inst.certificate.groups(hot);
        let n = inst.code.n();
        assert_eq!(fanout(&inst.certificate, hot, &BitVector::zeros(n)), 4);
        // Every choice of one outage per group.
        for a in &groups[0] {
            for b in &groups[1] {
                for c in &groups[2] {
                    let down = BitVector::from_support(n, [*a, *b, *c]);
                    assert_eq!(fanout(&inst.certificate, hot, &down), 1);
                }
            }
        }
    }

    #[test]
    fn invalid_configs() {
        let mut c = cfg(
            CodeFamily::Construction { r: 2, t: 2 },
            Workload::Repair,
            vec![7],
        );
        assert!(matches!(
            run_experiment(&c),
            Err(SimError::InvalidConfig(_))
        ));
        c.failure_counts = vec![6];
        c.workload = Workload::HotRead;
        assert!(run_experiment(&c).is_err());
        c.failure_counts = vec![1];
        c.trials = 0;
        assert!(run_experiment(&c).is_err());
        c.trials = 1;
        c.hot_coordinate = 6;
        assert!(run_experiment(&c).is_err());
    }
}
