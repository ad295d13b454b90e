//! Monte Carlo survey: stream sampled states through the criteria and tally
//! how often each criterion (and each pairwise agreement) holds.
//!
//! Sample `i` of a dimension pair draws from its own RNG stream
//! (`stream_id = i`) under a key derived from the master seed and the
//! dimensions, so a record depends only on `(seed, dims, samples)`: any
//! split of the index range over workers merges to the same counts.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Range, RangeInclusive};
use std::str::FromStr;
use std::thread;

use crate::criteria::{evaluate_all_with, CriteriaVerdict, Criterion, Tolerances};
use crate::entropy::validate_q;
use crate::error::{Error, Result, SampleCoord};
use crate::sampling::{random_stream, sample_state};
use crate::state::{DensityMatrix, SystemDims};

/// Below this many samples per point the standard errors are not meaningful.
pub const MIN_MEANINGFUL_SAMPLES: u64 = 1_000;

/// At most this many `ppt != reduction` samples are kept per record.
pub const MAX_ANOMALIES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Ppt,
    Reduction,
    Majorization,
    QEntropicInf,
    QEntropicFinite,
    RankSeparable,
    AgreePptReduction,
    AgreePptMajorization,
    AgreePptQent,
    AgreeReductionMajorization,
    AgreeReductionQent,
    AgreeMajorizationQent,
    AgreeAll,
    ViolateReduction,
    ViolateMajorization,
    Distillable,
}

impl Statistic {
    pub const ALL: [Statistic; 16] = [
        Statistic::Ppt,
        Statistic::Reduction,
        Statistic::Majorization,
        Statistic::QEntropicInf,
        Statistic::QEntropicFinite,
        Statistic::RankSeparable,
        Statistic::AgreePptReduction,
        Statistic::AgreePptMajorization,
        Statistic::AgreePptQent,
        Statistic::AgreeReductionMajorization,
        Statistic::AgreeReductionQent,
        Statistic::AgreeMajorizationQent,
        Statistic::AgreeAll,
        Statistic::ViolateReduction,
        Statistic::ViolateMajorization,
        Statistic::Distillable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Statistic::Ppt => "ppt",
            Statistic::Reduction => "reduction",
            Statistic::Majorization => "majorization",
            Statistic::QEntropicInf => "q_entropic_inf",
            Statistic::QEntropicFinite => "q_entropic_finite",
            Statistic::RankSeparable => "rank_separable",
            Statistic::AgreePptReduction => "agree_ppt_reduction",
            Statistic::AgreePptMajorization => "agree_ppt_majorization",
            Statistic::AgreePptQent => "agree_ppt_qent",
            Statistic::AgreeReductionMajorization => "agree_reduction_majorization",
            Statistic::AgreeReductionQent => "agree_reduction_qent",
            Statistic::AgreeMajorizationQent => "agree_majorization_qent",
            Statistic::AgreeAll => "agree_all",
            Statistic::ViolateReduction => "violate_reduction",
            Statistic::ViolateMajorization => "violate_majorization",
            Statistic::Distillable => "distillable",
        }
    }

    /// Labels tallied by a survey, with `q_entropic_finite` only when a
    /// finite `q` is configured.
    pub fn tallied(with_finite_q: bool) -> impl Iterator<Item = Statistic> {
        Self::ALL
            .into_iter()
            .filter(move |s| with_finite_q || *s != Statistic::QEntropicFinite)
    }

    /// Whether the statistic holds for `v`, with its boundary flag.
    /// `None` when the verdict lacks the finite-q criterion.
    fn observe(self, v: &CriteriaVerdict) -> Option<(bool, bool)> {
        let b = |c: Criterion| v.boundary_flags.contains(&c);
        let (ppt, red, maj, qinf) = (
            (v.ppt, b(Criterion::Ppt)),
            (v.reduction, b(Criterion::Reduction)),
            (v.majorization, b(Criterion::Majorization)),
            (v.q_entropic_inf, b(Criterion::QEntropicInf)),
        );
        let agree = |x: (bool, bool), y: (bool, bool)| (x.0 == y.0, x.1 || y.1);
        Some(match self {
            Statistic::Ppt => ppt,
            Statistic::Reduction => red,
            Statistic::Majorization => maj,
            Statistic::QEntropicInf => qinf,
            Statistic::QEntropicFinite => (v.q_entropic_finite?, b(Criterion::QEntropicFinite)),
            Statistic::RankSeparable => (v.rank_separable, b(Criterion::RankSeparable)),
            Statistic::AgreePptReduction => agree(ppt, red),
            Statistic::AgreePptMajorization => agree(ppt, maj),
            Statistic::AgreePptQent => agree(ppt, qinf),
            Statistic::AgreeReductionMajorization => agree(red, maj),
            Statistic::AgreeReductionQent => agree(red, qinf),
            Statistic::AgreeMajorizationQent => agree(maj, qinf),
            Statistic::AgreeAll => (
                ppt.0 == red.0 && red.0 == maj.0 && maj.0 == qinf.0,
                ppt.1 || red.1 || maj.1 || qinf.1,
            ),
            Statistic::ViolateReduction | Statistic::Distillable => (!red.0, red.1),
            Statistic::ViolateMajorization => (!maj.0, maj.1),
        })
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_owned()))
    }
}

/// Accumulated counts for one dimension pair.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SurveyRecord {
    pub dims: SystemDims,
    pub samples: u64,
    pub counts: BTreeMap<Statistic, u64>,
    pub boundary_counts: BTreeMap<Statistic, u64>,
    /// Samples where PPT and reduction disagree on a `2 × N` system.
    #[serde(default)]
    pub anomalies: Vec<SampleCoord>,
}

impl SurveyRecord {
    pub fn empty(dims: SystemDims, labels: impl IntoIterator<Item = Statistic>) -> Self {
        let counts: BTreeMap<_, _> = labels.into_iter().map(|s| (s, 0)).collect();
        SurveyRecord {
            dims,
            samples: 0,
            boundary_counts: counts.clone(),
            counts,
            anomalies: Vec::new(),
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = Statistic> + '_ {
        self.counts.keys().copied()
    }

    pub fn count(&self, label: Statistic) -> u64 {
        self.counts.get(&label).copied().unwrap_or(0)
    }

    pub fn boundary_count(&self, label: Statistic) -> u64 {
        self.boundary_counts.get(&label).copied().unwrap_or(0)
    }

    /// `count / samples`; NaN for an empty record.
    pub fn probability(&self, label: Statistic) -> f64 {
        self.count(label) as f64 / self.samples as f64
    }

    /// Binomial standard error `sqrt(p (1 - p) / samples)`.
    pub fn std_error(&self, label: Statistic) -> f64 {
        let p = self.probability(label);
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }

    pub fn probabilities(&self) -> BTreeMap<Statistic, f64> {
        self.labels().map(|l| (l, self.probability(l))).collect()
    }

    pub fn std_errors(&self) -> BTreeMap<Statistic, f64> {
        self.labels().map(|l| (l, self.std_error(l))).collect()
    }

    pub fn tally(&mut self, verdict: &CriteriaVerdict, coord: SampleCoord) {
        self.samples += 1;
        for (label, count) in self.counts.iter_mut() {
            if let Some((holds, boundary)) = label.observe(verdict) {
                *count += holds as u64;
                if boundary {
                    *self.boundary_counts.entry(*label).or_insert(0) += 1;
                }
            }
        }
        let two_by_n = self.dims.n_a == 2 || self.dims.n_b == 2;
        if two_by_n && verdict.ppt != verdict.reduction && self.anomalies.len() < MAX_ANOMALIES {
            self.anomalies.push(coord);
        }
    }
}

/// Sums counters of records for the same dimensions. Associative and
/// commutative; anomaly lists are merged in sample order.
pub fn merge_records(partials: &[SurveyRecord]) -> Result<SurveyRecord> {
    let (first, rest) = partials.split_first().ok_or(Error::EmptyRecords)?;
    let mut merged = first.clone();
    for part in rest {
        if part.dims != merged.dims {
            return Err(Error::DimsMismatch {
                left: (merged.dims.n_a, merged.dims.n_b),
                right: (part.dims.n_a, part.dims.n_b),
            });
        }
        merged.samples += part.samples;
        for (label, c) in &part.counts {
            *merged.counts.entry(*label).or_insert(0) += c;
        }
        for (label, c) in &part.boundary_counts {
            *merged.boundary_counts.entry(*label).or_insert(0) += c;
        }
        merged.anomalies.extend_from_slice(&part.anomalies);
    }
    merged.anomalies.sort_by_key(|c| (c.stream_id, c.index));
    merged.anomalies.dedup();
    merged.anomalies.truncate(MAX_ANOMALIES);
    Ok(merged)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SurveyConfig {
    pub n1: usize,
    pub n2_range: RangeInclusive<usize>,
    pub samples_per_dim: u64,
    pub seed: u64,
    pub workers: usize,
    pub q_finite: Option<f64>,
    pub crit_tol: f64,
}

impl SurveyConfig {
    /// Defaults: `N2 ∈ 2..=8` for `n1 = 2`, `2..=7` for `n1 = 3`; 10^5 samples.
    pub fn new(n1: usize) -> Self {
        let hi = if n1 == 3 { 7 } else { 8 };
        SurveyConfig {
            n1,
            n2_range: 2..=hi,
            samples_per_dim: 100_000,
            seed: 0,
            workers: 1,
            q_finite: None,
            crit_tol: Tolerances::default().crit_tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        if !matches!(self.n1, 2 | 3) {
            return bad(format!("n1 must be 2 or 3, got {}", self.n1));
        }
        if *self.n2_range.start() < 2 {
            return bad(format!("n2 must be at least 2, got {}", self.n2_range.start()));
        }
        if self.n2_range.is_empty() {
            return bad(format!(
                "empty n2 range {}..={}",
                self.n2_range.start(),
                self.n2_range.end()
            ));
        }
        if self.samples_per_dim == 0 {
            return bad("samples must be positive".into());
        }
        if self.workers == 0 {
            return bad("workers must be positive".into());
        }
        if !(self.crit_tol >= 0.0 && self.crit_tol.is_finite()) {
            return bad(format!("tolerance must be finite and >= 0, got {}", self.crit_tol));
        }
        if let Some(q) = self.q_finite {
            validate_q(q)?;
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.samples_per_dim < MIN_MEANINGFUL_SAMPLES {
            out.push(format!(
                "{} samples per dimension is below {MIN_MEANINGFUL_SAMPLES}; standard errors are unreliable",
                self.samples_per_dim
            ));
        }
        out
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances::with_crit_tol(self.crit_tol)
    }

    pub fn dims(&self) -> impl Iterator<Item = SystemDims> + '_ {
        self.n2_range.clone().map(|n2| SystemDims { n_a: self.n1, n_b: n2 })
    }
}

/// Key of the RNG streams used for `dims` under a master seed (SplitMix64 finalizer).
pub fn dims_seed(master: u64, dims: SystemDims) -> u64 {
    let mut z = master ^ ((dims.n_a as u64) << 32 | dims.n_b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Regenerates the state behind a replay coordinate.
pub fn replay_sample(master_seed: u64, coord: SampleCoord) -> Result<DensityMatrix> {
    let dims = SystemDims::new(coord.n_a, coord.n_b)?;
    let mut rng = random_stream(dims_seed(master_seed, dims), coord.stream_id);
    let mut state = sample_state(dims, &mut rng)?;
    for _ in 0..coord.index {
        state = sample_state(dims, &mut rng)?;
    }
    Ok(state)
}

/// Evaluates samples `range` (global indices) of one dimension pair.
pub fn run_range(
    dims: SystemDims,
    master_seed: u64,
    range: Range<u64>,
    q_finite: Option<f64>,
    tol: &Tolerances,
) -> Result<SurveyRecord> {
    let key = dims_seed(master_seed, dims);
    let mut record = SurveyRecord::empty(dims, Statistic::tallied(q_finite.is_some()));
    for i in range {
        let coord = SampleCoord {
            n_a: dims.n_a,
            n_b: dims.n_b,
            stream_id: i,
            index: 0,
        };
        let wrap = |e: Error| Error::Sample {
            coord,
            source: Box::new(e),
        };
        let mut rng = random_stream(key, i);
        let rho = sample_state(dims, &mut rng).map_err(wrap)?;
        let verdict = evaluate_all_with(&rho, q_finite, tol).map_err(wrap)?;
        record.tally(&verdict, coord);
    }
    Ok(record)
}

/// Contiguous split of `0..samples` into `workers` blocks.
pub fn worker_blocks(samples: u64, workers: usize) -> Vec<Range<u64>> {
    let w = workers.max(1) as u64;
    (0..w).map(|k| (samples * k / w)..(samples * (k + 1) / w)).collect()
}

/// Surveys one dimension pair on `workers` threads; results do not depend
/// on `workers`.
pub fn run_dims(
    dims: SystemDims,
    samples: u64,
    master_seed: u64,
    workers: usize,
    q_finite: Option<f64>,
    tol: &Tolerances,
) -> Result<SurveyRecord> {
    let blocks = worker_blocks(samples, workers);
    let partials: Vec<Result<SurveyRecord>> = if blocks.len() == 1 {
        vec![run_range(dims, master_seed, blocks[0].clone(), q_finite, tol)]
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = blocks
                .into_iter()
                .map(|r| s.spawn(move || run_range(dims, master_seed, r, q_finite, tol)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("survey worker panicked"))
                .collect()
        })
    };
    let partials = partials.into_iter().collect::<Result<Vec<_>>>()?;
    merge_records(&partials)
}

/// One record per `N2` in the configured range, in increasing order.
pub fn run_survey(cfg: &SurveyConfig) -> Result<Vec<SurveyRecord>> {
    run_survey_with_progress(cfg, |_, _| {})
}

/// As [`run_survey`], calling `progress(record, seconds)` after each dimension.
pub fn run_survey_with_progress(
    cfg: &SurveyConfig,
    mut progress: impl FnMut(&SurveyRecord, f64),
) -> Result<Vec<SurveyRecord>> {
    cfg.validate()?;
    let tol = cfg.tolerances();
    cfg.dims()
        .map(|dims| {
            let start = std::time::Instant::now();
            let rec = run_dims(dims, cfg.samples_per_dim, cfg.seed, cfg.workers, cfg.q_finite, &tol)?;
            progress(&rec, start.elapsed().as_secs_f64());
            Ok(rec)
        })
        .collect()
}
