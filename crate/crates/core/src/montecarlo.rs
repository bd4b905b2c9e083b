//! Reproducible Monte Carlo BLER estimation.
//!
//! Every trial draws its message, fading and noise from its own stream,
//! seeded by hashing `(master_seed, trial_index)`. Trials run in parallel on
//! the current rayon pool in fixed-size batches, and the stopping rule is
//! applied by scanning each batch in trial order, so `(errors, trials)` is
//! the same for any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{bler_upper_bound, error_floor, snr_threshold, QuadratureScheme, DEFAULT_PRECISION};
use crate::channel::{sigma_from_snr, transmit, ChannelModel, NoiseSpec};
use crate::codec::fmix64;
use crate::codec::{CodeParams, HashId, Message, MlDecoder, DEFAULT_BIT_CAP};
use crate::error::{Result, SpinalError};

/// Trials evaluated per parallel batch.
pub const BATCH: u64 = 1024;

const STREAM_TAG: u64 = 0x4d43_5f53_5452_4d21; // "MC_STRM!"

/// z-score of the two-sided 95% interval.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopRule {
    /// Run exactly this many trials.
    Fixed { trials: u64 },
    /// Stop at the trial that produces the `errors`-th block error, or after
    /// `max_trials`, whichever comes first.
    TargetErrors { errors: u64, max_trials: u64 },
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule::TargetErrors {
            errors: 200,
            max_trials: 1_000_000,
        }
    }
}

impl StopRule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StopRule::Fixed { trials: 0 } => Err(SpinalError::param("trials", "must be at least 1")),
            StopRule::TargetErrors { errors: 0, .. } => Err(SpinalError::param("target_errors", "must be at least 1")),
            StopRule::TargetErrors { max_trials: 0, .. } => {
                Err(SpinalError::param("trials", "trial cap must be at least 1"))
            }
            _ => Ok(()),
        }
    }

    fn cap(&self) -> u64 {
        match *self {
            StopRule::Fixed { trials } => trials,
            StopRule::TargetErrors { max_trials, .. } => max_trials,
        }
    }

    fn target(&self) -> Option<u64> {
        match *self {
            StopRule::Fixed { .. } => None,
            StopRule::TargetErrors { errors, .. } => Some(errors),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub params: CodeParams,
    pub model: ChannelModel,
    pub gamma_db: f64,
    pub stop: StopRule,
    pub master_seed: u64,
    #[serde(default = "default_bit_cap")]
    pub bit_cap: usize,
}

fn default_bit_cap() -> usize {
    DEFAULT_BIT_CAP
}

impl TrialPlan {
    pub fn new(params: CodeParams, model: ChannelModel, gamma_db: f64, stop: StopRule, master_seed: u64) -> Self {
        TrialPlan {
            params,
            model,
            gamma_db,
            stop,
            master_seed,
            bit_cap: DEFAULT_BIT_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlerEstimate {
    pub errors: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BlerEstimate {
    pub fn new(errors: u64, trials: u64) -> Result<Self> {
        if trials == 0 {
            return Err(SpinalError::param("trials", "cannot estimate from zero trials"));
        }
        let (ci_low, ci_high) = wilson_interval(errors, trials);
        Ok(BlerEstimate {
            errors,
            trials,
            p_hat: errors as f64 / trials as f64,
            ci_low,
            ci_high,
        })
    }

    pub fn overlaps(&self, other: &BlerEstimate) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

/// 95% Wilson score interval for `errors` successes in `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 {
        0.0
    } else {
        (centre - half).clamp(0.0, p)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (centre + half).clamp(p, 1.0)
    };
    (lo, hi)
}

/// Independent random stream for one trial.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(fmix64(fmix64(master_seed ^ STREAM_TAG) ^ trial_index))
}

/// Runs an arbitrary trial function under a stopping rule. `trial` receives
/// the trial index and that trial's stream and reports whether it failed.
pub fn estimate_with<F>(stop: StopRule, master_seed: u64, trial: F) -> Result<BlerEstimate>
where
    F: Fn(u64, &mut ChaCha8Rng) -> Result<bool> + Sync,
{
    stop.validate()?;
    let cap = stop.cap();
    let target = stop.target();
    let mut errors = 0u64;
    let mut trials = 0u64;
    while trials < cap {
        let end = (trials + BATCH).min(cap);
        let outcomes = (trials..end)
            .into_par_iter()
            .map(|idx| trial(idx, &mut trial_rng(master_seed, idx)))
            .collect::<Result<Vec<bool>>>()?;
        for failed in outcomes {
            trials += 1;
            errors += failed as u64;
            if target.is_some_and(|t| errors >= t) {
                return BlerEstimate::new(errors, trials);
            }
        }
    }
    BlerEstimate::new(errors, trials)
}

/// A plan with its decoder and noise level prepared once.
#[derive(Clone, Debug)]
pub struct Simulator {
    plan: TrialPlan,
    decoder: MlDecoder,
    noise: NoiseSpec,
}

impl Simulator {
    pub fn new(plan: TrialPlan) -> Result<Self> {
        plan.model.validate()?;
        plan.stop.validate()?;
        if plan.params.n() > plan.bit_cap {
            return Err(SpinalError::BudgetExceeded {
                n: plan.params.n(),
                cap: plan.bit_cap,
            });
        }
        let noise = sigma_from_snr(plan.gamma_db, plan.params.c(), plan.params.d_min())?;
        let decoder = MlDecoder::new(plan.params)?.with_bit_cap(plan.bit_cap);
        Ok(Simulator { plan, decoder, noise })
    }

    pub fn noise(&self) -> NoiseSpec {
        self.noise
    }

    /// Encode a uniformly random message, send it through the channel and
    /// decode. Returns `true` on a block error.
    pub fn run_trial(&self, trial_index: u64) -> Result<bool> {
        self.trial_with(&mut trial_rng(self.plan.master_seed, trial_index))
    }

    fn trial_with(&self, rng: &mut ChaCha8Rng) -> Result<bool> {
        let message = Message::random(self.plan.params.n(), rng);
        let grid = self.decoder.code().encode(&message)?;
        let obs = transmit(&grid, &self.plan.model, &self.noise, rng)?;
        Ok(self.decoder.decode(&obs)?.message != message)
    }

    pub fn estimate(&self) -> Result<BlerEstimate> {
        estimate_with(self.plan.stop, self.plan.master_seed, |_, rng| self.trial_with(rng))
    }
}

pub fn run_trial(plan: &TrialPlan, trial_index: u64) -> Result<bool> {
    Simulator::new(plan.clone())?.run_trial(trial_index)
}

pub fn estimate_bler(plan: &TrialPlan) -> Result<BlerEstimate> {
    Simulator::new(plan.clone())?.estimate()
}

/// One SNR point of a sweep: simulation joined with the analysis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub gamma_db: f64,
    pub sigma2: f64,
    pub estimate: BlerEstimate,
    pub bound: f64,
    pub floor: f64,
    pub threshold_db: f64,
    pub master_seed: u64,
    pub hash_id: HashId,
}

/// Flat CSV row. Field order is the file's column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma_db: f64,
    pub sigma2: f64,
    pub trials: u64,
    pub errors: u64,
    pub bler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub bound: f64,
    pub floor: f64,
    pub threshold_db: f64,
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "gamma_db",
    "sigma2",
    "trials",
    "errors",
    "bler",
    "ci_low",
    "ci_high",
    "bound",
    "floor",
    "threshold_db",
];

impl From<&SweepRecord> for SweepRow {
    fn from(r: &SweepRecord) -> Self {
        SweepRow {
            gamma_db: r.gamma_db,
            sigma2: r.sigma2,
            trials: r.estimate.trials,
            errors: r.estimate.errors,
            bler: r.estimate.p_hat,
            ci_low: r.estimate.ci_low,
            ci_high: r.estimate.ci_high,
            bound: r.bound,
            floor: r.floor,
            threshold_db: r.threshold_db,
        }
    }
}

/// Checks that an SNR grid is non-empty, free of NaN and strictly ascending.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(SpinalError::param("gamma_grid", "must contain at least one SNR"));
    }
    if grid.iter().any(|g| g.is_nan() || *g == f64::NEG_INFINITY) {
        return Err(SpinalError::param("gamma_grid", "values must be numbers above -inf"));
    }
    if grid
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(SpinalError::param("gamma_grid", "values must be strictly ascending"));
    }
    Ok(())
}

/// A grid of SNR points simulated for one code and channel, joined with
/// the analysis for the same code.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPlan {
    pub params: CodeParams,
    pub model: ChannelModel,
    pub gamma_grid: Vec<f64>,
    pub stop: StopRule,
    pub master_seed: u64,
    pub bit_cap: usize,
    pub scheme: QuadratureScheme,
    /// Precision constant of the SNR threshold.
    pub x: f64,
}

impl SweepPlan {
    /// A plan with the default stop rule, bit cap, quadrature and threshold
    /// precision.
    pub fn new(params: CodeParams, model: ChannelModel, gamma_grid: Vec<f64>, master_seed: u64) -> Self {
        SweepPlan {
            params,
            model,
            gamma_grid,
            stop: StopRule::default(),
            master_seed,
            bit_cap: DEFAULT_BIT_CAP,
            scheme: QuadratureScheme::default(),
            x: DEFAULT_PRECISION,
        }
    }

    pub fn with_stop(mut self, stop: StopRule) -> Self {
        self.stop = stop;
        self
    }
}

/// Simulates every grid point with the same master seed and joins the
/// bound, floor and threshold for the same code.
pub fn sweep(plan: &SweepPlan) -> Result<Vec<SweepRecord>> {
    let params = &plan.params;
    validate_grid(&plan.gamma_grid)?;
    plan.stop.validate()?;
    let floor = error_floor(params).p_ef;
    let threshold_db = snr_threshold(&plan.model, params.c(), plan.x)?.gamma_th_db;
    plan.gamma_grid
        .iter()
        .map(|&gamma_db| {
            let sim = Simulator::new(TrialPlan {
                bit_cap: plan.bit_cap,
                ..TrialPlan::new(*params, plan.model, gamma_db, plan.stop, plan.master_seed)
            })?;
            let sigma2 = sim.noise().sigma2;
            let estimate = sim.estimate()?;
            let bound = bler_upper_bound(params, sigma2, &plan.model, &plan.scheme)?.p_e_upper;
            Ok(SweepRecord {
                gamma_db,
                sigma2,
                estimate,
                bound,
                floor,
                threshold_db,
                master_seed: plan.master_seed,
                hash_id: params.hash(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(100, 100);
        assert_eq!(hi, 1.0);
        assert!(lo > 0.95);
        let e = BlerEstimate::new(30, 1000).unwrap();
        assert!(e.ci_low < 0.03 && 0.03 < e.ci_high);
        assert!(BlerEstimate::new(0, 0).is_err());
    }

    #[test]
    fn bernoulli_stub_concentrates() {
        let est = estimate_with(StopRule::Fixed { trials: 100_000 }, 7, |_, rng| {
            Ok(rng.random::<f64>() < 0.1)
        })
        .unwrap();
        assert_eq!(est.trials, 100_000);
        assert!((0.094..=0.106).contains(&est.p_hat), "{}", est.p_hat);
    }

    #[test]
    fn stops_on_target_errors() {
        let stop = StopRule::TargetErrors {
            errors: 100,
            max_trials: 1_000_000,
        };
        let est = estimate_with(stop, 11, |_, rng| Ok(rng.random::<f64>() < 0.2)).unwrap();
        assert!((100..100 + BATCH).contains(&est.errors));
        assert!(est.trials < 10_000);
    }

    #[test]
    fn cap_limits_trials() {
        let stop = StopRule::TargetErrors {
            errors: 10,
            max_trials: 50,
        };
        let est = estimate_with(stop, 1, |_, _| Ok(false)).unwrap();
        assert_eq!((est.errors, est.trials), (0, 50));
        assert_eq!(est.ci_low, 0.0);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(estimate_with(StopRule::Fixed { trials: 0 }, 0, |_, _| Ok(true)).is_err());
        assert!(StopRule::TargetErrors {
            errors: 0,
            max_trials: 5
        }
        .validate()
        .is_err());
    }

    #[test]
    fn trial_is_deterministic() {
        let p = CodeParams::new(8, 4, 4, 1).unwrap();
        let plan = TrialPlan::new(p, ChannelModel::Rayleigh, 5.0, StopRule::Fixed { trials: 1 }, 42);
        let sim = Simulator::new(plan).unwrap();
        for idx in 0..50 {
            assert_eq!(sim.run_trial(idx).unwrap(), sim.run_trial(idx).unwrap());
        }
    }

    #[test]
    fn grid_validation_names_field() {
        for bad in [vec![], vec![5.0, 1.0], vec![1.0, 1.0], vec![f64::NAN]] {
            let err = validate_grid(&bad).unwrap_err();
            assert!(err.to_string().contains("gamma_grid"), "{err}");
        }
        validate_grid(&[0.0, 10.0, f64::INFINITY]).unwrap();
    }

    #[test]
    fn budget_exceeded_propagates() {
        let p = CodeParams::new(32, 4, 4, 1).unwrap();
        let plan = TrialPlan::new(p, ChannelModel::Awgn, 10.0, StopRule::Fixed { trials: 1 }, 0);
        assert!(matches!(run_trial(&plan, 0), Err(SpinalError::BudgetExceeded { .. })));
    }
}
