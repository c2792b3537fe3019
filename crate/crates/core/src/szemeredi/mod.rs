//! Random-difference Szemerédi experiments over `F_p^n`.
//!
//! * [`sampling`]: seeded vectors and independence of their Veronese images.
//! * [`blocker`]: the symmetric tensor vanishing nowhere on `φ_{k-1}(S)`, its
//!   zero set, and progression scans.
//! * [`tail`]: the two links bounding `Pr_x[φ_d(x) ∈ W^⊥]`.
//!
//! Every trial draws from its own stream of the seeded generator, so reports
//! do not depend on the number of worker threads.

pub mod blocker;
pub mod sampling;
pub mod tail;

pub use blocker::{
    ap_free_set, chevalley_warning_check, construct_blocker, verify_no_ap, ApCheck, ApFreeSet, Blocker, CwReport,
    ScanMode,
};
pub use sampling::{sample_points, trial_rng, veronese_independent, GENERATOR};
pub use tail::{tail_bound_check, TailMode, TailReport};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{symmetric_dim, PrimeField};
use crate::error::{Error, Result};
use sampling::sample_points_from;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub p: u32,
    /// Progression length; tensors have order `d = k - 1`.
    pub k: usize,
    pub n: usize,
    /// Number of random differences `s`.
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    /// The constant `C` in `m - C·(log_p n)^2·n^{k-2}`.
    pub c_knob: f64,
}

impl SimParams {
    pub fn d(&self) -> usize {
        self.k - 1
    }

    /// `m = C(n+d-1, d)`.
    pub fn m(&self) -> usize {
        symmetric_dim(self.n, self.d())
    }

    fn validate(&self) -> Result<PrimeField> {
        let field = PrimeField::new(self.p)?;
        if self.k < 2 {
            return Err(Error::Domain(format!("k = {} gives tensors of order < 1", self.k)));
        }
        if (self.p as usize) < self.k {
            return Err(Error::Unsupported(format!("need p ≥ k, got p = {}, k = {}", self.p, self.k)));
        }
        if self.n == 0 || self.trials == 0 {
            return Err(Error::Domain("n and trials must be positive".into()));
        }
        Ok(field)
    }

    /// `min(samples, ⌊m - C·(log_p n)^2·n^{k-2}⌋)`, floored at 0.
    pub fn demo_sample_count(&self) -> usize {
        let m = self.m() as f64;
        let log = (self.n as f64).ln() / (self.p as f64).ln();
        let cap = m - self.c_knob * log * log * (self.n as f64).powi(self.k as i32 - 2);
        (cap.floor().max(0.0) as usize).min(self.samples)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub independent: bool,
    pub blocker_found: Option<bool>,
    pub ap_free: Option<bool>,
    pub verification: Option<String>,
    pub set_size: Option<usize>,
    pub density: Option<f64>,
    pub cw: Option<CwReport>,
    pub counterexample: Option<(Vec<u32>, Vec<u32>)>,
}

impl TrialRecord {
    fn bare(trial: usize, independent: bool) -> Self {
        TrialRecord {
            trial,
            independent,
            blocker_found: None,
            ap_free: None,
            verification: None,
            set_size: None,
            density: None,
            cw: None,
            counterexample: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub independence_rate: f64,
    /// Trials whose pipeline produced a verified AP-free set, over all trials.
    pub success_rate: Option<f64>,
    pub mean_density: Option<f64>,
    pub min_density: Option<f64>,
    /// `(1 - 2/m^2)^s`.
    pub independence_floor: Option<f64>,
    pub all_cw_passed: Option<bool>,
    pub all_ap_free: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub experiment: String,
    pub params: SimParams,
    pub generator: String,
    pub m: usize,
    /// Differences actually drawn per trial.
    pub s: usize,
    pub trials: Vec<TrialRecord>,
    pub aggregate: Aggregate,
    /// Excluded from reproducibility comparisons.
    pub wall_clock_secs: f64,
}

impl SimReport {
    /// The report with timing zeroed, for byte-level comparisons.
    pub fn without_timing(&self) -> SimReport {
        SimReport {
            wall_clock_secs: 0.0,
            ..self.clone()
        }
    }
}

fn run_trials<F>(params: &SimParams, f: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(usize) -> Result<TrialRecord> + Sync + Send,
{
    (0..params.trials).into_par_iter().map(f).collect()
}

fn rate(trials: &[TrialRecord], pred: impl Fn(&TrialRecord) -> bool) -> f64 {
    trials.iter().filter(|t| pred(t)).count() as f64 / trials.len() as f64
}

/// Repeated sampling of `s = params.samples` points and independence of
/// their Veronese images.
pub fn independence_experiment(params: &SimParams) -> Result<SimReport> {
    let start = Instant::now();
    let field = params.validate()?;
    let (n, d, s) = (params.n, params.d(), params.samples);
    let m = params.m();
    let trials = run_trials(params, |trial| {
        let pts = sample_points_from(&mut trial_rng(params.seed, trial as u64), n, params.p, s);
        Ok(TrialRecord::bare(trial, veronese_independent(field, &pts, d)?))
    })?;
    let floor = (1.0 - 2.0 / (m as f64 * m as f64)).powi(s as i32);
    Ok(SimReport {
        experiment: "independence".into(),
        params: params.clone(),
        generator: GENERATOR.into(),
        m,
        s,
        aggregate: Aggregate {
            independence_rate: rate(&trials, |t| t.independent),
            success_rate: None,
            mean_density: None,
            min_density: None,
            independence_floor: Some(floor),
            all_cw_passed: None,
            all_ap_free: None,
        },
        trials,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

/// One full trial: sample, test independence, build the blocker and its zero
/// set, scan for progressions, and check Chevalley–Warning divisibility.
pub fn blocker_trial(field: PrimeField, params: &SimParams, s: usize, trial: usize, mode: ScanMode) -> Result<TrialRecord> {
    let (n, k, p) = (params.n, params.k, params.p);
    let mut rng = trial_rng(params.seed, trial as u64);
    let pts = sample_points_from(&mut rng, n, p, s);
    let independent = veronese_independent(field, &pts, k - 1)?;
    let mut rec = TrialRecord::bare(trial, independent);
    if !independent {
        return Ok(rec);
    }
    let blocker = construct_blocker(field, n, &pts, k)?;
    rec.blocker_found = Some(true);
    let set = ap_free_set(blocker);
    let check = verify_no_ap(&|x| set.contains(x), field, n, &pts, k, mode, params.seed ^ trial as u64)?;
    rec.ap_free = Some(check.ap_free);
    rec.verification = Some(check.mode);
    rec.counterexample = check.counterexample;
    if let Some(size) = set.size() {
        let cw = chevalley_warning_check(size, k, n, p);
        rec.set_size = Some(size);
        rec.density = Some(cw.density);
        rec.cw = Some(cw);
    }
    Ok(rec)
}

fn blocker_report(experiment: &str, params: &SimParams, s: usize, trials: Vec<TrialRecord>, start: Instant) -> SimReport {
    let densities: Vec<f64> = trials.iter().filter_map(|t| t.density).collect();
    let cw: Vec<bool> = trials
        .iter()
        .filter_map(|t| t.cw.as_ref().and_then(|c| c.passed))
        .collect();
    let ap: Vec<bool> = trials.iter().filter_map(|t| t.ap_free).collect();
    SimReport {
        experiment: experiment.into(),
        params: params.clone(),
        generator: GENERATOR.into(),
        m: params.m(),
        s,
        aggregate: Aggregate {
            independence_rate: rate(&trials, |t| t.independent),
            success_rate: Some(rate(&trials, |t| t.ap_free == Some(true))),
            mean_density: (!densities.is_empty()).then(|| densities.iter().sum::<f64>() / densities.len() as f64),
            min_density: densities.iter().copied().reduce(f64::min),
            independence_floor: None,
            all_cw_passed: (!cw.is_empty()).then(|| cw.iter().all(|&b| b)),
            all_ap_free: (!ap.is_empty()).then(|| ap.iter().all(|&b| b)),
        },
        trials,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    }
}

/// Blocker pipeline with `s = params.samples` differences per trial.
pub fn blocker_experiment(params: &SimParams, mode: ScanMode) -> Result<SimReport> {
    let start = Instant::now();
    let field = params.validate()?;
    if params.k < 3 {
        return Err(Error::Domain("progressions need k ≥ 3".into()));
    }
    let s = params.samples;
    let trials = run_trials(params, |trial| blocker_trial(field, params, s, trial, mode))?;
    Ok(blocker_report("blocker", params, s, trials, start))
}

/// Blocker pipeline with `s = min(samples, ⌊m - C·(log_p n)^2·n^{k-2}⌋)`.
pub fn randomized_szemeredi_demo(params: &SimParams) -> Result<SimReport> {
    let start = Instant::now();
    let field = params.validate()?;
    if params.k < 3 {
        return Err(Error::Domain("progressions need k ≥ 3".into()));
    }
    let s = params.demo_sample_count();
    let trials = run_trials(params, |trial| blocker_trial(field, params, s, trial, ScanMode::Auto))?;
    Ok(blocker_report("szemeredi-demo", params, s, trials, start))
}
