//! The three-step amplification attack against a multiphoton qubit source.
//!
//! 1. Split the `n0`-photon pulse into an amplification part and an observation part.
//! 2. Clone the first part through an `L`-level cascade, measure the Stokes totals of
//!    the clones and normalize them into a polarization axis.
//! 3. Project the second part onto that axis and read off the parity, which for a
//!    generic source is the key bit.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloning::{closed_form_weights, plan_amplification, Amplification, CloneMachine, MixedQubitState};
use crate::error::{Error, Result};
use crate::measurement::{observe_parity, simulate_stokes_measurement, snr_index, MeasurementMode};
use crate::qubit::{aux_info, parity, AuxiliaryInfo, Parity, Qubit};
use crate::rng::substream;

/// Targets with `|⟨S₂⟩|` at or below this are excluded from uniform sampling.
pub const TARGET_BAND: f64 = 1e-3;

/// Where Eve's axis comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuxSource {
    /// Cascade, measure and estimate.
    #[default]
    Amplified,
    /// The true axis is injected; step 2 is skipped.
    Exact,
    /// A uniformly random axis; carries no information.
    Random,
}

impl AuxSource {
    pub fn as_str(self) -> &'static str {
        match self {
            AuxSource::Amplified => "amplified",
            AuxSource::Exact => "exact",
            AuxSource::Random => "random",
        }
    }
}

impl fmt::Display for AuxSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AuxSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplified" => Ok(AuxSource::Amplified),
            "exact" => Ok(AuxSource::Exact),
            "random" => Ok(AuxSource::Random),
            other => Err(Error::InvalidConfig(format!("unknown aux source '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub machine: CloneMachine,
    pub levels: u32,
    pub source_photons: u64,
    /// Fraction of photons sent to amplification; the rest go to parity observation.
    pub split: f64,
    pub mode: MeasurementMode,
    pub trials: u64,
    pub seed: u64,
    pub aux_source: AuxSource,
}

impl AttackConfig {
    pub fn new(machine: CloneMachine, levels: u32, source_photons: u64, split: f64) -> Self {
        AttackConfig {
            machine,
            levels,
            source_photons,
            split,
            mode: MeasurementMode::Idealized,
            trials: 1000,
            seed: 0,
            aux_source: AuxSource::Amplified,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.split > 0.0 && self.split < 1.0) {
            return bad(format!("split {} must lie in (0, 1)", self.split));
        }
        if self.source_photons < 2 {
            return bad(format!("source_photons {} must be at least 2", self.source_photons));
        }
        let (amp, obs) = self.photon_split();
        if amp < 1 || obs < 1 {
            return bad(format!(
                "split {} of {} photons leaves {amp} for amplification and {obs} for observation",
                self.split, self.source_photons
            ));
        }
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        Ok(())
    }

    /// The amplification arm's grouping and its quantum-noise S/N,
    /// `√(groups·p)·index^{L/2}`.
    pub fn amplification(&self) -> Result<(Amplification, f64)> {
        let m = &self.machine;
        let amp = plan_amplification(m, self.levels, self.photon_split().0)?;
        let snr = ((amp.groups * m.p()) as f64).sqrt() * snr_index(m).powf(self.levels as f64 / 2.0);
        Ok((amp, snr))
    }

    /// `(⌊n0·split⌋, n0 − ⌊n0·split⌋)`.
    pub fn photon_split(&self) -> (u64, u64) {
        let amp = ((self.source_photons as f64) * self.split).floor() as u64;
        let amp = amp.min(self.source_photons);
        (amp, self.source_photons - amp)
    }
}

/// Why a trial ended without a key guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialFailure {
    InsufficientPhotons,
    DegenerateDirection,
    /// The parity vote tied or landed on the degenerate circle.
    ParityUndefined,
}

impl TrialFailure {
    fn from_error(e: &Error) -> Option<TrialFailure> {
        match e {
            Error::InsufficientPhotons { .. } => Some(TrialFailure::InsufficientPhotons),
            Error::DegenerateDirection { .. } => Some(TrialFailure::DegenerateDirection),
            Error::ParityUndefined(_) => Some(TrialFailure::ParityUndefined),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub aux_estimate: Option<AuxiliaryInfo>,
    pub angular_error: Option<f64>,
    pub parity_guess: Option<Parity>,
    pub key_guess: Option<u8>,
    pub true_key: u8,
    pub success: bool,
    pub failure: Option<TrialFailure>,
    pub clone_count: u64,
    pub snr_analytic: f64,
}

impl AttackOutcome {
    fn failed(true_key: u8, failure: TrialFailure, clone_count: u64, snr: f64) -> Self {
        AttackOutcome {
            aux_estimate: None,
            angular_error: None,
            parity_guess: None,
            key_guess: None,
            true_key,
            success: false,
            failure: Some(failure),
            clone_count,
            snr_analytic: snr,
        }
    }
}

/// One attack on one target photon state.
///
/// Returns `Err(ParityUndefined)` only when the target itself has no parity; such
/// trials are rejected rather than scored. Every other failure yields an outcome with
/// `success = false`.
pub fn run_attack_trial<R: Rng + ?Sized>(target: &Qubit, cfg: &AttackConfig, rng: &mut R) -> Result<AttackOutcome> {
    cfg.validate()?;
    let true_key = parity(target)?.bit();
    let (_, n_obs) = cfg.photon_split();
    let m = &cfg.machine;

    let (aux, angular_error, clone_count, snr) = match cfg.aux_source {
        AuxSource::Exact => (aux_info(target), Some(0.0), 0, f64::INFINITY),
        AuxSource::Random => {
            let aux = aux_info(&Qubit::random(rng));
            let err = aux.projective_distance(&aux_info(target));
            (aux, Some(err), 0, 0.0)
        }
        AuxSource::Amplified => {
            let (amp, snr) = match cfg.amplification() {
                Ok(a) => a,
                Err(e) => return Ok(AttackOutcome::failed(true_key, fail_kind(&e)?, 0, 0.0)),
            };
            let (a, b) = closed_form_weights(m, cfg.levels);
            let final_state = MixedQubitState::new(*target, a, b)?;
            match simulate_stokes_measurement(&final_state, amp.clone_count, cfg.mode, rng) {
                Ok(est) => (est.aux, est.angular_error, amp.clone_count, snr),
                Err(e) => return Ok(AttackOutcome::failed(true_key, fail_kind(&e)?, amp.clone_count, snr)),
            }
        }
    };

    let parity_guess = match observe_parity(target, &aux, n_obs, rng) {
        Ok(p) => p,
        Err(e) => {
            let mut out = AttackOutcome::failed(true_key, fail_kind(&e)?, clone_count, snr);
            out.aux_estimate = Some(aux);
            out.angular_error = angular_error;
            return Ok(out);
        }
    };
    let key_guess = parity_guess.bit();
    Ok(AttackOutcome {
        aux_estimate: Some(aux),
        angular_error,
        parity_guess: Some(parity_guess),
        key_guess: Some(key_guess),
        true_key,
        success: key_guess == true_key,
        failure: None,
        clone_count,
        snr_analytic: snr,
    })
}

fn fail_kind(e: &Error) -> Result<TrialFailure> {
    TrialFailure::from_error(e).ok_or_else(|| e.clone())
}

/// Distribution of target states for a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TargetDistribution {
    /// Uniform on the sphere, excluding the band `|⟨S₂⟩| ≤ 1e-3`.
    UniformSphere,
    Fixed(Qubit),
}

impl TargetDistribution {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Qubit {
        match self {
            TargetDistribution::Fixed(q) => *q,
            TargetDistribution::UniformSphere => loop {
                let q = Qubit::random(rng);
                if q.stokes().s2.abs() > TARGET_BAND {
                    break q;
                }
            },
        }
    }
}

/// Two-sided 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Monte Carlo success rate with its Wilson interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub trials: u64,
    pub successes: u64,
    /// Trials that ended without a key guess (counted as unsuccessful).
    pub failures: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Half-width of the 95% interval.
    pub ci95: f64,
    /// Mean projective angular error over trials that produced an axis.
    pub mean_angular_error: f64,
}

impl RateEstimate {
    pub fn from_counts(successes: u64, failures: u64, trials: u64, angle_sum: f64, angle_count: u64) -> Self {
        let (lo, hi) = wilson_interval(successes, trials);
        RateEstimate {
            trials,
            successes,
            failures,
            rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci_low: lo,
            ci_high: hi,
            ci95: (hi - lo) / 2.0,
            mean_angular_error: if angle_count == 0 { f64::NAN } else { angle_sum / angle_count as f64 },
        }
    }

    /// Intervals do not overlap and `self` is above `other`.
    pub fn clearly_above(&self, other: &RateEstimate) -> bool {
        self.ci_low > other.ci_high
    }
}

/// Runs `cfg.trials` independent trials; trial `i` uses substream `i` of `cfg.seed`.
pub fn success_rate(targets: &TargetDistribution, cfg: &AttackConfig) -> Result<RateEstimate> {
    cfg.validate()?;
    if let TargetDistribution::Fixed(q) = targets {
        parity(q)?;
    }
    let outcomes: Vec<AttackOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(cfg.seed, i);
            let target = targets.sample(&mut rng);
            run_attack_trial(&target, cfg, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(summarize(&outcomes))
}

pub fn summarize(outcomes: &[AttackOutcome]) -> RateEstimate {
    let successes = outcomes.iter().filter(|o| o.success).count() as u64;
    let failures = outcomes.iter().filter(|o| o.failure.is_some()).count() as u64;
    let angles: Vec<f64> = outcomes.iter().filter_map(|o| o.angular_error).collect();
    RateEstimate::from_counts(successes, failures, outcomes.len() as u64, angles.iter().sum(), angles.len() as u64)
}
