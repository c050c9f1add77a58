//! Y-00 mesoscopic coherent-state model and the amplification attack adapted to it.
//!
//! The alphabet is `2M` coherent states `|±, k⟩` on the `S₁`-`S₂` great circle at
//! angles `θ_k = πk/M` (Plus) and `θ_k + π` (Minus). The key bit comes from the
//! ciphering wheel: the parity XOR the parity of `k`. Eve therefore needs the basis
//! index `k` exactly, not just the axis up to noise.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attack::{AuxSource, RateEstimate, TrialFailure};
use crate::cloning::{closed_form_weights, plan_amplification, CloneMachine, MixedQubitState};
use crate::error::{Error, Result};
use crate::measurement::{sample_binomial, simulate_stokes_measurement, MeasurementMode};
use crate::qubit::{aux_info, AuxiliaryInfo, Parity, Qubit, StokesVector};
use crate::rng::{child_seed, substream};

/// Weak pulses with a larger mean photon number leave the single-photon regime.
pub const MAX_PER_PULSE_MEAN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Y00Params {
    m_levels: u64,
    alpha_sq: f64,
}

impl Y00Params {
    pub fn new(m_levels: u64, alpha_sq: f64) -> Result<Self> {
        if m_levels < 2 {
            return Err(Error::InvalidConfig(format!("M = {m_levels} must be at least 2")));
        }
        if !(alpha_sq.is_finite() && alpha_sq > 0.0) {
            return Err(Error::InvalidConfig(format!("|alpha|^2 = {alpha_sq} must be positive")));
        }
        Ok(Y00Params { m_levels, alpha_sq })
    }

    pub fn m_levels(&self) -> u64 {
        self.m_levels
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha_sq
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_sq.sqrt()
    }

    /// `θ_k = πk/M`.
    pub fn theta(&self, k: u64) -> f64 {
        PI * k as f64 / self.m_levels as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Y00State {
    pub parity: Parity,
    pub k: u64,
    pub params: Y00Params,
}

impl Y00State {
    pub fn new(parity: Parity, k: u64, params: Y00Params) -> Result<Self> {
        if k >= params.m_levels {
            return Err(Error::InvalidConfig(format!("basis index {k} >= M = {}", params.m_levels)));
        }
        Ok(Y00State { parity, k, params })
    }

    pub fn random<R: Rng + ?Sized>(params: Y00Params, rng: &mut R) -> Self {
        let parity = if rng.gen::<bool>() { Parity::Plus } else { Parity::Minus };
        Y00State { parity, k: rng.gen_range(0..params.m_levels), params }
    }

    /// Unit Stokes direction `±(cos θ_k, sin θ_k, 0)`.
    pub fn direction(&self) -> StokesVector {
        let (s, c) = self.params.theta(self.k).sin_cos();
        StokesVector::new(c, s, 0.0).scale(self.parity.sign())
    }

    /// The single-photon polarization carried by this pulse.
    pub fn photon_qubit(&self) -> Qubit {
        let shift = match self.parity {
            Parity::Plus => 0.0,
            Parity::Minus => PI,
        };
        Qubit::normalized(self.params.theta(self.k) + shift, 0.0).expect("finite angles")
    }

    pub fn key(&self) -> u8 {
        ciphering_wheel(self.parity, self.k)
    }
}

/// `CW(+, even) = 0`, `CW(−, even) = 1`, `CW(+, odd) = 1`, `CW(−, odd) = 0`.
pub fn ciphering_wheel(parity: Parity, k: u64) -> u8 {
    parity.bit() ^ (k & 1) as u8
}

/// The four wheel entries in the order (+, even), (−, even), (+, odd), (−, odd).
pub fn wheel_table() -> [u8; 4] {
    [
        ciphering_wheel(Parity::Plus, 0),
        ciphering_wheel(Parity::Minus, 0),
        ciphering_wheel(Parity::Plus, 1),
        ciphering_wheel(Parity::Minus, 1),
    ]
}

/// Stokes expectation `|α|²·direction` and the per-axis dispersion `|α|²`.
pub fn y00_stokes(s: &Y00State) -> (StokesVector, f64) {
    (s.direction().scale(s.params.alpha_sq), s.params.alpha_sq)
}

/// Whether same-parity bases `ka` and `kb` sit within one noise radius `|α|` of each
/// other.
pub fn neighboring(ka: u64, kb: u64, params: &Y00Params) -> bool {
    let a = Y00State { parity: Parity::Plus, k: ka, params: *params };
    let b = Y00State { parity: Parity::Plus, k: kb, params: *params };
    y00_stokes(&a).0.distance(&y00_stokes(&b).0) < params.alpha()
}

/// Small-angle form of [`neighboring`]: `Δk < M/(π|α|)`.
pub fn neighboring_small_angle(dk: u64, params: &Y00Params) -> bool {
    (dk as f64) < dk_threshold(params)
}

pub fn dk_threshold(params: &Y00Params) -> f64 {
    params.m_levels as f64 / (PI * params.alpha())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecurityMargin {
    /// `M > π|α|`.
    pub secure: bool,
    /// `M / (π|α|)`.
    pub ratio: f64,
}

pub fn security_margin(params: &Y00Params) -> SecurityMargin {
    let ratio = dk_threshold(params);
    SecurityMargin { secure: ratio > 1.0, ratio }
}

/// Eve's beam-splitter plan: one lossless split, then `J` weak pulses from the first arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub alpha1_sq: f64,
    pub alpha2_sq: f64,
    pub j_pulses: u64,
    pub per_pulse_mean: f64,
}

/// First split: `(ratio·|α|², (1 − ratio)·|α|²)`.
pub fn beam_split(alpha_sq: f64, ratio: f64) -> Result<(f64, f64)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidSplit(format!("ratio {ratio} must lie in (0, 1)")));
    }
    if !(alpha_sq.is_finite() && alpha_sq >= 0.0) {
        return Err(Error::InvalidSplit(format!("mean photon number {alpha_sq} is invalid")));
    }
    let first = alpha_sq * ratio;
    Ok((first, alpha_sq - first))
}

/// Second stage: spread the first arm over `J` weak pulses.
pub fn cascade_split(alpha1_sq: f64, alpha2_sq: f64, j_pulses: u64) -> Result<SplitPlan> {
    if j_pulses == 0 {
        return Err(Error::InvalidSplit("J must be at least 1".into()));
    }
    let per_pulse_mean = alpha1_sq / j_pulses as f64;
    if per_pulse_mean > MAX_PER_PULSE_MEAN {
        return Err(Error::InvalidSplit(format!(
            "per-pulse mean {per_pulse_mean} exceeds {MAX_PER_PULSE_MEAN}; use more pulses"
        )));
    }
    Ok(SplitPlan { alpha1_sq, alpha2_sq, j_pulses, per_pulse_mean })
}

impl SplitPlan {
    pub fn new(alpha_sq: f64, ratio: f64, j_pulses: u64) -> Result<Self> {
        let (a1, a2) = beam_split(alpha_sq, ratio)?;
        cascade_split(a1, a2, j_pulses)
    }

    /// Probability that one weak pulse holds exactly one photon, `μe^{−μ}`.
    pub fn single_photon_probability(&self) -> f64 {
        self.per_pulse_mean * (-self.per_pulse_mean).exp()
    }

    /// Expected single-photon yield over all `J` pulses.
    pub fn expected_photons(&self) -> f64 {
        self.j_pulses as f64 * self.single_photon_probability()
    }
}

/// Number of weak pulses that yield exactly one photon. Each such photon is the pure
/// polarization qubit of the original pulse.
pub fn extract_single_photons<R: Rng + ?Sized>(plan: &SplitPlan, rng: &mut R) -> u64 {
    sample_binomial(plan.j_pulses, plan.single_photon_probability(), rng)
}

/// In-plane basis angle in `[0, π)` of an axis.
fn planar_angle(aux: &AuxiliaryInfo) -> f64 {
    let a = aux.axis();
    let g = a.s2.atan2(a.s1).rem_euclid(PI);
    if g >= PI {
        0.0
    } else {
        g
    }
}

/// Reads the parity of the retained pulse against the axis `aux`.
///
/// The Stokes projection onto the in-plane orientation `n̂ = (cos γ, sin γ, 0)` of the
/// axis is Gaussian with mean `±|α₂|²·cos δ` and variance `|α₂|²`; Plus means a
/// positive projection onto `n̂`.
pub fn y00_parity_readout<R: Rng + ?Sized>(
    s: &Y00State,
    aux: &AuxiliaryInfo,
    alpha2_sq: f64,
    rng: &mut R,
) -> Result<Parity> {
    if !(alpha2_sq.is_finite() && alpha2_sq > 0.0) {
        return Err(Error::InvalidConfig(format!("|alpha2|^2 = {alpha2_sq} must be positive")));
    }
    let g = planar_angle(aux);
    let n = StokesVector::new(g.cos(), g.sin(), 0.0);
    let mean = alpha2_sq * s.direction().dot(&n);
    let noise = Normal::new(mean, alpha2_sq.sqrt()).expect("positive variance");
    let x = noise.sample(rng);
    Ok(if x >= 0.0 { Parity::Plus } else { Parity::Minus })
}

/// Nearest alphabet state `(parity, k)` to the oriented in-plane direction at angle
/// `psi`. The `2M` states sit at angles `πj/M`; `j < M` is `(+, j)`, otherwise
/// `(−, j − M)`.
pub fn snap_to_alphabet(psi: f64, params: &Y00Params) -> (Parity, u64) {
    let m = params.m_levels;
    let j = ((psi.rem_euclid(2.0 * PI) * m as f64 / PI).round() as u64) % (2 * m);
    if j < m {
        (Parity::Plus, j)
    } else {
        (Parity::Minus, j - m)
    }
}

/// Joint `(k̂, parity)` guess from an axis estimate and the parity read out against it.
pub fn decode_guess(aux: &AuxiliaryInfo, parity: Parity, params: &Y00Params) -> (Parity, u64) {
    let g = planar_angle(aux);
    let psi = match parity {
        Parity::Plus => g,
        Parity::Minus => g + PI,
    };
    snap_to_alphabet(psi, params)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Y00AttackConfig {
    pub params: Y00Params,
    pub split_ratio: f64,
    pub j_pulses: u64,
    pub machine: CloneMachine,
    pub levels: u32,
    pub mode: MeasurementMode,
    pub trials: u64,
    pub seed: u64,
    pub aux_source: AuxSource,
}

impl Y00AttackConfig {
    pub fn plan(&self) -> Result<SplitPlan> {
        SplitPlan::new(self.params.alpha_sq, self.split_ratio, self.j_pulses)
    }

    pub fn validate(&self) -> Result<()> {
        self.plan()?;
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Y00Outcome {
    pub photons_extracted: u64,
    pub clone_count: u64,
    pub angular_error: Option<f64>,
    pub parity_guess: Option<Parity>,
    pub k_guess: Option<u64>,
    pub key_guess: Option<u8>,
    pub true_key: u8,
    pub k_correct: bool,
    pub success: bool,
    pub failure: Option<TrialFailure>,
}

impl Y00Outcome {
    fn failed(truth: &Y00State, photons: u64, clones: u64, failure: TrialFailure) -> Self {
        Y00Outcome {
            photons_extracted: photons,
            clone_count: clones,
            angular_error: None,
            parity_guess: None,
            k_guess: None,
            key_guess: None,
            true_key: truth.key(),
            k_correct: false,
            success: false,
            failure: Some(failure),
        }
    }

    fn decoded<R: Rng + ?Sized>(
        truth: &Y00State,
        aux: AuxiliaryInfo,
        plan: &SplitPlan,
        photons: u64,
        clones: u64,
        rng: &mut R,
    ) -> Result<Self> {
        let readout = y00_parity_readout(truth, &aux, plan.alpha2_sq, rng)?;
        let (parity, k) = decode_guess(&aux, readout, &truth.params);
        let key = ciphering_wheel(parity, k);
        let true_dir = truth.direction();
        Ok(Y00Outcome {
            photons_extracted: photons,
            clone_count: clones,
            angular_error: Some(crate::qubit::projective_angle(&aux.axis(), &true_dir)),
            parity_guess: Some(parity),
            k_guess: Some(k),
            key_guess: Some(key),
            true_key: truth.key(),
            k_correct: k == truth.k,
            success: key == truth.key(),
            failure: None,
        })
    }
}

/// Extract single photons, amplify, measure the axis, read the parity from the second
/// arm and decode the key through the wheel.
pub fn y00_attack_trial<R: Rng + ?Sized>(truth: &Y00State, cfg: &Y00AttackConfig, rng: &mut R) -> Result<Y00Outcome> {
    let plan = cfg.plan()?;
    let photon = truth.photon_qubit();
    match cfg.aux_source {
        AuxSource::Exact => Y00Outcome::decoded(truth, aux_info(&photon), &plan, 0, 0, rng),
        AuxSource::Random => {
            let aux = aux_info(&Qubit::random(rng));
            Y00Outcome::decoded(truth, aux, &plan, 0, 0, rng)
        }
        AuxSource::Amplified => {
            let photons = extract_single_photons(&plan, rng);
            let amp = match plan_amplification(&cfg.machine, cfg.levels, photons) {
                Ok(a) => a,
                Err(_) => return Ok(Y00Outcome::failed(truth, photons, 0, TrialFailure::InsufficientPhotons)),
            };
            let (a, b) = closed_form_weights(&cfg.machine, cfg.levels);
            let final_state = MixedQubitState::new(photon, a, b)?;
            match simulate_stokes_measurement(&final_state, amp.clone_count, cfg.mode, rng) {
                Ok(est) => Y00Outcome::decoded(truth, est.aux, &plan, photons, amp.clone_count, rng),
                Err(Error::DegenerateDirection { .. }) => {
                    Ok(Y00Outcome::failed(truth, photons, amp.clone_count, TrialFailure::DegenerateDirection))
                }
                Err(Error::InsufficientPhotons { .. }) => {
                    Ok(Y00Outcome::failed(truth, photons, amp.clone_count, TrialFailure::InsufficientPhotons))
                }
                Err(e) => Err(e),
            }
        }
    }
}

/// No-cloning baseline: measure the first arm's Stokes vector directly (Gaussian,
/// variance `|α₁|²` per axis) and decode the same way.
pub fn y00_baseline_trial<R: Rng + ?Sized>(truth: &Y00State, cfg: &Y00AttackConfig, rng: &mut R) -> Result<Y00Outcome> {
    let plan = cfg.plan()?;
    let mean = truth.direction().scale(plan.alpha1_sq);
    let sd = plan.alpha1_sq.sqrt();
    let mut draw = |mu: f64| Normal::new(mu, sd).expect("positive variance").sample(rng);
    let measured = StokesVector::new(draw(mean.s1), draw(mean.s2), draw(mean.s3));
    match AuxiliaryInfo::from_direction(&measured) {
        Ok(aux) => Y00Outcome::decoded(truth, aux, &plan, 0, 0, rng),
        Err(_) => Ok(Y00Outcome::failed(truth, 0, 0, TrialFailure::DegenerateDirection)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Y00CampaignSummary {
    pub attack: RateEstimate,
    pub attack_k_errors: u64,
    pub baseline: RateEstimate,
    pub baseline_k_errors: u64,
    pub mean_photons_extracted: f64,
}

impl Y00CampaignSummary {
    pub fn attack_k_error_rate(&self) -> f64 {
        self.attack_k_errors as f64 / self.attack.trials as f64
    }

    pub fn baseline_k_error_rate(&self) -> f64 {
        self.baseline_k_errors as f64 / self.baseline.trials as f64
    }
}

fn summarize(outcomes: &[Y00Outcome]) -> (RateEstimate, u64) {
    let successes = outcomes.iter().filter(|o| o.success).count() as u64;
    let failures = outcomes.iter().filter(|o| o.failure.is_some()).count() as u64;
    let k_errors = outcomes.iter().filter(|o| !o.k_correct).count() as u64;
    let angles: Vec<f64> = outcomes.iter().filter_map(|o| o.angular_error).collect();
    let rate =
        RateEstimate::from_counts(successes, failures, outcomes.len() as u64, angles.iter().sum(), angles.len() as u64);
    (rate, k_errors)
}

/// Paired campaign: trial `i` draws one random `(parity, k)` and runs both the attack
/// and the no-cloning baseline on it, each with its own substream.
pub fn y00_campaign(cfg: &Y00AttackConfig) -> Result<Y00CampaignSummary> {
    cfg.validate()?;
    let truth_seed = child_seed(cfg.seed, 1);
    let baseline_seed = child_seed(cfg.seed, 2);
    let pairs: Vec<(Y00Outcome, Y00Outcome)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let truth = Y00State::random(cfg.params, &mut substream(truth_seed, i));
            let attack = y00_attack_trial(&truth, cfg, &mut substream(cfg.seed, i))?;
            let baseline = y00_baseline_trial(&truth, cfg, &mut substream(baseline_seed, i))?;
            Ok((attack, baseline))
        })
        .collect::<Result<_>>()?;
    let (attacks, baselines): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let (attack, attack_k_errors) = summarize(&attacks);
    let (baseline, baseline_k_errors) = summarize(&baselines);
    let photons: u64 = attacks.iter().map(|o| o.photons_extracted).sum();
    Ok(Y00CampaignSummary {
        attack,
        attack_k_errors,
        baseline,
        baseline_k_errors,
        mean_photons_extracted: photons as f64 / cfg.trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(m: u64, a2: f64) -> Y00Params {
        Y00Params::new(m, a2).unwrap()
    }

    #[test]
    fn wheel_truth_table() {
        assert_eq!(ciphering_wheel(Parity::Plus, 0), 0);
        assert_eq!(ciphering_wheel(Parity::Minus, 7), 0);
        let expect = [[0, 1, 0, 1, 0, 1], [1, 0, 1, 0, 1, 0]];
        for (row, parity) in expect.iter().zip([Parity::Plus, Parity::Minus]) {
            for (k, bit) in row.iter().enumerate() {
                assert_eq!(ciphering_wheel(parity, k as u64), *bit, "{parity} {k}");
            }
        }
        assert_eq!(wheel_table(), [0, 1, 1, 0]);
    }

    #[test]
    fn offsets_change_key_iff_odd() {
        for k in 0..50u64 {
            for off in 0..6u64 {
                let same = ciphering_wheel(Parity::Plus, k) == ciphering_wheel(Parity::Plus, k + off);
                assert_eq!(same, off % 2 == 0);
            }
        }
    }

    #[test]
    fn stokes_of_states() {
        let p = params(8, 100.0);
        let (s, d) = y00_stokes(&Y00State::new(Parity::Plus, 0, p).unwrap());
        assert_eq!((s.to_array(), d.sqrt()), ([100.0, 0.0, 0.0], 10.0));
        let (s, _) = y00_stokes(&Y00State::new(Parity::Minus, 0, p).unwrap());
        assert_eq!(s.to_array(), [-100.0, -0.0, -0.0]);
        let (s, _) = y00_stokes(&Y00State::new(Parity::Plus, 4, p).unwrap());
        assert_abs_diff_eq!(s.s1, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.s2, 100.0, epsilon = 1e-12);
        assert!(Y00State::new(Parity::Plus, 8, p).is_err());
    }

    #[test]
    fn photon_qubit_matches_direction() {
        let p = params(64, 100.0);
        for k in 0..64 {
            for parity in [Parity::Plus, Parity::Minus] {
                let s = Y00State::new(parity, k, p).unwrap();
                assert_abs_diff_eq!(s.photon_qubit().stokes().distance(&s.direction()), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn neighboring_examples() {
        let p = params(1000, 100.0);
        assert!(neighboring(0, 10, &p));
        assert!(neighboring_small_angle(10, &p));
        assert!(neighboring(5, 5, &p));
        assert!(!neighboring(0, 100, &p));
        assert!(!neighboring_small_angle(100, &p));
        assert_abs_diff_eq!(dk_threshold(&p), 31.830988618379067, epsilon = 1e-12);
    }

    #[test]
    fn security_examples() {
        let s = security_margin(&params(64, 100.0));
        assert!(s.secure);
        assert_abs_diff_eq!(s.ratio, 64.0 / (10.0 * PI), epsilon = 1e-12);
        assert_abs_diff_eq!(s.ratio, 2.037, epsilon = 1e-3);
        assert!(!security_margin(&params(31, 100.0)).secure);
        assert!(security_margin(&params(2, 1e-12)).secure);
    }

    #[test]
    fn split_examples() {
        let plan = SplitPlan::new(100.0, 0.5, 1000).unwrap();
        assert_eq!(plan.alpha1_sq, 50.0);
        assert_eq!(plan.per_pulse_mean, 0.05);
        assert_eq!(plan.alpha1_sq + plan.alpha2_sq, 100.0);
        let (a, b) = beam_split(100.0, 0.5).unwrap();
        let (c, d) = beam_split(a, 0.5).unwrap();
        assert_eq!(c + d + b, 100.0);
        assert!(cascade_split(0.05, 0.0, 1).is_ok());
        assert!(matches!(SplitPlan::new(100.0, 0.5, 100), Err(Error::InvalidSplit(_))));
        assert!(matches!(SplitPlan::new(100.0, 1.0, 1000), Err(Error::InvalidSplit(_))));
        assert!(matches!(cascade_split(1.0, 1.0, 0), Err(Error::InvalidSplit(_))));
    }

    #[test]
    fn extraction_edges() {
        let plan = cascade_split(0.0, 1.0, 10).unwrap();
        assert_eq!(extract_single_photons(&plan, &mut substream(0, 0)), 0);
    }

    #[test]
    fn readout_with_orthogonal_axis_is_a_coin() {
        let p = params(64, 100.0);
        let truth = Y00State::new(Parity::Plus, 0, p).unwrap();
        let ortho = aux_info(&Y00State::new(Parity::Plus, 32, p).unwrap().photon_qubit());
        let mut rng = substream(3, 0);
        let n = 20_000;
        let plus =
            (0..n).filter(|_| y00_parity_readout(&truth, &ortho, 50.0, &mut rng).unwrap() == Parity::Plus).count();
        let sd = (0.25 / n as f64).sqrt();
        assert!((plus as f64 / n as f64 - 0.5).abs() < 5.0 * sd);
    }

    #[test]
    fn snapping_resolves_wraparound() {
        let p = params(64, 100.0);
        assert_eq!(snap_to_alphabet(0.0, &p), (Parity::Plus, 0));
        assert_eq!(snap_to_alphabet(PI - 1e-6, &p), (Parity::Minus, 0));
        assert_eq!(snap_to_alphabet(-1e-6, &p), (Parity::Plus, 0));
        assert_eq!(snap_to_alphabet(PI - PI / 64.0, &p), (Parity::Plus, 63));
        for k in 0..64 {
            for parity in [Parity::Plus, Parity::Minus] {
                let s = Y00State::new(parity, k, p).unwrap();
                let aux = aux_info(&s.photon_qubit());
                // Whatever orientation the axis has, the right readout decodes the state.
                let g = planar_angle(&aux);
                let n = StokesVector::new(g.cos(), g.sin(), 0.0);
                let readout = if s.direction().dot(&n) > 0.0 { Parity::Plus } else { Parity::Minus };
                assert_eq!(decode_guess(&aux, readout, &p), (parity, k));
            }
        }
    }

    #[test]
    fn exact_aux_always_recovers_key() {
        let cfg = Y00AttackConfig {
            params: params(64, 100.0),
            split_ratio: 0.5,
            j_pulses: 1000,
            machine: CloneMachine::new(25, 50).unwrap(),
            levels: 2,
            mode: MeasurementMode::Idealized,
            trials: 300,
            seed: 5,
            aux_source: AuxSource::Exact,
        };
        let s = y00_campaign(&cfg).unwrap();
        assert_eq!(s.attack.successes, 300);
        assert_eq!(s.attack_k_errors, 0);
    }
}
