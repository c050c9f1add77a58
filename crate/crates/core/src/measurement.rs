//! Measuring the amplified clone ensemble.
//!
//! Two noise pictures are provided: the analytic quantum-noise moments of the
//! `(q/p)^L`-photon ensemble and the binomial picture in which each clone is either
//! `ψ` or `ψ⊥`. The Monte Carlo side samples Stokes outcomes, recovers the
//! polarization axis and then reads out the parity with it.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::cloning::{clone_count_floor, CloneMachine, MixedQubitState};
use crate::error::{Error, Result};
use crate::qubit::{orthogonal, parity, projective_angle, AuxiliaryInfo, Parity, Qubit, StokesVector};

/// Totals with `|T|` at or below this carry no direction.
pub const DIRECTION_TOL: f64 = 1e-12;

/// Analytic Stokes moments of the cascade output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMoments {
    /// `η^L (cos θ, sin θ cos φ, sin θ sin φ)`.
    pub per_photon: StokesVector,
    /// `1 − ⟨S_i⟩²` per axis.
    pub per_photon_dispersion: [f64; 3],
    /// `((q+2)/(p+2))^L · n0 · (cos θ, sin θ cos φ, sin θ sin φ)`.
    pub total: StokesVector,
    pub clone_count: f64,
    /// Quantum-noise S/N, `(q/p)^{L/2} η^L`.
    pub snr: f64,
}

pub fn ensemble_moments(q0: &Qubit, m: &CloneMachine, levels: u32, n0: u64) -> EnsembleMoments {
    let eta_l = m.shrink_factor().powi(levels as i32);
    let unit = q0.stokes();
    let per_photon = unit.scale(eta_l);
    let growth = ((m.q() as f64 + 2.0) / (m.p() as f64 + 2.0)).powi(levels as i32);
    EnsembleMoments {
        per_photon,
        per_photon_dispersion: per_photon.to_array().map(|s| 1.0 - s * s),
        total: unit.scale(growth * n0 as f64),
        clone_count: m.gain().powi(levels as i32) * n0 as f64,
        snr: snr_index(m).powf(levels as f64 / 2.0),
    }
}

/// `p(q+2)² / (q(p+2)²)`; the quantum-noise S/N after `L` levels is this to the `L/2`.
pub fn snr_index(m: &CloneMachine) -> f64 {
    let (p, q) = (m.p() as f64, m.q() as f64);
    p * (q + 2.0) * (q + 2.0) / (q * (p + 2.0) * (p + 2.0))
}

/// Whether the S/N grows with cascade depth: `q > 4` at `p = 1`, or `q > p ≥ 2`.
pub fn snr_grows(m: &CloneMachine) -> bool {
    (m.p() == 1 && m.q() > 4) || (m.p() >= 2 && m.q() > m.p())
}

/// Binomial picture of the final ensemble: `N` clones, each `ψ⊥` with probability
/// `d_final`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialModel {
    pub n: u64,
    pub f_final: f64,
    pub d_final: f64,
}

impl BinomialModel {
    pub fn new(m: &CloneMachine, levels: u32, n0: u64) -> Self {
        let eta_l = m.shrink_factor().powi(levels as i32);
        BinomialModel {
            n: clone_count_floor(m, levels, n0),
            f_final: (1.0 + eta_l) / 2.0,
            d_final: (1.0 - eta_l) / 2.0,
        }
    }

    pub fn from_parts(n: u64, d_final: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&d_final) {
            return Err(Error::InvalidConfig(format!("d_final {d_final} outside [0, 1]")));
        }
        Ok(BinomialModel { n, f_final: 1.0 - d_final, d_final })
    }

    /// Net polarization of each clone, `F_final − D_final = η^L`.
    pub fn eta_pow(&self) -> f64 {
        self.f_final - self.d_final
    }
}

/// Number of orthogonal-state clones, `k ~ Binomial(N, D_final)`.
pub fn sample_ensemble<R: Rng + ?Sized>(model: &BinomialModel, rng: &mut R) -> u64 {
    sample_binomial(model.n, model.d_final, rng)
}

pub(crate) fn sample_binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    let p = p.clamp(0.0, 1.0);
    if n == 0 || p == 0.0 {
        return 0;
    }
    if p == 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("probability clamped to [0, 1]").sample(rng)
}

/// Mean, variance and S/N of one Stokes total under the binomial picture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticalMoments {
    pub mean: f64,
    pub variance: f64,
    /// `|mean| / sqrt(variance)`; infinite when the ensemble is noiseless (`L = 0`).
    pub snr: f64,
}

impl StatisticalMoments {
    pub fn is_exact(&self) -> bool {
        self.variance == 0.0
    }
}

/// Moments of `S_axis^total = Σ (±1)·c` with `c` the direction cosine of `q0` on `axis`.
///
/// `mean = (1 − 2D)·N·c`, `variance = 4·F·D·N·c²`.
pub fn statistical_moments(model: &BinomialModel, q0: &Qubit, axis: usize) -> Result<StatisticalMoments> {
    let c = q0.stokes().component(axis);
    if c.abs() <= DIRECTION_TOL {
        return Err(Error::DegenerateDirection { norm: c.abs() });
    }
    let n = model.n as f64;
    let mean = (1.0 - 2.0 * model.d_final) * n * c;
    let variance = 4.0 * model.f_final * model.d_final * n * c * c;
    let snr = if variance == 0.0 { f64::INFINITY } else { mean.abs() / variance.sqrt() };
    Ok(StatisticalMoments { mean, variance, snr })
}

/// `η^L √N / √(1 − η^{2L})`, independent of the axis.
pub fn statistical_snr(model: &BinomialModel) -> f64 {
    let e = model.eta_pow();
    let denom = (1.0 - e * e).max(0.0).sqrt();
    if denom == 0.0 {
        f64::INFINITY
    } else {
        e * (model.n as f64).sqrt() / denom
    }
}

/// Sample mean, standard deviation and their ratio for the `S₁` total of a state on the
/// `S₁` axis, over `trials` independent ensembles.
pub fn empirical_snr<R: Rng + ?Sized>(model: &BinomialModel, trials: u64, rng: &mut R) -> StatisticalMoments {
    let n = model.n as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        let k = sample_ensemble(model, rng) as f64;
        let total = n - 2.0 * k;
        sum += total;
        sum_sq += total * total;
    }
    let t = trials as f64;
    let mean = sum / t;
    let variance = if trials > 1 { ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0) } else { 0.0 };
    let snr = if variance == 0.0 { f64::INFINITY } else { mean.abs() / variance.sqrt() };
    StatisticalMoments { mean, variance, snr }
}

/// How photons are assigned to Stokes axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementMode {
    /// Every photon contributes one outcome to each of the three axes.
    #[default]
    Idealized,
    /// Photons are split into three near-equal groups, one axis per group.
    Partitioned,
}

impl MeasurementMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasurementMode::Idealized => "idealized",
            MeasurementMode::Partitioned => "partitioned",
        }
    }

    /// Photons measured on each axis out of `n`.
    pub fn axis_counts(self, n: u64) -> [u64; 3] {
        match self {
            MeasurementMode::Idealized => [n; 3],
            MeasurementMode::Partitioned => std::array::from_fn(|i| n / 3 + u64::from((i as u64) < n % 3)),
        }
    }
}

impl fmt::Display for MeasurementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasurementMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "idealized" => Ok(MeasurementMode::Idealized),
            "partitioned" => Ok(MeasurementMode::Partitioned),
            other => Err(Error::InvalidConfig(format!("unknown measurement mode '{other}'"))),
        }
    }
}

/// Result of a Stokes measurement and the axis recovered from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesEstimate {
    /// Summed ±1 outcomes per axis.
    pub totals: StokesVector,
    /// Photons measured on each axis.
    pub counts: [u64; 3],
    pub direction: StokesVector,
    pub aux: AuxiliaryInfo,
    /// Projective distance to the true axis, in `[0, π/2]`, when the truth is known.
    pub angular_error: Option<f64>,
}

/// Normalizes measured totals into an axis estimate.
pub fn estimate_direction(totals: &StokesVector, truth: Option<&Qubit>) -> Result<StokesEstimate> {
    let counts = [0; 3];
    estimate_from_means(*totals, counts, totals, truth)
}

fn estimate_from_means(
    totals: StokesVector,
    counts: [u64; 3],
    means: &StokesVector,
    truth: Option<&Qubit>,
) -> Result<StokesEstimate> {
    let norm = means.norm();
    let direction = means.unit(DIRECTION_TOL).ok_or(Error::DegenerateDirection { norm })?;
    let aux = AuxiliaryInfo::from_direction(&direction)?;
    let angular_error = truth.map(|q| projective_angle(&direction, &q.stokes()));
    Ok(StokesEstimate { totals, counts, direction, aux, angular_error })
}

/// Samples a Stokes measurement of `n_clones` copies of `final_state`.
///
/// Each outcome on axis `i` is +1 with probability `(1 + ⟨S_i⟩)/2`; per-axis totals are
/// drawn as binomials, which has the same distribution as photon-by-photon draws. The
/// axis is estimated from the per-axis sample means, so unequal group sizes in
/// partitioned mode do not bias it.
pub fn simulate_stokes_measurement<R: Rng + ?Sized>(
    final_state: &MixedQubitState,
    n_clones: u64,
    mode: MeasurementMode,
    rng: &mut R,
) -> Result<StokesEstimate> {
    let need = match mode {
        MeasurementMode::Idealized => 1,
        MeasurementMode::Partitioned => 3,
    };
    if n_clones < need {
        return Err(Error::InsufficientPhotons { have: n_clones, need });
    }
    let expect = final_state.stokes().to_array();
    let counts = mode.axis_counts(n_clones);
    let mut totals = [0.0; 3];
    let mut means = [0.0; 3];
    for i in 0..3 {
        let plus = sample_binomial(counts[i], (1.0 + expect[i]) / 2.0, rng);
        totals[i] = 2.0 * plus as f64 - counts[i] as f64;
        means[i] = totals[i] / counts[i] as f64;
    }
    estimate_from_means(
        StokesVector::from_array(totals),
        counts,
        &StokesVector::from_array(means),
        Some(&final_state.base()),
    )
}

/// Projects `n_photons` copies of `true_state` onto `{ψ(aux), ψ⊥(aux)}` and returns the
/// parity of the majority outcome. Ties are an error.
pub fn observe_parity<R: Rng + ?Sized>(
    true_state: &Qubit,
    aux: &AuxiliaryInfo,
    n_photons: u64,
    rng: &mut R,
) -> Result<Parity> {
    if n_photons == 0 {
        return Err(Error::InsufficientPhotons { have: 0, need: 1 });
    }
    let rep = aux.representative();
    let p_rep = rep.overlap(true_state);
    let hits = sample_binomial(n_photons, p_rep, rng);
    let misses = n_photons - hits;
    let winner = match hits.cmp(&misses) {
        std::cmp::Ordering::Greater => rep,
        std::cmp::Ordering::Less => orthogonal(&rep),
        std::cmp::Ordering::Equal => return Err(Error::ParityUndefined(format!("tied vote {hits}-{misses}"))),
    };
    parity(&winner)
}
