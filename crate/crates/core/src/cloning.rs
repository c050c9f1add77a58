//! The p → q universal quantum cloning machine and its cascade.
//!
//! Each output clone of a universal cloner is the mixture `F·ρ + D·ρ⊥`. Iterating the
//! machine keeps every state inside the two-dimensional family spanned by `ρ` and
//! `ρ⊥`, so the cascade is tracked by a pair of weights `(a, b)`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{check_weights, orthogonal, DensityMatrix, Qubit, StokesVector};

/// Gisin-Massar machine turning `p` identical qubits into `q > p` clones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CloneMachine {
    p: u64,
    q: u64,
}

impl CloneMachine {
    /// Largest `q` accepted; keeps `q(p + 2)` exact in both `u64` and `f64`.
    pub const MAX_COPIES: u64 = 1 << 24;

    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p >= 1 && q > p && q <= Self::MAX_COPIES {
            Ok(CloneMachine { p, q })
        } else {
            Err(Error::InvalidCloneParams { p, q })
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `(q(p+1) + p) / (q(p+2))`, exact.
    pub fn fidelity_exact(&self) -> Ratio<u64> {
        let (p, q) = (self.p, self.q);
        Ratio::new(q * (p + 1) + p, q * (p + 2))
    }

    /// `(q − p) / (q(p+2))`, exact.
    pub fn disturbance_exact(&self) -> Ratio<u64> {
        let (p, q) = (self.p, self.q);
        Ratio::new(q - p, q * (p + 2))
    }

    /// `p(q+2) / (q(p+2))`, exact.
    pub fn shrink_factor_exact(&self) -> Ratio<u64> {
        let (p, q) = (self.p, self.q);
        Ratio::new(p * (q + 2), q * (p + 2))
    }

    pub fn fidelity(&self) -> f64 {
        let (p, q) = (self.p as f64, self.q as f64);
        (q * (p + 1.0) + p) / (q * (p + 2.0))
    }

    pub fn disturbance(&self) -> f64 {
        let (p, q) = (self.p as f64, self.q as f64);
        (q - p) / (q * (p + 2.0))
    }

    pub fn shrink_factor(&self) -> f64 {
        let (p, q) = (self.p as f64, self.q as f64);
        p * (q + 2.0) / (q * (p + 2.0))
    }

    /// Photon multiplication per cascade level, `q/p`.
    pub fn gain(&self) -> f64 {
        self.q as f64 / self.p as f64
    }
}

pub fn fidelity(m: &CloneMachine) -> f64 {
    m.fidelity()
}

pub fn disturbance(m: &CloneMachine) -> f64 {
    m.disturbance()
}

pub fn shrink_factor(m: &CloneMachine) -> f64 {
    m.shrink_factor()
}

/// `a·ρ(ψ) + b·ρ(ψ⊥)` for a fixed base state `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedQubitState {
    base: Qubit,
    a: f64,
    b: f64,
}

impl MixedQubitState {
    pub fn new(base: Qubit, a: f64, b: f64) -> Result<Self> {
        check_weights(a, b)?;
        Ok(MixedQubitState { base, a: a.clamp(0.0, 1.0), b: b.clamp(0.0, 1.0) })
    }

    pub fn pure(base: Qubit) -> Self {
        MixedQubitState { base, a: 1.0, b: 0.0 }
    }

    pub fn maximally_mixed(base: Qubit) -> Self {
        MixedQubitState { base, a: 0.5, b: 0.5 }
    }

    pub fn base(&self) -> Qubit {
        self.base
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Length of the Stokes vector, `a − b`.
    pub fn polarization(&self) -> f64 {
        self.a - self.b
    }

    pub fn stokes(&self) -> StokesVector {
        self.base.stokes().scale(self.polarization())
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::mixture(self.a, &self.base.density_matrix(), self.b, &orthogonal(&self.base).density_matrix())
            .expect("weights validated at construction")
    }
}

/// One pass through the machine: `a' = F·a + D·b`, `b' = D·a + F·b`.
pub fn clone_step(s: &MixedQubitState, m: &CloneMachine) -> MixedQubitState {
    let (f, d) = (m.fidelity(), m.disturbance());
    let a = f * s.a + d * s.b;
    let b = d * s.a + f * s.b;
    // Renormalize away rounding drift so a + b stays 1.
    let total = a + b;
    MixedQubitState { base: s.base, a: a / total, b: b / total }
}

/// Closed-form weights after `levels` steps from a pure input: `((1 + η^L)/2, (1 − η^L)/2)`.
pub fn closed_form_weights(m: &CloneMachine, levels: u32) -> (f64, f64) {
    let eta_l = m.shrink_factor().powi(levels as i32);
    ((1.0 + eta_l) / 2.0, (1.0 - eta_l) / 2.0)
}

/// Outcome of an `L`-level cascade started from `n0` photons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeResult {
    pub machine: CloneMachine,
    pub levels_run: u32,
    pub final_state: MixedQubitState,
    /// `(a_k, b_k)` for `k = 0..=L`, by iterating [`clone_step`].
    pub levels: Vec<(f64, f64)>,
    /// `(q/p)^L · n0`; real-valued when `p` does not divide `q`.
    pub clone_count: f64,
    pub eta: f64,
}

impl CascadeResult {
    pub fn eta_pow(&self) -> f64 {
        self.eta.powi(self.levels_run as i32)
    }
}

pub fn cascade(q0: &Qubit, m: &CloneMachine, levels: u32, n0: u64) -> CascadeResult {
    let mut state = MixedQubitState::pure(*q0);
    let mut trace = Vec::with_capacity(levels as usize + 1);
    trace.push((state.a, state.b));
    for _ in 0..levels {
        state = clone_step(&state, m);
        trace.push((state.a, state.b));
    }
    let (a, b) = closed_form_weights(m, levels);
    CascadeResult {
        machine: *m,
        levels_run: levels,
        final_state: MixedQubitState { base: *q0, a, b },
        levels: trace,
        clone_count: m.gain().powi(levels as i32) * n0 as f64,
        eta: m.shrink_factor(),
    }
}

/// `⌊(q/p)^L · n0⌋`, computed in integers when it fits.
pub fn clone_count_floor(m: &CloneMachine, levels: u32, n0: u64) -> u64 {
    let exact = (|| {
        let num = (m.q as u128).checked_pow(levels)?.checked_mul(n0 as u128)?;
        let den = (m.p as u128).checked_pow(levels)?;
        u64::try_from(num / den).ok()
    })();
    exact.unwrap_or_else(|| {
        let v = (m.gain().powi(levels as i32) * n0 as f64).floor();
        if v >= u64::MAX as f64 {
            u64::MAX
        } else {
            v as u64
        }
    })
}

/// How an `n`-photon input is fed through independent `p`-photon cascades.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Amplification {
    /// Number of `p`-photon groups, `⌊n / p⌋`.
    pub groups: u64,
    /// Photons left over and discarded.
    pub discarded: u64,
    /// Total clones, `⌊groups · p · (q/p)^L⌋`.
    pub clone_count: u64,
}

pub fn plan_amplification(m: &CloneMachine, levels: u32, photons: u64) -> Result<Amplification> {
    let groups = photons / m.p;
    if groups == 0 {
        return Err(Error::InsufficientPhotons { have: photons, need: m.p });
    }
    Ok(Amplification {
        groups,
        discarded: photons - groups * m.p,
        clone_count: clone_count_floor(m, levels, groups * m.p),
    })
}
