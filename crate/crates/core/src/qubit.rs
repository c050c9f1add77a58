//! Polarization qubits on the Poincaré sphere.
//!
//! A single photon's polarization is `cos(θ/2)|H⟩ + sin(θ/2)e^{iφ}|V⟩`. Everything in
//! this module lives in the single-photon subspace, so the Stokes operators are plain
//! 2×2 matrices in the `{|H⟩, |V⟩}` basis and every expectation is a trace.
//!
//! The Stokes space factors into a sign (the parity) and an unoriented axis (the
//! auxiliary information). [`parity`] and [`aux_info`] extract the two factors and
//! [`reconstruct`] puts them back together.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|⟨S₂⟩|` at or below this is treated as the degenerate parity circle.
pub const PARITY_TOL: f64 = 1e-9;

/// Tolerance for angle comparisons (φ is compared modulo 2π).
pub const ANGLE_TOL: f64 = 1e-9;

const MATRIX_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major 2×2 complex matrix in the `{|H⟩, |V⟩}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.adjoint()).max_abs() <= tol
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(-ONE)
    }
}

/// The three Stokes operators restricted to one photon.
///
/// `s1 = diag(1, −1)`, `s2` is the off-diagonal ones and `s3 = [[0, −i], [i, 0]]`. With
/// this choice `Tr[s_i ρ]` reproduces `(cos θ, sin θ cos φ, sin θ sin φ)` for the qubit
/// parameterization above, and the algebra is `[s_i, s_j] = 2i ε_ijk s_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesOperators {
    pub s1: Mat2,
    pub s2: Mat2,
    pub s3: Mat2,
}

impl StokesOperators {
    pub const fn new() -> Self {
        StokesOperators {
            s1: Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]),
            s2: Mat2([[ZERO, ONE], [ONE, ZERO]]),
            s3: Mat2([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]),
        }
    }

    /// Operator by axis index 0, 1, 2.
    pub fn axis(&self, i: usize) -> &Mat2 {
        match i {
            0 => &self.s1,
            1 => &self.s2,
            2 => &self.s3,
            _ => panic!("Stokes axis index {i} out of range"),
        }
    }
}

impl Default for StokesOperators {
    fn default() -> Self {
        Self::new()
    }
}

/// Levi-Civita symbol with `ε₁₂₃ = 1` (zero-based indices).
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Real Stokes expectation vector (dimensionless, per photon unless scaled).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StokesVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    pub const fn new(s1: f64, s2: f64, s3: f64) -> Self {
        StokesVector { s1, s2, s3 }
    }

    pub fn from_array([s1, s2, s3]: [f64; 3]) -> Self {
        StokesVector { s1, s2, s3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn component(&self, i: usize) -> f64 {
        self.to_array()[i]
    }

    pub fn dot(&self, other: &StokesVector) -> f64 {
        self.s1 * other.s1 + self.s2 * other.s2 + self.s3 * other.s3
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, k: f64) -> StokesVector {
        StokesVector::new(self.s1 * k, self.s2 * k, self.s3 * k)
    }

    /// Unit vector along `self`, or `None` when the norm is at or below `tol`.
    pub fn unit(&self, tol: f64) -> Option<StokesVector> {
        let n = self.norm();
        (n > tol).then(|| self.scale(1.0 / n))
    }

    pub fn cross(&self, o: &StokesVector) -> StokesVector {
        StokesVector::new(
            self.s2 * o.s3 - self.s3 * o.s2,
            self.s3 * o.s1 - self.s1 * o.s3,
            self.s1 * o.s2 - self.s2 * o.s1,
        )
    }

    pub fn distance(&self, other: &StokesVector) -> f64 {
        (*self - *other).norm()
    }
}

impl Neg for StokesVector {
    type Output = StokesVector;
    fn neg(self) -> StokesVector {
        self.scale(-1.0)
    }
}

impl Sub for StokesVector {
    type Output = StokesVector;
    fn sub(self, o: StokesVector) -> StokesVector {
        StokesVector::new(self.s1 - o.s1, self.s2 - o.s2, self.s3 - o.s3)
    }
}

impl Add for StokesVector {
    type Output = StokesVector;
    fn add(self, o: StokesVector) -> StokesVector {
        StokesVector::new(self.s1 + o.s1, self.s2 + o.s2, self.s3 + o.s3)
    }
}

/// Pure polarization state parameterized by `(θ, φ)` with `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Qubit {
    theta: f64,
    phi: f64,
}

impl Qubit {
    /// Strict constructor; out-of-range angles are rejected rather than wrapped.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let ok = theta.is_finite() && phi.is_finite() && (0.0..=PI).contains(&theta) && (0.0..TAU).contains(&phi);
        if ok {
            Ok(Qubit { theta, phi })
        } else {
            Err(Error::AngleOutOfRange { theta, phi })
        }
    }

    /// Wraps arbitrary finite angles onto the canonical ranges without changing the
    /// physical state (up to global phase).
    pub fn normalized(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::AngleOutOfRange { theta, phi });
        }
        let mut t = theta.rem_euclid(TAU);
        let mut p = phi;
        if t > PI {
            t = TAU - t;
            p += PI;
        }
        Ok(Qubit { theta: t.min(PI), phi: wrap_phi(p) })
    }

    /// Pure state whose Stokes vector points along `d` (need not be normalized).
    pub fn from_stokes_direction(d: &StokesVector) -> Result<Self> {
        let u = d.unit(0.0).ok_or(Error::DegenerateDirection { norm: d.norm() })?;
        let theta = u.s1.clamp(-1.0, 1.0).acos();
        let phi = if u.s2 == 0.0 && u.s3 == 0.0 { 0.0 } else { u.s3.atan2(u.s2) };
        Ok(Qubit { theta, phi: wrap_phi(phi) })
    }

    /// Draws a state uniformly over the Poincaré sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..TAU);
        Qubit { theta: z.acos(), phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Amplitudes on `|H⟩` and `|V⟩`.
    pub fn amplitudes(&self) -> [Complex64; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [Complex64::new(c, 0.0), Complex64::from_polar(s, self.phi)]
    }

    /// Closed-form Stokes expectation `(cos θ, sin θ cos φ, sin θ sin φ)`.
    pub fn stokes(&self) -> StokesVector {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        StokesVector::new(ct, st * cp, st * sp)
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        density_matrix(self)
    }

    pub fn orthogonal(&self) -> Qubit {
        orthogonal(self)
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Qubit) -> f64 {
        let [a0, a1] = self.amplitudes();
        let [b0, b1] = other.amplitudes();
        (a0.conj() * b0 + a1.conj() * b1).norm_sqr()
    }

    /// Same physical state within `tol` on the Stokes vector.
    pub fn same_state(&self, other: &Qubit, tol: f64) -> bool {
        self.stokes().distance(&other.stokes()) <= tol
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(θ={}, φ={})", self.theta, self.phi)
    }
}

fn wrap_phi(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if p >= TAU || TAU - p <= ANGLE_TOL * 1e-3 {
        0.0
    } else {
        p
    }
}

/// Difference of two azimuths reduced to `[0, π]`.
pub fn phi_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Single-photon density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat2);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (all to 1e-12).
    pub fn from_matrix(m: Mat2) -> Result<Self> {
        if !m.is_hermitian(MATRIX_TOL) {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > MATRIX_TOL || tr.im.abs() > MATRIX_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let rho = DensityMatrix(m);
        let [lo, _] = rho.eigenvalues();
        if lo < -MATRIX_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {lo}")));
        }
        Ok(rho)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Mat2::IDENTITY.scale(Complex64::new(0.5, 0.0)))
    }

    /// `a·ρ₁ + b·ρ₂` with `a, b ≥ 0`, `a + b = 1`.
    pub fn mixture(a: f64, rho1: &DensityMatrix, b: f64, rho2: &DensityMatrix) -> Result<Self> {
        check_weights(a, b)?;
        let m = rho1.0.scale(Complex64::new(a, 0.0)) + rho2.0.scale(Complex64::new(b, 0.0));
        Ok(DensityMatrix(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0 .0[row][col]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let m = &self.0 .0;
        let (a, d) = (m[0][0].re, m[1][1].re);
        let half_tr = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + m[0][1].norm_sqr()).sqrt();
        [half_tr - disc, half_tr + disc]
    }

    /// `Tr ρ²`; 1 for pure states, 1/2 for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn stokes(&self) -> StokesVector {
        stokes_expectation(self)
    }
}

pub(crate) fn check_weights(a: f64, b: f64) -> Result<()> {
    let ok = a.is_finite()
        && b.is_finite()
        && (-MATRIX_TOL..=1.0 + MATRIX_TOL).contains(&a)
        && (-MATRIX_TOL..=1.0 + MATRIX_TOL).contains(&b)
        && (a + b - 1.0).abs() <= MATRIX_TOL;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidWeights { a, b })
    }
}

pub fn make_qubit(theta: f64, phi: f64) -> Result<Qubit> {
    Qubit::new(theta, phi)
}

/// `|ψ⟩⟨ψ|` built entrywise from the half-angle form.
pub fn density_matrix(q: &Qubit) -> DensityMatrix {
    let (s, c) = (q.theta / 2.0).sin_cos();
    let off = c * s;
    DensityMatrix(Mat2([
        [Complex64::new(c * c, 0.0), Complex64::from_polar(off, -q.phi)],
        [Complex64::from_polar(off, q.phi), Complex64::new(s * s, 0.0)],
    ]))
}

/// The antipodal state `sin(θ/2)|H⟩ − cos(θ/2)e^{iφ}|V⟩`, i.e. angles `(π − θ, φ + π)`.
pub fn orthogonal(q: &Qubit) -> Qubit {
    Qubit { theta: (PI - q.theta).clamp(0.0, PI), phi: wrap_phi(q.phi + PI) }
}

/// `s_i = Tr[S_i ρ]`.
pub fn stokes_expectation(rho: &DensityMatrix) -> StokesVector {
    let ops = StokesOperators::new();
    let e = |s: &Mat2| (*s * rho.0).trace().re;
    StokesVector::new(e(&ops.s1), e(&ops.s2), e(&ops.s3))
}

/// `ΔS_i² = Tr[S_i² ρ] − Tr[S_i ρ]²`.
pub fn stokes_dispersion(rho: &DensityMatrix) -> [f64; 3] {
    let ops = StokesOperators::new();
    std::array::from_fn(|i| {
        let s = ops.axis(i);
        let mean = (*s * rho.0).trace().re;
        let second = (*s * *s * rho.0).trace().re;
        second - mean * mean
    })
}

/// Sign of the projection onto `S₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Plus => Parity::Minus,
            Parity::Minus => Parity::Plus,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }

    /// `Some(Plus)` for positive `x`, `Some(Minus)` for negative, `None` inside `±tol`.
    pub fn from_sign(x: f64, tol: f64) -> Option<Parity> {
        if x > tol {
            Some(Parity::Plus)
        } else if x < -tol {
            Some(Parity::Minus)
        } else {
            None
        }
    }

    /// Key bit when parity carries the key directly: Plus → 0, Minus → 1.
    pub fn bit(self) -> u8 {
        match self {
            Parity::Plus => 0,
            Parity::Minus => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Parity::Plus => '+',
            Parity::Minus => '-',
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

pub(crate) fn degenerate_parity(s2: f64) -> Error {
    Error::ParityUndefined(format!("state on the S2 = 0 circle (<S2> = {s2:e})"))
}

pub fn parity(q: &Qubit) -> Result<Parity> {
    let s2 = q.stokes().s2;
    Parity::from_sign(s2, PARITY_TOL).ok_or_else(|| degenerate_parity(s2))
}

/// A polarization axis: the class `{ψ, ψ⊥}` represented by its canonical member.
///
/// The canonical member has `⟨S₂⟩ > 0`; on the `S₂ = 0` circle it has `⟨S₁⟩ > 0`, and
/// at the two circular poles it has `⟨S₃⟩ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxiliaryInfo {
    rep: Qubit,
}

impl AuxiliaryInfo {
    pub fn of(q: &Qubit) -> Self {
        aux_info(q)
    }

    /// Axis through `d` (either orientation).
    pub fn from_direction(d: &StokesVector) -> Result<Self> {
        let u = d.unit(0.0).ok_or(Error::DegenerateDirection { norm: d.norm() })?;
        let u = if canonical_sign(&u) { u } else { -u };
        Ok(AuxiliaryInfo { rep: Qubit::from_stokes_direction(&u)? })
    }

    pub fn theta(&self) -> f64 {
        self.rep.theta
    }

    pub fn phi(&self) -> f64 {
        self.rep.phi
    }

    /// The canonical member of the class.
    pub fn representative(&self) -> Qubit {
        self.rep
    }

    /// Unit Stokes vector of the canonical member.
    pub fn axis(&self) -> StokesVector {
        self.rep.stokes()
    }

    /// Angle between two axes in `[0, π/2]`.
    pub fn projective_distance(&self, other: &AuxiliaryInfo) -> f64 {
        projective_angle(&self.axis(), &other.axis())
    }

    pub fn same_class(&self, other: &AuxiliaryInfo, tol: f64) -> bool {
        self.projective_distance(other) <= tol
    }

    pub fn is_canonical(&self) -> bool {
        canonical_sign(&self.axis())
    }
}

/// `arccos |â·b̂|` for two nonzero vectors, evaluated as `atan2(|a×b|, |a·b|)` so that
/// nearly parallel axes keep full precision.
pub fn projective_angle(a: &StokesVector, b: &StokesVector) -> f64 {
    a.cross(b).norm().atan2(a.dot(b).abs())
}

fn canonical_sign(s: &StokesVector) -> bool {
    if s.s2.abs() > PARITY_TOL {
        s.s2 > 0.0
    } else if s.s1.abs() > PARITY_TOL {
        s.s1 > 0.0
    } else {
        s.s3 > 0.0
    }
}

pub fn aux_info(q: &Qubit) -> AuxiliaryInfo {
    let rep = if canonical_sign(&q.stokes()) { *q } else { orthogonal(q) };
    AuxiliaryInfo { rep }
}

/// Inverse of `(parity, aux_info)`.
pub fn reconstruct(parity: Parity, aux: &AuxiliaryInfo) -> Result<Qubit> {
    let s2 = aux.axis().s2;
    if s2.abs() <= PARITY_TOL {
        return Err(degenerate_parity(s2));
    }
    let rep = if s2 > 0.0 { aux.rep } else { orthogonal(&aux.rep) };
    Ok(match parity {
        Parity::Plus => rep,
        Parity::Minus => orthogonal(&rep),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EPS: f64 = 1e-12;

    fn assert_stokes(s: StokesVector, expect: [f64; 3], eps: f64) {
        for (got, want) in s.to_array().into_iter().zip(expect) {
            assert_abs_diff_eq!(got, want, epsilon = eps);
        }
    }

    #[test]
    fn make_qubit_poles_and_equator() {
        assert_stokes(make_qubit(0.0, 0.0).unwrap().stokes(), [1.0, 0.0, 0.0], EPS);
        assert_stokes(make_qubit(PI, 0.0).unwrap().stokes(), [-1.0, 0.0, 0.0], EPS);
        assert_stokes(make_qubit(PI / 2.0, 0.0).unwrap().stokes(), [0.0, 1.0, 0.0], EPS);
    }

    #[test]
    fn make_qubit_rejects_out_of_range() {
        for (t, p) in [(-0.1, 0.0), (PI + 1e-9, 0.0), (0.3, TAU), (0.3, -1e-3), (f64::NAN, 0.0)] {
            assert!(matches!(make_qubit(t, p), Err(Error::AngleOutOfRange { .. })), "{t} {p}");
        }
    }

    #[test]
    fn normalized_wraps_to_same_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let t: f64 = rng.gen_range(-20.0..20.0);
            let p: f64 = rng.gen_range(-20.0..20.0);
            let q = Qubit::normalized(t, p).unwrap();
            assert!(Qubit::new(q.theta(), q.phi()).is_ok());
            // Reference Stokes vector straight from the unwrapped amplitudes.
            let (s, c) = (t / 2.0).sin_cos();
            let ref_s = StokesVector::new(c * c - s * s, 2.0 * c * s * p.cos(), 2.0 * c * s * p.sin());
            assert_stokes(q.stokes(), ref_s.to_array(), 1e-9);
        }
    }

    #[test]
    fn density_matrix_entries() {
        let h = density_matrix(&make_qubit(0.0, 0.0).unwrap());
        assert_abs_diff_eq!(h.entry(0, 0).re, 1.0, epsilon = EPS);
        assert_abs_diff_eq!(h.entry(1, 1).re, 0.0, epsilon = EPS);

        let d = density_matrix(&make_qubit(PI / 2.0, 0.0).unwrap());
        for r in 0..2 {
            for c in 0..2 {
                assert_abs_diff_eq!(d.entry(r, c).re, 0.5, epsilon = EPS);
                assert_abs_diff_eq!(d.entry(r, c).im, 0.0, epsilon = EPS);
            }
        }

        let q = make_qubit(PI / 2.0, PI / 2.0).unwrap();
        let rho = density_matrix(&q);
        assert_abs_diff_eq!(rho.entry(0, 1).im, -0.5, epsilon = EPS);
        assert_abs_diff_eq!(rho.entry(1, 0).im, 0.5, epsilon = EPS);
        // Outer product from the amplitudes.
        let amp = q.amplitudes();
        for r in 0..2 {
            for c in 0..2 {
                let outer = amp[r] * amp[c].conj();
                assert_abs_diff_eq!((rho.entry(r, c) - outer).norm(), 0.0, epsilon = EPS);
            }
        }
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::from_matrix(Mat2::IDENTITY).is_err());
        let bad = Mat2([[ONE, ZERO], [ZERO, ZERO]]).scale(Complex64::new(1.5, 0.0))
            + Mat2([[ZERO, ZERO], [ZERO, Complex64::new(-0.5, 0.0)]]);
        assert!(DensityMatrix::from_matrix(bad).is_err());
        let nonherm = Mat2([[Complex64::new(0.5, 0.0), I], [I, Complex64::new(0.5, 0.0)]]);
        assert!(DensityMatrix::from_matrix(nonherm).is_err());
        let rho = density_matrix(&make_qubit(1.0, 2.0).unwrap());
        let again = DensityMatrix::from_matrix(*rho.matrix()).unwrap();
        assert_abs_diff_eq!(again.purity(), 1.0, epsilon = EPS);
        assert_abs_diff_eq!(again.eigenvalues()[0], 0.0, epsilon = EPS);
    }

    #[test]
    fn orthogonal_examples() {
        let v = orthogonal(&make_qubit(0.0, 0.0).unwrap());
        assert_stokes(v.stokes(), [-1.0, 0.0, 0.0], EPS);
        let o = orthogonal(&make_qubit(PI / 2.0, 0.0).unwrap());
        assert_abs_diff_eq!(o.theta(), PI / 2.0, epsilon = EPS);
        assert_abs_diff_eq!(o.phi(), PI, epsilon = EPS);
        assert_stokes(o.stokes(), [0.0, -1.0, 0.0], EPS);
    }

    #[test]
    fn orthogonal_is_orthogonal_and_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let q = Qubit::random(&mut rng);
            let o = orthogonal(&q);
            assert_abs_diff_eq!(q.overlap(&o), 0.0, epsilon = EPS);
            assert_stokes(orthogonal(&o).stokes(), q.stokes().to_array(), EPS);
            assert_stokes(o.stokes(), (-q.stokes()).to_array(), EPS);
        }
    }

    #[test]
    fn stokes_expectation_examples() {
        let rho = density_matrix(&make_qubit(0.0, 0.0).unwrap());
        assert_stokes(stokes_expectation(&rho), [1.0, 0.0, 0.0], EPS);

        let q = make_qubit(PI / 3.0, PI / 4.0).unwrap();
        let s = stokes_expectation(&density_matrix(&q));
        assert_stokes(s, [0.5, 0.612372435695794, 0.612372435695794], 1e-12);
        assert_stokes(s, q.stokes().to_array(), EPS);

        assert_stokes(stokes_expectation(&DensityMatrix::maximally_mixed()), [0.0; 3], EPS);
    }

    #[test]
    fn stokes_dispersion_examples() {
        let d = stokes_dispersion(&density_matrix(&make_qubit(0.0, 0.0).unwrap()));
        assert_stokes(StokesVector::from_array(d), [0.0, 1.0, 1.0], EPS);
        let d = stokes_dispersion(&density_matrix(&make_qubit(PI / 2.0, 0.0).unwrap()));
        assert_stokes(StokesVector::from_array(d), [1.0, 0.0, 1.0], EPS);
        let d = stokes_dispersion(&DensityMatrix::maximally_mixed());
        assert_stokes(StokesVector::from_array(d), [1.0, 1.0, 1.0], EPS);
    }

    #[test]
    fn operator_algebra() {
        let ops = StokesOperators::new();
        for i in 0..3 {
            let s = ops.axis(i);
            assert!(s.is_hermitian(0.0));
            assert_abs_diff_eq!((*s * *s - Mat2::IDENTITY).max_abs(), 0.0, epsilon = EPS);
            for j in 0..3 {
                let mut rhs = Mat2::ZERO;
                for k in 0..3 {
                    rhs = rhs + ops.axis(k).scale(Complex64::new(0.0, 2.0 * levi_civita(i, j, k)));
                }
                let diff = s.commutator(ops.axis(j)) - rhs;
                assert_abs_diff_eq!(diff.max_abs(), 0.0, epsilon = EPS);
            }
        }
    }

    #[test]
    fn aux_info_examples() {
        let a = aux_info(&make_qubit(PI / 3.0, 0.0).unwrap());
        let b = aux_info(&make_qubit(2.0 * PI / 3.0, PI).unwrap());
        assert!(a.same_class(&b, 1e-12));
        assert_abs_diff_eq!(a.theta(), b.theta(), epsilon = 1e-12);
        assert_abs_diff_eq!(phi_distance(a.phi(), b.phi()), 0.0, epsilon = ANGLE_TOL);

        let e = make_qubit(PI / 2.0, 0.0).unwrap();
        assert_eq!(aux_info(&e).representative(), e);
    }

    #[test]
    fn aux_canonical_on_degenerate_sets() {
        // S₂ = 0 circle: choose S₁ > 0.
        let v = make_qubit(PI, 0.0).unwrap();
        assert_stokes(aux_info(&v).axis(), [1.0, 0.0, 0.0], EPS);
        // Circular poles: choose S₃ > 0.
        let l = make_qubit(PI / 2.0, 3.0 * PI / 2.0).unwrap();
        assert_stokes(aux_info(&l).axis(), [0.0, 0.0, 1.0], EPS);
        assert!(aux_info(&l).is_canonical());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(&make_qubit(PI / 2.0, 0.0).unwrap()), Ok(Parity::Plus));
        assert_eq!(parity(&make_qubit(PI / 2.0, PI).unwrap()), Ok(Parity::Minus));
        assert!(matches!(parity(&make_qubit(0.0, 0.0).unwrap()), Err(Error::ParityUndefined(_))));
    }

    #[test]
    fn reconstruct_examples() {
        let q = make_qubit(PI / 2.0, 0.0).unwrap();
        let aux = aux_info(&q);
        assert!(reconstruct(Parity::Plus, &aux).unwrap().same_state(&q, EPS));
        let anti = reconstruct(Parity::Minus, &aux).unwrap();
        assert_abs_diff_eq!(anti.theta(), PI / 2.0, epsilon = EPS);
        assert_abs_diff_eq!(anti.phi(), PI, epsilon = EPS);
        let h = aux_info(&make_qubit(0.0, 0.0).unwrap());
        assert!(matches!(reconstruct(Parity::Plus, &h), Err(Error::ParityUndefined(_))));
    }

    #[test]
    fn from_direction_round_trip() {
        let q = make_qubit(1.1, 4.0).unwrap();
        let a = AuxiliaryInfo::from_direction(&q.stokes().scale(-3.0)).unwrap();
        assert!(a.same_class(&aux_info(&q), 1e-12));
        assert!(AuxiliaryInfo::from_direction(&StokesVector::default()).is_err());
    }
}
