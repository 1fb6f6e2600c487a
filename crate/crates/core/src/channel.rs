//! Single-qubit amplitude-damping channel with Kraus pair
//! `K₁ = κ|1⟩⟨1| + |0⟩⟨0|`, `K₂ = √(1 − κ²)|0⟩⟨1|`.
//!
//! Matrices use the basis order `(|0⟩, |1⟩)`.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{validation, Result};
use crate::kappa::{kappa, PulseSchedule, SpectralParams};

const STATE_TOLERANCE: f64 = 1e-12;

/// Qubit density matrix, stored as the excited population `ρ₁₁` and the
/// coherence `ρ₁₀ = ⟨1|ρ|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    rho11: f64,
    rho10: Complex64,
}

impl QubitState {
    pub fn new(rho11: f64, rho10: Complex64) -> Result<Self> {
        if !rho11.is_finite() || !rho10.re.is_finite() || !rho10.im.is_finite() {
            return Err(validation("qubit state entries must be finite"));
        }
        if !(-STATE_TOLERANCE..=1.0 + STATE_TOLERANCE).contains(&rho11) {
            return Err(validation(format!("rho11 = {rho11} outside [0, 1]")));
        }
        if rho10.norm_sqr() > rho11 * (1.0 - rho11) + STATE_TOLERANCE {
            return Err(validation(format!(
                "coherence |rho10|² = {} exceeds rho11(1 − rho11); state is not positive",
                rho10.norm_sqr()
            )));
        }
        Ok(Self { rho11, rho10 })
    }

    pub fn ground() -> Self {
        Self {
            rho11: 0.0,
            rho10: Complex64::new(0.0, 0.0),
        }
    }

    pub fn excited() -> Self {
        Self {
            rho11: 1.0,
            rho10: Complex64::new(0.0, 0.0),
        }
    }

    /// `|ψ⟩⟨ψ|` for `|ψ⟩ = a|1⟩ + b|0⟩`, normalised.
    pub fn pure(excited: Complex64, ground: Complex64) -> Result<Self> {
        let norm = (excited.norm_sqr() + ground.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(validation(
                "pure state amplitudes must be nonzero and finite",
            ));
        }
        let (a, b) = (excited / norm, ground / norm);
        Ok(Self {
            rho11: a.norm_sqr(),
            rho10: a * b.conj(),
        })
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }

    pub fn rho00(&self) -> f64 {
        1.0 - self.rho11
    }

    pub fn rho10(&self) -> Complex64 {
        self.rho10
    }

    /// Dense 2×2 matrix in the `(|0⟩, |1⟩)` basis.
    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::new(self.rho00(), 0.0),
            self.rho10.conj(),
            self.rho10,
            Complex64::new(self.rho11, 0.0),
        )
    }

    pub fn from_matrix(m: &Matrix2<Complex64>) -> Result<Self> {
        let herm = (m - m.adjoint()).norm();
        if herm > STATE_TOLERANCE {
            return Err(validation(format!(
                "matrix is not Hermitian (residual {herm})"
            )));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > STATE_TOLERANCE {
            return Err(validation(format!("trace {} is not 1", trace.re)));
        }
        Self::new(m[(1, 1)].re, m[(1, 0)])
    }
}

/// Amplitude-damping Kraus pair, stored as the scalar `κ_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausPair {
    kappa: f64,
}

impl KrausPair {
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa.abs() > 1.0 + 1e-12 {
            return Err(validation(format!("kappa = {kappa} outside [-1, 1]")));
        }
        Ok(Self {
            kappa: kappa.clamp(-1.0, 1.0),
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Off-diagonal weight of `K₂`, `√(1 − κ²)`.
    pub fn decay_amplitude(&self) -> f64 {
        (1.0 - self.kappa * self.kappa).max(0.0).sqrt()
    }

    pub fn k1(&self) -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(self.kappa, 0.0),
        )
    }

    pub fn k2(&self) -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(self.decay_amplitude(), 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    /// `‖K₁†K₁ + K₂†K₂ − I‖_F`.
    pub fn completeness_residual(&self) -> f64 {
        let (k1, k2) = (self.k1(), self.k2());
        (k1.adjoint() * k1 + k2.adjoint() * k2 - Matrix2::identity()).norm()
    }

    /// `Σᵢ Kᵢ ρ Kᵢ†` by dense matrix products.
    pub fn apply_dense(&self, rho: &Matrix2<Complex64>) -> Matrix2<Complex64> {
        let (k1, k2) = (self.k1(), self.k2());
        k1 * rho * k1.adjoint() + k2 * rho * k2.adjoint()
    }

    /// Closed-form action: `ρ₁₁ → κ²ρ₁₁`, `ρ₁₀ → κρ₁₀`.
    pub fn apply(&self, rho: &QubitState) -> QubitState {
        QubitState {
            rho11: self.kappa * self.kappa * rho.rho11,
            rho10: rho.rho10 * self.kappa,
        }
    }
}

pub fn kraus_pair(t: f64, params: &SpectralParams, schedule: &PulseSchedule) -> Result<KrausPair> {
    KrausPair::from_kappa(kappa(t, params, schedule)?)
}

/// Qubit state at time `t` from `ρ₀` at `t = 0`.
pub fn evolve_qubit(
    rho0: &QubitState,
    t: f64,
    params: &SpectralParams,
    schedule: &PulseSchedule,
) -> Result<QubitState> {
    Ok(kraus_pair(t, params, schedule)?.apply(rho0))
}
