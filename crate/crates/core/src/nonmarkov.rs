//! BLP non-Markovianity of one qubit–reservoir pair over `[0, τ]`.
//!
//! For the antipodal pair `|ψ₁⟩ = cosθ|1⟩ + sinθ e^{iφ}|0⟩`,
//! `|ψ₂⟩ = sinθ|1⟩ − cosθ e^{iφ}|0⟩` the trace distance is
//! `D = √(cos²2θ·P² + sin²2θ·P)`, a non-decreasing function of `P`, so
//! information flows back exactly where `P` rises.

use num_complex::Complex64;

use crate::channel::{evolve_qubit, QubitState};
use crate::error::{validation, Result};
use crate::kappa::{population, PulseSchedule, SpectralParams};
use crate::trajectory::{decompose, positive_variation, sqrt_positive_variation};

/// Antipodal pure-state pair on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePair {
    theta: f64,
    phi: f64,
}

impl StatePair {
    /// `θ ∈ [0, π/2]`, `φ` any finite angle.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(validation("state-pair angles must be finite"));
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(validation(format!("theta = {theta} outside [0, π/2]")));
        }
        Ok(Self { theta, phi })
    }

    /// `{|1⟩, |0⟩}`.
    pub fn poles() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// `{|+⟩, |−⟩}`.
    pub fn equator(phi: f64) -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_4,
            phi,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn states(&self) -> (QubitState, QubitState) {
        let (s, c) = self.theta.sin_cos();
        let phase = Complex64::from_polar(1.0, self.phi);
        let one = Complex64::new(1.0, 0.0);
        let psi1 = QubitState::pure(one * c, phase * s).expect("unit amplitudes");
        let psi2 = QubitState::pure(one * s, -phase * c).expect("unit amplitudes");
        (psi1, psi2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalPair {
    /// `θ = 0`, `{|1⟩, |0⟩}`.
    Pole,
    /// `θ = π/4`, `{|+⟩, |−⟩}`.
    Equator,
}

impl OptimalPair {
    pub fn label(self) -> &'static str {
        match self {
            OptimalPair::Pole => "pole-pair",
            OptimalPair::Equator => "equator-pair",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonMarkovResult {
    pub gamma: f64,
    pub gamma_theta0: f64,
    pub gamma_theta_pi4: f64,
    pub optimal: OptimalPair,
}

impl NonMarkovResult {
    /// `Γ = max(Γ_{θ=0}, Γ_{θ=π/4})`; ties go to the pole pair.
    pub fn from_components(gamma_theta0: f64, gamma_theta_pi4: f64) -> Self {
        let optimal = if gamma_theta0 >= gamma_theta_pi4 {
            OptimalPair::Pole
        } else {
            OptimalPair::Equator
        };
        Self {
            gamma: gamma_theta0.max(gamma_theta_pi4),
            gamma_theta0,
            gamma_theta_pi4,
            optimal,
        }
    }
}

/// `D(ρ₁(t), ρ₂(t)) = √(cos²2θ·P_t² + sin²2θ·P_t)`.
pub fn pair_trace_distance(
    pair: &StatePair,
    t: f64,
    params: &SpectralParams,
    schedule: &PulseSchedule,
) -> Result<f64> {
    let p = population(t, params, schedule)?;
    let (s2, c2) = (2.0 * pair.theta).sin_cos();
    Ok((c2 * c2 * p * p + s2 * s2 * p).sqrt())
}

/// `(Γ_{θ=0}, Γ_{θ=π/4})`: the summed rises of `P` and of `√P` over `[0, τ]`.
pub fn gamma_components(params: &SpectralParams, schedule: &PulseSchedule) -> (f64, f64) {
    let decomp = decompose(params, schedule);
    (
        positive_variation(&decomp),
        sqrt_positive_variation(&decomp),
    )
}

pub fn non_markovianity(params: &SpectralParams, schedule: &PulseSchedule) -> NonMarkovResult {
    let (a, b) = gamma_components(params, schedule);
    NonMarkovResult::from_components(a, b)
}

/// Brute-force search over antipodal pairs, used to check that the optimum
/// sits at `θ ∈ {0, π/4}`.
pub mod verification {
    use nalgebra::DMatrix;

    use super::*;
    use crate::multiqubit::trace_distance;

    /// Time samples per pulse interval for the sampled variation of `D`.
    pub const TIME_SAMPLES_PER_INTERVAL: usize = 256;

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct GridSearchResult {
        pub gamma: f64,
        pub theta: f64,
        pub phi: f64,
    }

    fn dense(state: &QubitState) -> DMatrix<Complex64> {
        let m = state.to_matrix();
        DMatrix::from_iterator(2, 2, m.iter().copied())
    }

    /// Trace distance of the explicitly evolved pair, via eigenvalues.
    pub fn dense_pair_distance(
        pair: &StatePair,
        t: f64,
        params: &SpectralParams,
        schedule: &PulseSchedule,
    ) -> Result<f64> {
        let (a, b) = pair.states();
        let ra = evolve_qubit(&a, t, params, schedule)?;
        let rb = evolve_qubit(&b, t, params, schedule)?;
        trace_distance(&dense(&ra), &dense(&rb))
    }

    /// Summed rises of `D(t)` on a uniform grid within each pulse interval.
    pub fn sampled_positive_variation(
        pair: &StatePair,
        params: &SpectralParams,
        schedule: &PulseSchedule,
        samples_per_interval: usize,
    ) -> Result<f64> {
        let mut total = 0.0;
        let mut prev = dense_pair_distance(pair, 0.0, params, schedule)?;
        for k in 0..schedule.n_intervals() {
            let (start, end) = (schedule.interval_start(k), schedule.interval_end(k));
            for j in 1..=samples_per_interval {
                let t = if j == samples_per_interval {
                    end
                } else {
                    start + (end - start) * j as f64 / samples_per_interval as f64
                };
                let d = dense_pair_distance(pair, t, params, schedule)?;
                total += (d - prev).max(0.0);
                prev = d;
            }
        }
        Ok(total)
    }

    /// Maximises the sampled information backflow over
    /// `θᵢ = i·(π/2)/theta_steps`, `φⱼ = j·2π/phi_steps`.
    pub fn blp_grid_search(
        params: &SpectralParams,
        schedule: &PulseSchedule,
        theta_steps: usize,
        phi_steps: usize,
    ) -> Result<GridSearchResult> {
        if theta_steps < 8 {
            return Err(validation("theta grid needs at least 8 steps"));
        }
        if phi_steps == 0 {
            return Err(validation("phi grid needs at least 1 step"));
        }
        let mut best = GridSearchResult {
            gamma: f64::NEG_INFINITY,
            theta: 0.0,
            phi: 0.0,
        };
        for i in 0..theta_steps {
            let theta = i as f64 * std::f64::consts::FRAC_PI_2 / theta_steps as f64;
            for j in 0..phi_steps {
                let phi = j as f64 * std::f64::consts::TAU / phi_steps as f64;
                let pair = StatePair::new(theta, phi)?;
                let gamma =
                    sampled_positive_variation(&pair, params, schedule, TIME_SAMPLES_PER_INTERVAL)?;
                if gamma > best.gamma {
                    best = GridSearchResult { gamma, theta, phi };
                }
            }
        }
        Ok(best)
    }
}
