use crate::error::{validation, Error, Result};

/// Relative width of the band around `λ = 2γ₀` in which the critically
/// damped formulas replace the generic ones.
pub const BRANCH_TOLERANCE: f64 = 1e-8;

/// Coupling regime of a Lorentzian reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `γ₀ < λ/2`: overdamped amplitude, Markovian without control.
    Weak,
    /// `γ₀ = λ/2` within [`BRANCH_TOLERANCE`].
    Critical,
    /// `γ₀ > λ/2`: oscillating amplitude.
    Strong,
}

/// Lorentzian reservoir `J(ω) = γ₀λ² / (2π[(ω₀ − ω)² + λ²])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    gamma0: f64,
    lambda: f64,
}

impl SpectralParams {
    pub fn new(gamma0: f64, lambda: f64) -> Result<Self> {
        if !gamma0.is_finite() || !lambda.is_finite() {
            return Err(validation(format!(
                "spectral parameters must be finite (gamma0={gamma0}, lambda={lambda})"
            )));
        }
        if gamma0 <= 0.0 {
            return Err(validation(format!("gamma0 must be positive, got {gamma0}")));
        }
        if lambda <= 0.0 {
            return Err(validation(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self { gamma0, lambda })
    }

    /// Markovian decay rate γ₀.
    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    /// Spectral width λ.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `d² = λ² − 2λγ₀`; negative in the strong-coupling regime.
    pub fn d_squared(&self) -> f64 {
        self.lambda * (self.lambda - 2.0 * self.gamma0)
    }

    /// `|d|`, the real magnitude of `d = √(λ² − 2λγ₀)`.
    pub fn d_abs(&self) -> f64 {
        self.d_squared().abs().sqrt()
    }

    /// Squared qubit/pseudomode coupling `g² = γ₀λ/2`.
    pub fn coupling_squared(&self) -> f64 {
        0.5 * self.gamma0 * self.lambda
    }

    pub fn is_weak(&self) -> bool {
        self.gamma0 < 0.5 * self.lambda
    }

    pub fn is_strong(&self) -> bool {
        self.gamma0 > 0.5 * self.lambda
    }

    /// Whether the critically damped formulas are used.
    pub fn is_degenerate(&self) -> bool {
        (self.lambda - 2.0 * self.gamma0).abs() < BRANCH_TOLERANCE * self.lambda
    }

    pub fn regime(&self) -> Regime {
        if self.is_degenerate() {
            Regime::Critical
        } else if self.is_weak() {
            Regime::Weak
        } else {
            Regime::Strong
        }
    }
}

/// Which one-sided limit to take at a pulse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `n` instantaneous π-pulses evenly spaced inside `(0, τ)`.
///
/// The inter-pulse interval is `T = τ/(n + 1)`, so pulses sit at
/// `T, 2T, …, nT` and the measurement time `τ` closes interval `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSchedule {
    tau: f64,
    n_pulses: usize,
    interval: f64,
}

impl PulseSchedule {
    pub fn new(tau: f64, n_pulses: usize) -> Result<Self> {
        if !tau.is_finite() || tau <= 0.0 {
            return Err(validation(format!(
                "driving time must be positive and finite, got {tau}"
            )));
        }
        Ok(Self {
            tau,
            n_pulses,
            interval: tau / (n_pulses as f64 + 1.0),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n_pulses(&self) -> usize {
        self.n_pulses
    }

    /// Inter-pulse interval `T`.
    pub fn interval(&self) -> f64 {
        self.interval
    }

    /// Number of free-evolution intervals, `n + 1`.
    pub fn n_intervals(&self) -> usize {
        self.n_pulses + 1
    }

    /// Time of pulse `k` (1-based), `k·T`.
    pub fn pulse_time(&self, k: usize) -> f64 {
        k as f64 * self.interval
    }

    pub fn pulse_times(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.n_pulses).map(|k| self.pulse_time(k))
    }

    /// Start time of interval `k` (0-based).
    pub fn interval_start(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.pulse_time(k)
        }
    }

    /// End time of interval `k`; the last interval ends exactly at `τ`.
    pub fn interval_end(&self, k: usize) -> f64 {
        if k >= self.n_pulses {
            self.tau
        } else {
            self.pulse_time(k + 1)
        }
    }

    pub fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t < 0.0 || t > self.tau {
            return Err(Error::Domain { t, tau: self.tau });
        }
        Ok(())
    }

    /// `⌊t/T⌋`, clamped to `n` at `t = τ`.
    pub fn interval_index(&self, t: f64) -> usize {
        let k = (t / self.interval).floor();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(self.n_pulses)
        }
    }

    /// Index of the pulse `t` sits on, if any, to within a few ulps of `T`.
    pub fn pulse_at(&self, t: f64) -> Option<usize> {
        if self.n_pulses == 0 {
            return None;
        }
        let x = t / self.interval;
        let k = x.round();
        if k < 1.0 || k > self.n_pulses as f64 {
            return None;
        }
        ((x - k).abs() <= 8.0 * f64::EPSILON * k.max(1.0)).then_some(k as usize)
    }
}
