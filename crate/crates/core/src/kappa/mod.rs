//! Decoherence amplitude `κ_t` of one qubit in a Lorentzian reservoir under
//! periodic instantaneous π-pulses.
//!
//! Between pulses the amplitude obeys `κ̈ + λκ̇ + (γ₀λ/2)κ = 0`; each pulse
//! flips the sign of the system–bath coupling, which keeps `κ` continuous
//! and reverses `κ̇`. The solution is piecewise analytic and is evaluated
//! from per-interval coefficients ([`RecurrenceCoefficients`]).

mod coefficients;
mod params;

pub(crate) use coefficients::RealHyperbolic;
pub use coefficients::{Branch, IntervalCoefficients, RecurrenceCoefficients};
pub use params::{PulseSchedule, Regime, Side, SpectralParams, BRANCH_TOLERANCE};

use crate::error::{Error, Result};

/// Amplitude, population and their rates for one `(SpectralParams, PulseSchedule)`.
#[derive(Debug, Clone)]
pub struct Dynamics {
    params: SpectralParams,
    schedule: PulseSchedule,
    coefficients: RecurrenceCoefficients,
    hyp: RealHyperbolic,
}

impl Dynamics {
    pub fn new(params: SpectralParams, schedule: PulseSchedule) -> Self {
        let coefficients = RecurrenceCoefficients::new(&params, &schedule);
        Self::from_coefficients(params, schedule, coefficients)
    }

    /// Uses the given branch regardless of the parameters.
    pub fn with_branch(params: SpectralParams, schedule: PulseSchedule, branch: Branch) -> Self {
        let coefficients = RecurrenceCoefficients::with_branch(&params, &schedule, branch);
        Self::from_coefficients(params, schedule, coefficients)
    }

    pub fn from_coefficients(
        params: SpectralParams,
        schedule: PulseSchedule,
        coefficients: RecurrenceCoefficients,
    ) -> Self {
        assert_eq!(
            coefficients.intervals().len(),
            schedule.n_intervals(),
            "coefficients do not match the schedule"
        );
        Self {
            params,
            schedule,
            coefficients,
            hyp: RealHyperbolic::new(params.d_squared()),
        }
    }

    pub fn params(&self) -> &SpectralParams {
        &self.params
    }

    pub fn schedule(&self) -> &PulseSchedule {
        &self.schedule
    }

    pub fn coefficients(&self) -> &RecurrenceCoefficients {
        &self.coefficients
    }

    pub fn branch(&self) -> Branch {
        self.coefficients.branch()
    }

    /// `κ` at offset `u ∈ [0, T]` into interval `k`.
    pub fn kappa_in(&self, k: usize, u: f64) -> f64 {
        let c = self.coefficients.interval(k);
        let lambda = self.params.lambda();
        let envelope = (-0.5 * lambda * u).exp();
        match self.coefficients.branch() {
            Branch::Generic => {
                let x = 0.5 * u;
                envelope * (c.first * self.hyp.cosh(x) + c.second * self.hyp.sinhc(x))
            }
            Branch::Degenerate => envelope * (u * c.first + (1.0 + 0.5 * lambda * u) * c.second),
        }
    }

    /// `dκ/dt` at offset `u ∈ [0, T]` into interval `k`; at `u = 0` and
    /// `u = T` this is the one-sided limit from inside the interval.
    pub fn kappa_dot_in(&self, k: usize, u: f64) -> f64 {
        let c = self.coefficients.interval(k);
        let lambda = self.params.lambda();
        let envelope = (-0.5 * lambda * u).exp();
        match self.coefficients.branch() {
            Branch::Generic => {
                let x = 0.5 * u;
                let ch = self.hyp.cosh(x);
                let sh = self.hyp.sinhc(x);
                let value = c.first * ch + c.second * sh;
                let slope = 0.5 * (c.first * self.hyp.d_squared() * sh + c.second * ch);
                envelope * (slope - 0.5 * lambda * value)
            }
            Branch::Degenerate => {
                let rate = c.first + 0.5 * lambda * c.second;
                let value = c.second + u * rate;
                envelope * (rate - 0.5 * lambda * value)
            }
        }
    }

    /// `P` at offset `u` into interval `k`.
    pub fn population_in(&self, k: usize, u: f64) -> f64 {
        let kappa = self.kappa_in(k, u);
        kappa * kappa
    }

    /// `dP/dt = 2κκ̇` at offset `u` into interval `k`.
    pub fn population_dot_in(&self, k: usize, u: f64) -> f64 {
        2.0 * self.kappa_in(k, u) * self.kappa_dot_in(k, u)
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        self.schedule.check_time(t)?;
        // t/T can round below an integer, so pulse times are snapped to the
        // interval that starts there.
        if let Some(pulse) = self.schedule.pulse_at(t) {
            return Ok((pulse, 0.0));
        }
        let k = self.schedule.interval_index(t);
        let u = (t - self.schedule.interval_start(k)).max(0.0);
        Ok((k, u))
    }

    fn locate_sided(&self, t: f64, side: Side) -> Result<(usize, f64)> {
        self.schedule.check_time(t)?;
        match (self.schedule.pulse_at(t), side) {
            (Some(pulse), Side::Left) => Ok((pulse - 1, self.schedule.interval())),
            (Some(pulse), Side::Right) => Ok((pulse, 0.0)),
            (None, _) => self.locate(t),
        }
    }

    pub fn kappa(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(1.0);
        }
        let (k, u) = self.locate(t)?;
        Ok(self.kappa_in(k, u))
    }

    pub fn population(&self, t: f64) -> Result<f64> {
        self.kappa(t).map(|k| k * k)
    }

    /// `dκ/dt`; fails at a pulse time, where only one-sided limits exist.
    pub fn kappa_dot(&self, t: f64) -> Result<f64> {
        self.schedule.check_time(t)?;
        if let Some(pulse) = self.schedule.pulse_at(t) {
            return Err(Error::AmbiguousPulseTime { t, pulse });
        }
        let (k, u) = self.locate(t)?;
        Ok(self.kappa_dot_in(k, u))
    }

    /// One-sided `dκ/dt`; away from pulse times both sides agree.
    pub fn kappa_dot_sided(&self, t: f64, side: Side) -> Result<f64> {
        let (k, u) = self.locate_sided(t, side)?;
        Ok(self.kappa_dot_in(k, u))
    }

    pub fn population_dot(&self, t: f64) -> Result<f64> {
        let rate = self.kappa_dot(t)?;
        Ok(2.0 * self.kappa(t)? * rate)
    }

    pub fn population_dot_sided(&self, t: f64, side: Side) -> Result<f64> {
        let (k, u) = self.locate_sided(t, side)?;
        Ok(self.population_dot_in(k, u))
    }
}

/// `κ_t` for `t ∈ [0, τ]`.
pub fn kappa(t: f64, params: &SpectralParams, schedule: &PulseSchedule) -> Result<f64> {
    Dynamics::new(*params, *schedule).kappa(t)
}

/// `dκ/dt`; errors exactly at a pulse time (use [`kappa_dot_sided`]).
pub fn kappa_dot(t: f64, params: &SpectralParams, schedule: &PulseSchedule) -> Result<f64> {
    Dynamics::new(*params, *schedule).kappa_dot(t)
}

pub fn kappa_dot_sided(
    t: f64,
    params: &SpectralParams,
    schedule: &PulseSchedule,
    side: Side,
) -> Result<f64> {
    Dynamics::new(*params, *schedule).kappa_dot_sided(t, side)
}

/// Scaled excited-state population `P_t = κ_t²`.
pub fn population(t: f64, params: &SpectralParams, schedule: &PulseSchedule) -> Result<f64> {
    Dynamics::new(*params, *schedule).population(t)
}

/// `dP/dt = 2κκ̇`, with the same one-sidedness contract as [`kappa_dot`].
pub fn population_dot(t: f64, params: &SpectralParams, schedule: &PulseSchedule) -> Result<f64> {
    Dynamics::new(*params, *schedule).population_dot(t)
}

pub fn population_dot_sided(
    t: f64,
    params: &SpectralParams,
    schedule: &PulseSchedule,
    side: Side,
) -> Result<f64> {
    Dynamics::new(*params, *schedule).population_dot_sided(t, side)
}

/// Amplitude without pulses,
/// `e^{−λt/2}[cosh(dt/2) + (λ/d)sinh(dt/2)]`.
pub fn free_decay_kappa(t: f64, params: &SpectralParams) -> f64 {
    let hyp = RealHyperbolic::new(params.d_squared());
    let x = 0.5 * t;
    (-0.5 * params.lambda() * t).exp() * (hyp.cosh(x) + params.lambda() * hyp.sinhc(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(g: f64, n: usize) -> Dynamics {
        Dynamics::new(
            SpectralParams::new(g, 1.0).unwrap(),
            PulseSchedule::new(10.0, n).unwrap(),
        )
    }

    #[test]
    fn starts_at_one() {
        for &(g, n) in &[(0.2, 0usize), (5.0, 7), (0.5, 3), (0.5, 0)] {
            let d = setup(g, n);
            assert_eq!(d.kappa(0.0).unwrap(), 1.0);
            assert_eq!(d.population(0.0).unwrap(), 1.0);
            assert!(d.kappa_dot(0.0).unwrap().abs() < 1e-15);
            assert!(d.population_dot(0.0).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_times_outside_window() {
        let d = setup(0.2, 3);
        assert!(matches!(d.kappa(-0.1), Err(Error::Domain { .. })));
        assert!(matches!(d.kappa(10.5), Err(Error::Domain { .. })));
        assert!(matches!(d.kappa(f64::NAN), Err(Error::Domain { .. })));
        assert!(d.kappa(10.0).is_ok());
    }

    #[test]
    fn derivative_at_pulse_needs_a_side() {
        let d = setup(5.0, 4);
        let t = d.schedule().pulse_time(1);
        assert!(matches!(
            d.kappa_dot(t),
            Err(Error::AmbiguousPulseTime { pulse: 1, .. })
        ));
        assert!(matches!(
            d.population_dot(t),
            Err(Error::AmbiguousPulseTime { .. })
        ));
        let left = d.kappa_dot_sided(t, Side::Left).unwrap();
        let right = d.kappa_dot_sided(t, Side::Right).unwrap();
        assert!((left + right).abs() < 1e-12, "slope flips: {left} {right}");
        assert!(left.abs() > 1e-3);
    }

    #[test]
    fn no_pulse_matches_closed_form() {
        for &g in &[0.05, 0.2, 0.45, 0.55, 1.0, 5.0] {
            let p = SpectralParams::new(g, 1.0).unwrap();
            let d = setup(g, 0);
            for i in 0..=200 {
                let t = i as f64 * 0.05;
                let a = d.kappa(t).unwrap();
                let b = free_decay_kappa(t, &p);
                assert!((a - b).abs() < 1e-12, "g={g} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn continuous_across_pulses() {
        for &g in &[0.2, 0.5, 5.0] {
            for &n in &[1usize, 5, 10, 20, 25] {
                let d = setup(g, n);
                let period = d.schedule().interval();
                for k in 0..n {
                    let left = d.kappa_in(k, period);
                    let right = d.kappa_in(k + 1, 0.0);
                    assert!((left - right).abs() < 1e-12, "g={g} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn degenerate_no_pulse_is_critically_damped() {
        let d = setup(0.5, 0);
        assert_eq!(d.branch(), Branch::Degenerate);
        for i in 0..=100 {
            let t = i as f64 * 0.1;
            let expected = (-0.5 * t).exp() * (1.0 + 0.5 * t);
            assert!((d.kappa(t).unwrap() - expected).abs() < 1e-14);
        }
    }
}
