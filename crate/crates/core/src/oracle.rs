//! Independent reference for `κ_t`: a qubit amplitude `c` coupled to one
//! damped pseudomode `b`,
//!
//! ```text
//! ċ = −g·s(t)·b,   ḃ = −λb + g·s(t)·c,   g = √(γ₀λ/2),   s(t) = (−1)^⌊t/T⌋
//! ```
//!
//! which reproduces the Lorentzian memory kernel exactly. Integrated with
//! classical fixed-step RK4, split at every pulse so no step straddles a
//! sign flip.

use crate::error::{validation, Result};
use crate::kappa::{Dynamics, PulseSchedule, SpectralParams};

/// Step used by [`verify_kappa`] unless the stability bound is tighter.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Amplitudes at time `t`; `c(0) = 1`, `b(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudomodeState {
    pub c: f64,
    pub b: f64,
    pub t: f64,
}

impl PseudomodeState {
    pub fn initial() -> Self {
        Self {
            c: 1.0,
            b: 0.0,
            t: 0.0,
        }
    }
}

/// Knobs used by regression tests and the CLI's negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Flip the coupling sign at each pulse. Off models an undriven qubit.
    pub flip_sign: bool,
    /// Place integration nodes on every pulse time.
    pub segment_at_pulses: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            flip_sign: true,
            segment_at_pulses: true,
        }
    }
}

/// Integration nodes with the sampled amplitudes.
#[derive(Debug, Clone, Default)]
pub struct PseudomodeTrajectory {
    pub times: Vec<f64>,
    pub c: Vec<f64>,
    pub b: Vec<f64>,
    /// `2λ∫₀ᵗ b² dt'`, the excitation lost through the pseudomode's decay.
    pub leaked: Vec<f64>,
}

impl PseudomodeTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> PseudomodeState {
        PseudomodeState {
            c: self.c[i],
            b: self.b[i],
            t: self.times[i],
        }
    }

    pub fn last(&self) -> Option<PseudomodeState> {
        (!self.is_empty()).then(|| self.state(self.len() - 1))
    }
}

/// Largest admissible step: `min(T, 1/λ, 1/(|d| + λ))/50`.
pub fn max_step(params: &SpectralParams, schedule: &PulseSchedule) -> f64 {
    let lambda = params.lambda();
    schedule
        .interval()
        .min(1.0 / lambda)
        .min(1.0 / (params.d_abs() + lambda))
        / 50.0
}

pub fn integrate_pseudomode(
    params: &SpectralParams,
    schedule: &PulseSchedule,
    step: f64,
) -> Result<PseudomodeTrajectory> {
    integrate_pseudomode_with(params, schedule, step, OracleOptions::default())
}

pub fn integrate_pseudomode_with(
    params: &SpectralParams,
    schedule: &PulseSchedule,
    step: f64,
    options: OracleOptions,
) -> Result<PseudomodeTrajectory> {
    let bound = max_step(params, schedule);
    if !(step.is_finite() && step > 0.0) {
        return Err(validation(format!(
            "oracle step must be positive, got {step}"
        )));
    }
    if step > bound {
        return Err(validation(format!(
            "oracle step {step} exceeds the stability bound {bound}"
        )));
    }

    let g = params.coupling_squared().sqrt();
    let lambda = params.lambda();
    let period = schedule.interval();
    let sign = |t: f64| -> f64 {
        if options.flip_sign && (t / period).floor() as i64 % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    };
    // (c, b, ∫b²) at time t with coupling sign s.
    let rhs = |y: [f64; 3], s: f64| -> [f64; 3] {
        [-g * s * y[1], -lambda * y[1] + g * s * y[0], y[1] * y[1]]
    };

    let segments: Vec<(f64, f64, Option<f64>)> = if options.segment_at_pulses {
        (0..schedule.n_intervals())
            .map(|k| {
                let (a, b) = (schedule.interval_start(k), schedule.interval_end(k));
                let s = if options.flip_sign && k % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                (a, b, Some(s))
            })
            .collect()
    } else {
        vec![(0.0, schedule.tau(), None)]
    };

    let mut traj = PseudomodeTrajectory::default();
    let mut y = [1.0, 0.0, 0.0];
    let push = |traj: &mut PseudomodeTrajectory, t: f64, y: &[f64; 3]| {
        traj.times.push(t);
        traj.c.push(y[0]);
        traj.b.push(y[1]);
        traj.leaked.push(2.0 * lambda * y[2]);
    };
    push(&mut traj, 0.0, &y);

    for (start, end, fixed_sign) in segments {
        let len = end - start;
        let m = (len / step).ceil().max(1.0) as usize;
        let h = len / m as f64;
        for i in 0..m {
            let t = start + i as f64 * h;
            // Inside a segment the sign is constant; unsegmented runs sample it per stage.
            let s_at = |tt: f64| fixed_sign.unwrap_or_else(|| sign(tt));
            let k1 = rhs(y, s_at(t));
            let k2 = rhs(axpy(&y, 0.5 * h, &k1), s_at(t + 0.5 * h));
            let k3 = rhs(axpy(&y, 0.5 * h, &k2), s_at(t + 0.5 * h));
            let k4 = rhs(axpy(&y, h, &k3), s_at(t + h));
            for j in 0..3 {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
            let t_next = if i + 1 == m {
                end
            } else {
                start + (i + 1) as f64 * h
            };
            push(&mut traj, t_next, &y);
        }
    }
    Ok(traj)
}

fn axpy(y: &[f64; 3], a: f64, x: &[f64; 3]) -> [f64; 3] {
    [y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2]]
}

/// Maximum `|κ_analytic − c_oracle|` over about `grid_points` oracle nodes.
pub fn verify_kappa(
    params: &SpectralParams,
    schedule: &PulseSchedule,
    grid_points: usize,
) -> Result<f64> {
    verify_kappa_with(params, schedule, grid_points, OracleOptions::default())
}

pub fn verify_kappa_with(
    params: &SpectralParams,
    schedule: &PulseSchedule,
    grid_points: usize,
    options: OracleOptions,
) -> Result<f64> {
    if grid_points < 2 {
        return Err(validation("verification grid needs at least 2 points"));
    }
    let step = DEFAULT_STEP.min(max_step(params, schedule));
    let traj = integrate_pseudomode_with(params, schedule, step, options)?;
    let dynamics = Dynamics::new(*params, *schedule);
    let stride = (traj.len() / grid_points).max(1);
    let mut worst: f64 = 0.0;
    for i in (0..traj.len())
        .step_by(stride)
        .chain(std::iter::once(traj.len() - 1))
    {
        let kappa = dynamics.kappa(traj.times[i].min(schedule.tau()))?;
        worst = worst.max((kappa - traj.c[i]).abs());
    }
    Ok(worst)
}
