use super::params::{PulseSchedule, SpectralParams};

/// Which closed form of the amplitude is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `λ ≠ 2γ₀`: `cosh`/`sinh` of `Δ·d` (trigonometric when `d` is imaginary).
    Generic,
    /// `λ = 2γ₀`: critically damped, polynomial times exponential.
    Degenerate,
}

/// Coefficient pair for one free-evolution interval.
///
/// Both entries carry the envelope accumulated up to the start of the
/// interval, `e^{−λkT/2}`, so the amplitude inside interval `k` reads
/// `e^{−λu/2}·[first·cosh(ud/2) + second·sinh(ud/2)/d]` (generic) or
/// `e^{−λu/2}·[u·first + (1 + λu/2)·second]` (degenerate), with `u = t − kT`.
///
/// Generic: `first = A_k e^{−λkT/2}`, `second = B_k d e^{−λkT/2}`.
/// Degenerate: `first = F₁ₖ e^{−λkT/2}`, `second = F₂ₖ e^{−λkT/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalCoefficients {
    pub first: f64,
    pub second: f64,
}

/// `cosh(x·d)` and `sinh(x·d)/d` kept real for either sign of `d²`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RealHyperbolic {
    d_squared: f64,
    omega: f64,
}

impl RealHyperbolic {
    pub(crate) fn new(d_squared: f64) -> Self {
        Self {
            d_squared,
            omega: d_squared.abs().sqrt(),
        }
    }

    pub(crate) fn d_squared(&self) -> f64 {
        self.d_squared
    }

    /// `cosh(x·d)`; `cos(x·|d|)` when `d` is imaginary.
    pub(crate) fn cosh(&self, x: f64) -> f64 {
        if self.d_squared >= 0.0 {
            (x * self.omega).cosh()
        } else {
            (x * self.omega).cos()
        }
    }

    /// `sinh(x·d)/d`; `sin(x·|d|)/|d|` when `d` is imaginary, `x` at `d = 0`.
    pub(crate) fn sinhc(&self, x: f64) -> f64 {
        if self.omega == 0.0 {
            x
        } else if self.d_squared > 0.0 {
            (x * self.omega).sinh() / self.omega
        } else {
            (x * self.omega).sin() / self.omega
        }
    }
}

/// Per-interval coefficients of the piecewise-analytic amplitude.
///
/// Immutable once built; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoefficients {
    branch: Branch,
    intervals: Vec<IntervalCoefficients>,
}

impl RecurrenceCoefficients {
    /// Builds the coefficients, choosing the branch from the parameters.
    pub fn new(params: &SpectralParams, schedule: &PulseSchedule) -> Self {
        let branch = if params.is_degenerate() {
            Branch::Degenerate
        } else {
            Branch::Generic
        };
        Self::with_branch(params, schedule, branch)
    }

    /// Builds the coefficients from the closed forms of the requested branch.
    ///
    /// Forcing [`Branch::Degenerate`] away from `λ = 2γ₀` evaluates the
    /// critically damped formulas with the given `λ`, ignoring `γ₀`.
    pub fn with_branch(params: &SpectralParams, schedule: &PulseSchedule, branch: Branch) -> Self {
        let intervals = match branch {
            Branch::Generic => generic_closed_form(params, schedule),
            Branch::Degenerate => degenerate_closed_form(params, schedule),
        };
        let intervals = match intervals {
            Some(v) => v,
            None => transfer_iteration(params, schedule, branch),
        };
        Self { branch, intervals }
    }

    /// Builds the coefficients by propagating the amplitude and its slope
    /// across each pulse (continuity of the amplitude, sign flip of the
    /// slope), instead of the closed forms.
    pub fn by_iteration(params: &SpectralParams, schedule: &PulseSchedule, branch: Branch) -> Self {
        Self {
            branch,
            intervals: transfer_iteration(params, schedule, branch),
        }
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn intervals(&self) -> &[IntervalCoefficients] {
        &self.intervals
    }

    pub fn interval(&self, k: usize) -> IntervalCoefficients {
        self.intervals[k]
    }
}

/// Eigen-decomposition of the per-pulse map:
/// `A_k = α₊m₊ᵏ + α₋m₋ᵏ`, `B_k = β₊m₊ᵏ + β₋m₋ᵏ`, with `m± = (λ/d)sinh(Td/2) ± ξ`.
///
/// Returns `None` when `sinh(Td/2)` is too close to zero for `β±` to be
/// evaluated accurately (strong coupling with `T|d|/2` near a multiple of π).
fn generic_closed_form(
    params: &SpectralParams,
    schedule: &PulseSchedule,
) -> Option<Vec<IntervalCoefficients>> {
    let lambda = params.lambda();
    let period = schedule.interval();
    let hyp = RealHyperbolic::new(params.d_squared());

    let c = hyp.cosh(period / 2.0);
    let s = hyp.sinhc(period / 2.0);
    if (lambda * s).abs() < 1e-6 {
        return None;
    }
    let ls = lambda * s;
    let xi = (1.0 + ls * ls).sqrt();
    let envelope = (-lambda * period / 2.0).exp();
    let m_plus = (ls + xi) * envelope;
    let m_minus = (ls - xi) * envelope;
    let alpha_plus = 0.5 * (1.0 + c / xi);
    let alpha_minus = 0.5 * (1.0 - c / xi);
    // β±·d, real in both regimes.
    let beta_plus = alpha_plus * (ls + xi - c) / s;
    let beta_minus = alpha_minus * (ls - xi - c) / s;

    let mut out = Vec::with_capacity(schedule.n_intervals());
    let (mut pow_plus, mut pow_minus) = (1.0, 1.0);
    for _ in 0..schedule.n_intervals() {
        let first = alpha_plus * pow_plus + alpha_minus * pow_minus;
        let second = beta_plus * pow_plus + beta_minus * pow_minus;
        if !(first.is_finite() && second.is_finite()) {
            return None;
        }
        out.push(IntervalCoefficients { first, second });
        pow_plus *= m_plus;
        pow_minus *= m_minus;
    }
    // Interval 0 holds exactly: A₀ = 1, B₀d = λ.
    out[0] = IntervalCoefficients {
        first: 1.0,
        second: lambda,
    };
    Some(out)
}

/// `F₁ₖ = λ²T(μ₊ᵏ − μ₋ᵏ)/(4√((λT)² + 4))`, `F₂ₖ = (μ₊ᵏ + μ₋ᵏ)/2 + 4F₁ₖ/(λ²T)`.
fn degenerate_closed_form(
    params: &SpectralParams,
    schedule: &PulseSchedule,
) -> Option<Vec<IntervalCoefficients>> {
    let lambda = params.lambda();
    let period = schedule.interval();
    let lt = lambda * period;
    let root = (lt * lt + 4.0).sqrt();
    let envelope = (-lt / 2.0).exp();
    let mu_plus = 0.5 * (lt + root) * envelope;
    let mu_minus = 0.5 * (lt - root) * envelope;

    let mut out = Vec::with_capacity(schedule.n_intervals());
    let (mut pow_plus, mut pow_minus) = (1.0, 1.0);
    for _ in 0..schedule.n_intervals() {
        let f1 = lambda * lt * (pow_plus - pow_minus) / (4.0 * root);
        let f2 = 0.5 * (pow_plus + pow_minus) + 4.0 * f1 / (lambda * lt);
        if !(f1.is_finite() && f2.is_finite()) {
            return None;
        }
        out.push(IntervalCoefficients {
            first: f1,
            second: f2,
        });
        pow_plus *= mu_plus;
        pow_minus *= mu_minus;
    }
    Some(out)
}

fn transfer_iteration(
    params: &SpectralParams,
    schedule: &PulseSchedule,
    branch: Branch,
) -> Vec<IntervalCoefficients> {
    let lambda = params.lambda();
    let period = schedule.interval();
    let envelope = (-lambda * period / 2.0).exp();
    let mut out = Vec::with_capacity(schedule.n_intervals());
    match branch {
        Branch::Generic => {
            let hyp = RealHyperbolic::new(params.d_squared());
            let c = hyp.cosh(period / 2.0);
            let s = hyp.sinhc(period / 2.0);
            let d2 = hyp.d_squared();
            let (mut a, mut b) = (1.0, lambda);
            for _ in 0..schedule.n_intervals() {
                out.push(IntervalCoefficients {
                    first: a,
                    second: b,
                });
                let value = a * c + b * s;
                let slope = 0.5 * (a * d2 * s + b * c);
                a = envelope * value;
                b = envelope * 2.0 * (lambda * value - slope);
            }
        }
        Branch::Degenerate => {
            // f(u) = F₂ + u(F₁ + λF₂/2); amplitude continuous, slope of
            // e^{−λu/2}f flips sign at each pulse.
            let (mut f1, mut f2) = (0.0, 1.0);
            for _ in 0..schedule.n_intervals() {
                out.push(IntervalCoefficients {
                    first: f1,
                    second: f2,
                });
                let rate = f1 + 0.5 * lambda * f2;
                let value = f2 + period * rate;
                let new_f2 = envelope * value;
                let new_rate = envelope * (lambda * value - rate);
                f1 = new_rate - 0.5 * lambda * new_f2;
                f2 = new_f2;
            }
        }
    }
    out
}
