//! Monotone segments of `P_t` over `[0, τ]`.
//!
//! Every pulse time is a breakpoint because `κ̇` reverses there. Inside each
//! interval the stationary points of `P` are bracketed on a sample grid and
//! refined by bisection. The variation integrals of `P` (and of `√P`) then
//! reduce to sums of endpoint differences over the segments.

use crate::kappa::{Dynamics, PulseSchedule, SpectralParams};

/// Samples per pulse interval used to bracket stationary points.
pub const DEFAULT_SAMPLES_PER_INTERVAL: usize = 512;

const MAX_SAMPLES_PER_INTERVAL: usize = 1 << 16;

/// Relative bisection tolerance; multiplied by `τ`.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakpointKind {
    Endpoint,
    Pulse,
    Stationary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub t: f64,
    pub kind: BreakpointKind,
    /// `P` at `t` (continuous, so no side is needed).
    pub p: f64,
    /// Interval containing the segment that starts here.
    interval: usize,
}

/// Sorted breakpoints `0 = t₀ < … < t_m = τ` with `P` monotone between
/// consecutive ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaDecomposition {
    breakpoints: Vec<Breakpoint>,
    samples_per_interval: usize,
}

impl ExtremaDecomposition {
    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// Grid resolution at which the root count stabilised.
    pub fn samples_per_interval(&self) -> usize {
        self.samples_per_interval
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints.iter().map(|b| b.t)
    }

    pub fn stationary_points(&self) -> impl Iterator<Item = &Breakpoint> {
        self.breakpoints
            .iter()
            .filter(|b| b.kind == BreakpointKind::Stationary)
    }

    /// `(P_start, P_end)` for each segment.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints.windows(2).map(|w| (w[0].p, w[1].p))
    }

    pub fn initial_population(&self) -> f64 {
        self.breakpoints[0].p
    }

    pub fn final_population(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1].p
    }

    /// Inserts an extra breakpoint at `t` (which must not already be one).
    /// Splitting a monotone segment leaves every variation unchanged.
    pub fn with_extra_breakpoint(&self, dynamics: &Dynamics, t: f64) -> Self {
        let mut out = self.clone();
        let pos = out.breakpoints.partition_point(|b| b.t < t);
        let interval = out.breakpoints[pos - 1].interval;
        let u = t - dynamics.schedule().interval_start(interval);
        out.breakpoints.insert(
            pos,
            Breakpoint {
                t,
                kind: BreakpointKind::Stationary,
                p: dynamics.population_in(interval, u),
                interval,
            },
        );
        out
    }

    /// Checks that `Ṗ` keeps one sign on `refine` interior points of every
    /// segment, ignoring values below `slack` in magnitude.
    pub fn certify_monotone(&self, dynamics: &Dynamics, refine: usize, slack: f64) -> bool {
        let schedule = dynamics.schedule();
        self.breakpoints.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            let k = a.interval;
            let start = schedule.interval_start(k);
            let mut sign = 0.0f64;
            for i in 1..refine {
                let t = a.t + (b.t - a.t) * i as f64 / refine as f64;
                let v = dynamics.population_dot_in(k, t - start);
                if v.abs() <= slack {
                    continue;
                }
                if sign == 0.0 {
                    sign = v.signum();
                } else if v.signum() != sign {
                    return false;
                }
            }
            true
        })
    }
}

/// Decomposition with the default grid and `tol = 1e-10·τ`.
pub fn decompose(params: &SpectralParams, schedule: &PulseSchedule) -> ExtremaDecomposition {
    decompose_dynamics(
        &Dynamics::new(*params, *schedule),
        DEFAULT_RELATIVE_TOL * schedule.tau(),
    )
}

/// Decomposition with an explicit time tolerance for the bisection.
pub fn decompose_with_tol(
    params: &SpectralParams,
    schedule: &PulseSchedule,
    tol: f64,
) -> ExtremaDecomposition {
    decompose_dynamics(&Dynamics::new(*params, *schedule), tol)
}

pub fn decompose_dynamics(dynamics: &Dynamics, tol: f64) -> ExtremaDecomposition {
    decompose_from(dynamics, tol, DEFAULT_SAMPLES_PER_INTERVAL)
}

/// Starts at `samples` per interval and doubles until the root count is the
/// same on three consecutive grids.
pub fn decompose_from(dynamics: &Dynamics, tol: f64, samples: usize) -> ExtremaDecomposition {
    assert!(tol > 0.0, "bisection tolerance must be positive");
    let mut samples = samples.max(4);
    let mut roots = stationary_points(dynamics, samples, tol);
    let mut stable = 0;
    while stable < 2 && samples < MAX_SAMPLES_PER_INTERVAL {
        samples *= 2;
        let next = stationary_points(dynamics, samples, tol);
        if count(&next) == count(&roots) {
            stable += 1;
        } else {
            stable = 0;
        }
        roots = next;
    }
    assemble(dynamics, roots, samples)
}

fn count(roots: &[Vec<f64>]) -> usize {
    roots.iter().map(Vec::len).sum()
}

/// Interior stationary offsets `u` for each interval.
fn stationary_points(dynamics: &Dynamics, samples: usize, tol: f64) -> Vec<Vec<f64>> {
    let schedule = dynamics.schedule();
    (0..schedule.n_intervals())
        .map(|k| {
            let len = schedule.interval_end(k) - schedule.interval_start(k);
            let f = |u: f64| dynamics.population_dot_in(k, u);
            let h = len / samples as f64;
            let mut roots = Vec::new();
            let mut prev_u = 0.0;
            let mut prev = f(0.0);
            for j in 1..=samples {
                let u = if j == samples { len } else { j as f64 * h };
                let v = f(u);
                let interior = j < samples;
                if v == 0.0 && interior {
                    roots.push(u);
                } else if prev * v < 0.0 {
                    roots.push(bisect(&f, prev_u, u, prev, tol));
                }
                prev_u = u;
                prev = v;
            }
            roots.retain(|&u| u > 0.0 && u < len);
            roots.dedup_by(|a, b| (*a - *b).abs() <= tol);
            roots
        })
        .collect()
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn assemble(dynamics: &Dynamics, roots: Vec<Vec<f64>>, samples: usize) -> ExtremaDecomposition {
    let schedule = dynamics.schedule();
    let mut breakpoints = Vec::new();
    for (k, interval_roots) in roots.into_iter().enumerate() {
        let start = schedule.interval_start(k);
        let kind = if k == 0 {
            BreakpointKind::Endpoint
        } else {
            BreakpointKind::Pulse
        };
        breakpoints.push(Breakpoint {
            t: start,
            kind,
            p: dynamics.population_in(k, 0.0),
            interval: k,
        });
        for u in interval_roots {
            breakpoints.push(Breakpoint {
                t: start + u,
                kind: BreakpointKind::Stationary,
                p: dynamics.population_in(k, u),
                interval: k,
            });
        }
    }
    let last = schedule.n_pulses();
    breakpoints.push(Breakpoint {
        t: schedule.tau(),
        kind: BreakpointKind::Endpoint,
        p: dynamics.population_in(last, schedule.tau() - schedule.interval_start(last)),
        interval: last,
    });
    ExtremaDecomposition {
        breakpoints,
        samples_per_interval: samples,
    }
}

/// `∫_{Ṗ>0} Ṗ dt`: the summed rises of `P`.
pub fn positive_variation(decomp: &ExtremaDecomposition) -> f64 {
    decomp.segments().map(|(a, b)| (b - a).max(0.0)).sum()
}

/// `∫_{Ṗ>0} Ṗ/(2√P) dt`: the summed rises of `√P`.
pub fn sqrt_positive_variation(decomp: &ExtremaDecomposition) -> f64 {
    decomp
        .segments()
        .map(|(a, b)| (b.max(0.0).sqrt() - a.max(0.0).sqrt()).max(0.0))
        .sum()
}

/// `∫|Ṗ| dt`.
pub fn total_variation(decomp: &ExtremaDecomposition) -> f64 {
    decomp.segments().map(|(a, b)| (b - a).abs()).sum()
}
