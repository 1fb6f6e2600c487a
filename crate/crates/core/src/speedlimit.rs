//! Quantum speed limit time for W-state dynamics.
//!
//! With `ρ_t = P_t|ψ₀⟩⟨ψ₀| + (1 − P_t)|0…0⟩⟨0…0|`, the generator output
//! `L_tρ_t = Ṗ_t(|ψ₀⟩⟨ψ₀| − |0…0⟩⟨0…0|)` has singular values `{|Ṗ_t|, |Ṗ_t|}`,
//! so each Schatten-norm bound is a multiple of the total variation of `P`.

use crate::error::{Error, Result};
use crate::kappa::{Dynamics, PulseSchedule, SpectralParams};
use crate::trajectory::{
    decompose_dynamics, positive_variation, total_variation, ExtremaDecomposition,
    DEFAULT_RELATIVE_TOL,
};

/// `P_τ` closer to 1 than this leaves the bound undefined.
pub const DEGENERATE_TARGET_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsltResult {
    pub tau: f64,
    pub tau_qsl: f64,
    /// `τ_QSL/τ ∈ (0, 1]`.
    pub ratio: f64,
    pub p_tau: f64,
    /// Summed rises of `P`, `∫_{Ṗ>0} Ṗ dt`.
    pub gamma_theta0: f64,
    pub total_var: f64,
}

/// Schatten norm used for `‖L_tρ_t‖_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormOrder {
    Trace,
    HilbertSchmidt,
    Operator,
}

impl NormOrder {
    /// `‖L_tρ_t‖_p / |Ṗ_t|`.
    pub fn scale(self) -> f64 {
        match self {
            NormOrder::Trace => 2.0,
            NormOrder::HilbertSchmidt => std::f64::consts::SQRT_2,
            NormOrder::Operator => 1.0,
        }
    }
}

fn decomposition(params: &SpectralParams, schedule: &PulseSchedule) -> ExtremaDecomposition {
    decompose_dynamics(
        &Dynamics::new(*params, *schedule),
        DEFAULT_RELATIVE_TOL * schedule.tau(),
    )
}

fn checked_final(decomp: &ExtremaDecomposition) -> Result<f64> {
    let p_tau = decomp.final_population();
    if (1.0 - p_tau).abs() <= DEGENERATE_TARGET_TOL {
        return Err(Error::DegenerateTarget { p_tau });
    }
    Ok(p_tau)
}

/// `τ_QSL = τ(1 − P_τ)/(1 − P_τ + 2∫_{Ṗ>0}Ṗ dt)` from an existing decomposition.
pub fn qslt_from(tau: f64, decomp: &ExtremaDecomposition) -> Result<QsltResult> {
    let p_tau = checked_final(decomp)?;
    let gamma_theta0 = positive_variation(decomp);
    let drop = 1.0 - p_tau;
    let tau_qsl = tau * drop / (drop + 2.0 * gamma_theta0);
    Ok(QsltResult {
        tau,
        tau_qsl,
        ratio: tau_qsl / tau,
        p_tau,
        gamma_theta0,
        total_var: total_variation(decomp),
    })
}

pub fn qslt(params: &SpectralParams, schedule: &PulseSchedule) -> Result<QsltResult> {
    qslt_from(schedule.tau(), &decomposition(params, schedule))
}

/// `τ|1 − f_τ| / ∫‖L_tρ_t‖_p dt`.
pub fn qslt_general(
    params: &SpectralParams,
    schedule: &PulseSchedule,
    norm: NormOrder,
) -> Result<f64> {
    let decomp = decomposition(params, schedule);
    let p_tau = checked_final(&decomp)?;
    let tau = schedule.tau();
    Ok(tau * (1.0 - p_tau).abs() / (norm.scale() * total_variation(&decomp)))
}

/// `τ_QSL = τ / (1 + 2Γ_{θ=0}/(1 − P_τ))`.
pub fn qslt_via_gamma(params: &SpectralParams, schedule: &PulseSchedule) -> Result<f64> {
    let decomp = decomposition(params, schedule);
    let p_tau = checked_final(&decomp)?;
    let gamma = positive_variation(&decomp);
    Ok(schedule.tau() / (1.0 + 2.0 * gamma / (1.0 - p_tau)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(g: f64, n: usize) -> (SpectralParams, PulseSchedule) {
        (
            SpectralParams::new(g, 1.0).unwrap(),
            PulseSchedule::new(10.0, n).unwrap(),
        )
    }

    #[test]
    fn markovian_decay_saturates_bound() {
        let (p, s) = setup(0.2, 0);
        let r = qslt(&p, &s).unwrap();
        assert_eq!(r.gamma_theta0, 0.0);
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.tau_qsl, 10.0);
    }

    #[test]
    fn norm_orders_scale_exactly() {
        for &(g, n) in &[(0.2, 4usize), (5.0, 0), (5.0, 13)] {
            let (p, s) = setup(g, n);
            let inf = qslt_general(&p, &s, NormOrder::Operator).unwrap();
            let two = qslt_general(&p, &s, NormOrder::HilbertSchmidt).unwrap();
            let one = qslt_general(&p, &s, NormOrder::Trace).unwrap();
            assert!((one - inf / 2.0).abs() <= 1e-15 * inf);
            assert!((two - inf / std::f64::consts::SQRT_2).abs() <= 1e-15 * inf);
            assert!(inf >= two && two >= one);
            let direct = qslt(&p, &s).unwrap().tau_qsl;
            assert!((inf - direct).abs() <= 1e-12 * direct);
        }
    }

    #[test]
    fn gamma_form_agrees() {
        for &(g, n) in &[(5.0, 0usize), (0.2, 20), (0.2, 0)] {
            let (p, s) = setup(g, n);
            let a = qslt(&p, &s).unwrap().tau_qsl;
            let b = qslt_via_gamma(&p, &s).unwrap();
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn fully_protected_qubit_is_degenerate() {
        let p = SpectralParams::new(1e-20, 1.0).unwrap();
        let s = PulseSchedule::new(10.0, 3).unwrap();
        assert!(matches!(qslt(&p, &s), Err(Error::DegenerateTarget { .. })));
        assert!(matches!(
            qslt_general(&p, &s, NormOrder::Trace),
            Err(Error::DegenerateTarget { .. })
        ));
        assert!(qslt_via_gamma(&p, &s).is_err());
    }
}
