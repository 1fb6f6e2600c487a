use ddqsl::kappa::{population, PulseSchedule, SpectralParams};
use ddqsl::speedlimit::{qslt, qslt_general, qslt_via_gamma, NormOrder};
use ddqsl::Error;

fn setup(g: f64, n: usize) -> (SpectralParams, PulseSchedule) {
    (
        SpectralParams::new(g, 1.0).unwrap(),
        PulseSchedule::new(10.0, n).unwrap(),
    )
}

#[test]
fn identities_hold_across_regimes() {
    for &g in &[0.2, 0.5, 5.0] {
        for n in [0usize, 1, 4, 9, 16, 25] {
            let (p, s) = setup(g, n);
            let r = qslt(&p, &s).unwrap();
            let op = qslt_general(&p, &s, NormOrder::Operator).unwrap();
            assert!((op - r.tau_qsl).abs() <= 1e-12 * r.tau_qsl);
            let via = qslt_via_gamma(&p, &s).unwrap();
            assert!((via - r.tau_qsl).abs() <= 1e-12 * r.tau_qsl);
            let split = (1.0 - r.p_tau) + 2.0 * r.gamma_theta0;
            assert!((r.total_var - split).abs() <= 1e-12 * r.total_var);
            assert!(r.ratio > 0.0 && r.ratio <= 1.0);
            assert_eq!(r.p_tau, population(10.0, &p, &s).unwrap());
        }
    }
}

#[test]
fn ratio_is_one_without_backflow() {
    let (p, s) = setup(0.2, 0);
    let r = qslt(&p, &s).unwrap();
    assert!((r.ratio - 1.0).abs() < 1e-9);
}

#[test]
fn weaker_norms_give_looser_bounds() {
    let (p, s) = setup(5.0, 6);
    let one = qslt_general(&p, &s, NormOrder::Trace).unwrap();
    let two = qslt_general(&p, &s, NormOrder::HilbertSchmidt).unwrap();
    let inf = qslt_general(&p, &s, NormOrder::Operator).unwrap();
    assert!(one < two && two < inf);
}

#[test]
fn frozen_population_is_rejected() {
    let p = SpectralParams::new(1e-20, 1.0).unwrap();
    let s = PulseSchedule::new(10.0, 3).unwrap();
    assert!(matches!(qslt(&p, &s), Err(Error::DegenerateTarget { .. })));
    assert!(qslt_via_gamma(&p, &s).is_err());
    assert!(qslt_general(&p, &s, NormOrder::Trace).is_err());
}

#[test]
fn tau_scaling_at_fixed_interval_count() {
    // Only λτ and γ₀/λ matter: rescaling all rates and times leaves the ratio unchanged.
    let a = qslt(
        &SpectralParams::new(5.0, 1.0).unwrap(),
        &PulseSchedule::new(10.0, 7).unwrap(),
    )
    .unwrap();
    let b = qslt(
        &SpectralParams::new(10.0, 2.0).unwrap(),
        &PulseSchedule::new(5.0, 7).unwrap(),
    )
    .unwrap();
    assert!((a.ratio - b.ratio).abs() < 1e-12);
    assert!((a.p_tau - b.p_tau).abs() < 1e-12);
}
