use ddqsl::channel::{evolve_qubit, kraus_pair, QubitState};
use ddqsl::kappa::{population, PulseSchedule, SpectralParams};
use ddqsl::multiqubit::{
    apply_tensored_kraus, evolve_dense, evolve_w, fidelity, make_w_state, trace_distance, WState,
    MAX_DENSE_QUBITS,
};
use ddqsl::Error;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PARAMETER_SETS: [(f64, usize, f64); 6] = [
    (0.2, 0, 10.0),
    (0.2, 10, 10.0),
    (5.0, 0, 2.0),
    (5.0, 5, 10.0),
    (5.0, 20, 7.3),
    (0.5, 3, 4.0),
];

fn random_w(rng: &mut ChaCha8Rng, n: usize) -> WState {
    let alphas: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = alphas.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    make_w_state(&alphas.iter().map(|a| a / norm).collect::<Vec<_>>()).unwrap()
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn closed_form_matches_dense_kraus_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=4 {
        for _ in 0..50 {
            let w = random_w(&mut rng, n);
            for &(g, pulses, t) in &PARAMETER_SETS {
                let p = SpectralParams::new(g, 1.0).unwrap();
                let s = PulseSchedule::new(10.0, pulses).unwrap();
                let closed = evolve_w(&w, t, &p, &s).unwrap().to_dense().unwrap();
                let dense = evolve_dense(&w, t, &p, &s).unwrap();
                assert!(max_entry(&(closed - dense)) < 1e-12);
            }
        }
    }
}

#[test]
fn fidelity_is_independent_of_size_and_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(g, pulses, t) in &PARAMETER_SETS {
        let p = SpectralParams::new(g, 1.0).unwrap();
        let s = PulseSchedule::new(10.0, pulses).unwrap();
        let expected = population(t, &p, &s).unwrap();
        for n in 1..=6 {
            for _ in 0..5 {
                let w = random_w(&mut rng, n);
                assert_eq!(fidelity(&w, t, &p, &s).unwrap(), expected);
            }
        }
        let w = random_w(&mut rng, 3);
        let rho = evolve_dense(&w, t, &p, &s).unwrap();
        let psi = w.to_vector().unwrap();
        let overlap = (psi.adjoint() * rho * psi)[(0, 0)];
        assert!((overlap.re - expected).abs() < 1e-14);
    }
}

#[test]
fn dense_output_is_a_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = SpectralParams::new(5.0, 1.0).unwrap();
    let s = PulseSchedule::new(10.0, 7).unwrap();
    for n in 1..=4 {
        let rho = evolve_dense(&random_w(&mut rng, n), 3.3, &p, &s).unwrap();
        assert!(max_entry(&(&rho - rho.adjoint())) < 1e-15);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        let eig = rho.clone().symmetric_eigenvalues();
        assert!(eig.iter().all(|&e| e > -1e-14));
    }
}

#[test]
fn single_qubit_reduces_to_channel() {
    let p = SpectralParams::new(0.2, 1.0).unwrap();
    let s = PulseSchedule::new(10.0, 4).unwrap();
    let rho0 = QubitState::pure(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
    let m = rho0.to_matrix();
    let dense0 = DMatrix::from_iterator(2, 2, m.iter().copied());
    let pair = kraus_pair(4.2, &p, &s).unwrap();
    let out = apply_tensored_kraus(&dense0, 1, &pair).unwrap();
    let want = evolve_qubit(&rho0, 4.2, &p, &s).unwrap().to_matrix();
    let want = DMatrix::from_iterator(2, 2, want.iter().copied());
    assert!(max_entry(&(out - want)) < 1e-15);
}

#[test]
fn dense_path_rejects_oversized_registers() {
    let p = SpectralParams::new(0.2, 1.0).unwrap();
    let s = PulseSchedule::new(10.0, 0).unwrap();
    let pair = kraus_pair(1.0, &p, &s).unwrap();
    let n = MAX_DENSE_QUBITS + 1;
    let big = DMatrix::<Complex64>::zeros(1, 1);
    assert!(matches!(
        apply_tensored_kraus(&big, n, &pair),
        Err(Error::Capacity { .. })
    ));
    let wrong = DMatrix::<Complex64>::zeros(4, 4);
    assert!(matches!(
        apply_tensored_kraus(&wrong, 3, &pair),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn trace_distance_of_orthogonal_states() {
    let w = make_w_state(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
    let rho = w.density_matrix().unwrap();
    let mut ground = DMatrix::<Complex64>::zeros(4, 4);
    ground[(0, 0)] = Complex64::new(1.0, 0.0);
    assert!((trace_distance(&rho, &ground).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(trace_distance(&rho, &rho).unwrap(), 0.0);
}

#[test]
fn w_state_validation() {
    assert!(make_w_state(&[]).is_err());
    assert!(make_w_state(&[Complex64::new(0.0, 0.0); 3]).is_err());
    let scaled = make_w_state(&[Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]).unwrap();
    assert!((scaled.alphas()[0].re - 0.6).abs() < 1e-15);
    let w = make_w_state(&[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
    assert_eq!(w.excitation_index(0), 2);
    assert_eq!(w.excitation_index(1), 1);
}
