//! N independent qubits, each in its own reservoir, started in a W-type
//! single-excitation state `|ψ₀⟩ = Σⱼ αⱼ|j⟩`.
//!
//! The evolved state has the closed form `P_t|ψ₀⟩⟨ψ₀| + (1 − P_t)|0…0⟩⟨0…0|`.
//! [`evolve_dense`] recomputes it by summing all `2^N` tensored Kraus
//! terms and is kept as a brute-force cross-check.
//!
//! Basis index: qubit `j` (0-based) is bit `N − 1 − j`, so `|10…0⟩` (first
//! qubit excited) has index `2^{N−1}` and `|0…0⟩` has index 0.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::KrausPair;
use crate::error::{validation, Error, Result};
use crate::kappa::{population, PulseSchedule, SpectralParams};

/// Largest qubit count accepted by the dense paths.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Normalised single-excitation amplitudes `(α₁, …, α_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WState {
    alphas: Vec<Complex64>,
}

impl WState {
    pub fn n_qubits(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    /// Basis index of `|j⟩`, the state with only qubit `j` excited.
    pub fn excitation_index(&self, j: usize) -> usize {
        1 << (self.n_qubits() - 1 - j)
    }

    /// `|ψ₀⟩` as a dense vector of length `2^N`.
    pub fn to_vector(&self) -> Result<DVector<Complex64>> {
        check_dense(self.n_qubits())?;
        let mut v = DVector::zeros(1 << self.n_qubits());
        for (j, &a) in self.alphas.iter().enumerate() {
            v[self.excitation_index(j)] = a;
        }
        Ok(v)
    }

    /// `|ψ₀⟩⟨ψ₀|`.
    pub fn density_matrix(&self) -> Result<DMatrix<Complex64>> {
        let v = self.to_vector()?;
        Ok(&v * v.adjoint())
    }
}

/// Normalises `alphas` into a W-type state.
pub fn make_w_state(alphas: &[Complex64]) -> Result<WState> {
    if alphas.is_empty() {
        return Err(validation("a W state needs at least one qubit"));
    }
    if alphas
        .iter()
        .any(|a| !(a.re.is_finite() && a.im.is_finite()))
    {
        return Err(validation("W-state amplitudes must be finite"));
    }
    let norm = alphas.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(validation("W-state amplitudes are all zero"));
    }
    Ok(WState {
        alphas: alphas.iter().map(|a| a / norm).collect(),
    })
}

/// `ρ_t = P_t|ψ₀⟩⟨ψ₀| + (1 − P_t)|0…0⟩⟨0…0|`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedWState<'a> {
    pub p: f64,
    pub psi0: &'a WState,
}

impl EvolvedWState<'_> {
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let mut rho = self.psi0.density_matrix()? * Complex64::new(self.p, 0.0);
        rho[(0, 0)] += Complex64::new(1.0 - self.p, 0.0);
        Ok(rho)
    }

    /// `⟨ψ₀|ρ_t|ψ₀⟩`, which equals `P_t`.
    pub fn fidelity(&self) -> f64 {
        self.p
    }
}

pub fn evolve_w<'a>(
    w: &'a WState,
    t: f64,
    params: &SpectralParams,
    schedule: &PulseSchedule,
) -> Result<EvolvedWState<'a>> {
    Ok(EvolvedWState {
        p: population(t, params, schedule)?,
        psi0: w,
    })
}

/// Fidelity between `|ψ₀⟩` and `ρ_t`; independent of `N` and the `αⱼ`.
pub fn fidelity(
    w: &WState,
    t: f64,
    params: &SpectralParams,
    schedule: &PulseSchedule,
) -> Result<f64> {
    Ok(evolve_w(w, t, params, schedule)?.fidelity())
}

fn check_dense(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            what: "qubit count",
            requested: n_qubits,
            limit: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

/// Dense evolution of a W state by the full tensored Kraus sum.
pub fn evolve_dense(
    w: &WState,
    t: f64,
    params: &SpectralParams,
    schedule: &PulseSchedule,
) -> Result<DMatrix<Complex64>> {
    let pair = crate::channel::kraus_pair(t, params, schedule)?;
    apply_tensored_kraus(&w.density_matrix()?, w.n_qubits(), &pair)
}

/// `Σ_{μ₁…μ_N} (⊗ⱼK_{μⱼ}) ρ₀ (⊗ⱼK_{μⱼ})†` for any `2^N × 2^N` input.
///
/// The underlying `κ_t` is only exact for at most one excitation per
/// qubit–reservoir pair; other inputs are accepted for testing.
///
/// Tuples are split into fixed chunks whose partial sums are added in
/// chunk order, so the result does not depend on the thread count.
pub fn apply_tensored_kraus(
    rho0: &DMatrix<Complex64>,
    n_qubits: usize,
    pair: &KrausPair,
) -> Result<DMatrix<Complex64>> {
    check_dense(n_qubits)?;
    let dim = 1usize << n_qubits;
    if rho0.nrows() != dim || rho0.ncols() != dim {
        return Err(Error::DimensionMismatch {
            left: rho0.nrows().max(rho0.ncols()),
            right: dim,
        });
    }

    let k1 = pair.k1();
    let k2 = pair.k2();
    let ops = [k1, k2];
    let n_tuples = 1usize << n_qubits;
    const CHUNK: usize = 16;

    let partials: Vec<DMatrix<Complex64>> = (0..n_tuples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
            let mut image = vec![None; dim];
            for tuple in chunk * CHUNK..((chunk + 1) * CHUNK).min(n_tuples) {
                // Each single-qubit Kraus operator has at most one nonzero per
                // column, so the tensor product maps basis column x to at most
                // one row y with a weight.
                for (x, slot) in image.iter_mut().enumerate() {
                    let mut y = 0usize;
                    let mut weight = Complex64::new(1.0, 0.0);
                    for q in 0..n_qubits {
                        let bit = n_qubits - 1 - q;
                        let op = &ops[(tuple >> bit) & 1];
                        let col = (x >> bit) & 1;
                        let (row, w) = if op[(0, col)] != Complex64::new(0.0, 0.0) {
                            (0, op[(0, col)])
                        } else {
                            (1, op[(1, col)])
                        };
                        weight *= w;
                        y |= row << bit;
                    }
                    *slot = (weight != Complex64::new(0.0, 0.0)).then_some((y, weight));
                }
                for (x, ix) in image.iter().enumerate() {
                    let Some((y, wx)) = *ix else { continue };
                    for (xp, ixp) in image.iter().enumerate() {
                        let Some((yp, wxp)) = *ixp else { continue };
                        acc[(y, yp)] += wx * rho0[(x, xp)] * wxp.conj();
                    }
                }
            }
            acc
        })
        .collect();

    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for partial in &partials {
        out += partial;
    }
    Ok(out)
}

/// Trace distance `½ Σ|eigenvalues(ρ₁ − ρ₂)|` of two Hermitian matrices.
pub fn trace_distance(rho1: &DMatrix<Complex64>, rho2: &DMatrix<Complex64>) -> Result<f64> {
    if rho1.shape() != rho2.shape() {
        return Err(Error::DimensionMismatch {
            left: rho1.nrows(),
            right: rho2.nrows(),
        });
    }
    if rho1.nrows() != rho1.ncols() {
        return Err(validation("density matrices must be square"));
    }
    if rho1.nrows() > 1 << MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            what: "matrix dimension",
            requested: rho1.nrows(),
            limit: 1 << MAX_DENSE_QUBITS,
        });
    }
    let diff = rho1 - rho2;
    let eig = diff.symmetric_eigenvalues();
    Ok(0.5 * eig.iter().map(|e| e.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn builds_w_states() {
        let single = make_w_state(&[c(1.0, 0.0)]).unwrap();
        assert_eq!(single.n_qubits(), 1);
        assert_eq!(single.to_vector().unwrap()[1], c(1.0, 0.0));

        let s = 1.0 / 3f64.sqrt();
        let w3 = make_w_state(&[c(s, 0.0); 3]).unwrap();
        let norm: f64 = w3.alphas().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert_eq!(w3.excitation_index(0), 4);
        assert_eq!(w3.excitation_index(2), 1);

        let w2 = make_w_state(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert_eq!(w2.n_qubits(), 2);
        let norm: f64 = w2.alphas().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(make_w_state(&[]).is_err());
        assert!(make_w_state(&[c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(make_w_state(&[c(f64::NAN, 0.0)]).is_err());
        let big = make_w_state(&[c(1.0, 0.0); 11]).unwrap();
        assert!(matches!(big.to_vector(), Err(Error::Capacity { .. })));
        let a = DMatrix::<Complex64>::identity(2, 2);
        let b = DMatrix::<Complex64>::identity(4, 4);
        assert!(matches!(
            trace_distance(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
        let pair = KrausPair::from_kappa(0.5).unwrap();
        assert!(apply_tensored_kraus(&a, 2, &pair).is_err());
    }

    #[test]
    fn starts_pure() {
        let p = SpectralParams::new(0.2, 1.0).unwrap();
        let s = PulseSchedule::new(10.0, 2).unwrap();
        let w = make_w_state(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let e = evolve_w(&w, 0.0, &p, &s).unwrap();
        assert_eq!(e.p, 1.0);
        assert_eq!(e.to_dense().unwrap(), w.density_matrix().unwrap());
        assert_eq!(fidelity(&w, 0.0, &p, &s).unwrap(), 1.0);
    }

    #[test]
    fn symmetric_pair_hand_expansion() {
        let r = 0.5f64.sqrt();
        let w = make_w_state(&[c(r, 0.0), c(r, 0.0)]).unwrap();
        let k = 0.37;
        let pair = KrausPair::from_kappa(k).unwrap();
        let rho = apply_tensored_kraus(&w.density_matrix().unwrap(), 2, &pair).unwrap();
        for &(i, j) in &[(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((rho[(i, j)] - c(k * k / 2.0, 0.0)).norm() < 1e-15);
        }
        assert!((rho[(0, 0)] - c(1.0 - k * k, 0.0)).norm() < 1e-15);
        assert_eq!(rho[(3, 3)], c(0.0, 0.0));
    }

    #[test]
    fn single_qubit_dense_is_qubit_channel() {
        let p = SpectralParams::new(5.0, 1.0).unwrap();
        let s = PulseSchedule::new(10.0, 3).unwrap();
        let w = make_w_state(&[c(1.0, 0.0)]).unwrap();
        let dense = evolve_dense(&w, 4.2, &p, &s).unwrap();
        let q = crate::channel::evolve_qubit(&crate::channel::QubitState::excited(), 4.2, &p, &s)
            .unwrap();
        let m = q.to_matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!((dense[(i, j)] - m[(i, j)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_distance_basics() {
        let mut zero = DMatrix::<Complex64>::zeros(2, 2);
        zero[(0, 0)] = c(1.0, 0.0);
        let mut one = DMatrix::<Complex64>::zeros(2, 2);
        one[(1, 1)] = c(1.0, 0.0);
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
    }
}
