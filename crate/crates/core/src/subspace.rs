//! Single-excitation backend and the continuous-time chain propagator.
//!
//! Amplitude `j` (0-based in storage, site `j + 1` in the API) is
//! `⟨e_{j+1}|ψ⟩`. An XY hop on bond `(j, j+1)` rotates the amplitude pair by
//! `[cos θ, -i sin θ; -i sin θ, cos θ]`; an Rz layer multiplies site `j` by
//! `e^{-iφ_j}`, matching `exp(-iHτ)` of the chain with on-site `+V_j`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{ChainSpec, GateFamily, TrotterCircuitSpec};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Residual bound every eigenpair of the chain Hamiltonian must satisfy.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceState {
    amplitudes: Vec<C64>,
}

impl SubspaceState {
    /// Excitation on `site` (1-based) of an `n_sites` chain.
    pub fn basis(n_sites: usize, site: usize) -> Result<Self> {
        if site == 0 || site > n_sites {
            return Err(Error::config(format!("site {site} outside 1..={n_sites}")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); n_sites];
        amplitudes[site - 1] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    pub fn n_sites(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Euclidean distance `‖ψ - φ‖₂`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// One Trotter step: hops in ascending bond order, then (optionally) the
    /// on-site phases.
    pub fn trotter_step(&mut self, bond_angles: &[f64], z_angles: &[f64], include_z: bool) -> Result<()> {
        let n = self.amplitudes.len();
        if bond_angles.len() + 1 != n {
            return Err(Error::config(format!(
                "{} bond angles for {n} sites",
                bond_angles.len()
            )));
        }
        if z_angles.len() != n {
            return Err(Error::config(format!("{} Rz angles for {n} sites", z_angles.len())));
        }
        self.hop_layer(bond_angles);
        if include_z {
            self.phase_layer(z_angles);
        }
        Ok(())
    }

    fn hop_layer(&mut self, bond_angles: &[f64]) {
        for (j, &theta) in bond_angles.iter().enumerate() {
            let (c, s) = (theta.cos(), theta.sin());
            let hop = -I * s;
            let (x, y) = (self.amplitudes[j], self.amplitudes[j + 1]);
            self.amplitudes[j] = x * c + y * hop;
            self.amplitudes[j + 1] = x * hop + y * c;
        }
    }

    fn phase_layer(&mut self, z_angles: &[f64]) {
        for (a, &phi) in self.amplitudes.iter_mut().zip(z_angles) {
            *a *= C64::from_polar(1.0, -phi);
        }
    }
}

/// Free-function form of [`SubspaceState::trotter_step`].
pub fn trotter_step(
    mut state: SubspaceState,
    bond_angles: &[f64],
    z_angles: &[f64],
    include_z: bool,
) -> Result<SubspaceState> {
    state.trotter_step(bond_angles, z_angles, include_z)?;
    Ok(state)
}

fn require_xy(spec: &TrotterCircuitSpec) -> Result<()> {
    if spec.gate_family != GateFamily::Xy {
        return Err(Error::UnsupportedMapping(
            "the single-excitation backend needs an XY circuit; use the dense backend for CRX".into(),
        ));
    }
    Ok(())
}

/// State after `eta` Trotter steps (`0 <= eta <= N_T`).
pub fn run_discrete(spec: &TrotterCircuitSpec, eta: usize, seed: u64) -> Result<SubspaceState> {
    require_xy(spec)?;
    spec.validate()?;
    if eta > spec.n_steps {
        return Err(Error::config(format!(
            "eta = {eta} exceeds n_steps = {}",
            spec.n_steps
        )));
    }
    let z = spec.z_angles(seed)?;
    let mut state = SubspaceState::basis(spec.n_qubits, spec.initial_excitation_site)?;
    for step in 0..eta {
        state.trotter_step(&spec.bond_angles, &z, spec.step_has_z(step))?;
    }
    Ok(state)
}

/// States after each step `η = 1..=N_T`.
pub fn discrete_trajectory(spec: &TrotterCircuitSpec, seed: u64) -> Result<Vec<SubspaceState>> {
    require_xy(spec)?;
    spec.validate()?;
    let z = spec.z_angles(seed)?;
    let mut state = SubspaceState::basis(spec.n_qubits, spec.initial_excitation_site)?;
    (0..spec.n_steps)
        .map(|step| {
            state.trotter_step(&spec.bond_angles, &z, spec.step_has_z(step))?;
            Ok(state.clone())
        })
        .collect()
}

/// Eigendecomposition of a chain Hamiltonian, reusable across times.
#[derive(Debug, Clone)]
pub struct ChainPropagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl ChainPropagator {
    pub const MAX_SITES: usize = 1000;

    pub fn new(chain: &ChainSpec) -> Result<Self> {
        chain.validate()?;
        let n = chain.len();
        if n > Self::MAX_SITES {
            return Err(Error::config(format!(
                "continuous propagation supports up to {} sites, got {n}",
                Self::MAX_SITES
            )));
        }
        let h = hamiltonian(chain);
        let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, 10_000).ok_or_else(|| {
            Error::Numerical(format!("symmetric eigensolver did not converge for {n} sites"))
        })?;
        for k in 0..n {
            let v = eig.eigenvectors.column(k);
            let residual = (&h * v - v * eig.eigenvalues[k]).norm();
            if !(residual <= EIGEN_RESIDUAL_TOL) {
                return Err(Error::Numerical(format!(
                    "eigenpair {k} residual {residual:e} exceeds {EIGEN_RESIDUAL_TOL:e} (eigenvalue {})",
                    eig.eigenvalues[k]
                )));
            }
        }
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eigenvalues.as_slice()
    }

    /// `V exp(-iΛt) Vᵀ e_site`.
    pub fn evolve(&self, t: f64, init_site: usize) -> Result<SubspaceState> {
        let n = self.eigenvalues.len();
        if init_site == 0 || init_site > n {
            return Err(Error::config(format!("site {init_site} outside 1..={n}")));
        }
        let row = init_site - 1;
        let weights: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(self.eigenvectors[(row, k)], -self.eigenvalues[k] * t))
            .collect();
        let amplitudes = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| weights[k] * self.eigenvectors[(i, k)])
                    .sum::<C64>()
            })
            .collect();
        Ok(SubspaceState { amplitudes })
    }
}

/// Real-symmetric tridiagonal Hamiltonian of `chain`.
pub fn hamiltonian(chain: &ChainSpec) -> DMatrix<f64> {
    let n = chain.len();
    let mut h = DMatrix::<f64>::zeros(n, n);
    for (j, &v) in chain.potentials.iter().enumerate() {
        h[(j, j)] = v;
    }
    for (j, &hop) in chain.couplings.iter().enumerate() {
        h[(j, j + 1)] = hop;
        h[(j + 1, j)] = hop;
    }
    h
}

/// Exact `exp(-iHt)|e_site⟩` for the tight-binding chain.
pub fn continuous_evolve(chain: &ChainSpec, t: f64, init_site: usize) -> Result<SubspaceState> {
    ChainPropagator::new(chain)?.evolve(t, init_site)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::dense;
    use crate::model::ZLayerSpec;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn matches_dense_backend(
            n in 2usize..9,
            thetas in proptest::collection::vec(-3.2f64..3.2, 8),
            steps in 1usize..12,
            phi in -3.2f64..3.2,
            r in 0.0f64..1.6,
            seed: u64,
        ) {
            let mut spec = TrotterCircuitSpec::uniform(n, steps, GateFamily::Xy, 0.0, ZLayerSpec::disordered(phi, r));
            spec.bond_angles = thetas[..n - 1].to_vec();
            let sub = run_discrete(&spec, steps, seed).unwrap();
            let full = dense::run_circuit(&spec, seed).unwrap();
            for (a, b) in sub.probabilities().iter().zip(full.occupation_probs()) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
            prop_assert!((sub.norm_sqr() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn continuous_norm_preserved(
            couplings in proptest::collection::vec(-3.0f64..3.0, 1..12),
            pots in proptest::collection::vec(-5.0f64..5.0, 13),
            t in -20.0f64..20.0,
        ) {
            let n = couplings.len() + 1;
            let chain = ChainSpec::new(couplings, pots[..n].to_vec()).unwrap();
            let s = continuous_evolve(&chain, t, 1).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }
}
