//! Dense `2^N` state-vector backend.
//!
//! Basis index `b` encodes qubit `q` (1-based) in bit `N - q`, so qubit 1 is
//! the most significant bit and `|10…0⟩` has index `2^(N-1)`. Gates are
//! applied in place by visiting the amplitude pairs or quadruples they mix;
//! no operator matrix is ever formed.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{GateOp, TrotterCircuitSpec};

/// Largest register the dense backend accepts.
pub const MAX_QUBITS: usize = 24;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

/// Inserts a zero bit at position `pos` of `k`.
#[inline]
fn insert_zero(k: usize, pos: usize) -> usize {
    let low = k & ((1 << pos) - 1);
    ((k >> pos) << (pos + 1)) | low
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::config(format!(
                "dense backend supports 1..={MAX_QUBITS} qubits, got {n_qubits}"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = C64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Basis state from a bitstring such as `"100"` (qubit 1 first).
    pub fn init_basis(n_qubits: usize, bitstring: &str) -> Result<Self> {
        let index = Self::parse_bitstring(n_qubits, bitstring)?;
        let mut state = Self::zero(n_qubits)?;
        state.amplitudes[0] = C64::new(0.0, 0.0);
        state.amplitudes[index] = C64::new(1.0, 0.0);
        Ok(state)
    }

    /// Builds a state from raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::config(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::config(format!("{n_qubits} qubits exceeds {MAX_QUBITS}")));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    fn parse_bitstring(n_qubits: usize, bitstring: &str) -> Result<usize> {
        if bitstring.len() != n_qubits {
            return Err(Error::config(format!(
                "bitstring {bitstring:?} has length {}, expected {n_qubits}",
                bitstring.len()
            )));
        }
        bitstring.chars().try_fold(0usize, |acc, c| match c {
            '0' => Ok(acc << 1),
            '1' => Ok((acc << 1) | 1),
            other => Err(Error::config(format!("invalid bit {other:?} in {bitstring:?}"))),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude of the basis state written as a bitstring.
    pub fn amplitude(&self, bitstring: &str) -> Result<C64> {
        Ok(self.amplitudes[Self::parse_bitstring(self.n_qubits, bitstring)?])
    }

    pub fn basis_prob(&self, bitstring: &str) -> Result<f64> {
        Ok(self.amplitude(bitstring)?.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn bit(&self, qubit: usize) -> usize {
        self.n_qubits - qubit
    }

    /// Applies `gate` in place.
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            GateOp::X { site } => self.apply_x(site),
            GateOp::Rz { site, angle } => self.apply_rz(site, angle),
            GateOp::Xy { site, angle } => self.apply_xy(site, site + 1, angle),
            GateOp::Crx { site, angle } => self.apply_crx(site, site + 1, angle),
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateOp>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.apply_gate(g))
    }

    fn apply_x(&mut self, qubit: usize) {
        let pos = self.bit(qubit);
        let mask = 1 << pos;
        for k in 0..self.amplitudes.len() / 2 {
            let i0 = insert_zero(k, pos);
            self.amplitudes.swap(i0, i0 | mask);
        }
    }

    fn apply_rz(&mut self, qubit: usize, angle: f64) {
        let pos = self.bit(qubit);
        let mask = 1 << pos;
        let phase0 = C64::from_polar(1.0, -angle / 2.0);
        let phase1 = C64::from_polar(1.0, angle / 2.0);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if i & mask == 0 { phase0 } else { phase1 };
        }
    }

    /// Quadruple base indices with both bits of `(a, b)` cleared, `a < b` as qubits.
    fn pair_bases(&self, a: usize, b: usize) -> impl Iterator<Item = (usize, usize, usize)> {
        let pos_a = self.bit(a);
        let pos_b = self.bit(b);
        let (lo, hi) = if pos_a < pos_b { (pos_a, pos_b) } else { (pos_b, pos_a) };
        (0..self.amplitudes.len() / 4)
            .map(move |k| (insert_zero(insert_zero(k, lo), hi), 1 << pos_a, 1 << pos_b))
    }

    fn apply_xy(&mut self, a: usize, b: usize, angle: f64) {
        let (c, s) = (angle.cos(), angle.sin());
        let hop = -I * s;
        for (base, mask_a, mask_b) in self.pair_bases(a, b) {
            let i10 = base | mask_a;
            let i01 = base | mask_b;
            let (x, y) = (self.amplitudes[i10], self.amplitudes[i01]);
            self.amplitudes[i10] = x * c + y * hop;
            self.amplitudes[i01] = x * hop + y * c;
        }
    }

    fn apply_crx(&mut self, control: usize, target: usize, angle: f64) {
        let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
        let off = -I * s;
        for (base, mask_c, mask_t) in self.pair_bases(control, target) {
            let i0 = base | mask_c;
            let i1 = i0 | mask_t;
            let (x, y) = (self.amplitudes[i0], self.amplitudes[i1]);
            self.amplitudes[i0] = x * c + y * off;
            self.amplitudes[i1] = x * off + y * c;
        }
    }

    /// Probability that each qubit measures 1, qubit 1 first.
    pub fn occupation_probs(&self) -> Vec<f64> {
        let n = self.n_qubits;
        let mut probs = vec![0.0; n];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut bits = i;
            while bits != 0 {
                let pos = bits.trailing_zeros() as usize;
                probs[n - 1 - pos] += p;
                bits &= bits - 1;
            }
        }
        probs
    }

    /// Probabilities of the single-excitation basis states `|e_1⟩ … |e_N⟩`.
    pub fn single_excitation_probs(&self) -> Vec<f64> {
        (1..=self.n_qubits)
            .map(|q| self.amplitudes[1 << self.bit(q)].norm_sqr())
            .collect()
    }
}

/// Applies `gate` and returns the updated state.
pub fn apply_gate(mut state: StateVector, gate: &GateOp) -> Result<StateVector> {
    state.apply_gate(gate)?;
    Ok(state)
}

/// Runs the full circuit from `|0…0⟩`.
pub fn run_circuit(spec: &TrotterCircuitSpec, seed: u64) -> Result<StateVector> {
    let gates = spec.build_circuit(seed)?;
    let mut state = StateVector::zero(spec.n_qubits)?;
    state.apply_all(&gates)?;
    Ok(state)
}

/// Occupation probabilities after each Trotter step `η = 1..=N_T`.
pub fn occupation_trajectory(spec: &TrotterCircuitSpec, seed: u64) -> Result<Vec<Vec<f64>>> {
    let layers = spec.layers(seed)?;
    let mut state = StateVector::zero(spec.n_qubits)?;
    state.apply_all(&layers.preparation)?;
    layers
        .steps
        .iter()
        .map(|step| {
            state.apply_all(step)?;
            Ok(state.occupation_probs())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GateFamily, ZLayerSpec};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_initialization() {
        let s = StateVector::init_basis(2, "10").unwrap();
        assert_eq!(s.amplitudes(), &[c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]);
        let s = StateVector::init_basis(1, "0").unwrap();
        assert_eq!(s.amplitudes(), &[c(1., 0.), c(0., 0.)]);
        let s = StateVector::init_basis(3, "100").unwrap();
        assert_eq!(s.amplitudes()[4], c(1., 0.));
        assert!(StateVector::init_basis(3, "10").is_err());
        assert!(StateVector::init_basis(2, "1x").is_err());
        assert!(StateVector::zero(MAX_QUBITS + 1).is_err());
    }

    #[test]
    fn crx_entangles_single_excitation() {
        let theta = 1.234;
        let mut s = StateVector::init_basis(2, "10").unwrap();
        s.apply_gate(&GateOp::Crx { site: 1, angle: theta }).unwrap();
        assert_abs_diff_eq!(s.amplitude("10").unwrap().re, (theta / 2.0).cos(), epsilon = 1e-15);
        let a11 = s.amplitude("11").unwrap();
        assert_abs_diff_eq!(a11.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a11.im, -(theta / 2.0).sin(), epsilon = 1e-15);
        let occ = s.occupation_probs();
        assert_abs_diff_eq!(occ[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(occ[1], (theta / 2.0).sin().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn crx_is_idle_with_control_off() {
        let mut s = StateVector::init_basis(2, "01").unwrap();
        s.apply_gate(&GateOp::Crx { site: 1, angle: 0.8 }).unwrap();
        assert_eq!(s, StateVector::init_basis(2, "01").unwrap());
    }

    #[test]
    fn xy_zero_is_identity() {
        let mut s = StateVector::init_basis(3, "110").unwrap();
        s.apply_gate(&GateOp::Xy { site: 1, angle: 0.3 }).unwrap();
        s.apply_gate(&GateOp::Xy { site: 2, angle: 0.7 }).unwrap();
        let before = s.clone();
        s.apply_gate(&GateOp::Xy { site: 2, angle: 0.0 }).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn xy_quarter_turn_matches_exponential() {
        // exp(-i θ σx) on {|10⟩, |01⟩} at θ = π/4, summed as a power series.
        let theta = FRAC_PI_4;
        let mut term = [c(1., 0.), c(0., 0.)];
        let mut sum = term;
        for k in 1..40 {
            let factor = -I * theta / k as f64;
            term = [term[1] * factor, term[0] * factor];
            sum = [sum[0] + term[0], sum[1] + term[1]];
        }
        let mut s = StateVector::init_basis(2, "10").unwrap();
        s.apply_gate(&GateOp::Xy { site: 1, angle: theta }).unwrap();
        assert_abs_diff_eq!((s.amplitude("10").unwrap() - sum[0]).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s.amplitude("01").unwrap() - sum[1]).norm(), 0.0, epsilon = 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!((s.amplitude("01").unwrap() - c(0., -h)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn xy_leaves_00_and_11_alone() {
        for bits in ["00", "11"] {
            let mut s = StateVector::init_basis(2, bits).unwrap();
            s.apply_gate(&GateOp::Xy { site: 1, angle: 0.9 }).unwrap();
            assert_eq!(s, StateVector::init_basis(2, bits).unwrap());
        }
    }

    #[test]
    fn rz_phases() {
        let phi = 0.6;
        let mut s = StateVector::init_basis(2, "10").unwrap();
        s.apply_gate(&GateOp::Rz { site: 1, angle: phi }).unwrap();
        s.apply_gate(&GateOp::Rz { site: 2, angle: phi }).unwrap();
        // e^{+iφ/2} from qubit 1 in |1⟩, e^{-iφ/2} from qubit 2 in |0⟩.
        assert_abs_diff_eq!((s.amplitude("10").unwrap() - c(1., 0.)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn x_twice_is_identity() {
        let spec = TrotterCircuitSpec::uniform(4, 3, GateFamily::Crx, 0.8, ZLayerSpec::disordered(0.5, 0.4));
        let s = run_circuit(&spec, 5).unwrap();
        for q in 1..=4 {
            let mut t = s.clone();
            t.apply_gate(&GateOp::X { site: q }).unwrap();
            t.apply_gate(&GateOp::X { site: q }).unwrap();
            for (a, b) in t.amplitudes().iter().zip(s.amplitudes()) {
                assert!((a - b).norm() <= 1e-15);
            }
        }
    }

    #[test]
    fn occupation_examples() {
        assert_eq!(StateVector::init_basis(2, "10").unwrap().occupation_probs(), vec![1.0, 0.0]);
        let mut amps = vec![c(0., 0.); 16];
        for i in [8, 4, 2, 1] {
            amps[i] = c(0.5, 0.);
        }
        let s = StateVector::from_amplitudes(amps).unwrap();
        for p in s.occupation_probs() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn two_qubit_resonance_point() {
        let spec = TrotterCircuitSpec::uniform(2, 2, GateFamily::Xy, FRAC_PI_4, ZLayerSpec::explicit(vec![0.0, 0.0]));
        let s = run_circuit(&spec, 0).unwrap();
        assert_abs_diff_eq!(s.basis_prob("01").unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn three_qubit_closed_form_point() {
        let theta = FRAC_PI_4;
        let spec = TrotterCircuitSpec::uniform(3, 2, GateFamily::Xy, theta, ZLayerSpec::explicit(vec![0.0; 3]));
        let s = run_circuit(&spec, 0).unwrap();
        let (sn, cs) = (theta.sin(), theta.cos());
        let expected = sn.powi(4) * cs.powi(2) * (4.0 + cs * cs + 4.0 * cs);
        assert_abs_diff_eq!(s.basis_prob("001").unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn no_hopping_keeps_excitation() {
        let spec = TrotterCircuitSpec::uniform(5, 6, GateFamily::Xy, 0.0, ZLayerSpec::disordered(FRAC_PI_2, 1.0));
        let s = run_circuit(&spec, 11).unwrap();
        assert_abs_diff_eq!(s.basis_prob("10000").unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn out_of_range_gate_rejected() {
        let mut s = StateVector::zero(3).unwrap();
        assert!(s.apply_gate(&GateOp::Xy { site: 3, angle: 0.1 }).is_err());
        assert!(s.apply_gate(&GateOp::Rz { site: 4, angle: 0.1 }).is_err());
    }
}
