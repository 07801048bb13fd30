//! Self-test suites: closed forms against the dense backend, backend
//! equivalence, norm preservation and Trotter convergence.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analytics::{p001_closed_form, p01_closed_form};
use crate::dense::{self, StateVector};
use crate::model::{ChainSpec, GateFamily, TrotterCircuitSpec, ZLayerSpec};
use crate::rng::SymmetricUniform;
use crate::subspace;
use crate::sweep::convergence_study;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    /// Largest observed deviation (or offending ratio) for diagnostics.
    pub worst: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    name: &'static str,
    checks: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: 0,
            worst: 0.0,
        }
    }

    fn deviation(&mut self, value: f64, tolerance: f64) {
        self.checks += 1;
        if !(value <= tolerance) {
            self.failures += 1;
        }
        if value > self.worst || value.is_nan() {
            self.worst = value;
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            worst: self.worst,
        }
    }
}

fn grid(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> + Clone {
    (0..count).map(move |k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
}

fn closed_form_suite(name: &'static str, n: usize) -> SuiteReport {
    let mut tally = Tally::new(name);
    let target = format!("{}1", "0".repeat(n - 1));
    for theta in grid(0.1, 1.5, 5) {
        for phi in grid(-PI, PI, 21) {
            for detuning in grid(-PI, PI, 21) {
                let alpha = phi + detuning;
                let phis = if n == 2 { vec![phi, alpha] } else { vec![phi, alpha, phi] };
                let spec = TrotterCircuitSpec::uniform(n, 2, GateFamily::Xy, theta, ZLayerSpec::explicit(phis));
                let expected = if n == 2 {
                    p01_closed_form(theta, phi, alpha)
                } else {
                    p001_closed_form(theta, phi, alpha)
                };
                let got = dense::run_circuit(&spec, 0)
                    .and_then(|s| s.basis_prob(&target))
                    .unwrap_or(f64::NAN);
                tally.deviation((got - expected).abs(), 1e-12);
            }
        }
    }
    tally.finish()
}

/// Random XY circuit with up to `max_n` qubits and `max_steps` steps.
pub fn random_xy_circuit(draw: &mut SymmetricUniform, max_n: usize, max_steps: usize) -> TrotterCircuitSpec {
    let n = 2 + (draw.unit() * (max_n - 1) as f64) as usize;
    let steps = 1 + (draw.unit() * max_steps as f64) as usize;
    let mut spec = TrotterCircuitSpec::uniform(
        n.min(max_n),
        steps.min(max_steps),
        GateFamily::Xy,
        0.0,
        ZLayerSpec::disordered(draw.sample(PI), draw.unit() * PI),
    );
    spec.bond_angles = (0..spec.n_qubits - 1).map(|_| draw.sample(PI)).collect();
    spec.initial_excitation_site = 1 + (draw.unit() * spec.n_qubits as f64) as usize;
    spec
}

fn backend_suite(seed: u64) -> (SuiteReport, SuiteReport) {
    let mut equivalence = Tally::new("backend_equivalence");
    let mut norms = Tally::new("norm_preservation");
    let mut draw = SymmetricUniform::new(seed);
    for case in 0..50u64 {
        let spec = random_xy_circuit(&mut draw, 10, 20);
        let gates = match spec.build_circuit(case) {
            Ok(g) => g,
            Err(_) => {
                equivalence.deviation(f64::NAN, 0.0);
                continue;
            }
        };
        let mut state = StateVector::zero(spec.n_qubits).expect("n <= 10");
        for g in &gates {
            let _ = state.apply_gate(g);
            norms.deviation((state.norm_sqr() - 1.0).abs(), 1e-12);
        }
        match subspace::run_discrete(&spec, spec.n_steps, case) {
            Ok(sub) => {
                norms.deviation((sub.norm_sqr() - 1.0).abs(), 1e-12);
                let worst = sub
                    .probabilities()
                    .iter()
                    .zip(state.occupation_probs())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                equivalence.deviation(worst, 1e-10);
            }
            Err(_) => equivalence.deviation(f64::NAN, 0.0),
        }
    }
    (equivalence.finish(), norms.finish())
}

fn rabi_suite() -> SuiteReport {
    let mut tally = Tally::new("two_level_oracle");
    for k in 0..20 {
        let j = 0.05 + 0.1 * k as f64;
        let t = 0.7 * k as f64;
        let chain = ChainSpec::new(vec![j], vec![0.3, 0.3]).expect("valid chain");
        let p = subspace::continuous_evolve(&chain, t, 1)
            .map(|s| s.probabilities()[1])
            .unwrap_or(f64::NAN);
        tally.deviation((p - (j * t).sin().powi(2)).abs(), 1e-12);
    }
    tally.finish()
}

fn convergence_suite() -> SuiteReport {
    let mut tally = Tally::new("trotter_convergence");
    let chain = ChainSpec::new(vec![1.0, 0.8, 1.2, 0.9], vec![0.3, -0.5, 0.2, 0.7, -0.1])
        .expect("valid chain");
    match convergence_study(&chain, 1.0, &[10, 20, 40, 80]) {
        Ok(table) => {
            for w in table.windows(2) {
                let ratio = w[0].1 / w[1].1;
                // Deviation is distance outside [1.5, 2.5].
                tally.deviation((1.5 - ratio).max(ratio - 2.5).max(0.0), 0.0);
            }
        }
        Err(_) => tally.deviation(f64::NAN, 0.0),
    }
    tally.finish()
}

/// Runs every suite; `seed` drives the random-circuit cases.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    let (equivalence, norms) = backend_suite(seed);
    vec![
        closed_form_suite("closed_form_p01", 2),
        closed_form_suite("closed_form_p001", 3),
        equivalence,
        norms,
        rabi_suite(),
        convergence_suite(),
    ]
}
