//! Browser bindings for the interactive demo page in `www/`.
//!
//! Three operations are exported: the continuous resonance curve, the
//! discrete circuit resonance curve and a disordered localization run. Each
//! has a plain Rust counterpart so it can be tested natively.

use trotterlab::analytics::LocalizationReport;
use trotterlab::figures::{continuous_resonance, discrete_resonance};
use trotterlab::model::{GateFamily, TrotterCircuitSpec, ZLayerSpec};
use trotterlab::sweep::{run_sweep_with, Engine, ExperimentKind, Grid};
use trotterlab::{dense, subspace};
use wasm_bindgen::prelude::*;

/// Browser builds have no worker pool, so sweeps run sequentially.
const ENGINE: Engine = Engine {
    backend: trotterlab::sweep::Backend::Auto,
    threads: Some(1),
};

/// Largest grid the page may request.
pub const MAX_POINTS: usize = 20_000;

fn check_count(count: usize) -> Result<(), String> {
    if !(3..=MAX_POINTS).contains(&count) {
        return Err(format!("point count must be within 3..={MAX_POINTS}"));
    }
    Ok(())
}

/// `P_N(V1)` of the exact chain, sampled at `count` points of `[lo, hi]`.
#[allow(clippy::too_many_arguments)]
pub fn continuous_curve(
    n: usize,
    j1: f64,
    j2: f64,
    v2: f64,
    t: f64,
    lo: f64,
    hi: f64,
    count: usize,
) -> Result<Vec<f64>, String> {
    check_count(count)?;
    let spec = continuous_resonance(n, j1, j2, v2, t, Grid::linear(lo, hi, count));
    let result = run_sweep_with(&spec, &ENGINE).map_err(|e| e.to_string())?;
    Ok(result.mean_curve("probability").map_err(|e| e.to_string())?.1)
}

/// Last-qubit excitation probability of the XY circuit, over `φ ∈ [-π, π]`.
pub fn discrete_curve(
    n: usize,
    n_steps: usize,
    theta1: f64,
    theta2: f64,
    alpha: f64,
    count: usize,
) -> Result<Vec<f64>, String> {
    check_count(count)?;
    let pi = std::f64::consts::PI;
    let spec = discrete_resonance(
        ExperimentKind::ResonanceDiscrete,
        n,
        n_steps,
        theta1,
        theta2,
        alpha,
        Grid::linear(-pi, pi, count),
    );
    let result = run_sweep_with(&spec, &ENGINE).map_err(|e| e.to_string())?;
    Ok(result.mean_curve("probability").map_err(|e| e.to_string())?.1)
}

/// One disordered trajectory.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationRun {
    n: usize,
    occupations: Vec<f64>,
    ipr: Vec<f64>,
    tail: Vec<f64>,
    z_angles: Vec<f64>,
}

#[wasm_bindgen]
impl LocalizationRun {
    #[wasm_bindgen(getter)]
    pub fn qubits(&self) -> usize {
        self.n
    }

    #[wasm_bindgen(getter)]
    pub fn steps(&self) -> usize {
        self.tail.len()
    }

    /// Row-major `steps × qubits` occupation probabilities.
    #[wasm_bindgen(getter)]
    pub fn occupations(&self) -> Vec<f64> {
        self.occupations.clone()
    }

    /// `IPR_η`; empty for controlled-Rx runs.
    #[wasm_bindgen(getter)]
    pub fn ipr(&self) -> Vec<f64> {
        self.ipr.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn tail(&self) -> Vec<f64> {
        self.tail.clone()
    }

    #[wasm_bindgen(getter, js_name = zAngles)]
    pub fn z_angles(&self) -> Vec<f64> {
        self.z_angles.clone()
    }
}

/// Runs one disordered chain; `crx` selects the controlled-Rx family.
pub fn localization_run(
    n: usize,
    n_steps: usize,
    theta: f64,
    phi: f64,
    radius: f64,
    seed: u64,
    crx: bool,
) -> Result<LocalizationRun, String> {
    if crx && n > 16 {
        return Err("controlled-Rx runs are limited to 16 qubits in the browser".into());
    }
    let family = if crx { GateFamily::Crx } else { GateFamily::Xy };
    let spec = TrotterCircuitSpec::uniform(n, n_steps, family, theta, ZLayerSpec::disordered(phi, radius));
    spec.validate().map_err(|e| e.to_string())?;
    let occupations = if crx {
        dense::occupation_trajectory(&spec, seed)
    } else {
        subspace::discrete_trajectory(&spec, seed).map(|t| t.iter().map(|s| s.probabilities()).collect())
    }
    .map_err(|e| e.to_string())?;
    let report = LocalizationReport::from_occupations(&occupations, n_steps, !crx).map_err(|e| e.to_string())?;
    Ok(LocalizationRun {
        n,
        occupations: occupations.concat(),
        ipr: report.ipr_series,
        tail: report.tail_series,
        z_angles: spec.z_angles(seed).map_err(|e| e.to_string())?,
    })
}

#[wasm_bindgen(js_name = continuousCurve)]
#[allow(clippy::too_many_arguments)]
pub fn continuous_curve_js(
    n: usize,
    j1: f64,
    j2: f64,
    v2: f64,
    t: f64,
    lo: f64,
    hi: f64,
    count: usize,
) -> Result<Vec<f64>, JsError> {
    continuous_curve(n, j1, j2, v2, t, lo, hi, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = discreteCurve)]
pub fn discrete_curve_js(
    n: usize,
    n_steps: usize,
    theta1: f64,
    theta2: f64,
    alpha: f64,
    count: usize,
) -> Result<Vec<f64>, JsError> {
    discrete_curve(n, n_steps, theta1, theta2, alpha, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = localizationRun)]
pub fn localization_run_js(
    n: usize,
    n_steps: usize,
    theta: f64,
    phi: f64,
    radius: f64,
    seed: u64,
    crx: bool,
) -> Result<LocalizationRun, JsError> {
    localization_run(n, n_steps, theta, phi, radius, seed, crx).map_err(|e| JsError::new(&e))
}
