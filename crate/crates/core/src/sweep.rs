//! Reproducible parameter sweeps and disorder ensembles.
//!
//! A sweep evaluates one observable set at every `(grid point, trial)` pair.
//! Each pair gets its own seed from [`child_seed`], so results do not depend
//! on how work items are scheduled; rows are always merged in
//! `(point, trial)` order.
//!
//! Parameters are plain numbers keyed by name. Required keys per kind:
//!
//! | kind                   | required                              | optional (default)                                  |
//! |------------------------|---------------------------------------|-----------------------------------------------------|
//! | `resonance_discrete`   | `n n_steps theta1 phi alpha`          | `theta2` (theta1), `observe` (n)                    |
//! | `crx_resonance`        | `n n_steps theta1 phi alpha`          | `theta2` (theta1), `observe` (n)                    |
//! | `resonance_continuous` | `n j1 v1 v2 t`                        | `j2` (j1), `observe` (n), `large_nt` (0), `n_steps` (2000) |
//! | `localization`         | `n n_steps theta phi radius`          | `eta_profile` (min(10, n_steps))                    |
//! | `convergence`          | `n j1 v1 v2 t n_steps`                | `j2` (j1)                                           |
//!
//! Resonance systems use [`resonance_layout`]; the swept parameter overrides
//! the fixed entry of the same name.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{LocalizationReport, DEFAULT_PROMINENCE};
use crate::dense;
use crate::error::{Error, Result};
use crate::model::{
    circuit_from_chain, resonance_layout, ChainSpec, GateFamily, TrotterCircuitSpec, ZLayerSpec,
};
use crate::rng::{child_seed, GENERATOR_NAME};
use crate::subspace::{self, ChainPropagator};
use crate::TOOL_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ResonanceDiscrete,
    ResonanceContinuous,
    Localization,
    Convergence,
    CrxResonance,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ResonanceDiscrete => "resonance_discrete",
            ExperimentKind::ResonanceContinuous => "resonance_continuous",
            ExperimentKind::Localization => "localization",
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::CrxResonance => "crx_resonance",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::ResonanceDiscrete | ExperimentKind::CrxResonance => {
                &["n", "n_steps", "theta1", "phi", "alpha"]
            }
            ExperimentKind::ResonanceContinuous => &["n", "j1", "v1", "v2", "t"],
            ExperimentKind::Localization => &["n", "n_steps", "theta", "phi", "radius"],
            ExperimentKind::Convergence => &["n", "j1", "v1", "v2", "t", "n_steps"],
        }
    }

    fn default_trials(self) -> usize {
        match self {
            ExperimentKind::Localization => 20,
            _ => 1,
        }
    }
}

/// Grid of swept values: evenly spaced or listed explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Linear { start: f64, stop: f64, count: usize },
    Values { values: Vec<f64> },
}

impl Grid {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Grid::Linear { start, stop, count }
    }

    pub fn values(values: Vec<f64>) -> Self {
        Grid::Values { values }
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Linear { start, stop, count } => {
                let last = count.saturating_sub(1).max(1) as f64;
                (0..*count)
                    .map(|k| start + (stop - start) * k as f64 / last)
                    .collect()
            }
            Grid::Values { values } => values.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Linear { count, .. } => *count,
            Grid::Values { values } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::config(format!(
                "grid needs at least 2 points, got {}",
                self.len()
            )));
        }
        if self.points().iter().any(|x| !x.is_finite()) {
            return Err(Error::config("grid values must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweptParameter {
    pub name: String,
    pub grid: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub kind: ExperimentKind,
    pub swept: SweptParameter,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    /// Ensemble size; `None` picks 20 for localization and 1 otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default)]
    pub master_seed: u64,
    /// Two-qubit gate family for localization runs (XY unless given).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_family: Option<GateFamily>,
}

impl SweepSpec {
    pub fn new(kind: ExperimentKind, swept: &str, grid: Grid) -> Self {
        Self {
            kind,
            swept: SweptParameter {
                name: swept.to_owned(),
                grid,
            },
            fixed: BTreeMap::new(),
            trials: None,
            master_seed: 0,
            gate_family: None,
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.to_owned(), value);
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = Some(trials);
        self
    }

    pub fn with_family(mut self, family: GateFamily) -> Self {
        self.gate_family = Some(family);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn trial_count(&self) -> usize {
        self.trials.unwrap_or_else(|| self.kind.default_trials())
    }

    pub fn family(&self) -> GateFamily {
        match self.kind {
            ExperimentKind::CrxResonance => GateFamily::Crx,
            ExperimentKind::Localization => self.gate_family.unwrap_or_default(),
            _ => GateFamily::Xy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.swept.grid.validate()?;
        if self.trial_count() < 1 {
            return Err(Error::config("trials must be >= 1"));
        }
        for key in self.kind.required() {
            if *key != self.swept.name && !self.fixed.contains_key(*key) {
                return Err(Error::MissingParameter((*key).to_owned()));
            }
        }
        if let Some(family) = self.gate_family {
            let allowed = match self.kind {
                ExperimentKind::Localization => true,
                ExperimentKind::CrxResonance => family == GateFamily::Crx,
                _ => family == GateFamily::Xy,
            };
            if !allowed {
                return Err(Error::config(format!(
                    "{} runs cannot use gate family {}",
                    self.kind.name(),
                    family.name()
                )));
            }
        }
        Ok(())
    }
}

/// Simulation backend choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Auto,
    Dense,
    Subspace,
}

impl Backend {
    /// Concrete backend for `family`; `Subspace` with CRX is an error.
    pub fn resolve(self, family: GateFamily) -> Result<Backend> {
        match (self, family) {
            (Backend::Subspace, GateFamily::Crx) => Err(Error::config(
                "subspace backend cannot simulate controlled-Rx circuits",
            )),
            (Backend::Auto, GateFamily::Xy) => Ok(Backend::Subspace),
            (Backend::Auto, GateFamily::Crx) => Ok(Backend::Dense),
            (b, _) => Ok(b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Auto => "auto",
            Backend::Dense => "dense",
            Backend::Subspace => "subspace",
        }
    }
}

/// Execution options that never influence results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Engine {
    pub backend: Backend,
    /// Worker threads; `Some(1)` runs sequentially, `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Engine {
    pub fn sequential() -> Self {
        Self {
            backend: Backend::Auto,
            threads: Some(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub point: usize,
    pub value: f64,
    pub trial: usize,
    pub seed: u64,
    pub observables: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub traces: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    /// Unbiased sample variance; 0 for a single trial.
    pub variance: f64,
    pub count: usize,
}

impl Stat {
    /// Welford accumulation.
    pub fn from_samples(samples: impl IntoIterator<Item = f64>) -> Self {
        let (mut count, mut mean, mut m2) = (0usize, 0.0f64, 0.0f64);
        for x in samples {
            count += 1;
            let delta = x - mean;
            mean += delta / count as f64;
            m2 += delta * (x - mean);
        }
        let variance = if count > 1 {
            (m2 / (count - 1) as f64).max(0.0)
        } else {
            0.0
        };
        Stat {
            mean,
            variance,
            count,
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        (self.variance / self.count as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub point: usize,
    pub value: f64,
    pub observables: BTreeMap<String, Stat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub spec: SweepSpec,
    pub trials: usize,
    pub master_seed: u64,
    pub generator: String,
    pub tool_version: String,
    pub backend: String,
    pub peak_prominence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub provenance: Provenance,
    pub rows: Vec<Row>,
    pub aggregates: Vec<Aggregate>,
}

impl SweepResult {
    /// Mean of `observable` across trials, one sample per grid point.
    pub fn mean_curve(&self, observable: &str) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut xs = Vec::with_capacity(self.aggregates.len());
        let mut ys = Vec::with_capacity(self.aggregates.len());
        for agg in &self.aggregates {
            let stat = agg.observables.get(observable).ok_or_else(|| {
                Error::config(format!("sweep has no observable `{observable}`"))
            })?;
            xs.push(agg.value);
            ys.push(stat.mean);
        }
        Ok((xs, ys))
    }

    /// Rows belonging to grid point `point`.
    pub fn rows_at(&self, point: usize) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.point == point)
    }
}

struct Params {
    values: BTreeMap<String, f64>,
}

impl Params {
    fn get(&self, key: &str) -> Result<f64> {
        self.values
            .get(key)
            .copied()
            .ok_or_else(|| Error::MissingParameter(key.to_owned()))
    }

    fn get_or(&self, key: &str, default: f64) -> f64 {
        self.values.get(key).copied().unwrap_or(default)
    }

    fn count(&self, key: &str) -> Result<usize> {
        to_count(key, self.get(key)?)
    }

    fn count_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.values.get(key) {
            Some(&v) => to_count(key, v),
            None => Ok(default),
        }
    }
}

fn to_count(key: &str, v: f64) -> Result<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v < 1e12 {
        Ok(v as usize)
    } else {
        Err(Error::config(format!(
            "parameter `{key}` must be a non-negative integer, got {v}"
        )))
    }
}

type Observation = (BTreeMap<String, f64>, BTreeMap<String, Vec<f64>>);

fn scalar(name: &str, value: f64) -> Observation {
    (BTreeMap::from([(name.to_owned(), value)]), BTreeMap::new())
}

fn observed_site(p: &Params, n: usize) -> Result<usize> {
    let site = p.count_or("observe", n)?;
    if site == 0 || site > n {
        return Err(Error::config(format!("observe = {site} outside 1..={n}")));
    }
    Ok(site)
}

fn resonance_circuit(p: &Params, family: GateFamily) -> Result<TrotterCircuitSpec> {
    let n = p.count("n")?;
    let theta1 = p.get("theta1")?;
    let (bonds, phis) = resonance_layout(
        n,
        theta1,
        p.get_or("theta2", theta1),
        p.get("phi")?,
        p.get("alpha")?,
    )?;
    let spec = TrotterCircuitSpec {
        n_qubits: n,
        n_steps: p.count("n_steps")?,
        gate_family: family,
        bond_angles: bonds,
        z_layer: ZLayerSpec::explicit(phis),
        drop_final_z: true,
        initial_excitation_site: 1,
    };
    spec.validate()?;
    Ok(spec)
}

fn resonance_chain(p: &Params) -> Result<ChainSpec> {
    let n = p.count("n")?;
    let j1 = p.get("j1")?;
    let (couplings, potentials) =
        resonance_layout(n, j1, p.get_or("j2", j1), p.get("v1")?, p.get("v2")?)?;
    ChainSpec::new(couplings, potentials)
}

/// Final occupation probabilities of an XY or CRX circuit.
fn final_occupations(spec: &TrotterCircuitSpec, backend: Backend, seed: u64) -> Result<Vec<f64>> {
    match backend.resolve(spec.gate_family)? {
        Backend::Subspace => Ok(subspace::run_discrete(spec, spec.n_steps, seed)?.probabilities()),
        _ => Ok(dense::run_circuit(spec, seed)?.occupation_probs()),
    }
}

fn trajectory_occupations(
    spec: &TrotterCircuitSpec,
    backend: Backend,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    match backend.resolve(spec.gate_family)? {
        Backend::Subspace => Ok(subspace::discrete_trajectory(spec, seed)?
            .iter()
            .map(|s| s.probabilities())
            .collect()),
        _ => dense::occupation_trajectory(spec, seed),
    }
}

fn evaluate(spec: &SweepSpec, p: &Params, backend: Backend, seed: u64) -> Result<Observation> {
    match spec.kind {
        ExperimentKind::ResonanceDiscrete | ExperimentKind::CrxResonance => {
            let circuit = resonance_circuit(p, spec.family())?;
            let site = observed_site(p, circuit.n_qubits)?;
            let probs = final_occupations(&circuit, backend, seed)?;
            Ok(scalar("probability", probs[site - 1]))
        }
        ExperimentKind::ResonanceContinuous => {
            let chain = resonance_chain(p)?;
            let site = observed_site(p, chain.len())?;
            let t = p.get("t")?;
            let probs = if p.get_or("large_nt", 0.0) != 0.0 {
                let steps = p.count_or("n_steps", 2000)?;
                let circuit = circuit_from_chain(&chain, t / steps as f64, steps)?;
                final_occupations(&circuit, backend, seed)?
            } else {
                subspace::continuous_evolve(&chain, t, 1)?.probabilities()
            };
            Ok(scalar("probability", probs[site - 1]))
        }
        ExperimentKind::Localization => {
            let n = p.count("n")?;
            let steps = p.count("n_steps")?;
            let circuit = TrotterCircuitSpec::uniform(
                n,
                steps,
                spec.family(),
                p.get("theta")?,
                ZLayerSpec::disordered(p.get("phi")?, p.get("radius")?),
            );
            circuit.validate()?;
            let profile_step = p.count_or("eta_profile", steps.min(10))?;
            let occupations = trajectory_occupations(&circuit, backend, seed)?;
            let single = circuit.gate_family == GateFamily::Xy;
            let report = LocalizationReport::from_occupations(&occupations, profile_step, single)?;
            let mut scalars = BTreeMap::new();
            let mut traces = BTreeMap::new();
            if single {
                scalars.insert("ipr_ave".to_owned(), report.ipr_ave);
                traces.insert("ipr".to_owned(), report.ipr_series.clone());
            }
            scalars.insert("pt_mean".to_owned(), report.tail_mean());
            scalars.insert(
                "pt_profile".to_owned(),
                report.tail_series[profile_step - 1],
            );
            traces.insert("pt".to_owned(), report.tail_series);
            traces.insert("profile".to_owned(), report.final_profile);
            traces.insert("z_angles".to_owned(), circuit.z_angles(seed)?);
            Ok((scalars, traces))
        }
        ExperimentKind::Convergence => {
            if backend == Backend::Dense {
                return Err(Error::config(
                    "convergence compares single-excitation amplitudes; use the subspace backend",
                ));
            }
            let chain = resonance_chain(p)?;
            let steps = p.count("n_steps")?;
            let table = convergence_study(&chain, p.get("t")?, &[steps])?;
            Ok(scalar("distance", table[0].1))
        }
    }
}

/// Runs `spec` with default engine options.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, &Engine::default())
}

pub fn run_sweep_with(spec: &SweepSpec, engine: &Engine) -> Result<SweepResult> {
    spec.validate()?;
    let backend = engine.backend.resolve(spec.family())?;
    let points = spec.swept.grid.points();
    let trials = spec.trial_count();
    let items: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (0..trials).map(move |k| (i, k)))
        .collect();

    let work = |&(i, k): &(usize, usize)| -> Result<Row> {
        let mut values = spec.fixed.clone();
        values.insert(spec.swept.name.clone(), points[i]);
        let params = Params { values };
        let seed = child_seed(spec.master_seed, i as u64, k as u64);
        let (observables, traces) = evaluate(spec, &params, backend, seed)?;
        Ok(Row {
            point: i,
            value: points[i],
            trial: k,
            seed,
            observables,
            traces,
        })
    };

    let rows: Vec<Row> = match engine.threads {
        Some(1) => items.iter().map(work).collect::<Result<_>>()?,
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::config(format!("cannot start {t} worker threads: {e}")))?
            .install(|| items.par_iter().map(work).collect::<Result<_>>())?,
        None => items.par_iter().map(work).collect::<Result<_>>()?,
    };

    let aggregates = aggregate(&rows, &points);
    Ok(SweepResult {
        provenance: Provenance {
            spec: spec.clone(),
            trials,
            master_seed: spec.master_seed,
            generator: GENERATOR_NAME.to_owned(),
            tool_version: TOOL_VERSION.to_owned(),
            backend: backend.name().to_owned(),
            peak_prominence: DEFAULT_PROMINENCE,
        },
        rows,
        aggregates,
    })
}

fn aggregate(rows: &[Row], points: &[f64]) -> Vec<Aggregate> {
    points
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let at_point: Vec<&Row> = rows.iter().filter(|r| r.point == i).collect();
            let keys = at_point
                .first()
                .map(|r| r.observables.keys().cloned().collect::<Vec<_>>())
                .unwrap_or_default();
            let observables = keys
                .into_iter()
                .map(|key| {
                    let stat = Stat::from_samples(at_point.iter().map(|r| r.observables[&key]));
                    (key, stat)
                })
                .collect();
            Aggregate {
                point: i,
                value,
                observables,
            }
        })
        .collect()
}

/// Distance `‖ψ_discrete(N_T) − ψ_exact(t)‖₂` for each `N_T`, with `τ = t/N_T`
/// and every Rz layer kept.
pub fn convergence_study(chain: &ChainSpec, t: f64, n_t_list: &[usize]) -> Result<Vec<(usize, f64)>> {
    if n_t_list.is_empty() {
        return Err(Error::config("convergence study needs at least one N_T"));
    }
    if n_t_list.contains(&0) {
        return Err(Error::config("N_T values must be >= 1"));
    }
    if n_t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("N_T values must be strictly increasing"));
    }
    let exact = ChainPropagator::new(chain)?.evolve(t, 1)?;
    n_t_list
        .iter()
        .map(|&steps| {
            let circuit = circuit_from_chain(chain, t / steps as f64, steps)?;
            let discrete = subspace::run_discrete(&circuit, steps, 0)?;
            Ok((steps, discrete.distance(&exact)))
        })
        .collect()
}
