//! Bundled recipes for the standard resonance and localization panels.
//!
//! Each recipe is a list of named series, each a [`SweepSpec`]. Parameters
//! are hard-coded here so that tests and the command line share them.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::GateFamily;
use crate::sweep::{run_sweep_with, Engine, ExperimentKind, Grid, SweepResult, SweepSpec};

pub const FIGURE_IDS: [&str; 11] = [
    "2a4", "2b4", "2c4", "2d4", "3b", "3c", "3d", "4a", "4b", "4c", "4d",
];

/// Qubit count assumed for the controlled-Rx localization panels.
pub const CRX_LOCALIZATION_QUBITS: usize = 15;

/// Trotter steps for the controlled-Rx localization panels.
pub const CRX_LOCALIZATION_STEPS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub id: String,
    pub spec: SweepSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureRecipe {
    pub id: String,
    pub kind: ExperimentKind,
    pub series: Vec<Series>,
}

/// A labelled set of sweep results sharing one experiment kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub label: String,
    pub kind: ExperimentKind,
    pub series: Vec<SeriesResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub id: String,
    pub result: SweepResult,
}

impl FigureRecipe {
    fn new(id: &str, kind: ExperimentKind) -> Self {
        Self {
            id: id.to_owned(),
            kind,
            series: Vec::new(),
        }
    }

    fn push(mut self, id: impl Into<String>, spec: SweepSpec) -> Self {
        self.series.push(Series {
            id: id.into(),
            spec,
        });
        self
    }

    /// Overrides the master seed of every series.
    pub fn with_seed(mut self, seed: u64) -> Self {
        for s in &mut self.series {
            s.spec.master_seed = seed;
        }
        self
    }

    pub fn run(&self, engine: &Engine) -> Result<ResultSet> {
        let series = self
            .series
            .iter()
            .map(|s| {
                Ok(SeriesResult {
                    id: s.id.clone(),
                    result: run_sweep_with(&s.spec, engine)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ResultSet {
            label: format!("figure {}", self.id),
            kind: self.kind,
            series,
        })
    }
}

fn fmt_angle(x: f64) -> String {
    for (k, label) in [
        (1.0, "pi"),
        (2.0, "pi/2"),
        (4.0, "pi/4"),
        (5.0, "pi/5"),
        (1.5, "pi/1.5"),
    ] {
        if (x - PI / k).abs() < 1e-12 {
            return label.to_owned();
        }
        if (x + PI / k).abs() < 1e-12 {
            return format!("-{label}");
        }
    }
    format!("{x}")
}

/// Continuous `P_N(V1)` for the resonance layout.
pub fn continuous_resonance(n: usize, j1: f64, j2: f64, v2: f64, t: f64, grid: Grid) -> SweepSpec {
    SweepSpec::new(ExperimentKind::ResonanceContinuous, "v1", grid)
        .with("n", n as f64)
        .with("j1", j1)
        .with("j2", j2)
        .with("v2", v2)
        .with("t", t)
}

/// Discrete `P_{0…01}(φ)` for the resonance layout.
pub fn discrete_resonance(
    kind: ExperimentKind,
    n: usize,
    n_steps: usize,
    theta1: f64,
    theta2: f64,
    alpha: f64,
    grid: Grid,
) -> SweepSpec {
    SweepSpec::new(kind, "phi", grid)
        .with("n", n as f64)
        .with("n_steps", n_steps as f64)
        .with("theta1", theta1)
        .with("theta2", theta2)
        .with("alpha", alpha)
}

/// Localization ensemble over disorder radius.
pub fn localization(
    family: GateFamily,
    n: usize,
    n_steps: usize,
    theta: f64,
    phi: f64,
    radii: Grid,
    trials: usize,
) -> SweepSpec {
    SweepSpec::new(ExperimentKind::Localization, "radius", radii)
        .with("n", n as f64)
        .with("n_steps", n_steps as f64)
        .with("theta", theta)
        .with("phi", phi)
        .with("eta_profile", 10f64.min(n_steps as f64))
        .with_family(family)
        .with_trials(trials)
}

fn phi_grid() -> Grid {
    Grid::linear(-PI, PI, 201)
}

fn resonance_panel(
    id: &str,
    n: usize,
    cont: (f64, f64, f64, &[f64], Grid),
    disc: (usize, f64, f64, &[f64]),
) -> FigureRecipe {
    let (j1, j2, t, v2s, grid) = cont;
    let (steps, theta1, theta2, alphas) = disc;
    let mut recipe = FigureRecipe::new(id, ExperimentKind::ResonanceContinuous);
    for &v2 in v2s {
        recipe = recipe.push(
            format!("continuous V2={}", fmt_angle(v2)),
            continuous_resonance(n, j1, j2, v2, t, grid.clone()),
        );
    }
    for &alpha in alphas {
        recipe = recipe.push(
            format!("discrete alpha={}", fmt_angle(alpha)),
            discrete_resonance(
                ExperimentKind::ResonanceDiscrete,
                n,
                steps,
                theta1,
                theta2,
                alpha,
                phi_grid(),
            ),
        );
    }
    recipe
}

/// Recipe for panel `id` (one of [`FIGURE_IDS`]).
pub fn recipe(id: &str) -> Result<FigureRecipe> {
    let recipe = match id {
        "2a4" => resonance_panel(
            id,
            2,
            (0.1, 0.1, 15.0, &[0.0, -FRAC_PI_2], Grid::linear(-4.0, 4.0, 801)),
            (2, FRAC_PI_2, FRAC_PI_2, &[0.0, -FRAC_PI_2]),
        ),
        "2b4" => resonance_panel(
            id,
            3,
            (0.1, 0.1, 22.0, &[0.0, -FRAC_PI_2], Grid::linear(-4.0, 4.0, 801)),
            (2, FRAC_PI_2, FRAC_PI_2, &[0.0, -FRAC_PI_2]),
        ),
        "2c4" => resonance_panel(
            id,
            4,
            (1.0, 20.0, 3.0, &[10.0, 20.0], Grid::linear(-40.0, 40.0, 8001)),
            (3, PI / 1.5, PI / 1.5, &[FRAC_PI_4, -PI / 1.5]),
        ),
        "2d4" => resonance_panel(
            id,
            5,
            (0.1, 20.0, 40.0, &[10.0, 20.0], Grid::linear(-45.0, 45.0, 18001)),
            (4, PI / 3.0, PI / 1.2, &[PI / 1.5, PI / 5.0]),
        ),
        "3b" => {
            let crx = |theta: f64, alpha: f64| {
                discrete_resonance(ExperimentKind::CrxResonance, 4, 3, theta, theta, alpha, phi_grid())
            };
            FigureRecipe::new(id, ExperimentKind::CrxResonance)
                .push("alpha=pi/4 theta=pi/1.5", crx(PI / 1.5, FRAC_PI_4))
                .push("alpha=-pi/1.5 theta=pi/1.5", crx(PI / 1.5, -PI / 1.5))
                .push("alpha=pi/4 theta=pi/2", crx(FRAC_PI_2, FRAC_PI_4))
        }
        "3c" | "3d" => FigureRecipe::new(id, ExperimentKind::Localization).push(
            "crx",
            localization(
                GateFamily::Crx,
                CRX_LOCALIZATION_QUBITS,
                CRX_LOCALIZATION_STEPS,
                FRAC_PI_2,
                FRAC_PI_2,
                Grid::values(vec![0.0, FRAC_PI_8, FRAC_PI_4, FRAC_PI_2]),
                20,
            ),
        ),
        "4a" => FigureRecipe::new(id, ExperimentKind::Localization).push(
            "xy",
            localization(
                GateFamily::Xy,
                15,
                80,
                FRAC_PI_2,
                FRAC_PI_2,
                Grid::values(vec![0.0, FRAC_PI_2]),
                1,
            ),
        ),
        "4b" => FigureRecipe::new(id, ExperimentKind::Localization).push(
            "xy",
            localization(
                GateFamily::Xy,
                15,
                80,
                FRAC_PI_2,
                FRAC_PI_2,
                Grid::linear(0.0, FRAC_PI_2, 5),
                20,
            ),
        ),
        "4c" | "4d" => FigureRecipe::new(id, ExperimentKind::Localization).push(
            "xy",
            localization(
                GateFamily::Xy,
                15,
                80,
                FRAC_PI_2,
                FRAC_PI_2,
                Grid::values(vec![0.0, FRAC_PI_8, FRAC_PI_4, FRAC_PI_2]),
                1,
            ),
        ),
        other => {
            return Err(Error::config(format!(
                "unknown figure id {other:?}; expected one of {}",
                FIGURE_IDS.join(", ")
            )))
        }
    };
    Ok(recipe)
}
