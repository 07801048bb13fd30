//! Circuit and chain descriptions.
//!
//! Qubits and chain sites are numbered from 1. A Trotter step is the layer of
//! two-qubit gates on bonds `(1,2), (2,3), ..., (N-1,N)` in that order,
//! followed by one Rz gate per qubit. Bond angles are hop angles: `XY(θ)`
//! sends `|10⟩` to `cos θ |10⟩ - i sin θ |01⟩`, so `θ_j = J_j τ` and
//! `φ_j = V_j τ` relate a circuit to the tight-binding chain it discretizes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SymmetricUniform;

/// Family of the two-qubit gate used in every Trotter layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GateFamily {
    #[default]
    Xy,
    Crx,
}

impl GateFamily {
    pub fn name(self) -> &'static str {
        match self {
            GateFamily::Xy => "xy",
            GateFamily::Crx => "crx",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Xy,
    Crx,
    Rz,
    X,
}

/// A primitive gate. Two-qubit gates always act on a bond `(j, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GateOp {
    X { site: usize },
    Rz { site: usize, angle: f64 },
    /// Excitation hop on bond `(site, site + 1)`.
    Xy { site: usize, angle: f64 },
    /// Rx on `site + 1` controlled by `site`.
    Crx { site: usize, angle: f64 },
}

impl GateOp {
    pub fn kind(&self) -> GateKind {
        match self {
            GateOp::X { .. } => GateKind::X,
            GateOp::Rz { .. } => GateKind::Rz,
            GateOp::Xy { .. } => GateKind::Xy,
            GateOp::Crx { .. } => GateKind::Crx,
        }
    }

    /// Sites touched, in order (control first for CRX).
    pub fn sites(&self) -> Vec<usize> {
        match *self {
            GateOp::X { site } | GateOp::Rz { site, .. } => vec![site],
            GateOp::Xy { site, .. } | GateOp::Crx { site, .. } => vec![site, site + 1],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateOp::X { .. } => None,
            GateOp::Rz { angle, .. } | GateOp::Xy { angle, .. } | GateOp::Crx { angle, .. } => {
                Some(angle)
            }
        }
    }

    pub(crate) fn two_qubit(family: GateFamily, site: usize, angle: f64) -> Self {
        match family {
            GateFamily::Xy => GateOp::Xy { site, angle },
            GateFamily::Crx => GateOp::Crx { site, angle },
        }
    }

    /// Checks that every touched site lies in `[1, n_qubits]`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let sites = self.sites();
        if sites.iter().any(|&s| s == 0 || s > n_qubits) {
            return Err(Error::config(format!(
                "gate {:?} acts outside qubits 1..={n_qubits}",
                self
            )));
        }
        Ok(())
    }
}

fn alternating_signs(n: usize) -> Vec<f64> {
    (0..n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect()
}

/// Rz-layer schedule: `φ_j = s_j (φ + r_j)` with `r_j` uniform on `[-R, R]`.
///
/// One realization is drawn per circuit and reused by every Trotter step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZLayerSpec {
    #[serde(default)]
    pub base_phi: f64,
    /// Per-qubit signs; `None` means `+, -, +, -, ...`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_pattern: Option<Vec<f64>>,
    #[serde(default)]
    pub disorder_radius: f64,
    /// Hand-set angles; bypasses sampling entirely.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_phis: Option<Vec<f64>>,
}

impl ZLayerSpec {
    pub fn explicit(phis: Vec<f64>) -> Self {
        Self {
            base_phi: 0.0,
            sign_pattern: None,
            disorder_radius: 0.0,
            explicit_phis: Some(phis),
        }
    }

    pub fn disordered(base_phi: f64, disorder_radius: f64) -> Self {
        Self {
            base_phi,
            sign_pattern: None,
            disorder_radius,
            explicit_phis: None,
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if !(self.disorder_radius >= 0.0) || !self.disorder_radius.is_finite() {
            return Err(Error::config(format!(
                "disorder radius must be finite and >= 0, got {}",
                self.disorder_radius
            )));
        }
        if let Some(phis) = &self.explicit_phis {
            if phis.len() != n_qubits {
                return Err(Error::config(format!(
                    "explicit_phis has {} entries, expected {n_qubits}",
                    phis.len()
                )));
            }
        }
        if let Some(signs) = &self.sign_pattern {
            if signs.len() != n_qubits {
                return Err(Error::config(format!(
                    "sign_pattern has {} entries, expected {n_qubits}",
                    signs.len()
                )));
            }
            if signs.iter().any(|&s| s != 1.0 && s != -1.0) {
                return Err(Error::config("sign_pattern entries must be +1 or -1"));
            }
        }
        Ok(())
    }

    /// Draws the `N` Rz angles for one circuit.
    ///
    /// With `R = 0` no random numbers are consumed and the seed is irrelevant.
    pub fn realize(&self, n_qubits: usize, seed: u64) -> Result<Vec<f64>> {
        self.validate(n_qubits)?;
        if let Some(phis) = &self.explicit_phis {
            return Ok(phis.clone());
        }
        let signs = self
            .sign_pattern
            .clone()
            .unwrap_or_else(|| alternating_signs(n_qubits));
        if self.disorder_radius == 0.0 {
            return Ok(signs.iter().map(|s| s * self.base_phi).collect());
        }
        let mut uniform = SymmetricUniform::new(seed);
        Ok(signs
            .iter()
            .map(|s| s * (self.base_phi + uniform.sample(self.disorder_radius)))
            .collect())
    }
}

/// Free-function form of [`ZLayerSpec::realize`].
pub fn realize_z_layer(spec: &ZLayerSpec, n_qubits: usize, seed: u64) -> Result<Vec<f64>> {
    spec.realize(n_qubits, seed)
}

fn default_true() -> bool {
    true
}

fn default_site() -> usize {
    1
}

/// Complete description of an `N`-qubit, `N_T`-step Trotter circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrotterCircuitSpec {
    pub n_qubits: usize,
    pub n_steps: usize,
    #[serde(default)]
    pub gate_family: GateFamily,
    pub bond_angles: Vec<f64>,
    pub z_layer: ZLayerSpec,
    /// Omit the Rz layer of the last step (it cannot change occupation).
    #[serde(default = "default_true")]
    pub drop_final_z: bool,
    #[serde(default = "default_site")]
    pub initial_excitation_site: usize,
}

/// A built circuit split into its preparation gates and per-step layers.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitLayers {
    pub n_qubits: usize,
    pub preparation: Vec<GateOp>,
    pub steps: Vec<Vec<GateOp>>,
    pub z_angles: Vec<f64>,
}

impl CircuitLayers {
    pub fn flatten(&self) -> Vec<GateOp> {
        self.preparation
            .iter()
            .chain(self.steps.iter().flatten())
            .copied()
            .collect()
    }
}

impl TrotterCircuitSpec {
    /// Circuit with uniform bond angle and a hand-set Rz layer.
    pub fn uniform(
        n_qubits: usize,
        n_steps: usize,
        gate_family: GateFamily,
        theta: f64,
        z_layer: ZLayerSpec,
    ) -> Self {
        Self {
            n_qubits,
            n_steps,
            gate_family,
            bond_angles: vec![theta; n_qubits.saturating_sub(1)],
            z_layer,
            drop_final_z: true,
            initial_excitation_site: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 {
            return Err(Error::config(format!(
                "n_qubits must be >= 2, got {}",
                self.n_qubits
            )));
        }
        if self.n_steps < 1 {
            return Err(Error::config("n_steps must be >= 1"));
        }
        if self.bond_angles.len() != self.n_qubits - 1 {
            return Err(Error::config(format!(
                "bond_angles has {} entries, expected {}",
                self.bond_angles.len(),
                self.n_qubits - 1
            )));
        }
        if self.bond_angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::config("bond angles must be finite"));
        }
        if self.initial_excitation_site == 0 || self.initial_excitation_site > self.n_qubits {
            return Err(Error::config(format!(
                "initial_excitation_site {} outside 1..={}",
                self.initial_excitation_site, self.n_qubits
            )));
        }
        self.z_layer.validate(self.n_qubits)
    }

    /// Realized Rz angles shared by every step of this circuit.
    pub fn z_angles(&self, seed: u64) -> Result<Vec<f64>> {
        self.validate()?;
        self.z_layer.realize(self.n_qubits, seed)
    }

    /// Whether step `step` (0-based) carries its Rz layer.
    pub fn step_has_z(&self, step: usize) -> bool {
        !(self.drop_final_z && step + 1 == self.n_steps)
    }

    pub fn layers(&self, seed: u64) -> Result<CircuitLayers> {
        let z_angles = self.z_angles(seed)?;
        let n = self.n_qubits;
        let steps = (0..self.n_steps)
            .map(|step| {
                let mut layer: Vec<GateOp> = self
                    .bond_angles
                    .iter()
                    .enumerate()
                    .map(|(j, &theta)| GateOp::two_qubit(self.gate_family, j + 1, theta))
                    .collect();
                if self.step_has_z(step) {
                    layer.extend(
                        z_angles
                            .iter()
                            .enumerate()
                            .map(|(j, &angle)| GateOp::Rz { site: j + 1, angle }),
                    );
                }
                layer
            })
            .collect();
        Ok(CircuitLayers {
            n_qubits: n,
            preparation: vec![GateOp::X {
                site: self.initial_excitation_site,
            }],
            steps,
            z_angles,
        })
    }

    /// Ordered gate list: X on the initial site, then each step's two-qubit
    /// layer in ascending bond order followed by its Rz layer.
    pub fn build_circuit(&self, seed: u64) -> Result<Vec<GateOp>> {
        Ok(self.layers(seed)?.flatten())
    }
}

/// Free-function form of [`TrotterCircuitSpec::build_circuit`].
pub fn build_circuit(spec: &TrotterCircuitSpec, seed: u64) -> Result<Vec<GateOp>> {
    spec.build_circuit(seed)
}

/// Tight-binding chain: hopping `J_j` between sites `j, j+1`, on-site `V_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub couplings: Vec<f64>,
    pub potentials: Vec<f64>,
}

impl ChainSpec {
    pub fn new(couplings: Vec<f64>, potentials: Vec<f64>) -> Result<Self> {
        let chain = Self {
            couplings,
            potentials,
        };
        chain.validate()?;
        Ok(chain)
    }

    pub fn validate(&self) -> Result<()> {
        if self.potentials.is_empty() {
            return Err(Error::config("chain needs at least one site"));
        }
        if self.couplings.len() + 1 != self.potentials.len() {
            return Err(Error::config(format!(
                "chain has {} couplings for {} sites",
                self.couplings.len(),
                self.potentials.len()
            )));
        }
        if self
            .couplings
            .iter()
            .chain(&self.potentials)
            .any(|x| !x.is_finite())
        {
            return Err(Error::config("chain parameters must be finite"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.potentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.potentials.is_empty()
    }
}

/// Chain discretized by an XY circuit with step size `tau`: `J = θ/τ`, `V = φ/τ`.
pub fn chain_from_circuit(spec: &TrotterCircuitSpec, tau: f64, seed: u64) -> Result<ChainSpec> {
    if spec.gate_family != GateFamily::Xy {
        return Err(Error::UnsupportedMapping(
            "controlled-Rx circuits have no single-excitation chain equivalent".into(),
        ));
    }
    if !(tau.is_finite() && tau != 0.0) {
        return Err(Error::config(format!("step size must be finite and nonzero, got {tau}")));
    }
    let phis = spec.z_angles(seed)?;
    ChainSpec::new(
        spec.bond_angles.iter().map(|t| t / tau).collect(),
        phis.iter().map(|p| p / tau).collect(),
    )
}

/// XY circuit discretizing `chain` with `n_steps` steps of size `tau`.
///
/// The Rz layer is kept on every step so that the circuit approximates
/// `exp(-iHt)` including on-site phases.
pub fn circuit_from_chain(chain: &ChainSpec, tau: f64, n_steps: usize) -> Result<TrotterCircuitSpec> {
    chain.validate()?;
    Ok(TrotterCircuitSpec {
        n_qubits: chain.len(),
        n_steps,
        gate_family: GateFamily::Xy,
        bond_angles: chain.couplings.iter().map(|j| j * tau).collect(),
        z_layer: ZLayerSpec::explicit(chain.potentials.iter().map(|v| v * tau).collect()),
        drop_final_z: false,
        initial_excitation_site: 1,
    })
}

/// Barrier layouts for the 2- to 5-site resonance systems.
///
/// With edge value `e`, inner value `a`, outer hop `p` and inner hop `q`:
///
/// | N | on-site              | hopping        |
/// |---|----------------------|----------------|
/// | 2 | `e, a`               | `p`            |
/// | 3 | `e, a, e`            | `p, p`         |
/// | 4 | `e, a, -a, e`        | `p, q, p`      |
/// | 5 | `e, a, 0, -a, e`     | `p, q, q, p`   |
///
/// For N = 2 and 3 the inner hop is ignored. Works for energies and for
/// angles alike.
pub fn resonance_layout(
    n: usize,
    outer_hop: f64,
    inner_hop: f64,
    edge: f64,
    inner: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (hops, sites) = match n {
        2 => (vec![outer_hop], vec![edge, inner]),
        3 => (vec![outer_hop; 2], vec![edge, inner, edge]),
        4 => (
            vec![outer_hop, inner_hop, outer_hop],
            vec![edge, inner, -inner, edge],
        ),
        5 => (
            vec![outer_hop, inner_hop, inner_hop, outer_hop],
            vec![edge, inner, 0.0, -inner, edge],
        ),
        _ => {
            return Err(Error::config(format!(
                "resonance layouts exist for 2..=5 sites, got {n}"
            )))
        }
    };
    Ok((hops, sites))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn zero_radius_gives_signed_base() {
        let z = ZLayerSpec::disordered(FRAC_PI_2, 0.0);
        let phis = z.realize(4, 99).unwrap();
        assert_eq!(phis, vec![FRAC_PI_2, -FRAC_PI_2, FRAC_PI_2, -FRAC_PI_2]);
    }

    #[test]
    fn explicit_override_ignores_seed() {
        let z = ZLayerSpec::explicit(vec![0.3, -1.1]);
        assert_eq!(z.realize(2, 1).unwrap(), vec![0.3, -1.1]);
        assert_eq!(z.realize(2, 12345).unwrap(), vec![0.3, -1.1]);
    }

    #[test]
    fn disorder_range_over_many_draws() {
        let z = ZLayerSpec::disordered(FRAC_PI_2, FRAC_PI_2);
        let signs = alternating_signs(15);
        let mut draws = 0;
        for seed in 0..700u64 {
            let phis = z.realize(15, seed).unwrap();
            for (p, s) in phis.iter().zip(&signs) {
                let magnitude = p * s;
                assert!((0.0..=PI).contains(&magnitude), "{magnitude}");
                draws += 1;
            }
        }
        assert!(draws >= 10_000);
    }

    #[test]
    fn length_mismatches_are_config_errors() {
        let z = ZLayerSpec::explicit(vec![0.0; 3]);
        assert!(matches!(z.realize(2, 0), Err(Error::Config(_))));
        let z = ZLayerSpec {
            sign_pattern: Some(vec![1.0]),
            ..ZLayerSpec::disordered(0.1, 0.1)
        };
        assert!(matches!(z.realize(3, 0), Err(Error::Config(_))));
        let z = ZLayerSpec::disordered(0.1, -1.0);
        assert!(z.realize(3, 0).is_err());
    }

    #[test]
    fn two_qubit_two_step_layout() {
        let (theta, phi, alpha) = (0.4, 0.7, -0.2);
        let spec = TrotterCircuitSpec::uniform(
            2,
            2,
            GateFamily::Xy,
            theta,
            ZLayerSpec::explicit(vec![phi, alpha]),
        );
        let gates = spec.build_circuit(0).unwrap();
        assert_eq!(
            gates,
            vec![
                GateOp::X { site: 1 },
                GateOp::Xy { site: 1, angle: theta },
                GateOp::Rz { site: 1, angle: phi },
                GateOp::Rz { site: 2, angle: alpha },
                GateOp::Xy { site: 1, angle: theta },
            ]
        );
    }

    #[test]
    fn single_step_has_no_z_layer() {
        let spec =
            TrotterCircuitSpec::uniform(4, 1, GateFamily::Xy, 0.3, ZLayerSpec::disordered(1.0, 0.5));
        let gates = spec.build_circuit(3).unwrap();
        assert!(gates.iter().all(|g| g.kind() != GateKind::Rz));
        assert_eq!(gates.len(), 1 + 3);
    }

    #[test]
    fn gate_count_three_qubits_two_steps() {
        let spec = TrotterCircuitSpec::uniform(
            3,
            2,
            GateFamily::Xy,
            0.5,
            ZLayerSpec::explicit(vec![0.1, 0.2, 0.1]),
        );
        assert_eq!(spec.build_circuit(0).unwrap().len(), 8);
    }

    #[test]
    fn bonds_ascend_and_rz_layers_repeat() {
        let spec = TrotterCircuitSpec::uniform(
            6,
            4,
            GateFamily::Crx,
            0.9,
            ZLayerSpec::disordered(0.4, 0.8),
        );
        let layers = spec.layers(17).unwrap();
        for (i, step) in layers.steps.iter().enumerate() {
            let bonds: Vec<usize> = step
                .iter()
                .filter(|g| g.kind() == GateKind::Crx)
                .map(|g| g.sites()[0])
                .collect();
            assert_eq!(bonds, vec![1, 2, 3, 4, 5]);
            let rz: Vec<f64> = step.iter().filter_map(|g| match g {
                GateOp::Rz { angle, .. } => Some(*angle),
                _ => None,
            }).collect();
            if i + 1 < layers.steps.len() {
                assert_eq!(rz, layers.z_angles);
            } else {
                assert!(rz.is_empty());
            }
        }
    }

    #[test]
    fn chain_mapping() {
        let tau = 0.25;
        let spec = TrotterCircuitSpec::uniform(
            3,
            5,
            GateFamily::Xy,
            0.1 * tau,
            ZLayerSpec::explicit(vec![0.3 * tau, -0.2 * tau, 0.3 * tau]),
        );
        let chain = chain_from_circuit(&spec, tau, 0).unwrap();
        for j in &chain.couplings {
            assert!((j - 0.1).abs() < 1e-15);
        }
        assert!((chain.potentials[1] + 0.2).abs() < 1e-15);

        let crx = TrotterCircuitSpec {
            gate_family: GateFamily::Crx,
            ..spec
        };
        assert!(matches!(
            chain_from_circuit(&crx, tau, 0),
            Err(Error::UnsupportedMapping(_))
        ));
    }

    #[test]
    fn two_site_chain_matches_two_level_hamiltonian() {
        let (j, v1, v2, tau) = (0.1, -0.4, 0.25, 1.5);
        let spec = TrotterCircuitSpec::uniform(
            2,
            2,
            GateFamily::Xy,
            j * tau,
            ZLayerSpec::explicit(vec![v1 * tau, v2 * tau]),
        );
        let chain = chain_from_circuit(&spec, tau, 0).unwrap();
        assert!((chain.couplings[0] - j).abs() < 1e-15);
        assert!((chain.potentials[0] - v1).abs() < 1e-15);
        assert!((chain.potentials[1] - v2).abs() < 1e-15);
    }

    #[test]
    fn resonance_layouts() {
        let (h, s) = resonance_layout(5, 0.1, 20.0, 3.0, 10.0).unwrap();
        assert_eq!(h, vec![0.1, 20.0, 20.0, 0.1]);
        assert_eq!(s, vec![3.0, 10.0, 0.0, -10.0, 3.0]);
        let (h, s) = resonance_layout(2, 0.1, 99.0, 1.0, 2.0).unwrap();
        assert_eq!((h, s), (vec![0.1], vec![1.0, 2.0]));
        assert!(resonance_layout(6, 1.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec =
            TrotterCircuitSpec::uniform(3, 2, GateFamily::Xy, 0.1, ZLayerSpec::disordered(0.0, 0.0));
        spec.bond_angles.pop();
        assert!(spec.build_circuit(0).is_err());
        let mut spec =
            TrotterCircuitSpec::uniform(3, 0, GateFamily::Xy, 0.1, ZLayerSpec::disordered(0.0, 0.0));
        assert!(spec.validate().is_err());
        spec.n_steps = 1;
        spec.initial_excitation_site = 4;
        assert!(spec.validate().is_err());
        assert!(GateOp::Xy { site: 3, angle: 0.0 }.validate(3).is_err());
        assert!(GateOp::X { site: 0 }.validate(3).is_err());
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn build_is_deterministic(n in 2usize..9, steps in 1usize..6, r in 0.0f64..2.0, seed: u64) {
            let spec = TrotterCircuitSpec::uniform(n, steps, GateFamily::Xy, 0.7, ZLayerSpec::disordered(0.5, r));
            prop_assert_eq!(spec.build_circuit(seed).unwrap(), spec.build_circuit(seed).unwrap());
        }

        #[test]
        fn chain_round_trip(
            couplings in proptest::collection::vec(-5.0f64..5.0, 1..8),
            tau in 0.01f64..2.0,
            pot_seed in proptest::collection::vec(-5.0f64..5.0, 9),
        ) {
            let potentials = pot_seed[..couplings.len() + 1].to_vec();
            let chain = ChainSpec::new(couplings, potentials).unwrap();
            let back = chain_from_circuit(&circuit_from_chain(&chain, tau, 3).unwrap(), tau, 0).unwrap();
            for (a, b) in chain.couplings.iter().zip(&back.couplings).chain(chain.potentials.iter().zip(&back.potentials)) {
                prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
            }
        }
    }
}
