//! Closed-form transmission probabilities, localization metrics and peak
//! detection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subspace::SubspaceState;

/// Default absolute prominence for [`find_peaks`].
pub const DEFAULT_PROMINENCE: f64 = 0.02;

/// Norm deviation above which a state is rejected by [`ipr`].
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Probability on qubit 2 after the two-step, two-qubit XY circuit:
/// `2 sin²θ cos²θ (1 + cos(α − φ))`.
pub fn p01_closed_form(theta: f64, phi: f64, alpha: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    2.0 * s * s * c * c * (1.0 + (alpha - phi).cos())
}

/// Probability on qubit 3 after the two-step, three-qubit XY circuit with Rz
/// angles `(φ, α, φ)`: `sin⁴θ cos²θ (4 + cos²θ + 4 cosθ cos(α − φ))`.
pub fn p001_closed_form(theta: f64, phi: f64, alpha: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    s.powi(4) * c * c * (4.0 + c * c + 4.0 * c * (alpha - phi).cos())
}

/// `Σ_i |ψ_i|⁴`.
pub fn ipr(state: &SubspaceState) -> Result<f64> {
    ipr_from_probs(&state.probabilities())
}

/// IPR computed from site probabilities `p_i = |ψ_i|²`.
pub fn ipr_from_probs(probs: &[f64]) -> Result<f64> {
    let total: f64 = probs.iter().sum();
    if !((total - 1.0).abs() <= NORM_TOLERANCE) {
        return Err(Error::InvalidState(format!(
            "state norm² is {total}, IPR needs a normalized state"
        )));
    }
    Ok(probs.iter().map(|p| p * p).sum())
}

pub fn ipr_series(trajectory: &[SubspaceState]) -> Result<Vec<f64>> {
    trajectory.iter().map(ipr).collect()
}

/// Mean of an IPR series; NaN for an empty series.
pub fn ipr_ave(series: &[f64]) -> f64 {
    series.iter().sum::<f64>() / series.len() as f64
}

/// First qubit (1-based) counted in the tail window: `floor(2N/3) + 1`.
pub fn tail_start(n: usize) -> usize {
    2 * n / 3 + 1
}

/// Summed occupation of qubits `floor(2N/3)+1 ..= N`.
pub fn tail_prob(probs: &[f64]) -> Result<f64> {
    let n = probs.len();
    if n < 3 {
        return Err(Error::config(format!("tail probability needs N >= 3, got {n}")));
    }
    Ok(probs[tail_start(n) - 1..].iter().sum())
}

/// Sampled curve with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    #[serde(default)]
    pub x_name: String,
    #[serde(default)]
    pub y_name: String,
}

impl Curve {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::config(format!(
                "curve has {} xs and {} ys",
                xs.len(),
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::config("curve abscissae must be strictly increasing"));
        }
        Ok(Self {
            xs,
            ys,
            x_name: String::new(),
            y_name: String::new(),
        })
    }

    pub fn named(mut self, x_name: &str, y_name: &str) -> Self {
        self.x_name = x_name.to_owned();
        self.y_name = y_name.to_owned();
        self
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Abscissa of the largest sample (first one on ties).
    pub fn argmax(&self) -> Option<f64> {
        let mut best: Option<(f64, f64)> = None;
        for (&x, &y) in self.xs.iter().zip(&self.ys) {
            if best.is_none_or(|(_, b)| y > b) {
                best = Some((x, y));
            }
        }
        best.map(|(x, _)| x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
    pub prominence: f64,
}

/// Local maxima with prominence at least `min_prominence`, sorted by position.
///
/// A sample is a candidate when it exceeds its left neighbour and is not
/// below its right neighbour (so a flat top reports its left end). The
/// prominence is the height above the higher of the two lowest points
/// reached before the curve climbs above the candidate on either side (or
/// hits an end). Positions and heights are refined by a parabola through the
/// candidate and its neighbours.
pub fn find_peaks(curve: &Curve, min_prominence: f64) -> Result<Vec<Peak>> {
    let ys = &curve.ys;
    let xs = &curve.xs;
    if ys.is_empty() {
        return Err(Error::config("cannot search an empty curve for peaks"));
    }
    if ys.len() < 3 {
        return Err(Error::config(format!(
            "peak search needs at least 3 samples, got {}",
            ys.len()
        )));
    }
    let mut peaks = Vec::new();
    for i in 1..ys.len() - 1 {
        let y = ys[i];
        if !(y > ys[i - 1] && y >= ys[i + 1]) {
            continue;
        }
        let left_base = ys[..i]
            .iter()
            .rev()
            .take_while(|&&v| v <= y)
            .fold(y, |m, &v| m.min(v));
        let right_base = ys[i + 1..]
            .iter()
            .take_while(|&&v| v <= y)
            .fold(y, |m, &v| m.min(v));
        let prominence = y - left_base.max(right_base);
        if prominence < min_prominence {
            continue;
        }
        let (position, height) = refine(xs[i - 1], xs[i], xs[i + 1], ys[i - 1], y, ys[i + 1]);
        peaks.push(Peak {
            position,
            height,
            prominence,
        });
    }
    Ok(peaks)
}

/// Vertex of the parabola through three points, clamped to the bracket.
fn refine(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> (f64, f64) {
    let d0 = x1 - x0;
    let d2 = x2 - x1;
    let s0 = (y1 - y0) / d0;
    let s2 = (y2 - y1) / d2;
    let curvature = (s2 - s0) / (x2 - x0);
    if !(curvature < 0.0) {
        return (x1, y1);
    }
    // y = y1 + b (x - x1) + c (x - x1)² with c = curvature.
    let b = s0 + curvature * d0;
    let dx = (-b / (2.0 * curvature)).clamp(-d0, d2);
    (x1 + dx, y1 + b * dx + curvature * dx * dx)
}

/// Localization summary of one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    /// `IPR_η` for `η = 1..=N_T`; empty for multi-excitation (CRX) runs.
    pub ipr_series: Vec<f64>,
    /// NaN when `ipr_series` is empty.
    pub ipr_ave: f64,
    /// `P_t(η)` for `η = 1..=N_T`.
    pub tail_series: Vec<f64>,
    /// Occupation profile at `profile_step`.
    pub final_profile: Vec<f64>,
    pub profile_step: usize,
}

impl LocalizationReport {
    /// Builds the report from per-step occupations (`probs[η-1][i]`).
    ///
    /// `single_excitation` selects whether the IPR series is meaningful.
    pub fn from_occupations(
        probs: &[Vec<f64>],
        profile_step: usize,
        single_excitation: bool,
    ) -> Result<Self> {
        if profile_step == 0 || profile_step > probs.len() {
            return Err(Error::config(format!(
                "profile step {profile_step} outside 1..={}",
                probs.len()
            )));
        }
        let ipr_series = if single_excitation {
            probs.iter().map(|p| ipr_from_probs(p)).collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let tail_series = probs.iter().map(|p| tail_prob(p)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ipr_ave: ipr_ave(&ipr_series),
            ipr_series,
            tail_series,
            final_profile: probs[profile_step - 1].clone(),
            profile_step,
        })
    }

    pub fn tail_mean(&self) -> f64 {
        self.tail_series.iter().sum::<f64>() / self.tail_series.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn p01_examples() {
        assert_abs_diff_eq!(p01_closed_form(FRAC_PI_4, 0.3, 0.3), 1.0, epsilon = 1e-15);
        for theta in [0.1, 0.7, 2.0] {
            assert_abs_diff_eq!(p01_closed_form(theta, 0.2, 0.2 + PI), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn p001_examples() {
        let expected = 0.25 * 0.5 * (4.5 + 2.0 * 2f64.sqrt());
        assert_abs_diff_eq!(p001_closed_form(FRAC_PI_4, 0.0, 0.0), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(p001_closed_form(FRAC_PI_2, 0.4, 1.0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn p001_argmax_over_phi() {
        let alpha = -FRAC_PI_2;
        let best = (0..=2000)
            .map(|k| -PI + 2.0 * PI * k as f64 / 2000.0)
            .max_by(|a, b| {
                p001_closed_form(FRAC_PI_4, *a, alpha).total_cmp(&p001_closed_form(FRAC_PI_4, *b, alpha))
            })
            .unwrap();
        assert_abs_diff_eq!(best, alpha, epsilon = 2.0 * PI / 2000.0);
    }

    #[test]
    fn ipr_examples() {
        let basis = SubspaceState::basis(6, 2).unwrap();
        assert_abs_diff_eq!(ipr(&basis).unwrap(), 1.0);
        let n = 7;
        let uniform = SubspaceState::from_amplitudes(vec![C64::new((1.0 / n as f64).sqrt(), 0.0); n]);
        assert_abs_diff_eq!(ipr(&uniform).unwrap(), 1.0 / n as f64, epsilon = 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![C64::new(0.0, 0.0); 5];
        amps[1] = C64::new(h, 0.0);
        amps[4] = C64::new(0.0, -h);
        assert_abs_diff_eq!(ipr(&SubspaceState::from_amplitudes(amps)).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn ipr_rejects_unnormalized() {
        let s = SubspaceState::from_amplitudes(vec![C64::new(0.5, 0.0); 2]);
        assert!(matches!(ipr(&s), Err(Error::InvalidState(_))));
    }

    #[test]
    fn ipr_ave_examples() {
        assert_abs_diff_eq!(ipr_ave(&[0.3; 9]), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(ipr_ave(&[1.0, 0.2]), 0.6, epsilon = 1e-15);
    }

    #[test]
    fn tail_examples() {
        let mut p = vec![0.0; 15];
        p[0] = 1.0;
        assert_eq!(tail_prob(&p).unwrap(), 0.0);
        assert_eq!(tail_start(15), 11);
        assert_abs_diff_eq!(tail_prob(&[1.0 / 15.0; 15]).unwrap(), 5.0 / 15.0, epsilon = 1e-15);
        let mut p = vec![0.0; 15];
        p[14] = 1.0;
        assert_eq!(tail_prob(&p).unwrap(), 1.0);
        assert!(tail_prob(&[0.5, 0.5]).is_err());
    }

    #[test]
    fn triangular_bump() {
        let xs: Vec<f64> = (0..11).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (1.0 - (x - 4.0).abs() / 4.0).max(0.0)).collect();
        let peaks = find_peaks(&Curve::new(xs, ys).unwrap(), DEFAULT_PROMINENCE).unwrap();
        assert_eq!(peaks.len(), 1);
        assert_abs_diff_eq!(peaks[0].position, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(peaks[0].height, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn parabola_refinement_is_exact() {
        let xs: Vec<f64> = (0..20).map(|k| k as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 3.0 * (x - 0.937).powi(2)).collect();
        let peaks = find_peaks(&Curve::new(xs, ys).unwrap(), 0.0).unwrap();
        assert_abs_diff_eq!(peaks[0].position, 0.937, epsilon = 1e-12);
        assert_abs_diff_eq!(peaks[0].height, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn prominence_filters_ripples() {
        let xs: Vec<f64> = (0..400).map(|k| k as f64 * 0.05).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| (-(x - 10.0).powi(2)).exp() + 0.005 * (7.0 * x).sin())
            .collect();
        let curve = Curve::new(xs, ys).unwrap();
        assert!(find_peaks(&curve, 0.0).unwrap().len() > 3);
        let peaks = find_peaks(&curve, DEFAULT_PROMINENCE).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].position - 10.0).abs() < 0.05);
    }

    #[test]
    fn curve_validation() {
        assert!(Curve::new(vec![0.0, 0.0, 1.0], vec![0.0; 3]).is_err());
        assert!(Curve::new(vec![0.0, 1.0], vec![0.0]).is_err());
        let empty = Curve { xs: vec![], ys: vec![], x_name: String::new(), y_name: String::new() };
        assert!(find_peaks(&empty, 0.0).is_err());
        let two = Curve::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(find_peaks(&two, 0.0).is_err());
    }

    #[test]
    fn report_from_occupations() {
        let probs = vec![vec![1.0, 0.0, 0.0], vec![0.5, 0.5, 0.0], vec![0.0, 0.0, 1.0]];
        let r = LocalizationReport::from_occupations(&probs, 2, true).unwrap();
        assert_eq!(r.ipr_series, vec![1.0, 0.5, 1.0]);
        assert_abs_diff_eq!(r.ipr_ave, 2.5 / 3.0, epsilon = 1e-15);
        assert_eq!(r.tail_series, vec![0.0, 0.0, 1.0]);
        assert_eq!(r.final_profile, vec![0.5, 0.5, 0.0]);
        let r = LocalizationReport::from_occupations(&probs, 3, false).unwrap();
        assert!(r.ipr_series.is_empty() && r.ipr_ave.is_nan());
        assert!(LocalizationReport::from_occupations(&probs, 4, true).is_err());
    }
}
