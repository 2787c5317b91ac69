//! Prestress stability: some equilibrium stress has nonzero energy on the flex.

use serde::Serialize;

use super::energy::{stress_energy, stress_energy_bilinear};
use super::{Analysis, Settings};
use crate::error::Result;
use crate::framework::{DofClass, Framework};
use crate::matrixlab::pinning::zero_pad;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrestressStatus {
    /// No flex: the framework is infinitesimally rigid.
    Unnecessary,
    Certified,
    NotCertified,
    /// Two or more flexes.
    OutOfScope,
    /// Hypostatic graph.
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct StressCandidate {
    pub stress: Vec<f64>,
    /// Sum form `Σ ω_ij ‖p'_i − p'_j‖²`.
    pub energy: f64,
    /// Bilinear form `ωᵀ R(p') p'`.
    pub energy_bilinear: f64,
    /// `margin · ‖ω‖ · ‖p'‖²`.
    pub threshold: f64,
    pub certifies: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrestressFragment {
    pub status: PrestressStatus,
    /// Zero-padded flex over all `nd` coordinates.
    pub flex: Option<Vec<f64>>,
    pub candidates: Vec<StressCandidate>,
    pub note: String,
}

impl PrestressFragment {
    pub fn certified(&self) -> bool {
        self.status == PrestressStatus::Certified
    }

    fn bare(status: PrestressStatus, note: impl Into<String>) -> Self {
        PrestressFragment {
            status,
            flex: None,
            candidates: Vec::new(),
            note: note.into(),
        }
    }
}

pub fn prestress_test(f: &Framework, settings: Settings) -> Result<PrestressFragment> {
    prestress_for(&Analysis::new(f, settings)?)
}

pub(crate) fn prestress_for(a: &Analysis) -> Result<PrestressFragment> {
    if let DofClass::Hypostatic(k) = a.dof.class {
        return Ok(PrestressFragment::bare(
            PrestressStatus::NotApplicable,
            format!("hypostatic({k}): the graph is generically flexible"),
        ));
    }
    match a.flex_count() {
        0 => {
            return Ok(PrestressFragment::bare(
                PrestressStatus::Unnecessary,
                "infinitesimally rigid; test unnecessary",
            ))
        }
        1 => {}
        k => {
            return Ok(PrestressFragment::bare(
                PrestressStatus::OutOfScope,
                format!("{k} independent flexes; the single-flex prestress test does not apply"),
            ))
        }
    }

    let f = a.framework;
    let flex = &a.kernel.flex_basis[0];
    let full = zero_pad(flex, &a.pin)?;
    let flex_sq = flex.norm_squared();
    let mut candidates = Vec::with_capacity(a.stress_count());
    // Energy is linear in ω for a fixed flex, so a basis decides existence.
    for stress in &a.kernel.stress_basis {
        let energy = stress_energy(&f.graph, stress, &full)?;
        let energy_bilinear = stress_energy_bilinear(f, &a.pin, stress, flex)?;
        let threshold = a.settings.margin * stress.norm() * flex_sq;
        candidates.push(StressCandidate {
            stress: stress.as_slice().to_vec(),
            energy,
            energy_bilinear,
            threshold,
            certifies: energy.abs() > threshold,
        });
    }
    let hits = candidates.iter().filter(|c| c.certifies).count();
    let (status, note) = if hits > 0 {
        (
            PrestressStatus::Certified,
            format!(
                "{hits} of {} basis stresses have nonzero energy on the flex",
                candidates.len()
            ),
        )
    } else if candidates.is_empty() {
        (
            PrestressStatus::NotCertified,
            "one flex but no equilibrium stress".to_string(),
        )
    } else {
        (
            PrestressStatus::NotCertified,
            "every basis stress has zero energy on the flex within the margin".to_string(),
        )
    };
    Ok(PrestressFragment {
        status,
        flex: Some(full.values.as_slice().to_vec()),
        candidates,
        note,
    })
}
