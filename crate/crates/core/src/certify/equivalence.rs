//! Proportionality of `d[det R(p)]` and `ωᵀ R(p')`.

use nalgebra::DVector;
use serde::Serialize;

use super::energy::{stress_energy, stress_image};
use super::gradient::{det_gradient_analytic_with, serialize_vector};
use super::{Analysis, Settings};
use crate::error::{Error, Result};
use crate::framework::{DofClass, Framework};
use crate::matrixlab::pinning::{zero_pad, PinSet};

/// Relative size below which both compared vectors count as zero.
const ZERO_VECTOR: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct Equivalence {
    /// Least-squares scale with `gradient ≈ alpha · stress_image`.
    pub alpha: f64,
    /// `‖gradient − alpha · stress_image‖ / ‖gradient‖`.
    pub residual: f64,
    /// Both vectors vanish; proportional only vacuously.
    pub degenerate: bool,
    #[serde(serialize_with = "serialize_vector")]
    pub gradient: DVector<f64>,
    #[serde(serialize_with = "serialize_vector")]
    pub stress_image: DVector<f64>,
    #[serde(serialize_with = "serialize_vector")]
    pub stress: DVector<f64>,
    #[serde(serialize_with = "serialize_vector")]
    pub flex: DVector<f64>,
    /// `d[det R] · p'`.
    pub transverse_value: f64,
    /// `Σ ω_ij ‖p'_i − p'_j‖²`.
    pub stress_energy: f64,
}

impl Equivalence {
    pub fn passes(&self, threshold: f64) -> bool {
        self.residual <= threshold
    }

    /// `|transverse_value − alpha · stress_energy| / |transverse_value|`.
    pub fn corollary_error(&self) -> f64 {
        let diff = (self.transverse_value - self.alpha * self.stress_energy).abs();
        if self.transverse_value == 0.0 {
            diff
        } else {
            diff / self.transverse_value.abs()
        }
    }
}

/// Checks that the pinned matrix is square with exactly one flex.
pub(crate) fn require_single_flex(a: &Analysis) -> Result<()> {
    match a.dof.class {
        DofClass::Isostatic => {}
        other => {
            return Err(Error::Inapplicable(format!(
                "{other}: the pinned rigidity matrix is {}x{}, not square",
                a.pinned.entries.nrows(),
                a.pinned.entries.ncols()
            )))
        }
    }
    match a.flex_count() {
        1 => Ok(()),
        0 => Err(Error::Inapplicable(
            "nonsingular: no stress/flex to compare (infinitesimally rigid)".into(),
        )),
        k => Err(Error::Inapplicable(format!(
            "nullity {k}: gradient identically zero"
        ))),
    }
}

pub fn transverse_value(f: &Framework, pin: &PinSet, flex: &DVector<f64>) -> Result<f64> {
    let a = Analysis::with_pins(f, pin.clone(), Settings::default())?;
    require_single_flex(&a)?;
    let g = det_gradient_analytic_with(f, pin, a.settings.rank_rule)?;
    if g.values.len() != flex.len() {
        return Err(Error::SizeMismatch {
            context: "flex length",
            expected: g.values.len(),
            got: flex.len(),
        });
    }
    Ok(g.values.dot(flex))
}

pub fn equivalence_report(f: &Framework, pin: &PinSet) -> Result<Equivalence> {
    equivalence_report_with(f, pin, Settings::default())
}

pub fn equivalence_report_with(
    f: &Framework,
    pin: &PinSet,
    settings: Settings,
) -> Result<Equivalence> {
    let a = Analysis::with_pins(f, pin.clone(), settings)?;
    equivalence_for(&a)
}

pub(crate) fn equivalence_for(a: &Analysis) -> Result<Equivalence> {
    require_single_flex(a)?;
    let f = a.framework;
    let stress = a.kernel.stress_basis[0].clone();
    let flex = a.kernel.flex_basis[0].clone();
    let gradient = det_gradient_analytic_with(f, &a.pin, a.settings.rank_rule)?.values;
    let image = stress_image(f, &a.pin, &stress, &flex)?;

    let (gn, sn) = (gradient.norm(), image.norm());
    let gradient_scale = a.kernel.sigma_max().powi(a.kernel.cols as i32 - 1);
    let degenerate =
        gn <= ZERO_VECTOR * gradient_scale && sn <= ZERO_VECTOR * stress.norm() * flex.norm();
    let (alpha, residual) = if degenerate {
        (0.0, 0.0)
    } else if sn == 0.0 || gn == 0.0 {
        (0.0, 1.0)
    } else {
        let alpha = gradient.dot(&image) / image.dot(&image);
        (alpha, (&gradient - &image * alpha).norm() / gn)
    };

    let full = zero_pad(&flex, &a.pin)?;
    Ok(Equivalence {
        alpha,
        residual,
        degenerate,
        transverse_value: gradient.dot(&flex),
        stress_energy: stress_energy(&f.graph, &stress, &full)?,
        gradient,
        stress_image: image,
        stress,
        flex,
    })
}
