//! Stress energy `Σ ω_ij ‖v_i − v_j‖²` in its sum form and its bilinear form
//! `ωᵀ R(v) p'`.

use nalgebra::DVector;

use crate::error::Result;
use crate::framework::{Framework, Graph};
use crate::matrixlab::pinning::{rigidity_matrix_of_flex, zero_pad, FullFlex, PinSet};
use crate::matrixlab::rigidity::check_len;

pub fn stress_energy(g: &Graph, stress: &DVector<f64>, v: &FullFlex) -> Result<f64> {
    check_len("stress length", g.edge_count(), stress.len())?;
    let d = v.pin.dimension();
    check_len("flex length", g.vertex_count() * d, v.values.len())?;
    let x = &v.values;
    Ok(g.edges()
        .iter()
        .zip(stress.iter())
        .map(|(e, w)| {
            let sq: f64 = (0..d)
                .map(|k| (x[e.a * d + k] - x[e.b * d + k]).powi(2))
                .sum();
            w * sq
        })
        .sum())
}

/// `ωᵀ R(p̂')` restricted to the unpinned columns.
pub fn stress_image(
    f: &Framework,
    pin: &PinSet,
    stress: &DVector<f64>,
    flex: &DVector<f64>,
) -> Result<DVector<f64>> {
    check_len("stress length", f.graph.edge_count(), stress.len())?;
    let full = zero_pad(flex, pin)?;
    let r = rigidity_matrix_of_flex(f, &full, pin)?;
    Ok(r.entries.tr_mul(stress))
}

pub fn stress_energy_bilinear(
    f: &Framework,
    pin: &PinSet,
    stress: &DVector<f64>,
    flex: &DVector<f64>,
) -> Result<f64> {
    Ok(stress_image(f, pin, stress, flex)?.dot(flex))
}
