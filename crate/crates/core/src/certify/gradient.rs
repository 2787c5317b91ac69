//! Gradient of `det R(p)` with respect to the unpinned coordinates.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::cofactor::{cofactor_matrix_with, CofactorData};
use crate::error::{Error, Result};
use crate::framework::Framework;
use crate::matrixlab::kernel::RankRule;
use crate::matrixlab::pinning::{pinned_rigidity_matrix, PinSet};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum GradientMethod {
    Analytic,
    FiniteDifference { step: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct DetGradient {
    #[serde(serialize_with = "serialize_vector")]
    pub values: DVector<f64>,
    pub method: GradientMethod,
    /// Set when the pinned matrix has nullity ≥ 2: every cofactor vanishes and
    /// so does the gradient.
    pub degenerate: bool,
    pub determinant: f64,
}

pub(crate) fn serialize_vector<S: serde::Serializer>(
    v: &DVector<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_slice().serialize(s)
}

fn square_pinned(f: &Framework, pin: &PinSet) -> Result<DMatrix<f64>> {
    let r = pinned_rigidity_matrix(f, pin)?;
    if !r.is_square() {
        return Err(Error::NotSquare {
            rows: r.entries.nrows(),
            cols: r.entries.ncols(),
        });
    }
    Ok(r.entries)
}

pub fn det_gradient_analytic(f: &Framework, pin: &PinSet) -> Result<DetGradient> {
    det_gradient_analytic_with(f, pin, RankRule::Standard)
}

/// Chain rule through the cofactors: entry `(e, (i,k))` of `R` is
/// `(p_i − p_j)_k`, so `∂det/∂(p_i)_k` collects `+cof[e,(i,k)]` over the edges
/// at `i` and `−cof[e,(j,k)]` over the neighbors `j` whose `k`-th coordinate is
/// free.
pub fn det_gradient_analytic_with(
    f: &Framework,
    pin: &PinSet,
    rule: RankRule,
) -> Result<DetGradient> {
    Ok(gradient_and_cofactors(f, pin, rule)?.0)
}

pub(crate) fn gradient_and_cofactors(
    f: &Framework,
    pin: &PinSet,
    rule: RankRule,
) -> Result<(DetGradient, CofactorData)> {
    let r = square_pinned(f, pin)?;
    let cof = cofactor_matrix_with(&r, rule)?;
    let d = f.dimension();
    let pos = pin.free_position();
    let mut g = DVector::zeros(pin.free_count());
    for (row, e) in f.graph.edges().iter().enumerate() {
        for k in 0..d {
            let ca = pos[e.a * d + k];
            let cb = pos[e.b * d + k];
            let at = |c: Option<usize>| c.map_or(0.0, |c| cof.cofactors[(row, c)]);
            if let Some(a) = ca {
                g[a] += at(ca) - at(cb);
            }
            if let Some(b) = cb {
                g[b] += at(cb) - at(ca);
            }
        }
    }
    let gradient = DetGradient {
        values: g,
        method: GradientMethod::Analytic,
        degenerate: cof.nullity >= 2,
        determinant: cof.determinant,
    };
    Ok((gradient, cof))
}

/// Central differences `[det R(p + h e) − det R(p − h e)] / 2h` per free
/// coordinate, `h` absolute.
pub fn det_gradient_fd(f: &Framework, pin: &PinSet, h: f64) -> Result<DetGradient> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Inapplicable(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let base = square_pinned(f, pin)?;
    let det_at = |coords: Vec<f64>| -> Result<f64> {
        let moved = f.with_config(crate::framework::Configuration::from_flat(
            f.dimension(),
            coords,
        ));
        Ok(square_pinned(&moved, pin)?.lu().determinant())
    };
    let free = pin.free_columns();
    let mut g = DVector::zeros(free.len());
    for (pos, &c) in free.iter().enumerate() {
        let mut plus = f.config.coords().to_vec();
        let mut minus = plus.clone();
        plus[c] += h;
        minus[c] -= h;
        g[pos] = (det_at(plus)? - det_at(minus)?) / (2.0 * h);
    }
    Ok(DetGradient {
        values: g,
        method: GradientMethod::FiniteDifference { step: h },
        degenerate: false,
        determinant: base.lu().determinant(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{Configuration, Edge, Graph};
    use crate::matrixlab::pinning::select_pin_set;

    fn triangle(p: &[[f64; 2]; 3]) -> Framework {
        let g = Graph::new(3, vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)]);
        let pts: Vec<Vec<f64>> = p.iter().map(|x| x.to_vec()).collect();
        Framework::new(g, Configuration::from_points(2, &pts).unwrap())
    }

    #[test]
    fn triangle_gradient_matches_finite_differences() {
        let f = triangle(&[[0.0, 0.0], [1.0, 0.2], [0.3, 1.1]]);
        let pin = select_pin_set(&f).unwrap();
        let a = det_gradient_analytic(&f, &pin).unwrap();
        let n = det_gradient_fd(&f, &pin, 1e-6 * f.config.scale()).unwrap();
        let rel = (&a.values - &n.values).norm() / a.values.norm();
        assert!(rel < 1e-6, "relative error {rel}");
        assert!(!a.degenerate);
        assert!((a.determinant - n.determinant).abs() < 1e-14);
    }

    #[test]
    fn non_square_rejected() {
        let g = Graph::new(3, vec![Edge::new(0, 1), Edge::new(1, 2)]);
        let c = Configuration::from_points(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])
            .unwrap();
        let f = Framework::new(g, c);
        let pin = select_pin_set(&f).unwrap();
        assert!(matches!(
            det_gradient_analytic(&f, &pin),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        assert!(det_gradient_fd(&f, &pin, 1e-3).is_err());
    }

    #[test]
    fn bad_step_rejected() {
        let f = triangle(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let pin = select_pin_set(&f).unwrap();
        assert!(det_gradient_fd(&f, &pin, 0.0).is_err());
        assert!(det_gradient_fd(&f, &pin, f64::NAN).is_err());
    }
}
