//! Cofactor matrices through a single SVD.
//!
//! With `M = U Σ Vᵀ`, `cof(M) = det(U)·det(V) · U · diag(π) · Vᵀ` where
//! `π_i = ∏_{j≠i} σ_j`. Every cofactor comes out of one decomposition, and in
//! the nullity-one case all but the last `π_i` carry the vanishing singular
//! value, which makes the rank-one structure `cof ∝ l rᵀ` explicit.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrixlab::kernel::{kernel_data_with, serialize_basis, RankRule};

#[derive(Clone, Debug, Serialize)]
pub struct CofactorData {
    #[serde(skip)]
    pub cofactors: DMatrix<f64>,
    pub determinant: f64,
    pub nullity: usize,
    /// Left and right kernel vectors `l`, `r` when the nullity is one.
    #[serde(serialize_with = "serialize_basis")]
    pub rank1_left: Vec<DVector<f64>>,
    #[serde(serialize_with = "serialize_basis")]
    pub rank1_right: Vec<DVector<f64>>,
    /// `α` in `cof ≈ α · l rᵀ`.
    pub scale: Option<f64>,
    /// `‖cof − α l rᵀ‖_F / ‖cof‖_F`.
    pub residual: Option<f64>,
    /// Entries below this count as zero: `tol · σ_max^(N−2)`.
    pub zero_threshold: f64,
    /// Largest cofactor magnitude.
    pub max_abs: f64,
    /// `‖cof‖_F`; equals `|α|` in the nullity-one case.
    pub frobenius: f64,
}

impl CofactorData {
    /// True when every cofactor is zero within `zero_threshold`.
    pub fn vanishes(&self) -> bool {
        self.max_abs <= self.zero_threshold
    }
}

pub fn cofactor_matrix(m: &DMatrix<f64>) -> Result<CofactorData> {
    cofactor_matrix_with(m, RankRule::Standard)
}

pub fn cofactor_matrix_with(m: &DMatrix<f64>, rule: RankRule) -> Result<CofactorData> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let kernel = kernel_data_with(m, rule)?;
    let n = rows;
    if n == 0 {
        return Ok(CofactorData {
            cofactors: DMatrix::zeros(0, 0),
            determinant: 1.0,
            nullity: 0,
            rank1_left: vec![],
            rank1_right: vec![],
            scale: None,
            residual: None,
            zero_threshold: 0.0,
            max_abs: 0.0,
            frobenius: 0.0,
        });
    }

    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let sigma = &svd.singular_values;
    let orientation =
        u.clone().lu().determinant().signum() * v_t.clone().lu().determinant().signum();

    let mut prefix = vec![1.0; n + 1];
    let mut suffix = vec![1.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] * sigma[i];
        suffix[n - 1 - i] = suffix[n - i] * sigma[n - 1 - i];
    }
    let others = DVector::from_fn(n, |i, _| prefix[i] * suffix[i + 1]);

    let mut scaled_u = u;
    for (j, mut col) in scaled_u.column_iter_mut().enumerate() {
        col *= orientation * others[j];
    }
    let cofactors = scaled_u * v_t;

    let sigma_max = kernel.sigma_max();
    let zero_threshold = kernel.tol * sigma_max.powi(n as i32 - 2);
    let max_abs = cofactors.amax();
    let nullity = kernel.right_nullity();

    let (rank1_left, rank1_right, scale, residual) = if nullity == 1 {
        let l = kernel.stress_basis[0].clone();
        let r = kernel.flex_basis[0].clone();
        let alpha = (l.transpose() * &cofactors * &r)[(0, 0)];
        let outer = &l * r.transpose() * alpha;
        let norm = cofactors.norm();
        let residual = if norm > 0.0 {
            (&cofactors - outer).norm() / norm
        } else {
            0.0
        };
        (vec![l], vec![r], Some(alpha), Some(residual))
    } else {
        (vec![], vec![], None, None)
    };

    let frobenius = cofactors.norm();
    Ok(CofactorData {
        cofactors,
        frobenius,
        determinant: m.clone().lu().determinant(),
        nullity,
        rank1_left,
        rank1_right,
        scale,
        residual,
        zero_threshold,
        max_abs,
    })
}
