//! SVD-based numerical rank and orthonormal kernel bases.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// How the rank threshold is derived from the singular values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Default)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RankRule {
    /// `tol = max(rows, cols) · ε · σ_max`.
    #[default]
    Standard,
    /// `tol = factor · σ_max`.
    Relative { factor: f64 },
}

impl RankRule {
    pub fn tolerance(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        match *self {
            RankRule::Standard => rows.max(cols) as f64 * f64::EPSILON * sigma_max,
            RankRule::Relative { factor } => factor * sigma_max,
        }
    }
}

/// Singular values within this factor of the tolerance, on either side,
/// mark a rank decision as numerically marginal.
pub const MARGINAL_BAND: f64 = 10.0;

#[derive(Clone, Debug, Serialize)]
pub struct KernelData {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub tol: f64,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Orthonormal basis of the left kernel (length-`rows` vectors).
    #[serde(serialize_with = "serialize_basis")]
    pub stress_basis: Vec<DVector<f64>>,
    /// Orthonormal basis of the right kernel (length-`cols` vectors).
    #[serde(serialize_with = "serialize_basis")]
    pub flex_basis: Vec<DVector<f64>>,
    pub marginal: bool,
}

impl KernelData {
    pub fn left_nullity(&self) -> usize {
        self.stress_basis.len()
    }

    pub fn right_nullity(&self) -> usize {
        self.flex_basis.len()
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

pub(crate) fn serialize_basis<S: serde::Serializer>(
    basis: &[DVector<f64>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(basis.len()))?;
    for v in basis {
        seq.serialize_element(v.as_slice())?;
    }
    seq.end()
}

pub fn kernel_data(m: &DMatrix<f64>) -> Result<KernelData> {
    kernel_data_with(m, RankRule::Standard)
}

pub fn kernel_data_with(m: &DMatrix<f64>, rule: RankRule) -> Result<KernelData> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(KernelData {
            rows,
            cols,
            rank: 0,
            tol: 0.0,
            singular_values: Vec::new(),
            stress_basis: identity_basis(rows),
            flex_basis: identity_basis(cols),
            marginal: false,
        });
    }

    let (sigma, v) = right_factor(m);
    let sigma_max = sigma[0];
    let tol = rule.tolerance(rows, cols, sigma_max);
    let singular_values: Vec<f64> = sigma[..rows.min(cols)].to_vec();
    let rank = singular_values.iter().filter(|&&s| s > tol).count();
    let marginal = sigma_max > 0.0
        && singular_values
            .iter()
            .any(|&s| s >= tol / MARGINAL_BAND && s <= tol * MARGINAL_BAND);

    let flex_basis = trailing_columns(&v, rank);
    let (_, u) = right_factor(&m.transpose());
    let stress_basis = trailing_columns(&u, rank);

    Ok(KernelData {
        rows,
        cols,
        rank,
        tol,
        singular_values,
        stress_basis,
        flex_basis,
        marginal,
    })
}

/// Numerical rank alone.
pub fn numerical_rank(m: &DMatrix<f64>, rule: RankRule) -> usize {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let sigma = sorted_singular_values(m);
    let tol = rule.tolerance(rows, cols, sigma[0]);
    sigma.iter().filter(|&&s| s > tol).count()
}

pub fn sorted_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Full `cols × cols` right singular basis of `m` with singular values in
/// descending order. Short matrices are padded with zero rows first so the
/// thin SVD still yields a complete basis.
fn right_factor(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.rows_mut(0, rows).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = DMatrix::from_fn(cols, order.len(), |r, c| v_t[(order[c], r)]);
    (sigma, v)
}

fn trailing_columns(v: &DMatrix<f64>, rank: usize) -> Vec<DVector<f64>> {
    (rank..v.ncols())
        .map(|c| {
            let mut col = v.column(c).into_owned();
            canonical_sign(&mut col);
            col
        })
        .collect()
}

fn identity_basis(n: usize) -> Vec<DVector<f64>> {
    (0..n)
        .map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
        .collect()
}

/// Flips `v` so that its first non-negligible entry is positive.
pub fn canonical_sign(v: &mut DVector<f64>) {
    let peak = v.amax();
    if peak == 0.0 {
        return;
    }
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-10 * peak) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
}
