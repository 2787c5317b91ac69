//! Transverse rigidity: `d[det R(p)] · p' ≠ 0`.
//!
//! Square (isostatic) frameworks are tested directly. Hyperstatic frameworks
//! with one flex are tested on every square matrix obtained by dropping as
//! many rows as there are surplus edges.

use nalgebra::DVector;
use serde::Serialize;

use super::cofactor::CofactorData;
use super::gradient::gradient_and_cofactors;
use super::{Analysis, Settings};
use crate::error::Result;
use crate::framework::{DofClass, Edge, Framework};
use crate::matrixlab::kernel::kernel_data_with;

/// Upper bound on the number of dropped-row subsets examined.
pub const MAX_DROPPED_SUBSETS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransverseStatus {
    /// No flex: the framework is infinitesimally rigid.
    Unnecessary,
    Certified,
    NotCertified,
    /// Nullity ≥ 2: every cofactor vanishes, so the test always fails.
    Inapplicable,
    /// Hypostatic graph.
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct DroppedRows {
    pub dropped: Vec<Edge>,
    pub nullity: usize,
    /// False when the square matrix has nullity ≠ 1 ("row uninformative").
    pub informative: bool,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub certifies: bool,
    /// Left-kernel vector of the square matrix, zero on the dropped edges.
    pub stress: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransverseFragment {
    pub status: TransverseStatus,
    pub gradient: Option<Vec<f64>>,
    /// Largest cofactor of the square pinned matrix and the zero threshold.
    pub max_cofactor: Option<f64>,
    pub cofactor_zero_threshold: Option<f64>,
    pub value: Option<f64>,
    /// `margin · ‖cof‖_F · ‖p'‖²`.
    pub threshold: Option<f64>,
    pub dropped_rows: Vec<DroppedRows>,
    pub note: String,
}

impl TransverseFragment {
    pub fn certified(&self) -> bool {
        self.status == TransverseStatus::Certified
    }

    fn bare(status: TransverseStatus, note: impl Into<String>) -> Self {
        TransverseFragment {
            status,
            gradient: None,
            max_cofactor: None,
            cofactor_zero_threshold: None,
            value: None,
            threshold: None,
            dropped_rows: Vec::new(),
            note: note.into(),
        }
    }
}

pub fn transverse_test(f: &Framework, settings: Settings) -> Result<TransverseFragment> {
    transverse_for(&Analysis::new(f, settings)?)
}

pub(crate) fn transverse_for(a: &Analysis) -> Result<TransverseFragment> {
    match a.dof.class {
        DofClass::Hypostatic(k) => Ok(TransverseFragment::bare(
            TransverseStatus::NotApplicable,
            format!(
                "hypostatic({k}): always infinitesimally flexible, transverse rigidity has no role"
            ),
        )),
        _ if a.flex_count() == 0 => Ok(TransverseFragment::bare(
            TransverseStatus::Unnecessary,
            "infinitesimally rigid; test unnecessary",
        )),
        DofClass::Isostatic => square_case(a),
        DofClass::Hyperstatic(k) => dropped_row_search(a, k),
    }
}

fn square_case(a: &Analysis) -> Result<TransverseFragment> {
    let f = a.framework;
    let rule = a.settings.rank_rule;
    let (gradient, cof) = gradient_and_cofactors(f, &a.pin, rule)?;
    let mut out = TransverseFragment::bare(TransverseStatus::NotCertified, "");
    out.gradient = Some(gradient.values.as_slice().to_vec());
    out.max_cofactor = Some(cof.max_abs);
    out.cofactor_zero_threshold = Some(cof.zero_threshold);

    let nullity = a.flex_count();
    if nullity >= 2 {
        out.status = TransverseStatus::Inapplicable;
        out.note = format!(
            "nullity {nullity}: the cofactor matrix vanishes, so d[det R] = 0 and the test always fails"
        );
        return Ok(out);
    }

    let flex = &a.kernel.flex_basis[0];
    let (value, threshold) = directional(&gradient.values, &cof, flex, a.settings.margin);
    out.value = Some(value);
    out.threshold = Some(threshold);
    if value.abs() > threshold {
        out.status = TransverseStatus::Certified;
        out.note = "the flex is transverse to the singular locus".into();
    } else {
        out.note = "the determinant gradient is orthogonal to the flex within the margin".into();
    }
    Ok(out)
}

/// `d[det R] · p'` and its certification threshold.
///
/// For nullity one, `d[det R] · p' = α · E(ω, p')` with `|α| = ‖cof‖_F` and
/// unit `ω`, so scaling the energy margin by `‖cof‖_F` gives the matching
/// threshold. It stays meaningful when the gradient itself is rounding noise.
fn directional(
    gradient: &DVector<f64>,
    cof: &CofactorData,
    flex: &DVector<f64>,
    margin: f64,
) -> (f64, f64) {
    (
        gradient.dot(flex),
        margin * cof.frobenius * flex.norm_squared(),
    )
}

fn dropped_row_search(a: &Analysis, surplus: usize) -> Result<TransverseFragment> {
    let f = a.framework;
    let m = f.graph.edge_count();
    let rule = a.settings.rank_rule;
    if a.flex_count() >= 2 {
        return Ok(TransverseFragment::bare(
            TransverseStatus::Inapplicable,
            format!(
                "{} flexes: every square submatrix has nullity ≥ 2, so each determinant gradient vanishes",
                a.flex_count()
            ),
        ));
    }

    let mut outcomes = Vec::new();
    let mut truncated = false;
    for (count, dropped) in Subsets::new(m, surplus).enumerate() {
        if count >= MAX_DROPPED_SUBSETS {
            truncated = true;
            break;
        }
        let square = a.pinned.without_rows(&dropped);
        let kernel = kernel_data_with(&square.entries, rule)?;
        let edges: Vec<Edge> = dropped.iter().map(|&r| f.graph.edges()[r]).collect();
        let nullity = kernel.right_nullity();
        if nullity != 1 {
            outcomes.push(DroppedRows {
                dropped: edges,
                nullity,
                informative: false,
                value: None,
                threshold: None,
                certifies: false,
                stress: None,
            });
            continue;
        }
        let sub = Framework::new(f.graph.without_edges(&dropped), f.config.clone());
        let (gradient, cof) = gradient_and_cofactors(&sub, &a.pin, rule)?;
        let flex = &kernel.flex_basis[0];
        let (value, threshold) = directional(&gradient.values, &cof, flex, a.settings.margin);

        let mut stress = vec![0.0; m];
        let mut kept = (0..m).filter(|r| !dropped.contains(r));
        for w in kernel.stress_basis[0].iter() {
            stress[kept.next().expect("row count matches")] = *w;
        }
        outcomes.push(DroppedRows {
            dropped: edges,
            nullity,
            informative: true,
            value: Some(value),
            threshold: Some(threshold),
            certifies: value.abs() > threshold,
            stress: Some(stress),
        });
    }

    let hits = outcomes.iter().filter(|o| o.certifies).count();
    let informative = outcomes.iter().filter(|o| o.informative).count();
    let mut note = format!(
        "{hits} certifying of {} dropped-row cases ({informative} informative)",
        outcomes.len()
    );
    if truncated {
        note.push_str(&format!(
            "; search stopped after {MAX_DROPPED_SUBSETS} cases"
        ));
    }
    let status = if hits > 0 {
        TransverseStatus::Certified
    } else {
        TransverseStatus::NotCertified
    };
    let mut out = TransverseFragment::bare(status, note);
    out.dropped_rows = outcomes;
    Ok(out)
}

/// k-subsets of `0..n` in lexicographic order.
struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerate_binomially() {
        assert_eq!(
            Subsets::new(4, 1).collect::<Vec<_>>(),
            vec![vec![0], vec![1], vec![2], vec![3]]
        );
        let two: Vec<_> = Subsets::new(4, 2).collect();
        assert_eq!(two.len(), 6);
        assert_eq!(two[0], vec![0, 1]);
        assert_eq!(two[5], vec![2, 3]);
        assert_eq!(Subsets::new(3, 0).count(), 1);
        assert_eq!(Subsets::new(2, 3).count(), 0);
    }
}
