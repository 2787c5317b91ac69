use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::framework::{trivial_dimension, Configuration, Dof, Edge, Framework, Graph};

/// The `m × nd` rigidity matrix `R̂(p)`.
#[derive(Clone, Debug)]
pub struct RigidityMatrix {
    pub entries: DMatrix<f64>,
    /// Edge of each row.
    pub rows: Vec<Edge>,
    pub d: usize,
}

impl RigidityMatrix {
    pub fn column_dof(&self, col: usize) -> Dof {
        Dof::from_index(col, self.d)
    }
}

pub fn build_rigidity_matrix(f: &Framework) -> Result<RigidityMatrix> {
    f.ensure_valid()?;
    Ok(RigidityMatrix {
        entries: assemble(&f.graph, f.dimension(), f.config.coords()),
        rows: f.graph.edges().to_vec(),
        d: f.dimension(),
    })
}

/// Row `{i,j}` gets `(x_i − x_j)_k` at column `(i,k)` and the negation at
/// `(j,k)`. `coords` can be any vector of length `nd`, not just a placement.
pub(crate) fn assemble(g: &Graph, d: usize, coords: &[f64]) -> DMatrix<f64> {
    let nd = g.vertex_count() * d;
    debug_assert_eq!(coords.len(), nd);
    let mut r = DMatrix::zeros(g.edge_count(), nd);
    for (row, e) in g.edges().iter().enumerate() {
        for k in 0..d {
            let diff = coords[e.a * d + k] - coords[e.b * d + k];
            r[(row, e.a * d + k)] = diff;
            r[(row, e.b * d + k)] = -diff;
        }
    }
    r
}

/// `nd × D` basis of infinitesimal isometries: `d` translations followed by
/// one rotation per coordinate pair `k < l`.
pub fn trivial_motion_basis(c: &Configuration) -> DMatrix<f64> {
    let d = c.dimension();
    let n = c.point_count();
    let mut t = DMatrix::zeros(n * d, trivial_dimension(d));
    for i in 0..n {
        for k in 0..d {
            t[(i * d + k, k)] = 1.0;
        }
    }
    let mut col = d;
    for k in 0..d {
        for l in (k + 1)..d {
            for i in 0..n {
                let p = c.point(i);
                t[(i * d + k, col)] = p[l];
                t[(i * d + l, col)] = -p[k];
            }
            col += 1;
        }
    }
    t
}

pub(crate) fn check_len(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::SizeMismatch {
            context,
            expected,
            got,
        })
    }
}
