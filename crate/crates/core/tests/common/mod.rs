//! Exact rational linear algebra, independent of the floating-point path.
#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::DVector;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rigcert::corpus::CorpusEntry;

pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Q>>,
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().expect("finite rational")
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                t.data[j][i] = x.clone();
            }
        }
        t
    }

    pub fn select_columns(&self, keep: &[usize]) -> Self {
        QMatrix {
            rows: self.rows,
            cols: keep.len(),
            data: self
                .data
                .iter()
                .map(|r| keep.iter().map(|&c| r[c].clone()).collect())
                .collect(),
        }
    }

    pub fn select_rows(&self, keep: &[usize]) -> Self {
        QMatrix {
            rows: keep.len(),
            cols: self.cols,
            data: keep.iter().map(|&r| self.data[r].clone()).collect(),
        }
    }

    pub fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != skip_row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != skip_col).collect();
        self.select_rows(&rows).select_columns(&cols)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        self.data
            .iter()
            .map(|r| r.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(&self.data[i][j]))
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.data[r][col].is_zero()) else {
            continue;
        };
        a.data.swap(row, p);
        let inv = Q::one() / a.data[row][col].clone();
        for x in a.data[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..a.rows {
            if r != row && !a.data[r][col].is_zero() {
                let factor = a.data[r][col].clone();
                for c in 0..a.cols {
                    let delta = &factor * &a.data[row][c];
                    a.data[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : m x = 0}`, one vector per free column.
pub fn right_kernel(m: &QMatrix) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); m.cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.data[i][f].clone();
            }
            v
        })
        .collect()
}

pub fn left_kernel(m: &QMatrix) -> Vec<Vec<Q>> {
    right_kernel(&m.transpose())
}

pub fn det(m: &QMatrix) -> Q {
    assert_eq!(m.rows, m.cols);
    let mut a = m.clone();
    let mut sign = Q::one();
    let mut out = Q::one();
    for col in 0..a.cols {
        let Some(p) = (col..a.rows).find(|&r| !a.data[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.data.swap(p, col);
            sign = -sign;
        }
        let pivot = a.data[col][col].clone();
        out *= &pivot;
        for r in col + 1..a.rows {
            if !a.data[r][col].is_zero() {
                let factor = &a.data[r][col] / &pivot;
                for c in col..a.cols {
                    let delta = &factor * &a.data[col][c];
                    a.data[r][c] -= delta;
                }
            }
        }
    }
    out * sign
}

/// Signed minor `(−1)^{i+j} det(M without row i, column j)`.
pub fn cofactor(m: &QMatrix, i: usize, j: usize) -> Q {
    let d = det(&m.minor(i, j));
    if (i + j).is_multiple_of(2) {
        d
    } else {
        -d
    }
}

/// Rigidity matrix of a corpus entry over the rationals.
pub fn exact_rigidity(e: &CorpusEntry) -> QMatrix {
    let d = e.dimension;
    let pts: Vec<Vec<Q>> = e
        .points
        .iter()
        .map(|p| p.iter().map(|x| q(*x.numer(), *x.denom())).collect())
        .collect();
    let mut m = QMatrix::zeros(e.edges.len(), pts.len() * d);
    for (row, edge) in e.edges.iter().enumerate() {
        for k in 0..d {
            let diff = &pts[edge.a][k] - &pts[edge.b][k];
            m.data[row][edge.a * d + k] = diff.clone();
            m.data[row][edge.b * d + k] = -diff;
        }
    }
    m
}

/// Trivial infinitesimal motions (translations, then rotations in each
/// coordinate plane) as columns of an `nd × D` matrix.
pub fn exact_trivial_motions(e: &CorpusEntry) -> QMatrix {
    let d = e.dimension;
    let n = e.points.len();
    let mut cols: Vec<Vec<Q>> = Vec::new();
    for k in 0..d {
        let mut v = vec![Q::zero(); n * d];
        for i in 0..n {
            v[i * d + k] = Q::one();
        }
        cols.push(v);
    }
    for k in 0..d {
        for l in k + 1..d {
            let mut v = vec![Q::zero(); n * d];
            for (i, p) in e.points.iter().enumerate() {
                v[i * d + k] = q(*p[l].numer(), *p[l].denom());
                v[i * d + l] = -q(*p[k].numer(), *p[k].denom());
            }
            cols.push(v);
        }
    }
    let mut t = QMatrix::zeros(n * d, cols.len());
    for (c, v) in cols.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            t.data[r][c] = x.clone();
        }
    }
    t
}

pub fn free_columns(total: usize, pinned: &[usize]) -> Vec<usize> {
    (0..total).filter(|c| !pinned.contains(c)).collect()
}

pub fn to_dvector(v: &[Q]) -> DVector<f64> {
    DVector::from_iterator(v.len(), v.iter().map(to_f64))
}

/// Orthonormal f64 basis of the span of exact vectors (Gram–Schmidt).
pub fn orthonormal(basis: &[Vec<Q>]) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v in basis {
        let mut x = to_dvector(v);
        for _ in 0..2 {
            for u in &out {
                let c = u.dot(&x);
                x -= u * c;
            }
        }
        let n = x.norm();
        assert!(n > 1e-12, "exact basis vectors are independent");
        out.push(x / n);
    }
    out
}

/// Largest distance from a unit vector of one span to the other span, both ways.
pub fn subspace_error(a: &[DVector<f64>], b: &[DVector<f64>]) -> f64 {
    assert_eq!(a.len(), b.len(), "subspace dimensions differ");
    let residual = |v: &DVector<f64>, basis: &[DVector<f64>]| {
        let mut r = v.clone();
        for u in basis {
            r -= u * u.dot(v);
        }
        r.norm()
    };
    let one = a.iter().map(|v| residual(v, b)).fold(0.0, f64::max);
    let two = b.iter().map(|v| residual(v, a)).fold(0.0, f64::max);
    one.max(two)
}

/// `min(‖u − v‖, ‖u + v‖)` for unit vectors.
pub fn direction_error(u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let (u, v) = (u.normalize(), v.normalize());
    (&u - &v).norm().min((&u + &v).norm())
}

pub fn is_zero_vector(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn max_abs(v: &[Q]) -> Q {
    v.iter()
        .map(|x| x.abs())
        .fold(Q::zero(), |a, b| if b > a { b } else { a })
}
