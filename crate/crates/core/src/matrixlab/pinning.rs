//! Pinning `D` coordinates to remove the trivial motions.

use nalgebra::{DMatrix, DVector};

use super::kernel::{numerical_rank, RankRule};
use super::rigidity::{
    assemble, build_rigidity_matrix, check_len, trivial_motion_basis, RigidityMatrix,
};
use crate::error::{Error, Result};
use crate::framework::{trivial_dimension, Dof, Edge, Framework};

/// Pivots within this relative distance of the column maximum count as ties.
const PIVOT_TIE: f64 = 1e-12;
/// A pivot below this fraction of its column's original magnitude means the
/// configuration does not span.
const PIVOT_FLOOR: f64 = 1e-9;

/// The `D` pinned coordinate slots, sorted by column index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinSet {
    d: usize,
    nd: usize,
    pinned: Vec<usize>,
}

impl PinSet {
    /// Checks an explicit choice of pinned coordinates against the framework.
    pub fn from_dofs(f: &Framework, dofs: &[Dof]) -> Result<Self> {
        let d = f.dimension();
        let nd = f.coordinate_count();
        let want = trivial_dimension(d);
        if dofs.len() != want {
            return Err(Error::InvalidPinSet(format!(
                "need exactly {want} pinned coordinates in dimension {d}, got {}",
                dofs.len()
            )));
        }
        let mut pinned = Vec::with_capacity(want);
        for dof in dofs {
            if dof.axis >= d || dof.vertex >= f.vertex_count() {
                return Err(Error::InvalidPinSet(format!(
                    "coordinate {dof} does not exist"
                )));
            }
            pinned.push(dof.index(d));
        }
        pinned.sort_unstable();
        if pinned.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPinSet("a coordinate is pinned twice".into()));
        }
        let t = trivial_motion_basis(&f.config);
        let sub = t.select_rows(&pinned);
        if numerical_rank(&sub, RankRule::Standard) < want {
            return Err(Error::InvalidPinSet(
                "pinned coordinates do not block every trivial motion".into(),
            ));
        }
        Ok(PinSet { d, nd, pinned })
    }

    pub fn indices(&self) -> &[usize] {
        &self.pinned
    }

    pub fn dofs(&self) -> Vec<Dof> {
        self.pinned
            .iter()
            .map(|&c| Dof::from_index(c, self.d))
            .collect()
    }

    pub fn is_pinned(&self, col: usize) -> bool {
        self.pinned.binary_search(&col).is_ok()
    }

    /// Unpinned columns of the parent matrix, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.nd).filter(|c| !self.is_pinned(*c)).collect()
    }

    /// Parent column → position among the free columns.
    pub fn free_position(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.nd];
        for (pos, c) in self.free_columns().into_iter().enumerate() {
            out[c] = Some(pos);
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn total_columns(&self) -> usize {
        self.nd
    }

    pub fn free_count(&self) -> usize {
        self.nd - self.pinned.len()
    }

    fn check(&self, f: &Framework) -> Result<()> {
        if self.d != f.dimension() || self.nd != f.coordinate_count() {
            return Err(Error::InvalidPinSet(format!(
                "pin set built for {} coordinates in dimension {}, framework has {} in dimension {}",
                self.nd,
                self.d,
                f.coordinate_count(),
                f.dimension()
            )));
        }
        Ok(())
    }
}

/// Greedy column-pivoted elimination on the trivial-motion basis.
///
/// Each basis column in turn takes the row of largest magnitude among the
/// rows not yet chosen (lowest index on ties), then is eliminated from the
/// remaining rows.
pub fn select_pin_set(f: &Framework) -> Result<PinSet> {
    f.ensure_valid()?;
    let d = f.dimension();
    let nd = f.coordinate_count();
    let mut t = trivial_motion_basis(&f.config);
    let dim = t.ncols();
    let mut free = vec![true; nd];
    let mut pinned = Vec::with_capacity(dim);

    for c in 0..dim {
        let col_scale = t.column(c).amax().max(f64::MIN_POSITIVE);
        let best = (0..nd)
            .filter(|&r| free[r])
            .map(|r| t[(r, c)].abs())
            .fold(0.0, f64::max);
        if best <= PIVOT_FLOOR * col_scale {
            return Err(Error::DegenerateConfiguration(format!(
                "trivial motion {} cannot be pinned; the points do not span dimension {d}",
                c + 1
            )));
        }
        let p = (0..nd)
            .find(|&r| free[r] && t[(r, c)].abs() >= best * (1.0 - PIVOT_TIE))
            .expect("pivot exists");
        free[p] = false;
        pinned.push(p);
        for r in 0..nd {
            if !free[r] {
                continue;
            }
            let factor = t[(r, c)] / t[(p, c)];
            if factor != 0.0 {
                for cc in c..dim {
                    let v = t[(p, cc)];
                    t[(r, cc)] -= factor * v;
                }
            }
        }
    }
    pinned.sort_unstable();
    Ok(PinSet { d, nd, pinned })
}

/// `R(p)`: the rigidity matrix with the pinned columns removed.
#[derive(Clone, Debug)]
pub struct PinnedMatrix {
    pub entries: DMatrix<f64>,
    pub pin: PinSet,
    /// Parent column of each remaining column.
    pub columns: Vec<usize>,
    pub rows: Vec<Edge>,
}

impl PinnedMatrix {
    pub fn is_square(&self) -> bool {
        self.entries.nrows() == self.entries.ncols()
    }

    /// Copy with the given rows removed.
    pub fn without_rows(&self, dropped: &[usize]) -> PinnedMatrix {
        let keep: Vec<usize> = (0..self.entries.nrows())
            .filter(|r| !dropped.contains(r))
            .collect();
        PinnedMatrix {
            entries: self.entries.select_rows(&keep),
            pin: self.pin.clone(),
            columns: self.columns.clone(),
            rows: keep.iter().map(|&r| self.rows[r]).collect(),
        }
    }
}

pub fn pin_columns(r: &RigidityMatrix, pin: &PinSet) -> Result<PinnedMatrix> {
    check_len("pin set columns", r.entries.ncols(), pin.total_columns())?;
    if pin.d != r.d {
        return Err(Error::InvalidPinSet(
            "pin set dimension differs from matrix".into(),
        ));
    }
    let columns = pin.free_columns();
    Ok(PinnedMatrix {
        entries: r.entries.select_columns(&columns),
        pin: pin.clone(),
        columns,
        rows: r.rows.clone(),
    })
}

/// Builds and pins `R(p)` in one go.
pub fn pinned_rigidity_matrix(f: &Framework, pin: &PinSet) -> Result<PinnedMatrix> {
    pin.check(f)?;
    pin_columns(&build_rigidity_matrix(f)?, pin)
}

/// A pinned flex lifted to all `nd` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FullFlex {
    pub values: DVector<f64>,
    pub source: DVector<f64>,
    pub pin: PinSet,
}

impl FullFlex {
    /// Drops the pinned slots again.
    pub fn unpadded(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.pin.free_count(),
            self.pin.free_columns().into_iter().map(|c| self.values[c]),
        )
    }
}

pub fn zero_pad(flex: &DVector<f64>, pin: &PinSet) -> Result<FullFlex> {
    check_len("flex length", pin.free_count(), flex.len())?;
    let mut values = DVector::zeros(pin.total_columns());
    for (pos, c) in pin.free_columns().into_iter().enumerate() {
        values[c] = flex[pos];
    }
    Ok(FullFlex {
        values,
        source: flex.clone(),
        pin: pin.clone(),
    })
}

/// `R(v)`: the rigidity-matrix pattern of `f` evaluated on an arbitrary
/// coordinate vector `v`, pinned with `pin`.
pub fn rigidity_matrix_of_flex(f: &Framework, v: &FullFlex, pin: &PinSet) -> Result<PinnedMatrix> {
    pin.check(f)?;
    check_len("full flex length", f.coordinate_count(), v.values.len())?;
    let r = RigidityMatrix {
        entries: assemble(&f.graph, f.dimension(), v.values.as_slice()),
        rows: f.graph.edges().to_vec(),
        d: f.dimension(),
    };
    pin_columns(&r, pin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{Configuration, Graph};
    use crate::matrixlab::kernel::kernel_data;

    fn triangle() -> Framework {
        let g = Graph::new(3, vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)]);
        let c = Configuration::from_points(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])
            .unwrap();
        Framework::new(g, c)
    }

    #[test]
    fn triangle_pins_vertex_one_and_second_y() {
        let pin = select_pin_set(&triangle()).unwrap();
        let names: Vec<String> = pin.dofs().iter().map(ToString::to_string).collect();
        assert_eq!(names, vec!["(1,x)", "(1,y)", "(2,y)"]);
    }

    #[test]
    fn one_dimension_pins_single_coordinate() {
        let g = Graph::new(2, vec![Edge::new(0, 1)]);
        let f = Framework::new(
            g,
            Configuration::from_points(1, &[vec![0.0], vec![1.0]]).unwrap(),
        );
        let pin = select_pin_set(&f).unwrap();
        assert_eq!(pin.indices(), &[0]);
    }

    #[test]
    fn pinned_submatrix_invertible() {
        let f = triangle();
        let pin = select_pin_set(&f).unwrap();
        let t = trivial_motion_basis(&f.config).select_rows(pin.indices());
        assert!(t.determinant().abs() > 1e-12);
    }

    #[test]
    fn explicit_pins_validated() {
        let f = triangle();
        let ok = PinSet::from_dofs(
            &f,
            &[
                Dof { vertex: 0, axis: 0 },
                Dof { vertex: 0, axis: 1 },
                Dof { vertex: 1, axis: 1 },
            ],
        );
        assert!(ok.is_ok());
        // x of every vertex leaves the y translation free
        let bad = PinSet::from_dofs(
            &f,
            &[
                Dof { vertex: 0, axis: 0 },
                Dof { vertex: 1, axis: 0 },
                Dof { vertex: 2, axis: 0 },
            ],
        );
        assert!(matches!(bad, Err(Error::InvalidPinSet(_))));
        let short = PinSet::from_dofs(&f, &[Dof { vertex: 0, axis: 0 }]);
        assert!(short.is_err());
        let dup = PinSet::from_dofs(&f, &[Dof { vertex: 0, axis: 0 }; 3]);
        assert!(dup.is_err());
    }

    #[test]
    fn triangle_pins_to_square() {
        let f = triangle();
        let pin = select_pin_set(&f).unwrap();
        let r = build_rigidity_matrix(&f).unwrap();
        let p = pin_columns(&r, &pin).unwrap();
        assert_eq!(p.entries.shape(), (3, 3));
        assert_eq!(p.columns, vec![2, 4, 5]);
        assert_eq!(kernel_data(&p.entries).unwrap().rank, 3);
    }

    #[test]
    fn pin_mismatch_rejected() {
        let f = triangle();
        let pin = select_pin_set(&f).unwrap();
        let g = Graph::new(2, vec![Edge::new(0, 1)]);
        let small = Framework::new(
            g,
            Configuration::from_points(1, &[vec![0.0], vec![1.0]]).unwrap(),
        );
        let r = build_rigidity_matrix(&small).unwrap();
        assert!(pin_columns(&r, &pin).is_err());
    }

    #[test]
    fn zero_pad_round_trip_and_errors() {
        let f = triangle();
        let pin = select_pin_set(&f).unwrap();
        let flex = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let full = zero_pad(&flex, &pin).unwrap();
        assert_eq!(full.values.as_slice(), &[0.0, 0.0, 1.0, 0.0, 2.0, 3.0]);
        assert_eq!(full.unpadded(), flex);
        assert!(zero_pad(&DVector::zeros(2), &pin).is_err());
        let z = zero_pad(&DVector::zeros(3), &pin).unwrap();
        assert_eq!(z.values.amax(), 0.0);
    }

    #[test]
    fn flex_matrix_of_zero_and_of_placement() {
        let f = triangle();
        let pin = select_pin_set(&f).unwrap();
        let zero = zero_pad(&DVector::zeros(3), &pin).unwrap();
        assert_eq!(
            rigidity_matrix_of_flex(&f, &zero, &pin)
                .unwrap()
                .entries
                .amax(),
            0.0
        );

        let placement = FullFlex {
            values: DVector::from_column_slice(f.config.coords()),
            source: DVector::zeros(3),
            pin: pin.clone(),
        };
        let a = rigidity_matrix_of_flex(&f, &placement, &pin).unwrap();
        let b = pinned_rigidity_matrix(&f, &pin).unwrap();
        assert_eq!(a.entries, b.entries);
    }
}
