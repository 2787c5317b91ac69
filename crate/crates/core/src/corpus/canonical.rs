use num_rational::Ratio;

use crate::certify::Verdict;
use crate::framework::{Configuration, DofClass, Edge, Framework, Graph};

pub type Exact = Ratio<i64>;

/// What the analysis of an entry must produce.
#[derive(Clone, Debug)]
pub struct Expected {
    pub class: DofClass,
    /// Rank of the pinned rigidity matrix.
    pub rank: usize,
    pub flexes: usize,
    pub stresses: usize,
    pub verdicts: Vec<Verdict>,
    pub stress: &'static str,
    pub flex: &'static str,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub dimension: usize,
    pub points: Vec<Vec<Exact>>,
    pub edges: Vec<Edge>,
    pub expected: Expected,
}

impl CorpusEntry {
    pub fn framework(&self) -> Framework {
        let pts: Vec<Vec<f64>> = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| *x.numer() as f64 / *x.denom() as f64)
                    .collect()
            })
            .collect();
        let config = Configuration::from_points(self.dimension, &pts)
            .expect("corpus points are rectangular");
        Framework::new(Graph::new(self.points.len(), self.edges.clone()), config)
    }
}

fn q(n: i64, d: i64) -> Exact {
    Ratio::new(n, d)
}

fn int_points(pts: &[&[i64]]) -> Vec<Vec<Exact>> {
    pts.iter()
        .map(|p| p.iter().map(|&x| q(x, 1)).collect())
        .collect()
}

fn edges(list: &[(usize, usize)]) -> Vec<Edge> {
    list.iter().map(|&(a, b)| Edge::one_based(a, b)).collect()
}

pub fn canonical_entries() -> Vec<CorpusEntry> {
    let mut brace_plus = int_points(&[&[0, 0], &[2, 0], &[1, 0], &[1, 1]]);
    brace_plus.push(vec![q(1, 2), q(2, 1)]);

    vec![
        CorpusEntry {
            name: "generic_triangle",
            description: "K3 in the plane; infinitesimally rigid",
            dimension: 2,
            points: int_points(&[&[0, 0], &[1, 0], &[0, 1]]),
            edges: edges(&[(1, 2), (1, 3), (2, 3)]),
            expected: Expected {
                class: DofClass::Isostatic,
                rank: 3,
                flexes: 0,
                stresses: 0,
                verdicts: vec![Verdict::InfinitesimallyRigid],
                stress: "none",
                flex: "none",
            },
        },
        CorpusEntry {
            name: "collinear_brace",
            description: "vertex 3 sits at the midpoint of bar {1,2}; one flex, one stress",
            dimension: 2,
            points: int_points(&[&[0, 0], &[2, 0], &[1, 0], &[1, 1]]),
            edges: edges(&[(1, 2), (1, 3), (2, 3), (1, 4), (2, 4)]),
            expected: Expected {
                class: DofClass::Isostatic,
                rank: 4,
                flexes: 1,
                stresses: 1,
                verdicts: vec![Verdict::PrestressStable, Verdict::TransverseRigid],
                stress: "proportional to (-1/2, 1, 1, 0, 0) on edges (12, 13, 23, 14, 24)",
                flex: "vertex 3 moves in y only",
            },
        },
        CorpusEntry {
            name: "double_collinear",
            description: "vertices 3 and 5 sit on bars {1,2} and {1,4}; two flexes, two stresses",
            dimension: 2,
            points: int_points(&[&[0, 0], &[2, 0], &[1, 0], &[0, 2], &[0, 1]]),
            edges: edges(&[(1, 2), (1, 4), (2, 4), (1, 3), (2, 3), (1, 5), (4, 5)]),
            expected: Expected {
                class: DofClass::Isostatic,
                rank: 5,
                flexes: 2,
                stresses: 2,
                verdicts: vec![Verdict::TransverseInapplicable, Verdict::Inconclusive],
                stress: "one stress on each collinear triple {1,2,3} and {1,4,5}",
                flex: "vertex 3 moves in y, vertex 5 moves in x, independently",
            },
        },
        CorpusEntry {
            name: "hyperstatic_brace",
            description: "collinear_brace plus vertex 5 at (1/2, 2) joined to 1, 2 and 4",
            dimension: 2,
            points: brace_plus,
            edges: edges(&[
                (1, 2),
                (1, 3),
                (2, 3),
                (1, 4),
                (2, 4),
                (1, 5),
                (2, 5),
                (4, 5),
            ]),
            expected: Expected {
                class: DofClass::Hyperstatic(1),
                rank: 6,
                flexes: 1,
                stresses: 2,
                verdicts: vec![Verdict::PrestressStable, Verdict::TransverseRigid],
                stress: "span of the collinear stress on {12,13,23} and the K4 stress on {1,2,4,5}",
                flex: "vertex 3 moves in y only",
            },
        },
        CorpusEntry {
            name: "tetrahedron",
            description: "K4 in space; infinitesimally rigid",
            dimension: 3,
            points: int_points(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            edges: edges(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]),
            expected: Expected {
                class: DofClass::Isostatic,
                rank: 6,
                flexes: 0,
                stresses: 0,
                verdicts: vec![Verdict::InfinitesimallyRigid],
                stress: "none",
                flex: "none",
            },
        },
    ]
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    canonical_entries().into_iter().find(|e| e.name == name)
}
