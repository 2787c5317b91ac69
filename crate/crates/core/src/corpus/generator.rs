//! Seeded random frameworks in the plane.
//!
//! Graphs come from Henneberg moves starting at a triangle, so they are
//! generically rigid and isostatic. Coordinates live on a dyadic grid, which
//! keeps planted collinear points exactly collinear in floating point.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::framework::{
    dof_profile, validate_framework, Configuration, DofClass, Edge, Framework, Graph,
};
use crate::matrixlab::kernel::kernel_data;
use crate::matrixlab::pinning::{pinned_rigidity_matrix, select_pin_set};

/// Attempts per seed before giving up.
pub const RETRY_BUDGET: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorParams {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Coordinates are `k / grid` for integer `|k| ≤ range`.
    pub grid: i64,
    pub range: i64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            min_vertices: 4,
            max_vertices: 12,
            grid: 16,
            range: 64,
        }
    }
}

fn dyadic(rng: &mut ChaCha8Rng, p: &GeneratorParams) -> f64 {
    rng.gen_range(-p.range..=p.range) as f64 / p.grid as f64
}

fn henneberg_edges(rng: &mut ChaCha8Rng, n: usize) -> Vec<Edge> {
    let mut edges = vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)];
    for v in 3..n {
        if rng.gen_bool(0.5) {
            // edge split: remove {a,b}, join v to a, b and a third vertex
            let e = edges.remove(rng.gen_range(0..edges.len()));
            let c = loop {
                let c = rng.gen_range(0..v);
                if c != e.a && c != e.b {
                    break c;
                }
            };
            edges.extend([Edge::new(e.a, v), Edge::new(e.b, v), Edge::new(c, v)]);
        } else {
            let a = rng.gen_range(0..v);
            let b = loop {
                let b = rng.gen_range(0..v);
                if b != a {
                    break b;
                }
            };
            edges.extend([Edge::new(a, v), Edge::new(b, v)]);
        }
    }
    edges
}

/// Relabels vertices and shuffles the edge order.
fn scramble(rng: &mut ChaCha8Rng, points: Vec<[f64; 2]>, edges: Vec<Edge>) -> Framework {
    let n = points.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut placed = vec![vec![0.0; 2]; n];
    for (old, p) in points.iter().enumerate() {
        placed[perm[old]] = p.to_vec();
    }
    let mut edges: Vec<Edge> = edges
        .into_iter()
        .map(|e| Edge::new(perm[e.a], perm[e.b]))
        .collect();
    edges.shuffle(rng);
    let config = Configuration::from_points(2, &placed).expect("planar points");
    Framework::new(Graph::new(n, edges), config)
}

fn distinct_points(points: &[[f64; 2]]) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(i, p)| points[..i].iter().all(|q| q != p))
}

fn nullity(f: &Framework) -> Option<(usize, bool)> {
    if !validate_framework(f).is_empty() {
        return None;
    }
    let pin = select_pin_set(f).ok()?;
    let r = pinned_rigidity_matrix(f, &pin).ok()?;
    let k = kernel_data(&r.entries).ok()?;
    Some((k.right_nullity(), k.marginal))
}

fn vertex_count(rng: &mut ChaCha8Rng, p: &GeneratorParams, least: usize) -> usize {
    let lo = p.min_vertices.max(least);
    rng.gen_range(lo..=p.max_vertices.max(lo))
}

/// An isostatic planar framework with exactly one flex: a degree-2 vertex
/// planted on the segment between two vertices of a generic rigid framework.
pub fn random_singular_nullity1(seed: u64, params: &GeneratorParams) -> Result<Framework> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let n = vertex_count(&mut rng, params, 4);
        let base = n - 1;
        let mut edges = henneberg_edges(&mut rng, base);
        let mut points: Vec<[f64; 2]> = (0..base)
            .map(|_| [dyadic(&mut rng, params), dyadic(&mut rng, params)])
            .collect();
        let a = rng.gen_range(0..base);
        let b = loop {
            let b = rng.gen_range(0..base);
            if b != a {
                break b;
            }
        };
        let t = [0.25, 0.5, 0.75][rng.gen_range(0..3)];
        let (pa, pb) = (points[a], points[b]);
        points.push([pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]);
        edges.extend([Edge::new(a, base), Edge::new(b, base)]);
        if !distinct_points(&points) {
            continue;
        }
        let f = scramble(&mut rng, points, edges);
        if dof_profile(&f).class != DofClass::Isostatic {
            continue;
        }
        if nullity(&f) == Some((1, false)) {
            return Ok(f);
        }
    }
    Err(Error::RetryBudgetExhausted {
        seed,
        attempts: RETRY_BUDGET,
    })
}

/// A generic isostatic planar framework (no flex).
pub fn random_generic_isostatic(seed: u64, params: &GeneratorParams) -> Result<Framework> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let n = vertex_count(&mut rng, params, 3);
        let edges = henneberg_edges(&mut rng, n);
        let points: Vec<[f64; 2]> = (0..n)
            .map(|_| [dyadic(&mut rng, params), dyadic(&mut rng, params)])
            .collect();
        if !distinct_points(&points) {
            continue;
        }
        let f = scramble(&mut rng, points, edges);
        if nullity(&f) == Some((0, false)) {
            return Ok(f);
        }
    }
    Err(Error::RetryBudgetExhausted {
        seed,
        attempts: RETRY_BUDGET,
    })
}

/// Random variant of the double-collinear construction: two vertices planted
/// on two bars sharing an endpoint, then `0..=extra` generic degree-2 vertices
/// attached. Only validity is checked; the nullity is whatever it is.
pub fn random_double_collinear(seed: u64, extra: usize) -> Result<Framework> {
    let params = GeneratorParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let mut points: Vec<[f64; 2]> = (0..3)
            .map(|_| [dyadic(&mut rng, &params), dyadic(&mut rng, &params)])
            .collect();
        let on_bar = |from: usize, to: usize, rng: &mut ChaCha8Rng| {
            let t = rng.gen_range(1..8) as f64 / 8.0;
            let (p, q) = (points[from], points[to]);
            [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
        };
        // 0 = shared endpoint, 1 and 2 the far ends, 3 and 4 planted
        let p3 = on_bar(0, 1, &mut rng);
        let p4 = on_bar(0, 2, &mut rng);
        points.extend([p3, p4]);
        let mut edges = vec![
            Edge::new(0, 1),
            Edge::new(0, 2),
            Edge::new(1, 2),
            Edge::new(0, 3),
            Edge::new(1, 3),
            Edge::new(0, 4),
            Edge::new(2, 4),
        ];
        let added = rng.gen_range(0..=extra);
        for v in 5..5 + added {
            let a = rng.gen_range(0..v);
            let b = loop {
                let b = rng.gen_range(0..v);
                if b != a {
                    break b;
                }
            };
            edges.extend([Edge::new(a, v), Edge::new(b, v)]);
            points.push([dyadic(&mut rng, &params), dyadic(&mut rng, &params)]);
        }
        if !distinct_points(&points) {
            continue;
        }
        let f = scramble(&mut rng, points, edges);
        if validate_framework(&f).is_empty() {
            return Ok(f);
        }
    }
    Err(Error::RetryBudgetExhausted {
        seed,
        attempts: RETRY_BUDGET,
    })
}
