//! Standard small inputs shared by the test suites, the benches and the CLI runner.

use num_bigint::BigInt;
use num_traits::Pow;

use crate::error::Result;
use crate::feynman::FeynmanDiagram;
use crate::graph::Multigraph;
use crate::linalg::RatMatrix;
use crate::matroid::{column_matroid, graphic, uniform, Matroid};
use crate::poly::Rat;

pub fn cycle(n: usize) -> Multigraph {
    Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("cycle")
}

/// Two vertices joined by three parallel edges.
pub fn theta() -> Multigraph {
    Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).expect("theta")
}

/// Theta graph whose three paths have lengths 1, 1 and 2; the length-2 path is a
/// handle with two elements.
pub fn long_theta() -> Multigraph {
    Multigraph::new(3, vec![(0, 1), (0, 1), (0, 2), (2, 1)]).expect("theta")
}

/// Two triangles sharing the edge (1,2).
pub fn glued_triangles() -> Multigraph {
    Multigraph::new(4, vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).expect("glued triangles")
}

pub fn graph_fixtures() -> Vec<(String, Multigraph)> {
    vec![
        ("C3".into(), cycle(3)),
        ("C4".into(), cycle(4)),
        ("theta".into(), theta()),
        ("theta-1-1-2".into(), long_theta()),
        ("glued-triangles".into(), glued_triangles()),
    ]
}

/// Column matroid of the integer matrix with identity block and (1,2,2), (2,3,6), (3,4,12).
pub fn u36_a() -> Matroid {
    let a = RatMatrix::from_ints(&[&[1, 0, 0, 1, 2, 3], &[0, 1, 0, 2, 3, 4], &[0, 0, 1, 2, 6, 12]]);
    column_matroid(&a).expect("U36 A")
}

/// Column matroid of rows x^λ, y^λ, z^λ with λ = 0..5 and (x, y, z) = (2, 3, 5).
pub fn u36_b() -> Matroid {
    let rows: Vec<Vec<Rat>> =
        [2u32, 3, 5].iter().map(|&b| (0..6u32).map(|l| Rat::from_integer(BigInt::from(b).pow(l))).collect()).collect();
    column_matroid(&RatMatrix::new(rows).expect("rectangular")).expect("U36 B")
}

/// Every U_{k,n}, n ≤ 6.
pub fn uniform_fixtures() -> Vec<(String, Matroid)> {
    let mut out = Vec::new();
    for n in 1..=6 {
        for k in 0..=n {
            out.push((format!("U{k},{n}"), uniform(k, n).expect("uniform")));
        }
    }
    out
}

/// Uniform matroids, graphic matroids of the graph fixtures and both U_{3,6} realizations.
pub fn matroid_fixtures() -> Vec<(String, Matroid)> {
    let mut out = uniform_fixtures();
    for (name, g) in graph_fixtures() {
        out.push((format!("graphic({name})"), graphic(&g).expect("graphic")));
    }
    out.push(("U36-A".into(), u36_a()));
    out.push(("U36-B".into(), u36_b()));
    out
}

/// Fixtures that are connected and of positive rank.
pub fn connected_fixtures() -> Vec<(String, Matroid)> {
    matroid_fixtures().into_iter().filter(|(_, m)| m.rank() > 0 && m.is_connected().unwrap_or(false)).collect()
}

/// The triangle with edges x12, x13, x23, all three vertices external.
pub fn triangle(p: [i64; 3], masses: &[i64]) -> Result<FeynmanDiagram> {
    let labels = vec!["x12".to_string(), "x13".into(), "x23".into()];
    let g = Multigraph::with_labels(3, vec![(0, 1), (0, 2), (1, 2)], labels)?;
    let r = |v: i64| Rat::from_integer(v.into());
    FeynmanDiagram::new(g, vec![0, 1, 2], p.iter().map(|&v| vec![r(v)]).collect(), masses.iter().map(|&m| r(m)).collect())
}
