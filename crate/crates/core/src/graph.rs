use crate::error::{input, Result};
use crate::poly::check_label;

/// Finite multigraph; self-loops and parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl Multigraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Multigraph> {
        let labels = default_labels(edges.len());
        Multigraph::with_labels(vertices, edges, labels)
    }

    pub fn with_labels(
        vertices: usize,
        edges: Vec<(usize, usize)>,
        labels: Vec<String>,
    ) -> Result<Multigraph> {
        if edges.len() > 32 {
            return input(format!("{} edges exceed the 32-edge limit", edges.len()));
        }
        if labels.len() != edges.len() {
            return input("one label per edge required");
        }
        for l in &labels {
            check_label(l)?;
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return input(format!("edge {i} = ({u},{v}) leaves the vertex range 0..{vertices}"));
            }
        }
        Ok(Multigraph { vertices, edges, labels })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Component representative of every vertex in the subgraph spanned by `mask`,
    /// plus whether that edge set is circuit-free.
    pub fn components_of(&self, mask: u32) -> (Vec<usize>, bool) {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut acyclic = true;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 0 {
                continue;
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                acyclic = false;
            } else {
                parent[a] = b;
            }
        }
        let reps = (0..self.vertices).map(|x| find(&mut parent, x)).collect();
        (reps, acyclic)
    }

    pub fn num_components(&self, mask: u32) -> usize {
        let (reps, _) = self.components_of(mask);
        reps.iter().enumerate().filter(|(i, r)| i == *r).count()
    }

    pub fn is_connected(&self) -> bool {
        self.vertices > 0 && self.num_components(full(self.edges.len())) == 1
    }

    /// Circuit-free edge sets with exactly `i - 1` more components than the graph.
    pub fn forests(&self, i: usize) -> Result<Vec<u32>> {
        if i == 0 {
            return input("forest index must be at least 1");
        }
        let base = self.num_components(full(self.edges.len()));
        let target = base + i - 1;
        if target > self.vertices {
            return Ok(Vec::new());
        }
        let size = self.vertices - target;
        let mut out = Vec::new();
        for combo in itertools::Itertools::combinations(0..self.edges.len(), size) {
            let mask = combo.iter().fold(0u32, |m, &e| m | 1 << e);
            let (_, acyclic) = self.components_of(mask);
            if acyclic {
                out.push(mask);
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

pub(crate) fn full(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}
