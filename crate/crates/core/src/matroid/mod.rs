//! Matroids on at most 32 elements, stored by their explicit basis family.

mod construct;

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use itertools::Itertools;

use crate::error::{input, precondition, Result};
use crate::graph::full;
use crate::poly::check_label;

pub use construct::{column_matroid, graphic, uniform};

/// Iterates the set bits of a mask, lowest first.
pub fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

pub fn mask_of(idx: &[usize]) -> u32 {
    idx.iter().fold(0, |m, &i| m | 1 << i)
}

/// Packs the bits of `x` at the positions of `keep` into the low bits.
pub fn compress(x: u32, keep: u32) -> u32 {
    let mut out = 0;
    for (j, i) in bits(keep).enumerate() {
        out |= (x >> i & 1) << j;
    }
    out
}

/// Inverse of [`compress`].
pub fn expand(x: u32, keep: u32) -> u32 {
    let mut out = 0;
    for (j, i) in bits(keep).enumerate() {
        out |= (x >> j & 1) << i;
    }
    out
}

/// Size first, then lexicographic on the sorted element lists.
pub(crate) fn subset_order(a: &u32, b: &u32) -> std::cmp::Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| bits(*a).cmp(bits(*b)))
}

#[derive(Clone, Debug)]
pub struct Matroid {
    labels: Vec<String>,
    bases: Vec<u32>,
    rank: usize,
    circuits: OnceLock<Vec<u32>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Matroid) -> bool {
        self.labels == other.labels && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl Matroid {
    /// Validated constructor: basis masks over `labels.len() <= 32` elements.
    pub fn new(labels: Vec<String>, bases: Vec<u32>) -> Result<Matroid> {
        let n = labels.len();
        if n > 32 {
            return input(format!("ground set of size {n} exceeds 32"));
        }
        for (i, l) in labels.iter().enumerate() {
            check_label(l)?;
            if labels[..i].contains(l) {
                return input(format!("duplicate edge label {l:?}"));
            }
        }
        if bases.is_empty() {
            return input("a matroid needs at least one basis");
        }
        let all = full(n);
        if let Some(b) = bases.iter().find(|&&b| b & !all != 0) {
            return input(format!("basis {:?} uses an edge outside 0..{n}", bits(*b).collect_vec()));
        }
        let r = bases[0].count_ones();
        if bases.iter().any(|b| b.count_ones() != r) {
            return input("bases of different cardinalities");
        }
        let m = Matroid::from_parts(labels, bases);
        if !m.satisfies_exchange() {
            return input("basis family violates the exchange axiom");
        }
        Ok(m)
    }

    pub fn from_index_sets(labels: Vec<String>, bases: &[Vec<usize>]) -> Result<Matroid> {
        let mut masks = Vec::with_capacity(bases.len());
        for b in bases {
            if let Some(&e) = b.iter().find(|&&e| e >= labels.len()) {
                return input(format!("edge index {e} out of range"));
            }
            let m = mask_of(b);
            if m.count_ones() as usize != b.len() {
                return input("repeated edge inside a basis");
            }
            masks.push(m);
        }
        Matroid::new(labels, masks)
    }

    /// Trusted constructor for families known to be matroids.
    pub(crate) fn from_parts(labels: Vec<String>, mut bases: Vec<u32>) -> Matroid {
        bases.sort_unstable();
        bases.dedup();
        let rank = bases.first().map_or(0, |b| b.count_ones() as usize);
        Matroid { labels, bases, rank, circuits: OnceLock::new() }
    }

    pub fn empty() -> Matroid {
        Matroid::from_parts(Vec::new(), vec![0])
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Matroid> {
        if labels.len() != self.n() {
            return input("label count does not match the ground set");
        }
        for (i, l) in labels.iter().enumerate() {
            check_label(l)?;
            if labels[..i].contains(l) {
                return input(format!("duplicate edge label {l:?}"));
            }
        }
        Ok(Matroid::from_parts(labels, self.bases.clone()))
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn ground(&self) -> u32 {
        full(self.n())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// rank of an edge subset given as a mask.
    pub fn rank_of(&self, s: u32) -> usize {
        self.bases.iter().map(|b| (b & s).count_ones()).max().unwrap_or(0) as usize
    }

    pub fn rank_of_set(&self, s: &[usize]) -> Result<usize> {
        self.check_edges(s)?;
        Ok(self.rank_of(mask_of(s)))
    }

    fn check_edges(&self, s: &[usize]) -> Result<()> {
        match s.iter().find(|&&e| e >= self.n()) {
            Some(e) => input(format!("edge index {e} out of range 0..{}", self.n())),
            None => Ok(()),
        }
    }

    fn check_mask(&self, s: u32) -> Result<()> {
        if s & !self.ground() != 0 {
            return input(format!("edge set {:?} leaves the ground set", bits(s).collect_vec()));
        }
        Ok(())
    }

    pub fn is_independent(&self, s: u32) -> bool {
        self.bases.iter().any(|b| b & s == s)
    }

    pub fn is_basis(&self, s: u32) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.bases.iter().all(|b| b >> e & 1 == 0)
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        self.bases.iter().all(|b| b >> e & 1 == 1)
    }

    pub fn loops(&self) -> u32 {
        self.ground() & !self.bases.iter().fold(0, |a, b| a | b)
    }

    pub fn coloops(&self) -> u32 {
        self.bases.iter().fold(self.ground(), |a, b| a & b)
    }

    /// Exchange axiom over all ordered basis pairs.
    pub fn satisfies_exchange(&self) -> bool {
        let set: HashSet<u32> = self.bases.iter().copied().collect();
        for &b in &self.bases {
            for &c in &self.bases {
                for e in bits(b & !c) {
                    let ok = bits(c & !b).any(|f| set.contains(&((b & !(1 << e)) | 1 << f)));
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All minimal dependent sets, sorted by size then lexicographically.
    pub fn circuits(&self) -> &[u32] {
        self.circuits.get_or_init(|| {
            let set: HashSet<u32> = self.bases.iter().copied().collect();
            let mut found = BTreeSet::new();
            for &b in &self.bases {
                for e in bits(self.ground() & !b) {
                    let mut c = 1u32 << e;
                    for f in bits(b) {
                        if set.contains(&((b & !(1 << f)) | 1 << e)) {
                            c |= 1 << f;
                        }
                    }
                    found.insert(c);
                }
            }
            let mut v: Vec<u32> = found.into_iter().collect();
            v.sort_by(subset_order);
            v
        })
    }

    pub fn is_circuit(&self, c: u32) -> bool {
        self.circuits().contains(&c)
    }

    /// Deletion; deleting a coloop restricts the bases instead.
    pub fn delete(&self, e: usize) -> Result<Matroid> {
        self.check_edges(&[e])?;
        Ok(self.delete_set(1 << e))
    }

    /// Contraction; contracting a loop coincides with deleting it.
    pub fn contract(&self, e: usize) -> Result<Matroid> {
        self.check_edges(&[e])?;
        Ok(self.contract_set(1 << e))
    }

    /// M∖T, i.e. the restriction to the complement of `t`.
    pub fn delete_set(&self, t: u32) -> Matroid {
        let keep = self.ground() & !t;
        let r = self.rank_of(keep) as u32;
        let bases = self
            .bases
            .iter()
            .map(|b| b & keep)
            .filter(|b| b.count_ones() == r)
            .map(|b| compress(b, keep))
            .collect();
        Matroid::from_parts(self.survivor_labels(keep), bases)
    }

    /// M/T.
    pub fn contract_set(&self, t: u32) -> Matroid {
        let keep = self.ground() & !t;
        let rt = self.rank_of(t) as u32;
        let bases = self
            .bases
            .iter()
            .filter(|b| (*b & t).count_ones() == rt)
            .map(|b| compress(b & keep, keep))
            .collect();
        Matroid::from_parts(self.survivor_labels(keep), bases)
    }

    pub fn restrict(&self, s: u32) -> Matroid {
        self.delete_set(self.ground() & !s)
    }

    fn survivor_labels(&self, keep: u32) -> Vec<String> {
        bits(keep).map(|i| self.labels[i].clone()).collect()
    }

    pub fn dual(&self) -> Matroid {
        let g = self.ground();
        Matroid::from_parts(self.labels.clone(), self.bases.iter().map(|b| g & !b).collect())
    }

    /// Direct sum with `other` placed after this ground set.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        if labels.len() > 32 {
            return input("direct sum exceeds 32 elements");
        }
        let shift = self.n();
        let bases = self
            .bases
            .iter()
            .flat_map(|&a| other.bases.iter().map(move |&b| a | b << shift))
            .collect();
        Matroid::new(labels, bases)
    }

    /// Every pair of distinct elements lies on a common circuit.
    pub fn is_connected(&self) -> Result<bool> {
        match self.n() {
            0 => input("connectivity of the empty matroid is undefined"),
            1 => Ok(true),
            _ => {
                let circ = self.circuits();
                Ok((0..self.n()).all(|e| {
                    let reach = circ.iter().filter(|c| *c >> e & 1 == 1).fold(0, |a, c| a | c);
                    reach == self.ground()
                }))
            }
        }
    }

    /// The whole ground set is a circuit.
    pub fn is_circuit_matroid(&self) -> bool {
        self.n() > 0 && self.circuits() == [self.ground()]
    }

    pub fn is_handle(&self, h: u32) -> Result<bool> {
        if h == 0 {
            return input("a handle must be nonempty");
        }
        self.check_mask(h)?;
        Ok(self.circuits().iter().all(|c| c & h == 0 || c & h == h))
    }

    /// Proper handle H avoiding the circuit `c` with M∖H connected; the first
    /// such set by size, then lexicographic order.
    pub fn find_connective_handle(&self, c: u32) -> Result<u32> {
        self.check_mask(c)?;
        if !self.is_circuit(c) {
            return precondition("the given set is not a circuit");
        }
        if c == self.ground() {
            return precondition("the matroid is the circuit itself");
        }
        if !self.is_connected()? {
            return precondition("the matroid is not connected");
        }
        let rest: Vec<usize> = bits(self.ground() & !c).collect();
        for k in 1..=rest.len() {
            for combo in rest.iter().copied().combinations(k) {
                let h = mask_of(&combo);
                if h == self.ground() || !self.is_handle(h)? {
                    continue;
                }
                if self.delete_set(h).is_connected()? {
                    return Ok(h);
                }
            }
        }
        precondition("no connective handle exists")
    }

    /// Filtration F_1 ⊂ … ⊂ F_k = E starting at the first circuit, obtained by
    /// peeling connective handles.
    pub fn handle_decomposition(&self) -> Result<Vec<u32>> {
        if self.n() == 0 || !self.is_connected()? {
            return precondition("handle decomposition needs a connected matroid");
        }
        let Some(&c) = self.circuits().first() else {
            return precondition("the matroid has no circuit");
        };
        let mut current = self.ground();
        let mut peeled = Vec::new();
        while current != c {
            let sub = self.restrict(current);
            let h = sub.find_connective_handle(compress(c, current))?;
            let h = expand(h, current);
            peeled.push(h);
            current &= !h;
        }
        let mut filt = vec![c];
        for h in peeled.iter().rev() {
            let last = *filt.last().expect("nonempty");
            filt.push(last | h);
        }
        Ok(filt)
    }

    /// Bases are the independent sets of size rank − t.
    pub fn truncate(&self, t: usize) -> Result<Matroid> {
        if t > self.rank {
            return input(format!("truncation depth {t} exceeds rank {}", self.rank));
        }
        let k = self.rank - t;
        let mut out = BTreeSet::new();
        for &b in &self.bases {
            for combo in bits(b).combinations(k) {
                out.insert(mask_of(&combo));
            }
        }
        Ok(Matroid::from_parts(self.labels.clone(), out.into_iter().collect()))
    }

    /// Whether `n` is a quotient of `self`: every circuit of `self` is a union
    /// of circuits of `n`, cross-checked against the rank inequality.
    pub fn is_quotient(&self, n: &Matroid) -> Result<bool> {
        if self.labels != n.labels {
            return input("quotient test needs a common labelled ground set");
        }
        let nc = n.circuits();
        let unions = self.circuits().iter().all(|&c| {
            let cover = nc.iter().filter(|&&d| d & c == d).fold(0, |a, d| a | d);
            cover == c
        });
        let ranks = n.rank < self.rank || (n.rank == self.rank && n == self);
        Ok(unions && ranks)
    }

    pub fn survivors(&self, keep: u32) -> Vec<usize> {
        bits(keep & self.ground()).collect()
    }
}

/// Proper handle H of `n`, independent in `n`, with N∖H connected,
/// rank(M∖H) > rank(N∖H) ≥ 2 and rank(N/H) ≥ 1.
pub fn special_handle(m: &Matroid, n: &Matroid) -> Result<u32> {
    if !m.is_quotient(n)? {
        return precondition("N is not a quotient of M");
    }
    if m.rank() <= n.rank() {
        return precondition("rank(M) must exceed rank(N)");
    }
    if n.rank() < 2 {
        return precondition("rank(N) must be at least 2");
    }
    if !n.is_connected()? {
        return precondition("N is not connected");
    }
    if n.is_circuit_matroid() {
        return precondition("N is a circuit");
    }
    let all: Vec<usize> = (0..n.n()).collect();
    for k in 1..n.n() {
        for combo in all.iter().copied().combinations(k) {
            let h = mask_of(&combo);
            if !n.is_independent(h) || !n.is_handle(h)? {
                continue;
            }
            let nd = n.delete_set(h);
            let rnd = nd.rank();
            if rnd < 2 || m.delete_set(h).rank() <= rnd || n.contract_set(h).rank() < 1 {
                continue;
            }
            if nd.is_connected()? {
                return Ok(h);
            }
        }
    }
    precondition("no special handle found")
}
