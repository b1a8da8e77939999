//! Feynman diagrams, Symanzik polynomials and Feynman integrands.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::Zero;
use serde::Serialize;

use crate::constructions::{dc_split, handle_split, msp_build, BasisCoeffs, SingletonData};
use crate::error::{input, precondition, Error, Result};
use crate::graph::Multigraph;
use crate::matroid::{bits, graphic, Matroid};
use crate::poly::{check_label, Field, Poly, Rat, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct FeynmanDiagram {
    graph: Multigraph,
    external: Vec<usize>,
    momenta: Vec<Vec<Rat>>,
    masses: Vec<Rat>,
}

impl FeynmanDiagram {
    /// `momenta[i]` sits at `external[i]`; `masses` is per edge, empty meaning massless.
    pub fn new(graph: Multigraph, external: Vec<usize>, momenta: Vec<Vec<Rat>>, masses: Vec<Rat>) -> Result<Self> {
        if external.len() != momenta.len() {
            return input(format!("{} external vertices but {} momenta", external.len(), momenta.len()));
        }
        let mut seen = BTreeSet::new();
        for &v in &external {
            if v >= graph.vertices() || !seen.insert(v) {
                return input(format!("external vertex {v} is out of range or repeated"));
            }
        }
        let dim = momenta.first().map_or(0, Vec::len);
        if momenta.iter().any(|p| p.len() != dim) || (!momenta.is_empty() && dim == 0) {
            return input("momenta must share one positive dimension");
        }
        for c in 0..dim {
            if !momenta.iter().map(|p| &p[c]).sum::<Rat>().is_zero() {
                return input(format!("momentum conservation fails in coordinate {c}"));
            }
        }
        let masses = if masses.is_empty() { vec![Rat::zero(); graph.num_edges()] } else { masses };
        if masses.len() != graph.num_edges() {
            return input(format!("{} masses for {} edges", masses.len(), graph.num_edges()));
        }
        Ok(FeynmanDiagram { graph, external, momenta, masses })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn external(&self) -> &[usize] {
        &self.external
    }

    pub fn momenta(&self) -> &[Vec<Rat>] {
        &self.momenta
    }

    pub fn masses(&self) -> &[Rat] {
        &self.masses
    }

    pub fn dimension(&self) -> usize {
        self.momenta.first().map_or(0, Vec::len)
    }

    fn momentum_into(&self, reps: &[usize], root: usize) -> Vec<Rat> {
        let mut s = vec![Rat::zero(); self.dimension()];
        for (v, p) in self.external.iter().zip(&self.momenta) {
            if reps[*v] == root {
                for (a, b) in s.iter_mut().zip(p) {
                    *a += b;
                }
            }
        }
        s
    }

    /// Δ coefficients m_e² per edge label.
    pub fn delta(&self) -> BTreeMap<String, Rat> {
        self.graph.labels().iter().cloned().zip(self.masses.iter().map(|m| m * m)).collect()
    }
}

pub fn spanning_forests(g: &Multigraph, i: usize) -> Result<Vec<u32>> {
    g.forests(i)
}

fn complement_poly(g: &Multigraph, terms: impl IntoIterator<Item = (u32, Rat)>) -> Poly {
    let full = crate::graph::full(g.num_edges());
    Poly::from_masks(Field::Q, g.labels(), terms.into_iter().map(|(f, c)| (full & !f, c)))
}

/// Σ over spanning forests T of x^{E∖T}.
pub fn symanzik_u(g: &Multigraph) -> Result<Poly> {
    let trees = g.forests(1)?;
    Ok(complement_poly(g, trees.into_iter().map(|t| (t, Rat::from_integer(1.into())))))
}

fn norm2(v: &[Rat]) -> Rat {
    v.iter().map(|x| x * x).sum()
}

/// Σ over 2-forests T₁ ⊔ T₂ of |p(T₁)|² x^{E∖F}, Euclidean norm.
pub fn symanzik_f(d: &FeynmanDiagram) -> Result<Poly> {
    let g = &d.graph;
    if !g.is_connected() {
        return precondition("second Symanzik polynomial needs a connected graph");
    }
    let mut terms = Vec::new();
    for f in g.forests(2)? {
        let (reps, _) = g.components_of(f);
        let anchor = reps[0];
        let other = *reps.iter().find(|&&r| r != anchor).expect("two components");
        let p1 = d.momentum_into(&reps, other);
        let p2 = d.momentum_into(&reps, anchor);
        let c = norm2(&p1);
        if c != norm2(&p2) {
            return Err(Error::Structure("component momenta disagree".into()));
        }
        if !c.is_zero() {
            terms.push((f, c));
        }
    }
    Ok(complement_poly(g, terms))
}

/// ζ(1 + Σ c_f x_f) + ξ.
pub fn feyn(zeta: &Poly, delta: &BTreeMap<String, Rat>, xi: Option<&Poly>) -> Poly {
    let field = zeta.field();
    let mut lin = Poly::one(field);
    for (l, c) in delta {
        if let Some(c) = field.reduce(c).filter(|c| !c.is_zero()) {
            lin = &lin + &Poly::edge(field, l).scale(&c);
        }
    }
    let mut out = zeta * &lin;
    if let Some(x) = xi {
        out = &out + x;
    }
    out
}

/// U·(1 + Σ m_e² x_e) + F₀.
pub fn diagram_poly(d: &FeynmanDiagram) -> Result<Poly> {
    if !d.graph.is_connected() {
        return precondition("diagram polynomial needs a connected graph");
    }
    let u = symanzik_u(&d.graph)?;
    let f = symanzik_f(d)?;
    Ok(feyn(&u, &d.delta(), Some(&f)))
}

/// ζ_N(1 + Δ) + ξ_M with N a corank-one quotient of M.
#[derive(Clone, Debug)]
pub struct FeynmanIntegrand {
    n: Matroid,
    m: Option<Matroid>,
    zeta_n: Poly,
    delta: BTreeMap<String, Rat>,
    xi_m: Option<Poly>,
    poly: Poly,
    /// min(Feyn) = ζ_N
    pub min_part_ok: bool,
    /// deg Feyn = rank(N) + 1 whenever Δ ≠ 0 or ξ is present
    pub degree_ok: bool,
}

fn is_msp_on(z: &Poly, m: &Matroid) -> bool {
    z.to_masks(m.labels()).is_ok_and(|t| t.keys().copied().eq(m.bases().iter().copied()))
}

pub fn integrand_build(
    zeta_n: Poly,
    delta: BTreeMap<String, Rat>,
    xi_m: Option<Poly>,
    n: Matroid,
    m: Option<Matroid>,
) -> Result<FeynmanIntegrand> {
    if n.rank() < 1 {
        return precondition("rank(N) must be at least 1");
    }
    if !is_msp_on(&zeta_n, &n) {
        return input("ζ_N is not supported exactly on the bases of N");
    }
    for l in delta.keys() {
        check_label(l)?;
    }
    if xi_m.is_some() && m.is_none() {
        return input("ξ_M given without M");
    }
    if let Some(mm) = &m {
        if mm.labels() != n.labels() {
            return input("N and M must share a labelled ground set");
        }
        if !mm.is_quotient(&n)? {
            return Err(Error::Structure("N is not a quotient of M".into()));
        }
        if mm.rank() != n.rank() + 1 {
            return Err(Error::Structure("rank(M) must equal rank(N) + 1".into()));
        }
    }
    if let (Some(x), Some(mm)) = (&xi_m, &m) {
        if x.field() != zeta_n.field() {
            return input("ζ_N and ξ_M live over different fields");
        }
        if !is_msp_on(x, mm) {
            return input("ξ_M is not supported exactly on the bases of M");
        }
    }
    let poly = feyn(&zeta_n, &delta, xi_m.as_ref());
    let min_part_ok = poly.min_part()? == zeta_n;
    let r = n.rank() as u32;
    let delta_zero = delta.values().all(|c| zeta_n.field().reduce(c).map_or(true, |c| c.is_zero()));
    let expected = if delta_zero && xi_m.is_none() { r } else { r + 1 };
    let degree_ok = poly.total_degree() == Some(expected);
    Ok(FeynmanIntegrand { n, m, zeta_n, delta, xi_m, poly, min_part_ok, degree_ok })
}

impl FeynmanIntegrand {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn n(&self) -> &Matroid {
        &self.n
    }

    pub fn m(&self) -> Option<&Matroid> {
        self.m.as_ref()
    }

    pub fn zeta_n(&self) -> &Poly {
        &self.zeta_n
    }

    pub fn xi_m(&self) -> Option<&Poly> {
        self.xi_m.as_ref()
    }

    pub fn delta(&self) -> &BTreeMap<String, Rat> {
        &self.delta
    }

    fn delta_without(&self, drop: &[&str]) -> BTreeMap<String, Rat> {
        self.delta.iter().filter(|(k, _)| !drop.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    /// Feyn(ζ_{N∖e}, Δ^{F∖e}, ξ_{M∖e}), or with ξ replaced by 0 when e is a coloop of M.
    pub fn deletion(&self, e: usize) -> Result<Poly> {
        let std = SingletonData::standard(self.n.labels());
        if self.n.is_loop(e) || self.n.is_coloop(e) {
            return precondition(format!("{} is a loop or coloop of N", self.n.label(e)));
        }
        let (zd, _) = dc_split(&self.zeta_n, &self.n, &std, e)?;
        let label = self.n.label(e);
        let xi = match (&self.xi_m, &self.m) {
            (Some(x), Some(mm)) if !mm.is_coloop(e) => Some(dc_split(x, mm, &std, e)?.0),
            _ => None,
        };
        Ok(feyn(&zd, &self.delta_without(&[label]), xi.as_ref()))
    }
}

/// (rank(N)+1)·Feyn − ε·Feyn = ζ_N with ε the Euler derivation over every variable.
pub fn euler_identity_check(f: &FeynmanIntegrand) -> bool {
    let field = f.poly.field();
    let r = f.n.rank() as i64;
    let lhs = &f.poly.scale(&field.from_int(r + 1)) - &f.poly.euler();
    lhs == f.zeta_n
}

#[derive(Clone, Debug, Serialize)]
pub struct FeynHandleReport {
    pub handle: Vec<String>,
    pub formula: bool,
    /// Σ_h m_h ζ^h_{N∖H}
    pub correction: String,
}

/// Feyn = Σ_h x^{H∖h} Feyn^h_{∖H} + x^H (Feyn_{/H} + Σ_h m_h ζ^h_{N∖H}).
pub fn feynman_handle_check(f: &FeynmanIntegrand, h: u32) -> Result<FeynHandleReport> {
    let n = &f.n;
    if h == 0 || h & !n.ground() != 0 {
        return input("handle must be a nonempty subset of the ground set");
    }
    if !n.is_independent(h) {
        return precondition("H is dependent in N");
    }
    if h == n.ground() || !n.is_handle(h)? {
        return precondition("H is not a proper handle of N");
    }
    if n.contract_set(h).rank() < 1 {
        return precondition("rank(N/H) must be at least 1");
    }
    if h & n.coloops() != 0 {
        return precondition("H contains a coloop of N");
    }
    if let Some(mm) = &f.m {
        if h & mm.coloops() != 0 {
            return precondition("H contains a coloop of M");
        }
    }
    let field = f.poly.field();
    let std = SingletonData::standard(n.labels());
    let zs = handle_split(&f.zeta_n, n, &std, h)?;
    let xs = match (&f.xi_m, &f.m) {
        (Some(x), Some(mm)) => Some(handle_split(x, mm, &std, h)?),
        _ => None,
    };
    let labels = zs.handle.clone();
    let xh = Poly::edge_monomial(field, labels.iter().map(String::as_str));
    let mut rhs = Poly::zero(field);
    let mut correction = Poly::zero(field);
    for (i, l) in labels.iter().enumerate() {
        let xi = xs.as_ref().map(|s| &s.deletions[i]);
        let fh = feyn(&zs.deletions[i], &f.delta_without(&[l]), xi);
        let others = Poly::edge_monomial(field, labels.iter().filter(|g| *g != l).map(String::as_str));
        rhs = &rhs + &(&others * &fh);
        let mh = f.delta.get(l).cloned().unwrap_or_default();
        correction = &correction + &zs.deletions[i].scale(&mh);
    }
    let fc = feyn(&zs.contraction, &f.delta, xs.as_ref().map(|s| &s.contraction));
    rhs = &rhs + &(&xh * &(&fc + &correction));
    Ok(FeynHandleReport { handle: labels, formula: rhs == f.poly, correction: correction.to_string() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kinematics {
    #[serde(rename = "zero data")]
    ZeroData,
    #[serde(rename = "scalar nonzero")]
    ScalarNonzero,
    #[serde(rename = "general kinematics")]
    General,
    #[serde(rename = "degenerate")]
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct KinematicsReport {
    /// (a) no proper nonempty subset of external vertices has zero momentum sum
    pub subsums_nonzero: bool,
    pub zero_subset: Option<Vec<usize>>,
    /// (b) U·Δ + F₀ has exactly the support of its formal contributions
    pub no_cancellation: bool,
    pub classification: Kinematics,
}

impl KinematicsReport {
    pub fn gate(&self) -> bool {
        self.subsums_nonzero && self.no_cancellation
    }
}

pub fn kinematics_check(d: &FeynmanDiagram) -> Result<KinematicsReport> {
    let k = d.external.len();
    if k > 24 {
        return input("too many external vertices for subset enumeration");
    }
    // smallest zero-sum proper subset first
    let mut zero_subset = None;
    'outer: for size in 1..k {
        for s in (0..k).combinations(size) {
            let mut sum = vec![Rat::zero(); d.dimension()];
            for &i in &s {
                for (a, b) in sum.iter_mut().zip(&d.momenta[i]) {
                    *a += b;
                }
            }
            if sum.iter().all(Zero::is_zero) {
                zero_subset = Some(s.iter().map(|&i| d.external[i]).collect());
                break 'outer;
            }
        }
    }
    let no_cancellation = if d.graph.is_connected() { support_matches(d)? } else { true };
    let p_zero = d.momenta.iter().flatten().all(Zero::is_zero);
    let m_zero = d.masses.iter().all(Zero::is_zero);
    let subsums_nonzero = zero_subset.is_none();
    let classification = if p_zero && m_zero {
        Kinematics::ZeroData
    } else if d.dimension() == 1 && !p_zero {
        Kinematics::ScalarNonzero
    } else if d.dimension() >= 2 && subsums_nonzero && no_cancellation {
        Kinematics::General
    } else {
        Kinematics::Degenerate
    };
    Ok(KinematicsReport { subsums_nonzero, zero_subset, no_cancellation, classification })
}

fn support_matches(d: &FeynmanDiagram) -> Result<bool> {
    let g = &d.graph;
    let vars: Vec<Var> = g.labels().iter().map(|l| Var::edge(l.as_str())).collect();
    let u = symanzik_u(g)?;
    let f = symanzik_f(d)?;
    let delta = d.delta();
    let mut formal: BTreeSet<Vec<u32>> = BTreeSet::new();
    let u_terms = u.in_universe(&vars)?;
    for (e, _) in u_terms.terms() {
        for (i, l) in g.labels().iter().enumerate() {
            if !delta[l].is_zero() {
                let mut m = e.to_vec();
                m[i] += 1;
                formal.insert(m);
            }
        }
    }
    for (e, _) in f.in_universe(&vars)?.terms() {
        formal.insert(e.to_vec());
    }
    let lin = Poly::sum(Field::Q, &g.labels().iter().map(|l| Poly::edge(Field::Q, l).scale(&delta[l])).collect::<Vec<_>>());
    let expanded = (&(&u * &lin) + &f).in_universe(&vars)?;
    let got: BTreeSet<Vec<u32>> = expanded.terms().map(|(e, _)| e.to_vec()).collect();
    Ok(got == formal)
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportQuotientReport {
    pub classification: Kinematics,
    pub support: Vec<Vec<usize>>,
    /// support(F₀) is the basis family of a matroid M′
    pub exchange_ok: bool,
    /// the cographic matroid is a quotient of M′
    pub quotient_ok: bool,
    /// rank(M′) = rank(cographic) + 1
    pub rank_ok: bool,
}

impl SupportQuotientReport {
    pub fn passed(&self) -> bool {
        self.exchange_ok && self.quotient_ok && self.rank_ok
    }
}

fn support_matroid(d: &FeynmanDiagram) -> Result<(Vec<u32>, Option<Matroid>)> {
    let f = symanzik_f(d)?;
    let masks: Vec<u32> = f.to_masks(d.graph.labels())?.into_keys().collect();
    let m = if masks.is_empty() { None } else { Matroid::new(d.graph.labels().to_vec(), masks.clone()).ok() };
    Ok((masks, m))
}

fn check_diagram_shape(d: &FeynmanDiagram) -> Result<Matroid> {
    if d.graph.num_edges() < 2 {
        return precondition("need at least two edges");
    }
    let mg = graphic(&d.graph)?;
    if !d.graph.is_connected() || !mg.is_connected()? {
        return precondition("the graphic matroid is not connected");
    }
    Ok(mg)
}

pub fn support_quotient_check(d: &FeynmanDiagram) -> Result<SupportQuotientReport> {
    let mg = check_diagram_shape(d)?;
    let classification = kinematics_check(d)?.classification;
    let cog = mg.dual();
    let (masks, mp) = support_matroid(d)?;
    let support = masks.iter().map(|&b| bits(b).collect()).collect();
    let (quotient_ok, rank_ok) = match &mp {
        Some(mp) => (mp.is_quotient(&cog)?, mp.rank() == cog.rank() + 1),
        None => (false, false),
    };
    Ok(SupportQuotientReport { classification, support, exchange_ok: mp.is_some(), quotient_ok, rank_ok })
}

/// 𝒢 = Feyn(Ψ of the cographic matroid, Σ m_e² x_e, F₀) when the data admits it.
pub fn diagram_integrand(d: &FeynmanDiagram) -> Result<FeynmanIntegrand> {
    let mg = check_diagram_shape(d)?;
    let class = kinematics_check(d)?.classification;
    if !matches!(class, Kinematics::ScalarNonzero | Kinematics::General) {
        return precondition(format!("kinematics classified as {class:?}"));
    }
    let cog = mg.dual();
    let (_, mp) = support_matroid(d)?;
    let Some(mp) = mp else {
        return Err(Error::Structure("support of F₀ is not a basis family".into()));
    };
    let u = symanzik_u(&d.graph)?;
    let f = symanzik_f(d)?;
    let coeffs: BasisCoeffs = f.to_masks(d.graph.labels())?;
    let xi = msp_build(&mp, Field::Q, Some(&coeffs))?;
    integrand_build(u, d.delta(), Some(xi), cog, Some(mp))
}
