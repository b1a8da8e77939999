use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Serialize;

use super::singleton::{DPart, SingletonData};
use super::tutte::{edge_kind, EdgeKind};
use crate::error::{input, precondition, Error, Result};
use crate::matroid::{bits, Matroid};
use crate::poly::{Field, Poly, Rat, Var};

/// Multilinear polynomial over original edge indices.
type Ml = BTreeMap<u32, Rat>;

fn split_ml(z: &Ml, e: usize) -> (Ml, Ml) {
    let mut a = Ml::new();
    let mut b = Ml::new();
    for (&m, c) in z {
        if m >> e & 1 == 1 {
            b.insert(m & !(1 << e), c.clone());
        } else {
            a.insert(m, c.clone());
        }
    }
    (a, b)
}

/// a − c·b
fn axpy(a: &Ml, c: &Rat, b: &Ml) -> Ml {
    let mut out = a.clone();
    if c.is_zero() {
        return out;
    }
    for (m, v) in b {
        let slot = out.entry(*m).or_insert_with(Rat::zero);
        *slot -= c * v;
        if slot.is_zero() {
            out.remove(m);
        }
    }
    out
}

fn is_multiple(a: &Ml, c: &Rat, b: &Ml) -> bool {
    axpy(a, c, b).is_empty()
}

type MemoKey = (u32, Vec<u32>, Vec<(u32, Rat)>);

struct Checker<'a> {
    f: Vec<Rat>,
    d: Vec<DPart>,
    memo: HashMap<MemoKey, bool>,
    _m: &'a Matroid,
}

impl Checker<'_> {
    fn check(&mut self, z: &Ml, alive: u32, bases: &[u32]) -> bool {
        if z.keys().any(|m| m & !alive != 0) {
            return false;
        }
        if alive == 0 {
            return z.len() == 1 && z.contains_key(&0);
        }
        let key: MemoKey = (alive, bases.to_vec(), z.iter().map(|(m, c)| (*m, c.clone())).collect());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let ok = bits(alive).all(|e| self.check_edge(z, alive, bases, e));
        self.memo.insert(key, ok);
        ok
    }

    fn check_edge(&mut self, z: &Ml, alive: u32, bases: &[u32], e: usize) -> bool {
        let bit = 1u32 << e;
        let rest = alive & !bit;
        let (a, b) = split_ml(z, e);
        let with: Vec<u32> = bases.iter().filter(|&&x| x & bit != 0).map(|x| x & !bit).collect();
        let without: Vec<u32> = bases.iter().copied().filter(|x| x & bit == 0).collect();
        let cf = self.f[e].clone();
        match (with.is_empty(), without.is_empty()) {
            (false, false) => {
                let del = axpy(&a, &cf, &b);
                self.check(&del, rest, &without) && self.check(&b, rest, &sorted(with))
            }
            (false, true) => is_multiple(&a, &cf, &b) && self.check(&b, rest, &sorted(with)),
            (true, _) => match self.d[e].clone() {
                DPart::One => b.is_empty() && self.check(&a, rest, &without),
                DPart::Linear(cd) => is_multiple(&a, &cd, &b) && self.check(&b, rest, &without),
            },
        }
    }
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Recursive Deletion-Contraction axiom check over Q, for every edge at every level.
pub fn is_matroidal(zeta: &Poly, m: &Matroid, sigma: &SingletonData) -> Result<bool> {
    if zeta.field() != Field::Q {
        return input("matroidal check runs over Q");
    }
    sigma.covers(m)?;
    let Ok(z) = zeta.to_masks(m.labels()) else {
        return Ok(false);
    };
    let mut f = Vec::with_capacity(m.n());
    let mut d = Vec::with_capacity(m.n());
    for l in m.labels() {
        let s = sigma.get(l)?;
        f.push(s.f.clone());
        d.push(s.d.clone());
    }
    let mut ck = Checker { f, d, memo: HashMap::new(), _m: m };
    Ok(ck.check(&z, m.ground(), m.bases()))
}

fn zero_like(z: &Poly) -> Poly {
    Poly::zero(z.field())
}

/// ζ = ζ_del + f_e ζ_con for a non-(co)loop; (ζ_N, ζ_N) with ζ = f_e ζ_N for a
/// coloop; (ζ_L, ζ_L) with ζ = d_e ζ_L for a loop.
pub fn dc_split(zeta: &Poly, m: &Matroid, sigma: &SingletonData, e: usize) -> Result<(Poly, Poly)> {
    if e >= m.n() {
        return input(format!("edge index {e} out of range"));
    }
    let label = m.label(e);
    let v = Var::edge(label);
    let s = sigma.get(label)?;
    let (a, b) = match zeta.var_index(&v) {
        Some(_) => zeta.split_linear(&v)?,
        None => (zeta.clone(), zero_like(zeta)),
    };
    match edge_kind(m, e) {
        EdgeKind::Ordinary => Ok((&a - &b.scale(&s.f), b)),
        EdgeKind::Coloop => {
            if a != b.scale(&s.f) {
                return Err(Error::Structure(format!("f_{label} does not divide at coloop {label}")));
            }
            Ok((b.clone(), b))
        }
        EdgeKind::Loop => match &s.d {
            DPart::One => {
                if !b.is_zero() {
                    return Err(Error::Structure(format!("polynomial uses loop variable {label}")));
                }
                Ok((a.clone(), a))
            }
            DPart::Linear(c) => {
                if a != b.scale(c) {
                    return Err(Error::Structure(format!("d_{label} does not divide at loop {label}")));
                }
                Ok((b.clone(), b))
            }
        },
    }
}

/// Handle polynomials: ζ^h_{M∖H} for each h ∈ H (in edge order) and ζ_{M/H}.
#[derive(Clone, Debug, Serialize)]
pub struct HandleSplit {
    pub handle: Vec<String>,
    #[serde(serialize_with = "ser_polys")]
    pub deletions: Vec<Poly>,
    #[serde(serialize_with = "ser_poly")]
    pub contraction: Poly,
}

fn ser_polys<S: serde::Serializer>(v: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Checks that `h` is a proper, independent, coloop-free handle.
pub fn check_handle_pre(m: &Matroid, h: u32) -> Result<()> {
    if !m.is_handle(h)? {
        return precondition("H is not a handle");
    }
    if h == m.ground() {
        return precondition("H is not proper");
    }
    if !m.is_independent(h) {
        return precondition("H is dependent");
    }
    if h & m.coloops() != 0 {
        return precondition("H contains a coloop");
    }
    Ok(())
}

pub fn handle_split(zeta: &Poly, m: &Matroid, sigma: &SingletonData, h: u32) -> Result<HandleSplit> {
    check_handle_pre(m, h)?;
    let labels: Vec<String> = bits(h).map(|i| m.label(i).to_string()).collect();
    let (deletions, contraction) = split_rec(zeta, m, sigma, &labels)?;
    Ok(HandleSplit { handle: labels, deletions, contraction })
}

fn split_rec(z: &Poly, m: &Matroid, sigma: &SingletonData, hs: &[String]) -> Result<(Vec<Poly>, Poly)> {
    let e = m.index_of(&hs[0]).expect("handle label");
    if edge_kind(m, e) != EdgeKind::Ordinary {
        return precondition(format!("{} is a loop or coloop of the current minor", hs[0]));
    }
    let (del, con) = dc_split(z, m, sigma, e)?;
    let mut md = m.delete(e)?;
    let mut q = del;
    for g in &hs[1..] {
        let ge = md.index_of(g).expect("handle label");
        if !md.is_coloop(ge) {
            return Err(Error::Structure(format!("{g} is not a coloop after deleting {}", hs[0])));
        }
        q = q.div_linear(&Var::edge(g.as_str()), &sigma.get(g)?.f)?;
        md = md.delete(ge)?;
    }
    if hs.len() == 1 {
        return Ok((vec![q], con));
    }
    let (mut rest, c) = split_rec(&con, &m.contract(e)?, sigma, &hs[1..])?;
    rest.insert(0, q);
    Ok((rest, c))
}

fn f_polys(field: Field, sigma: &SingletonData, labels: &[String]) -> Result<Vec<Poly>> {
    labels.iter().map(|l| sigma.f_poly(field, l)).collect()
}

/// ζ = Σ_h (∏_{g≠h} f_g) ζ^h + (∏_h f_h) ζ_{M/H}, exactly.
pub fn verify_handle_formula(zeta: &Poly, sigma: &SingletonData, split: &HandleSplit) -> Result<bool> {
    let field = zeta.field();
    let fs = f_polys(field, sigma, &split.handle)?;
    let mut rhs = &Poly::product(field, &fs) * &split.contraction;
    for (i, d) in split.deletions.iter().enumerate() {
        let others = fs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f);
        rhs = &rhs + &(&Poly::product(field, others) * d);
    }
    Ok(rhs == *zeta)
}

fn partial(z: &Poly, v: &Var) -> Poly {
    match z.var_index(v) {
        Some(_) => z.derivative(v).expect("known variable"),
        None => Poly::zero(z.field()),
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SingularIdentity {
    /// Σ_h f_h ∂_h ζ − (|H|−1) ζ = (∏ f_h) ζ_{M/H}
    pub aggregate: bool,
    /// ζ − f_h ∂_h ζ = (∏_{g≠h} f_g) ζ^h for every h
    pub per_edge: bool,
}

impl SingularIdentity {
    pub fn holds(&self) -> bool {
        self.aggregate && self.per_edge
    }
}

pub fn singular_identity(zeta: &Poly, sigma: &SingletonData, split: &HandleSplit) -> Result<SingularIdentity> {
    let field = zeta.field();
    let fs = f_polys(field, sigma, &split.handle)?;
    let k = split.handle.len() as i64;
    let mut euler_h = zeta.scale(&field.from_int(-(k - 1)));
    let mut per_edge = true;
    for (i, l) in split.handle.iter().enumerate() {
        let t = &fs[i] * &partial(zeta, &Var::edge(l.as_str()));
        euler_h = &euler_h + &t;
        let others = fs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f);
        let rhs = &Poly::product(field, others) * &split.deletions[i];
        per_edge &= &(zeta - &t) - &rhs == Poly::zero(field);
    }
    let rhs = &Poly::product(field, &fs) * &split.contraction;
    Ok(SingularIdentity { aggregate: euler_h == rhs, per_edge })
}

pub fn singular_identity_check(zeta: &Poly, m: &Matroid, sigma: &SingletonData, h: u32) -> Result<bool> {
    let split = handle_split(zeta, m, sigma, h)?;
    Ok(singular_identity(zeta, sigma, &split)?.holds())
}

/// Shifts x_e ↦ x_e − c_e so that every f_e becomes x_e; d_e shifts along.
pub fn normalize_coordinates(zeta: &Poly, m: &Matroid, sigma: &SingletonData) -> Result<(Poly, SingletonData)> {
    let field = zeta.field();
    let mut assign = HashMap::new();
    let mut out = SingletonData::default();
    for l in m.labels() {
        let s = sigma.get(l)?;
        if !s.f.is_zero() {
            assign.insert(Var::edge(l.as_str()), Poly::linear(field, l, &-s.f.clone()));
        }
        let d = match &s.d {
            DPart::One => DPart::One,
            DPart::Linear(c) => DPart::Linear(c - &s.f),
        };
        out.set(l, super::singleton::Singleton { f: Rat::zero(), d });
    }
    Ok((zeta.substitute(&assign)?, out))
}

/// In normalized coordinates the lowest-degree part of ζ is supported exactly
/// on the bases of the loopless matroid `m`.
pub fn min_part_is_msp_check(zeta: &Poly, m: &Matroid, sigma: &SingletonData) -> Result<bool> {
    if m.loops() != 0 {
        return precondition("matroid has loops");
    }
    let (z, _) = normalize_coordinates(zeta, m, sigma)?;
    if z.is_zero() {
        return Ok(false);
    }
    let Ok(masks) = z.min_part()?.to_masks(m.labels()) else {
        return Ok(false);
    };
    Ok(masks.keys().copied().eq(m.bases().iter().copied()))
}

/// ζ ∈ (f_e : e ∈ E)^{rank M}, i.e. every term of the normalized ζ has degree ≥ rank.
pub fn degree_law_check(zeta: &Poly, m: &Matroid, sigma: &SingletonData) -> Result<bool> {
    let (z, _) = normalize_coordinates(zeta, m, sigma)?;
    let r = m.rank() as u32;
    let ok = z.terms().all(|(e, _)| e.iter().sum::<u32>() >= r);
    Ok(ok)
}
