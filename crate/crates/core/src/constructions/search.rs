use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};
use serde::Serialize;

use super::matroidal::is_matroidal;
use super::singleton::{DPart, SingletonData};
use crate::error::{input, Result};
use crate::linalg::{nullspace, rref};
use crate::matroid::{bits, Matroid};
use crate::poly::{Field, Poly, Rat};

/// A polynomial whose coefficients are linear forms in the unknowns c_S.
type Sym = BTreeMap<u32, Vec<Rat>>;

/// Largest ground set the search accepts.
pub const SEARCH_LIMIT: usize = 4;

/// The matroidal polynomials of (M, σ): the members of `basis`' span on which
/// none of the `nonvanishing` forms is zero.
#[derive(Clone, Debug, Serialize)]
pub struct MatroidalSpace {
    #[serde(serialize_with = "ser_polys")]
    pub basis: Vec<Poly>,
    /// Leaf constants of the recursion, as polynomials in the basis weights t1, t2, ...
    pub nonvanishing: Vec<String>,
    /// True when some leaf form vanishes on the whole span.
    pub empty: bool,
    #[serde(serialize_with = "ser_opt")]
    pub generic: Option<Poly>,
}

fn ser_polys<S: serde::Serializer>(v: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

fn ser_opt<S: serde::Serializer>(p: &Option<Poly>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_some(&p.to_string()),
        None => s.serialize_none(),
    }
}

struct Walk {
    n: usize,
    f: Vec<Rat>,
    d: Vec<DPart>,
    zero: Vec<Vec<Rat>>,
    leaves: Vec<Vec<Rat>>,
    seen: HashSet<(u32, Vec<u32>, Vec<(u32, Vec<Rat>)>)>,
}

fn split(z: &Sym, e: usize) -> (Sym, Sym) {
    let mut a = Sym::new();
    let mut b = Sym::new();
    for (&m, v) in z {
        if m >> e & 1 == 1 {
            b.insert(m & !(1 << e), v.clone());
        } else {
            a.insert(m, v.clone());
        }
    }
    (a, b)
}

fn axpy(a: &Sym, c: &Rat, b: &Sym, width: usize) -> Sym {
    let mut out = a.clone();
    if c.is_zero() {
        return out;
    }
    for (m, v) in b {
        let slot = out.entry(*m).or_insert_with(|| vec![Rat::zero(); width]);
        for (s, x) in slot.iter_mut().zip(v) {
            *s -= c * x;
        }
        if slot.iter().all(Zero::is_zero) {
            out.remove(m);
        }
    }
    out
}

impl Walk {
    fn width(&self) -> usize {
        1 << self.n
    }

    fn require_zero(&mut self, z: &Sym) {
        self.zero.extend(z.values().cloned());
    }

    fn visit(&mut self, z: Sym, alive: u32, bases: Vec<u32>) {
        if alive == 0 {
            let c = z.get(&0).cloned().unwrap_or_else(|| vec![Rat::zero(); self.width()]);
            self.leaves.push(c);
            return;
        }
        let key = (alive, bases.clone(), z.iter().map(|(m, v)| (*m, v.clone())).collect());
        if !self.seen.insert(key) {
            return;
        }
        for e in bits(alive) {
            let bit = 1u32 << e;
            let rest = alive & !bit;
            let (a, b) = split(&z, e);
            let mut with: Vec<u32> = bases.iter().filter(|&&x| x & bit != 0).map(|x| x & !bit).collect();
            with.sort_unstable();
            let without: Vec<u32> = bases.iter().copied().filter(|x| x & bit == 0).collect();
            let w = self.width();
            match (with.is_empty(), without.is_empty()) {
                (false, false) => {
                    let del = axpy(&a, &self.f[e].clone(), &b, w);
                    self.visit(del, rest, without);
                    self.visit(b, rest, with);
                }
                (false, true) => {
                    let r = axpy(&a, &self.f[e].clone(), &b, w);
                    self.require_zero(&r);
                    self.visit(b, rest, with);
                }
                (true, _) => match self.d[e].clone() {
                    DPart::One => {
                        self.require_zero(&b);
                        self.visit(a, rest, without);
                    }
                    DPart::Linear(c) => {
                        let r = axpy(&a, &c, &b, w);
                        self.require_zero(&r);
                        self.visit(b, rest, without);
                    }
                },
            }
        }
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the Deletion-Contraction axioms as linear conditions on all
/// multilinear ζ, plus the nonvanishing of every leaf constant.
pub fn matroidal_space(m: &Matroid, sigma: &SingletonData) -> Result<MatroidalSpace> {
    if m.n() > SEARCH_LIMIT {
        return input(format!("search is limited to {SEARCH_LIMIT} elements"));
    }
    sigma.covers(m)?;
    let n = m.n();
    let width = 1usize << n;
    let mut walk = Walk { n, f: vec![], d: vec![], zero: vec![], leaves: vec![], seen: HashSet::new() };
    for l in m.labels() {
        let s = sigma.get(l)?;
        walk.f.push(s.f.clone());
        walk.d.push(s.d.clone());
    }
    let start: Sym = (0..width as u32)
        .map(|s| {
            let mut v = vec![Rat::zero(); width];
            v[s as usize] = Rat::one();
            (s, v)
        })
        .collect();
    walk.visit(start, m.ground(), m.bases().to_vec());

    let mut zero = walk.zero.clone();
    zero.retain(|r| r.iter().any(|x| !x.is_zero()));
    rref(&mut zero);
    let basis_vecs = nullspace(&zero, width);
    let to_poly = |v: &[Rat]| {
        Poly::from_masks(Field::Q, m.labels(), v.iter().enumerate().map(|(s, c)| (s as u32, c.clone())))
    };
    let basis: Vec<Poly> = basis_vecs.iter().map(|v| to_poly(v)).collect();

    // each leaf form restricted to the span, as coefficients on basis weights
    let mut forms: Vec<Vec<Rat>> = Vec::new();
    for l in &walk.leaves {
        let f: Vec<Rat> = basis_vecs.iter().map(|v| dot(l, v)).collect();
        if !forms.iter().any(|g| proportional(g, &f)) {
            forms.push(f);
        }
    }
    let empty = forms.iter().any(|f| f.iter().all(Zero::is_zero));
    let nonvanishing = forms.iter().map(|f| fmt_form(f)).collect();

    let mut generic = None;
    if !empty {
        for t in 1i64.. {
            let w: Vec<Rat> = (0..basis_vecs.len()).map(|i| Rat::from_integer(t.pow(i as u32).into())).collect();
            if forms.iter().all(|f| !dot(f, &w).is_zero()) {
                let mut v = vec![Rat::zero(); width];
                for (wi, b) in w.iter().zip(&basis_vecs) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += wi * y;
                    }
                }
                generic = Some(to_poly(&v));
                break;
            }
        }
    }
    if let Some(g) = &generic {
        debug_assert!(is_matroidal(g, m, sigma)?);
    }
    Ok(MatroidalSpace { basis, nonvanishing, empty, generic })
}

fn proportional(a: &[Rat], b: &[Rat]) -> bool {
    let Some(i) = a.iter().position(|x| !x.is_zero()) else {
        return b.iter().all(Zero::is_zero);
    };
    if b[i].is_zero() {
        return false;
    }
    let r = &b[i] / &a[i];
    a.iter().zip(b).all(|(x, y)| &(x * &r) == y)
}

fn fmt_form(f: &[Rat]) -> String {
    let vars: Vec<String> = (1..=f.len()).map(|i| format!("t{i}")).collect();
    let p = Poly::from_masks(Field::Q, &vars, f.iter().enumerate().map(|(i, c)| (1u32 << i, c.clone())));
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::uniform;

    #[test]
    fn u12_free_singletons() {
        let m = uniform(1, 2).unwrap();
        let s = matroidal_space(&m, &SingletonData::standard(m.labels())).unwrap();
        assert_eq!(s.basis.len(), 2);
        assert!(!s.empty);
        assert_eq!(s.nonvanishing.len(), 2);
        assert!(is_matroidal(s.generic.as_ref().unwrap(), &m, &SingletonData::standard(m.labels())).unwrap());
    }

    #[test]
    fn u13_shifted_is_one_dimensional() {
        let m = uniform(1, 3).unwrap();
        let sh = SingletonData::shifted(m.labels());
        let s = matroidal_space(&m, &sh).unwrap();
        assert_eq!(s.basis.len(), 1);
        let one = Poly::one(Field::Q);
        let prod = Poly::product(Field::Q, &m.labels().iter().map(|l| &one + &Poly::edge(Field::Q, l)).collect::<Vec<_>>());
        let target = &prod - &one;
        let b = &s.basis[0];
        let ratio = b.constant_term();
        assert!(ratio.is_zero());
        let c = b.coefficient(&[(crate::Var::edge("x1"), 1)]);
        assert_eq!(*b, target.scale(&c));
    }

    #[test]
    fn mixed_data_is_empty() {
        let m = uniform(1, 2).unwrap();
        let mut sigma = SingletonData::standard(m.labels());
        sigma.set("x1", super::super::singleton::Singleton { f: Rat::zero(), d: DPart::Linear(Rat::zero()) });
        let s = matroidal_space(&m, &sigma).unwrap();
        assert!(s.empty);
        assert!(s.generic.is_none());
    }
}
