use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Field, Mono, Poly, Rat, Var};
use crate::error::{input, Error, Result};

/// Union universe of two polynomials plus the index maps into it.
fn unify(a: &Poly, b: &Poly) -> (Vec<Var>, Vec<usize>, Vec<usize>) {
    if a.vars == b.vars {
        let id: Vec<usize> = (0..a.vars.len()).collect();
        return (a.vars.clone(), id.clone(), id);
    }
    let mut vars = a.vars.clone();
    let map_a = (0..a.vars.len()).collect();
    let mut map_b = Vec::with_capacity(b.vars.len());
    for v in &b.vars {
        match vars.iter().position(|w| w == v) {
            Some(j) => map_b.push(j),
            None => {
                vars.push(v.clone());
                map_b.push(vars.len() - 1);
            }
        }
    }
    (vars, map_a, map_b)
}

fn remap(m: &Mono, map: &[usize], len: usize) -> Vec<u32> {
    let mut e = vec![0u32; len];
    for (i, &k) in m.0.iter().enumerate() {
        e[map[i]] = k;
    }
    e
}

fn check_fields(a: &Poly, b: &Poly) -> Result<Field> {
    if a.field != b.field {
        return input(format!("field mismatch: {} vs {}", a.field, b.field));
    }
    Ok(a.field)
}

impl Poly {
    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        let field = check_fields(self, other)?;
        let (vars, ma, mb) = unify(self, other);
        let n = vars.len();
        let mut terms: BTreeMap<Mono, Rat> = if ma.len() == n && self.vars == vars {
            self.terms.clone()
        } else {
            self.terms
                .iter()
                .map(|(m, c)| (Mono(remap(m, &ma, n)), c.clone()))
                .collect()
        };
        for (m, c) in &other.terms {
            let key = Mono(remap(m, &mb, n));
            match terms.get_mut(&key) {
                Some(slot) => {
                    let s = field.add(slot, c);
                    if s.is_zero() {
                        terms.remove(&key);
                    } else {
                        *slot = s;
                    }
                }
                None => {
                    terms.insert(key, c.clone());
                }
            }
        }
        Ok(Poly { field, vars, terms })
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        let field = check_fields(self, other)?;
        let (vars, ma, mb) = unify(self, other);
        let n = vars.len();
        let left: Vec<(Vec<u32>, &Rat)> =
            self.terms.iter().map(|(m, c)| (remap(m, &ma, n), c)).collect();
        let right: Vec<(Vec<u32>, &Rat)> =
            other.terms.iter().map(|(m, c)| (remap(m, &mb, n), c)).collect();
        let mut acc: HashMap<Vec<u32>, Rat> = HashMap::with_capacity(left.len() * right.len());
        for (ea, ca) in &left {
            for (eb, cb) in &right {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = *ca * *cb;
                match acc.get_mut(&e) {
                    Some(slot) => *slot += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .map(|(e, c)| (Mono(e), field.norm(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(Poly { field, vars, terms })
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        let c = self.field.norm(c.clone());
        if c.is_zero() {
            return Poly { field: self.field, vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, d)| (m.clone(), self.field.mul(d, &c)))
            .collect();
        Poly { field: self.field, vars: self.vars.clone(), terms }
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Like [`Poly::pow`] but gives up once an intermediate exceeds `max_terms`.
    pub fn pow_bounded(&self, mut k: u32, max_terms: usize) -> Result<Poly> {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        let guard = |p: &Poly| -> Result<()> {
            if p.num_terms() > max_terms {
                return Err(Error::Resource {
                    what: "power expansion terms".into(),
                    required: p.num_terms() as u128,
                    budget: max_terms as u128,
                });
            }
            Ok(())
        };
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
                guard(&acc)?;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
                guard(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self, v: &Var) -> Result<Poly> {
        let Some(i) = self.var_index(v) else {
            return input(format!("unknown variable {v}"));
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0[i];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            let c = self.field.mul(c, &self.field.from_int(k as i64));
            if !c.is_zero() {
                terms.insert(Mono(e), c);
            }
        }
        Ok(Poly { field: self.field, vars: self.vars.clone(), terms })
    }

    /// Euler derivation Σ_v x_v ∂_v over the whole variable universe.
    pub fn euler(&self) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.field.mul(c, &self.field.from_int(m.degree() as i64))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly { field: self.field, vars: self.vars.clone(), terms }
    }

    /// Sum of the terms of lowest total degree.
    pub fn min_part(&self) -> Result<Poly> {
        let Some(d) = self.terms.keys().next().map(Mono::degree) else {
            return input("min_part of the zero polynomial");
        };
        let terms = self
            .terms
            .iter()
            .take_while(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Ok(Poly { field: self.field, vars: self.vars.clone(), terms })
    }

    /// `x^S · f(x^{-1})`: each squarefree monomial x^B becomes x^{S∖B}.
    pub fn cremona(&self, s: &[Var]) -> Result<Poly> {
        let mut pos = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let used = self.terms.keys().any(|m| m.0[i] > 0);
            let j = s.iter().position(|w| w == v);
            if used && j.is_none() {
                return input(format!("variable {v} lies outside the Cremona set"));
            }
            if self.terms.keys().any(|m| m.0[i] > 1) {
                return input(format!("degree above 1 in {v}"));
            }
            pos.push(j);
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![1u32; s.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k == 1 {
                    e[pos[i].expect("checked")] = 0;
                }
            }
            terms.insert(Mono(e), c.clone());
        }
        Ok(Poly { field: self.field, vars: s.to_vec(), terms })
    }

    /// Replaces each assigned variable by a polynomial.
    pub fn substitute(&self, assignment: &HashMap<Var, Poly>) -> Result<Poly> {
        for (v, q) in assignment {
            if q.field != self.field {
                return input(format!("substitution for {v} lives over {}", q.field));
            }
        }
        let targets: Vec<Option<&Poly>> = self.vars.iter().map(|v| assignment.get(v)).collect();
        let kept: Vec<Var> = self
            .vars
            .iter()
            .zip(&targets)
            .filter(|(_, t)| t.is_none())
            .map(|(v, _)| v.clone())
            .collect();
        let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut acc = Poly { field: self.field, vars: kept.clone(), terms: BTreeMap::new() };
        let mut chunk: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut rest = Vec::with_capacity(kept.len());
            let mut factor: Option<Poly> = None;
            for (i, &k) in m.0.iter().enumerate() {
                match targets[i] {
                    None => rest.push(k),
                    Some(q) if k > 0 => {
                        let qk = powers.entry((i, k)).or_insert_with(|| q.pow(k)).clone();
                        factor = Some(match factor {
                            None => qk,
                            Some(f) => &f * &qk,
                        });
                    }
                    Some(_) => {}
                }
            }
            match factor {
                None => {
                    let slot = chunk.entry(Mono(rest)).or_insert_with(Rat::zero);
                    *slot = self.field.add(slot, c);
                }
                Some(f) => {
                    let mono = Poly {
                        field: self.field,
                        vars: kept.clone(),
                        terms: std::iter::once((Mono(rest), c.clone())).collect(),
                    };
                    acc = &acc + &(&mono * &f);
                }
            }
        }
        chunk.retain(|_, c| !c.is_zero());
        let plain = Poly { field: self.field, vars: kept, terms: chunk };
        Ok(&acc + &plain)
    }

    /// Writes `self = a + v·b` with `a`, `b` free of `v` (which is dropped from
    /// their universe). Fails when the degree in `v` exceeds one.
    pub fn split_linear(&self, v: &Var) -> Result<(Poly, Poly)> {
        let Some(i) = self.var_index(v) else {
            let zero = Poly { field: self.field, vars: self.vars.clone(), terms: BTreeMap::new() };
            return Ok((self.clone(), zero));
        };
        let vars: Vec<Var> = self.vars.iter().filter(|w| *w != v).cloned().collect();
        let mut a = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e.remove(i);
            match k {
                0 => a.insert(Mono(e), c.clone()),
                1 => b.insert(Mono(e), c.clone()),
                _ => return input(format!("degree above 1 in {v}")),
            };
        }
        Ok((
            Poly { field: self.field, vars: vars.clone(), terms: a },
            Poly { field: self.field, vars, terms: b },
        ))
    }

    /// Exact quotient by `v + c`, for polynomials of degree at most one in `v`.
    pub fn div_linear(&self, v: &Var, c: &Rat) -> Result<Poly> {
        let (a, b) = self.split_linear(v)?;
        if a != b.scale(c) {
            return Err(Error::Structure(format!("{v} + {c} does not divide the polynomial")));
        }
        Ok(b)
    }

    /// Monomial support as exponent vectors over the universe.
    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().map(|m| m.0.clone()).collect()
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&k| k <= 1))
    }

    pub fn is_squarefree_support(&self) -> bool {
        self.is_multilinear()
    }

    /// Product of the given polynomials (1 for an empty list).
    pub fn product<'a>(field: Field, it: impl IntoIterator<Item = &'a Poly>) -> Poly {
        it.into_iter().fold(Poly::one(field), |acc, p| &acc * p)
    }

    pub fn sum<'a>(field: Field, it: impl IntoIterator<Item = &'a Poly>) -> Poly {
        it.into_iter().fold(Poly::zero(field), |acc, p| &acc + p)
    }

    /// Monomial x^S in the edge variables `labels`.
    pub fn edge_monomial<'a>(field: Field, labels: impl IntoIterator<Item = &'a str>) -> Poly {
        let vars: Vec<Var> = labels.into_iter().map(Var::edge).collect();
        let e = vec![1u32; vars.len()];
        Poly::from_raw(field, vars, std::iter::once((Mono(e), Rat::one())).collect())
    }
}

impl Add for &Poly {
    type Output = Poly;
    /// Panics on a field mismatch; use [`Poly::checked_add`] for fallible input.
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.field.neg(c)))
            .collect();
        Poly { field: self.field, vars: self.vars.clone(), terms }
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    fn x(n: &str) -> Poly {
        Poly::edge(Field::Q, n)
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (x("x"), x("y"));
        let lhs = &(&a + &b) * &(&a - &b);
        assert_eq!(lhs, &(&a * &a) - &(&b * &b));
    }

    #[test]
    fn frobenius_in_char_two() {
        let f = Field::Fp(2);
        let s = &Poly::edge(f, "x") + &Poly::edge(f, "y");
        let sq = s.pow(2);
        assert_eq!(sq, &Poly::edge(f, "x").pow(2) + &Poly::edge(f, "y").pow(2));
        assert_eq!(sq.num_terms(), 2);
    }

    #[test]
    fn derivative_and_euler() {
        let e2 = &(&(&x("x") * &x("y")) + &(&x("y") * &x("z"))) + &(&x("z") * &x("x"));
        assert_eq!(e2.derivative(&Var::edge("x")).unwrap(), &x("y") + &x("z"));
        assert_eq!(e2.euler(), e2.scale(&rat(2)));
        let f = &Poly::one(Field::Q) + &x("x");
        assert_eq!(f.euler(), x("x"));
        assert!(e2.derivative(&Var::edge("w")).is_err());
    }

    #[test]
    fn min_part_examples() {
        let f = &x("x") + &(&x("x") * &x("y"));
        assert_eq!(f.min_part().unwrap(), x("x"));
        assert_eq!(Poly::constant(Field::Q, rat(5)).min_part().unwrap(), Poly::constant(Field::Q, rat(5)));
        assert!(Poly::zero(Field::Q).min_part().is_err());
    }

    #[test]
    fn cremona_complements_monomials() {
        let e2 = &(&(&x("1") * &x("2")) + &(&x("1") * &x("3"))) + &(&x("2") * &x("3"));
        let s = [Var::edge("1"), Var::edge("2"), Var::edge("3")];
        let c = e2.cremona(&s).unwrap();
        assert_eq!(c, &(&x("1") + &x("2")) + &x("3"));
        assert_eq!(c.cremona(&s).unwrap(), e2);
        assert_eq!(x("1").cremona(&[Var::edge("1")]).unwrap(), Poly::one(Field::Q));
        assert!(x("1").pow(2).cremona(&[Var::edge("1")]).is_err());
    }

    #[test]
    fn substitution_examples() {
        let s = &x("x") + &x("y");
        let mut a = HashMap::new();
        a.insert(Var::edge("y"), Poly::zero(Field::Q));
        assert_eq!(s.substitute(&a).unwrap(), x("x"));
        let xy = &x("x") * &x("y");
        let mut b = HashMap::new();
        b.insert(Var::edge("x"), &x("x") + &Poly::one(Field::Q));
        assert_eq!(xy.substitute(&b).unwrap(), &xy + &x("y"));
    }

    #[test]
    fn evaluation_needs_all_used_vars() {
        let e2 = &(&(&x("x") * &x("y")) + &(&x("y") * &x("z"))) + &(&x("z") * &x("x"));
        let mut pt = HashMap::new();
        for v in ["x", "y", "z"] {
            pt.insert(Var::edge(v), rat(1));
        }
        assert_eq!(e2.evaluate(&pt).unwrap(), rat(3));
        pt.remove(&Var::edge("z"));
        assert!(e2.evaluate(&pt).is_err());
    }

    #[test]
    fn support_and_multilinearity() {
        let f = &x("x").pow(2) + &x("y");
        assert!(!f.is_multilinear());
        let g = &(&x("x") * &x("y")) + &x("z");
        assert!(g.is_multilinear());
        assert_eq!(g.support().len(), 2);
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = Poly::edge(Field::Q, "x");
        let b = Poly::edge(Field::Fp(3), "x");
        assert!(a.checked_add(&b).is_err());
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn div_linear_exact_and_inexact() {
        let f = &(&x("a") + &Poly::one(Field::Q)) * &x("b");
        assert_eq!(f.div_linear(&Var::edge("a"), &rat(1)).unwrap(), x("b"));
        assert!(f.div_linear(&Var::edge("a"), &rat(2)).is_err());
    }
}
