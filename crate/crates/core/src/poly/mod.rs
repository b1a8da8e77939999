//! Sparse multivariate polynomials with exact coefficients over Q or F_p.

mod field;
mod ops;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

pub use field::{fmt_rat, is_prime, parse_rat, Field, Rat};
#[cfg(test)]
pub(crate) use field::rat;
pub(crate) use field::{is_negative, rat_mod};

use crate::error::{input, Result};

/// A polynomial variable: an edge at some jet level, or the Tutte variable `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Edge { label: String, level: u32 },
    Tutte,
}

impl Var {
    pub fn edge(label: impl Into<String>) -> Var {
        Var::Edge { label: label.into(), level: 0 }
    }

    pub fn jet(label: impl Into<String>, level: u32) -> Var {
        Var::Edge { label: label.into(), level }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Var::Edge { label, .. } => Some(label),
            Var::Tutte => None,
        }
    }

    pub fn level(&self) -> u32 {
        match self {
            Var::Edge { level, .. } => *level,
            Var::Tutte => 0,
        }
    }

    pub fn at_level(&self, q: u32) -> Var {
        match self {
            Var::Edge { label, .. } => Var::jet(label.clone(), q),
            Var::Tutte => Var::Tutte,
        }
    }

    /// `"p"` is the Tutte variable, `"e@q"` the level-q jet of edge `e`.
    pub fn parse(s: &str) -> Result<Var> {
        if s == "p" {
            return Ok(Var::Tutte);
        }
        match s.split_once('@') {
            Some((l, q)) => {
                let q: u32 = q
                    .parse()
                    .or_else(|_| input(format!("bad jet level in variable {s:?}")))?;
                check_label(l)?;
                Ok(Var::jet(l, q))
            }
            None => {
                check_label(s)?;
                Ok(Var::edge(s))
            }
        }
    }
}

pub(crate) fn check_label(l: &str) -> Result<()> {
    if l.is_empty() || l.contains('@') || l == "p" {
        return input(format!("invalid edge label {l:?}"));
    }
    Ok(())
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Edge { label, level: 0 } => write!(f, "{label}"),
            Var::Edge { label, level } => write!(f, "{label}@{level}"),
            Var::Tutte => write!(f, "p"),
        }
    }
}

/// Exponent vector, ordered by total degree and then lexicographically
/// (larger leading exponents first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct Poly {
    field: Field,
    vars: Vec<Var>,
    terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero(field: Field) -> Poly {
        Poly { field, vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field, Rat::one())
    }

    pub fn constant(field: Field, c: Rat) -> Poly {
        let mut p = Poly::zero(field);
        let c = field.norm(c);
        if !c.is_zero() {
            p.terms.insert(Mono(Vec::new()), c);
        }
        p
    }

    pub fn var(field: Field, v: Var) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Mono(vec![1]), Rat::one());
        Poly { field, vars: vec![v], terms }
    }

    pub fn edge(field: Field, label: &str) -> Poly {
        Poly::var(field, Var::edge(label))
    }

    /// `x + c` in the edge variable `label`.
    pub fn linear(field: Field, label: &str, c: &Rat) -> Poly {
        &Poly::edge(field, label) + &Poly::constant(field, c.clone())
    }

    /// Builds from explicit terms; exponent vectors must match `vars`. Repeated
    /// monomials are summed, coefficients reduced into the field.
    pub fn from_terms(
        field: Field,
        vars: Vec<Var>,
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Result<Poly> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return input(format!("variable {v} listed twice"));
            }
        }
        let mut acc: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return input(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    vars.len()
                ));
            }
            let c = match field.reduce(&c) {
                Some(c) => c,
                None => return input(format!("coefficient {c} is not defined in {field}")),
            };
            let slot = acc.entry(Mono(e)).or_insert_with(Rat::zero);
            *slot = field.add(slot, &c);
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Poly { field, vars, terms: acc })
    }

    /// Squarefree polynomial in edge variables `labels` from subset masks.
    pub fn from_masks(
        field: Field,
        labels: &[String],
        terms: impl IntoIterator<Item = (u32, Rat)>,
    ) -> Poly {
        let vars: Vec<Var> = labels.iter().map(|l| Var::edge(l.clone())).collect();
        let n = labels.len();
        let it = terms
            .into_iter()
            .map(|(m, c)| ((0..n).map(|i| (m >> i) & 1).collect::<Vec<u32>>(), c));
        Poly::from_terms(field, vars, it).expect("mask polynomial")
    }

    /// Inverse of [`Poly::from_masks`]; fails on non-multilinear terms or on
    /// variables outside `labels` (level-0 edges only).
    pub fn to_masks(&self, labels: &[String]) -> Result<BTreeMap<u32, Rat>> {
        let mut pos = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            let idx = match v {
                Var::Edge { label, level: 0 } => labels.iter().position(|l| l == label),
                _ => None,
            };
            pos.push(idx);
        }
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mask = 0u32;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let Some(j) = pos[i] else {
                    return input(format!("variable {} is not an edge of the ground set", self.vars[i]));
                };
                if e > 1 {
                    return input(format!("polynomial is not multilinear in {}", self.vars[i]));
                }
                mask |= 1 << j;
            }
            out.insert(mask, c.clone());
        }
        Ok(out)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Constant term (zero if absent).
    pub fn constant_term(&self) -> Rat {
        self.terms
            .iter()
            .find(|(m, _)| m.degree() == 0)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn var_index(&self, v: &Var) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    /// Variables occurring with a nonzero exponent, in universe order.
    pub fn used_vars(&self) -> Vec<Var> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        match self.var_index(v) {
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Mono::degree);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    /// Coefficient of the monomial given as (variable, exponent) pairs.
    pub fn coefficient(&self, mono: &[(Var, u32)]) -> Rat {
        let mut e = vec![0u32; self.vars.len()];
        for (v, k) in mono {
            if *k == 0 {
                continue;
            }
            match self.var_index(v) {
                Some(i) => e[i] += k,
                None => return Rat::zero(),
            }
        }
        self.terms.get(&Mono(e)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Drops variables that occur in no term.
    pub fn trimmed(&self) -> Poly {
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        let vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Mono(keep.iter().map(|&i| m.0[i]).collect()), c.clone()))
            .collect();
        Poly { field: self.field, vars, terms }
    }

    /// Re-expresses the polynomial over `vars`, which must contain every used variable.
    pub fn in_universe(&self, vars: &[Var]) -> Result<Poly> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|m| m.0[i] > 0) {
                        return input(format!("variable {v} missing from the target universe"));
                    }
                    map.push(None);
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; vars.len()];
                for (i, &k) in m.0.iter().enumerate() {
                    if let Some(j) = map[i] {
                        e[j] = k;
                    }
                }
                (Mono(e), c.clone())
            })
            .collect();
        Ok(Poly { field: self.field, vars: vars.to_vec(), terms })
    }

    /// Converts between fields: Q → F_p reduces, F_p → Q lifts residues to 0..p.
    pub fn to_field(&self, field: Field) -> Result<Poly> {
        if field == self.field {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let Some(c) = field.reduce(c) else {
                return input(format!("coefficient {c} is not defined in {field}"));
            };
            if !c.is_zero() {
                terms.insert(m.clone(), c);
            }
        }
        Ok(Poly { field, vars: self.vars.clone(), terms })
    }

    pub(crate) fn from_raw(field: Field, vars: Vec<Var>, terms: BTreeMap<Mono, Rat>) -> Poly {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Poly { field, vars, terms }
    }

    /// Evaluates at a point given for every used variable.
    pub fn evaluate(&self, point: &HashMap<Var, Rat>) -> Result<Rat> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match point.get(v) {
                Some(x) => match self.field.reduce(x) {
                    Some(x) => vals.push(x),
                    None => return input(format!("value of {v} is not defined in {}", self.field)),
                },
                None => {
                    if self.terms.keys().any(|m| m.0[i] > 0) {
                        return input(format!("no value assigned to {v}"));
                    }
                    vals.push(Rat::zero());
                }
            }
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    t *= num_traits::pow(vals[i].clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(self.field.norm(acc))
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        if self.field != other.field {
            return false;
        }
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        (self - other).is_zero()
    }
}

impl Eq for Poly {}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].to_string()),
                    _ => factors.push(format!("{}^{e}", self.vars[i])),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rat(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}
