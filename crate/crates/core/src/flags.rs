//! Flag matroids (quotient chains) and flag matroidal polynomials.

use serde::Serialize;

use crate::constructions::{handle_split, msp_build, singular_identity, verify_handle_formula, BasisCoeffs};
use crate::constructions::{HandleSplit, SingletonData, SingularIdentity};
use crate::error::{input, precondition, Error, Result};
use crate::matroid::{bits, Matroid};
use crate::poly::{Field, Poly, Rat, Var};

/// Chain M_k, …, M_1 stored top-down; M_1 is the terminal matroid.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagMatroid {
    chain: Vec<Matroid>,
    terminally_strict: bool,
    terminally_connected: bool,
    terminally_loopless: bool,
}

impl FlagMatroid {
    pub fn new(chain: Vec<Matroid>) -> Result<FlagMatroid> {
        if chain.is_empty() {
            return input("a flag needs at least one matroid");
        }
        for i in 0..chain.len() - 1 {
            if chain[i].labels() != chain[i + 1].labels() {
                return input(format!("chain entries {i} and {} have different ground sets", i + 1));
            }
            if !chain[i].is_quotient(&chain[i + 1])? {
                return Err(Error::Structure(format!(
                    "chain entry {} is not a quotient of entry {i}",
                    i + 1
                )));
            }
        }
        let k = chain.len();
        let m1 = &chain[k - 1];
        if m1.rank() < 1 {
            return Err(Error::Structure("terminal matroid has rank 0".into()));
        }
        let terminally_strict = k == 1 || chain[k - 2].rank() > m1.rank();
        let terminally_connected = m1.n() > 0 && m1.is_connected()?;
        let terminally_loopless = m1.loops() == 0;
        Ok(FlagMatroid { chain, terminally_strict, terminally_connected, terminally_loopless })
    }

    pub fn chain(&self) -> &[Matroid] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// M_i with 1 ≤ i ≤ k counted from the bottom.
    pub fn level(&self, i: usize) -> &Matroid {
        &self.chain[self.chain.len() - i]
    }

    pub fn terminal(&self) -> &Matroid {
        self.level(1)
    }

    pub fn labels(&self) -> &[String] {
        self.chain[0].labels()
    }

    pub fn terminally_strict(&self) -> bool {
        self.terminally_strict
    }

    pub fn terminally_connected(&self) -> bool {
        self.terminally_connected
    }

    pub fn terminally_loopless(&self) -> bool {
        self.terminally_loopless
    }
}

pub fn build_flag(chain: Vec<Matroid>) -> Result<FlagMatroid> {
    FlagMatroid::new(chain)
}

/// (M, τM, …, τ^s M).
pub fn truncation_flag(m: &Matroid, s: usize) -> Result<FlagMatroid> {
    if s < 1 || s + 1 > m.rank() {
        return input(format!("truncation count {s} must lie in 1..={}", m.rank().saturating_sub(1)));
    }
    let chain = (0..=s).map(|t| m.truncate(t)).collect::<Result<Vec<_>>>()?;
    FlagMatroid::new(chain)
}

/// Level polynomials (top-down, as the chain) and their sum.
#[derive(Clone, Debug)]
pub struct FlagPoly {
    pub levels: Vec<Poly>,
    pub total: Poly,
}

/// Σ_i ζ_{M_i}; `coeffs[j]` belongs to chain entry j, `None` meaning all ones.
pub fn flag_poly(flag: &FlagMatroid, field: Field, coeffs: &[Option<BasisCoeffs>]) -> Result<FlagPoly> {
    if !coeffs.is_empty() && coeffs.len() != flag.len() {
        return input(format!("{} coefficient sets for a flag of length {}", coeffs.len(), flag.len()));
    }
    let levels = flag
        .chain()
        .iter()
        .enumerate()
        .map(|(j, m)| msp_build(m, field, coeffs.get(j).and_then(Option::as_ref)))
        .collect::<Result<Vec<_>>>()?;
    let total = Poly::sum(field, &levels);
    Ok(FlagPoly { levels, total })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagDc {
    pub edge: String,
    /// Smallest level where the edge is a coloop, k+1 if none.
    pub r: usize,
    #[serde(serialize_with = "ser_poly")]
    pub deletion: Poly,
    #[serde(serialize_with = "ser_poly")]
    pub contraction: Poly,
    pub reassembles: bool,
}

fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn ser_polys<S: serde::Serializer>(v: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

fn coloop_level(flag: &FlagMatroid, h: u32) -> usize {
    (1..=flag.len())
        .find(|&i| h & flag.level(i).coloops() != 0)
        .unwrap_or(flag.len() + 1)
}

/// ζ_𝓜 = ζ_{(𝓜∖e)≤r−1} + x_e ζ_{𝓜/e}.
pub fn flag_dc_split(fp: &FlagPoly, flag: &FlagMatroid, e: usize) -> Result<FlagDc> {
    if e >= flag.labels().len() {
        return input(format!("edge index {e} out of range"));
    }
    if flag.terminal().is_loop(e) {
        return precondition(format!("{} is a loop of the terminal matroid", flag.labels()[e]));
    }
    let label = flag.labels()[e].clone();
    let v = Var::edge(label.as_str());
    let field = fp.total.field();
    let r = coloop_level(flag, 1 << e);
    let mut deletion = Poly::zero(field);
    let mut contraction = Poly::zero(field);
    for i in 1..=flag.len() {
        let (a, b) = fp.levels[flag.len() - i].split_linear(&v)?;
        if i < r {
            deletion = &deletion + &a;
        } else if !a.is_zero() {
            return Err(Error::Structure(format!("level {i} has a term avoiding coloop {label}")));
        }
        contraction = &contraction + &b;
    }
    let rhs = &deletion + &(&Poly::var(field, v) * &contraction);
    let reassembles = rhs == fp.total;
    Ok(FlagDc { edge: label, r, deletion, contraction, reassembles })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagHandleReport {
    pub handle: Vec<String>,
    /// Smallest level where H contains a coloop, k+1 if none.
    pub r: usize,
    /// rank(M_1/H) ≥ 1, needed for the contraction part to be a flag polynomial.
    pub contraction_rank_ok: bool,
    #[serde(serialize_with = "ser_polys")]
    pub deletions: Vec<Poly>,
    #[serde(serialize_with = "ser_poly")]
    pub contraction: Poly,
    pub formula: bool,
    pub singular: SingularIdentity,
}

/// Handle formula for flags with f_e = x_e:
/// ζ_𝓜 = Σ_h x^{H∖h} ζ^h_{(𝓜∖H)<r} + x^H ζ_{𝓜/H}.
pub fn flag_handle_split(fp: &FlagPoly, flag: &FlagMatroid, h: u32) -> Result<FlagHandleReport> {
    let m1 = flag.terminal();
    if h == 0 || h & !m1.ground() != 0 {
        return input("handle must be a nonempty subset of the ground set");
    }
    if !m1.is_independent(h) {
        return precondition("H is dependent in the terminal matroid");
    }
    if h == m1.ground() || !m1.is_handle(h)? {
        return precondition("H is not a proper handle of the terminal matroid");
    }
    let field = fp.total.field();
    let labels: Vec<String> = bits(h).map(|i| flag.labels()[i].clone()).collect();
    let sigma = SingletonData::standard(flag.labels());
    let r = coloop_level(flag, h);
    let mut deletions = vec![Poly::zero(field); labels.len()];
    let mut contraction = Poly::zero(field);
    let zero = Rat::default();
    for i in 1..=flag.len() {
        let level = &fp.levels[flag.len() - i];
        let mi = flag.level(i);
        if i < r {
            let s = handle_split(level, mi, &sigma, h)?;
            for (d, x) in deletions.iter_mut().zip(&s.deletions) {
                *d = &*d + x;
            }
            contraction = &contraction + &s.contraction;
        } else {
            if h & !mi.coloops() != 0 {
                return Err(Error::Structure(format!("H mixes coloops and non-coloops at level {i}")));
            }
            let mut q = level.clone();
            for l in &labels {
                q = q.div_linear(&Var::edge(l.as_str()), &zero)?;
            }
            contraction = &contraction + &q;
        }
    }
    let split = HandleSplit { handle: labels.clone(), deletions, contraction };
    let formula = verify_handle_formula(&fp.total, &sigma, &split)?;
    let singular = singular_identity(&fp.total, &sigma, &split)?;
    Ok(FlagHandleReport {
        handle: labels,
        r,
        contraction_rank_ok: m1.contract_set(h).rank() >= 1,
        deletions: split.deletions,
        contraction: split.contraction,
        formula,
        singular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{graphic, uniform};
    use crate::Multigraph;

    fn x(l: &str) -> Poly {
        Poly::edge(Field::Q, l)
    }

    fn ones(flag: &FlagMatroid) -> FlagPoly {
        flag_poly(flag, Field::Q, &[]).unwrap()
    }

    #[test]
    fn build_and_truncate() {
        let f = truncation_flag(&uniform(3, 4).unwrap(), 1).unwrap();
        assert_eq!(f.chain(), &[uniform(3, 4).unwrap(), uniform(2, 4).unwrap()]);
        assert!(f.terminally_strict());
        let bad = build_flag(vec![uniform(1, 3).unwrap(), uniform(2, 3).unwrap()]);
        assert!(matches!(bad, Err(Error::Structure(_))));
        let c3 = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let f = truncation_flag(&graphic(&c3).unwrap(), 1).unwrap();
        assert_eq!(f.chain(), &[uniform(2, 3).unwrap(), uniform(1, 3).unwrap()]);
        assert!(f.terminally_connected());
    }

    #[test]
    fn flag_poly_examples() {
        let f = build_flag(vec![uniform(2, 3).unwrap(), uniform(1, 3).unwrap()]).unwrap();
        let p = ones(&f);
        let lin = Poly::sum(Field::Q, &[x("x1"), x("x2"), x("x3")]);
        let quad = Poly::sum(Field::Q, &[&x("x1") * &x("x2"), &x("x1") * &x("x3"), &x("x2") * &x("x3")]);
        assert_eq!(p.total, &quad + &lin);
        assert_eq!(p.total.min_part().unwrap(), lin);

        let u23 = uniform(2, 3).unwrap();
        let g = build_flag(vec![u23.clone(), u23.clone()]).unwrap();
        let neg: BasisCoeffs = u23.bases().iter().map(|&b| (b, Rat::from_integer((-1).into()))).collect();
        assert!(flag_poly(&g, Field::Q, &[None, Some(neg)]).unwrap().total.is_zero());
    }

    #[test]
    fn flag_dc_examples() {
        let f = build_flag(vec![uniform(2, 3).unwrap(), uniform(1, 3).unwrap()]).unwrap();
        let s = flag_dc_split(&ones(&f), &f, 0).unwrap();
        assert_eq!(s.r, 3);
        assert_eq!(s.deletion, Poly::sum(Field::Q, &[&x("x2") * &x("x3"), x("x2"), x("x3")]));
        assert_eq!(s.contraction, Poly::sum(Field::Q, &[x("x2"), x("x3"), Poly::one(Field::Q)]));
        assert!(s.reassembles);

        let g = build_flag(vec![uniform(2, 2).unwrap()]).unwrap();
        let s = flag_dc_split(&ones(&g), &g, 0).unwrap();
        assert_eq!(s.r, 1);
        assert!(s.deletion.is_zero());
        assert_eq!(s.contraction, x("x2"));
    }

    #[test]
    fn flag_handle_examples() {
        let f = build_flag(vec![uniform(2, 4).unwrap(), uniform(1, 4).unwrap()]).unwrap();
        let rep = flag_handle_split(&ones(&f), &f, 0b0001).unwrap();
        assert!(rep.formula);
        assert!(rep.singular.holds());
        assert!(!rep.contraction_rank_ok);

        let f = build_flag(vec![uniform(2, 3).unwrap(), uniform(1, 3).unwrap()]).unwrap();
        let rep = flag_handle_split(&ones(&f), &f, 0b001).unwrap();
        assert_eq!(rep.r, 3);
        assert!(rep.formula);
        assert!(rep.singular.holds());
        assert!(!rep.contraction_rank_ok);

        let f = truncation_flag(&uniform(3, 5).unwrap(), 1).unwrap();
        let rep = flag_handle_split(&ones(&f), &f, 0b00001).unwrap();
        assert!(rep.contraction_rank_ok && rep.formula && rep.singular.holds());
    }

    #[test]
    fn handle_with_coloops_at_top() {
        // x1 is a coloop of U_{3,3}, so r = 2
        let f = build_flag(vec![uniform(3, 3).unwrap(), uniform(2, 3).unwrap()]).unwrap();
        let rep = flag_handle_split(&ones(&f), &f, 0b001).unwrap();
        assert_eq!(rep.r, 2);
        assert!(rep.formula && rep.singular.holds());
    }
}
