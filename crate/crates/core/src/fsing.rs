//! Positive characteristic: Frobenius powers of the maximal ideal, Fedder
//! F-purity for hypersurfaces, split witnesses, and the reduction trace behind
//! strong F-regularity of matroid support polynomials.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::constructions::{msp_build, BasisCoeffs};
use crate::error::{input, precondition, Error, Result};
use crate::matroid::{bits, compress, Matroid};
use crate::poly::{fmt_rat, Field, Poly, Rat, Var};

/// Ceiling on the number of terms of any intermediate power.
pub const TERM_LIMIT: usize = 5_000_000;

/// The deformation theorem the trace relies on; trusted, not re-derived.
pub const DEFORMATION_CITATION: &str =
    "Ma-Polstra, Thm 5.11: strong F-regularity deforms from a hypersurface section x_e = 0";

fn prime_of(f: &Poly) -> Result<u32> {
    f.field().modulus().ok_or_else(|| Error::Input("expected a polynomial over F_p".into()))
}

/// f ∈ m^{[p^e]}: every monomial has some exponent ≥ p^e.
pub fn frobenius_membership(f: &Poly, e: u32) -> Result<bool> {
    let p = prime_of(f)? as u64;
    if e == 0 {
        return input("the Frobenius exponent must be at least 1");
    }
    let q = (0..e).try_fold(1u64, |a, _| a.checked_mul(p)).unwrap_or(u64::MAX);
    Ok(f.terms().all(|(m, _)| m.iter().any(|&k| k as u64 >= q)))
}

/// Drops every monomial with an exponent ≥ q, i.e. reduces modulo m^{[q]}.
fn bracket_reduce(f: &Poly, q: u32) -> Poly {
    let kept = f.terms().filter(|(m, _)| m.iter().all(|&k| k < q)).map(|(m, c)| (m.to_vec(), c.clone()));
    Poly::from_terms(f.field(), f.vars().to_vec(), kept).expect("same shape")
}

fn guarded_mul(a: &Poly, b: &Poly, q: u32, limit: usize) -> Result<Poly> {
    let r = bracket_reduce(&a.checked_mul(b)?, q);
    if r.num_terms() > limit {
        return Err(Error::Resource { what: "power expansion terms".into(), required: r.num_terms() as u128, budget: limit as u128 });
    }
    Ok(r)
}

/// c·f^{p−1} modulo m^{[p]}. Reduction commutes with products because
/// m^{[p]} is a monomial ideal, so truncating after each step is exact.
pub fn reduced_split_product(f: &Poly, c: &Poly, limit: usize) -> Result<Poly> {
    let p = prime_of(f)?;
    if c.field() != f.field() {
        return input("multiplier and polynomial live over different fields");
    }
    let mut k = p - 1;
    let mut base = bracket_reduce(f, p);
    let mut acc = bracket_reduce(c, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = guarded_mul(&acc, &base, p, limit)?;
        }
        k >>= 1;
        if k > 0 {
            base = guarded_mul(&base, &base, p, limit)?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub split: bool,
    /// Surviving monomial with the most variables, first in graded order among those.
    pub witness: Option<String>,
    pub surviving_terms: usize,
    /// Non-homogeneous input is checked anyway; this flags it.
    pub homogeneous: bool,
}

fn monomial_string(vars: &[Var], e: &[u32]) -> String {
    Poly::from_terms(Field::Q, vars.to_vec(), [(e.to_vec(), Rat::one())]).expect("monomial").to_string()
}

/// c·f^{p−1} ∉ m^{[p]}, with a witness monomial.
pub fn split_witness(f: &Poly, c: &Poly) -> Result<SplitReport> {
    split_witness_bounded(f, c, TERM_LIMIT)
}

pub fn split_witness_bounded(f: &Poly, c: &Poly, limit: usize) -> Result<SplitReport> {
    let r = reduced_split_product(f, c, limit)?;
    let support = |m: &[u32]| m.iter().filter(|&&k| k > 0).count();
    let mut best: Option<&[u32]> = None;
    for (m, _) in r.terms() {
        if best.is_none_or(|b| support(m) > support(b)) {
            best = Some(m);
        }
    }
    let witness = best.map(|m| monomial_string(r.vars(), m));
    Ok(SplitReport { split: witness.is_some(), witness, surviving_terms: r.num_terms(), homogeneous: f.is_homogeneous() })
}

/// Fedder's criterion for a hypersurface: f^{p−1} ∉ m^{[p]}.
pub fn fpure_check(f: &Poly) -> Result<SplitReport> {
    split_witness(f, &Poly::one(f.field()))
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeWitness {
    pub edge: String,
    /// The basis B avoiding the edge.
    pub basis: Vec<String>,
    /// x_e·x^{(p−1)B}
    pub witness: String,
    /// Its coefficient in x_e·χ^{p−1}, which is c_B^{p−1} = 1.
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind {
    /// Top handle {e}: χ restricted to x_e = 0 is the support polynomial of M∖e.
    DeformDelete { edge: String },
    /// Top handle of size ≥ 2 (a circuit counts as its own handle): pass to
    /// M⊥ by Cremona, delete e there, and come back, i.e. land on M/e.
    ContractViaDual { edge: String, handle: Vec<String> },
    BaseCase { case: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    #[serde(flatten)]
    pub kind: StepKind,
    pub premise: String,
    /// Minor reached after the step, as labels and bases.
    pub labels: Vec<String>,
    pub bases: Vec<Vec<String>>,
    pub poly: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FregCertificate {
    pub labels: Vec<String>,
    pub bases: Vec<Vec<String>>,
    pub p: u32,
    pub poly: String,
    pub fpure_witness: String,
    pub witnesses: Vec<EdgeWitness>,
    pub trace: Vec<TraceStep>,
    pub citation: String,
}

impl FregCertificate {
    /// Sizes of the ground sets along the trace, starting with M.
    pub fn sizes(&self) -> Vec<usize> {
        std::iter::once(self.labels.len()).chain(self.trace.iter().map(|s| s.labels.len())).collect()
    }

    /// Ends at a base case, and every reduction step shrinks the ground set.
    /// The closing base case records the minor it stops at, so it repeats the last size.
    pub fn terminates(&self) -> bool {
        let Some(StepKind::BaseCase { .. }) = self.trace.last().map(|s| &s.kind) else {
            return false;
        };
        let sizes = self.sizes();
        sizes[..sizes.len() - 1].windows(2).all(|w| w[1] < w[0])
    }
}

fn named_bases(m: &Matroid) -> Vec<Vec<String>> {
    m.bases().iter().map(|&b| bits(b).map(|i| m.label(i).to_string()).collect()).collect()
}

/// c_B ↦ c_{E∖B}; an involution.
pub fn cremona_transport(m: &Matroid, coeffs: &BasisCoeffs) -> BasisCoeffs {
    coeffs.iter().map(|(&b, c)| (m.ground() & !b, c.clone())).collect()
}

fn contract_coeffs(m: &Matroid, coeffs: &BasisCoeffs, e: usize) -> BasisCoeffs {
    let keep = m.ground() & !(1 << e);
    coeffs.iter().filter(|(b, _)| *b >> e & 1 == 1).map(|(&b, c)| (compress(b & keep, keep), c.clone())).collect()
}

fn delete_coeffs(m: &Matroid, coeffs: &BasisCoeffs, e: usize) -> BasisCoeffs {
    let keep = m.ground() & !(1 << e);
    coeffs.iter().filter(|(b, _)| *b >> e & 1 == 0).map(|(&b, c)| (compress(b, keep), c.clone())).collect()
}

/// Builds the certificate: split witnesses for every edge of M, then the
/// reduction trace down to a U_{1,n}. Any failed premise aborts with the step index.
pub fn strong_freg_certificate(m: &Matroid, coeffs: Option<&BasisCoeffs>, p: u32) -> Result<FregCertificate> {
    let field = Field::fp(p)?;
    if m.rank() == 0 {
        return precondition("the matroid has rank 0");
    }
    if !m.is_connected()? {
        return precondition("the matroid is not connected");
    }
    let coeffs: BasisCoeffs = match coeffs {
        Some(c) => c.clone(),
        None => m.bases().iter().map(|&b| (b, Rat::one())).collect(),
    };
    let chi = msp_build(m, field, Some(&coeffs))?;

    let pure = fpure_check(&chi)?;
    let Some(fpure_witness) = pure.witness else {
        return Err(Error::Structure("the support polynomial is not F-pure".into()));
    };

    let mut witnesses = Vec::new();
    for e in 0..m.n() {
        if m.is_coloop(e) {
            continue;
        }
        let xe = Poly::edge(field, m.label(e));
        let r = reduced_split_product(&chi, &xe, TERM_LIMIT)?;
        let b = *m.bases().iter().find(|&&b| b >> e & 1 == 0).expect("e is not a coloop");
        let mut exps = vec![0u32; r.vars().len()];
        for (i, v) in r.vars().iter().enumerate() {
            let l = v.label().expect("edge variable");
            let j = m.index_of(l).expect("edge of M");
            exps[i] = if j == e { 1 } else if b >> j & 1 == 1 { p - 1 } else { 0 };
        }
        let c = r.terms().find(|(mm, _)| *mm == exps.as_slice()).map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero);
        if c.is_zero() {
            return Err(Error::Structure(format!("no basis-monomial witness for edge {}", m.label(e))));
        }
        witnesses.push(EdgeWitness {
            edge: m.label(e).to_string(),
            basis: bits(b).map(|i| m.label(i).to_string()).collect(),
            witness: monomial_string(r.vars(), &exps),
            coefficient: fmt_rat(&c),
        });
    }

    let mut trace = Vec::new();
    let mut cur = m.clone();
    let mut cc = coeffs;
    loop {
        let step = trace.len() + 1;
        let fail = |msg: String| Error::Structure(format!("step {step}: {msg}"));
        if cur.rank() == 1 {
            let chi = msp_build(&cur, field, Some(&cc))?;
            if chi.total_degree() != Some(1) || cur.loops() != 0 {
                return Err(fail("rank-1 minor is not a U_{1,n}".into()));
            }
            let case = if cur.n() == 2 { "circuit of size 2".to_string() } else { format!("U_{{1,{}}}", cur.n()) };
            trace.push(TraceStep {
                kind: StepKind::BaseCase { case },
                premise: "support polynomial is a linear form with nonzero coefficients".into(),
                labels: cur.labels().to_vec(),
                bases: named_bases(&cur),
                poly: chi.to_string(),
            });
            break;
        }
        let handle = if cur.is_circuit_matroid() {
            cur.ground()
        } else {
            let filt = cur.handle_decomposition().map_err(|e| fail(e.to_string()))?;
            let k = filt.len();
            filt[k - 1] & !filt[k - 2]
        };
        let e = bits(handle).next().expect("nonempty handle");
        let (next, next_c, kind, premise) = if handle.count_ones() == 1 {
            let d = cur.delete(e)?;
            if !d.is_connected()? {
                return Err(fail(format!("M∖{} is not connected", cur.label(e))));
            }
            let dc = delete_coeffs(&cur, &cc, e);
            (d, dc, StepKind::DeformDelete { edge: cur.label(e).to_string() }, "top handle is a single element and M∖e is connected".to_string())
        } else {
            let dual = cur.dual();
            let tc = cremona_transport(&cur, &cc);
            if cremona_transport(&dual, &tc) != cc {
                return Err(fail("Cremona transport is not an involution".into()));
            }
            let chi_m = msp_build(&cur, field, Some(&cc))?;
            let vars: Vec<Var> = cur.labels().iter().map(|l| Var::edge(l.clone())).collect();
            let back = msp_build(&dual, field, Some(&tc))?.cremona(&vars)?;
            if back != chi_m {
                return Err(fail("χ_M ≠ x^E·χ_{M⊥}(x^{-1})".into()));
            }
            let con = cur.contract(e)?;
            if dual.delete(e)? != con.dual() {
                return Err(fail("M⊥∖e differs from (M/e)⊥".into()));
            }
            if !con.is_connected()? {
                return Err(fail(format!("M/{} is not connected", cur.label(e))));
            }
            let nc = contract_coeffs(&cur, &cc, e);
            let kind = StepKind::ContractViaDual {
                edge: cur.label(e).to_string(),
                handle: bits(handle).map(|i| cur.label(i).to_string()).collect(),
            };
            (con, nc, kind, "top handle has at least 2 elements; Cremona identity holds on the transported coefficients".to_string())
        };
        let chi_next = msp_build(&next, field, Some(&next_c))?;
        trace.push(TraceStep { kind, premise, labels: next.labels().to_vec(), bases: named_bases(&next), poly: chi_next.to_string() });
        cur = next;
        cc = next_c;
    }

    Ok(FregCertificate {
        labels: m.labels().to_vec(),
        bases: named_bases(m),
        p,
        poly: chi.to_string(),
        fpure_witness,
        witnesses,
        trace,
        citation: DEFORMATION_CITATION.to_string(),
    })
}
