//! Jet schemes: the prolongation derivation, jet generators, restriction
//! identities and exhaustive finite-field point counts.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{dc_split, SingletonData};
use crate::error::{input, Error, Result};
use crate::feynman::FeynmanIntegrand;
use crate::flags::{flag_dc_split, FlagMatroid, FlagPoly};
use crate::matroid::Matroid;
use crate::poly::{fmt_rat, rat_mod, Field, Poly, Rat, Var};

/// Default point-count budget when `MTRDL_BUDGET` is unset.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// `MTRDL_BUDGET` if it parses (plain integer or `1e9` style), else the default.
pub fn default_budget() -> u128 {
    std::env::var("MTRDL_BUDGET").ok().and_then(|s| parse_budget(&s)).unwrap_or(DEFAULT_BUDGET)
}

pub fn parse_budget(s: &str) -> Option<u128> {
    let s = s.trim();
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u128 = m.parse().ok()?;
        let e: u32 = e.parse().ok()?;
        return m.checked_mul(10u128.checked_pow(e)?);
    }
    s.parse().ok()
}

/// Variables x_e^{(q)}, 0 ≤ q ≤ m, over base edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetRing {
    pub labels: Vec<String>,
    pub m: u32,
}

impl JetRing {
    pub fn new(labels: Vec<String>, m: u32) -> JetRing {
        JetRing { labels, m }
    }

    /// Base edges of `f`'s universe.
    pub fn of(f: &Poly, m: u32) -> Result<JetRing> {
        let mut labels = Vec::new();
        for v in f.vars() {
            match v {
                Var::Edge { label, level: 0 } => labels.push(label.clone()),
                Var::Edge { .. } => return input(format!("{v} is not a level-0 variable")),
                Var::Tutte => return input("the Tutte variable cannot be prolonged"),
            }
        }
        Ok(JetRing { labels, m })
    }

    /// Level-major: all level-0 variables, then level 1, ...
    pub fn vars(&self) -> Vec<Var> {
        (0..=self.m).flat_map(|q| self.labels.iter().map(move |l| Var::jet(l.clone(), q))).collect()
    }
}

/// One application of D, with D x^{(q)} = x^{(q+1)}.
fn derive(f: &Poly, top: u32) -> Result<Poly> {
    let field = f.field();
    let mut out = Poly::zero(field);
    for v in f.used_vars() {
        if v == Var::Tutte {
            return input("the Tutte variable cannot be prolonged");
        }
        let next = v.level() + 1;
        if next > top {
            return input(format!("prolongation of {v} exceeds jet order {top}"));
        }
        let d = f.derivative(&v)?;
        out = &out + &(&d * &Poly::var(field, v.at_level(next)));
    }
    Ok(out)
}

/// D^q f inside the jet ring R.
pub fn prolong(f: &Poly, q: u32, r: &JetRing) -> Result<Poly> {
    if q > r.m {
        return input(format!("q = {q} exceeds jet order {}", r.m));
    }
    let mut g = f.clone();
    for _ in 0..q {
        g = derive(&g, r.m)?;
    }
    Ok(g)
}

/// [f, Df, …, D^m f].
pub fn jet_generators(f: &Poly, m: u32) -> Result<Vec<Poly>> {
    let r = JetRing::new(Vec::new(), m);
    let mut out = vec![f.clone()];
    for _ in 0..m {
        let next = derive(out.last().expect("nonempty"), r.m)?;
        out.push(next);
    }
    Ok(out)
}

fn factorial(k: u32) -> Rat {
    Rat::from_integer((1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i)))
}

/// Arc generators: the t^q coefficients of f(Σ_k x^{(k)} t^k), i.e. D^q f / q!
/// after rescaling x^{(k)} ↦ k!·x^{(k)}. Computed over Q, then mapped to `field`.
/// These cut out the jet scheme in every characteristic.
pub fn jet_system(f: &Poly, m: u32, field: Field) -> Result<Vec<Poly>> {
    let fq = f.to_field(Field::Q)?;
    let ring = JetRing::of(&fq, m)?;
    let gens = jet_generators(&fq, m)?;
    let mut scale = HashMap::new();
    for v in ring.vars() {
        if v.level() > 1 {
            scale.insert(v.clone(), Poly::var(Field::Q, v.clone()).scale(&factorial(v.level())));
        }
    }
    gens.iter()
        .enumerate()
        .map(|(q, g)| {
            let h = g.substitute(&scale)?.scale(&factorial(q as u32).recip());
            h.to_field(field)
        })
        .collect()
}

fn gamma_substitution(labels: &[&str], root: &[Rat], m: u32) -> HashMap<Var, Poly> {
    let mut s = HashMap::new();
    for (l, c) in labels.iter().zip(root) {
        s.insert(Var::edge(*l), Poly::constant(Field::Q, c.clone()));
        for q in 1..=m {
            s.insert(Var::jet(*l, q), Poly::zero(Field::Q));
        }
    }
    s
}

fn restricted_match(full: &Poly, del: &Poly, label: &str, root: Rat, m: u32) -> Result<bool> {
    let sub = gamma_substitution(&[label], &[root], m);
    let r = JetRing::new(Vec::new(), m);
    for q in 0..=m {
        let a = prolong(full, q, &r)?.substitute(&sub)?;
        let b = prolong(del, q, &r)?;
        if a != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// On Γ = {x_e = −c_e, x_e^{(q)} = 0 (q ≥ 1)}, D^q ζ_M = D^q ζ_{M∖e} for q ≤ m.
pub fn gamma_restriction_check(zeta: &Poly, m: &Matroid, sigma: &SingletonData, e: usize, order: u32) -> Result<bool> {
    if m.is_loop(e) || m.is_coloop(e) {
        return input(format!("{} is a loop or coloop", m.label(e)));
    }
    let (del, _) = dc_split(zeta, m, sigma, e)?;
    let c = sigma.get(m.label(e))?.f.clone();
    restricted_match(zeta, &del, m.label(e), -c, order)
}

/// Flag version: on Γ the jets of ζ_𝓜 agree with those of ζ_{(𝓜∖e)≤r−1}.
pub fn gamma_restriction_flag(fp: &FlagPoly, flag: &FlagMatroid, e: usize, order: u32) -> Result<bool> {
    let s = flag_dc_split(fp, flag, e)?;
    restricted_match(&fp.total, &s.deletion, &s.edge, Rat::zero(), order)
}

/// Feynman version: Feyn restricted to Γ matches Feyn(ζ_{N∖e}, Δ^{F∖e}, ξ_{M∖e} or 0).
pub fn gamma_restriction_feyn(f: &FeynmanIntegrand, e: usize, order: u32) -> Result<bool> {
    let del = f.deletion(e)?;
    restricted_match(f.poly(), &del, f.n().label(e), Rat::zero(), order)
}

/// D^m of the monomial ∏ x_{i_k} against Σ binom(m; j_1,…,j_d) ∏ x_{i_k}^{(j_k)}.
pub fn multinomial_check(factors: &[Var], m: u32) -> Result<bool> {
    let field = Field::Q;
    let mono = Poly::product(field, &factors.iter().map(|v| Poly::var(field, v.clone())).collect::<Vec<_>>());
    let lhs = prolong(&mono, m, &JetRing::new(Vec::new(), m))?;
    let d = factors.len();
    let mut rhs = Poly::zero(field);
    if d == 0 {
        return Ok(lhs == if m == 0 { Poly::one(field) } else { Poly::zero(field) });
    }
    // compositions of m into d ordered parts
    for bars in (0..m + d as u32 - 1).combinations(d - 1) {
        let mut parts = Vec::with_capacity(d);
        let mut prev: i64 = -1;
        for &b in &bars {
            parts.push((b as i64 - prev - 1) as u32);
            prev = b as i64;
        }
        parts.push((m as i64 + d as i64 - 2 - prev) as u32);
        let coeff = parts.iter().fold(factorial(m), |a, &j| a / factorial(j));
        let term = Poly::product(
            field,
            &factors.iter().zip(&parts).map(|(v, &j)| Poly::var(field, v.at_level(j))).collect::<Vec<_>>(),
        );
        rhs = &rhs + &term.scale(&coeff);
    }
    Ok(lhs == rhs)
}

/// A polynomial over F_p compiled for fast evaluation.
struct Compiled {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

fn compile(f: &Poly, vars: &[Var], p: u32) -> Result<Compiled> {
    let idx: Vec<usize> = f
        .vars()
        .iter()
        .map(|v| vars.iter().position(|w| w == v).ok_or_else(|| Error::Input(format!("{v} is outside the point space"))))
        .collect::<Result<_>>()?;
    let mut terms = Vec::new();
    for (e, c) in f.terms() {
        let Some(c) = rat_mod(c, p) else {
            return input(format!("coefficient {} is not defined mod {p}", fmt_rat(c)));
        };
        if c == 0 {
            continue;
        }
        let mono = e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (idx[i], k)).collect();
        terms.push((c, mono));
    }
    Ok(Compiled { terms })
}

impl Compiled {
    fn vanishes(&self, x: &[u64], p: u64) -> bool {
        let mut s = 0u64;
        for (c, mono) in &self.terms {
            let mut t = *c;
            for &(i, k) in mono {
                for _ in 0..k {
                    t = t * x[i] % p;
                }
                if t == 0 {
                    break;
                }
            }
            s = (s + t) % p;
        }
        s == 0
    }
}

fn space_size(p: u32, nv: usize, budget: u128, what: &str) -> Result<u128> {
    let mut total: u128 = 1;
    for _ in 0..nv {
        total = total.saturating_mul(p as u128);
    }
    if total > budget {
        return Err(Error::Resource { what: what.to_string(), required: total, budget });
    }
    Ok(total)
}

/// Calls `visit` on every point of F_p^nv, in parallel over a prefix of the coordinates.
fn for_each_point<T: Send>(
    p: u32,
    nv: usize,
    init: impl Fn() -> T + Sync,
    visit: impl Fn(&mut T, &[u64]) + Sync,
    merge: impl Fn(T, T) -> T + Sync + Send,
) -> T {
    let pp = p as u64;
    let mut split = 0;
    let mut chunks: u64 = 1;
    while split < nv && chunks < 256 {
        chunks *= pp;
        split += 1;
    }
    (0..chunks)
        .into_par_iter()
        .fold(&init, |mut acc, mut prefix| {
            let mut x = vec![0u64; nv];
            for slot in x.iter_mut().take(split) {
                *slot = prefix % pp;
                prefix /= pp;
            }
            loop {
                visit(&mut acc, &x);
                let mut i = split;
                while i < nv {
                    x[i] += 1;
                    if x[i] < pp {
                        break;
                    }
                    x[i] = 0;
                    i += 1;
                }
                if i == nv {
                    break;
                }
            }
            acc
        })
        .reduce(&init, &merge)
}

/// Exact number of common zeros in F_p^vars, by exhaustive enumeration.
pub fn count_points(system: &[Poly], vars: &[Var], p: u32, budget: u128) -> Result<u128> {
    let field = Field::fp(p)?;
    space_size(p, vars.len(), budget, "point count")?;
    let comp = system
        .iter()
        .map(|f| compile(&f.to_field(field)?, vars, p))
        .collect::<Result<Vec<_>>>()?;
    let pp = p as u64;
    Ok(for_each_point(
        p,
        vars.len(),
        || 0u128,
        |n, x| {
            if comp.iter().all(|c| c.vanishes(x, pp)) {
                *n += 1;
            }
        },
        |a, b| a + b,
    ))
}

/// All variables of the system, ordered.
pub fn system_vars(system: &[Poly]) -> Vec<Var> {
    let set: BTreeSet<Var> = system.iter().flat_map(|f| f.vars().iter().cloned()).collect();
    set.into_iter().collect()
}

/// Points of the m-jets of x_1⋯x_k in (m+1)n variables over F_p, by
/// inclusion–exclusion over the components {x_i^{(0)} = ⋯ = x_i^{(v_i)} = 0},
/// Σ (v_i + 1) = m + 1, −1 ≤ v_i ≤ m.
pub fn boolean_jet_reference(k: usize, n: usize, m: u32, p: u32, budget: u128) -> Result<u128> {
    Field::fp(p)?;
    if k > n {
        return input("k must not exceed n");
    }
    if k == 0 {
        // the constant 1 has no jets
        return Ok(0);
    }
    let comps: Vec<Vec<i64>> = compositions(m as i64 + 1, k).map(|c| c.iter().map(|&z| z - 1).collect()).collect();
    let subsets = 1u128.checked_shl(comps.len() as u32).unwrap_or(u128::MAX);
    if subsets > budget || comps.len() > 40 {
        return Err(Error::Resource { what: "inclusion-exclusion".into(), required: subsets, budget });
    }
    let total_vars = (m as u64 + 1) * n as u64;
    let pw = |e: u64| BigInt::from(p).pow(e as u32);
    let mut acc = BigInt::zero();
    for s in 1u64..(1u64 << comps.len()) {
        let mut mx = vec![-1i64; k];
        for (j, c) in comps.iter().enumerate() {
            if s >> j & 1 == 1 {
                for (a, &b) in mx.iter_mut().zip(c) {
                    *a = (*a).max(b);
                }
            }
        }
        let fixed: u64 = mx.iter().map(|&v| (v + 1) as u64).sum();
        let term = pw(total_vars - fixed);
        if s.count_ones() % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_u128().ok_or_else(|| Error::Resource { what: "count overflow".into(), required: u128::MAX, budget })
}

/// Ordered k-tuples of nonnegative integers summing to `total`.
fn compositions(total: i64, k: usize) -> impl Iterator<Item = Vec<i64>> {
    (0..total + k as i64 - 1).combinations(k - 1).map(move |bars| {
        let mut parts = Vec::with_capacity(k);
        let mut prev = -1;
        for &b in &bars {
            parts.push(b - prev - 1);
            prev = b;
        }
        parts.push(total + k as i64 - 2 - prev);
        parts
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub p: u32,
    pub count: String,
    pub reference: String,
    pub ratio: String,
    pub ratio_f64: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub m: u32,
    pub expected_dim: u64,
    pub rows: Vec<ProbeRow>,
    /// every ratio lies in [1/c, c]
    pub consistent: bool,
}

/// Compares N_p = #L_m(V(f))(F_p) with p^{(m+1)(n−1)}. A heuristic, never a proof.
pub fn dimension_probe(f: &Poly, m: u32, primes: &[u32], c: u32, budget: u128) -> Result<ProbeReport> {
    let ring = JetRing::of(f, m)?;
    let n = ring.labels.len();
    if n == 0 {
        return input("probe needs at least one variable");
    }
    let vars = ring.vars();
    let expected_dim = (m as u64 + 1) * (n as u64 - 1);
    let mut rows = Vec::new();
    let lo = Rat::new(1.into(), c.into());
    let hi = Rat::from_integer(c.into());
    let mut consistent = true;
    for &p in primes {
        let sys = jet_system(f, m, Field::fp(p)?)?;
        let count = count_points(&sys, &vars, p, budget)?;
        let reference = BigInt::from(p).pow(expected_dim as u32);
        let ratio = Rat::new(BigInt::from(count), reference.clone());
        consistent &= ratio >= lo && ratio <= hi;
        rows.push(ProbeRow {
            p,
            count: count.to_string(),
            reference: reference.to_string(),
            ratio: fmt_rat(&ratio),
            ratio_f64: ratio.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ProbeReport { n, m, expected_dim, rows, consistent })
}

/// Every F_p point of the jets of fg lies on the jets of f up to order t and
/// of g up to order m−t−1, for some −1 ≤ t ≤ m.
pub fn product_cover_check(f: &Poly, g: &Poly, m: u32, p: u32, budget: u128) -> Result<bool> {
    let field = Field::fp(p)?;
    let fg = f * g;
    let base = system_vars(&[fg.clone(), f.clone(), g.clone()]);
    let fg_ext = fg.in_universe(&base)?;
    let ring = JetRing::of(&fg_ext, m)?;
    let vars = ring.vars();
    space_size(p, vars.len(), budget, "product cover")?;
    let comp = |sys: Vec<Poly>| sys.iter().map(|h| compile(h, &vars, p)).collect::<Result<Vec<_>>>();
    let prod = comp(jet_system(&fg_ext, m, field)?)?;
    let fs = comp(jet_system(&f.in_universe(&base)?, m, field)?)?;
    let gs = comp(jet_system(&g.in_universe(&base)?, m, field)?)?;
    let pp = p as u64;
    let m = m as i64;
    Ok(for_each_point(
        p,
        vars.len(),
        || true,
        |ok, x| {
            if !*ok || !prod.iter().all(|c| c.vanishes(x, pp)) {
                return;
            }
            let covered = (-1..=m).any(|t| {
                fs.iter().take((t + 1) as usize).all(|c| c.vanishes(x, pp))
                    && gs.iter().take((m - t) as usize).all(|c| c.vanishes(x, pp))
            });
            *ok = covered;
        },
        |a, b| a && b,
    ))
}

/// The zero extension (α, 0, …, 0) of a point of V(f) kills every arc generator.
pub fn zero_extension_check(f: &Poly, alpha: &HashMap<Var, Rat>, m: u32, field: Field) -> Result<bool> {
    let ff = f.to_field(field)?;
    if !ff.evaluate(alpha)?.is_zero() {
        return input("α is not a point of V(f)");
    }
    let ring = JetRing::of(&ff, m)?;
    let mut point = alpha.clone();
    for v in ring.vars().into_iter().filter(|v| v.level() > 0) {
        point.insert(v, Rat::zero());
    }
    for g in jet_system(f, m, field)? {
        let gv = g.in_universe(&ring.vars())?;
        if !gv.evaluate(&point)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
