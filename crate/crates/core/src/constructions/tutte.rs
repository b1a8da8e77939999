use num_traits::One;
use serde::Serialize;

use super::maximal_rank_poly;
use crate::error::Result;
use crate::matroid::{bits, Matroid};
use crate::poly::{Field, Mono, Poly, Rat, Var};

/// Σ_{A ⊆ E} p^{rank M − rank A} x^A in the edge variables plus `p`.
pub fn tutte_poly(m: &Matroid) -> Poly {
    let n = m.n();
    let mut vars: Vec<Var> = m.labels().iter().map(|l| Var::edge(l.clone())).collect();
    vars.push(Var::Tutte);
    let r = m.rank();
    let terms = (0..=m.ground())
        .map(|a| {
            let mut e = vec![0u32; n + 1];
            for i in bits(a) {
                e[i] = 1;
            }
            e[n] = (r - m.rank_of(a)) as u32;
            (Mono(e), Rat::one())
        })
        .collect();
    Poly::from_raw(Field::Q, vars, terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Loop,
    Coloop,
    Ordinary,
}

pub fn edge_kind(m: &Matroid, e: usize) -> EdgeKind {
    if m.is_loop(e) {
        EdgeKind::Loop
    } else if m.is_coloop(e) {
        EdgeKind::Coloop
    } else {
        EdgeKind::Ordinary
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TutteReport {
    pub edge: String,
    pub kind: EdgeKind,
    pub deletion_contraction: bool,
    pub p_zero_is_max_rank: bool,
    /// Z_M minus the recursion's right-hand side, when nonzero.
    pub dc_difference: Option<String>,
    pub p_zero_difference: Option<String>,
}

impl TutteReport {
    pub fn passed(&self) -> bool {
        self.deletion_contraction && self.p_zero_is_max_rank
    }
}

/// Checks the three-case recursion at `e` and the p = 0 specialisation.
pub fn tutte_identities(m: &Matroid, e: usize) -> Result<TutteReport> {
    let z = tutte_poly(m);
    let del = tutte_poly(&m.delete(e)?);
    let xe = Poly::edge(Field::Q, m.label(e));
    let one = Poly::one(Field::Q);
    let kind = edge_kind(m, e);
    let rhs = match kind {
        EdgeKind::Ordinary => &del + &(&xe * &tutte_poly(&m.contract(e)?)),
        EdgeKind::Coloop => &(&Poly::var(Field::Q, Var::Tutte) + &xe) * &del,
        EdgeKind::Loop => &(&one + &xe) * &del,
    };
    let d1 = &z - &rhs;
    let mut zero_p = std::collections::HashMap::new();
    zero_p.insert(Var::Tutte, Poly::zero(Field::Q));
    let d2 = &z.substitute(&zero_p)? - &maximal_rank_poly(m);
    Ok(TutteReport {
        edge: m.label(e).to_string(),
        kind,
        deletion_contraction: d1.is_zero(),
        p_zero_is_max_rank: d2.is_zero(),
        dc_difference: (!d1.is_zero()).then(|| d1.to_string()),
        p_zero_difference: (!d2.is_zero()).then(|| d2.to_string()),
    })
}
