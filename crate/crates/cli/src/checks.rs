//! Fixture checks. Each fixture names one identity or certificate and carries
//! its inputs inline; running it yields a JSON report and a pass flag.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use mtrdl::constructions::{
    basis_poly, dc_split, handle_split, is_matroidal, singular_identity, tutte_identities, verify_handle_formula,
};
use mtrdl::error::{Error, Result};
use mtrdl::feynman::{diagram_integrand, euler_identity_check, feynman_handle_check, kinematics_check, support_quotient_check};
use mtrdl::flags::{flag_handle_split, flag_poly};
use mtrdl::json::{
    singleton_data_build, CoeffsJson, FlagJson, GraphJson, MatroidJson, PolyJson, SingletonDataJson,
};
use mtrdl::matroid::mask_of;
use mtrdl::{fsing, jets, Field, Matroid, Poly, SingletonData};

fn yes() -> bool {
    true
}

fn eight() -> u32 {
    8
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Fixture {
    /// Handle formula; ζ defaults to Ψ_M and σ to {x_e, 1}.
    Handle {
        matroid: MatroidJson,
        #[serde(default)]
        poly: Option<PolyJson>,
        #[serde(default)]
        sigma: Option<SingletonDataJson>,
        handle: Vec<usize>,
    },
    Singular {
        matroid: MatroidJson,
        #[serde(default)]
        poly: Option<PolyJson>,
        #[serde(default)]
        sigma: Option<SingletonDataJson>,
        handle: Vec<usize>,
    },
    Dc {
        matroid: MatroidJson,
        #[serde(default)]
        poly: Option<PolyJson>,
        #[serde(default)]
        sigma: Option<SingletonDataJson>,
        edge: usize,
    },
    Matroidal {
        matroid: MatroidJson,
        #[serde(default)]
        poly: Option<PolyJson>,
        #[serde(default)]
        sigma: Option<SingletonDataJson>,
        #[serde(default = "yes")]
        expect: bool,
    },
    Tutte {
        matroid: MatroidJson,
    },
    /// Jet restriction to Γ for one edge, or every non-(co)loop edge when omitted.
    Gamma {
        matroid: MatroidJson,
        #[serde(default)]
        poly: Option<PolyJson>,
        #[serde(default)]
        sigma: Option<SingletonDataJson>,
        #[serde(default)]
        edge: Option<usize>,
        m: u32,
    },
    FlagHandle {
        flag: FlagJson,
        handle: Vec<usize>,
    },
    /// Handle formula for the diagram integrand; the first admissible handle when omitted.
    FeynmanHandle {
        graph: GraphJson,
        #[serde(default)]
        handle: Option<Vec<usize>>,
    },
    Euler {
        graph: GraphJson,
    },
    SupportQuotient {
        graph: GraphJson,
    },
    Kinematics {
        graph: GraphJson,
        #[serde(default = "yes")]
        expect: bool,
    },
    JetsCount {
        poly: PolyJson,
        m: u32,
        p: u32,
        #[serde(default)]
        expect: Option<u64>,
    },
    /// Inclusion–exclusion reference against brute force.
    Boolean {
        k: usize,
        n: usize,
        m: u32,
        p: u32,
    },
    ProductCover {
        f: PolyJson,
        g: PolyJson,
        m: u32,
        p: u32,
    },
    Probe {
        poly: PolyJson,
        m: u32,
        primes: Vec<u32>,
        #[serde(default = "eight")]
        bound: u32,
    },
    Certify {
        matroid: MatroidJson,
        p: u32,
        #[serde(default)]
        coeffs: Option<CoeffsJson>,
    },
    Split {
        poly: PolyJson,
        #[serde(default)]
        edge: Option<String>,
        #[serde(default = "yes")]
        expect: bool,
    },
}

impl Fixture {
    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Handle { .. } => "handle",
            Fixture::Singular { .. } => "singular",
            Fixture::Dc { .. } => "dc",
            Fixture::Matroidal { .. } => "matroidal",
            Fixture::Tutte { .. } => "tutte",
            Fixture::Gamma { .. } => "gamma",
            Fixture::FlagHandle { .. } => "flag-handle",
            Fixture::FeynmanHandle { .. } => "feynman-handle",
            Fixture::Euler { .. } => "euler",
            Fixture::SupportQuotient { .. } => "support-quotient",
            Fixture::Kinematics { .. } => "kinematics",
            Fixture::JetsCount { .. } => "jets-count",
            Fixture::Boolean { .. } => "boolean",
            Fixture::ProductCover { .. } => "product-cover",
            Fixture::Probe { .. } => "probe",
            Fixture::Certify { .. } => "certify",
            Fixture::Split { .. } => "split",
        }
    }
}

/// A report plus whether the check passed.
pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

fn outcome(report: Value, pass: bool) -> Result<Outcome> {
    Ok(Outcome { report, pass })
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable report")
}

fn setup(m: &MatroidJson, poly: &Option<PolyJson>, sigma: &Option<SingletonDataJson>) -> Result<(Matroid, Poly, SingletonData)> {
    let m = m.build()?;
    let zeta = match poly {
        Some(p) => p.build()?,
        None => basis_poly(&m),
    };
    let sigma = match sigma {
        Some(s) => singleton_data_build(s)?,
        None => SingletonData::standard(m.labels()),
    };
    Ok((m, zeta, sigma))
}

fn handle_mask(m_n: usize, h: &[usize]) -> Result<u32> {
    if let Some(i) = h.iter().find(|&&i| i >= m_n) {
        return Err(Error::Input(format!("handle element {i} out of range")));
    }
    Ok(mask_of(h))
}

pub fn run(fx: &Fixture, budget: u128) -> Result<Outcome> {
    match fx {
        Fixture::Handle { matroid, poly, sigma, handle } => {
            let (m, z, s) = setup(matroid, poly, sigma)?;
            let split = handle_split(&z, &m, &s, handle_mask(m.n(), handle)?)?;
            let ok = verify_handle_formula(&z, &s, &split)?;
            outcome(json!({"formula": ok, "split": to_value(&split)}), ok)
        }
        Fixture::Singular { matroid, poly, sigma, handle } => {
            let (m, z, s) = setup(matroid, poly, sigma)?;
            let split = handle_split(&z, &m, &s, handle_mask(m.n(), handle)?)?;
            let id = singular_identity(&z, &s, &split)?;
            outcome(json!({"aggregate": id.aggregate, "per_edge": id.per_edge}), id.holds())
        }
        Fixture::Dc { matroid, poly, sigma, edge } => {
            let (m, z, s) = setup(matroid, poly, sigma)?;
            let (del, con) = dc_split(&z, &m, &s, *edge)?;
            let f = s.f_poly(Field::Q, m.label(*edge))?;
            let ok = &del + &(&f * &con) == z;
            outcome(json!({"deletion": del.to_string(), "contraction": con.to_string(), "reassembles": ok}), ok)
        }
        Fixture::Matroidal { matroid, poly, sigma, expect } => {
            let (m, z, s) = setup(matroid, poly, sigma)?;
            let r = is_matroidal(&z, &m, &s)?;
            outcome(json!({"matroidal": r}), r == *expect)
        }
        Fixture::Tutte { matroid } => {
            let m = matroid.build()?;
            let reps = (0..m.n()).map(|e| tutte_identities(&m, e)).collect::<Result<Vec<_>>>()?;
            let ok = reps.iter().all(|r| r.passed());
            outcome(json!({"poly": mtrdl::tutte_poly(&m).to_string(), "edges": to_value(&reps)}), ok)
        }
        Fixture::Gamma { matroid, poly, sigma, edge, m: order } => {
            let (m, z, s) = setup(matroid, poly, sigma)?;
            let edges: Vec<usize> = match edge {
                Some(e) => vec![*e],
                None => (0..m.n()).filter(|&e| !m.is_loop(e) && !m.is_coloop(e)).collect(),
            };
            let mut rows = Vec::new();
            let mut ok = true;
            for e in edges {
                let r = jets::gamma_restriction_check(&z, &m, &s, e, *order)?;
                ok &= r;
                rows.push(json!({"edge": m.label(e), "holds": r}));
            }
            outcome(json!({"m": order, "edges": rows}), ok)
        }
        Fixture::FlagHandle { flag, handle } => {
            let fl = flag.build()?;
            let fp = flag_poly(&fl, Field::Q, &[])?;
            let r = flag_handle_split(&fp, &fl, handle_mask(fl.labels().len(), handle)?)?;
            let ok = r.formula && r.singular.holds();
            outcome(to_value(&r), ok)
        }
        Fixture::FeynmanHandle { graph, handle } => {
            let f = diagram_integrand(&graph.diagram()?)?;
            let n = f.n().clone();
            let candidates: Vec<u32> = match handle {
                Some(h) => vec![handle_mask(n.n(), h)?],
                None => (1..=n.n()).flat_map(|k| (0..n.n()).combinations(k).map(|c| mask_of(&c))).collect(),
            };
            for h in candidates {
                match feynman_handle_check(&f, h) {
                    Ok(r) => return outcome(to_value(&r), r.formula),
                    Err(Error::Precondition(_)) if handle.is_none() => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::Precondition("no admissible handle".into()))
        }
        Fixture::Euler { graph } => {
            let f = diagram_integrand(&graph.diagram()?)?;
            let ok = euler_identity_check(&f);
            outcome(json!({"integrand": f.poly().to_string(), "euler": ok}), ok)
        }
        Fixture::SupportQuotient { graph } => {
            let r = support_quotient_check(&graph.diagram()?)?;
            outcome(to_value(&r), r.passed())
        }
        Fixture::Kinematics { graph, expect } => {
            let r = kinematics_check(&graph.diagram()?)?;
            outcome(to_value(&r), r.gate() == *expect)
        }
        Fixture::JetsCount { poly, m, p, expect } => {
            let count = jets_count(&poly.build()?, *m, *p, budget)?;
            outcome(json!({"count": count}), expect.is_none_or(|x| x as u128 == count))
        }
        Fixture::Boolean { k, n, m, p } => {
            let reference = jets::boolean_jet_reference(*k, *n, *m, *p, budget)?;
            let field = Field::Q;
            let labels: Vec<String> = (1..=*n).map(|i| format!("x{i}")).collect();
            let vars: Vec<mtrdl::Var> = labels.iter().map(|l| mtrdl::Var::edge(l.clone())).collect();
            let f = Poly::edge_monomial(field, labels[..*k].iter().map(String::as_str)).in_universe(&vars)?;
            let brute = jets_count(&f, *m, *p, budget)?;
            outcome(json!({"reference": reference, "brute_force": brute}), reference == brute)
        }
        Fixture::ProductCover { f, g, m, p } => {
            let ok = jets::product_cover_check(&f.build()?, &g.build()?, *m, *p, budget)?;
            outcome(json!({"covered": ok}), ok)
        }
        Fixture::Probe { poly, m, primes, bound } => {
            let r = jets::dimension_probe(&poly.build()?, *m, primes, *bound, budget)?;
            outcome(to_value(&r), r.consistent)
        }
        Fixture::Certify { matroid, p, coeffs } => {
            let m = matroid.build()?;
            let c = match coeffs {
                Some(c) => c.build()?,
                None => None,
            };
            let cert = fsing::strong_freg_certificate(&m, c.as_ref(), *p)?;
            let ok = cert.terminates();
            outcome(to_value(&cert), ok)
        }
        Fixture::Split { poly, edge, expect } => {
            let f = poly.build()?;
            let c = match edge {
                Some(l) => Poly::edge(f.field(), l),
                None => Poly::one(f.field()),
            };
            let r = fsing::split_witness(&f, &c)?;
            outcome(to_value(&r), r.split == *expect)
        }
    }
}

/// Points of the m-jets of V(f) over F_p in the jet ring on f's variables.
pub fn jets_count(f: &Poly, m: u32, p: u32, budget: u128) -> Result<u128> {
    let ring = jets::JetRing::of(f, m)?;
    let sys = jets::jet_system(f, m, Field::fp(p)?)?;
    jets::count_points(&sys, &ring.vars(), p, budget)
}
