//! JSON wire formats. Rationals travel as strings "a/b"; integers are also accepted on input.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constructions::{BasisCoeffs, DPart, Singleton, SingletonData};
use crate::error::{input, Error, Result};
use crate::feynman::FeynmanDiagram;
use crate::flags::FlagMatroid;
use crate::graph::Multigraph;
use crate::matroid::{bits, mask_of, Matroid};
use crate::poly::{fmt_rat, parse_rat, Field, Poly, Rat, Var};

/// A rational as it appears on the wire.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatJson {
    Str(String),
    Int(i64),
}

impl RatJson {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            RatJson::Str(s) => parse_rat(s),
            RatJson::Int(i) => Ok(Rat::from_integer((*i).into())),
        }
    }

    pub fn of(c: &Rat) -> RatJson {
        RatJson::Str(fmt_rat(c))
    }
}

impl Default for RatJson {
    fn default() -> Self {
        RatJson::Int(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub labels: Vec<String>,
    pub bases: Vec<Vec<usize>>,
}

impl MatroidJson {
    pub fn of(m: &Matroid) -> MatroidJson {
        MatroidJson { labels: m.labels().to_vec(), bases: m.bases().iter().map(|&b| bits(b).collect()).collect() }
    }

    pub fn build(&self) -> Result<Matroid> {
        Matroid::from_index_sets(self.labels.clone(), &self.bases)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub external: Vec<usize>,
    #[serde(default)]
    pub momenta: Vec<Vec<RatJson>>,
    #[serde(default)]
    pub masses: Vec<RatJson>,
}

impl GraphJson {
    pub fn graph(&self) -> Result<Multigraph> {
        let edges = self.edges.iter().map(|e| (e[0], e[1])).collect();
        match &self.labels {
            Some(l) => Multigraph::with_labels(self.vertices, edges, l.clone()),
            None => Multigraph::new(self.vertices, edges),
        }
    }

    pub fn diagram(&self) -> Result<FeynmanDiagram> {
        let momenta = self.momenta.iter().map(|p| p.iter().map(RatJson::to_rat).collect()).collect::<Result<_>>()?;
        let masses = self.masses.iter().map(RatJson::to_rat).collect::<Result<_>>()?;
        FeynmanDiagram::new(self.graph()?, self.external.clone(), momenta, masses)
    }

    pub fn of(d: &FeynmanDiagram) -> GraphJson {
        let g = d.graph();
        GraphJson {
            vertices: g.vertices(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            labels: Some(g.labels().to_vec()),
            external: d.external().to_vec(),
            momenta: d.momenta().iter().map(|p| p.iter().map(RatJson::of).collect()).collect(),
            masses: d.masses().iter().map(RatJson::of).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldTag {
    Fp(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Name(String),
    Prime(FieldTag),
}

impl FieldJson {
    pub fn field(&self) -> Result<Field> {
        match self {
            FieldJson::Name(s) if s == "Q" => Ok(Field::Q),
            FieldJson::Name(s) => input(format!("unknown field {s:?}")),
            FieldJson::Prime(FieldTag::Fp(p)) => Field::fp(*p),
        }
    }

    pub fn of(f: Field) -> FieldJson {
        match f {
            Field::Q => FieldJson::Name("Q".into()),
            Field::Fp(p) => FieldJson::Prime(FieldTag::Fp(p)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: RatJson,
    pub e: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub field: FieldJson,
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn of(p: &Poly) -> PolyJson {
        PolyJson {
            field: FieldJson::of(p.field()),
            vars: p.vars().iter().map(|v| v.to_string()).collect(),
            terms: p.terms().map(|(e, c)| TermJson { c: RatJson::of(c), e: e.to_vec() }).collect(),
        }
    }

    pub fn build(&self) -> Result<Poly> {
        let vars = self.vars.iter().map(|s| Var::parse(s)).collect::<Result<Vec<_>>>()?;
        let terms = self.terms.iter().map(|t| Ok((t.e.clone(), t.c.to_rat()?))).collect::<Result<Vec<_>>>()?;
        Poly::from_terms(self.field.field()?, vars, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FPartJson {
    #[serde(default)]
    pub c: RatJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DPartJson {
    pub deg: u8,
    #[serde(default)]
    pub c: RatJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletonJson {
    pub f: FPartJson,
    pub d: DPartJson,
}

/// Per-edge singleton data keyed by label.
pub type SingletonDataJson = BTreeMap<String, SingletonJson>;

pub fn singleton_data_of(s: &SingletonData) -> SingletonDataJson {
    s.entries()
        .map(|(l, x)| {
            let d = match &x.d {
                DPart::One => DPartJson { deg: 0, c: RatJson::Int(0) },
                DPart::Linear(c) => DPartJson { deg: 1, c: RatJson::of(c) },
            };
            (l.clone(), SingletonJson { f: FPartJson { c: RatJson::of(&x.f) }, d })
        })
        .collect()
}

pub fn singleton_data_build(j: &SingletonDataJson) -> Result<SingletonData> {
    let mut map = BTreeMap::new();
    for (l, s) in j {
        let d = match s.d.deg {
            0 => DPart::One,
            1 => DPart::Linear(s.d.c.to_rat()?),
            k => return input(format!("d-part degree {k} for {l}; only 0 or 1 allowed")),
        };
        map.insert(l.clone(), Singleton { f: s.f.c.to_rat()?, d });
    }
    Ok(SingletonData::new(map))
}

/// Chain ordered M_k … M_1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagJson {
    pub chain: Vec<MatroidJson>,
}

impl FlagJson {
    pub fn of(f: &FlagMatroid) -> FlagJson {
        FlagJson { chain: f.chain().iter().map(MatroidJson::of).collect() }
    }

    pub fn build(&self) -> Result<FlagMatroid> {
        FlagMatroid::new(self.chain.iter().map(MatroidJson::build).collect::<Result<_>>()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCoeffJson {
    pub basis: Vec<usize>,
    pub c: RatJson,
}

/// "ones" or an explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffsJson {
    Named(String),
    List(Vec<BasisCoeffJson>),
}

impl CoeffsJson {
    /// `None` stands for all ones.
    pub fn build(&self) -> Result<Option<BasisCoeffs>> {
        match self {
            CoeffsJson::Named(s) if s == "ones" => Ok(None),
            CoeffsJson::Named(s) => input(format!("unknown coefficient preset {s:?}")),
            CoeffsJson::List(l) => {
                let mut out = BasisCoeffs::new();
                for b in l {
                    if b.basis.iter().any(|&i| i >= 32) {
                        return input("basis index out of range");
                    }
                    if out.insert(mask_of(&b.basis), b.c.to_rat()?).is_some() {
                        return input(format!("basis {:?} listed twice", b.basis));
                    }
                }
                Ok(Some(out))
            }
        }
    }

    pub fn of(c: &BasisCoeffs) -> CoeffsJson {
        CoeffsJson::List(c.iter().map(|(&b, c)| BasisCoeffJson { basis: bits(b).collect(), c: RatJson::of(c) }).collect())
    }
}

/// Parses JSON text into `T`, mapping syntax errors to input errors.
pub fn from_str<T: serde::de::DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Input(format!("bad JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::basis_poly;
    use crate::matroid::uniform;

    #[test]
    fn matroid_round_trip() {
        let m = uniform(2, 4).unwrap();
        let j = serde_json::to_string(&MatroidJson::of(&m)).unwrap();
        let back: MatroidJson = from_str(&j).unwrap();
        assert_eq!(back.build().unwrap(), m);
    }

    #[test]
    fn poly_formats() {
        let p: PolyJson = from_str(r#"{"field":{"Fp":5},"vars":["x1","x1@1"],"terms":[{"c":"3/2","e":[1,0]},{"c":2,"e":[0,1]}]}"#).unwrap();
        let f = p.build().unwrap();
        assert_eq!(f.field(), Field::Fp(5));
        let again: PolyJson = from_str(&serde_json::to_string(&PolyJson::of(&f)).unwrap()).unwrap();
        assert_eq!(again.build().unwrap(), f);
        let q = PolyJson::of(&basis_poly(&uniform(2, 3).unwrap()));
        assert_eq!(serde_json::to_value(&q.field).unwrap(), serde_json::json!("Q"));
    }

    #[test]
    fn singleton_and_coeffs() {
        let j: SingletonDataJson = from_str(r#"{"x1":{"f":{"c":"1"},"d":{"deg":1,"c":"1"}},"x2":{"f":{"c":0},"d":{"deg":0}}}"#).unwrap();
        let s = singleton_data_build(&j).unwrap();
        assert_eq!(s.get("x1").unwrap().d, DPart::Linear(Rat::from_integer(1.into())));
        assert_eq!(singleton_data_build(&singleton_data_of(&s)).unwrap(), s);
        let c: CoeffsJson = from_str(r#""ones""#).unwrap();
        assert_eq!(c.build().unwrap(), None);
        let c: CoeffsJson = from_str(r#"[{"basis":[0,1],"c":"2"}]"#).unwrap();
        assert_eq!(c.build().unwrap().unwrap()[&3], Rat::from_integer(2.into()));
    }
}
