use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{input, Result};
use crate::matroid::Matroid;
use crate::poly::{Field, Poly, Rat};

/// d_e: either the constant 1 or x_e + c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DPart {
    One,
    Linear(Rat),
}

/// f_e = x_e + f, together with d_e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singleton {
    pub f: Rat,
    pub d: DPart,
}

/// Per-edge singleton data, keyed by edge label.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SingletonData {
    map: BTreeMap<String, Singleton>,
}

impl SingletonData {
    pub fn new(map: BTreeMap<String, Singleton>) -> SingletonData {
        SingletonData { map }
    }

    pub fn constant(labels: &[String], s: Singleton) -> SingletonData {
        SingletonData { map: labels.iter().map(|l| (l.clone(), s.clone())).collect() }
    }

    /// f_e = x_e, d_e = 1.
    pub fn standard(labels: &[String]) -> SingletonData {
        SingletonData::constant(labels, Singleton { f: Rat::zero(), d: DPart::One })
    }

    /// f_e = x_e, d_e = x_e + 1.
    pub fn shifted(labels: &[String]) -> SingletonData {
        SingletonData::constant(labels, Singleton { f: Rat::zero(), d: DPart::Linear(Rat::one()) })
    }

    pub fn get(&self, label: &str) -> Result<&Singleton> {
        match self.map.get(label) {
            Some(s) => Ok(s),
            None => input(format!("no singleton data for edge {label:?}")),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &Singleton)> {
        self.map.iter()
    }

    pub fn set(&mut self, label: &str, s: Singleton) {
        self.map.insert(label.to_string(), s);
    }

    pub fn covers(&self, m: &Matroid) -> Result<()> {
        for l in m.labels() {
            self.get(l)?;
        }
        Ok(())
    }

    pub fn f_poly(&self, field: Field, label: &str) -> Result<Poly> {
        Ok(Poly::linear(field, label, &self.get(label)?.f))
    }

    pub fn d_poly(&self, field: Field, label: &str) -> Result<Poly> {
        Ok(match &self.get(label)?.d {
            DPart::One => Poly::one(field),
            DPart::Linear(c) => Poly::linear(field, label, c),
        })
    }

    /// All f_e equal to x_e.
    pub fn is_plain(&self) -> bool {
        self.map.values().all(|s| s.f.is_zero())
    }
}
