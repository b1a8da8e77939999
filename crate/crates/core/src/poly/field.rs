use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input, Result};

pub type Rat = BigRational;

/// Coefficient field: the rationals or a prime field F_p with p < 2^16.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u32),
}

impl Field {
    pub fn fp(p: u32) -> Result<Field> {
        if p >= 1 << 16 {
            return input(format!("prime modulus {p} is not below 2^16"));
        }
        if !is_prime(p) {
            return input(format!("modulus {p} is not prime"));
        }
        Ok(Field::Fp(p))
    }

    pub fn modulus(self) -> Option<u32> {
        match self {
            Field::Q => None,
            Field::Fp(p) => Some(p),
        }
    }

    /// Maps a rational into this field; `None` when the denominator vanishes mod p.
    pub fn reduce(self, c: &Rat) -> Option<Rat> {
        match self {
            Field::Q => Some(c.clone()),
            Field::Fp(p) => {
                let pb = BigInt::from(p);
                let num = c.numer().mod_floor(&pb).to_u64()?;
                let den = c.denom().mod_floor(&pb).to_u64()?;
                if den == 0 {
                    return None;
                }
                let v = num * inv_mod(den, p as u64) % p as u64;
                Some(Rat::from_integer(BigInt::from(v)))
            }
        }
    }

    pub(crate) fn norm(self, c: Rat) -> Rat {
        match self {
            Field::Q => c,
            Field::Fp(_) => self
                .reduce(&c)
                .expect("coefficient denominator divisible by the characteristic"),
        }
    }

    pub(crate) fn add(self, a: &Rat, b: &Rat) -> Rat {
        self.norm(a + b)
    }

    pub(crate) fn mul(self, a: &Rat, b: &Rat) -> Rat {
        self.norm(a * b)
    }

    pub(crate) fn neg(self, a: &Rat) -> Rat {
        self.norm(-a)
    }

    pub fn inv(self, a: &Rat) -> Option<Rat> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Q => Some(a.recip()),
            Field::Fp(_) => self.reduce(&a.recip()),
        }
    }

    pub fn from_int(self, v: i64) -> Rat {
        self.norm(Rat::from_integer(BigInt::from(v)))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Residue of an integral rational mod p, or `None` if the denominator is not invertible.
pub(crate) fn rat_mod(c: &Rat, p: u32) -> Option<u64> {
    Field::Fp(p).reduce(c).and_then(|r| r.numer().to_u64())
}

/// Parses "3", "-2/7" or "0.5"-free rational literals.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || input(format!("not a rational number: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let (Ok(n), Ok(d)) = (n.trim().parse::<BigInt>(), d.trim().parse::<BigInt>()) else {
                return bad();
            };
            if d.is_zero() {
                return input(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(n, d))
        }
        None => t.parse::<BigInt>().map(Rat::from_integer).or_else(|_| bad()),
    }
}

pub fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub(crate) fn is_negative(c: &Rat) -> bool {
    c.is_negative()
}
