use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{input, Result};
use crate::linalg::RatMatrix;
use crate::matroid::{bits, mask_of, Matroid};
use crate::poly::{fmt_rat, Field, Poly, Rat};

/// Coefficient per basis mask.
pub type BasisCoeffs = BTreeMap<u32, Rat>;

pub fn ones(m: &Matroid) -> BasisCoeffs {
    m.bases().iter().map(|&b| (b, Rat::one())).collect()
}

/// Σ c_B x^B over the bases of `m`; `None` gives the basis polynomial Ψ_M.
pub fn msp_build(m: &Matroid, field: Field, coeffs: Option<&BasisCoeffs>) -> Result<Poly> {
    let default;
    let coeffs = match coeffs {
        Some(c) => c,
        None => {
            default = ones(m);
            &default
        }
    };
    if let Some(k) = coeffs.keys().find(|k| !m.is_basis(**k)) {
        return input(format!("coefficient given for non-basis {:?}", bits(*k).collect_vec()));
    }
    let mut terms = Vec::with_capacity(m.bases().len());
    for &b in m.bases() {
        let Some(c) = coeffs.get(&b) else {
            return input(format!("missing coefficient for basis {:?}", bits(b).collect_vec()));
        };
        let r = field.reduce(c).filter(|r| !r.is_zero());
        let Some(r) = r else {
            return input(format!(
                "coefficient {} of basis {:?} vanishes in {field}",
                fmt_rat(c),
                bits(b).collect_vec()
            ));
        };
        terms.push((b, r));
    }
    Ok(Poly::from_masks(field, m.labels(), terms))
}

/// Ψ_M over Q.
pub fn basis_poly(m: &Matroid) -> Poly {
    msp_build(m, Field::Q, None).expect("all-ones coefficients")
}

/// Σ over spanning subsets A (rank A = rank M) of x^A.
pub fn maximal_rank_poly(m: &Matroid) -> Poly {
    let r = m.rank();
    let terms = (0..=m.ground())
        .filter(|&a| m.rank_of(a) == r)
        .map(|a| (a, Rat::one()));
    Poly::from_masks(Field::Q, m.labels(), terms)
}

/// det(A X Aᵀ) = Σ_B det(A_B)² x^B for a full-row-rank matrix.
pub fn configuration_poly(a: &RatMatrix) -> Result<Poly> {
    if a.cols() > 32 {
        return input("matrix has more than 32 columns");
    }
    if a.rank() != a.rows() {
        return input("configuration polynomial needs a full row rank matrix");
    }
    let labels = crate::graph::default_labels(a.cols());
    let terms = (0..a.cols())
        .combinations(a.rows())
        .filter_map(|c| {
            let d = a.columns(&c).det();
            (!d.is_zero()).then(|| (mask_of(&c), &d * &d))
        })
        .collect_vec();
    Ok(Poly::from_masks(Field::Q, &labels, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{graphic, uniform};
    use crate::Multigraph;

    fn x(l: &str) -> Poly {
        Poly::edge(Field::Q, l)
    }

    #[test]
    fn psi_examples() {
        let p = basis_poly(&uniform(2, 3).unwrap());
        let e = &(&(&x("x1") * &x("x2")) + &(&x("x1") * &x("x3"))) + &(&x("x2") * &x("x3"));
        assert_eq!(p, e);
        assert_eq!(basis_poly(&uniform(1, 2).unwrap()), &x("x1") + &x("x2"));
        let c4 = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let lin = Poly::sum(Field::Q, &[x("x1"), x("x2"), x("x3"), x("x4")]);
        assert_eq!(basis_poly(&graphic(&c4).unwrap().dual()), lin);
    }

    #[test]
    fn msp_rejects_bad_coefficients() {
        let m = uniform(1, 2).unwrap();
        let mut c = ones(&m);
        c.insert(0b01, Rat::zero());
        assert!(msp_build(&m, Field::Q, Some(&c)).is_err());
        let mut c = ones(&m);
        c.insert(0b11, Rat::one());
        assert!(msp_build(&m, Field::Q, Some(&c)).is_err());
        let mut c = ones(&m);
        c.remove(&0b10);
        assert!(msp_build(&m, Field::Q, Some(&c)).is_err());
        let mut c = ones(&m);
        c.insert(0b10, Rat::from_integer(3.into()));
        assert!(msp_build(&m, Field::Fp(3), Some(&c)).is_err());
    }

    #[test]
    fn maxrank_examples() {
        let u12 = maximal_rank_poly(&uniform(1, 2).unwrap());
        assert_eq!(u12, &(&x("x1") + &x("x2")) + &(&x("x1") * &x("x2")));
        assert_eq!(maximal_rank_poly(&uniform(2, 2).unwrap()), &x("x1") * &x("x2"));
        let u23 = maximal_rank_poly(&uniform(2, 3).unwrap());
        assert_eq!(u23.num_terms(), 4);
    }

    #[test]
    fn configuration_examples() {
        let a = RatMatrix::from_ints(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(configuration_poly(&a).unwrap(), basis_poly(&uniform(2, 3).unwrap()));
        let i2 = RatMatrix::from_ints(&[&[1, 0], &[0, 1]]);
        assert_eq!(configuration_poly(&i2).unwrap(), &x("x1") * &x("x2"));
        let bad = RatMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        assert!(configuration_poly(&bad).is_err());
    }
}
